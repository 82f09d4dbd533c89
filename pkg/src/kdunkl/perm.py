"""Permutations of S_m in one-line notation (1-based).

Right multiplication acts on positions: ``v * t_ij`` swaps the entries at
positions ``i`` and ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations as _permutations
from typing import Iterable, Iterator, Optional, Sequence

__all__ = [
    "Permutation",
    "CircularSequence",
    "right_transposition",
    "length",
    "is_cover",
    "lehmer_code",
    "from_code",
    "circular_sort",
    "is_circular",
    "all_permutations",
    "parse_permutation",
]


@dataclass(frozen=True, order=True)
class Permutation:
    word: tuple[int, ...]

    def __post_init__(self):
        word = tuple(int(a) for a in self.word)
        if sorted(word) != list(range(1, len(word) + 1)):
            raise ValueError(f"not a permutation of 1..{len(word)}: {word}")
        object.__setattr__(self, "word", word)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def longest(cls, m: int) -> "Permutation":
        return cls(tuple(range(m, 0, -1)))

    @property
    def m(self) -> int:
        return len(self.word)

    def __len__(self) -> int:
        return len(self.word)

    def __call__(self, i: int) -> int:
        """Value at position ``i``; fixed beyond the ambient rank."""
        return self.word[i - 1] if i <= len(self.word) else i

    @cached_property
    def length(self) -> int:
        w = self.word
        return sum(1 for a in range(len(w)) for b in range(a + 1, len(w)) if w[a] > w[b])

    @property
    def rank(self) -> int:
        """Smallest m with self in S_m."""
        r = len(self.word)
        while r > 1 and self.word[r - 1] == r:
            r -= 1
        return max(r, 1)

    def embed(self, m: int) -> "Permutation":
        if m < self.rank:
            raise ValueError(f"cannot restrict {self} to S_{m}")
        if m <= len(self.word):
            return Permutation(self.word[:m])
        return Permutation(self.word + tuple(range(len(self.word) + 1, m + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.word)
        for pos, val in enumerate(self.word, start=1):
            inv[val - 1] = pos
        return Permutation(tuple(inv))

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition (self * other)(i) = self(other(i))."""
        m = max(len(self.word), len(other.word))
        return Permutation(tuple(self(other(i)) for i in range(1, m + 1)))

    def descents(self) -> list[int]:
        w = self.word
        return [i for i in range(1, len(w)) if w[i - 1] > w[i]]

    def swap(self, i: int, j: int) -> "Permutation":
        return right_transposition(self, i, j)

    def __str__(self) -> str:
        if len(self.word) <= 9:
            return "".join(map(str, self.word))
        return ",".join(map(str, self.word))

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"


def parse_permutation(text: str) -> Permutation:
    """Parse ``"312"`` or ``"3,1,2,10,..."``."""
    text = text.strip()
    if "," in text:
        return Permutation(tuple(int(t) for t in text.split(",")))
    if not text.isdigit():
        raise ValueError(f"bad permutation text: {text!r}")
    return Permutation(tuple(int(c) for c in text))


def right_transposition(v: Permutation, i: int, j: int) -> Permutation:
    m = len(v.word)
    if not (1 <= i < j <= m):
        raise IndexError(f"transposition ({i},{j}) out of range for S_{m}")
    w = list(v.word)
    w[i - 1], w[j - 1] = w[j - 1], w[i - 1]
    return Permutation(tuple(w))


def length(w: Permutation) -> int:
    return w.length


def is_cover(v: Permutation, w: Permutation) -> Optional[tuple[int, int]]:
    """The label (i, j) of a Bruhat cover v < w = v*t_ij, or None."""
    if len(v.word) != len(w.word) or w.length != v.length + 1:
        return None
    diff = [k + 1 for k, (a, b) in enumerate(zip(v.word, w.word)) if a != b]
    if len(diff) != 2:
        return None
    i, j = diff
    if v.word[i - 1] != w.word[j - 1] or v.word[j - 1] != w.word[i - 1]:
        return None
    return (i, j)


def covers_up(v: Permutation, i: int, j: int) -> bool:
    """True if v*t_ij has length l(v)+1 (i < j, positions within rank)."""
    a, b = v.word[i - 1], v.word[j - 1]
    if a > b:
        return False
    return not any(a < v.word[k] < b for k in range(i, j - 1))


def lehmer_code(w: Permutation) -> tuple[int, ...]:
    word = w.word
    return tuple(
        sum(1 for b in range(a + 1, len(word)) if word[b] < word[a])
        for a in range(len(word))
    )


def from_code(code: Sequence[int], m: Optional[int] = None) -> Permutation:
    """Inverse of :func:`lehmer_code`; pads with zeros up to rank ``m``."""
    code = list(code)
    m = max(m or 0, max((i + 1 + c for i, c in enumerate(code)), default=1))
    code += [0] * (m - len(code))
    avail = list(range(1, m + 1))
    word = []
    for c in code:
        if c >= len(avail):
            raise ValueError(f"invalid Lehmer code {tuple(code)}")
        word.append(avail.pop(c))
    return Permutation(tuple(word))


def all_permutations(n: int) -> Iterator[Permutation]:
    """All of S_n in lexicographic order of one-line words."""
    for word in _permutations(range(1, n + 1)):
        yield Permutation(word)


@dataclass(frozen=True)
class CircularSequence:
    elements: tuple[int, ...]
    pivot: int
    n: int

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    @property
    def below(self) -> tuple[int, ...]:
        return tuple(i for i in self.elements if i < self.pivot)

    @property
    def above(self) -> tuple[int, ...]:
        return tuple(i for i in self.elements if i > self.pivot)


def circular_sort(A: Iterable[int], p: int, n: int) -> CircularSequence:
    """Order ``A`` as i_1 > ... > i_r (all < p) then i_{r+1} > ... > i_{r+s} (all > p)."""
    A = set(A)
    if not A:
        raise ValueError("empty set")
    if p in A:
        raise ValueError(f"pivot {p} lies in {sorted(A)}")
    if any(not (1 <= i <= n) for i in A) or not (1 <= p <= n):
        raise ValueError(f"elements of {sorted(A)} or pivot {p} outside 1..{n}")
    return CircularSequence(tuple(sorted(A, key=lambda i: (p - i) % n)), p, n)


def is_circular(seq: Sequence[int], p: int) -> bool:
    """The predicate C(i_1, ..., i_k, p)."""
    seq = list(seq)
    if p in seq or len(set(seq)) != len(seq):
        return False
    k = 0
    while k < len(seq) and seq[k] < p:
        k += 1
    lo, hi = seq[:k], seq[k:]
    if any(x < p for x in hi):
        return False
    dec = lambda xs: all(a > b for a, b in zip(xs, xs[1:]))
    return dec(lo) and dec(hi)
