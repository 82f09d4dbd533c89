"""Sparse elements of free associative algebras over the integers."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "Gen",
    "Letter",
    "FreeAlgebraElement",
    "bracket",
    "commutator",
    "lemma2_expand",
    "STAR",
]

Scalar = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class Gen:
    """Generator [i j] of E_n with i < j; [j i] is represented as -[i j]."""
    i: int
    j: int

    def __post_init__(self):
        if not self.i < self.j:
            raise ValueError(f"generator [{self.i},{self.j}] must have i < j")

    def __str__(self) -> str:
        return f"[{self.i},{self.j}]"


@dataclass(frozen=True, order=True)
class Letter:
    """Letter of E_X: kind 0 is ``i``, kind 1 is ``i'``, kind 2 is ``*``."""
    kind: int
    index: int = 0

    def __str__(self) -> str:
        if self.kind == 2:
            return "*"
        return f"{self.index}" + ("'" if self.kind == 1 else "")


STAR = Letter(2, 0)

Word = tuple


def _clean(terms: Mapping) -> dict:
    out = {}
    for w, c in terms.items():
        if c:
            if isinstance(c, Fraction) and c.denominator == 1:
                c = c.numerator
            out[tuple(w)] = c
    return out


class FreeAlgebraElement:
    """Linear combination of words; multiplication is concatenation."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | None = None):
        self.terms: dict[Word, Scalar] = _clean(terms or {})

    @classmethod
    def one(cls) -> "FreeAlgebraElement":
        return cls({(): 1})

    @classmethod
    def word(cls, *symbols: Hashable, coeff: Scalar = 1) -> "FreeAlgebraElement":
        return cls({tuple(symbols): coeff})

    # -- arithmetic ---------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Word, Scalar]]:
        return iter(self.terms.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = FreeAlgebraElement({(): other})
        if not isinstance(other, FreeAlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other) -> "FreeAlgebraElement":
        if isinstance(other, (int, Fraction)):
            return FreeAlgebraElement({(): other})
        return other

    def __add__(self, other) -> "FreeAlgebraElement":
        other = self._coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return FreeAlgebraElement(out)

    __radd__ = __add__

    def __neg__(self) -> "FreeAlgebraElement":
        return FreeAlgebraElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "FreeAlgebraElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "FreeAlgebraElement":
        return (-self) + other

    def __mul__(self, other) -> "FreeAlgebraElement":
        if isinstance(other, (int, Fraction)):
            return FreeAlgebraElement({w: c * other for w, c in self.terms.items()})
        out: dict[Word, Scalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return FreeAlgebraElement(out)

    def __rmul__(self, other) -> "FreeAlgebraElement":
        if isinstance(other, (int, Fraction)):
            return self * other
        return self._coerce(other) * self

    def __pow__(self, k: int) -> "FreeAlgebraElement":
        out = FreeAlgebraElement.one()
        for _ in range(k):
            out = out * self
        return out

    # -- grading ------------------------------------------------------------

    def degrees(self) -> list[int]:
        return sorted({len(w) for w in self.terms})

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def graded_component(self, d: int) -> "FreeAlgebraElement":
        return FreeAlgebraElement({w: c for w, c in self.terms.items() if len(w) == d})

    def homogeneous_components(self) -> dict[int, "FreeAlgebraElement"]:
        return {d: self.graded_component(d) for d in self.degrees()}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def symbols(self) -> set:
        return {s for w in self.terms for s in w}

    def reversed(self) -> "FreeAlgebraElement":
        """Word reversal (an anti-automorphism of the free algebra)."""
        return FreeAlgebraElement({w[::-1]: c for w, c in self.terms.items()})

    def map_symbols(self, table: Mapping[Hashable, "FreeAlgebraElement"]) -> "FreeAlgebraElement":
        """Substitute each symbol by an element (an algebra homomorphism)."""
        total = FreeAlgebraElement()
        for w, c in self.terms.items():
            term = FreeAlgebraElement({(): c})
            for s in w:
                term = term * table[s]
            total = total + term
        return total

    # -- text ---------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Word, Scalar]]:
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        letters = any(isinstance(s, Letter) for s in self.symbols())
        for w, c in self.sorted_terms():
            mag = abs(c)
            body = _word_text(w)
            if not w:
                body = f"({mag})" if letters else str(mag)
            elif mag != 1:
                body = f"({mag}){body}"
            parts.append(("-" if c < 0 else "+") + body)
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def __repr__(self) -> str:
        return f"FreeAlgebraElement({str(self)!r})"

    def to_json(self) -> dict:
        return {"terms": [{"coeff": str(c), "word": [str(s) for s in w]} for w, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data: dict) -> "FreeAlgebraElement":
        terms: dict = {}
        for t in data["terms"]:
            sign, word = 1, []
            for tok in t["word"]:
                s, sym = _parse_symbol(tok)
                sign *= s
                word.append(sym)
            c = Fraction(t["coeff"])
            terms[tuple(word)] = terms.get(tuple(word), 0) + sign * c
        return cls(terms)

    @classmethod
    def parse(cls, text: str) -> "FreeAlgebraElement":
        """Parse ``"-[1,3][1,2]+[1,2][2,3]"`` or E_X words such as ``"*11'*-(2)1'1"``.

        A bracket [j,i] with j > i is read as -[i,j]. Bare integers are
        constants next to bracket words; in E_X text a constant is ``(c)``.
        """
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty element")
        if s[0] not in "+-":
            s = "+" + s
        total = cls()
        pos = 0
        bracket_mode = "[" in s
        term_re = re.compile(r"([+-])(?:\((\d+(?:/\d+)?)\))?((?:\[\d+,\d+\]|\d'?|\*)*)")
        while pos < len(s):
            m = term_re.match(s, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse {text!r} at {pos}")
            sign_txt, mag, body = m.groups()
            coeff: Scalar = Fraction(mag) if mag else 1
            if sign_txt == "-":
                coeff = -coeff
            word = []
            if bracket_mode and body.isdigit():
                # bare integer constant next to bracket words
                total = total + cls({(): int(body) * (1 if sign_txt == "+" else -1)})
                pos = m.end()
                continue
            for tok in re.findall(r"\[\d+,\d+\]|\d'?|\*", body):
                sgn, sym = _parse_symbol(tok)
                coeff *= sgn
                word.append(sym)
            if not body and not mag:
                raise ValueError(f"empty term in {text!r}")
            # "(c)" with an empty body is the constant c
            total = total + cls({tuple(word): coeff})
            pos = m.end()
        return total


def _word_text(w: Word) -> str:
    return "".join(str(s) for s in w)


def _parse_symbol(tok: str):
    tok = tok.strip()
    if tok == "*":
        return 1, STAR
    m = re.fullmatch(r"\[(\d+),(\d+)\]", tok)
    if m:
        i, j = int(m.group(1)), int(m.group(2))
        if i == j:
            raise ValueError(f"bad generator {tok}")
        return (1, Gen(i, j)) if i < j else (-1, Gen(j, i))
    m = re.fullmatch(r"(\d+)('?)", tok)
    if m:
        return 1, Letter(1 if m.group(2) else 0, int(m.group(1)))
    raise ValueError(f"bad symbol {tok!r}")


def bracket(i: int, j: int) -> FreeAlgebraElement:
    """The generator [i j] of E_n, using [j i] = -[i j]."""
    if i == j:
        raise ValueError("[i i] is not a generator")
    return FreeAlgebraElement.word(Gen(i, j)) if i < j else FreeAlgebraElement.word(Gen(j, i), coeff=-1)


def commutator(a: FreeAlgebraElement, b: FreeAlgebraElement) -> FreeAlgebraElement:
    return a * b - b * a


def _interleave(blocks: Sequence[FreeAlgebraElement], factors: Sequence[FreeAlgebraElement]) -> FreeAlgebraElement:
    out = blocks[0]
    for f, blk in zip(factors, blocks[1:]):
        out = out * f * blk
    return out


def lemma2_expand(factors: Sequence[tuple[FreeAlgebraElement, FreeAlgebraElement]],
                  interleave: Sequence[FreeAlgebraElement] | None = None
                  ) -> tuple[FreeAlgebraElement, FreeAlgebraElement]:
    """Both sides of the inclusion-exclusion expansion of a product of x_k = u_k + v_k.

    ``interleave`` holds the m+1 fixed blocks placed before, between and
    after the factors. Returns (lhs, rhs) with
    rhs = B v_1 B ... v_m B + sum over nonempty I of (-1)^(|I|+1) times the
    product with u_k for k in I and x_k elsewhere.
    """
    m = len(factors)
    blocks = list(interleave) if interleave is not None else [FreeAlgebraElement.one()] * (m + 1)
    if len(blocks) != m + 1:
        raise ValueError(f"need {m + 1} interleave blocks, got {len(blocks)}")
    xs = [u + v for u, v in factors]
    lhs = _interleave(blocks, xs)
    rhs = _interleave(blocks, [v for _, v in factors])
    for size in range(1, m + 1):
        sign = 1 if size % 2 else -1
        for subset in combinations(range(m), size):
            ys = [factors[k][0] if k in subset else xs[k] for k in range(m)]
            rhs = rhs + _interleave(blocks, ys) * sign
    return lhs, rhs
