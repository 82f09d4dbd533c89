"""Presentations of graded algebras by homogeneous quadratic relations."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations, permutations
from math import gcd
from typing import Hashable, Iterable, Sequence

from .free import STAR, FreeAlgebraElement, Gen, Letter, bracket

__all__ = ["QuadraticAlgebraSpec", "spec_En", "spec_EX", "normalize_relation"]


def normalize_relation(r: FreeAlgebraElement, order: dict) -> FreeAlgebraElement:
    """Primitive integer multiple of ``r`` with positive leading coefficient."""
    if not r:
        return r
    coeffs = list(r.terms.values())
    den = reduce(lambda a, b: a * b // gcd(a, b),
                 (c.denominator for c in coeffs if isinstance(c, Fraction)), 1)
    ints = {w: int(c * den) for w, c in r.terms.items()}
    g = reduce(gcd, (abs(c) for c in ints.values()))
    lead = max(ints, key=lambda w: tuple(order[s] for s in w))
    sign = 1 if ints[lead] > 0 else -1
    return FreeAlgebraElement({w: sign * c // g for w, c in ints.items()})


class QuadraticAlgebraSpec:
    """An alphabet with a list of degree-2 relations.

    Relations are stored primitive, sign-normalized and deduplicated, in
    deterministic order.
    """

    def __init__(self, alphabet: Sequence[Hashable], relations: Iterable[FreeAlgebraElement], name: str = ""):
        self.alphabet = tuple(alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("repeated alphabet symbol")
        self.index = {s: k for k, s in enumerate(self.alphabet)}
        self.name = name
        seen = set()
        rels = []
        for r in relations:
            if not r:
                continue
            for w, c in r.terms.items():
                if len(w) != 2:
                    raise ValueError(f"relation {r} is not homogeneous of degree 2")
                if any(s not in self.index for s in w):
                    raise ValueError(f"relation {r} uses symbols outside the alphabet")
                if isinstance(c, Fraction) and c.denominator != 1:
                    raise ValueError(f"relation {r} has non-integer coefficients")
            r = normalize_relation(r, self.index)
            key = frozenset(r.terms.items())
            if key not in seen:
                seen.add(key)
                rels.append(r)
        rels.sort(key=lambda r: sorted((self.encode(w), c) for w, c in r.terms.items())[::-1])
        self.relations: tuple[FreeAlgebraElement, ...] = tuple(rels)
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"QuadraticAlgebraSpec({self.name!r}, {len(self.alphabet)} letters, {len(self.relations)} relations)"

    def encode(self, word: Sequence[Hashable]) -> tuple[int, ...]:
        return tuple(self.index[s] for s in word)

    def decode(self, word: Sequence[int]) -> tuple:
        return tuple(self.alphabet[k] for k in word)

    def check_element(self, e: FreeAlgebraElement) -> None:
        bad = {s for s in e.symbols() if s not in self.index}
        if bad:
            raise ValueError(f"symbols {sorted(map(str, bad))} are not in the alphabet of {self.name}")

    def restrict(self, symbols: Iterable[Hashable], name: str = "") -> "QuadraticAlgebraSpec":
        """Sub-presentation on ``symbols`` keeping relations supported there.

        Its ideal is contained in the ideal of ``self``, so membership there
        implies membership here.
        """
        keep = set(symbols)
        alphabet = [s for s in self.alphabet if s in keep]
        rels = [r for r in self.relations if r.symbols() <= keep]
        return QuadraticAlgebraSpec(alphabet, rels, name or f"{self.name}|{len(alphabet)}")

    def sorted_element_terms(self, e: FreeAlgebraElement):
        return sorted(e.terms.items(), key=lambda t: (len(t[0]), self.encode(t[0])))


@lru_cache(maxsize=None)
def spec_En(n: int) -> QuadraticAlgebraSpec:
    """E_n on generators [i j], i < j, with [j i] = -[i j] built in."""
    if n < 2:
        raise ValueError("E_n needs n >= 2")
    alphabet = [Gen(i, j) for i, j in combinations(range(1, n + 1), 2)]
    rels = [FreeAlgebraElement.word(g, g) for g in alphabet]
    for triple in combinations(range(1, n + 1), 3):
        for i, j, k in permutations(triple):
            rels.append(bracket(i, j) * bracket(j, k) + bracket(j, k) * bracket(k, i) + bracket(k, i) * bracket(i, j))
    for g, h in combinations(alphabet, 2):
        if len({g.i, g.j, h.i, h.j}) == 4:
            rels.append(FreeAlgebraElement.word(g, h) - FreeAlgebraElement.word(h, g))
    return QuadraticAlgebraSpec(alphabet, rels, f"E_{n}")


def spec_EX(X: Iterable[int]) -> QuadraticAlgebraSpec:
    """E_X on letters i, i' (i in X) and *.

    The letters p' and q are not separate symbols: they stand for +* and -*.
    """
    return _spec_EX(tuple(sorted(set(X))))


@lru_cache(maxsize=None)
def _spec_EX(X: tuple[int, ...]) -> QuadraticAlgebraSpec:
    if not X:
        raise ValueError("E_X needs a nonempty X")
    plain = [Letter(0, i) for i in X]
    prime = [Letter(1, i) for i in X]
    alphabet = plain + prime + [STAR]
    w = FreeAlgebraElement.word
    rels = [w(a, a) for a in alphabet]
    for i in X:
        a, b = Letter(0, i), Letter(1, i)
        rels.append(w(a, b) - w(STAR, a) + w(b, STAR))
        rels.append(w(b, a) - w(a, STAR) + w(STAR, b))
    for i in X:
        for j in X:
            if i != j:
                rels.append(w(Letter(0, i), Letter(1, j)) - w(Letter(1, j), Letter(0, i)))
    name = "E_{" + ",".join(map(str, X)) + "}"
    return QuadraticAlgebraSpec(alphabet, rels, name)
