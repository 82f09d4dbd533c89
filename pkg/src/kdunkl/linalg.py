"""Exact sparse row echelon forms over the integers or the rationals.

Rows are dicts ``column -> coefficient``. Each stored pivot row remembers
the combination of inserted rows (by tag) that produced it, so reductions
come with a witness.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Hashable, Optional

__all__ = ["Echelon", "xgcd", "add_scaled", "ResourceCapExceeded"]


class ResourceCapExceeded(RuntimeError):
    """Raised when an exact computation would exceed its configured size cap."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) > 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def add_scaled(target: dict, source: dict, factor) -> None:
    """In place: target += factor * source, dropping zeros."""
    if not factor:
        return
    for key, val in source.items():
        new = target.get(key, 0) + factor * val
        if new:
            target[key] = new
        else:
            target.pop(key, None)


def _scaled(row: dict, factor) -> dict:
    return {k: factor * v for k, v in row.items()} if factor else {}


def _combine(r1: dict, f1, r2: dict, f2) -> dict:
    out = _scaled(r1, f1)
    add_scaled(out, r2, f2)
    return out


def _normalize_fraction(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


class Echelon:
    """Incremental echelon form with distinct leading columns.

    In integral mode the row Z-span is preserved exactly (unimodular gcd
    steps, Hermite style), so :meth:`reduce` decides integer membership.
    In rational mode pivots are scaled to 1.
    """

    def __init__(self, integral: bool = True, key: Optional[Callable[[Any], Any]] = None,
                 track: bool = True, cap: Optional[int] = None):
        self.integral = integral
        self.key = key
        self.track = track
        self.cap = cap
        self.pivots: dict[Hashable, tuple[dict, dict]] = {}
        self.entries = 0

    def __len__(self) -> int:
        return len(self.pivots)

    def _lead(self, row: dict):
        return max(row, key=self.key) if self.key else max(row)

    def _charge(self, n: int) -> None:
        self.entries += n
        if self.cap is not None and self.entries > self.cap:
            raise ResourceCapExceeded(f"echelon exceeded {self.cap} stored entries")

    def add(self, row: dict, tag: Hashable = None, combo: Optional[dict] = None) -> bool:
        """Insert a row; return True if the rank grew."""
        row = {k: v for k, v in row.items() if v}
        combo = dict(combo) if combo is not None else ({tag: 1} if self.track else {})
        while row:
            c = self._lead(row)
            b = row[c]
            if c not in self.pivots:
                if not self.integral:
                    inv = Fraction(1, 1) / b
                    row = {k: _normalize_fraction(v * inv) for k, v in row.items()}
                    combo = {k: _normalize_fraction(v * inv) for k, v in combo.items()}
                elif b < 0:
                    row = _scaled(row, -1)
                    combo = _scaled(combo, -1)
                self.pivots[c] = (row, combo)
                self._charge(len(row) + len(combo))
                return True
            prow, pcombo = self.pivots[c]
            a = prow[c]
            if not self.integral or b % a == 0:
                f = Fraction(b, a) if not self.integral else b // a
                f = _normalize_fraction(f)
                add_scaled(row, prow, -f)
                add_scaled(combo, pcombo, -f)
                continue
            g, s, t = xgcd(a, b)
            new_p = _combine(prow, s, row, t)
            new_pc = _combine(pcombo, s, combo, t)
            row = _combine(prow, b // g, row, -(a // g))
            combo = _combine(pcombo, b // g, combo, -(a // g))
            self.pivots[c] = (new_p, new_pc)
            self._charge(len(new_p) + len(new_pc))
        return False

    def reduce(self, vec: dict) -> tuple[dict, dict]:
        """Return (remainder, combination) with vec = sum(coef * row[tag]) + remainder.

        The remainder is zero iff vec lies in the row span (Z-span in
        integral mode).
        """
        vec = {k: v for k, v in vec.items() if v}
        remainder: dict = {}
        combo: dict = {}
        while vec:
            c = self._lead(vec)
            b = vec[c]
            piv = self.pivots.get(c)
            if piv is None:
                remainder[c] = vec.pop(c)
                continue
            prow, pcombo = piv
            a = prow[c]
            if self.integral:
                if b % a:
                    q = b // a
                    add_scaled(vec, prow, -q)
                    add_scaled(combo, pcombo, q)
                    remainder[c] = vec.pop(c)
                    continue
                f = b // a
            else:
                f = _normalize_fraction(Fraction(b) / a)
            add_scaled(vec, prow, -f)
            add_scaled(combo, pcombo, f)
        return remainder, combo
