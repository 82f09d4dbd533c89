"""Cone membership: nonnegative combinations of monomials modulo the ideal.

Feasibility is decided by a phase-1 simplex with exact rational pivots
(Bland's rule), over quotient coordinates given by normal forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

from ..linalg import ResourceCapExceeded
from .free import FreeAlgebraElement
from .membership import DEFAULT_CAP, MembershipCertificate, _ideal, ideal_membership
from .spec import QuadraticAlgebraSpec

__all__ = ["ConeCertificate", "ConeResult", "cone_membership", "feasible_nonnegative"]


def feasible_nonnegative(columns: list[dict], target: dict) -> Optional[list[Fraction]]:
    """Find x >= 0 with sum_j x_j * columns[j] == target, or None.

    Columns and target are sparse dicts over row keys; arithmetic is exact.
    """
    rows = sorted(set(target) | {k for col in columns for k in col})
    m, n = len(rows), len(columns)
    if m == 0:
        return [Fraction(0)] * n
    ridx = {k: i for i, k in enumerate(rows)}
    # tableau rows: [a_1 .. a_n | art_1 .. art_m | b]
    T = []
    for k in rows:
        i = ridx[k]
        row = [Fraction(col.get(k, 0)) for col in columns] + [Fraction(int(r == i)) for r in range(m)]
        row.append(Fraction(target.get(k, 0)))
        if row[-1] < 0:
            row = [-v for v in row]
            row[n + i] = Fraction(1)
        T.append(row)
    basis = [n + i for i in range(m)]
    width = n + m
    # phase-1 objective: minimize the sum of artificials, as reduced costs
    cost = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            if j < n or j == width:
                cost[j] -= T[i][j]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # unbounded cannot happen in phase 1
            break
        piv = T[leave][enter]
        T[leave] = [v / piv for v in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter]:
                f = T[i][enter]
                Ti, Tl = T[i], T[leave]
                T[i] = [a - f * b for a, b in zip(Ti, Tl)]
        f = cost[enter]
        cost = [a - f * b for a, b in zip(cost, T[leave])]
        basis[leave] = enter
    if cost[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][width]
        elif T[i][width] != 0:
            return None
    return x


@dataclass
class ConeCertificate:
    """element = sum(weight * word) + ideal part, per degree."""
    weights: dict[tuple, Fraction]
    ideal_part: MembershipCertificate
    element: FreeAlgebraElement = field(repr=False)

    @property
    def integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.weights.values())

    def verify(self) -> bool:
        if any(c < 0 for c in self.weights.values()):
            return False
        mono = FreeAlgebraElement({w: c for w, c in self.weights.items()})
        return mono + self.ideal_part.expand() == self.element


@dataclass
class ConeResult:
    status: str  # "certified" | "no-certificate" | "undecided"
    certificates: dict[int, ConeCertificate] = field(default_factory=dict)
    failing_degree: Optional[int] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.status == "certified"


SignProfile = Union[Callable[[int], int], Mapping[int, int], int]


def _sign(profile: SignProfile, d: int) -> int:
    if callable(profile):
        return profile(d)
    if isinstance(profile, Mapping):
        return profile.get(d, 1)
    return profile


def _positive_ratio(target: dict, col: dict) -> Optional[Fraction]:
    """c > 0 with target == c * col, if any."""
    if target.keys() != col.keys():
        return None
    ratios = {Fraction(target[k]) / col[k] for k in target}
    if len(ratios) != 1:
        return None
    r = ratios.pop()
    return r if r > 0 else None


def _word_columns(gi, spec: QuadraticAlgebraSpec, d: int, word_cap: int) -> list[tuple[tuple, dict]]:
    """Distinct nonzero normal forms of degree-d words, each with one word realizing it.

    Built one letter at a time from nf(u g) = nf(nf(u) g), so the work is
    bounded by the number of distinct normal forms rather than by A^d.
    """
    memo = spec._cache.setdefault("cone-columns", {})
    if d in memo:
        level = memo[d]
        if len(level) > word_cap:
            raise ResourceCapExceeded(f"degree {d}: more than {word_cap} distinct word normal forms")
        return level
    A = len(spec.alphabet)
    if d == 0:
        level = [((), {(): 1})]
    elif d == 1:
        level = [((a,), {(a,): 1}) for a in range(A)]
        if len(level) > word_cap:
            raise ResourceCapExceeded(f"degree 1: more than {word_cap} distinct word normal forms")
    else:
        level, seen = [], set()
        for u, nf in _word_columns(gi, spec, d - 1, word_cap):
            for a in range(A):
                ext = gi.reduce({w + (a,): c for w, c in nf.items()})[0]
                if not ext:
                    continue
                key = frozenset(ext.items())
                if key in seen:
                    continue
                seen.add(key)
                level.append((u + (a,), ext))
                if len(level) > word_cap:
                    raise ResourceCapExceeded(f"degree {d}: more than {word_cap} distinct word normal forms")
    memo[d] = level
    return level


def _certify(target: FreeAlgebraElement, weights: dict, spec: QuadraticAlgebraSpec, cap) -> Optional[ConeCertificate]:
    rest = target - FreeAlgebraElement(weights)
    res = ideal_membership(rest, spec, ring="integer", cap=cap)
    if res.status == "undecided":
        raise ResourceCapExceeded(res.detail)
    if not res:
        return None
    return ConeCertificate({w: Fraction(c) for w, c in weights.items() if c}, res.certificate, target)


def cone_membership(e: FreeAlgebraElement, spec: QuadraticAlgebraSpec, sign_profile: SignProfile = 1,
                    cap: Optional[int] = DEFAULT_CAP, word_cap: int = 200_000) -> ConeResult:
    """Check, degree by degree, that sign(d) * e_d is a nonnegative combination of words mod the ideal."""
    spec.check_element(e)
    gi = _ideal(spec, cap, track=False)
    result = ConeResult("certified")
    try:
        for d, piece in e.homogeneous_components().items():
            target = piece * _sign(sign_profile, d)
            if d >= 2:
                gi.ensure(d)
            enc = {spec.encode(w): c for w, c in target.terms.items()}
            nf_target = gi.reduce(enc)[0] if d >= 2 else enc
            if not nf_target:
                cert = _certify(target, {}, spec, cap)
                result.certificates[d] = cert
                continue
            columns: list[dict] = []
            words: list[tuple] = []
            for w, nf in _word_columns(gi, spec, d, word_cap):
                ratio = _positive_ratio(nf_target, nf)
                if ratio is not None:
                    columns, words = [nf], [w]
                    break
                columns.append(nf)
                words.append(w)
            x = feasible_nonnegative(columns, nf_target)
            if x is None:
                result.status = "no-certificate"
                result.failing_degree = d
                return result
            weights = {spec.decode(w): v for w, v in zip(words, x) if v}
            cert = _certify(target, weights, spec, cap)
            if cert is None:
                raise AssertionError("LP solution failed ideal re-check")
            result.certificates[d] = cert
    except ResourceCapExceeded as exc:
        result.status = "undecided"
        result.detail = str(exc)
    return result
