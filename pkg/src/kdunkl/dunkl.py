"""Dunkl elements theta_p and K-theoretic Dunkl elements kappa_p in E_n.

Also the building blocks of the commutation proof: the products pi(p, A),
restricted commutators, the sums Sigma(X, d) in E_X, and the drivers that
certify the resulting identities through ideal membership.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional, Sequence

from .perm import Permutation, all_permutations, circular_sort
from .polyring import SparsePolynomial, grothendieck, schubert
from .quadalg import (
    DEFAULT_CAP,
    ConeResult,
    STAR,
    FreeAlgebraElement,
    Letter,
    MembershipResult,
    QuadraticAlgebraSpec,
    bracket,
    commutator,
    cone_membership,
    ideal_membership,
    normal_form,
    spec_En,
    spec_EX,
)

__all__ = [
    "DunklElement",
    "pi_element",
    "kappa",
    "kappa_product_form",
    "theta",
    "admissible_pairs",
    "restricted_commutator",
    "local_spec",
    "pi_EX",
    "pi_prime_EX",
    "sigma_sum_EX",
    "ex_to_en",
    "starstar",
    "CheckRecord",
    "Report",
    "verify_commutation",
    "verify_sum_zero",
    "verify_lemma1",
    "verify_starstar",
    "symmetric_probe",
    "evaluate_at_dunkl",
    "check_nonnegativity",
]


@dataclass(frozen=True)
class DunklElement:
    element: FreeAlgebraElement
    p: int
    n: int
    flavor: str  # "theta" | "kappa"

    def __str__(self) -> str:
        return str(self.element)


def _el(x) -> FreeAlgebraElement:
    return x.element if isinstance(x, DunklElement) else x


def _check_p(p: int, n: int) -> None:
    if not (1 <= p <= n):
        raise ValueError(f"index {p} outside 1..{n}")


def pi_element(p: int, A: Iterable[int], n: int) -> FreeAlgebraElement:
    """[i_1 p][i_2 p]...[i_k p] over A in circular order around p."""
    seq = circular_sort(A, p, n)
    out = FreeAlgebraElement.one()
    for i in seq:
        out = out * bracket(i, p)
    return out


def _subsets(items: Sequence[int], nonempty: bool = True) -> Iterator[tuple[int, ...]]:
    for k in range(1 if nonempty else 0, len(items) + 1):
        yield from combinations(items, k)


def kappa(p: int, n: int) -> DunklElement:
    """kappa_p = -sum over nonempty A of pi(p, A)."""
    _check_p(p, n)
    others = [i for i in range(1, n + 1) if i != p]
    total = FreeAlgebraElement()
    for A in _subsets(others):
        total = total - pi_element(p, A, n)
    return DunklElement(total, p, n, "kappa")


def kappa_product_form(p: int, n: int) -> FreeAlgebraElement:
    """1 - (1+[p-1,p])...(1+[1,p])(1+[n,p])...(1+[p+1,p])."""
    _check_p(p, n)
    prod = FreeAlgebraElement.one()
    for i in list(range(p - 1, 0, -1)) + list(range(n, p, -1)):
        prod = prod * (FreeAlgebraElement.one() + bracket(i, p))
    return FreeAlgebraElement.one() - prod


def theta(p: int, n: int) -> DunklElement:
    """theta_p = -sum_{i<p} [i p] + sum_{k>p} [p k]."""
    _check_p(p, n)
    total = FreeAlgebraElement()
    for i in range(1, p):
        total = total - bracket(i, p)
    for k in range(p + 1, n + 1):
        total = total + bracket(p, k)
    return DunklElement(total, p, n, "theta")


# --------------------------------------------------------------------------
# Restricted commutators and Sigma(X, d)


def _check_restricted(p: int, q: int, X: set, d: int, n: Optional[int]) -> None:
    if p == q:
        raise ValueError("p and q must differ")
    if not X:
        raise ValueError("X must be nonempty")
    if p in X or q in X:
        raise ValueError(f"X={sorted(X)} must avoid p={p} and q={q}")
    if n is not None and any(not (1 <= i <= n) for i in X | {p, q}):
        raise ValueError(f"indices must lie in 1..{n}")
    if not (len(X) <= d <= 2 * len(X) + 2):
        raise ValueError(f"d={d} outside [{len(X)}, {2 * len(X) + 2}]")


def admissible_pairs(p: int, q: int, X: Iterable[int], d: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs (A, B): X within A|B within X|{p,q}, |A|+|B| = d, both nonempty, p not in A, q not in B."""
    X = set(X)
    a_pool = sorted(X | {q})
    b_pool = sorted(X | {p})
    out = []
    for A in _subsets(a_pool):
        for B in _subsets(b_pool):
            if len(A) + len(B) == d and X <= set(A) | set(B):
                out.append((A, B))
    return out


def restricted_commutator(p: int, q: int, X: Iterable[int], d: int, n: int) -> FreeAlgebraElement:
    """Sum of [pi(p, A), pi(q, B)] over the admissible pairs."""
    X = set(X)
    _check_restricted(p, q, X, d, n)
    total = FreeAlgebraElement()
    for A, B in admissible_pairs(p, q, X, d):
        total = total + commutator(pi_element(p, A, n), pi_element(q, B, n))
    return total


def local_spec(n: int, p: int, q: int, X: Iterable[int]) -> QuadraticAlgebraSpec:
    """E_n relations among the generators [i p], [i q] (i in X) and [p q]."""
    return _local_spec(n, p, q, tuple(sorted(set(X))))


@lru_cache(maxsize=None)
def _local_spec(n: int, p: int, q: int, X: tuple[int, ...]) -> QuadraticAlgebraSpec:
    syms = set()
    for i in X:
        syms |= bracket(i, p).symbols() | bracket(i, q).symbols()
    syms |= bracket(p, q).symbols()
    return spec_En(n).restrict(syms, name=f"E_{n}|p={p},q={q},X={sorted(set(X))}")


def _default_pq(X: set, p: Optional[int], q: Optional[int], n: Optional[int]) -> tuple[int, int, int]:
    top = max(X)
    p = p if p is not None else top + 1
    q = q if q is not None else max(top, p) + 1
    n = n if n is not None else max(X | {p, q})
    return p, q, n


def pi_EX(A: Iterable[int], p: int, q: int, n: int) -> FreeAlgebraElement:
    """pi(A) = i_1...i_s in circular order around p; the letter for q is -*."""
    out = FreeAlgebraElement.one()
    for i in circular_sort(A, p, n):
        out = out * (FreeAlgebraElement.word(STAR, coeff=-1) if i == q else FreeAlgebraElement.word(Letter(0, i)))
    return out


def pi_prime_EX(B: Iterable[int], p: int, q: int, n: int) -> FreeAlgebraElement:
    """pi'(B) = j_1'...j_t' in circular order around q; the letter p' is +*."""
    out = FreeAlgebraElement.one()
    for j in circular_sort(B, q, n):
        out = out * (FreeAlgebraElement.word(STAR) if j == p else FreeAlgebraElement.word(Letter(1, j)))
    return out


def sigma_sum_EX(X: Iterable[int], d: int, p: Optional[int] = None, q: Optional[int] = None,
                 n: Optional[int] = None) -> FreeAlgebraElement:
    """Sigma(X, d) = sum of [pi(A), pi'(B)] in the free algebra on X, X', *.

    p, q, n fix where the markers sit in the circular order; by default
    p = max(X)+1, q = p+1, n = q.
    """
    X = set(X)
    p, q, n = _default_pq(X, p, q, n)
    _check_restricted(p, q, X, d, n)
    total = FreeAlgebraElement()
    for A, B in admissible_pairs(p, q, X, d):
        total = total + commutator(pi_EX(A, p, q, n), pi_prime_EX(B, p, q, n))
    return total


def ex_to_en(e: FreeAlgebraElement, p: int, q: int) -> FreeAlgebraElement:
    """The homomorphism E_X -> E_n: i -> [i p], i' -> [i q], * -> [p q]."""
    table = {}
    for s in e.symbols():
        if s == STAR:
            table[s] = bracket(p, q)
        elif s.kind == 0:
            table[s] = bracket(s.index, p)
        else:
            table[s] = bracket(s.index, q)
    return e.map_symbols(table)


def starstar(order: Sequence[int], primed_first: bool = False) -> FreeAlgebraElement:
    """*i_1 i_1' ... i_s i_s'* (or *i_1' i_1 ... i_s' i_s*)."""
    out = FreeAlgebraElement.word(STAR)
    for i in order:
        a, b = Letter(0, i), Letter(1, i)
        out = out * (FreeAlgebraElement.word(b, a) if primed_first else FreeAlgebraElement.word(a, b))
    return out * FreeAlgebraElement.word(STAR)


# --------------------------------------------------------------------------
# Verification drivers


_PASS = ("member", "certified", "pass")


@dataclass
class CheckRecord:
    check: str
    params: dict
    # member | not-member | undecided for ideal checks, certified | no-certificate |
    # undecided for cone checks, pass | fail for direct comparisons
    status: str
    certificate_size: int = 0
    elapsed_ms: float = 0.0
    ring: str = ""
    detail: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


@dataclass
class Report:
    records: list[CheckRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status in _PASS for r in self.records)

    @property
    def undecided(self) -> bool:
        return any(r.status == "undecided" for r in self.records)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if r.status not in _PASS]

    def to_jsonl(self) -> str:
        return "\n".join(r.to_json() for r in self.records)

    def extend(self, other: "Report") -> None:
        self.records.extend(other.records)
        self.notes.extend(other.notes)


def _record(check: str, params: dict, e: FreeAlgebraElement, spec: QuadraticAlgebraSpec,
            cap: Optional[int], verify: bool = True) -> tuple[CheckRecord, MembershipResult]:
    res = ideal_membership(e, spec, cap=cap)
    if res and verify and not res.certificate.verify(e):
        raise AssertionError(f"{check} {params}: certificate failed to re-expand")
    rec = CheckRecord(check, params, res.status, res.certificate_size, round(res.elapsed_ms, 3),
                      res.ring, res.detail)
    return rec, res


def verify_commutation(n: int, mode: Optional[str] = None, cap: Optional[int] = DEFAULT_CAP,
                       ordered: bool = False) -> Report:
    """Certify that the kappa_p commute in E_n.

    full: [kappa_p, kappa_q] lies in the ideal, for every pair p < q.
    restricted: every restricted commutator lies in the ideal generated by
    the E_n relations among its own generators, and every Sigma(X, d) with
    the same data vanishes in E_X. Default: full for n <= 4.
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    mode = mode or ("full" if n <= 4 else "restricted")
    report = Report()
    if mode == "full":
        spec = spec_En(n)
        kap = [None] + [kappa(p, n).element for p in range(1, n + 1)]
        for p, q in combinations(range(1, n + 1), 2):
            e = commutator(kap[p], kap[q])
            rec, _ = _record("commute", {"n": n, "p": p, "q": q}, e, spec, cap)
            report.records.append(rec)
        return report
    if mode != "restricted":
        raise ValueError(f"unknown mode {mode!r}")
    pairs = permutations(range(1, n + 1), 2) if ordered else combinations(range(1, n + 1), 2)
    for p, q in pairs:
        rest = [i for i in range(1, n + 1) if i not in (p, q)]
        for X in _subsets(rest):
            spec = local_spec(n, p, q, X)
            ex_spec = spec_EX(X)
            for d in range(len(X), 2 * len(X) + 3):
                params = {"n": n, "p": p, "q": q, "X": list(X), "d": d}
                e = restricted_commutator(p, q, X, d, n)
                rec, _ = _record("restricted-commutator", params, e, spec, cap)
                report.records.append(rec)
                s = sigma_sum_EX(X, d, p, q, n)
                rec, _ = _record("sigma-EX", params, s, ex_spec, cap)
                report.records.append(rec)
    return report


def verify_sum_zero(n: int, cap: Optional[int] = DEFAULT_CAP) -> Report:
    """Certify that kappa_1 + ... + kappa_n lies in the ideal of E_n."""
    if n < 2:
        raise ValueError("n >= 2 required")
    total = FreeAlgebraElement()
    for p in range(1, n + 1):
        total = total + kappa(p, n).element
    rec, _ = _record("sum-zero", {"n": n}, total, spec_En(n), cap)
    report = Report([rec])
    if not total:
        report.notes.append("identically zero")
    return report


def verify_lemma1(X: Iterable[int], d: Optional[int] = None, p: Optional[int] = None, q: Optional[int] = None,
                  n: Optional[int] = None, cap: Optional[int] = DEFAULT_CAP) -> Report:
    """Certify Sigma(X, d) = 0 in E_X (all admissible d when d is None)."""
    X = set(X)
    p, q, n = _default_pq(X, p, q, n)
    spec = spec_EX(X)
    degrees = [d] if d is not None else range(len(X), 2 * len(X) + 3)
    report = Report()
    for dd in degrees:
        s = sigma_sum_EX(X, dd, p, q, n)
        rec, _ = _record("sigma-EX", {"X": sorted(X), "d": dd, "p": p, "q": q, "n": n}, s, spec, cap)
        report.records.append(rec)
        if not s:
            report.notes.append(f"Sigma(X, {dd}) is identically zero in the free algebra")
    return report


def verify_starstar(s: int, cap: Optional[int] = DEFAULT_CAP, all_orders: bool = True) -> Report:
    """Certify *i_1 i_1'...i_s i_s'* = 0 and *i_1' i_1...i_s' i_s* = 0 in E_X, X = {1..s}."""
    if s < 1:
        raise ValueError("s >= 1 required")
    X = list(range(1, s + 1))
    spec = spec_EX(X)
    orders = permutations(X) if all_orders else [tuple(X)]
    report = Report()
    for order in orders:
        for primed in (False, True):
            e = starstar(order, primed)
            rec, _ = _record("starstar", {"s": s, "order": list(order), "primed_first": primed}, e, spec, cap)
            report.records.append(rec)
    return report


def _elementary(k: int, elems: list[FreeAlgebraElement], reverse: bool) -> FreeAlgebraElement:
    total = FreeAlgebraElement()
    for S in combinations(range(len(elems)), k):
        idx = reversed(S) if reverse else S
        prod = FreeAlgebraElement.one()
        for i in idx:
            prod = prod * elems[i]
        total = total + prod
    return total


def symmetric_probe(k: int, n: int, cap: Optional[int] = DEFAULT_CAP) -> Report:
    """Membership report for e_k(kappa_1, ..., kappa_n), products in ascending index order.

    The descending order is compared after reduction modulo the ideal and
    any difference is noted. Exploratory: non-members are reported only.
    """
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    spec = spec_En(n)
    kap = [kappa(p, n).element for p in range(1, n + 1)]
    e = _elementary(k, kap, reverse=False)
    rec, _ = _record("symmetric", {"k": k, "n": n}, e, spec, cap)
    report = Report([rec])
    alt = _elementary(k, kap, reverse=True)
    if alt != e:
        same = not normal_form(e - alt, spec, cap)
        report.notes.append("product order matters in the free algebra; "
                            + ("orders agree modulo the ideal" if same else "ORDERS DIFFER modulo the ideal"))
    return report


def evaluate_at_dunkl(f: SparsePolynomial, n: int, flavor: str = "kappa") -> FreeAlgebraElement:
    """f(kappa_1, ..., kappa_n) (or theta) in the free algebra.

    Each monomial x_1^a_1 x_2^a_2 ... becomes kappa_1^a_1 kappa_2^a_2 ...,
    in ascending index order. Other orders agree modulo the ideal because
    the Dunkl elements commute there.
    """
    if f.used_vars() > n:
        raise ValueError(f"polynomial uses x_{f.used_vars()} beyond rank {n}")
    make = kappa if flavor == "kappa" else theta
    base = {p: make(p, n).element for p in range(1, n + 1)}
    powers: dict[tuple[int, int], FreeAlgebraElement] = {}

    def power(p: int, a: int) -> FreeAlgebraElement:
        if (p, a) not in powers:
            powers[(p, a)] = base[p] ** a
        return powers[(p, a)]

    total = FreeAlgebraElement()
    for exps, c in f.terms.items():
        term = FreeAlgebraElement({(): c})
        for p, a in enumerate(exps, start=1):
            if a:
                term = term * power(p, a)
        total = total + term
    return total


def check_nonnegativity(n: int, w: Optional[Permutation] = None, theory: str = "k",
                        cap: Optional[int] = DEFAULT_CAP, word_cap: int = 200_000) -> Report:
    """Cone checks for G_w(kappa) (theory "k") or S_w(theta) (theory "cohomology").

    For K-theory the kth graded piece is multiplied by (-1)^(k - l(w)).
    Runs over all of S_n unless ``w`` is given.
    """
    if theory not in ("k", "cohomology"):
        raise ValueError(f"unknown theory {theory!r}")
    spec = spec_En(n)
    perms = [w.embed(n)] if w is not None else list(all_permutations(n))
    report = Report()
    for u in perms:
        start = time.perf_counter()
        if theory == "k":
            e = evaluate_at_dunkl(grothendieck(u), n, "kappa")
            lw = u.length
            res: ConeResult = cone_membership(e, spec, lambda k, lw=lw: (-1) ** ((k - lw) % 2), cap, word_cap)
        else:
            e = evaluate_at_dunkl(schubert(u), n, "theta")
            res = cone_membership(e, spec, 1, cap, word_cap)
        elapsed = (time.perf_counter() - start) * 1000
        if not all(c.verify() for c in res.certificates.values()):
            raise AssertionError(f"cone certificate for {u} failed to re-expand")
        size = sum(len(c.weights) + len(c.ideal_part) for c in res.certificates.values())
        integral = all(c.integral for c in res.certificates.values())
        detail = res.detail
        if res.status == "certified":
            detail = "integer weights" if integral else "rational weights"
        elif res.failing_degree is not None:
            detail = f"no certificate in degree {res.failing_degree}"
        params = {"n": n, "w": str(u), "theory": theory}
        report.records.append(CheckRecord("nonneg", params, res.status, size, round(elapsed, 3), "", detail))
    return report
