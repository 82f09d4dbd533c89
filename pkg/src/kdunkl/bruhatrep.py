"""The Bruhat representation of E_n on the group algebra Z<S_n>.

A generator [i j] (i < j) sends w to w t_ij when that is a Bruhat cover and
to 0 otherwise. Words act with the leftmost generator applied first, so
(g_1 g_2 ... g_k) w = g_k(...(g_1 w)). Evaluating Grothendieck polynomials
at the kappa operators gives the K-theoretic structure constants; Schubert
polynomials at the theta operators give the cohomological ones.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Optional

from .dunkl import CheckRecord, Report, kappa, theta
from .perm import Permutation, all_permutations, covers_up, parse_permutation
from .polyring import SparsePolynomial, grothendieck, kmonk_chains, monk_multiply, schubert
from .quadalg import FreeAlgebraElement, Gen, spec_En
from .quadalg.spec import normalize_relation

__all__ = [
    "GroupAlgebraVector",
    "LinearOperator",
    "RankMismatch",
    "act_generator",
    "act_element",
    "operator_of",
    "kappa_operator",
    "theta_operator",
    "operators_commute",
    "relations_annihilate",
    "reversal_preserves_relations",
    "reverse_words",
    "eval_at_kappa",
    "eval_at_theta",
    "structure_constants_dunkl",
    "structure_constants_cohomology",
    "constants_to_json",
    "constants_from_json",
    "constants_table",
    "verify_representation",
]


class RankMismatch(ValueError):
    """An element, permutation or polynomial does not live in rank n."""


def _sort_key(w: Permutation):
    return (w.length, w.word)


class GroupAlgebraVector:
    """Finite integer combination of permutations of a fixed rank n."""

    __slots__ = ("coefficients", "n")

    def __init__(self, coefficients: Optional[Mapping[Permutation, int]] = None, n: int = 0):
        coeffs = {}
        for w, c in (coefficients or {}).items():
            if c:
                if len(w) != n:
                    raise RankMismatch(f"{w} is not in S_{n}")
                coeffs[w] = c
        self.coefficients: dict[Permutation, int] = coeffs
        self.n = n

    @classmethod
    def basis(cls, w: Permutation) -> "GroupAlgebraVector":
        return cls({w: 1}, len(w))

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAlgebraVector):
            return NotImplemented
        return self.n == other.n and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.n, frozenset(self.coefficients.items())))

    def _check(self, other: "GroupAlgebraVector") -> None:
        if other.n != self.n:
            raise RankMismatch(f"cannot combine vectors of ranks {self.n} and {other.n}")

    def __add__(self, other: "GroupAlgebraVector") -> "GroupAlgebraVector":
        self._check(other)
        out = dict(self.coefficients)
        for w, c in other.coefficients.items():
            out[w] = out.get(w, 0) + c
        return GroupAlgebraVector(out, self.n)

    def __neg__(self) -> "GroupAlgebraVector":
        return GroupAlgebraVector({w: -c for w, c in self.coefficients.items()}, self.n)

    def __sub__(self, other: "GroupAlgebraVector") -> "GroupAlgebraVector":
        return self + (-other)

    def __mul__(self, c: int) -> "GroupAlgebraVector":
        return GroupAlgebraVector({w: a * c for w, a in self.coefficients.items()}, self.n)

    __rmul__ = __mul__

    def __getitem__(self, w: Permutation) -> int:
        return self.coefficients.get(w, 0)

    def sorted_items(self) -> list[tuple[Permutation, int]]:
        return sorted(self.coefficients.items(), key=lambda t: _sort_key(t[0]))

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for w, c in self.sorted_items():
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(("-" if c < 0 else "+") + mag + str(w))
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def __repr__(self) -> str:
        return f"GroupAlgebraVector({str(self)!r}, n={self.n})"


@dataclass(frozen=True)
class LinearOperator:
    """Matrix of an endomorphism of Z<S_n>, stored as images of basis vectors.

    ``images`` only holds nonzero columns; absent permutations map to 0.
    """
    images: Mapping[Permutation, GroupAlgebraVector]
    n: int

    @classmethod
    def zero(cls, n: int) -> "LinearOperator":
        return cls({}, n)

    @classmethod
    def identity(cls, n: int) -> "LinearOperator":
        return cls({w: GroupAlgebraVector.basis(w) for w in all_permutations(n)}, n)

    def column(self, w: Permutation) -> GroupAlgebraVector:
        return self.images.get(w) or GroupAlgebraVector({}, self.n)

    def apply(self, v: GroupAlgebraVector) -> GroupAlgebraVector:
        if v.n != self.n:
            raise RankMismatch(f"operator of rank {self.n} applied to a vector of rank {v.n}")
        out: dict[Permutation, int] = {}
        for w, c in v.coefficients.items():
            img = self.images.get(w)
            if img is None:
                continue
            for u, a in img.coefficients.items():
                out[u] = out.get(u, 0) + a * c
        return GroupAlgebraVector(out, self.n)

    def __call__(self, v: GroupAlgebraVector) -> GroupAlgebraVector:
        return self.apply(v)

    def compose(self, other: "LinearOperator") -> "LinearOperator":
        """self after other."""
        if other.n != self.n:
            raise RankMismatch("operators of different ranks")
        images = {}
        for w, img in other.images.items():
            out = self.apply(img)
            if out:
                images[w] = out
        return LinearOperator(images, self.n)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return self.compose(other)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        if other.n != self.n:
            raise RankMismatch("operators of different ranks")
        images = {}
        for w in set(self.images) | set(other.images):
            s = self.column(w) + other.column(w)
            if s:
                images[w] = s
        return LinearOperator(images, self.n)

    def __mul__(self, c: int) -> "LinearOperator":
        return LinearOperator({w: img * c for w, img in self.images.items() if c}, self.n)

    __rmul__ = __mul__

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return self + other * -1

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearOperator):
            return NotImplemented
        if self.n != other.n:
            return False
        keys = set(self.images) | set(other.images)
        return all(self.column(w) == other.column(w) for w in keys)

    def __hash__(self):
        return hash((self.n, frozenset((w, v) for w, v in self.images.items() if v)))

    def is_zero(self) -> bool:
        return not any(self.images.values())


# --------------------------------------------------------------------------
# Action


def _check_perm(w: Permutation, n: int) -> None:
    if len(w) != n:
        raise RankMismatch(f"{w} is not written in S_{n}")


def act_generator(i: int, j: int, w: Permutation) -> GroupAlgebraVector:
    """[i j] w: w t_ij if that covers w, else 0. [j i] acts as -[i j]."""
    n = len(w)
    if i == j:
        raise ValueError("[i i] is not a generator")
    a, b = min(i, j), max(i, j)
    if a < 1 or b > n:
        raise IndexError(f"generator [{i},{j}] out of range for S_{n}")
    if not covers_up(w, a, b):
        return GroupAlgebraVector({}, n)
    return GroupAlgebraVector({w.swap(a, b): 1 if i < j else -1}, n)


def _gen_ok(g: Gen, n: int) -> None:
    if not isinstance(g, Gen):
        raise RankMismatch(f"{g!r} is not a generator of E_n")
    if g.j > n:
        raise RankMismatch(f"generator {g} does not belong to E_{n}")


def act_element(e: FreeAlgebraElement, v: GroupAlgebraVector | Permutation, n: Optional[int] = None
                ) -> GroupAlgebraVector:
    """Apply ``e`` to ``v`` with the leftmost generator of each word acting first."""
    if isinstance(v, Permutation):
        v = GroupAlgebraVector.basis(v)
    n = n or v.n
    if v.n != n:
        raise RankMismatch(f"vector of rank {v.n} with element over E_{n}")
    out: dict[Permutation, int] = {}
    for word, c in e.terms.items():
        for g in word:
            _gen_ok(g, n)
        for w0, a in v.coefficients.items():
            cur = w0
            for g in word:
                if not covers_up(cur, g.i, g.j):
                    cur = None
                    break
                cur = cur.swap(g.i, g.j)
            if cur is not None:
                out[cur] = out.get(cur, 0) + c * a
    return GroupAlgebraVector(out, n)


def operator_of(e: FreeAlgebraElement, n: int) -> LinearOperator:
    """The matrix of ``e`` on Z<S_n>."""
    images = {}
    for w in all_permutations(n):
        img = act_element(e, GroupAlgebraVector.basis(w), n)
        if img:
            images[w] = img
    return LinearOperator(images, n)


def reverse_words(e: FreeAlgebraElement) -> FreeAlgebraElement:
    """Word reversal; use it to switch to the rightmost-first convention."""
    return e.reversed()


_op_lock = threading.Lock()
_kappa_ops: dict[tuple[int, int], LinearOperator] = {}
_theta_ops: dict[tuple[int, int], LinearOperator] = {}
_commute_ok: dict[tuple[str, int], bool] = {}


def kappa_operator(p: int, n: int) -> LinearOperator:
    with _op_lock:
        op = _kappa_ops.get((p, n))
    if op is None:
        op = operator_of(kappa(p, n).element, n)
        with _op_lock:
            _kappa_ops[(p, n)] = op
    return op


def theta_operator(p: int, n: int) -> LinearOperator:
    with _op_lock:
        op = _theta_ops.get((p, n))
    if op is None:
        op = operator_of(theta(p, n).element, n)
        with _op_lock:
            _theta_ops[(p, n)] = op
    return op


def operators_commute(n: int, flavor: str = "kappa") -> list[tuple[int, int]]:
    """Pairs (p, q) whose Dunkl operators fail to commute (empty when all commute)."""
    get = kappa_operator if flavor == "kappa" else theta_operator
    ops = [None] + [get(p, n) for p in range(1, n + 1)]
    bad = []
    for p, q in combinations(range(1, n + 1), 2):
        if ops[p] @ ops[q] != ops[q] @ ops[p]:
            bad.append((p, q))
    return bad


def relations_annihilate(n: int) -> list[tuple[str, Permutation]]:
    """(relation, w) pairs with r w != 0; empty when the action is well defined."""
    bad = []
    for r in spec_En(n).relations:
        for w in all_permutations(n):
            if act_element(r, GroupAlgebraVector.basis(w), n):
                bad.append((str(r), w))
    return bad


def reversal_preserves_relations(n: int) -> bool:
    """Word reversal maps the normalized relation set of E_n onto itself."""
    spec = spec_En(n)
    have = {frozenset(r.terms.items()) for r in spec.relations}
    return all(frozenset(normalize_relation(r.reversed(), spec.index).terms.items()) in have
               for r in spec.relations)


def _require_commuting(n: int, flavor: str) -> None:
    key = (flavor, n)
    with _op_lock:
        known = _commute_ok.get(key)
    if known is None:
        known = not operators_commute(n, flavor)
        with _op_lock:
            _commute_ok[key] = known
    if not known:
        raise ArithmeticError(f"{flavor} operators of rank {n} do not commute; substitution is ill-defined")


def _timed(check: str, params: dict, failures: list, report: Report, t0: float) -> None:
    status = "fail" if failures else "pass"
    detail = "; ".join(map(str, failures[:5]))
    report.records.append(CheckRecord(check, params, status, len(failures),
                                      round((time.perf_counter() - t0) * 1000, 3), "", detail))


def verify_representation(n: int) -> Report:
    """Well-definedness and Monk consistency of the Bruhat representation in rank n."""
    report = Report()
    t0 = time.perf_counter()
    _timed("rep-relations", {"n": n}, relations_annihilate(n), report, t0)
    t0 = time.perf_counter()
    _timed("rep-reversal", {"n": n}, [] if reversal_preserves_relations(n) else ["reversal"], report, t0)
    for flavor in ("kappa", "theta"):
        t0 = time.perf_counter()
        _timed("rep-commute", {"n": n, "flavor": flavor}, operators_commute(n, flavor), report, t0)
    for p in range(1, n + 1):
        t0 = time.perf_counter()
        bad = []
        kop, top = kappa_operator(p, n), theta_operator(p, n)
        for w in all_permutations(n):
            if kop.column(w).coefficients != kmonk_chains(p, w, rank=n):
                bad.append(("kappa", str(w)))
            if top.column(w).coefficients != monk_multiply(p, w, rank=n):
                bad.append(("theta", str(w)))
        _timed("rep-monk", {"n": n, "p": p}, bad, report, t0)
    return report


# --------------------------------------------------------------------------
# Evaluation and structure constants


def _evaluate(f: SparsePolynomial, v: Permutation | GroupAlgebraVector, n: int, flavor: str) -> GroupAlgebraVector:
    if isinstance(v, Permutation):
        _check_perm(v, n)
        v = GroupAlgebraVector.basis(v)
    elif v.n != n:
        raise RankMismatch(f"vector of rank {v.n} evaluated in rank {n}")
    if f.used_vars() > n:
        raise RankMismatch(f"polynomial uses x_{f.used_vars()} beyond rank {n}")
    _require_commuting(n, flavor)
    get = kappa_operator if flavor == "kappa" else theta_operator
    total = GroupAlgebraVector({}, n)
    for exps, c in f.terms.items():
        cur = v
        # the operators commute, so apply the highest variable first
        for p in range(len(exps), 0, -1):
            if exps[p - 1]:
                op = get(p, n)
                for _ in range(exps[p - 1]):
                    cur = op.apply(cur)
                    if not cur:
                        break
            if not cur:
                break
        if cur:
            total = total + cur * c
    return total


def eval_at_kappa(f: SparsePolynomial, v: Permutation | GroupAlgebraVector, n: int) -> GroupAlgebraVector:
    """f(kappa_1, ..., kappa_n) applied to v."""
    return _evaluate(f, v, n, "kappa")


def eval_at_theta(f: SparsePolynomial, v: Permutation | GroupAlgebraVector, n: int) -> GroupAlgebraVector:
    """f(theta_1, ..., theta_n) applied to v."""
    return _evaluate(f, v, n, "theta")


def _as_rank(w: Permutation, n: int) -> Permutation:
    if w.rank > n:
        raise RankMismatch(f"{w} is not in S_{n}")
    return w.embed(n)


def structure_constants_dunkl(u: Permutation, v: Permutation, n: Optional[int] = None) -> dict[Permutation, int]:
    """c_{uv}^w as the coefficient of w in G_u(kappa) v."""
    n = n or max(len(u), len(v))
    u, v = _as_rank(u, n), _as_rank(v, n)
    return dict(eval_at_kappa(grothendieck(u), v, n).coefficients)


def structure_constants_cohomology(u: Permutation, v: Permutation, n: Optional[int] = None
                                   ) -> dict[Permutation, int]:
    """Schubert structure constants: coefficient of w in S_u(theta) v, l(w) = l(u) + l(v)."""
    n = n or max(len(u), len(v))
    u, v = _as_rank(u, n), _as_rank(v, n)
    target = u.length + v.length
    out = eval_at_theta(schubert(u), v, n).coefficients
    return {w: c for w, c in out.items() if w.length == target}


def _sorted_constants(constants: Mapping[Permutation, int]) -> list[tuple[Permutation, int]]:
    return sorted(((w, c) for w, c in constants.items() if c), key=lambda t: _sort_key(t[0]))


def constants_to_json(u: Permutation, v: Permutation, n: int, method: str,
                      constants: Mapping[Permutation, int]) -> dict:
    return {
        "u": str(u),
        "v": str(v),
        "n": n,
        "method": method,
        "constants": [{"w": str(w), "c": c} for w, c in _sorted_constants(constants)],
    }


def constants_table(constants: Mapping[Permutation, int]) -> str:
    """One "w  length  c" line per constant, by length then word."""
    rows = _sorted_constants(constants)
    if not rows:
        return "(no constants)"
    width = max(len(str(w)) for w, _ in rows)
    return "\n".join(f"{str(w):<{width}}  l={w.length}  {c:+d}" for w, c in rows)


def constants_from_json(data: dict) -> dict[Permutation, int]:
    return {parse_permutation(t["w"]): int(t["c"]) for t in data["constants"]}
