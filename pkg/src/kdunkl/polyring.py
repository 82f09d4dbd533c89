"""Exact integer polynomials, Schubert and Grothendieck polynomials.

Grothendieck polynomials are taken in the variables x_i = 1 - 1/y_i, with
G_{w0} = x_1^{m-1} x_2^{m-2} ... x_{m-1} and the isobaric operator
pi_i f = d_i((1 - x_{i+1}) f).
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from itertools import product as _cartesian
from typing import Callable, Iterable, Iterator, Mapping, Optional

from .linalg import Echelon
from .perm import Permutation, covers_up, from_code, lehmer_code

__all__ = [
    "SparsePolynomial",
    "BasisExpansion",
    "RankTooSmall",
    "var",
    "divided_difference",
    "isobaric_divided_difference",
    "schubert",
    "grothendieck",
    "schubert_from_top",
    "grothendieck_from_top",
    "expand_in_basis",
    "monk_multiply",
    "kmonk_chains",
    "structure_constants_poly",
    "set_polynomial_cache",
]


class RankTooSmall(ValueError):
    """The polynomial is not in the span of the basis indexed by S_N."""


def _pad(exps: tuple[int, ...], n: int) -> tuple[int, ...]:
    return exps + (0,) * (n - len(exps))


class SparsePolynomial:
    """Integer polynomial in x_1..x_nvars stored as {exponent tuple: coefficient}."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: Optional[Mapping[tuple[int, ...], int]] = None, nvars: Optional[int] = None):
        terms = dict(terms or {})
        n = max([len(e) for e in terms] + [nvars or 0])
        clean: dict[tuple[int, ...], int] = {}
        for e, c in terms.items():
            if c:
                e = _pad(tuple(e), n)
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self.nvars = n

    @classmethod
    def constant(cls, c: int, nvars: int = 0) -> "SparsePolynomial":
        return cls({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff: int = 1) -> "SparsePolynomial":
        exps = tuple(exps)
        return cls({exps: coeff}, len(exps))

    def extended(self, n: int) -> "SparsePolynomial":
        if n <= self.nvars:
            return self
        return SparsePolynomial({_pad(e, n): c for e, c in self.terms.items()}, n)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], int]]:
        return iter(self.terms.items())

    def _trimmed(self) -> dict:
        out = {}
        for e, c in self.terms.items():
            k = len(e)
            while k and not e[k - 1]:
                k -= 1
            out[e[:k]] = c
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = SparsePolynomial.constant(other)
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self._trimmed() == other._trimmed()

    def __hash__(self):
        return hash(frozenset(self._trimmed().items()))

    def __add__(self, other) -> "SparsePolynomial":
        if isinstance(other, int):
            other = SparsePolynomial.constant(other)
        n = max(self.nvars, other.nvars)
        out = dict(self.extended(n).terms)
        for e, c in other.extended(n).terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return SparsePolynomial(out, n)

    __radd__ = __add__

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other) -> "SparsePolynomial":
        if isinstance(other, int):
            other = SparsePolynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "SparsePolynomial":
        return (-self) + other

    def __mul__(self, other) -> "SparsePolynomial":
        if isinstance(other, int):
            return SparsePolynomial({e: c * other for e, c in self.terms.items()}, self.nvars)
        n = max(self.nvars, other.nvars)
        a, b = self.extended(n).terms, other.extended(n).terms
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePolynomial(out, n)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePolynomial":
        out = SparsePolynomial.constant(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def low_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def homogeneous_component(self, d: int) -> "SparsePolynomial":
        return SparsePolynomial({e: c for e, c in self.terms.items() if sum(e) == d}, self.nvars)

    def lowest_component(self) -> "SparsePolynomial":
        return self.homogeneous_component(self.low_degree())

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def used_vars(self) -> int:
        """Largest index i with x_i occurring (0 for constants)."""
        best = 0
        for e in self.terms:
            for i in range(len(e), best, -1):
                if e[i - 1]:
                    best = i
                    break
        return best

    def swap_vars(self, i: int) -> "SparsePolynomial":
        """s_i f: exchange x_i and x_{i+1}."""
        f = self.extended(i + 1)
        out = {}
        for e, c in f.terms.items():
            e = list(e)
            e[i - 1], e[i] = e[i], e[i - 1]
            out[tuple(e)] = c
        return SparsePolynomial(out, f.nvars)

    def evaluate(self, values: Mapping[int, object] | list) -> object:
        total = 0
        for e, c in self.terms.items():
            term = c
            for i, a in enumerate(e):
                if a:
                    term = term * values[i] ** a
            total = total + term
        return total

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms by degree, then reverse-lexicographic exponent order."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), [-a for a in t[0]]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"x{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+") + body)
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def __repr__(self) -> str:
        return f"SparsePolynomial({str(self)!r})"

    def to_json(self) -> list[dict]:
        return [{"coeff": str(c), "exps": list(e)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: list[dict]) -> "SparsePolynomial":
        return cls({tuple(t["exps"]): int(t["coeff"]) for t in data})

    @classmethod
    def parse(cls, text: str) -> "SparsePolynomial":
        """Parse e.g. ``"x1+x2-x1*x2"`` or ``"-3*x1^2*x3+1"``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        total = cls()
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            coeff, exps = 1, {}
            for factor in body.split("*"):
                m = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor)
                if m:
                    i = int(m.group(1))
                    if i < 1:
                        raise ValueError(f"bad variable {factor!r}")
                    exps[i] = exps.get(i, 0) + int(m.group(2) or 1)
                elif factor.isdigit():
                    coeff *= int(factor)
                else:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
            n = max(exps, default=0)
            e = tuple(exps.get(i, 0) for i in range(1, n + 1))
            total = total + cls({e: coeff if sign == "+" else -coeff}, n)
        if re.sub(r"[+-][^+-]+", "", s):
            raise ValueError(f"cannot parse {text!r}")
        return total


def var(i: int, nvars: Optional[int] = None) -> SparsePolynomial:
    """The variable x_i."""
    n = max(i, nvars or 0)
    return SparsePolynomial.monomial(tuple(1 if k == i else 0 for k in range(1, n + 1)))


def divided_difference(f: SparsePolynomial, i: int) -> SparsePolynomial:
    """d_i f = (f - s_i f) / (x_i - x_{i+1}), computed monomial by monomial."""
    if i < 1:
        raise ValueError(f"bad index {i}")
    f = f.extended(i + 1)
    out: dict[tuple[int, ...], int] = {}
    for e, c in f.terms.items():
        a, b = e[i - 1], e[i]
        if a == b:
            continue
        # (x^a y^b - x^b y^a)/(x - y) = sign * sum_k x^{hi-1-k} y^{lo+k}
        sign, hi, lo = (1, a, b) if a > b else (-1, b, a)
        base = list(e)
        for k in range(hi - lo):
            base[i - 1], base[i] = hi - 1 - k, lo + k
            t = tuple(base)
            out[t] = out.get(t, 0) + sign * c
    return SparsePolynomial(out, f.nvars)


def isobaric_divided_difference(f: SparsePolynomial, i: int) -> SparsePolynomial:
    """pi_i f = d_i((1 - x_{i+1}) f)."""
    f = f.extended(i + 1)
    return divided_difference(f - f * var(i + 1, f.nvars), i)


# --------------------------------------------------------------------------
# Schubert and Grothendieck polynomials

_memo: dict[tuple[str, tuple[int, ...]], SparsePolynomial] = {}
_memo_lock = threading.Lock()
_disk_cache = None


def set_polynomial_cache(cache):
    """Install an on-disk cache with ``get(kind, w, rank)`` / ``put(kind, w, rank, poly)``.

    Pass None to disable it. Returns the previously installed cache.
    """
    global _disk_cache
    previous, _disk_cache = _disk_cache, cache
    return previous


def _key(w: Permutation) -> tuple[int, ...]:
    return w.embed(w.rank).word


def _staircase(m: int) -> SparsePolynomial:
    return SparsePolynomial.monomial(tuple(m - i for i in range(1, m)) or (0,))


def _is_dominant(code: tuple[int, ...]) -> bool:
    return all(a >= b for a, b in zip(code, code[1:]))


def _generate(kind: str, w: Permutation) -> SparsePolynomial:
    op = divided_difference if kind == "schubert" else isobaric_divided_difference
    w = w.embed(w.rank)
    key = (kind, w.word)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    if _disk_cache is not None:
        hit = _disk_cache.get(kind, w, w.rank)
        if hit is not None:
            with _memo_lock:
                _memo[key] = hit
            return hit
    code = lehmer_code(w)
    if _is_dominant(code):
        # dominant permutations: both families are the monomial x^code
        result = SparsePolynomial.monomial(code[:-1] or (0,))
    else:
        i = next(k for k in range(1, len(code)) if code[k - 1] < code[k])
        result = op(_generate(kind, w.swap(i, i + 1)), i)
    with _memo_lock:
        _memo.setdefault(key, result)
    if _disk_cache is not None:
        _disk_cache.put(kind, w, w.rank, result)
    return result


def schubert(w: Permutation) -> SparsePolynomial:
    return _generate("schubert", w)


def grothendieck(w: Permutation) -> SparsePolynomial:
    return _generate("grothendieck", w)


def _from_top(kind: str, w: Permutation, m: Optional[int], choose: Callable[[list[int]], int]) -> SparsePolynomial:
    op = divided_difference if kind == "schubert" else isobaric_divided_difference
    m = m or w.rank
    w = w.embed(m)
    # climb to w0 recording the operators, then apply them in reverse
    path = []
    cur = w
    while cur.length < m * (m - 1) // 2:
        ascents = [i for i in range(1, m) if cur.word[i - 1] < cur.word[i]]
        i = choose(ascents)
        path.append(i)
        cur = cur.swap(i, i + 1)
    f = _staircase(m)
    for i in reversed(path):
        f = op(f, i)
    return f


def schubert_from_top(w: Permutation, m: Optional[int] = None,
                      choose: Callable[[list[int]], int] = min) -> SparsePolynomial:
    """S_w by divided differences from the staircase of S_m along the chosen ascents."""
    return _from_top("schubert", w, m, choose)


def grothendieck_from_top(w: Permutation, m: Optional[int] = None,
                          choose: Callable[[list[int]], int] = min) -> SparsePolynomial:
    """G_w by isobaric divided differences from the staircase of S_m."""
    return _from_top("grothendieck", w, m, choose)


# --------------------------------------------------------------------------
# Basis expansion


@dataclass
class BasisExpansion:
    coefficients: dict[Permutation, int]
    basis: str
    N: int = 0

    def __post_init__(self):
        self.coefficients = {w: c for w, c in self.coefficients.items() if c}

    def as_words(self) -> dict[str, int]:
        return {str(w): c for w, c in self.sorted_items()}

    def sorted_items(self) -> list[tuple[Permutation, int]]:
        return sorted(self.coefficients.items(), key=lambda t: (t[0].length, t[0].word))

    def restricted(self, n: int) -> dict[Permutation, int]:
        """Coefficients of permutations lying in S_n, embedded in S_n."""
        return {w.embed(n): c for w, c in self.coefficients.items() if w.rank <= n}

    def reconstruct(self) -> SparsePolynomial:
        gen = schubert if self.basis == "schubert" else grothendieck
        total = SparsePolynomial()
        for w, c in self.coefficients.items():
            total = total + gen(w) * c
        return total


def _codes(N: int, k: int, d: int) -> Iterator[tuple[int, ...]]:
    bounds = [range(min(N - i, d) + 1) for i in range(1, k + 1)]
    for code in _cartesian(*bounds):
        if sum(code) == d:
            yield code


_solvers: dict[tuple[int, int, int], tuple[Echelon, dict]] = {}


def _schubert_solver(N: int, k: int, d: int) -> tuple[Echelon, dict]:
    """Echelon form of {S_w : w in S_N, descents <= k, l(w) = d} over monomials."""
    key = (N, k, d)
    hit = _solvers.get(key)
    if hit is not None:
        return hit
    ech = Echelon(integral=True)
    tags = {}
    for code in _codes(N, k, d):
        w = from_code(code, N)
        tags[w] = w
        ech.add({e[:k] + (0,) * (k - len(e[:k])): c for e, c in schubert(w).extended(k).terms.items()}, w)
    _solvers[key] = (ech, tags)
    return ech, tags


def _solve_schubert(f: SparsePolynomial, N: int) -> dict[Permutation, int]:
    """Expand a homogeneous polynomial in the Schubert basis of S_N."""
    if not f:
        return {}
    k = max(f.used_vars(), 1)
    if k > N - 1 and f.used_vars() > 0:
        raise RankTooSmall(f"x_{k} does not occur in Schubert polynomials of S_{N}")
    d = f.degree()
    ech, _ = _schubert_solver(N, k, d)
    vec = {e[:k] + (0,) * (k - len(e[:k])): c for e, c in f.extended(k).terms.items()}
    rem, combo = ech.reduce(vec)
    if rem:
        raise RankTooSmall(f"degree-{d} component not in the span of Schubert polynomials of S_{N}")
    return {w: c for w, c in combo.items() if c}


def expand_in_basis(f: SparsePolynomial, basis: str, N: int) -> BasisExpansion:
    """Exact expansion of ``f`` in the Schubert or Grothendieck basis indexed by S_N.

    Schubert: each homogeneous component is solved separately. Grothendieck:
    the lowest component is solved in the Schubert basis, the matching
    Grothendieck polynomials are subtracted, and the process repeats.
    Raises :class:`RankTooSmall` when S_N does not suffice.
    """
    if basis not in ("schubert", "grothendieck"):
        raise ValueError(f"unknown basis {basis!r}")
    coeffs: dict[Permutation, int] = {}
    if basis == "schubert":
        for d in sorted({sum(e) for e in f.terms}):
            for w, c in _solve_schubert(f.homogeneous_component(d), N).items():
                coeffs[w] = coeffs.get(w, 0) + c
        return BasisExpansion(coeffs, basis, N)
    residual = f
    while residual:
        low = residual.lowest_component()
        step = _solve_schubert(low, N)
        for w, c in step.items():
            coeffs[w] = coeffs.get(w, 0) + c
            residual = residual - grothendieck(w) * c
        if residual and residual.low_degree() <= low.degree():
            raise AssertionError("lowest degree failed to increase during peeling")
    return BasisExpansion(coeffs, basis, N)


# --------------------------------------------------------------------------
# Monk and K-theoretic Monk rules


def _ambient(p: int, v: Permutation, rank: Optional[int]) -> Permutation:
    m = rank or max(v.rank, p) + 1
    return v.embed(m)


def monk_multiply(p: int, v: Permutation, rank: Optional[int] = None) -> dict[Permutation, int]:
    """x_p S_v as a signed sum of Schubert indices (Monk's rule).

    ``v`` is embedded in S_rank (default max(rank(v), p) + 1, which holds
    every cover).
    """
    v = _ambient(p, v, rank)
    m = len(v)
    out: dict[Permutation, int] = {}
    for i in range(1, m + 1):
        if i == p:
            continue
        a, b = min(i, p), max(i, p)
        if covers_up(v, a, b):
            w = v.swap(a, b)
            out[w] = out.get(w, 0) + (-1 if i < p else 1)
    return {w: c for w, c in out.items() if c}


def kmonk_chains(p: int, v: Permutation, rank: Optional[int] = None) -> dict[Permutation, int]:
    """x_p G_v as a signed sum over the chain set Pi_p(v).

    Chains v -> v t_{i_1 p} -> ... use labels i_1 > ... > i_r below p, then
    i_{r+1} > ... > i_{r+s} above p, each step a Bruhat cover; the sign is
    (-1)^(s+1).
    """
    v = _ambient(p, v, rank)
    m = len(v)
    below = list(range(p - 1, 0, -1))
    above = list(range(m, p, -1))
    labels = below + above
    out: dict[Permutation, int] = {}

    def extend(cur: Permutation, start: int, s: int, nonempty: bool):
        if nonempty:
            sign = 1 if s % 2 else -1
            out[cur] = out.get(cur, 0) + sign
        for k in range(start, len(labels)):
            i = labels[k]
            a, b = min(i, p), max(i, p)
            if covers_up(cur, a, b):
                extend(cur.swap(a, b), k + 1, s + (i > p), True)

    extend(v, 0, 0, False)
    return {w: c for w, c in out.items() if c}


def structure_constants_poly(u: Permutation, v: Permutation, max_rank: Optional[int] = None) -> BasisExpansion:
    """Grothendieck structure constants c_{uv}^w from G_u * G_v.

    The ambient S_N starts at max(rank u, rank v) and grows until the
    expansion exists.
    """
    prod = grothendieck(u) * grothendieck(v)
    N = max(u.rank, v.rank, 2)
    cap = max_rank or prod.degree() + max(u.rank, v.rank) + 1
    while True:
        try:
            return expand_in_basis(prod, "grothendieck", N)
        except RankTooSmall:
            if N >= cap:
                raise RankTooSmall(f"no expansion of G_{u}*G_{v} found up to S_{cap}")
            N += 1
