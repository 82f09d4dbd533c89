"""Exact membership in the two-sided ideal of a quadratic presentation.

The ideal is graded, so each homogeneous piece is decided on its own. Two
engines are available:

``groebner``
    a homogeneous Groebner basis truncated at the needed degree (deglex
    order: length first, then generator index). Every basis element carries
    its expression through the defining relations, so reductions yield
    certificates directly.
``macaulay``
    the spanning set {u r v} of the degree-d ideal component placed in an
    integer echelon form (gcd row steps), deciding Z-span membership.

Certificates are always checked by plain re-expansion.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from ..linalg import Echelon, ResourceCapExceeded, add_scaled
from .free import FreeAlgebraElement
from .spec import QuadraticAlgebraSpec

__all__ = [
    "MembershipCertificate",
    "MembershipResult",
    "GradedIdeal",
    "ideal_membership",
    "graded_component",
    "normal_form",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 2_000_000

Key = tuple  # (left word, relation index, right word), words as index tuples


def graded_component(e: FreeAlgebraElement, d: int) -> FreeAlgebraElement:
    return e.graded_component(d)


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


@dataclass
class MembershipCertificate:
    """Witness sum(coeff * left * relation * right) for an element of the ideal."""
    combination: list[tuple[tuple, int, tuple, object]]
    spec: QuadraticAlgebraSpec = field(repr=False)

    @property
    def ring(self) -> str:
        return "integer" if all(isinstance(c, int) for *_, c in self.combination) else "rational"

    def __len__(self) -> int:
        return len(self.combination)

    def expand(self) -> FreeAlgebraElement:
        """Re-expand the combination; no linear algebra involved."""
        out: dict = {}
        rels = self.spec.relations
        for left, r, right, c in self.combination:
            for w, k in rels[r].terms.items():
                word = tuple(left) + w + tuple(right)
                out[word] = out.get(word, 0) + c * k
        return FreeAlgebraElement(out)

    def verify(self, e: FreeAlgebraElement) -> bool:
        return self.expand() == e

    def to_json(self) -> dict:
        return {
            "spec": self.spec.name,
            "ring": self.ring,
            "relations": [str(r) for r in self.spec.relations],
            "combination": [
                {"left": [str(s) for s in l], "relation": r, "right": [str(s) for s in rt], "coeff": str(c)}
                for l, r, rt, c in self.combination
            ],
        }

    @classmethod
    def from_keys(cls, acc: dict, spec: QuadraticAlgebraSpec) -> "MembershipCertificate":
        combo = [(spec.decode(u), r, spec.decode(v), _norm(c)) for (u, r, v), c in acc.items() if c]
        combo.sort(key=lambda t: (len(t[0]) + len(t[2]), spec.encode(t[0]), t[1], spec.encode(t[2])))
        return cls(combo, spec)


@dataclass
class MembershipResult:
    status: str  # "member" | "not-member" | "undecided"
    certificate: Optional[MembershipCertificate] = None
    remainder: Optional[FreeAlgebraElement] = None
    method: str = ""
    detail: str = ""
    elapsed_ms: float = 0.0

    def __bool__(self) -> bool:
        return self.status == "member"

    @property
    def ring(self) -> str:
        return self.certificate.ring if self.certificate is not None else ""

    @property
    def certificate_size(self) -> int:
        return len(self.certificate) if self.certificate is not None else 0


class GradedIdeal:
    """Homogeneous Groebner basis of a spec's ideal, grown one degree at a time."""

    def __init__(self, spec: QuadraticAlgebraSpec, cap: Optional[int] = DEFAULT_CAP, track: bool = True):
        self.spec = spec
        self.cap = cap
        self.track = track
        self.rels = [{spec.encode(w): c for w, c in r.terms.items()} for r in spec.relations]
        self.polys: list[dict] = []
        self.certs: list[dict] = []
        self.lead_words: list[tuple] = []
        self.leads: dict[tuple, int] = {}
        self.lead_lengths: list[int] = []
        self.degree = 1
        self.rational = False
        self.entries = 0
        self.pairs: dict[int, list] = defaultdict(list)
        self._div_cache: dict[tuple, object] = {}

    # -- reduction ------------------------------------------------------------

    def _divisor(self, w: tuple):
        hit = self._div_cache.get(w, False)
        if hit is not False:
            return hit
        found = None
        n = len(w)
        for L in self.lead_lengths:
            if L > n:
                break
            leads = self.leads
            for s in range(n - L + 1):
                idx = leads.get(w[s:s + L])
                if idx is not None:
                    found = (idx, s)
                    break
            if found:
                break
        if n <= self.degree:
            self._div_cache[w] = found
        return found

    def reduce(self, poly: dict) -> tuple[dict, dict]:
        """Fully reduce a homogeneous ``poly`` (index words).

        Returns (remainder, acc) where poly - remainder equals the expansion of
        ``acc`` = {(u, relation, v): coeff}.
        """
        poly = {w: c for w, c in poly.items() if c}
        rem: dict = {}
        acc: dict = {}
        polys, certs, lead_words = self.polys, self.certs, self.lead_words
        while poly:
            w = max(poly)
            c = poly.pop(w)
            hit = self._divisor(w)
            if hit is None:
                rem[w] = c
                continue
            idx, s = hit
            lead = lead_words[idx]
            u, v = w[:s], w[s + len(lead):]
            for gw, gc in polys[idx].items():
                if gw == lead:
                    continue
                ww = u + gw + v
                nv = poly.get(ww, 0) - c * gc
                if nv:
                    poly[ww] = nv
                else:
                    poly.pop(ww, None)
            if self.track:
                for (a, r, b), k in certs[idx].items():
                    key = (u + a, r, b + v)
                    nv = acc.get(key, 0) + c * k
                    if nv:
                        acc[key] = nv
                    else:
                        del acc[key]
        return rem, acc

    # -- construction ---------------------------------------------------------

    def _charge(self, n: int) -> None:
        self.entries += n
        if self.cap is not None and self.entries > self.cap:
            raise ResourceCapExceeded(
                f"{self.spec.name}: Groebner data exceeded {self.cap} entries at degree {self.degree + 1}")

    def _insert(self, poly: dict, cert: dict) -> None:
        lead = max(poly)
        lc = poly[lead]
        if lc in (1, -1):
            f = lc
        else:
            self.rational = True
            f = Fraction(1) / lc
        poly = {w: _norm(c * f) for w, c in poly.items()}
        cert = {k: _norm(c * f) for k, c in cert.items()}
        idx = len(self.polys)
        self.polys.append(poly)
        self.certs.append(cert)
        self.lead_words.append(lead)
        self.leads[lead] = idx
        if len(lead) not in self.lead_lengths:
            self.lead_lengths.append(len(lead))
            self.lead_lengths.sort()
        self._charge(len(poly) + len(cert))
        for j in range(idx + 1):
            self._schedule(idx, j)
            if j != idx:
                self._schedule(j, idx)

    def _schedule(self, i: int, j: int) -> None:
        a, b = self.lead_words[i], self.lead_words[j]
        for k in range(1, min(len(a), len(b))):
            if a[len(a) - k:] == b[:k]:
                self.pairs[len(a) + len(b) - k].append((i, j, k))

    def _spoly(self, i: int, j: int, k: int) -> tuple[dict, dict]:
        a, b = self.lead_words[i], self.lead_words[j]
        right, left = b[k:], a[:len(a) - k]
        poly = {w + right: c for w, c in self.polys[i].items()}
        add_scaled(poly, {left + w: c for w, c in self.polys[j].items()}, -1)
        cert: dict = {}
        if self.track:
            cert = {(u, r, v + right): c for (u, r, v), c in self.certs[i].items()}
            add_scaled(cert, {(left + u, r, v): c for (u, r, v), c in self.certs[j].items()}, -1)
        return poly, cert

    def ensure(self, D: int) -> None:
        """Complete the basis through degree D."""
        while self.degree < D:
            d = self.degree + 1
            if d == 2:
                candidates = [(dict(r), {((), idx, ()): 1}) for idx, r in enumerate(self.rels)]
                for poly, cert in candidates:
                    self._process(poly, cert)
            for i, j, k in self.pairs.pop(d, []):
                self._process(*self._spoly(i, j, k))
            self.degree = d

    def _process(self, poly: dict, cert: dict) -> None:
        rem, acc = self.reduce(poly)
        if rem:
            if self.track:
                add_scaled(cert, acc, -1)
            else:
                cert = {}
            self._insert(rem, cert)

    def standard_words(self, d: int) -> list[tuple]:
        """Index words of length d containing no leading word (a basis of the quotient)."""
        self.ensure(d)
        out = []
        A = len(self.spec.alphabet)

        def grow(prefix: tuple):
            if len(prefix) == d:
                out.append(prefix)
                return
            for a in range(A):
                w = prefix + (a,)
                if self._suffix_reducible(w):
                    continue
                grow(w)

        grow(())
        return out

    def _suffix_reducible(self, w: tuple) -> bool:
        n = len(w)
        for L in self.lead_lengths:
            if L > n:
                break
            if w[n - L:] in self.leads:
                return True
        return False


def _ideal(spec: QuadraticAlgebraSpec, cap: Optional[int], track: bool = True) -> GradedIdeal:
    key = ("groebner", cap, track)
    gi = spec._cache.get(key)
    if gi is None:
        gi = spec._cache[key] = GradedIdeal(spec, cap, track)
    return gi


def normal_form(e: FreeAlgebraElement, spec: QuadraticAlgebraSpec, cap: Optional[int] = DEFAULT_CAP
                ) -> FreeAlgebraElement:
    """Canonical representative of e modulo the ideal (zero iff e is in it over Q)."""
    spec.check_element(e)
    gi = _ideal(spec, cap, track=False)
    out: dict = {}
    for d, piece in e.homogeneous_components().items():
        if d < 2:
            out.update(piece.terms)
            continue
        gi.ensure(d)
        rem, _ = gi.reduce({spec.encode(w): c for w, c in piece.terms.items()})
        for w, c in rem.items():
            out[spec.decode(w)] = c
    return FreeAlgebraElement(out)


def _macaulay_piece(piece: dict, d: int, spec: QuadraticAlgebraSpec, cap: Optional[int], integral: bool
                    ) -> tuple[dict, dict]:
    A = len(spec.alphabet)
    rels = [{spec.encode(w): c for w, c in r.terms.items()} for r in spec.relations]
    nrows = (d - 1) * A ** (d - 2) * len(rels)
    if cap is not None and 3 * nrows > cap:
        raise ResourceCapExceeded(f"{spec.name}: degree-{d} Macaulay matrix has ~{3 * nrows} entries (cap {cap})")
    ech = Echelon(integral=integral, cap=cap)
    for left_len in range(d - 1):
        for u in product(range(A), repeat=left_len):
            for v in product(range(A), repeat=d - 2 - left_len):
                for r, rel in enumerate(rels):
                    ech.add({u + w + v: c for w, c in rel.items()}, (u, r, v))
    return ech.reduce(piece)


def ideal_membership(e: FreeAlgebraElement, spec: QuadraticAlgebraSpec, method: str = "groebner",
                     ring: str = "integer", cap: Optional[int] = DEFAULT_CAP) -> MembershipResult:
    """Decide whether ``e`` lies in the two-sided ideal generated by ``spec.relations``.

    ``ring="integer"`` asks for an integer certificate; if the Groebner route
    only produces a rational one, the integer echelon route is tried and,
    failing the cap, the rational certificate is returned labeled as such.
    A cap overflow yields status "undecided", never "not-member".
    """
    if method not in ("groebner", "macaulay"):
        raise ValueError(f"unknown method {method!r}")
    if ring not in ("integer", "rational"):
        raise ValueError(f"unknown ring {ring!r}")
    spec.check_element(e)
    t0 = time.perf_counter()
    acc_total: dict = {}
    remainder: dict = {}
    notes = []
    try:
        for d, piece in e.homogeneous_components().items():
            vec = {spec.encode(w): c for w, c in piece.terms.items()}
            if d < 2:
                remainder.update(vec)
                continue
            if method == "macaulay":
                rem, acc = _macaulay_piece(vec, d, spec, cap, ring == "integer")
            else:
                gi = _ideal(spec, cap)
                gi.ensure(d)
                rem, acc = gi.reduce(vec)
                if not rem and ring == "integer" and any(isinstance(c, Fraction) for c in acc.values()):
                    try:
                        rem, acc = _macaulay_piece(vec, d, spec, cap, True)
                        notes.append(f"degree {d}: integer certificate via echelon route")
                    except ResourceCapExceeded:
                        notes.append(f"degree {d}: only a rational certificate is available")
            remainder.update(rem)
            for k, c in acc.items():
                nv = acc_total.get(k, 0) + c
                if nv:
                    acc_total[k] = nv
                else:
                    acc_total.pop(k, None)
    except ResourceCapExceeded as exc:
        return MembershipResult("undecided", method=method, detail=str(exc),
                                elapsed_ms=(time.perf_counter() - t0) * 1e3)
    elapsed = (time.perf_counter() - t0) * 1e3
    if remainder:
        rem_el = FreeAlgebraElement({spec.decode(w): c for w, c in remainder.items()})
        return MembershipResult("not-member", remainder=rem_el, method=method,
                                detail="; ".join(notes), elapsed_ms=elapsed)
    cert = MembershipCertificate.from_keys(acc_total, spec)
    return MembershipResult("member", certificate=cert, remainder=FreeAlgebraElement(), method=method,
                            detail="; ".join(notes), elapsed_ms=elapsed)
