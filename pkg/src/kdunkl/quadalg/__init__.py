"""Graded quadratic algebras: free-algebra arithmetic, ideal and cone membership."""

from .free import STAR, FreeAlgebraElement, Gen, Letter, bracket, commutator, lemma2_expand
from .membership import (
    DEFAULT_CAP,
    GradedIdeal,
    MembershipCertificate,
    MembershipResult,
    graded_component,
    ideal_membership,
    normal_form,
)
from .spec import QuadraticAlgebraSpec, spec_En, spec_EX

__all__ = [
    "STAR",
    "FreeAlgebraElement",
    "Gen",
    "Letter",
    "bracket",
    "commutator",
    "lemma2_expand",
    "DEFAULT_CAP",
    "GradedIdeal",
    "MembershipCertificate",
    "MembershipResult",
    "graded_component",
    "ideal_membership",
    "normal_form",
    "QuadraticAlgebraSpec",
    "spec_En",
    "spec_EX",
]

from .cone import ConeCertificate, ConeResult, cone_membership, feasible_nonnegative  # noqa: E402

__all__ += ["ConeCertificate", "ConeResult", "cone_membership", "feasible_nonnegative"]
