"""Free-algebra arithmetic, presentations, and the ideal/cone oracles."""

import random
from fractions import Fraction
from itertools import product

import pytest

from kdunkl.dunkl import kappa
from kdunkl.quadalg import (
    STAR,
    FreeAlgebraElement,
    Gen,
    Letter,
    GradedIdeal,
    bracket,
    cone_membership,
    feasible_nonnegative,
    graded_component,
    ideal_membership,
    lemma2_expand,
    normal_form,
    spec_En,
    spec_EX,
)

F = FreeAlgebraElement.parse


# --------------------------------------------------------------------------
# free algebra


def test_bracket_antisymmetry_at_parse_time():
    assert F("[2,1]") == -F("[1,2]")
    assert bracket(3, 1) == -bracket(1, 3)
    assert F("[3,1][2,1]") == F("[1,3][1,2]")


def test_text_round_trip():
    for text in ["-[1,3][1,2]+[1,2][2,3]", "[1,2]+[1,3]-[1,3][1,2]", "2-(3)[1,4][2,3]"]:
        e = F(text)
        assert F(str(e)) == e
        assert FreeAlgebraElement.from_json(e.to_json()) == e


def test_ex_text_round_trip():
    e = F("*11'*-(2)1'1+(3)")
    assert e.terms[(STAR, Letter(0, 1), Letter(1, 1), STAR)] == 1
    assert e.terms[(Letter(1, 1), Letter(0, 1))] == -2
    assert e.terms[()] == 3
    assert F(str(e)) == e


def test_graded_component_examples():
    k1 = kappa(1, 3).element
    assert graded_component(k1, 2) == -F("[1,3][1,2]")
    assert graded_component(k1, -1) == FreeAlgebraElement()
    assert graded_component(FreeAlgebraElement.one() + F("[1,2]"), 0) == FreeAlgebraElement.one()


def test_reversal_is_antihomomorphism():
    a, b = F("[1,2][2,3]-[1,3]"), F("[2,3]+2[1,2][1,3]")
    assert (a * b).reversed() == b.reversed() * a.reversed()


# --------------------------------------------------------------------------
# presentations


def test_e2_and_e3_relations():
    assert [str(r) for r in spec_En(2).relations] == ["[1,2][1,2]"]
    s3 = spec_En(3)
    assert [str(g) for g in s3.alphabet] == ["[1,2]", "[1,3]", "[2,3]"]
    rels = set(s3.relations)
    for g in ("[1,2]", "[1,3]", "[2,3]"):
        assert F(g) * F(g) in rels
    triple = F("[1,2][2,3]") - F("[2,3][1,3]") - F("[1,3][1,2]")
    assert triple in rels or -triple in rels
    assert len(s3.relations) == 5


def test_e4_relation_count_and_commutators():
    s4 = spec_En(4)
    assert len(s4.alphabet) == 6
    commutators = [r for r in s4.relations if len(r) == 2 and set(r.terms.values()) == {1, -1}
                   and len({x for w in r.terms for g in w for x in (g.i, g.j)}) == 4]
    assert len(commutators) == 3
    assert len(s4.relations) == 6 + 8 + 3


def test_ex_presentations():
    s1 = spec_EX({1})
    assert [str(a) for a in s1.alphabet] == ["1", "1'", "*"]
    assert len(s1.relations) == 5
    s2 = spec_EX({1, 2})
    assert len(s2.alphabet) == 5
    rels = set(s2.relations)
    for text in ("12'-2'1", "21'-1'2"):
        assert F(text) in rels or -F(text) in rels


def test_relations_are_validated():
    from kdunkl.quadalg import QuadraticAlgebraSpec
    with pytest.raises(ValueError):
        QuadraticAlgebraSpec([Gen(1, 2)], [F("[1,2]")])
    with pytest.raises(ValueError):
        QuadraticAlgebraSpec([Gen(1, 2)], [F("[1,2][1,3]")])
    with pytest.raises(ValueError):
        spec_EX(set())


def test_scaled_duplicates_collapse():
    from kdunkl.quadalg import QuadraticAlgebraSpec
    r = F("[1,2][1,2]")
    spec = QuadraticAlgebraSpec([Gen(1, 2)], [r, r * 3, -r])
    assert len(spec.relations) == 1


# --------------------------------------------------------------------------
# ideal membership


def test_membership_examples():
    s3 = spec_En(3)
    rel = F("[1,2][2,3]-[2,3][1,3]-[1,3][1,2]")
    res = ideal_membership(rel, s3)
    assert res and len(res.certificate) == 1 and res.certificate.verify(rel)
    assert ideal_membership(F("[1,2][1,3]"), s3).status == "not-member"
    e = F("*11'*")
    res = ideal_membership(e, spec_EX({1}))
    assert res and res.certificate.verify(e) and res.ring == "integer"


def test_alphabet_mismatch_is_an_error():
    with pytest.raises(ValueError):
        ideal_membership(F("[1,4][2,3]"), spec_En(3))


def test_degree_one_is_never_a_member():
    assert ideal_membership(F("[1,2]"), spec_En(3)).status == "not-member"


def _random_ideal_element(rng, spec, d):
    A = spec.alphabet
    total = FreeAlgebraElement()
    for _ in range(rng.randint(1, 4)):
        left = rng.randint(0, d - 2)
        u = tuple(rng.choice(A) for _ in range(left))
        v = tuple(rng.choice(A) for _ in range(d - 2 - left))
        r = rng.choice(spec.relations)
        total = total + FreeAlgebraElement({u: 1}) * r * FreeAlgebraElement({v: rng.choice([-3, -1, 1, 2])})
    return total


@pytest.mark.parametrize("method", ["groebner", "macaulay"])
def test_random_combinations_and_perturbations(method):
    rng = random.Random(2024)
    spec = spec_En(3)
    for _ in range(60):
        d = rng.randint(2, 4)
        e = _random_ideal_element(rng, spec, d)
        res = ideal_membership(e, spec, method=method)
        assert res, e
        assert res.certificate.verify(e)
        assert res.ring == "integer"
        # a standard (non-member) word shifts it out of the ideal
        std = GradedIdeal(spec).standard_words(d)
        word = spec.decode(rng.choice(std))
        assert ideal_membership(e + FreeAlgebraElement({word: 1}), spec, method=method).status == "not-member"


def test_engines_agree_on_random_elements():
    rng = random.Random(11)
    spec = spec_En(3)
    words3 = list(product(spec.alphabet, repeat=3))
    for _ in range(80):
        e = FreeAlgebraElement({rng.choice(words3): rng.randint(-2, 2) for _ in range(rng.randint(1, 5))})
        a = ideal_membership(e, spec, method="groebner").status
        b = ideal_membership(e, spec, method="macaulay").status
        assert a == b


def test_grading_property():
    rng = random.Random(5)
    spec = spec_En(3)
    for _ in range(30):
        e = _random_ideal_element(rng, spec, 3) + _random_ideal_element(rng, spec, 4)
        if rng.random() < 0.5:
            e = e + F("[1,2][1,3]")
        whole = bool(ideal_membership(e, spec))
        pieces = all(ideal_membership(p, spec) for p in e.homogeneous_components().values())
        assert whole == pieces


def test_hilbert_series_of_e3_and_e4():
    """The quotient dimensions are the coefficients of the known Hilbert series."""
    gi3 = GradedIdeal(spec_En(3))
    assert [len(gi3.standard_words(d)) for d in range(6)] == [1, 3, 4, 3, 1, 0]
    gi4 = GradedIdeal(spec_En(4))
    dims = [len(gi4.standard_words(d)) for d in range(14)]
    assert dims == [1, 6, 19, 42, 71, 96, 106, 96, 71, 42, 19, 6, 1, 0]
    assert sum(dims) == 576


def test_cap_gives_undecided():
    e = kappa(1, 4).element * kappa(2, 4).element * kappa(3, 4).element
    res = ideal_membership(e, spec_En(4), method="macaulay", cap=1000)
    assert res.status == "undecided"
    assert not res


def test_normal_form_vanishes_on_ideal():
    spec = spec_En(3)
    e = _random_ideal_element(random.Random(3), spec, 4)
    assert normal_form(e, spec) == FreeAlgebraElement()
    assert normal_form(F("[1,2]"), spec) == F("[1,2]")


# --------------------------------------------------------------------------
# cone membership


def test_simplex_small_cases():
    cols = [{"a": 1, "b": 1}, {"a": 1}, {"b": 1}]
    x = feasible_nonnegative(cols, {"a": 2, "b": 1})
    assert x is not None and all(v >= 0 for v in x)
    assert {k: sum(x[j] * cols[j].get(k, 0) for j in range(3)) for k in "ab"} == {"a": 2, "b": 1}
    assert feasible_nonnegative([{"a": 1}], {"a": -1}) is None
    assert feasible_nonnegative([{"a": 2}], {"a": 1}) == [Fraction(1, 2)]


def test_cone_examples():
    s3 = spec_En(3)
    zero_mod = F("[1,2][2,3]+[2,3][3,1]+[3,1][1,2]")
    res = cone_membership(zero_mod, s3)
    assert res and all(not c.weights for c in res.certificates.values())
    res = cone_membership(F("[2,3][1,3]+[1,3][1,2]"), s3)
    assert res
    cert = res.certificates[2]
    assert {tuple(map(str, w)): c for w, c in cert.weights.items()} == {("[1,2]", "[2,3]"): 1}
    assert cert.verify() and cert.integral
    res = cone_membership(F("[1,2][2,3]"), s3)
    assert res and res.certificates[2].weights == {(Gen(1, 2), Gen(2, 3)): 1}


def test_cone_rejects_negative_word():
    s3 = spec_En(3)
    res = cone_membership(-F("[1,2][2,3]"), s3)
    assert res.status == "no-certificate" and res.failing_degree == 2
    # the sign profile flips it back
    assert cone_membership(-F("[1,2][2,3]"), s3, sign_profile={2: -1})


def test_cone_word_cap():
    res = cone_membership(F("[1,2][2,3][1,2]"), spec_En(3), word_cap=2)
    assert res.status == "undecided"


def test_cone_word_cap_applies_to_memoized_columns():
    s3 = spec_En(3)
    assert cone_membership(F("[1,2][2,3][1,2]"), s3)
    assert cone_membership(F("[1,2][2,3][1,2]"), s3, word_cap=2).status == "undecided"


# --------------------------------------------------------------------------
# inclusion-exclusion expansion


def test_inclusion_exclusion_small_cases():
    u1, v1, u2, v2 = (FreeAlgebraElement.word(Gen(1, k)) for k in range(2, 6))
    lhs, rhs = lemma2_expand([(u1, v1)])
    assert lhs == rhs == u1 + v1
    lhs, rhs = lemma2_expand([(u1, v1), (u2, v2)])
    x1, x2 = u1 + v1, u2 + v2
    assert rhs == v1 * v2 + u1 * x2 + x1 * u2 - u1 * u2
    assert lhs == rhs


def _random_element(rng, alphabet):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        w = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 2)))
        terms[w] = rng.randint(-3, 3)
    return FreeAlgebraElement(terms)


def test_inclusion_exclusion_random_instances():
    rng = random.Random(99)
    for _ in range(200):
        alphabet = [Gen(1, k) for k in range(2, 2 + rng.randint(1, 3))]
        m = rng.randint(1, 4)
        factors = [(_random_element(rng, alphabet), _random_element(rng, alphabet)) for _ in range(m)]
        blocks = [_random_element(rng, alphabet) for _ in range(m + 1)] if rng.random() < 0.5 else None
        lhs, rhs = lemma2_expand(factors, blocks)
        assert lhs == rhs


def test_inclusion_exclusion_block_count_checked():
    with pytest.raises(ValueError):
        lemma2_expand([(FreeAlgebraElement.one(), FreeAlgebraElement.one())], [FreeAlgebraElement.one()])
