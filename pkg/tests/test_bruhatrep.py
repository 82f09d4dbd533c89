import json

import pytest

from kdunkl.bruhatrep import (
    GroupAlgebraVector,
    LinearOperator,
    RankMismatch,
    act_element,
    act_generator,
    constants_from_json,
    constants_table,
    constants_to_json,
    eval_at_kappa,
    kappa_operator,
    operator_of,
    operators_commute,
    relations_annihilate,
    reversal_preserves_relations,
    reverse_words,
    structure_constants_cohomology,
    structure_constants_dunkl,
    verify_representation,
)
from kdunkl.dunkl import kappa, theta
from kdunkl.perm import all_permutations, parse_permutation as P
from kdunkl.polyring import (
    SparsePolynomial,
    grothendieck,
    kmonk_chains,
    monk_multiply,
    structure_constants_poly,
    var,
)
from kdunkl.quadalg import FreeAlgebraElement

F = FreeAlgebraElement.parse


def vec(d):
    n = len(next(iter(d)))
    return GroupAlgebraVector({P(w): c for w, c in d.items()}, n)


def zero(n):
    return GroupAlgebraVector({}, n)


def test_act_generator_examples():
    assert act_generator(1, 2, P("123")) == vec({"213": 1})
    assert act_generator(1, 2, P("213")) == zero(3)
    assert act_generator(1, 3, P("123")) == zero(3)
    assert act_generator(2, 1, P("123")) == vec({"213": -1})
    with pytest.raises(IndexError):
        act_generator(1, 4, P("123"))


def test_act_element_examples():
    assert act_element(kappa(2, 3).element, P("123")) == vec({"213": -1, "132": 1, "231": 1})
    assert act_element(kappa(1, 3).element, P("123")) == vec({"213": 1})
    assert act_element(F("[1,2][2,3]"), P("123")) == vec({"231": 1})


def test_leftmost_generator_acts_first():
    # read right to left, the same word would need 123 -> 132 -> 312
    assert act_element(F("[2,3][1,2]"), P("123")) == vec({"312": 1})
    assert act_element(reverse_words(F("[1,2][2,3]")), P("123")) == vec({"312": 1})


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        act_element(F("[1,4]"), P("123"))
    with pytest.raises(RankMismatch):
        vec({"123": 1}) + vec({"1234": 1})


def test_zero_operator():
    assert operator_of(FreeAlgebraElement(), 3) == LinearOperator.zero(3)
    assert operator_of(FreeAlgebraElement.one(), 3) == LinearOperator.identity(3)


def test_operator_algebra_is_multiplicative():
    a, b = kappa(1, 4).element, kappa(3, 4).element
    # leftmost first: the operator of a*b is "b after a"
    assert operator_of(a * b, 4) == operator_of(b, 4) @ operator_of(a, 4)
    assert operator_of(a + b, 4) == operator_of(a, 4) + operator_of(b, 4)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_relations_annihilate_and_operators_commute(n):
    assert relations_annihilate(n) == []
    assert operators_commute(n, "kappa") == []
    assert operators_commute(n, "theta") == []
    assert reversal_preserves_relations(n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_monk_consistency(n):
    for p in range(1, n + 1):
        kop = operator_of(kappa(p, n).element, n)
        top = operator_of(theta(p, n).element, n)
        for w in all_permutations(n):
            assert kop.column(w).coefficients == kmonk_chains(p, w, rank=n)
            assert top.column(w).coefficients == monk_multiply(p, w, rank=n)


def test_eval_examples():
    assert eval_at_kappa(grothendieck(P("213")), P("123"), 3) == vec({"213": 1})
    for v in all_permutations(3):
        assert eval_at_kappa(SparsePolynomial.constant(1), v, 3) == GroupAlgebraVector.basis(v)
    assert eval_at_kappa(var(1) * var(1), P("123"), 3) == vec({"312": 1})


def test_eval_rank_checks():
    with pytest.raises(RankMismatch):
        eval_at_kappa(var(5), P("123"), 3)
    with pytest.raises(RankMismatch):
        eval_at_kappa(var(1), P("1234"), 3)


@pytest.mark.parametrize("u, v, expected", [("213", "132", {"312": 1, "231": 1, "321": -1}),
                                            ("213", "213", {"312": 1})])
def test_dunkl_constants_examples(u, v, expected):
    assert structure_constants_dunkl(P(u), P(v), 3) == {P(w): c for w, c in expected.items()}


def test_identity_is_unit():
    for n in (3, 4):
        for v in all_permutations(n):
            assert structure_constants_dunkl(P("12345"[:n]), v, n) == {v: 1}
            assert structure_constants_cohomology(P("12345"[:n]), v, n) == {v: 1}


@pytest.mark.parametrize("u, v, expected", [("213", "213", {"312": 1}), ("213", "132", {"312": 1, "231": 1})])
def test_cohomology_examples(u, v, expected):
    assert structure_constants_cohomology(P(u), P(v), 3) == {P(w): c for w, c in expected.items()}


@pytest.mark.parametrize("n", [3, 4])
def test_routes_agree_with_brion_signs_and_lowest_slice(n):
    for u in all_permutations(n):
        for v in all_permutations(n):
            dk = structure_constants_dunkl(u, v, n)
            assert dk == structure_constants_poly(u, v).restricted(n)
            for w, c in dk.items():
                assert (-1) ** (w.length - u.length - v.length) * c >= 0
            low = {w: c for w, c in dk.items() if w.length == u.length + v.length}
            assert structure_constants_cohomology(u, v, n) == low


def test_json_and_table():
    c = structure_constants_dunkl(P("213"), P("132"), 3)
    data = constants_to_json(P("213"), P("132"), 3, "dunkl", c)
    assert json.loads(json.dumps(data)) == data
    assert [t["w"] for t in data["constants"]] == ["231", "312", "321"]
    assert constants_from_json(data) == c
    lines = constants_table(c).splitlines()
    assert lines[-1].startswith("321") and lines[-1].endswith("-1")


def test_verify_representation_report():
    report = verify_representation(4)
    assert report.ok
    assert {r.check for r in report.records} == {"rep-relations", "rep-reversal", "rep-commute", "rep-monk"}


def test_kappa_operator_is_cached():
    assert kappa_operator(2, 4) is kappa_operator(2, 4)
