import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from a4canon.quadform import (
    LM,
    LP1,
    LP2,
    LP3,
    QM,
    QP1,
    QP2,
    QP3,
    ArityError,
    FormFileError,
    UnitForm,
    builtin_forms,
    eval_form,
    eval_linear,
    eval_unit,
    parse_form,
    region_implies_L_nonneg,
    weakly_positive,
)

A0 = (1, 1, 0, 0, 1, 0, 1, 0, 1, 1)


def brute(q, bound):
    best_le = best_lt = None
    for x in itertools.product(range(bound + 1), repeat=q.n):
        if not any(x):
            continue
        v = eval_form(q, x)
        if v <= 0 and best_le is None:
            best_le = x
        if v < 0 and best_lt is None:
            best_lt = x
    return best_le, best_lt


def test_eval_linear():
    f = LM.materialize(A0)
    assert eval_linear(f, [0] * 10) == 0
    assert eval_linear(f, [1] + [0] * 9) == 1
    with pytest.raises(ArityError):
        eval_linear(f, [1, 2])


def test_eval_unit_examples():
    assert eval_unit(QM, [0] * 10) == 0
    for k in range(10):
        assert eval_unit(QM, [int(i == k) for i in range(10)]) == 1
    assert eval_unit(QM, [1, 0, 0, 1, 0, 0, 0, 0, 0, 0]) == 1


@given(st.lists(st.integers(-5, 5), min_size=11, max_size=11))
def test_eval_matches_gram_matrix(x):
    for q in (QM, QP3):
        v = np.array(x[: q.n])
        assert 2 * eval_form(q, x[: q.n]) == int(v @ q.gram2() @ v)


def test_qm_transcription():
    assert QM.is_unit and len(QM.off) == 28
    t = {(a, b): c for a, b, c in QM.table()}
    assert t["x6", "p"] == 2 and t["m", "s"] == -1 and t["x1", "x4"] == -1
    assert sum(1 for c in QM.off.values() if c > 0) == 16


def test_p_forms():
    assert QP1.off == QM.off and QP2.off == QM.off
    assert QP3.n == 11 and QP3.diag[-1] == 2 and not QP3.is_unit
    assert dict(LP2.coefficients)["x5"].coeffs == (1, 1, 1, 0, -1, -1, -1, 0, 0, 0)
    assert set(builtin_forms()) == {"QM", "QP1", "QP2", "QP3", "LM", "LP1", "LP2", "LP3"}


def test_lp3_materialize():
    A = (0, 0, 0, 0, 2, 0, 0, 0, 0, 0)  # a5 - a1 = 2
    f = LP3.materialize(A)
    coeff = dict(zip(f.variables, f.coeffs))
    assert coeff["w"] == -4 and coeff["x7"] == 2 and coeff["x4"] == 2 and coeff["x3"] == 0


def test_weakly_positive_qm():
    v = weakly_positive(QM, 6)
    assert v.weakly_positive and v.witness is None and v.nonnegative and v.search_bound == 6


def test_p_forms_same_verdict():
    assert weakly_positive(QP1, 3) == weakly_positive(QM, 3) == weakly_positive(QP2, 3)


def test_bad_form_witness():
    q = parse_form(["n=2", "q 1 2 -3"])
    v = weakly_positive(q, 1)
    assert v.witness == (1, 1) and v.witness_value == -1 and not v.weakly_positive


def test_one_variable():
    assert weakly_positive(UnitForm(("x",), {}), 4).weakly_positive


def test_zero_witness_threshold():
    # x^2 + y^2 - 2xy vanishes at (1,1): not weakly positive, but nonnegative
    v = weakly_positive(UnitForm(("x", "y"), {(0, 1): -2}), 3)
    assert not v.weakly_positive and v.nonnegative and v.witness == (1, 1)


forms = st.integers(1, 4).flatmap(
    lambda n: st.dictionaries(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda ij: ij[0] < ij[1]),
        st.integers(-3, 2),
    ).map(lambda off: UnitForm(tuple(f"x{k}" for k in range(n)), off))
)


@settings(max_examples=60)
@given(forms, st.integers(1, 3))
def test_search_matches_brute_force(q, bound):
    v = weakly_positive(q, bound)
    le, lt = brute(q, bound)
    assert v.witness == le and v.negative_witness == lt


@settings(max_examples=30)
@given(forms, st.integers(1, 2))
def test_monotone_in_bound(q, bound):
    small = weakly_positive(q, bound)
    if not small.weakly_positive:
        big = weakly_positive(q, bound + 1)
        assert not big.weakly_positive
        assert eval_form(q, small.witness) <= 0


def test_parallel_search_is_deterministic():
    q = parse_form(["n=5", "q 1 2 -1", "q 2 3 -1", "q 3 4 -1", "q 4 5 -2", "q 1 5 -1"])
    assert weakly_positive(q, 3, jobs=1) == weakly_positive(q, 3, jobs=2)


@given(st.lists(st.integers(0, 4), min_size=11, max_size=11))
def test_qp3_dominates_on_subcone(x):
    x1, x2, x3, x4, x5, x6, x7, m, s, p, w = x
    if x4 - x3 - x6 - w >= 0 and x7 - w >= 0:
        assert eval_form(QP3, x) >= eval_form(QM, x[:10])
        if any(x):
            # w > 0 forces x4 > 0 on the subcone, so the projection is nonzero
            assert eval_form(QP3, x) > 0


def test_region_implies(table):
    assert region_implies_L_nonneg(LP1, table.get("1.1").region, 2).holds
    assert region_implies_L_nonneg(LP2, table.get("1.2").region, 2).holds
    assert region_implies_L_nonneg(LP3, table.get("1.3").region, 2).holds
    rep = region_implies_L_nonneg(LM, table.get("1.1").region, 2)
    assert not rep.holds and rep.counterexamples[0][1] == "x2"
    assert region_implies_L_nonneg(LM, None, 2).holds


def test_lm_nonneg_on_monomial_region(table):
    assert region_implies_L_nonneg(LM, table.get("M1.1").region, 2).holds


@pytest.mark.parametrize(
    "lines",
    [[], ["q 1 2 3"], ["n=2", "q 1 1 3"], ["n=2", "q 1 3 1"], ["n=2", "p 1 2 1"], ["n=2", "q 1 2 x"]],
)
def test_form_file_errors(lines):
    with pytest.raises(FormFileError):
        parse_form(lines)


def test_form_file_comments():
    q = parse_form(["# header", "n=3", "q 2 1 -1  # symmetric entry", ""])
    assert q.off == {(0, 1): -1}
