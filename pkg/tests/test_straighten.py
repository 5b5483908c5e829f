from hypothesis import given, settings, strategies as st

from a4canon.engine.pbw import PINNED, Convention, PBWVector, ROOTS, express_in_pbw
from a4canon.engine.straighten import divided_to_undivided, straightener
from a4canon.engine.words import DividedWord, eval_divided_word
from a4canon.laurent import ONE, q_int

divided_words = st.lists(st.tuples(st.integers(1, 4), st.integers(1, 3)), min_size=1, max_size=5).map(
    lambda fs: DividedWord(tuple(fs))
).filter(lambda dw: dw.height <= 7)


@settings(max_examples=40)
@given(divided_words)
def test_matches_word_space(dw):
    s = straightener(PINNED)
    assert s.expand_divided_word(dw) == express_in_pbw(eval_divided_word(dw, PINNED.twist), PINNED)


def test_matches_word_space_other_gauge():
    conv = Convention(-1, -1, "left")
    dw = DividedWord.parse("e2 e4^2 e3^2 e2")
    assert straightener(conv).expand_divided_word(dw) == express_in_pbw(eval_divided_word(dw, -1), conv)


def test_relations_are_convex():
    s = straightener(PINNED)
    for a in range(10):
        for b in range(a):
            s.relation(a, b)  # raises RelationError on a bad shape


def test_ordered_product_is_monomial():
    # e4^(2) e3 e2 e1 is a PBW monomial in convex order when read as simple root vectors
    dw = DividedWord(((4, 2), (3, 1), (2, 1), (1, 1)))
    pv = straightener(PINNED).expand_divided_word(dw)
    A = [0] * 10
    for i, n in dw.factors:
        A[ROOTS.index((i, i))] = n
    assert pv == PBWVector({tuple(A): ONE})


def test_divided_to_undivided():
    assert divided_to_undivided((2, 0, 3) + (0,) * 7) == q_int(2) * q_int(2) * q_int(3)
