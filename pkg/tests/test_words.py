import pytest
from hypothesis import given, strategies as st

from a4canon.engine.words import (
    STANDARD_PAIRING,
    DividedWord,
    WordSum,
    cartan_pairing,
    eval_divided_word,
    generator_power,
    generator_power_by_multiplication,
    serre_holds,
    shuffle_mul,
)
from a4canon.laurent import ONE, V

words = st.lists(st.integers(1, 4), max_size=3).map(tuple)


def test_cartan():
    assert cartan_pairing(2, 2) == 2
    assert cartan_pairing(2, 3) == -1
    assert cartan_pairing(1, 4) == 0
    with pytest.raises(ValueError):
        cartan_pairing(0, 1)


@pytest.mark.parametrize("sign", [1, -1])
@given(words, words, words)
def test_shuffle_associative(sign, a, b, c):
    x, y, z = (WordSum.word(w) for w in (a, b, c))
    assert shuffle_mul(shuffle_mul(x, y, sign), z, sign) == shuffle_mul(x, shuffle_mul(y, z, sign), sign)


@given(words)
def test_unit(a):
    x = WordSum.word(a)
    assert shuffle_mul(WordSum.unit(), x, 1) == x == shuffle_mul(x, WordSum.unit(), 1)


def test_two_letters():
    # e1 * e2 = 12 + v^{-1} 21 with twist +1
    p = shuffle_mul(WordSum.word((1,)), WordSum.word((2,)), 1)
    assert p == WordSum({(1, 2): ONE, (2, 1): V.bar()})


@pytest.mark.parametrize("sign", [1, -1])
def test_serre(sign):
    assert serre_holds(sign)


def test_serre_fails_with_wrong_pairing():
    bad = tuple(tuple(-x if {i, j} == {0, 1} else x for j, x in enumerate(row)) for i, row in enumerate(STANDARD_PAIRING))
    assert not serre_holds(1, bad)


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("n", range(5))
def test_divided_power_closed_form(sign, n):
    assert generator_power(2, n, sign) == generator_power_by_multiplication(2, n, sign)


def test_divided_word_parse():
    dw = DividedWord.parse("e2^3 e3^(2) e1")
    assert dw.factors == ((2, 3), (3, 2), (1, 1))
    assert dw.weight == (1, 3, 2, 0)
    assert str(dw) == "e2^3 e3^2 e1^1"
    with pytest.raises(ValueError):
        DividedWord.parse("e5^2")


def test_eval_divided_word_weight():
    x = eval_divided_word(DividedWord.parse("e1 e2^2 e1"), 1)
    assert x.weight == (2, 2, 0, 0)


def test_commuting_letters_have_no_twist():
    p = shuffle_mul(WordSum.word((1,)), WordSum.word((3,)), 1)
    assert p == WordSum({(1, 3): ONE, (3, 1): ONE})


def test_repeated_letter():
    for sign in (1, -1):
        p = shuffle_mul(WordSum.word((1,)), WordSum.word((1,)), sign)
        assert p == WordSum({(1, 1): ONE + (V * V if sign == 1 else V.bar() * V.bar())})
