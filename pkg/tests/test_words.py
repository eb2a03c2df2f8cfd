import random

import pytest

from oracles import HeisQuotient
from prostd.errors import EnumerationBoundError, WordSyntaxError
from prostd.fgl import builtin
from prostd.rings import Coefficient, padic, random_ideal_element
from prostd.series import Series, SeriesTuple
from prostd.stdgrp import StandardGroup
from prostd.words import (
    WordExpr,
    marginal_subgroup,
    parse_word,
    verbal_subgroup,
    word_image,
    word_series,
)


# -- parsing ------------------------------------------------------------------------


def test_parse_forms():
    assert parse_word("x1").letters == ((1, 1),)
    assert parse_word("x1^3").letters == ((1, 1),) * 3
    assert parse_word("x2^-2").letters == ((2, -1), (2, -1))
    assert parse_word("[x1, x2]").letters == ((1, -1), (2, -1), (1, 1), (2, 1))
    assert parse_word("(x1 x2)^2").letters == ((1, 1), (2, 1)) * 2
    assert parse_word("x1 * x2").letters == ((1, 1), (2, 1))
    assert parse_word("[x1, x2]^0").is_identity


def test_parse_reduction_and_k():
    w = parse_word("x1 x2^-1 x2 x1^-1")
    assert w.is_identity and w.k == 2
    assert parse_word("x3").k == 3


def test_parse_errors_carry_positions():
    with pytest.raises(WordSyntaxError, match="generator index") as ei:
        parse_word("x")
    assert ei.value.position == 1
    with pytest.raises(WordSyntaxError, match="start at 1"):
        parse_word("x0")
    with pytest.raises(WordSyntaxError, match="','"):
        parse_word("[x1 x2]")
    with pytest.raises(WordSyntaxError, match="unexpected character"):
        parse_word("x1)")
    with pytest.raises(WordSyntaxError, match="empty"):
        parse_word("  ")
    with pytest.raises(WordSyntaxError, match="integer"):
        parse_word("x1^")


def test_text_roundtrip():
    for text in ["x1", "x1^3 x2^-2", "[x1, x2]", "x1^3 [x2, x1]^2", "(x1 x2^-1)^4"]:
        w = parse_word(text)
        assert parse_word(w.text()) == w
    assert WordExpr(2, ()).text() == "1"


def test_word_algebra():
    u, v = parse_word("x1"), parse_word("x2")
    assert (u * u.inverse()).is_identity
    assert (u * v).inverse() == parse_word("x2^-1 x1^-1")
    assert u.power(3) == parse_word("x1^3")
    with pytest.raises(ValueError):
        u.power(0)
    with pytest.raises(ValueError):
        WordExpr(1, ((2, 1),))


# -- evaluation ------------------------------------------------------------------------


def test_evaluate_folds_left():
    G = StandardGroup(builtin("heisenberg", padic(2, 5), 5), 1)
    g = G.element(["2", "4", "8"])
    h = G.element(["6", "2", "4"])
    w = parse_word("[x1, x2]")
    assert w.evaluate(G, [g, h]) == g.inverse() * h.inverse() * g * h
    with pytest.raises(ValueError, match="x2"):
        w.evaluate(G, [g])


# -- symbolic series ---------------------------------------------------------------------


def test_word_series_additive_signed_sums():
    law = builtin("additive", padic(3, 4), 4, dim=2)
    ws = word_series(parse_word("x1 x2^-1 x1"), law)
    one = Coefficient.one(law.spec)
    # blocks: x1 -> (X1, X2), x2 -> (X3, X4); the word adds 2*x1 - x2
    two = one + one
    assert ws.W == SeriesTuple.of(
        Series.make(law.spec, 4, 4, {(1, 0, 0, 0): two, (0, 0, 1, 0): -one}),
        Series.make(law.spec, 4, 4, {(0, 1, 0, 0): two, (0, 0, 0, 1): -one}),
    )


def test_word_series_heisenberg_commutator():
    law = builtin("heisenberg", padic(2, 5), 5)
    ws = word_series(parse_word("[x1, x2]"), law)
    one = Coefficient.one(law.spec)
    zero6 = (0,) * 6
    assert ws.d == 3 and ws.W[0].is_zero and ws.W[1].is_zero
    want = {
        tuple(1 if i in (0, 4) else 0 for i in range(6)): one,
        tuple(1 if i in (1, 3) else 0 for i in range(6)): -one,
    }
    assert {a: c for a, c in ws.W[2].terms} == want
    assert ws.W[2].coefficient(zero6).is_zero


def test_word_series_matches_pointwise():
    law = builtin("heisenberg", padic(2, 5), 5)
    G = StandardGroup(law, 1)
    rng = random.Random(17)
    for text in ["x1^3", "[x1, x2]", "x1^2 x2^-1 x1^-1 x2"]:
        w = parse_word(text)
        ws = word_series(w, law)
        for _ in range(10):
            args = [G.element([random_ideal_element(law.spec, 1, rng)
                               for _ in range(3)]) for _ in range(w.k)]
            flat = tuple(c for g in args for c in g.coords)
            assert ws.W.evaluate(flat) == w.evaluate(G, args).coords


# -- finite subgroup computations ----------------------------------------------------------


def test_image_verbal_marginal_match_oracle():
    law = builtin("heisenberg", padic(2, 5), 5)
    hq = StandardGroup(law, 1).quotient(3)
    oracle = HeisQuotient(2, 1, 3)
    w = parse_word("[x1, x2]")

    def as_ints(coords):
        return tuple(int(c) for c in coords)

    got = {as_ints(x) for x in word_image(w, hq)}
    assert got == oracle.image(w.letters, 2)
    got = {as_ints(x) for x in verbal_subgroup(w, hq)}
    assert got == oracle.verbal(w.letters, 2)
    # commutator marginal = centre; brute force on the oracle side
    centre = {x for x in oracle.elements
              if all(oracle.mul(x, y) == oracle.mul(y, x) for y in oracle.elements)}
    got = {as_ints(x) for x in marginal_subgroup(w, hq)}
    assert got == centre and len(got) == 16


def test_verbal_is_a_subgroup_containing_image():
    law = builtin("heisenberg", padic(2, 5), 5)
    hq = StandardGroup(law, 1).quotient(3)
    w = parse_word("x1^2")
    image = word_image(w, hq)
    closure = verbal_subgroup(w, hq)
    assert image <= closure and hq.identity in closure
    for a in closure:
        assert hq.inv(a) in closure
        for b in closure:
            assert hq.mul(a, b) in closure


def test_tuple_guard():
    law = builtin("heisenberg", padic(2, 5), 5)
    hq = StandardGroup(law, 1).quotient(3)
    with pytest.raises(EnumerationBoundError):
        word_image(parse_word("[x1, x2]"), hq, bound=100)
    with pytest.raises(EnumerationBoundError):
        marginal_subgroup(parse_word("x1^2"), hq, bound=1000)
