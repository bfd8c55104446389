import random

import pytest
from hypothesis import given, strategies as st

from abslinf import trees as T


def texts(ts):
    return [T.to_text(t) for t in ts]


def test_corolla_is_unique_one_vertex_tree():
    assert texts(T.enumerate_trees(3, 1)) == ["(|||)"]
    assert T.enumerate_trees(1, 1, True) == []


def test_two_vertex_arity_two_with_corks():
    assert texts(T.enumerate_trees(2, 2, True)) == ["(*||)"]


def test_arity_four_weight_three_cork_free():
    got = set(texts(T.enumerate_trees(4, 3, False)))
    assert got == {"(|(|(||)))", "((||)(||))"}


@pytest.mark.parametrize("n", [0, 2, 3, 4, 5])
def test_one_vertex_count(n):
    assert len(T.enumerate_trees(n, 1, False)) == (0 if n == 0 else 1)


def test_trivial_tree():
    assert T.enumerate_trees(1, 0) == ["|"]
    assert T.symmetry_coefficient("|") == 1


def test_graft_examples():
    c2 = T.corolla(2)
    assert T.graft(c2, ["|", "|"]) == c2
    comb = T.graft(c2, [c2, "|"])
    assert T.arity(comb) == 3 and T.weight(comb) == 2
    assert T.graft(comb, ["|"] * 3) == comb
    with pytest.raises(T.TreeError):
        T.graft(c2, ["|"])


def test_symmetry_coefficients():
    assert T.symmetry_coefficient(T.corolla(3)) == 6
    assert T.symmetry_coefficient(T.parse("((||)(||))")) == 8


def test_vertex_splittings_examples():
    out = T.vertex_splittings(T.corolla(2))
    assert [(T.to_text(t), m) for t, m, _ in out] == [("(*||)", 3)]
    assert "(**)" in texts(t for t, _, _ in T.vertex_splittings(T.parse("*")))
    with pytest.raises(T.TreeError):
        T.vertex_splittings("|")


@pytest.mark.parametrize("s", ["(|||)", "((||)|)", "(*(||))", "*", "|", "((*||)(||)|)"])
def test_text_round_trip(s):
    assert T.to_text(T.parse(s)) == T.to_text(T.canonical(T.parse(s)))
    assert T.parse(T.to_text(T.parse(s))) == T.parse(s)


@pytest.mark.parametrize("bad", ["(|)", "(||", "x", "(||))"])
def test_parse_rejects(bad):
    with pytest.raises(T.TreeError):
        T.parse(bad)


def _shuffle(t, rng):
    if t in ("|", ()):
        return t
    ch = [_shuffle(c, rng) for c in t]
    rng.shuffle(ch)
    return tuple(ch)


ALL = [t for n in range(0, 6) for w in range(0, 10 - n) for t in T.enumerate_trees(n, w)
       if n + w <= 9 and w <= 4]


@given(st.sampled_from(ALL), st.integers(0, 10 ** 6))
def test_canonical_invariance(t, seed):
    assert T.canonical(t) == t
    assert T.key(T.canonical(_shuffle(t, random.Random(seed)))) == T.key(t)


@given(st.sampled_from([t for t in ALL if T.arity(t) <= 3 and T.weight(t) <= 2]), st.data())
def test_graft_additive_and_associative(t, data):
    small = [s for s in ALL if T.weight(s) <= 1 and T.arity(s) <= 2]
    kids = [data.draw(st.sampled_from(small)) for _ in range(T.arity(t))]
    g = T.graft(t, kids)
    assert T.arity(g) == sum(T.arity(k) for k in kids)
    assert T.weight(g) == T.weight(t) + sum(T.weight(k) for k in kids)
    # leaf numbering changes under canonicalization, so substitute one tree everywhere
    s = data.draw(st.sampled_from(["|", T.corolla(2), T.parse("(*||)")]))
    inner = [T.graft(k, [s] * T.arity(k)) for k in kids]
    assert T.graft(g, [s] * T.arity(g)) == T.graft(t, inner)


@given(st.sampled_from([t for t in ALL if 1 <= T.weight(t) <= 3]))
def test_splittings_contract_back(t):
    for s, mult, sign in T.vertex_splittings(t):
        assert mult >= 1 and sign in (1, -1)
        # a cork splits into a binary vertex carrying two corks
        grow = T.weight(s) - T.weight(t)
        assert grow == 1 or (grow == 2 and "(**)" in T.to_text(s))
        assert t in T.contractions(s)
