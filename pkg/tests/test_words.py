from __future__ import annotations

from hypothesis import given, strategies as st

from octantgroups.words import (ball_size, cyclic_reduce, free_reduce, inverse, is_reduced, power,
                                reduced_words, substitute_letters)

words = st.text(alphabet="abc", max_size=20)


@given(words)
def test_free_reduction(w):
    r = free_reduce(w)
    assert is_reduced(r)
    assert free_reduce(r) == r
    assert free_reduce(w + inverse(w)) == ""


@given(words)
def test_cyclic_reduction(w):
    c = cyclic_reduce(w)
    assert is_reduced(c)
    assert len(c) <= 1 or c[0] != c[-1]


def test_ball_enumeration():
    for r in range(8):
        ws = reduced_words(r)
        assert len(ws) == len(set(ws)) == ball_size(r)
        assert all(is_reduced(w) and len(w) <= r for w in ws)
        assert [len(w) for w in ws] == sorted(len(w) for w in ws)


def test_helpers():
    assert power("ab", 3) == "ababab"
    assert power("aba", 2) == ""  # a conjugate of an involution
    assert free_reduce("abccba") == ""
    assert substitute_letters("abc", {"a": "b", "b": "a", "c": "c"}) == "bac"
    assert substitute_letters("ab", {"a": "c", "b": "c"}) == ""
