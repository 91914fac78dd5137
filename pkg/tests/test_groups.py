from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import CONE, PRODUCT, FREE, SPLIT
from octantgroups.algebra import DEFAULT_PRIME, EvaluationPoint
from octantgroups.groups import (ExceedsCutoff, FiniteOrder, GroupUndefined, ModelGroup, apply_word,
                                 element_order, element_words, fingerprint_orders, group_closure,
                                 harvest_relations)
from octantgroups.stepset import StepSet

MODELS = [FREE, SPLIT, CONE, PRODUCT]
coords = st.fractions(min_value=Fraction(1, 9), max_value=9, max_denominator=9)
points = st.tuples(coords, coords, coords).map(EvaluationPoint)


def _reduce(pt: EvaluationPoint, p: int = DEFAULT_PRIME) -> EvaluationPoint:
    return EvaluationPoint(tuple(v.numerator * pow(v.denominator, -1, p) for v in pt.values), p)


@pytest.mark.parametrize("s", MODELS, ids=lambda s: s.hex)
@given(pt=points)
def test_generators_are_involutions(s, pt):
    for letter in "abc":
        assert apply_word(letter * 2, s, pt) == pt


@pytest.mark.parametrize("s", MODELS, ids=lambda s: s.hex)
@given(pt=points, word=st.text("abc", min_size=1, max_size=6))
def test_exact_and_modular_actions_agree(s, pt, word):
    assert _reduce(apply_word(word, s, pt)) == apply_word(word, s, _reduce(pt))


@pytest.mark.parametrize("s", MODELS, ids=lambda s: s.hex)
def test_symbolic_images_agree_with_pointwise(s):
    g = ModelGroup(s)
    pt = EvaluationPoint((Fraction(2, 3), Fraction(5, 7), Fraction(3, 2)))
    for word in ("ab", "cba", "abcb"):
        assert g.birational_map(word)(pt) == apply_word(word, s, pt)


def test_no_group_rejected():
    with pytest.raises(GroupUndefined):
        ModelGroup(StepSet.from_steps([(1, 1, 1), (-1, 0, 0)]))


def test_split_relations_exact():
    g = ModelGroup(SPLIT)
    for rel in ("abab", "acac"):
        assert g.confirm_relation(rel) == "exact"
    assert g.confirm_relation("bcbc") is None
    assert element_order("bc", g).exceeds


def test_free_model_free_to_length_ten():
    assert harvest_relations(FREE, 10) == {}
    fp = fingerprint_orders(FREE)
    assert (fp.ab, fp.ac, fp.bc) == (None, None, None)


def test_product_model_is_finite():
    c = group_closure(PRODUCT)
    assert c.verdict == FiniteOrder(8)
    words = element_words(c.table)
    assert len(set(words)) == 8 and words[0] == ""
    assert sum(c.spheres) == 8


def test_infinite_closures():
    for s in (FREE, SPLIT, CONE):
        assert isinstance(group_closure(s, 200).verdict, ExceedsCutoff)


def test_cone_model_fingerprint():
    fp = fingerprint_orders(CONE)
    assert sorted(o for o in (fp.ab, fp.ac, fp.bc) if o) == [2, 3]


def test_seed_reproducible():
    a, b = ModelGroup(FREE, seed=5), ModelGroup(FREE, seed=5)
    assert a.state == b.state and a.fingerprint("abc") == b.fingerprint("abc")
