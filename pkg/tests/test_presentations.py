from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import CONE, FREE, SPLIT
from octantgroups.groups import ModelGroup, harvest_relations
from octantgroups.presentations import (PRESENTATIONS, ASSIGNMENTS, Equivalence, Presentation,
                                        assignment_str, ball_partition, free_ball, g3_normal_forms,
                                        g4_normal_forms, match_presentation, presentation_ball,
                                        to_model_word, word_equiv)
from octantgroups.words import free_reduce, reduced_words

RADIUS = 6
COXETER = ["G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "G12"]

# Cartan entry pairs (a_ij, a_ji) whose product fixes the order of s_i s_j
CARTAN = {2: [(0, 0)], 3: [(-1, -1)], 4: [(-1, -2), (-2, -1)],
          None: [(-2, -2), (-1, -4), (-4, -1), (-2, -3), (-3, -2)]}


def _coxeter_orders(ident):
    orders = {"ab": None, "ac": None, "bc": None}
    for r in PRESENTATIONS[ident].relators:
        pair = "".join(sorted(set(r)))
        assert len(pair) == 2 and r == r[:2] * (len(r) // 2)
        orders[pair] = len(r) // 2
    return orders


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _cartan(ident):
    """A nondegenerate generalised Cartan matrix for the Coxeter group, so the
    reflection action on the root lattice is faithful."""
    orders = _coxeter_orders(ident)
    pairs = [(0, 1), (0, 2), (1, 2)]
    choices = [CARTAN[orders["abc"[i] + "abc"[j]]] for i, j in pairs]
    for pick in product(*choices):
        a = [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
        for (i, j), (x, y) in zip(pairs, pick):
            a[i][j], a[j][i] = x, y
        if _det3(a):
            return a
    raise AssertionError("no nondegenerate Cartan matrix")


def _reflections(a):
    mats = []
    for i in range(3):
        # column j holds s_i(alpha_j) = alpha_j - a_ij alpha_i
        m = [[int(r == c) for c in range(3)] for r in range(3)]
        for j in range(3):
            m[i][j] -= a[i][j]
        mats.append(m)
    return mats


def _mul(p, q):
    return [[sum(p[i][k] * q[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def coxeter_partition(ident, radius):
    gens = _reflections(_cartan(ident))
    mats = {"": [[int(i == j) for j in range(3)] for i in range(3)]}
    ids: dict = {}
    out = []
    for w in reduced_words(radius):
        if w:
            mats[w] = _mul(gens["abc".index(w[0])], mats[w[1:]])
        out.append(ids.setdefault(tuple(map(tuple, mats[w])), len(ids)))
    return tuple(out)


@pytest.mark.parametrize("ident", COXETER)
def test_ball_partition_matches_reflection_oracle(ident):
    assert ball_partition(PRESENTATIONS[ident], RADIUS) == coxeter_partition(ident, RADIUS)


@pytest.mark.parametrize("ident", ["G9", "G10", "G11"])
def test_shipped_partitions_match_recomputation(ident):
    p = PRESENTATIONS[ident]
    assert ball_partition(p, RADIUS) == ball_partition(p, RADIUS, use_cache=False)


@pytest.mark.parametrize("ident", sorted(PRESENTATIONS))
def test_relators_are_trivial(ident):
    for r in PRESENTATIONS[ident].relators:
        assert word_equiv(ident, r, "") is Equivalence.EQUAL
        assert word_equiv(ident, r[::-1], "") is Equivalence.EQUAL


def test_word_equiv_separates():
    assert word_equiv("G1", "ab", "ba") is Equivalence.NOT_EQUAL_WITHIN_BUDGET
    assert word_equiv("G2", "ab", "ba") is Equivalence.EQUAL
    assert word_equiv("G5", "aba", "bab") is Equivalence.EQUAL
    assert word_equiv("G5", "ab", "ba") is Equivalence.NOT_EQUAL_WITHIN_BUDGET
    assert word_equiv("G3", "abc", "bca") is Equivalence.EQUAL  # a is central


def test_free_ball_and_g1():
    assert presentation_ball("G1", RADIUS) == free_ball(RADIUS)


def test_g3_normal_forms_count_sphere_sizes():
    forms = g3_normal_forms(RADIUS)
    counts = [sum(1 for w in forms if len(w) == n) for n in range(RADIUS + 1)]
    assert counts == presentation_ball("G3", RADIUS)
    oracle = coxeter_partition("G3", RADIUS)
    words = reduced_words(RADIUS)
    assert len({oracle[words.index(w)] for w in forms}) == len(forms)


def test_g4_normal_forms_cover_ball():
    forms = [w for w in g4_normal_forms(RADIUS)]
    oracle = coxeter_partition("G4", RADIUS)
    words = reduced_words(RADIUS)
    assert {oracle[words.index(w)] for w in forms} == set(oracle)


@given(st.sampled_from(ASSIGNMENTS), st.text("abc", max_size=8))
def test_model_word_translation_respects_inverses(assignment, w):
    w = free_reduce(w)
    assert free_reduce(to_model_word(w, assignment) + to_model_word(w[::-1], assignment)) == ""


def test_relabel_keeps_identity():
    p = PRESENTATIONS["G4"].relabel({"a": "b", "b": "a", "c": "c"})
    assert isinstance(p, Presentation) and p.relators == ("bcbc", "bababa")


def test_free_model_has_no_short_relations():
    assert harvest_relations(FREE, 10) == {}
    m = match_presentation(FREE)
    assert m.result == "G1"


def test_split_matches_g3_exactly():
    m = match_presentation(SPLIT)
    assert m.result == "G3" and m.ball_exact
    assert set(m.confirmed.values()) == {"exact"}
    g = ModelGroup(SPLIT)
    for r in PRESENTATIONS["G3"].relators:
        assert g.confirm_relation(to_model_word(r, m.assignment)) == "exact"


def test_cone_model_matches_g4():
    m = match_presentation(CONE)
    assert m.result == "G4" and m.ball_exact
    assert assignment_str(m.assignment).count("=") == 3
