from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from conftest import CONE, PRODUCT, FREE, SPLIT, rare_fixtures
from octantgroups import _pykernels as python
from octantgroups import kernels
from octantgroups.algebra import DEFAULT_PRIME
from octantgroups.groups import support_masks
from octantgroups.stepset import decode_diagram

compiled = pytest.importorskip("octantgroups._ckernels")
P = DEFAULT_PRIME
MODELS = [FREE, SPLIT, CONE, PRODUCT] + [decode_diagram(d) for _, d in rare_fixtures()[::7]]


def _state(rng, npoints=3):
    st = []
    for _ in range(3 * npoints):
        v = rng.randrange(1, P)
        st += [v, pow(v, -1, P)]
    return st


def test_backend_selected():
    assert kernels.BACKEND == "compiled"


@given(st.integers(1, (1 << 26) - 1))
def test_mask_predicates_agree(m):
    assert compiled.is_canonical(m) == python.is_canonical(m)
    assert compiled.is_nondegenerate(m) == python.is_nondegenerate(m)


@pytest.mark.parametrize("lo", [1, 1_500_000, 2_900_000])
def test_scan_agrees(lo):
    assert compiled.scan_masks(lo, lo + 20_000, 3) == python.scan_masks(lo, lo + 20_000, 3)


@pytest.mark.parametrize("s", MODELS, ids=lambda s: s.hex)
def test_group_kernels_agree(s):
    sup = support_masks(s)
    st0 = _state(random.Random(s.bits))
    for args in ((sup, st0, P, 60), (sup, st0, P, 400)):
        assert compiled.closure(*args) == python.closure(*args)
    gens = [[0], [1], [2]]
    assert compiled.ball_classes(sup, gens, st0, P, 6) == python.ball_classes(sup, gens, st0, P, 6)
    for w in ([0, 1], [1, 2], [0, 2], [0, 1, 2], [2, 1, 0, 1]):
        assert compiled.word_order(sup, w, st0, P, 50) == python.word_order(sup, w, st0, P, 50)
        assert compiled.apply_axes(sup, w, st0, P) == python.apply_axes(sup, w, st0, P)


@pytest.mark.parametrize("s", MODELS, ids=lambda s: s.hex)
def test_tropical_scan_agrees(s):
    sup = support_masks(s)
    rng = random.Random(s.bits)
    starts = [rng.randint(-9, 9) for _ in range(3 * 40)]
    for axes in ([2, 1], [1, 2], [0, 1, 2], [2, 0, 1, 0]):
        for first in (0, 5):
            assert (compiled.tropical_scan(sup, axes, starts, 48, first)
                    == python.tropical_scan(sup, axes, starts, 48, first))
