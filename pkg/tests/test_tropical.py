from __future__ import annotations

import json
import random

import flint
import pytest
from hypothesis import given, strategies as st

from conftest import CONE, DATA, PRODUCT, FREE, SPLIT
from octantgroups.stepset import StepSet, axis_supports, canonicalize, singular_projections
from octantgroups.tropical import (Cone, ConeProof, EscapeCertificate, Failure, check_certificate,
                                   cone_verify, discover_cone, escape_certificate, linearise, matvec,
                                   tropical_apply, tropical_generators, tropical_orbit)

T = flint.fmpq_poly([0, 1])


class Series:
    """t^k * num / den with num(0), den(0) nonzero: a rational function of t."""

    def __init__(self, k, num, den=None):
        den = flint.fmpq_poly([1]) if den is None else den
        for which in ("num", "den"):
            p = num if which == "num" else den
            while p[0] == 0:
                p = flint.fmpq_poly(p.coeffs()[1:])
                k += 1 if which == "num" else -1
            if which == "num":
                num = p
            else:
                den = p
        self.k, self.num, self.den = k, num, den

    @property
    def valuation(self):
        return self.k

    def __mul__(self, o):
        return Series(self.k + o.k, self.num * o.num, self.den * o.den)

    def inverse(self):
        return Series(-self.k, self.den, self.num)

    def __add__(self, o):
        m = min(self.k, o.k)
        num = self.num * o.den * T ** (self.k - m) + o.num * self.den * T ** (o.k - m)
        return Series(m, num, self.den * o.den)

    def __pow__(self, e):
        if e == 0:
            return Series(0, flint.fmpq_poly([1]))
        return self if e == 1 else self.inverse()


def series_apply(s, word, vals):
    """Exact action of the generators on (x, y, z) in Q(t)."""
    vals = list(vals)
    for ch in reversed(word):
        axis = "abc".index(ch)
        i, j = (k for k in range(3) if k != axis)
        minus, _, plus = axis_supports(s, axis)

        def poly(sup):
            terms = [vals[i] ** a * vals[j] ** b for a, b in sup]
            out = terms[0]
            for t in terms[1:]:
                out = out + t
            return out

        vals[axis] = poly(minus) * (poly(plus) * vals[axis]).inverse()
    return vals


vals3 = st.tuples(*[st.integers(-4, 4)] * 3)


@pytest.mark.parametrize("s", [FREE, SPLIT, CONE], ids=lambda s: s.hex)
@given(t=vals3, word=st.text("abc", min_size=1, max_size=3), seed=st.integers(0, 99))
def test_valuation_maps_match_exact_series(s, t, word, seed):
    rng = random.Random(seed)
    # positive leading coefficients, so minimal terms never cancel
    start = [Series(e, flint.fmpq_poly([rng.randint(1, 9), rng.randint(-9, 9)])) for e in t]
    out = series_apply(s, word, start)
    assert tuple(v.valuation for v in out) == tropical_apply(word, s, t)


def test_linear_pieces_on_the_cone():
    proof = cone_verify(CONE, "w > v > -u > 0")
    assert isinstance(proof, ConeProof)
    u, v, w = 3, 5, 7
    # phi_z phi_y and phi_x phi_z phi_y on w > v > -u > 0
    assert matvec(proof.maps["cb"], (-u, v, w)) == (-u, u - v + 2 * w, u - 2 * v + 3 * w)
    assert matvec(proof.maps["acb"], (-u, v, w)) == (v - 2 * w, u - v + 2 * w, u - 2 * v + 3 * w)
    assert proof.maps["cb"] == ((1, 0, 0), (-1, -1, 2), (-1, -2, 3))
    assert proof.maps["acb"] == ((0, 1, -2), (-1, -1, 2), (-1, -2, 3))
    assert all(proof.facts.values())
    assert json.loads(json.dumps(proof.to_dict()))["cone_text"] == str(proof.cone)


@given(st.integers(1, 30), st.integers(1, 30), st.integers(1, 30))
def test_cone_formulas_hold_pointwise(a, b, c):
    # a point of w > v > -u > 0
    u, v, w = -a, a + b, a + b + c
    assert tropical_apply("cb", CONE, (u, v, w)) == (u, -u - v + 2 * w, -u - 2 * v + 3 * w)
    assert tropical_apply("acb", CONE, (u, v, w)) == (v - 2 * w, -u - v + 2 * w, -u - 2 * v + 3 * w)


def test_cone_failures():
    assert isinstance(cone_verify(CONE, "u > 0; -u > 0"), Failure)
    assert cone_verify(CONE, "u > 0; -u > 0").reason == "EmptyCone"
    assert isinstance(cone_verify(FREE, "w > v > -u > 0"), Failure)
    bad = cone_verify(CONE, "w > v > -u > 0", {"a": "yxy", "b": "y", "c": "z"})
    assert bad.reason == "UnsupportedAssignment"


def test_cone_parsing():
    c = Cone.parse("w > v > -u > 0")
    assert c.rows == [(0, -1, 1), (1, 1, 0), (-1, 0, 0)]
    assert all(sum(r[k] * c.witness[k] for k in range(3)) > 0 for r in c.rows)
    assert Cone.parse("w>v; v>-u; -u>0").rows == c.rows


def test_discover_cone_for_cone_model():
    assert isinstance(discover_cone(CONE), ConeProof)


@pytest.mark.parametrize("s", [SPLIT, CONE], ids=["SPLIT", "CONE"])
def test_certificates_found_and_checked(s):
    cert = escape_certificate(s)
    assert cert is not None and cert.word == "cb" and cert.kind == "drift"
    assert check_certificate(s, cert)
    again = EscapeCertificate.from_dict(json.loads(cert.to_json()))
    assert again.to_dict() == cert.to_dict() and check_certificate(s, again)
    tampered = EscapeCertificate.from_dict({**cert.to_dict(), "functional": [1, 0, 0]})
    assert not check_certificate(s, tampered)
    short = EscapeCertificate.from_dict({**cert.to_dict(), "start": [0, 0, 0]})
    assert not check_certificate(s, short)


def test_finite_group_has_no_certificate():
    assert escape_certificate(PRODUCT) is None


def test_linearisation_matches_maps():
    gens = tropical_generators(SPLIT)
    t = (2, -3, 5)
    lin = linearise("cb", gens, t)
    assert lin is not None
    assert matvec(lin.matrix, t) == tropical_apply("cb", gens, t)


def test_finite_orbits_rule_out_escape():
    # the FREE valuation orbit of (1,0,0) closes after four points
    orbit = tropical_orbit(FREE, (1, 0, 0))
    assert orbit is not None and len(orbit) == 4
    assert tropical_orbit(SPLIT, (0, -1, 0), cap=1000) is None


def test_shipped_singular_g4_cones_verify():
    entries = json.loads((DATA / "singular_g4.json").read_text())
    assert len(entries) == 22
    assert canonicalize(CONE)[0].hex in {e["mask"] for e in entries}
    for e in entries:
        s = StepSet(int(e["mask"], 16))
        assert singular_projections(s) == e["singular"]
        amap = dict(kv.split("=") for kv in e["assignment"].split(","))
        assert isinstance(cone_verify(s, e["cone"], amap), ConeProof)


def test_discover_cone_tries_letter_permutations():
    # only the assignment a=x, b=z, c=y admits a template cone for this model
    s = StepSet(0x004C100)
    proof = discover_cone(s)
    assert isinstance(proof, ConeProof)
    assert proof.assignment == {"a": "x", "b": "z", "c": "y"}
    assert discover_cone(s, {"a": "x", "b": "y", "c": "z"}) is None
