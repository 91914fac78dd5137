"""Valuation (min-plus) dynamics of the generators.

If x, y, z are Laurent series in t of valuations u, v, w, each generator acts on
(u, v, w) by a piecewise-linear map: the acted-on coordinate becomes
val(minus part) - val(plus part) minus itself, where a support's valuation is the
least dot product of its exponents with the passive coordinates.  Wherever the
minimizers are unique the maps are integer-linear, and statements about them can
be proved exactly over a polyhedral cone with nonnegative combinations of the
cone's defining forms.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterable, Sequence

from .stepset import StepSet, axis_supports, has_group
from . import kernels
from .groups import GroupUndefined, support_masks
from .words import LETTERS, cyclic_reduce, free_reduce

Vec = tuple[int, int, int]
Matrix = tuple[Vec, Vec, Vec]

ASSUMED_LEMMA = ("relations of G(S) hold for the valuation maps, so an element of infinite "
                 "order in the valuation group has infinite order in G(S)")


def _passive(axis: int) -> tuple[int, int]:
    return tuple(a for a in range(3) if a != axis)  # type: ignore[return-value]


@dataclass(frozen=True)
class TropicalGenerator:
    axis: int
    minus: tuple[tuple[int, int], ...]
    plus: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "_passive", _passive(self.axis))

    def __call__(self, t: Sequence[int]) -> Vec:
        i, j = self._passive
        p, q = t[i], t[j]
        vm = min([a * p + b * q for a, b in self.minus])
        vp = min([a * p + b * q for a, b in self.plus])
        out = list(t)
        out[self.axis] = vm - vp - t[self.axis]
        return tuple(out)  # type: ignore[return-value]

    def minimizers(self, t: Sequence[int]) -> tuple[list, list]:
        i, j = _passive(self.axis)
        p, q = t[i], t[j]
        out = []
        for sup in (self.minus, self.plus):
            vals = [a * p + b * q for a, b in sup]
            m = min(vals)
            out.append([e for e, v in zip(sup, vals) if v == m])
        return out[0], out[1]

    def matrix(self, em: tuple[int, int], ep: tuple[int, int]) -> Matrix:
        """Linear map when ``em`` and ``ep`` are the minimizing exponents."""
        i, j = _passive(self.axis)
        rows = [[int(r == c) for c in range(3)] for r in range(3)]
        row = [0, 0, 0]
        row[i] = em[0] - ep[0]
        row[j] = em[1] - ep[1]
        row[self.axis] = -1
        rows[self.axis] = row
        return tuple(tuple(r) for r in rows)  # type: ignore[return-value]


def tropical_generators(s: StepSet) -> tuple[TropicalGenerator, TropicalGenerator, TropicalGenerator]:
    if not has_group(s):
        raise GroupUndefined(f"stepset {s.hex} has no group")
    out = []
    for axis in range(3):
        minus, _, plus = axis_supports(s, axis)
        out.append(TropicalGenerator(axis, tuple(sorted(minus)), tuple(sorted(plus))))
    return tuple(out)  # type: ignore[return-value]


def tropical_apply(word: str, s: StepSet | Sequence[TropicalGenerator], t: Sequence[int]) -> Vec:
    gens = tropical_generators(s) if isinstance(s, StepSet) else s
    t = tuple(t)
    for ch in reversed(word):
        t = gens[LETTERS.index(ch)](t)
    return t  # type: ignore[return-value]


# -- exact linear algebra on cones ----------------------------------------------------------

def matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(sum(a[r][k] * b[k][c] for k in range(3)) for c in range(3))
                 for r in range(3))  # type: ignore[return-value]


def matvec(m: Matrix, t: Sequence[int]) -> Vec:
    return tuple(sum(m[r][k] * t[k] for k in range(3)) for r in range(3))  # type: ignore[return-value]


def rowmat(r: Sequence[int], m: Matrix) -> Vec:
    return tuple(sum(r[k] * m[k][c] for k in range(3)) for c in range(3))  # type: ignore[return-value]


IDENTITY: Matrix = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _normalize(r: Sequence[int]) -> Vec:
    from math import gcd

    g = 0
    for x in r:
        g = gcd(g, abs(x))
    return tuple(x // g for x in r) if g else tuple(r)  # type: ignore[return-value]


def _solve(rows: Sequence[Sequence[int]], target: Sequence[int]) -> list[Fraction] | None:
    """Exact least-norm-free solve of sum(l_i rows_i) = target for independent rows."""
    k = len(rows)
    # normal equations on the 3 coordinates: augmented 3 x k system, Gaussian elimination
    a = [[Fraction(rows[j][c]) for j in range(k)] + [Fraction(target[c])] for c in range(3)]
    piv_cols = []
    r = 0
    for col in range(k):
        p = next((i for i in range(r, 3) if a[i][col] != 0), None)
        if p is None:
            return None
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(3):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(col)
        r += 1
    for i in range(r, 3):
        if a[i][k] != 0:
            return None
    return [a[i][k] for i in range(k)]


def positive_on_cone(form: Sequence[int], rows: Sequence[Sequence[int]]) -> list[Fraction] | None:
    """Multipliers l >= 0, not all zero, with form = sum l_i rows_i (then form > 0 on the cone).

    By Caratheodory at most three linearly independent rows are needed.
    """
    if not any(form):
        return None
    for k in (1, 2, 3):
        for idx in combinations(range(len(rows)), k):
            lam = _solve([rows[i] for i in idx], form)
            if lam is not None and all(x >= 0 for x in lam) and any(x > 0 for x in lam):
                full = [Fraction(0)] * len(rows)
                for i, x in zip(idx, lam):
                    full[i] = x
                return full
    return None


def nonnegative_on_cone(form: Sequence[int], rows: Sequence[Sequence[int]]) -> bool:
    return not any(form) or positive_on_cone(form, rows) is not None


# -- linearisation along a word ----------------------------------------------------------------

@dataclass
class Linearisation:
    matrix: Matrix
    rows: list[Vec]  # uniqueness conditions: each row . t > 0


def linearise(word: str, gens: Sequence[TropicalGenerator], t: Sequence[int],
              start: Matrix = IDENTITY) -> Linearisation | None:
    """Matrix of ``word`` near ``t`` plus the strict inequalities keeping it valid.

    ``None`` if some minimizer along the way is not unique at ``t``.
    """
    m = start
    rows: list[Vec] = []
    cur = matvec(m, t)
    for ch in reversed(word):
        g = gens[LETTERS.index(ch)]
        mins = g.minimizers(cur)
        if len(mins[0]) != 1 or len(mins[1]) != 1:
            return None
        i, j = _passive(g.axis)
        for sup, best in ((g.minus, mins[0][0]), (g.plus, mins[1][0])):
            for e in sup:
                if e != best:
                    r = [0, 0, 0]
                    r[i] = e[0] - best[0]
                    r[j] = e[1] - best[1]
                    rows.append(_normalize(rowmat(r, m)))
        m = matmul(g.matrix(mins[0][0], mins[1][0]), m)
        cur = matvec(m, t)
    return Linearisation(m, sorted(set(rows)))


# -- escape certificates -----------------------------------------------------------------------

@dataclass
class EscapeCertificate:
    word: str
    start: Vec
    matrix: Matrix
    cone: list[Vec]
    functional: Vec  # the drift vector for drift certificates
    multipliers: dict
    horizon: int
    assumed: str = ASSUMED_LEMMA

    @property
    def kind(self) -> str:
        return "drift" if "drift" in self.multipliers else "cone"

    def to_dict(self) -> dict:
        return {"word": self.word, "start": list(self.start),
                "matrix": [list(r) for r in self.matrix],
                "translation": [0, 0, 0],
                "cone": [list(r) for r in self.cone], "functional": list(self.functional),
                "multipliers": {k: [str(x) for x in v] for k, v in self.multipliers.items()},
                "horizon": self.horizon, "kind": self.kind, "assumed": self.assumed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "EscapeCertificate":
        return cls(d["word"], tuple(d["start"]), tuple(tuple(r) for r in d["matrix"]),
                   [tuple(r) for r in d["cone"]], tuple(d["functional"]),
                   {k: [Fraction(x) for x in v] for k, v in d["multipliers"].items()},
                   d["horizon"], d.get("assumed", ASSUMED_LEMMA))


def _search_words(max_len: int) -> list[str]:
    """Cyclically reduced words of length 2..max_len, one per rotation class."""
    out = []
    seen = set()
    level = [""]
    for n in range(1, max_len + 1):
        level = [w + ch for w in level for ch in LETTERS if not w or w[-1] != ch]
        for w in level:
            if n < 2 or w[0] == w[-1]:
                continue
            rot = max(w[i:] + w[:i] for i in range(n))
            if rot not in seen:
                seen.add(rot)
                out.append(rot)
    return out


def _starts(box: int) -> list[Vec]:
    pts = [p for p in product(range(-box, box + 1), repeat=3) if any(p)]
    return sorted(pts, key=lambda p: (sum(map(abs, p)), p))


FUNCTIONALS: list[Vec] = sorted((f for f in product((-1, 0, 1), repeat=3) if any(f)),
                                key=lambda f: (sum(map(abs, f)), f))


def prove_escape(word: str, gens: Sequence[TropicalGenerator], point: Sequence[int]):
    """Try to prove that iterating ``word`` from ``point`` escapes to infinity.

    Two arguments are tried.  Drift: with M the local matrix and d = M t - t,
    if M d = d and every uniqueness form is positive at t and nonnegative on d,
    the orbit is t + n d and never leaves the linear region.  Cone: M maps the
    uniqueness cone K into itself and some functional f has f(Mt) - f(t)
    positive on K, so f grows by at least 1 per step.
    """
    lin = linearise(word, gens, point)
    if lin is None:
        return None
    m, rows = lin.matrix, lin.rows
    if any(dot(r, point) <= 0 for r in rows):
        return None
    drift = tuple(a - b for a, b in zip(matvec(m, point), point))
    if any(drift) and matvec(m, drift) == drift and all(dot(r, drift) >= 0 for r in rows):
        return m, rows, drift, {"drift": [Fraction(x) for x in drift]}
    if not rows:
        return None
    proof = _cone_proof(m, tuple(rows))
    return None if proof is None else (m, rows, proof[0], proof[1])


@lru_cache(maxsize=4096)
def _cone_proof(m: Matrix, rows: tuple[Vec, ...]):
    """Functional and multipliers for the cone argument; depends only on (M, K)."""
    mult = {}
    for r in rows:
        lam = positive_on_cone(rowmat(r, m), rows)
        if lam is None:
            return None
        mult["invariant:" + ",".join(map(str, r))] = lam
    for f in FUNCTIONALS:
        growth = tuple(a - b for a, b in zip(rowmat(f, m), f))
        lam = positive_on_cone(growth, rows)
        if lam is not None:
            mult["growth"] = lam
            return f, mult
    return None


def escape_certificate(s: StepSet, max_word_len: int = 6, horizon: int = 64,
                       box: int = 8) -> EscapeCertificate | None:
    """Search short words and small starting triples for a provably escaping orbit.

    An orbit qualifies when its l1-norm increases strictly for ``horizon`` steps; the
    tail is then linearised and the escape proved exactly (see ``prove_escape``).
    """
    gens = tropical_generators(s)
    sup = support_masks(s)
    starts = _starts(box)
    flat = [c for p in starts for c in p]
    for word in _search_words(max_word_len):
        axes = [LETTERS.index(ch) for ch in reversed(word)]
        first = 0
        while True:
            # compiled screen; its arithmetic is exact below the bailout bound
            idx, end = kernels.tropical_scan(sup, axes, flat, horizon, first)
            if idx < 0:
                break
            first = idx + 1
            t0 = starts[idx]
            t = end if end is not None else _grow(word, gens, t0, horizon)
            if t is None:
                continue
            cert = _certify(word, gens, t0, t, horizon)
            if cert is not None:
                return cert
    return None


def _certify(word: str, gens, t0: Vec, t: Vec, horizon: int) -> EscapeCertificate | None:
    """Prove escape for ``word`` from its orbit point ``t``, else for ``word`` squared.

    The square handles orbits that alternate sides, where M d = -d rather than d.
    """
    proof = prove_escape(word, gens, t)
    if proof is None:
        word = word * 2
        t = _grow(word, gens, t0, horizon)
        proof = None if t is None else prove_escape(word, gens, t)
    if proof is None:
        return None
    m, rows, f, mult = proof
    return EscapeCertificate(word, t0, m, rows, f, mult, horizon)


def _grow(word: str, gens, t0: Vec, horizon: int) -> Vec | None:
    """End point of ``horizon`` applications of ``word`` if the l1-norm rises at each."""
    t = t0
    norm = sum(map(abs, t))
    for _ in range(horizon):
        t = tropical_apply(word, gens, t)
        n2 = sum(map(abs, t))
        if n2 <= norm:
            return None
        norm = n2
    return t


def tropical_orbit(s: StepSet, t: Sequence[int], cap: int = 200_000) -> set[Vec] | None:
    """Full orbit of ``t`` under the three tropical maps, or None past ``cap`` points.

    A finite orbit rules out escape from ``t`` for every word at once.
    """
    gens = tropical_generators(s)
    seen = {tuple(t)}
    frontier = [tuple(t)]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = g(p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        if len(seen) > cap:
            return None
        frontier = nxt
    return seen


def check_certificate(s: StepSet, cert: EscapeCertificate) -> bool:
    """Re-verify a certificate from scratch with exact arithmetic."""
    gens = tropical_generators(s)
    t = tuple(cert.start)
    norm = sum(map(abs, t))
    for _ in range(cert.horizon):
        t = tropical_apply(cert.word, gens, t)
        if sum(map(abs, t)) <= norm:
            return False
        norm = sum(map(abs, t))
    lin = linearise(cert.word, gens, t)
    if lin is None or lin.matrix != tuple(cert.matrix):
        return False
    rows = [tuple(r) for r in cert.cone]
    if not set(lin.rows) <= set(rows) or any(dot(r, t) <= 0 for r in rows):
        return False
    if "drift" in cert.multipliers:
        d = tuple(a - b for a, b in zip(matvec(lin.matrix, t), t))
        return (any(d) and d == tuple(cert.functional) and matvec(lin.matrix, d) == d
                and all(dot(r, d) >= 0 for r in rows))
    for r in rows:
        if positive_on_cone(rowmat(r, lin.matrix), rows) is None:
            return False
    growth = tuple(a - b for a, b in zip(rowmat(cert.functional, lin.matrix), cert.functional))
    return positive_on_cone(growth, rows) is not None


# -- cone verification for G4-type models ------------------------------------------------------

@dataclass
class Cone:
    rows: list[Vec]  # strict inequalities row . (u, v, w) > 0
    witness: Vec | None = None

    @classmethod
    def parse(cls, text: str) -> "Cone":
        """Parse ``"w > v; v > -u; -u > 0"`` or chained ``"w > v > -u > 0"``."""
        rows: list[Vec] = []
        for part in text.replace(",", ";").split(";"):
            part = part.strip()
            if not part:
                continue
            terms = [_linear(x) for x in part.split(">")]
            for lhs, rhs in zip(terms, terms[1:]):
                rows.append(tuple(a - b for a, b in zip(lhs, rhs)))
        return cls(rows).with_witness()

    def with_witness(self, box: int = 8) -> "Cone":
        for p in _starts(box):
            if all(dot(r, p) > 0 for r in self.rows):
                return Cone(self.rows, p)
        return Cone(self.rows, None)

    def __str__(self) -> str:
        return "; ".join(f"{_fmt(r)} > 0" for r in self.rows)


def _linear(expr: str) -> Vec:
    expr = expr.replace(" ", "").replace("-", "+-")
    out = [0, 0, 0]
    for term in filter(None, expr.split("+")):
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("-")
        if term == "0":
            continue
        coef, var = term[:-1], term[-1]
        if var not in "uvw":
            raise ValueError(f"bad term {term!r}")
        out["uvw".index(var)] += sign * (int(coef) if coef else 1)
    return tuple(out)  # type: ignore[return-value]


def _fmt(r: Sequence[int]) -> str:
    parts = []
    for c, name in zip(r, "uvw"):
        if c:
            parts.append(("-" if c < 0 else "+") + (str(abs(c)) if abs(c) != 1 else "") + name)
    s = "".join(parts) or "0"
    return s[1:] if s.startswith("+") else s


@dataclass
class ConeProof:
    cone: Cone
    assignment: dict[str, str]
    maps: dict[str, Matrix]
    facts: dict[str, bool]
    certificates: dict = field(default_factory=dict)
    assumed: str = ASSUMED_LEMMA

    def to_dict(self) -> dict:
        return {"cone": [list(r) for r in self.cone.rows], "cone_text": str(self.cone),
                "witness": list(self.cone.witness) if self.cone.witness else None,
                "assignment": ",".join(f"{k}={v}" for k, v in self.assignment.items()),
                "maps": {k: [list(r) for r in m] for k, m in self.maps.items()},
                "facts": self.facts, "assumed": self.assumed}


@dataclass
class Failure:
    reason: str  # NonUniqueMinimizer | GrowthViolated | EmptyCone | UnsupportedAssignment
    detail: str = ""


def _linear_on_cone(word: str, gens, cone: Cone, start: Matrix = IDENTITY):
    """Matrix of ``word`` valid on the whole cone, or the failing letter."""
    lin = linearise(word, gens, cone.witness, start)
    if lin is None:
        return None
    for r in lin.rows:
        if positive_on_cone(r, cone.rows) is None:
            return None
    return lin.matrix


def cone_verify(s: StepSet, cone: Cone | str, assignment: dict[str, str] | None = None) -> ConeProof | Failure:
    """Check on ``cone`` the facts that rule out relations beyond G4's.

    With a = phi_x, b = phi_y, c = phi_z up to a permutation (``assignment``):

    * the maps of b, cb and acb are single integer-linear maps on the cone;
    * cb and acb send the cone into itself;
    * both strictly increase the b- and c-coordinates (the a-coordinate not
      increasing is reported as well);
    * b strictly increases the b-coordinate at every point of the cone, so no
      word of normal form type can return a point of the cone to itself.
    """
    if isinstance(cone, str):
        cone = Cone.parse(cone)
    if cone.witness is None:
        cone = cone.with_witness()
    if cone.witness is None:
        return Failure("EmptyCone", str(cone))
    assignment = assignment or {"a": "x", "b": "y", "c": "z"}
    if any(len(v) != 1 for v in assignment.values()):
        return Failure("UnsupportedAssignment", str(assignment))
    gens = tropical_generators(s)
    letter = {k: LETTERS["xyz".index(v)] for k, v in assignment.items()}
    ax = {k: "xyz".index(v) for k, v in assignment.items()}
    word = {name: "".join(letter[ch] for ch in name) for name in ("b", "cb", "acb", "a", "c", "ac")}
    maps: dict[str, Matrix] = {}
    for name in ("b", "cb", "acb"):
        m = _linear_on_cone(word[name], gens, cone)
        if m is None:
            return Failure("NonUniqueMinimizer", f"{name} on {cone}")
        maps[name] = m
    facts: dict[str, bool] = {}
    certs: dict = {}
    rows = cone.rows
    for name in ("cb", "acb"):
        m = maps[name]
        for r in rows:
            lam = positive_on_cone(rowmat(r, m), rows)
            if lam is None:
                return Failure("GrowthViolated", f"{name} leaves the cone at {_fmt(r)} > 0")
            certs[f"{name} keeps {_fmt(r)} > 0"] = [str(x) for x in lam]
        facts[f"{name} maps cone into cone"] = True
        for key in ("b", "c"):
            k = ax[key]
            e = [0, 0, 0]
            e[k] = 1
            growth = tuple(a - b for a, b in zip(rowmat(e, m), e))
            lam = positive_on_cone(growth, rows)
            label = f"{name}: {'uvw'[k]}' > {'uvw'[k]}"
            if lam is None:
                return Failure("GrowthViolated", label)
            facts[label] = True
            certs[label] = [str(x) for x in lam]
        k = ax["a"]
        e = [0, 0, 0]
        e[k] = 1
        drop = tuple(b - a for a, b in zip(rowmat(e, m), e))
        facts[f"{name}: {'uvw'[k]}' <= {'uvw'[k]}"] = nonnegative_on_cone(drop, rows)
    k = ax["b"]
    e = [0, 0, 0]
    e[k] = 1
    change = tuple(a - b for a, b in zip(rowmat(e, maps["b"]), e))
    lam = positive_on_cone(change, rows)
    if lam is None:
        return Failure("GrowthViolated", "b does not move the b-coordinate on the cone")
    facts["b moves every cone point"] = True
    certs["b moves every cone point"] = [str(x) for x in lam]
    # a single witness can be a fixed point, so sample several cone points
    sample = [p for p in _starts(6) if all(dot(r, p) > 0 for r in rows)][:12]
    for name in ("a", "c", "ac"):
        facts[f"{name} acts nontrivially on the cone"] = any(
            tropical_apply(word[name], gens, p) != p for p in sample)
    return ConeProof(cone, dict(assignment), maps, facts, certs)


def cone_templates(max_ineq: int = 4) -> list[str]:
    """Chains of distinct signed coordinates, optionally ending in 0, as cone texts."""
    signed = [("", "u"), ("", "v"), ("", "w"), ("-", "u"), ("-", "v"), ("-", "w")]
    out = []
    for n in range(2, 4):
        for combo in permutations(signed, n):
            if len({v for _, v in combo}) != n:
                continue
            terms = [s + v for s, v in combo]
            for tail in ([], ["0"]):
                chain = terms + tail
                if 1 <= len(chain) - 1 <= max_ineq:
                    out.append(" > ".join(chain))
    for combo in permutations(signed, 3):
        if len({v for _, v in combo}) == 3:
            terms = [s + v for s, v in combo]
            out.append(" > ".join(terms) + "; " + " > ".join([terms[1], "0"]))
    out.sort(key=lambda c: (c.count(">"), c))
    return out


def discover_cone(s: StepSet, assignment: dict[str, str] | None = None,
                  templates: Iterable[str] | None = None) -> ConeProof | None:
    """First template cone that verifies; without an assignment every letter permutation is tried."""
    texts = list(templates or cone_templates())
    choices = [assignment] if assignment else [dict(zip("abc", p)) for p in permutations("xyz")]
    for amap in choices:
        for text in texts:
            proof = cone_verify(s, text, amap)
            if isinstance(proof, ConeProof):
                return proof
    return None
