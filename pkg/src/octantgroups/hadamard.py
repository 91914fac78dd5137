"""Hadamard decompositions of the step polynomial and their group-side counterpart."""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import LaurentPolynomial
from .groups import DEFAULT_CUTOFF, ModelGroup, element_order
from .stepset import StepSet

AXES = "xyz"


@dataclass(frozen=True)
class HadamardDecomposition:
    kind: tuple[int, int]  # (1, 2) or (2, 1)
    axis: int  # the distinguished variable
    U: LaurentPolynomial
    V: LaurentPolynomial
    T: LaurentPolynomial

    @property
    def label(self) -> str:
        return f"({self.kind[0]},{self.kind[1]})"

    def reconstruct(self) -> LaurentPolynomial:
        return self.U + self.V * self.T

    def to_dict(self) -> dict:
        return {"kind": self.label, "axis": AXES[self.axis],
                "U": str(self.U), "V": str(self.V), "T": str(self.T)}


def _poly(monomials) -> LaurentPolynomial:
    return LaurentPolynomial.from_terms({m: 1 for m in monomials})


def _rectangle(pairs: set[tuple]) -> tuple[set, set] | None:
    """Split a set of (left, right) pairs as a full product left-set x right-set."""
    if not pairs:
        return None
    left = {a for a, _ in pairs}
    right = {b for _, b in pairs}
    if len(left) * len(right) != len(pairs):
        return None
    return left, right


def decompose_as(s: StepSet, kind: tuple[int, int], axis: int) -> HadamardDecomposition | None:
    """Try one kind on one distinguished axis.

    (2,1): monomials with a nonzero ``axis`` exponent must form a rectangle
    {axis powers} x {monomials in the other two}; U is the rest.
    (1,2): monomials involving the other two variables must form a rectangle
    {axis powers} x {monomials in the other two}; U is the pure-axis part.
    """
    i, j = (k for k in range(3) if k != axis)
    mixed, pure = [], []
    for st in s.steps:
        inside = st[axis] != 0 if kind == (2, 1) else (st[i] != 0 or st[j] != 0)
        (mixed if inside else pure).append(st)
    rect = _rectangle({(st[axis], (st[i], st[j])) for st in mixed})
    if rect is None:
        return None
    powers, others = rect

    def lift_axis(e):
        v = [0, 0, 0]
        v[axis] = e
        return tuple(v)

    def lift_rest(o):
        v = [0, 0, 0]
        v[i], v[j] = o
        return tuple(v)

    P, O = _poly(map(lift_axis, powers)), _poly(map(lift_rest, others))
    V, T = (O, P) if kind == (2, 1) else (P, O)
    return HadamardDecomposition(kind, axis, _poly(pure), V, T)


def detect_hadamard(s: StepSet) -> HadamardDecomposition | None:
    """First decomposition in the order (2,1) then (1,2), axes x, y, z."""
    for kind in ((2, 1), (1, 2)):
        for axis in range(3):
            d = decompose_as(s, kind, axis)
            if d is not None:
                return d
    return None


def is_hadamard(s: StepSet) -> bool:
    return detect_hadamard(s) is not None


@dataclass(frozen=True)
class Commutation:
    holds: bool
    axis: int | None = None  # generator commuting with both others
    confirmed: str | None = None

    def __bool__(self) -> bool:
        return self.holds


def commutation_test(s: StepSet | ModelGroup) -> Commutation:
    """Whether some generator commutes with both others, i.e. (phi_i phi_j)^2 = (phi_i phi_k)^2 = 1."""
    g = s if isinstance(s, ModelGroup) else ModelGroup(s)
    letters = "abc"
    for i in range(3):
        rels = [(letters[i] + letters[j]) * 2 for j in range(3) if j != i]
        if all(g.screen_identity(r) for r in rels):
            status = [g.confirm_relation(r) for r in rels]
            if all(status):
                worst = "exact" if all(x == "exact" for x in status) else "probable"
                return Commutation(True, i, worst)
    return Commutation(False)


@dataclass(frozen=True)
class GroupStructure:
    central_axis: int
    product_order: int | None  # order of the product of the two other generators

    @property
    def dihedral_order(self) -> int | None:
        return None if self.product_order is None else 2 * self.product_order

    @property
    def label(self) -> str:
        if self.product_order is None:
            return "Z2 x Dinf"
        return f"Z2 x D{self.dihedral_order}"


def hadamard_group_structure(s: StepSet | ModelGroup, cutoff: int = DEFAULT_CUTOFF) -> GroupStructure:
    g = s if isinstance(s, ModelGroup) else ModelGroup(s)
    comm = commutation_test(g)
    if not comm:
        raise ValueError("no generator commutes with both others")
    j, k = (a for a in range(3) if a != comm.axis)
    word = "abc"[j] + "abc"[k]
    return GroupStructure(comm.axis, element_order(word, g, cutoff).order)
