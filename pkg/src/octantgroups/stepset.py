"""Stepsets in {-1,0,1}^3 minus the origin, stored as 26-bit masks.

Bit ``i`` (0-based) of a mask is the step at diagram position ``i + 1``.  The
diagram lists the layers z = -1, 0, +1; inside a layer the cells run over
y = -1, 0, 1 and, for each y, over x = -1, 0, 1.  The centre cell of the middle
layer is the origin and is skipped, so the middle layer has 8 positions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Iterable, Iterator, Sequence

AXES = ("x", "y", "z")

STEPS: tuple[tuple[int, int, int], ...] = tuple(
    (dx, dy, dz)
    for dz in (-1, 0, 1)
    for dy in (-1, 0, 1)
    for dx in (-1, 0, 1)
    if (dx, dy, dz) != (0, 0, 0)
)
STEP_INDEX = {s: i for i, s in enumerate(STEPS)}
FULL_MASK = (1 << 26) - 1

#: the six coordinate permutations; ``perm[k]`` is the source axis of new axis k
PERMUTATIONS: tuple[tuple[int, int, int], ...] = tuple(permutations(range(3)))


class DiagramError(ValueError):
    pass


def _passive(axis: int) -> tuple[int, int]:
    return tuple(a for a in range(3) if a != axis)  # type: ignore[return-value]


@dataclass(frozen=True, order=True)
class StepSet:
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits <= FULL_MASK:
            raise ValueError(f"mask out of range: {self.bits:#x}")

    @classmethod
    def from_steps(cls, steps: Iterable[Sequence[int]]) -> "StepSet":
        bits = 0
        for s in steps:
            key = tuple(int(c) for c in s)
            if key not in STEP_INDEX:
                raise ValueError(f"not a step: {s!r}")
            bits |= 1 << STEP_INDEX[key]
        return cls(bits)

    @classmethod
    def from_hex(cls, text: str) -> "StepSet":
        return cls(int(text, 16))

    @classmethod
    def parse(cls, text: str) -> "StepSet":
        """Accept a 26-character diagram or a hex mask (optionally ``0x``-prefixed)."""
        text = text.strip()
        if len(text) == 26 and set(text) <= {"0", "1"}:
            return decode_diagram(text)
        return cls.from_hex(text[2:] if text.lower().startswith("0x") else text)

    @property
    def steps(self) -> list[tuple[int, int, int]]:
        return [STEPS[i] for i in range(26) if self.bits >> i & 1]

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __iter__(self) -> Iterator[tuple[int, int, int]]:
        return iter(self.steps)

    def __contains__(self, step) -> bool:
        i = STEP_INDEX.get(tuple(step))
        return i is not None and bool(self.bits >> i & 1)

    @property
    def hex(self) -> str:
        return f"{self.bits:07x}"

    @property
    def diagram(self) -> str:
        return encode_diagram(self)

    def __repr__(self) -> str:
        return f"StepSet({self.hex}: {self.steps})"


def decode_diagram(text: str) -> StepSet:
    if len(text) != 26:
        raise DiagramError(f"diagram must have 26 characters, got {len(text)}")
    bad = set(text) - {"0", "1"}
    if bad:
        raise DiagramError(f"illegal diagram characters: {''.join(sorted(bad))}")
    return StepSet(sum(1 << i for i, ch in enumerate(text) if ch == "1"))


def encode_diagram(s: StepSet) -> str:
    return "".join("1" if s.bits >> i & 1 else "0" for i in range(26))


# --- axis permutations -------------------------------------------------------

def _bit_image(perm: tuple[int, int, int]) -> list[int]:
    return [STEP_INDEX[tuple(s[perm[k]] for k in range(3))] for s in STEPS]


_BIT_IMAGES = [_bit_image(p) for p in PERMUTATIONS]
# per-byte lookup tables: _BYTE_TABLES[p][b][v] is the image of byte b holding value v
_BYTE_TABLES = []
for _img in _BIT_IMAGES:
    tables = []
    for b in range(4):
        row = []
        for v in range(256):
            m = 0
            for j in range(8):
                i = 8 * b + j
                if i < 26 and v >> j & 1:
                    m |= 1 << _img[i]
            row.append(m)
        tables.append(row)
    _BYTE_TABLES.append(tables)


def permute_mask(bits: int, perm_index: int) -> int:
    t = _BYTE_TABLES[perm_index]
    return (t[0][bits & 255] | t[1][bits >> 8 & 255]
            | t[2][bits >> 16 & 255] | t[3][bits >> 24 & 255])


def permute(s: StepSet, perm: tuple[int, int, int]) -> StepSet:
    """Relabel coordinates: new coordinate ``k`` is old coordinate ``perm[k]``."""
    return StepSet(permute_mask(s.bits, PERMUTATIONS.index(tuple(perm))))


def canonicalize(s: StepSet) -> tuple[StepSet, tuple[int, int, int]]:
    """Smallest mask over the six coordinate permutations, plus a permutation reaching it."""
    best, best_p = s.bits, 0
    for p in range(1, 6):
        m = permute_mask(s.bits, p)
        if m < best:
            best, best_p = m, p
    return StepSet(best), PERMUTATIONS[best_p]


def is_canonical(s: StepSet) -> bool:
    return all(permute_mask(s.bits, p) >= s.bits for p in range(1, 6))


# --- axis decomposition --------------------------------------------------------

def axis_supports(s: StepSet, axis: int) -> tuple[frozenset, frozenset, frozenset]:
    """Exponent supports of the (minus, zero, plus) coefficients along ``axis``.

    Each support is a set of exponent pairs in the two passive coordinates, taken
    in increasing axis order (so (y, z) for x, (x, z) for y, (x, y) for z).
    """
    i, j = _passive(axis)
    parts: tuple[set, set, set] = (set(), set(), set())
    for st in s.steps:
        parts[st[axis] + 1].add((st[i], st[j]))
    return frozenset(parts[0]), frozenset(parts[1]), frozenset(parts[2])


def _axis_value_mask(axis: int, value: int) -> int:
    return sum(1 << i for i, st in enumerate(STEPS) if st[axis] == value)


_GROUP_MASKS = tuple(_axis_value_mask(a, v) for a in range(3) for v in (-1, 1))


def has_group(s: StepSet) -> bool:
    return all(s.bits & m for m in _GROUP_MASKS)


@dataclass(frozen=True)
class AxisDecomposition:
    A_minus: "LaurentPolynomial"
    A_zero: "LaurentPolynomial"
    A_plus: "LaurentPolynomial"
    B_minus: "LaurentPolynomial"
    B_zero: "LaurentPolynomial"
    B_plus: "LaurentPolynomial"
    C_minus: "LaurentPolynomial"
    C_zero: "LaurentPolynomial"
    C_plus: "LaurentPolynomial"

    def axis(self, axis: int):
        name = "ABC"[axis]
        return tuple(getattr(self, f"{name}_{part}") for part in ("minus", "zero", "plus"))


def polynomial(s: StepSet):
    """The stepset polynomial as a Laurent polynomial in x, y, z."""
    from .algebra import LaurentPolynomial

    return LaurentPolynomial.from_terms({st: 1 for st in s.steps})


def decompose(s: StepSet) -> AxisDecomposition:
    from .algebra import LaurentPolynomial

    fields = {}
    for axis in range(3):
        i, j = _passive(axis)
        for part, sup in zip(("minus", "zero", "plus"), axis_supports(s, axis)):
            terms = {}
            for e in sup:
                exp = [0, 0, 0]
                exp[i], exp[j] = e
                terms[tuple(exp)] = 1
            fields[f"{'ABC'[axis]}_{part}"] = LaurentPolynomial.from_terms(terms)
    return AxisDecomposition(**fields)


# --- degenerate models -----------------------------------------------------------

def usable_steps(s: StepSet) -> StepSet:
    """Steps that occur in at least one walk confined to the octant.

    Reachable points form an additive monoid, so a step is usable as soon as each
    coordinate it decreases can be made positive by usable steps.
    """
    positive = 0
    steps = s.steps
    while True:
        grown = positive
        for st in steps:
            neg = sum(1 << a for a in range(3) if st[a] < 0)
            if neg & positive == neg:
                grown |= sum(1 << a for a in range(3) if st[a] > 0)
        if grown == positive:
            break
        positive = grown
    return StepSet.from_steps(
        st for st in steps
        if all(st[a] >= 0 or positive >> a & 1 for a in range(3)))


# Vertices of {(p, q) >= 0 : d_k >= p d_i + q d_j for all steps} have coordinates
# in {0, 1/2, 1, 2} because the constraint rows have entries in {-1, 0, 1}.
_WEIGHTS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))


def redundant_constraints(s: StepSet) -> list[str]:
    """Axes whose positivity constraint follows from the other two.

    Coordinate k is redundant when some nonnegative combination p*x_i + q*x_j
    never exceeds x_k along any walk, i.e. d_k >= p d_i + q d_j for every step.
    """
    steps = s.steps
    out = []
    for k in range(3):
        i, j = _passive(k)
        if any(all(st[k] >= p * st[i] + q * st[j] for st in steps)
               for p in _WEIGHTS for q in _WEIGHTS):
            out.append(AXES[k])
    return out


def degeneracy(s: StepSet) -> str | None:
    """Why a stepset is in bijection with a lower-dimensional model, or ``None``."""
    if not has_group(s):
        return "no-group"
    if usable_steps(s) != s:
        return "unusable-step"
    if redundant_constraints(s):
        return "redundant-constraint"
    return None


def is_nondegenerate(s: StepSet) -> bool:
    return degeneracy(s) is None


# --- singularity -------------------------------------------------------------------

def half_plane_singular(steps2d: frozenset) -> bool:
    """Default 2D predicate: all steps satisfy i + j >= 0 and some step goes negative."""
    return (all(i + j >= 0 for i, j in steps2d)
            and any(i < 0 or j < 0 for i, j in steps2d))


def projection(s: StepSet, dropped: int) -> frozenset:
    i, j = _passive(dropped)
    return frozenset((st[i], st[j]) for st in s.steps if (st[i], st[j]) != (0, 0))


def singular_projections(
    s: StepSet,
    predicate: Callable[[frozenset], bool] = half_plane_singular,
) -> list[str]:
    """Labels of the dropped axes whose coordinate-plane projection is singular."""
    return [AXES[a] for a in range(3) if predicate(projection(s, a))]


def is_singular(s: StepSet, predicate: Callable[[frozenset], bool] = half_plane_singular) -> bool:
    return bool(singular_projections(s, predicate))
