"""The group G(S) generated by the birational involutions phi_x, phi_y, phi_z.

Equality of group elements is screened by evaluating words at a few random
points modulo a 62-bit prime.  Distinct values prove two maps differ; equal values
only nominate a relation, which is then confirmed by exact composition of
rational functions (or labelled ``probable`` past the symbolic cap).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import kernels
from .algebra import (
    PRIMES,
    DenominatorVanishes,
    EvaluationPoint,
    RationalFunction,
    rf_equal,
    sum_ratio,
)
from .stepset import StepSet, axis_supports, has_group
from .words import LETTERS, cyclic_reduce, free_reduce, reduced_words

DEFAULT_CUTOFF = 400
SYMBOLIC_CAP = 24
EXTRA_POINTS = 8
MAX_RESAMPLES = 16


class GroupUndefined(ValueError):
    pass


def support_masks(s: StepSet) -> tuple[int, ...]:
    """The six 9-bit support masks (A-, A+, B-, B+, C-, C+) used by the kernels."""
    out = []
    for axis in range(3):
        minus, _, plus = axis_supports(s, axis)
        out.append(sum(1 << (3 * (j + 1) + k + 1) for j, k in minus))
        out.append(sum(1 << (3 * (j + 1) + k + 1) for j, k in plus))
    return tuple(out)


def _passive(axis: int) -> tuple[int, int]:
    return tuple(a for a in range(3) if a != axis)  # type: ignore[return-value]


@dataclass(frozen=True)
class BirationalMap:
    images: tuple[RationalFunction, RationalFunction, RationalFunction]

    @classmethod
    def identity(cls) -> "BirationalMap":
        return cls(tuple(RationalFunction.var(v) for v in "xyz"))

    def compose(self, other: "BirationalMap") -> "BirationalMap":
        """``self o other``."""
        return BirationalMap(tuple(
            sum_ratio(f.numerator.terms(), f.denominator.terms(), other.images)
            for f in self.images))

    def __call__(self, point: EvaluationPoint) -> EvaluationPoint:
        from .algebra import evaluate

        return EvaluationPoint(tuple(evaluate(f, point) for f in self.images), point.modulus)

    def __eq__(self, other):
        if not isinstance(other, BirationalMap):
            return NotImplemented
        return all(rf_equal(f, g) for f, g in zip(self.images, other.images))

    def __hash__(self):
        return hash(tuple(hash(f) for f in self.images))

    def is_identity(self) -> bool:
        return self == BirationalMap.identity()


@dataclass(frozen=True)
class FiniteOrder:
    n: int
    confirmed: str = "exact"


@dataclass(frozen=True)
class ExceedsCutoff:
    cutoff: int


@dataclass
class Closure:
    verdict: FiniteOrder | ExceedsCutoff
    spheres: list[int]
    table: list[list[int]] | None = None


class ModelGroup:
    """Generators of G(S) with fingerprint and exact-composition machinery.

    ``seed`` fixes the evaluation points, so every answer is reproducible.
    """

    def __init__(self, s: StepSet, seed: int = 0, npoints: int = 3,
                 symbolic_cap: int = SYMBOLIC_CAP):
        if not has_group(s):
            raise GroupUndefined(f"stepset {s.hex} has no group")
        self.stepset = s
        self.sup = support_masks(s)
        self.npoints = npoints
        self.symbolic_cap = symbolic_cap
        self._rng = random.Random(seed)
        self._prime_index = 0
        self.prime = PRIMES[0]
        self.state = self._sample(npoints)
        self._terms = []
        for axis in range(3):
            minus, _, plus = axis_supports(s, axis)
            self._terms.append(({e: 1 for e in minus}, {e: 1 for e in plus}))
        self._images: dict[str, tuple[RationalFunction, ...]] = {
            "": tuple(RationalFunction.var(v) for v in "xyz")}

    # -- modular fingerprints ------------------------------------------------------

    def _sample(self, npoints: int) -> list[int]:
        p = self.prime
        st = []
        for _ in range(npoints):
            for _ in range(3):
                v = self._rng.randrange(1, p)
                st += [v, pow(v, -1, p)]
        return st

    def _resample(self, attempt: int) -> None:
        if attempt == MAX_RESAMPLES // 2:
            self._prime_index = (self._prime_index + 1) % len(PRIMES)
            self.prime = PRIMES[self._prime_index]
        self.state = self._sample(self.npoints)

    def _retry(self, fn):
        for attempt in range(MAX_RESAMPLES):
            out = fn()
            if out is not None and out != kernels.VANISHED:
                return out
            self._resample(attempt)
        raise DenominatorVanishes(f"denominators kept vanishing for {self.stepset.hex}")

    @staticmethod
    def axes(word: str) -> list[int]:
        return [LETTERS.index(ch) for ch in word]

    def fingerprint(self, word: str, state=None) -> tuple:
        st = self.state if state is None else state
        out = kernels.apply_axes(self.sup, self.axes(word), st, self.prime)
        if out is None:
            raise DenominatorVanishes(word)
        return kernels.key(out)

    def screen_equal(self, w1: str, w2: str, state=None) -> bool:
        """Fingerprint comparison; False is a proof, True only a nomination."""
        def run():
            try:
                return self.fingerprint(w1, state) == self.fingerprint(w2, state)
            except DenominatorVanishes:
                return None
        if state is not None:
            out = run()
            if out is None:
                raise DenominatorVanishes(f"{w1} vs {w2}")
            return out
        return self._retry(run)

    def screen_identity(self, word: str) -> bool:
        return self.screen_equal(word, "")

    def word_order(self, word: str, cutoff: int) -> int | None:
        """Fingerprint order of ``word`` (None beyond the cutoff)."""
        n = self._retry(lambda: kernels.word_order(self.sup, self.axes(word), self.state,
                                                   self.prime, cutoff))
        return None if n == kernels.EXCEEDED else n

    def ball_classes(self, radius: int, gens: Sequence[str] = ("a", "b", "c")) -> list[int]:
        g = [self.axes(w) for w in gens]
        return self._retry(lambda: kernels.ball_classes(self.sup, g, self.state, self.prime, radius))

    # -- exact composition ----------------------------------------------------------

    def generator(self, axis: int) -> BirationalMap:
        return BirationalMap(self.image(LETTERS[axis]))

    def _apply_symbolic(self, axis: int, triple):
        i, j = _passive(axis)
        minus, plus = self._terms[axis]
        ratio = sum_ratio(minus, plus, (triple[i], triple[j]))
        out = list(triple)
        out[axis] = ratio / triple[axis]
        return tuple(out)

    def image(self, word: str) -> tuple[RationalFunction, ...]:
        """Images of (x, y, z) under the map of a freely reduced word (memoised by suffix)."""
        word = free_reduce(word)
        if word in self._images:
            return self._images[word]
        pending = []
        w = word
        while w not in self._images:
            pending.append(w)
            w = w[1:]
        for w in reversed(pending):
            self._images[w] = self._apply_symbolic(LETTERS.index(w[0]), self._images[w[1:]])
        return self._images[word]

    def birational_map(self, word: str) -> BirationalMap:
        return BirationalMap(self.image(word))

    def exact_equal(self, w1: str, w2: str) -> bool:
        return all(rf_equal(f, g) for f, g in zip(self.image(w1), self.image(w2)))

    def confirm_relation(self, relator: str) -> str | None:
        """``'exact'``, ``'probable'`` or None for a candidate identity ``relator = 1``.

        The relator is cyclically reduced and split in halves u v, then u and
        reverse(v) are composed exactly.  Beyond ``symbolic_cap`` letters the
        relation is re-screened at extra points instead.
        """
        r = cyclic_reduce(relator)
        if not r:
            return "exact"
        if not self.screen_identity(r):
            return None
        if len(r) > self.symbolic_cap:
            extra = self._sample(EXTRA_POINTS)
            try:
                ok = self.screen_equal(r, "", state=extra)
            except DenominatorVanishes:
                ok = self.screen_equal(r, "", state=self._sample(EXTRA_POINTS))
            return "probable" if ok else None
        k = (len(r) + 1) // 2
        return "exact" if self.exact_equal(r[:k], r[k:][::-1]) else None


def generators(s: StepSet) -> tuple[BirationalMap, BirationalMap, BirationalMap]:
    g = ModelGroup(s)
    return g.generator(0), g.generator(1), g.generator(2)


def apply_word(word: str, s: StepSet, point: EvaluationPoint) -> EvaluationPoint:
    """Right-to-left action of a word at a point (exact rationals or residues)."""
    g = ModelGroup(s)
    if point.modulus is not None:
        p = point.modulus
        st = []
        for v in point.values:
            st += [v, pow(v, -1, p)]
        out = kernels.apply_axes(g.sup, g.axes(word), st, p)
        if out is None:
            raise DenominatorVanishes(f"{word} at {point.values}")
        return EvaluationPoint(tuple(out[0::2]), p)
    vals = list(point.values)
    for ch in reversed(word):
        axis = LETTERS.index(ch)
        i, j = _passive(axis)
        minus, plus = g._terms[axis]
        m = sum(vals[i] ** a * vals[j] ** b for a, b in minus)
        q = sum(vals[i] ** a * vals[j] ** b for a, b in plus)
        if m == 0 or q == 0:
            raise DenominatorVanishes(f"{word} at {point.values}")
        vals[axis] = m / (q * vals[axis])
    return EvaluationPoint(tuple(vals))


@dataclass(frozen=True)
class ElementOrder:
    order: int | None
    cutoff: int
    confirmed: str | None = None

    @property
    def exceeds(self) -> bool:
        return self.order is None


def element_order(word: str, s: StepSet | ModelGroup, cutoff: int = DEFAULT_CUTOFF) -> ElementOrder:
    g = s if isinstance(s, ModelGroup) else ModelGroup(s)
    n = g.word_order(word, cutoff)
    while n is not None:
        status = g.confirm_relation(word * n)
        if status:
            return ElementOrder(n, cutoff, status)
        # a fingerprint collision: keep iterating past it
        m = g.word_order(word, cutoff)
        n = None if m is None or m <= n else m
    return ElementOrder(None, cutoff)


def group_closure(s: StepSet | ModelGroup, cutoff: int = DEFAULT_CUTOFF) -> Closure:
    """Breadth-first closure; a finite verdict has every Cayley-table edge confirmed exactly."""
    g = s if isinstance(s, ModelGroup) else ModelGroup(s)
    for attempt in range(3):
        n, spheres, table = g._retry(lambda: _closure_call(g, cutoff))
        if n == kernels.EXCEEDED:
            return Closure(ExceedsCutoff(cutoff), spheres)
        if confirm_table(g, table):
            return Closure(FiniteOrder(n), spheres, table)
        g.npoints += 2
        g._resample(attempt)
    raise RuntimeError(f"closure of {g.stepset.hex} could not be confirmed")


def _closure_call(g: ModelGroup, cutoff: int):
    out = kernels.closure(g.sup, g.state, g.prime, cutoff)
    return None if out[0] == kernels.VANISHED else out


def element_words(table: list[list[int]]) -> list[str]:
    """Breadth-first words for the elements of a closure table (element e = word[e])."""
    words: list[str | None] = [None] * len(table)
    words[0] = ""
    for e, row in enumerate(table):
        for gen, f in enumerate(row):
            if words[f] is None:
                words[f] = free_reduce(LETTERS[gen] + words[e])
    return words  # type: ignore[return-value]


def confirm_table(g: ModelGroup, table: list[list[int]]) -> bool:
    words = element_words(table)
    for e, row in enumerate(table):
        for gen, f in enumerate(row):
            if not g.exact_equal(LETTERS[gen] + words[e], words[f]):
                return False
    return True


def harvest_relations(s: StepSet | ModelGroup, max_len: int) -> dict[str, str]:
    """Every reduced word of length <= max_len that is the identity, with its confirmation."""
    g = s if isinstance(s, ModelGroup) else ModelGroup(s)
    classes = g.ball_classes(max_len)
    out = {}
    for w, c in zip(reduced_words(max_len), classes):
        if w and c == classes[0]:
            status = g.confirm_relation(w)
            if status:
                out[w] = status
    return out


SPECIAL_RELATORS = {
    "acbacbcabc": "G9",
    "cbcacbca": "G10",
    "babcbabc": "G11",
}


@dataclass(frozen=True)
class OrderFingerprint:
    ab: int | None
    ac: int | None
    bc: int | None
    special: dict = field(default_factory=dict)

    def as_tuple(self) -> tuple:
        return (self.ab, self.ac, self.bc,
                tuple(sorted(k for k, v in self.special.items() if v)))


def fingerprint_orders(s: StepSet | ModelGroup, cutoff: int = 10) -> OrderFingerprint:
    """Pairwise product orders up to ``cutoff`` and the three-letter special relators.

    ``special[r]`` lists the letter permutations (as strings like ``"yxz"`` for
    a=phi_y, b=phi_x, c=phi_z) under which relator ``r`` holds.
    """
    from itertools import permutations

    g = s if isinstance(s, ModelGroup) else ModelGroup(s)
    orders = [g.word_order(w, cutoff) for w in ("ab", "ac", "bc")]
    special = {}
    for rel in SPECIAL_RELATORS:
        hits = []
        for perm in permutations("abc"):
            image = "".join(perm[LETTERS.index(ch)] for ch in rel)
            if g.screen_identity(image) and g.confirm_relation(image):
                hits.append("".join("xyz"[LETTERS.index(ch)] for ch in perm))
        special[rel] = hits
    return OrderFingerprint(*orders, special=special)
