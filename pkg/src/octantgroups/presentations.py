"""The twelve infinite presentations and bounded matching of G(S) against them.

Words in a presented group are compared by rewriting with relator pieces: a
substring ``p`` may be replaced by ``reverse(q)`` whenever ``pq`` is a cyclic
rotation of a relator or of its inverse.  Inside a ball this is exact as long
as the search is allowed enough extra length (the budget).
"""
from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import accumulate, permutations, product
from pathlib import Path

from .groups import ModelGroup, group_closure, ExceedsCutoff
from .stepset import StepSet
from .words import LETTERS, cyclic_reduce, free_reduce, reduced_words

DEFAULT_DEPTH = 12
DEFAULT_BUDGET = 8


@dataclass(frozen=True)
class Presentation:
    ident: str
    relators: tuple[str, ...]  # beyond a^2, b^2, c^2

    @property
    def all_relators(self) -> tuple[str, ...]:
        return ("aa", "bb", "cc") + self.relators

    def variants(self) -> tuple[str, ...]:
        """Cyclic rotations of every relator and of its inverse."""
        out: dict[str, None] = {}
        for r in self.relators:
            for w in (r, r[::-1]):
                for i in range(len(w)):
                    out[w[i:] + w[:i]] = None
        return tuple(out)

    def relabel(self, images: dict[str, str]) -> "Presentation":
        return Presentation(self.ident, tuple(free_reduce("".join(images[c] for c in r))
                                              for r in self.relators))


PRESENTATIONS: dict[str, Presentation] = {p.ident: p for p in (
    Presentation("G1", ()),
    Presentation("G2", ("abab",)),
    Presentation("G3", ("acac", "abab")),
    Presentation("G4", ("acac", "ababab")),
    Presentation("G5", ("ababab",)),
    Presentation("G6", ("acac", "abababab")),
    Presentation("G7", ("abababab",)),
    Presentation("G8", ("ababab", "bcbcbc")),
    Presentation("G9", ("acbacbcabc",)),
    Presentation("G10", ("ababab", "cbcacbca")),
    Presentation("G11", ("cacaca", "abababab", "babcbabc")),
    Presentation("G12", ("abababab", "acacacac")),
)}


def registry_json() -> str:
    return json.dumps([{"id": p.ident, "relators": list(p.all_relators)}
                       for p in PRESENTATIONS.values()], indent=1)


# -- bounded word problem ------------------------------------------------------------------

@lru_cache(maxsize=None)
def _replacements(p: Presentation) -> tuple[dict[str, tuple[str, ...]], int]:
    table: dict[str, set[str]] = {}
    for v in p.variants():
        for k in range(1, len(v) + 1):
            table.setdefault(v[:k], set()).add(v[k:][::-1])
    longest = max((len(v) for v in table), default=0)
    return {k: tuple(sorted(v)) for k, v in table.items()}, longest


def neighbours(p: Presentation, word: str, max_len: int):
    """Freely reduced words one relator substitution away from ``word``."""
    table, longest = _replacements(p)
    n = len(word)
    for i in range(n):
        for k in range(1, min(longest, n - i) + 1):
            for repl in table.get(word[i:i + k], ()):
                w = free_reduce(word[:i] + repl + word[i + k:])
                if len(w) <= max_len:
                    yield w


class Equivalence(enum.Enum):
    EQUAL = "Equal"
    NOT_EQUAL_WITHIN_BUDGET = "NotEqualWithinBudget"


def word_equiv(p: Presentation | str, w1: str, w2: str, budget: int = DEFAULT_BUDGET) -> Equivalence:
    if isinstance(p, str):
        p = PRESENTATIONS[p]
    w1, w2 = free_reduce(w1), free_reduce(w2)
    limit = max(len(w1), len(w2)) + budget
    seen = {w1}
    queue = deque([w1])
    while queue:
        w = queue.popleft()
        if w == w2:
            return Equivalence.EQUAL
        for nb in neighbours(p, w, limit):
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return Equivalence.NOT_EQUAL_WITHIN_BUDGET


CACHE_PATH = Path(__file__).with_name("data") / "ball_partitions.json"


@lru_cache(maxsize=None)
def _shipped() -> dict:
    try:
        return json.loads(CACHE_PATH.read_text())
    except FileNotFoundError:
        return {}


def ball_partition(p: Presentation, radius: int, budget: int = DEFAULT_BUDGET,
                   use_cache: bool = True) -> tuple[int, ...]:
    """Class id of each word of ``reduced_words(radius)``, ids in order of first appearance.

    Classes are joined by relator substitutions among all reduced words of length
    at most ``radius + budget``.  Registry presentations at the default radius and
    budget come from a shipped table (rebuilt by ``build_partition_cache``).
    """
    if use_cache and PRESENTATIONS.get(p.ident) == p:
        entry = _shipped().get(f"{p.ident}/{radius}/{budget}")
        if entry is not None:
            return tuple(entry)
    return _ball_partition(p, radius, budget)


def build_partition_cache(radius: int = DEFAULT_DEPTH // 2, budget: int = DEFAULT_BUDGET) -> None:
    data = {f"{p.ident}/{radius}/{budget}": list(_ball_partition(p, radius, budget))
            for p in PRESENTATIONS.values()}
    CACHE_PATH.write_text(json.dumps(data) + "\n")
    _shipped.cache_clear()


@lru_cache(maxsize=None)
def _ball_partition(p: Presentation, radius: int, budget: int) -> tuple[int, ...]:
    limit = radius + budget
    words = reduced_words(limit)
    index = {w: i for i, w in enumerate(words)}
    parent = list(range(len(words)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if p.relators:
        for i, w in enumerate(words):
            for nb in neighbours(p, w, limit):
                a, b = find(i), find(index[nb])
                if a != b:
                    parent[max(a, b)] = min(a, b)
    ids: dict[int, int] = {}
    return tuple(ids.setdefault(find(i), len(ids)) for i in range(len(reduced_words(radius))))


def presentation_ball(p: Presentation | str, radius: int, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Sphere sizes: number of elements whose shortest word has length 0, 1, ..., radius."""
    if isinstance(p, str):
        p = PRESENTATIONS[p]
    return _spheres(ball_partition(p, radius, budget), radius)


def _spheres(classes, radius: int) -> list[int]:
    words = reduced_words(radius)
    first: dict[int, int] = {}
    for w, c in zip(words, classes):
        first.setdefault(c, len(w))
    out = [0] * (radius + 1)
    for length in first.values():
        out[length] += 1
    return out


def cumulative(spheres: list[int]) -> list[int]:
    return list(accumulate(spheres))


# -- normal forms ----------------------------------------------------------------------------

def g3_normal_forms(max_len: int) -> list[str]:
    """Alternating {b, c}-words followed by an optional ``a``: one word per element of G3."""
    out = []
    for n in range(max_len + 1):
        for start in "bc":
            core = "".join("bc"[("bc".index(start) + i) % 2] for i in range(n))
            for tail in ("", "a"):
                w = core + tail
                if len(w) <= max_len and w not in out:
                    out.append(w)
    return sorted(out, key=lambda w: (len(w), w))


def g4_normal_forms(max_len: int) -> list[str]:
    """Words matching ``[[a]b]([a]cb)*[a][c]`` up to ``max_len`` letters (an enumerator only)."""
    heads = ["", "b", "ab"]
    tails = ["", "a", "c", "ac"]
    out: set[str] = set()
    level = [""]
    bodies = [""]
    while True:
        level = [w + blk for w in level for blk in ("cb", "acb") if len(w + blk) <= max_len]
        if not level:
            break
        bodies += level
    for h in heads:
        for body in bodies:
            for t in tails:
                w = h + body + t
                if len(w) <= max_len and w == free_reduce(w):
                    out.add(w)
    return sorted(out, key=lambda w: (len(w), w))


# -- matching --------------------------------------------------------------------------------

PHI = "xyz"


def _triples() -> list[tuple[str, str, str]]:
    base = ["x", "y", "z"]
    out = [tuple(base)]
    for g in range(3):
        for h in range(3):
            if h != g:
                t = list(base)
                t[g] = PHI[h] + PHI[g] + PHI[h]
                out.append(tuple(t))
    return out


def _extended_triples() -> list[tuple[str, ...]]:
    opts = [[PHI[i]] + [PHI[h] + PHI[i] + PHI[h] for h in range(3) if h != i] for i in range(3)]
    single = set(_triples())
    return [t for t in product(*opts) if t not in single]


ASSIGNMENTS: list[dict[str, str]] = [
    dict(zip(LETTERS, perm)) for triple in _triples() for perm in permutations(triple)]
# every generator conjugated independently; consulted only for diagnostics
EXTENDED_ASSIGNMENTS: list[dict[str, str]] = [
    dict(zip(LETTERS, perm)) for triple in _extended_triples() for perm in permutations(triple)]


def assignment_str(assignment: dict[str, str]) -> str:
    return ",".join(f"{k}={assignment[k]}" for k in LETTERS)


def to_model_word(word: str, assignment: dict[str, str]) -> str:
    """Translate an abstract word into a word over the model letters a=phi_x, b=phi_y, c=phi_z."""
    return free_reduce("".join(assignment[ch] for ch in word).translate(str.maketrans(PHI, LETTERS)))


def free_ball(radius: int) -> list[int]:
    return [1] + [3 * 2 ** (n - 1) for n in range(1, radius + 1)]


@dataclass
class Match:
    """Outcome of matching.  ``ball_exact`` is False when every relator of ``result``
    holds but the model's ball has further identifications, listed in ``extra``."""

    result: str  # G1..G12 or Unknown
    assignment: dict[str, str] | None
    depth: int
    confirmed: dict[str, str] = field(default_factory=dict)
    ball_exact: bool = True
    extra: list[str] = field(default_factory=list)
    alternative: tuple[str, dict[str, str]] | None = None

    def to_dict(self) -> dict:
        out = {"id": self.result,
               "assignment": assignment_str(self.assignment) if self.assignment else None,
               "depth": self.depth, "confirmed": self.confirmed,
               "ball_exact": self.ball_exact, "extra": self.extra}
        if self.alternative:
            out["alternative"] = {"id": self.alternative[0],
                                  "assignment": assignment_str(self.alternative[1])}
        return out


@lru_cache(maxsize=None)
def _signatures(radius: int, budget: int) -> dict[tuple[int, ...], str]:
    out = {}
    for p in PRESENTATIONS.values():
        if p.relators:
            out.setdefault(ball_partition(p, radius, budget), p.ident)
    return out


@lru_cache(maxsize=None)
def _by_specificity(radius: int, budget: int) -> list[str]:
    """Presentations with relators, smallest ball (most relations) first."""
    sizes = {i: len(set(ball_partition(p, radius, budget)))
             for i, p in PRESENTATIONS.items() if p.relators}
    return sorted(sizes, key=lambda i: (sizes[i], int(i[1:])))


def _confirm_all(g: ModelGroup, ident: str, assignment: dict[str, str]) -> dict[str, str] | None:
    confirmed = {}
    for r in PRESENTATIONS[ident].relators:
        w = to_model_word(r, assignment)
        if not g.screen_identity(w):
            return None
        status = g.confirm_relation(w)
        if not status:
            return None
        confirmed[r] = status
    return confirmed


def _extra_relations(model: tuple[int, ...], pres: tuple[int, ...], radius: int,
                     limit: int = 4) -> list[str]:
    """Shortest identifications made by the model but not by the presentation."""
    words = reduced_words(radius)
    rep: dict[int, int] = {}
    found = []
    for i, c in enumerate(model):
        j = rep.setdefault(c, i)
        if pres[j] != pres[i]:
            found.append(cyclic_reduce(words[j] + words[i][::-1]))
    found = sorted(set(found), key=lambda w: (len(w), w))
    return found[:limit]


def match_presentation(s: StepSet | ModelGroup, depth: int = DEFAULT_DEPTH,
                       budget: int = DEFAULT_BUDGET, spheres: list[int] | None = None) -> Match:
    """Match G(S) against the registered presentations on word pairs of total length <= depth.

    First pass: for each candidate assignment the model's ball of radius depth/2 is
    split into classes by fingerprints; a hit needs the class pattern to equal the
    presentation's and every relator to be confirmed exactly.  The model group then
    satisfies all relators while fingerprints only ever merge equal elements, so
    the two balls are identical.

    Second pass, only when no ball agrees: the first assignment (plain
    permutations before conjugations) under which every relator of some
    presentation holds exactly, taking the most specific such presentation.  It
    is reported with ``ball_exact=False``, the extra identifications seen in the
    ball, and any exact ball match among assignments conjugating several
    generators at once (``alternative``).  That wider family is the last resort.
    """
    g = s if isinstance(s, ModelGroup) else ModelGroup(s)
    radius = depth // 2
    free = free_ball(radius)
    identity = dict(zip(LETTERS, PHI))
    if spheres is not None and spheres[:radius + 1] == free:
        return Match("G1", identity, depth)
    if spheres is None and _spheres(g.ball_classes(radius), radius) == free:
        return Match("G1", identity, depth)
    table = _signatures(radius, budget)
    balls = {}
    for assignment in ASSIGNMENTS:
        gens = [to_model_word(ch, assignment) for ch in LETTERS]
        sig = tuple(g.ball_classes(radius, gens))
        balls[assignment_str(assignment)] = sig
        ident = table.get(sig)
        if ident is None:
            continue
        confirmed = _confirm_all(g, ident, assignment)
        if confirmed is not None:
            return Match(ident, assignment, depth, confirmed)
    alternative = _ball_match(g, EXTENDED_ASSIGNMENTS, radius, budget)
    for assignment in ASSIGNMENTS:
        for ident in _by_specificity(radius, budget):
            confirmed = _confirm_all(g, ident, assignment)
            if confirmed is not None:
                pres = ball_partition(PRESENTATIONS[ident], radius, budget)
                extra = _extra_relations(balls[assignment_str(assignment)], pres, radius)
                return Match(ident, assignment, depth, confirmed, ball_exact=False, extra=extra,
                             alternative=alternative)
    if alternative is not None:
        ident, assignment = alternative
        return Match(ident, assignment, depth, _confirm_all(g, ident, assignment) or {})
    return Match("Unknown", None, depth)


def _ball_match(g: ModelGroup, assignments, radius: int, budget: int):
    table = _signatures(radius, budget)
    for assignment in assignments:
        sig = tuple(g.ball_classes(radius, [to_model_word(ch, assignment) for ch in LETTERS]))
        ident = table.get(sig)
        if ident is not None and _confirm_all(g, ident, assignment) is not None:
            return ident, assignment
    return None


# -- exactness for G3 ------------------------------------------------------------------------

@dataclass
class ExactIsoG3:
    premises: dict


@dataclass
class Inconclusive:
    reason: str
    premises: dict = field(default_factory=dict)


QUOTIENT_LEMMA = (
    "In Z2 x Dinf = <a> x <b, c> every normal subgroup N other than 1 and <a> has "
    "finite quotient: N meets the translation subgroup <bc> nontrivially, since a "
    "reflection r in N gives r * (bc) r (cb) = translation, and a*t in N gives t^2.")


def g3_exactness(s: StepSet | ModelGroup, certificate=None, depth: int = DEFAULT_DEPTH,
                 match: Match | None = None) -> ExactIsoG3 | Inconclusive:
    """Check the premises showing G(S) is exactly Z2 x Dinf.

    The premises are: the G3 relators hold exactly, the central generator is not the
    identity, the group is infinite (a valid escape certificate), and the quotient
    lemma above.  Together they leave no room for an extra relation.
    """
    from .tropical import EscapeCertificate, check_certificate

    g = s if isinstance(s, ModelGroup) else ModelGroup(s)
    premises: dict = {}
    closure = group_closure(g)
    if not isinstance(closure.verdict, ExceedsCutoff):
        return Inconclusive("group closure is finite", premises)
    match = match or match_presentation(g, depth)
    premises["match"] = match.to_dict()
    if match.result != "G3" or match.assignment is None:
        return Inconclusive(f"matched {match.result}, not G3", premises)
    if any(v != "exact" for v in match.confirmed.values()) or len(match.confirmed) != 2:
        return Inconclusive("G3 relators not confirmed exactly", premises)
    central = to_model_word("a", match.assignment)
    premises["central_nontrivial"] = not g.screen_identity(central)
    if not premises["central_nontrivial"]:
        return Inconclusive("central generator acts trivially", premises)
    if certificate is None:
        from .tropical import escape_certificate

        certificate = escape_certificate(g.stepset)
    if not isinstance(certificate, EscapeCertificate) or not check_certificate(g.stepset, certificate):
        return Inconclusive("no valid infiniteness certificate", premises)
    premises["infinite"] = certificate.to_dict()
    radius = depth // 2
    forms = g3_normal_forms(radius)
    sizes = _spheres(g.ball_classes(radius, [to_model_word(ch, match.assignment) for ch in LETTERS]),
                     radius)
    premises["normal_form_count"] = {"ball": sizes,
                                     "normal_forms": [sum(1 for w in forms if len(w) == n)
                                                      for n in range(radius + 1)]}
    if sizes != premises["normal_form_count"]["normal_forms"]:
        return Inconclusive("ball does not match the G3 normal forms", premises)
    premises["quotient_lemma"] = QUOTIENT_LEMMA
    return ExactIsoG3(premises)
