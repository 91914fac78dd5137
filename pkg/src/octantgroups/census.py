"""Universe-wide classification: records, sharded resumable runs, summaries."""
from __future__ import annotations

import csv
import io
import json
import os
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from pathlib import Path
from typing import Iterator

from . import kernels
from .groups import DEFAULT_CUTOFF, ExceedsCutoff, FiniteOrder, ModelGroup, fingerprint_orders, group_closure
from .hadamard import commutation_test, detect_hadamard
from .presentations import (DEFAULT_DEPTH, PRESENTATIONS, Equivalence, assignment_str,
                            match_presentation, word_equiv)
from .stepset import StepSet, has_group, singular_projections

SEED_ENV = "OCTANTGROUPS_SEED"
UNIVERSE = 1 << 26
BLOCK = 1 << 16


@dataclass
class CensusConfig:
    shard: int = 0
    shards: int = 1
    cutoff: int = DEFAULT_CUTOFF
    fingerprint_cutoff: int = 10
    depth: int = DEFAULT_DEPTH
    seed: int = 0
    out: str | None = None
    resume: bool = True
    max_steps: int | None = None
    deep_match: bool = False
    certificates: bool = False

    def __post_init__(self):
        if not 0 <= self.shard < self.shards:
            raise ValueError("need 0 <= shard < shards")
        env = os.environ.get(SEED_ENV)
        if env is not None:
            self.seed = int(env)


RECORD_KEYS = ("mask", "diagram", "steps", "has_group", "hadamard", "verdict", "order",
               "fingerprint", "presentation", "assignment", "depth", "match_source",
               "singular", "certificate", "diagnostics")


@dataclass
class ClassificationRecord:
    mask: str
    diagram: str
    steps: int
    has_group: bool
    hadamard: str | None = None
    verdict: str | None = None  # "FiniteOrder" or "ExceedsCutoff"
    order: int | None = None
    fingerprint: list | None = None
    presentation: str | None = None
    assignment: str | None = None
    depth: int | None = None
    match_source: str | None = None
    singular: list[str] = field(default_factory=list)
    certificate: dict | None = None
    diagnostics: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({k: getattr(self, k) for k in RECORD_KEYS}, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "ClassificationRecord":
        return cls(**json.loads(line))


# -- fingerprint lookup ----------------------------------------------------------------------

def _pair_relators(ident: str) -> dict[str, int]:
    out = {}
    for r in PRESENTATIONS[ident].relators:
        pair = r[:2]
        if len(set(r)) == 2 and r == pair * (len(r) // 2):
            out[pair] = len(r) // 2
    return out


def _specials(ident: str) -> list[str]:
    return [r for r in PRESENTATIONS[ident].relators if len(set(r)) == 3]


@lru_cache(maxsize=None)
def _row_table() -> dict[tuple, list[tuple[str, str]]]:
    """(order of ab, ac, bc) -> rows and letter permutations whose pair relators give it."""
    table: dict[tuple, list[tuple[str, str]]] = {}
    for ident in PRESENTATIONS:
        for perm in permutations("xyz"):
            want = {}
            for pair, n in _pair_relators(ident).items():
                want["".join(sorted("abc"["xyz".index(perm["abc".index(ch)])] for ch in pair))] = n
            key = (want.get("ab"), want.get("ac"), want.get("bc"))
            table.setdefault(key, []).append((ident, "".join(perm)))
    return table


def presentation_from_fingerprint(fp) -> tuple[str, dict[str, str]] | None:
    """Presentation and assignment read off a fingerprint, or None when ambiguous.

    A row fits under a letter permutation when its pair relators (xy)^n are exactly
    the pairs of finite order n, and each of its three-letter relators was confirmed
    under that permutation.  Any other confirmed special relator must be derivable
    from the row's relators.
    """
    hits = []
    for ident, perm in _row_table().get((fp.ab, fp.ac, fp.bc), []):
        if any(h[0] == ident for h in hits):
            continue
        if all(perm in fp.special.get(r, []) for r in _specials(ident)):
            hits.append((ident, dict(zip("abc", perm))))
    if not hits:
        return None
    # rows that differ only by three-letter relators: keep the one using the most
    if len({tuple(sorted(_pair_relators(i).values())) for i, _ in hits}) > 1:
        return None
    ident, images = max(hits, key=lambda h: len(_specials(h[0])))
    back = {v: k for k, v in images.items()}
    for rel, perms in fp.special.items():
        if rel in _specials(ident):
            continue
        for perm in perms:
            # the relator as a word in the row's letters
            word = "".join(back[perm["abc".index(ch)]] for ch in rel)
            if word_equiv(ident, word, "") is not Equivalence.EQUAL:
                return None  # an unexplained relation: leave it to full matching
    return ident, images


# -- classification --------------------------------------------------------------------------

def classify_model(s: StepSet, config: CensusConfig | None = None) -> ClassificationRecord:
    config = config or CensusConfig()
    rec = ClassificationRecord(mask=s.hex, diagram=s.diagram, steps=len(s), has_group=has_group(s))
    if not rec.has_group:
        return rec
    try:
        g = ModelGroup(s, seed=config.seed)
        hd = detect_hadamard(s)
        comm = commutation_test(g)
        rec.hadamard = hd.label if hd else None
        if bool(hd) != bool(comm):
            rec.diagnostics.append("hadamard-commutation-mismatch")
        rec.singular = singular_projections(s)
        closure = group_closure(g, config.cutoff)
        if isinstance(closure.verdict, FiniteOrder):
            rec.verdict, rec.order = "FiniteOrder", closure.verdict.n
            return rec
        rec.verdict = "ExceedsCutoff"
        fp = fingerprint_orders(g, config.fingerprint_cutoff)
        ab, ac, bc, special = fp.as_tuple()
        rec.fingerprint = [ab, ac, bc, list(special)]
        found = None if config.deep_match else presentation_from_fingerprint(fp)
        if found is not None:
            rec.presentation, assignment = found
            rec.assignment = assignment_str(assignment)
            rec.match_source = "fingerprint"
        else:
            m = match_presentation(g, config.depth)
            rec.presentation = m.result
            rec.assignment = assignment_str(m.assignment) if m.assignment else None
            rec.match_source = "match" if m.ball_exact else "match-relators"
            if not m.ball_exact:
                rec.diagnostics.append("extra-relations:" + ",".join(m.extra))
        rec.depth = config.depth
        if config.certificates:
            from .tropical import escape_certificate

            cert = escape_certificate(s)
            rec.certificate = cert.to_dict() if cert else None
    except Exception as exc:  # captured, the census keeps going
        rec.diagnostics.append(f"error:{type(exc).__name__}:{exc}")
    return rec


# -- runs ------------------------------------------------------------------------------------

def iter_models(config: CensusConfig, start: int = 1) -> Iterator[int]:
    """Canonical nondegenerate masks of this shard in increasing order, from ``start``."""
    first = start + (config.shard - start) % config.shards
    for lo in range(first, UNIVERSE, BLOCK * config.shards):
        hi = min(lo + BLOCK * config.shards, UNIVERSE)
        for m in kernels.scan_masks(lo, hi, config.shards):
            if config.max_steps is None or bin(m).count("1") <= config.max_steps:
                yield m


def _last_mask(path: Path) -> int | None:
    if not path.exists():
        return None
    last = None
    with path.open("rb") as fh:
        for line in fh:
            if line.endswith(b"\n"):
                last = line
    return int(json.loads(last)["mask"], 16) if last else None


def _truncate_partial(path: Path) -> None:
    data = path.read_bytes()
    cut = data.rfind(b"\n") + 1
    if cut != len(data):
        path.write_bytes(data[:cut])


def run_census(config: CensusConfig, limit: int | None = None, progress=None) -> int:
    """Append records for this shard to ``config.out``; returns the number written."""
    path = Path(config.out)
    start = 1
    if config.resume and path.exists():
        _truncate_partial(path)
        last = _last_mask(path)
        if last is not None:
            start = last + 1
    elif path.exists():
        path.unlink()
    written = 0
    with path.open("a") as fh:
        for m in iter_models(config, start):
            rec = classify_model(StepSet(m), config)
            fh.write(rec.to_json() + "\n")
            written += 1
            if written % 1000 == 0:
                fh.flush()
                if progress:
                    progress(written, m)
            if limit is not None and written >= limit:
                break
    return written


def read_records(path: str | Path) -> Iterator[ClassificationRecord]:
    with open(path) as fh:
        for line in fh:
            if line.strip():
                yield ClassificationRecord.from_json(line)


def merge(paths, out: str | Path) -> None:
    """Merge shard files into one file sorted by mask."""
    lines = []
    for p in paths:
        with open(p) as fh:
            lines += [ln for ln in fh if ln.strip()]
    lines.sort(key=lambda ln: int(json.loads(ln)["mask"], 16))
    Path(out).write_text("".join(lines))


# -- summaries -------------------------------------------------------------------------------

@dataclass
class Summary:
    total: int = 0
    with_group: int = 0
    exceeds: int = 0
    finite: int = 0
    presentations: Counter = field(default_factory=Counter)
    finite_orders: Counter = field(default_factory=Counter)
    hadamard: Counter = field(default_factory=Counter)
    hadamard_total: int = 0
    hadamard_finite: int = 0
    singular_g4: int = 0
    commuting_unsplit: int = 0  # commutation holds without a Hadamard split
    diagnostics: int = 0

    def rows(self) -> list[tuple[str, int]]:
        out = [("models", self.total), ("with_group", self.with_group),
               ("exceeds_cutoff", self.exceeds), ("finite", self.finite)]
        out += [(f"presentation:{p}", self.presentations.get(p, 0))
                for p in list(PRESENTATIONS) + ["Unknown"]]
        out += [(f"finite_order:{n}", c) for n, c in sorted(self.finite_orders.items())]
        out += [("hadamard_total", self.hadamard_total), ("hadamard_finite", self.hadamard_finite)]
        out += [(f"hadamard:{k}", c) for k, c in sorted(self.hadamard.items())]
        out += [("singular_G4", self.singular_g4), ("commuting_without_split", self.commuting_unsplit),
                ("records_with_diagnostics", self.diagnostics)]
        return out

    def text(self) -> str:
        width = max(len(k) for k, _ in self.rows())
        return "\n".join(f"{k:<{width}}  {v:>10,}" for k, v in self.rows())

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "count"])
        w.writerows(self.rows())
        return buf.getvalue()


def summarize(path: str | Path) -> Summary:
    s = Summary()
    for rec in read_records(path):
        s.total += 1
        if not rec.has_group:
            continue
        s.with_group += 1
        if rec.diagnostics:
            s.diagnostics += 1
        if "hadamard-commutation-mismatch" in rec.diagnostics and not rec.hadamard:
            s.commuting_unsplit += 1
        if rec.verdict == "ExceedsCutoff":
            s.exceeds += 1
            s.presentations[rec.presentation] += 1
            if rec.presentation == "G4" and rec.singular:
                s.singular_g4 += 1
        elif rec.verdict == "FiniteOrder":
            s.finite += 1
            s.finite_orders[rec.order] += 1
        if rec.hadamard:
            s.hadamard_total += 1
            s.hadamard[rec.hadamard] += 1
            if rec.verdict == "FiniteOrder":
                s.hadamard_finite += 1
    return s


def audit(path: str | Path) -> list[str]:
    """Record-level consistency problems: G3 must coincide with Hadamard among infinite groups."""
    problems = []
    for rec in read_records(path):
        if rec.verdict != "ExceedsCutoff":
            if rec.presentation is not None:
                problems.append(f"{rec.mask}: presentation on a finite group")
            continue
        if (rec.presentation == "G3") != (rec.hadamard is not None):
            problems.append(f"{rec.mask}: presentation {rec.presentation} with hadamard {rec.hadamard}")
        problems += [f"{rec.mask}: {d}" for d in rec.diagnostics if not d.startswith("extra-relations")]
    return problems
