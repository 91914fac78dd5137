"""Exact enumeration of octant walks and guessing of P-recurrences."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm, prod
from pathlib import Path
from typing import Sequence

import flint
import numpy as np

from .stepset import StepSet

TOTALS_GUARDRAIL = 200


@dataclass
class WalkCountTable:
    """a[n][(i, j, k)] = number of n-step walks in N^3 from the origin to (i, j, k)."""

    model: StepSet
    N: int
    layers: list[dict[tuple[int, int, int], int]]

    def __getitem__(self, key: tuple[int, int, int, int]) -> int:
        i, j, k, n = key
        return self.layers[n].get((i, j, k), 0)

    @property
    def totals(self) -> list[int]:
        return [sum(layer.values()) for layer in self.layers]


def walk_table(s: StepSet, N: int) -> WalkCountTable:
    if N < 0:
        raise ValueError("N must be nonnegative")
    steps = s.steps
    layer = {(0, 0, 0): 1}
    layers = [layer]
    for _ in range(N):
        nxt: dict[tuple[int, int, int], int] = {}
        for (i, j, k), c in layer.items():
            for di, dj, dk in steps:
                p = (i + di, j + dj, k + dk)
                if p[0] >= 0 and p[1] >= 0 and p[2] >= 0:
                    nxt[p] = nxt.get(p, 0) + c
        layer = nxt
        layers.append(layer)
    return WalkCountTable(s, N, layers)


def _primes(count: int, below: int) -> list[int]:
    out = []
    n = below - 1
    while len(out) < count:
        if flint.fmpz(n).is_prime():
            out.append(n)
        n -= 2
    return out


def _crt(residues: Sequence[int], primes: Sequence[int]) -> int:
    m = prod(primes)
    x = 0
    for r, p in zip(residues, primes):
        q = m // p
        x += r * q * pow(q, -1, p)
    return x % m


PRIME_BITS = 58  # 26 summands below 2^58 stay below 2^63


def _mod_sum(a: np.ndarray, p: int) -> int:
    # exact sum of values < 2^58 without overflowing uint64
    lo = int(np.sum(a & np.uint64(0x7FFFFFFF), dtype=np.uint64))
    hi = int(np.sum(a >> np.uint64(31), dtype=np.uint64))
    return ((hi << 31) + lo) % p


def walk_totals(s: StepSet, N: int) -> list[int]:
    """c_0..c_N by a rolling DP modulo several 58-bit primes, recombined by CRT.

    Enough primes are used that their product exceeds |S|^N >= c_N.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N > TOTALS_GUARDRAIL:
        raise ValueError(f"N > {TOTALS_GUARDRAIL} exceeds the memory guardrail")
    steps = s.steps
    bound = max(len(steps), 2) ** N
    primes = _primes(max(1, -(-(bound.bit_length() + 1) // (PRIME_BITS - 1))), 1 << PRIME_BITS)
    mods = np.array(primes, dtype=np.uint64).reshape(-1, 1, 1, 1)
    cur = np.ones((len(primes), 1, 1, 1), dtype=np.uint64)
    residues = [[1] * len(primes)]
    for n in range(1, N + 1):
        nxt = np.zeros((len(primes), n + 1, n + 1, n + 1), dtype=np.uint64)
        for d in steps:
            src = tuple(slice(max(0, -x), n) for x in d)
            dst = tuple(slice(max(0, x), n + x) for x in d)
            nxt[(slice(None),) + dst] += cur[(slice(None),) + src]
        np.remainder(nxt, mods, out=nxt)
        cur = nxt
        residues.append([_mod_sum(cur[q], p) for q, p in enumerate(primes)])
    return [_crt(r, primes) for r in residues]


def count_walks(s: StepSet, N: int, totals_only: bool = False):
    """Return (table, totals); the table is None in totals-only mode."""
    if totals_only:
        return None, walk_totals(s, N)
    table = walk_table(s, N)
    return table, table.totals


# -- recurrence guessing ---------------------------------------------------------------------

class InsufficientTerms(ValueError):
    pass


@dataclass(frozen=True)
class Recurrence:
    """sum_i p_i(n) * c(n + i) = 0 with p_i(n) = sum_k coeffs[i][k] * n^k."""

    coeffs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not any(self.coeffs[-1]):
            raise ValueError("leading coefficient polynomial is zero")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max(k for p in self.coeffs for k, c in enumerate(p) if c) if any(map(any, self.coeffs)) else 0

    def poly(self, i: int, n: int) -> Fraction:
        return sum((c * n ** k for k, c in enumerate(self.coeffs[i])), Fraction(0))

    def residual(self, seq: Sequence, n: int) -> Fraction:
        return sum((self.poly(i, n) * seq[n + i] for i in range(self.order + 1)), Fraction(0))

    def __str__(self) -> str:
        parts = []
        for i, p in enumerate(self.coeffs):
            poly = _poly_str(p)
            if poly is None:
                continue
            term = f"c(n+{i})" if i else "c(n)"
            parts.append(f"({poly})*{term}")
        return " + ".join(reversed(parts)) + " = 0"

    def to_dict(self) -> dict:
        return {"order": self.order, "degree": self.degree,
                "coefficients": [[str(c) for c in p] for p in self.coeffs]}

    @classmethod
    def from_dict(cls, d: dict) -> "Recurrence":
        return cls(tuple(tuple(Fraction(c) for c in p) for p in d["coefficients"]))


def _poly_str(p) -> str | None:
    terms = []
    for k, c in reversed(list(enumerate(p))):
        if not c:
            continue
        mon = "" if k == 0 else ("n" if k == 1 else f"n^{k}")
        if mon and c == 1:
            terms.append(mon)
        elif mon and c == -1:
            terms.append(f"-{mon}")
        else:
            terms.append(f"{c}{'*' + mon if mon else ''}")
    return " + ".join(terms).replace("+ -", "- ") if terms else None


def _row(seq, n: int, order: int, degree: int) -> list:
    return [seq[n + i] * n ** k for i in range(order + 1) for k in range(degree + 1)]


def _rank_mod_p(rows: list[list[Fraction]], ncols: int, p: int) -> int | None:
    try:
        data = [[int(x.numerator) * pow(int(x.denominator), -1, p) % p for x in r] for r in rows]
    except ValueError:
        return None  # a denominator vanishes mod p
    return flint.nmod_mat(len(rows), ncols, [x for r in data for x in r], p).rank()


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right nullspace by exact Gauss-Jordan elimination."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def _normalize(v: list[Fraction], order: int, degree: int) -> Recurrence:
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = gcd(*ints)
    ints = [x // g for x in ints]
    lead = next(x for x in reversed(ints) if x)
    if lead < 0:
        ints = [-x for x in ints]
    w = degree + 1
    return Recurrence(tuple(tuple(Fraction(x) for x in ints[i * w:(i + 1) * w]) for i in range(order + 1)))


def required_terms(order: int, degree: int, margin: int = 10) -> int:
    return (order + 1) * (degree + 1) + order + margin


def guess_recurrence(seq: Sequence, max_order: int, max_degree: int,
                     margin: int = 10) -> Recurrence | None:
    """Smallest-order, then smallest-degree recurrence satisfied by every term of ``seq``.

    Each ansatz is screened by a rank computation modulo a prime: full column rank
    mod p implies full rank over Q, hence no relation.  Surviving ansaetze are
    solved exactly and the solution is verified on all terms.
    """
    seq = [Fraction(x) for x in seq]
    need = required_terms(max_order, max_degree, margin)
    if len(seq) < need:
        raise InsufficientTerms(f"need at least {need} terms, got {len(seq)}")
    primes = _primes(3, 1 << 61)
    for order in range(1, max_order + 1):
        for degree in range(max_degree + 1):
            ncols = (order + 1) * (degree + 1)
            rows = [_row(seq, n, order, degree) for n in range(len(seq) - order)]
            ranks = [_rank_mod_p(rows, ncols, p) for p in primes]
            if any(rk == ncols for rk in ranks if rk is not None):
                continue
            for v in _nullspace(rows[:ncols + margin], ncols):
                if not any(v[order * (degree + 1):]):
                    continue
                rec = _normalize(v, order, degree)
                if verify_recurrence(seq, rec):
                    return rec
    return None


def verify_recurrence(seq: Sequence, rec: Recurrence) -> bool:
    seq = [Fraction(x) for x in seq]
    return all(rec.residual(seq, n) == 0 for n in range(len(seq) - rec.order))


# -- I/O -------------------------------------------------------------------------------------

def read_sequence(path: str | Path) -> list[Fraction]:
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(Fraction(line))
    return out


def write_sequence(path: str | Path, seq: Sequence) -> None:
    Path(path).write_text("".join(f"{x}\n" for x in seq))


def recurrence_json(rec: Recurrence) -> str:
    return json.dumps(rec.to_dict())
