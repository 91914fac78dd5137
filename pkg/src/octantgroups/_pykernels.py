"""Pure-Python reference implementation of the hot kernels.

Mirrors ``_ckernels.pyx`` function for function.  A model is passed as six 9-bit
support masks ``(A-, A+, B-, B+, C-, C+)``; bit ``3*(j+1) + (k+1)`` marks the
monomial with passive exponents ``(j, k)``.  A point state is a flat list holding
``x, 1/x, y, 1/y, z, 1/z`` residues for each of the k points.
"""
from __future__ import annotations

from .words import reduced_words

VANISHED = -2
EXCEEDED = -1

# --- stepset scans -------------------------------------------------------------------

_STEPS = [(dx, dy, dz) for dz in (-1, 0, 1) for dy in (-1, 0, 1) for dx in (-1, 0, 1)
          if (dx, dy, dz) != (0, 0, 0)]
_INDEX = {s: i for i, s in enumerate(_STEPS)}
_PERM_IMAGES = []
for _p in ((0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
    _PERM_IMAGES.append([_INDEX[tuple(s[_p[k]] for k in range(3))] for s in _STEPS])
_GROUP_MASKS = [sum(1 << i for i, s in enumerate(_STEPS) if s[a] == v)
                for a in range(3) for v in (-1, 1)]
_NEG_AXES = [sum(1 << a for a in range(3) if s[a] < 0) for s in _STEPS]
_POS_AXES = [sum(1 << a for a in range(3) if s[a] > 0) for s in _STEPS]
_WEIGHTS2 = (0, 1, 2, 4)  # doubled weights 0, 1/2, 1, 2
_REDUNDANT = []
for _k in range(3):
    _i, _j = [a for a in range(3) if a != _k]
    for _p in _WEIGHTS2:
        for _q in _WEIGHTS2:
            _REDUNDANT.append(sum(1 << n for n, s in enumerate(_STEPS)
                                  if 2 * s[_k] < _p * s[_i] + _q * s[_j]))


def permute_bits(mask: int, image: list[int]) -> int:
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << image[i]
        mask >>= 1
        i += 1
    return out


def is_canonical(mask: int) -> bool:
    return all(permute_bits(mask, img) >= mask for img in _PERM_IMAGES)


def is_nondegenerate(mask: int) -> bool:
    for m in _GROUP_MASKS:
        if not mask & m:
            return False
    positive = 0
    while True:
        grown = positive
        for i in range(26):
            if mask >> i & 1 and _NEG_AXES[i] & positive == _NEG_AXES[i]:
                grown |= _POS_AXES[i]
        if grown == positive:
            break
        positive = grown
    for i in range(26):
        if mask >> i & 1 and _NEG_AXES[i] & positive != _NEG_AXES[i]:
            return False
    for viol in _REDUNDANT:
        if not mask & viol:
            return False
    return True


def scan_masks(start: int, stop: int, stride: int = 1) -> list[int]:
    """Canonical nondegenerate masks among ``range(start, stop, stride)``."""
    return [m for m in range(start, stop, stride) if is_nondegenerate(m) and is_canonical(m)]


# --- modular generator action --------------------------------------------------------

def _sum(sup: int, u: int, ui: int, v: int, vi: int, p: int) -> int:
    pu = (ui, 1, u)
    pv = (vi, 1, v)
    acc = 0
    for bit in range(9):
        if sup >> bit & 1:
            acc += pu[bit // 3] * pv[bit % 3]
    return acc % p


def apply_letter(sup, axis: int, state: list[int], p: int) -> list[int] | None:
    """Apply generator ``axis`` to every point; ``None`` if a denominator vanishes."""
    out = list(state)
    i, j = [a for a in range(3) if a != axis]
    sm, sp = sup[2 * axis], sup[2 * axis + 1]
    for base in range(0, len(state), 6):
        u, ui = state[base + 2 * i], state[base + 2 * i + 1]
        v, vi = state[base + 2 * j], state[base + 2 * j + 1]
        m = _sum(sm, u, ui, v, vi, p)
        q = _sum(sp, u, ui, v, vi, p)
        if m == 0 or q == 0:
            return None
        t = pow(m * q % p, -1, p)
        x, xi = state[base + 2 * axis], state[base + 2 * axis + 1]
        out[base + 2 * axis] = m * xi % p * (m * t % p) % p
        out[base + 2 * axis + 1] = q * x % p * (q * t % p) % p
    return out


def apply_axes(sup, axes, state, p):
    """Apply a word given as axis indices in word order (the last one acts first)."""
    for a in reversed(axes):
        state = apply_letter(sup, a, state, p)
        if state is None:
            return None
    return state


def key(state) -> tuple:
    return tuple(state[0::2])


def closure(sup, state, p: int, cutoff: int):
    """Breadth-first closure under left multiplication by the three generators.

    Returns ``(order, spheres, table)``; ``order`` is ``EXCEEDED`` when more than
    ``cutoff`` distinct elements appear (``spheres`` then lists only completed
    radii and ``table`` is None) or ``VANISHED``.  ``table[e][g]`` is the index of
    ``g * e``.  Element 0 is the identity.
    """
    index = {key(state): 0}
    states = [state]
    table: list[list[int]] = []
    spheres = [1]
    frontier_start, frontier_end = 0, 1
    while frontier_start < frontier_end:
        grown = 0
        for e in range(frontier_start, frontier_end):
            row = []
            for g in range(3):
                nxt = apply_letter(sup, g, states[e], p)
                if nxt is None:
                    return VANISHED, spheres, None
                k = key(nxt)
                f = index.get(k)
                if f is None:
                    f = len(states)
                    index[k] = f
                    states.append(nxt)
                    grown += 1
                    if len(states) > cutoff:
                        return EXCEEDED, spheres, None
                row.append(f)
            table.append(row)
        frontier_start, frontier_end = frontier_end, len(states)
        if grown:
            spheres.append(grown)
    return len(states), spheres, table


def ball_classes(sup, gens, state, p: int, radius: int):
    """Class id of every reduced word of length <= radius (see ``words.reduced_words``).

    ``gens`` holds the three abstract generators as axis sequences in word order.
    Words are equal in the group exactly when their images of the points agree.
    Returns ``None`` if a denominator vanishes.
    """
    words = reduced_words(radius, "012")
    states = {"": state}
    ids: dict[tuple, int] = {}
    out = []
    for w in words:
        if w:
            st = apply_axes(sup, gens[int(w[0])], states[w[1:]], p)
            if st is None:
                return None
            states[w] = st
        k = key(states[w])
        out.append(ids.setdefault(k, len(ids)))
    return out


def word_order(sup, axes, state, p: int, cutoff: int) -> int:
    """Least n <= cutoff with w^n fixing every point, ``EXCEEDED`` or ``VANISHED``."""
    start = key(state)
    cur = state
    for n in range(1, cutoff + 1):
        cur = apply_axes(sup, axes, cur, p)
        if cur is None:
            return VANISHED
        if key(cur) == start:
            return n
    return EXCEEDED


# --- tropical orbit scan ---------------------------------------------------------------

TROPICAL_MAX_WORD = 12
TROPICAL_BAILOUT = 1 << 34  # beyond this the orbit is taken as growing


def _exponents(mask: int) -> list[tuple[int, int]]:
    return [(b // 3 - 1, b % 3 - 1) for b in range(9) if mask >> b & 1]


def tropical_step(sup, axis: int, t: list[int]) -> None:
    i, j = (0, 1, 2)[:axis] + (0, 1, 2)[axis + 1:]
    p, q = t[i], t[j]
    vm = min(a * p + b * q for a, b in _exponents(sup[2 * axis]))
    vp = min(a * p + b * q for a, b in _exponents(sup[2 * axis + 1]))
    t[axis] = vm - vp - t[axis]


def tropical_scan(sup, axes, starts, horizon: int, first: int = 0):
    """First start (from ``first``) whose l1-norm grows strictly under ``horizon``
    applications of the word, as ``(index, end point)``; ``(-1, None)`` if none.

    ``axes`` is in application order.  The end point is None when the orbit was
    cut short past ``TROPICAL_BAILOUT``.
    """
    if len(axes) > TROPICAL_MAX_WORD:
        raise ValueError("word too long for the tropical scan")
    n = len(starts) // 3
    for s in range(first, n):
        t = list(starts[3 * s:3 * s + 3])
        norm = abs(t[0]) + abs(t[1]) + abs(t[2])
        ok = True
        bailed = False
        for _ in range(horizon):
            for ax in axes:
                tropical_step(sup, ax, t)
            n2 = abs(t[0]) + abs(t[1]) + abs(t[2])
            if n2 <= norm:
                ok = False
                break
            norm = n2
            if norm > TROPICAL_BAILOUT:
                bailed = True
                break
        if ok:
            return s, None if bailed else tuple(t)
    return -1, None
