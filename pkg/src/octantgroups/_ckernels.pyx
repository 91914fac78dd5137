# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""

from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memcpy
from libc.stdint cimport uint64_t, int64_t, uint32_t

cdef extern from *:
    """
    typedef unsigned __int128 og_u128;
    static inline uint64_t og_mulmod(uint64_t a, uint64_t b, uint64_t p) {
        return (uint64_t)(((og_u128)a * b) % p);
    }
    """
    uint64_t og_mulmod(uint64_t a, uint64_t b, uint64_t p) nogil

from .words import reduced_words

DEF MAXPTS = 16

cdef int VANISHED = -2
cdef int EXCEEDED = -1

# --- stepset scans -------------------------------------------------------------------

cdef uint32_t PERM_IMG[5][26]
cdef uint32_t GROUP_MASKS[6]
cdef uint32_t NEG_AXES[26]
cdef uint32_t POS_AXES[26]
cdef uint32_t REDUNDANT[48]


def _init_tables():
    from . import _pykernels as ref
    cdef int a, i
    for a in range(5):
        for i in range(26):
            PERM_IMG[a][i] = ref._PERM_IMAGES[a][i]
    for i in range(6):
        GROUP_MASKS[i] = ref._GROUP_MASKS[i]
    for i in range(26):
        NEG_AXES[i] = ref._NEG_AXES[i]
        POS_AXES[i] = ref._POS_AXES[i]
    for i in range(48):
        REDUNDANT[i] = ref._REDUNDANT[i]


_init_tables()


cdef inline uint32_t c_permute(uint32_t mask, int a) nogil:
    cdef uint32_t out = 0
    cdef int i = 0
    while mask:
        if mask & 1:
            out |= (<uint32_t>1) << PERM_IMG[a][i]
        mask >>= 1
        i += 1
    return out


cdef inline bint c_is_canonical(uint32_t mask) nogil:
    cdef int a
    for a in range(5):
        if c_permute(mask, a) < mask:
            return False
    return True


cdef bint c_is_nondegenerate(uint32_t mask) nogil:
    cdef int i
    cdef uint32_t positive = 0, grown
    for i in range(6):
        if not (mask & GROUP_MASKS[i]):
            return False
    while True:
        grown = positive
        for i in range(26):
            if (mask >> i) & 1 and (NEG_AXES[i] & positive) == NEG_AXES[i]:
                grown |= POS_AXES[i]
        if grown == positive:
            break
        positive = grown
    for i in range(26):
        if (mask >> i) & 1 and (NEG_AXES[i] & positive) != NEG_AXES[i]:
            return False
    for i in range(48):
        if not (mask & REDUNDANT[i]):
            return False
    return True


def is_canonical(mask):
    return c_is_canonical(<uint32_t>mask)


def is_nondegenerate(mask):
    return c_is_nondegenerate(<uint32_t>mask)


def scan_masks(long start, long stop, long stride=1):
    out = []
    cdef long m = start
    while m < stop:
        if c_is_nondegenerate(<uint32_t>m) and c_is_canonical(<uint32_t>m):
            out.append(m)
        m += stride
    return out


# --- modular arithmetic --------------------------------------------------------------

cdef inline uint64_t c_inverse(uint64_t a, uint64_t p) nogil:
    cdef int64_t t = 0, newt = 1, q, tmp
    cdef int64_t r = <int64_t>p, newr = <int64_t>a
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += <int64_t>p
    return <uint64_t>t


cdef struct Model:
    uint32_t sup[6]
    uint64_t p
    int npts


cdef inline uint64_t c_sum(uint32_t sup, uint64_t u, uint64_t ui, uint64_t v,
                           uint64_t vi, uint64_t p) nogil:
    cdef uint64_t pu[3]
    cdef uint64_t pv[3]
    cdef uint64_t acc = 0
    cdef int bit
    pu[0] = ui; pu[1] = 1; pu[2] = u
    pv[0] = vi; pv[1] = 1; pv[2] = v
    for bit in range(9):
        if (sup >> bit) & 1:
            acc += og_mulmod(pu[bit // 3], pv[bit % 3], p)
            if acc >= p:
                acc -= p
    return acc


cdef int c_apply(Model* M, int axis, const uint64_t* src, uint64_t* dst) nogil:
    """Apply one generator to all points; returns 0, or 1 if a denominator vanishes."""
    cdef int i, j, b, n = M.npts
    cdef uint64_t p = M.p
    cdef uint64_t ms[MAXPTS]
    cdef uint64_t qs[MAXPTS]
    cdef uint64_t prefix[MAXPTS]
    cdef uint64_t acc, inv, t, m, q, x, xi
    cdef const uint64_t* s
    if axis == 0:
        i, j = 1, 2
    elif axis == 1:
        i, j = 0, 2
    else:
        i, j = 0, 1
    acc = 1
    for b in range(n):
        s = src + 6 * b
        m = c_sum(M.sup[2 * axis], s[2 * i], s[2 * i + 1], s[2 * j], s[2 * j + 1], p)
        q = c_sum(M.sup[2 * axis + 1], s[2 * i], s[2 * i + 1], s[2 * j], s[2 * j + 1], p)
        if m == 0 or q == 0:
            return 1
        ms[b] = m
        qs[b] = q
        prefix[b] = acc
        acc = og_mulmod(acc, og_mulmod(m, q, p), p)
    inv = c_inverse(acc, p)
    b = n - 1
    while b >= 0:
        # t = (m_b q_b)^-1
        t = og_mulmod(inv, prefix[b], p)
        inv = og_mulmod(inv, og_mulmod(ms[b], qs[b], p), p)
        s = src + 6 * b
        if dst != src:
            memcpy(dst + 6 * b, s, 6 * sizeof(uint64_t))
        m = ms[b]
        q = qs[b]
        x = s[2 * axis]
        xi = s[2 * axis + 1]
        dst[6 * b + 2 * axis] = og_mulmod(og_mulmod(m, xi, p), og_mulmod(m, t, p), p)
        dst[6 * b + 2 * axis + 1] = og_mulmod(og_mulmod(q, x, p), og_mulmod(q, t, p), p)
        b -= 1
    return 0


cdef int c_apply_axes(Model* M, const int* axes, int n, const uint64_t* src, uint64_t* dst) nogil:
    cdef int r
    cdef int width = 6 * M.npts
    if n == 0:
        memcpy(dst, src, width * sizeof(uint64_t))
        return 0
    r = c_apply(M, axes[n - 1], src, dst)
    if r:
        return r
    n -= 1
    while n > 0:
        r = c_apply(M, axes[n - 1], dst, dst)
        if r:
            return r
        n -= 1
    return 0


cdef inline bint c_same(const uint64_t* a, const uint64_t* b, int npts) nogil:
    cdef int i
    for i in range(npts):
        if a[6 * i] != b[6 * i] or a[6 * i + 2] != b[6 * i + 2] or a[6 * i + 4] != b[6 * i + 4]:
            return False
    return True


cdef inline uint64_t c_hash(const uint64_t* a, int npts) nogil:
    cdef uint64_t h = 0x9E3779B97F4A7C15ULL
    cdef int i
    for i in range(npts):
        h ^= a[6 * i] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)
        h ^= a[6 * i + 2] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)
        h ^= a[6 * i + 4] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)
    h ^= h >> 33
    h *= 0xff51afd7ed558ccdULL
    h ^= h >> 33
    return h


cdef int c_model(Model* M, sup, state, p) except -1:
    cdef int i
    if len(state) % 6 or len(state) // 6 > MAXPTS or len(state) == 0:
        raise ValueError("state must hold between 1 and 16 points")
    for i in range(6):
        M.sup[i] = sup[i]
    M.p = p
    M.npts = len(state) // 6
    return 0


cdef list c_tolist(const uint64_t* a, int n):
    return [a[i] for i in range(n)]


# --- exported kernels -----------------------------------------------------------------

def apply_letter(sup, int axis, state, p):
    cdef Model M
    c_model(&M, sup, state, p)
    cdef uint64_t buf[6 * MAXPTS]
    cdef int i, w = 6 * M.npts
    for i in range(w):
        buf[i] = state[i]
    if c_apply(&M, axis, buf, buf):
        return None
    return c_tolist(buf, w)


def apply_axes(sup, axes, state, p):
    cdef Model M
    c_model(&M, sup, state, p)
    cdef uint64_t buf[6 * MAXPTS]
    cdef int i, w = 6 * M.npts
    cdef int n = len(axes)
    cdef int* ax = <int*>malloc((n + 1) * sizeof(int))
    for i in range(n):
        ax[i] = axes[i]
    for i in range(w):
        buf[i] = state[i]
    cdef int r = c_apply_axes(&M, ax, n, buf, buf)
    free(ax)
    if r:
        return None
    return c_tolist(buf, w)


def closure(sup, state, p, int cutoff):
    cdef Model M
    c_model(&M, sup, state, p)
    cdef int w = 6 * M.npts
    cdef int cap = cutoff + 4
    cdef int nslots = 1
    while nslots < 4 * cap:
        nslots <<= 1
    cdef uint64_t* states = <uint64_t*>malloc(cap * w * sizeof(uint64_t))
    cdef int* slots = <int*>malloc(nslots * sizeof(int))
    cdef int* table = <int*>malloc(cap * 3 * sizeof(int))
    cdef uint64_t tmp[6 * MAXPTS]
    cdef int i, e, g, f, count, fs, fe, grown, status = 0
    cdef uint64_t h
    if states == NULL or slots == NULL or table == NULL:
        free(states); free(slots); free(table)
        raise MemoryError()
    for i in range(nslots):
        slots[i] = -1
    for i in range(w):
        states[i] = state[i]
    slots[c_hash(states, M.npts) & (nslots - 1)] = 0
    count = 1
    spheres = [1]
    fs, fe = 0, 1
    with nogil:
        while fs < fe and status == 0:
            grown = 0
            for e in range(fs, fe):
                for g in range(3):
                    if c_apply(&M, g, states + e * w, tmp):
                        status = VANISHED
                        break
                    h = c_hash(tmp, M.npts) & (nslots - 1)
                    f = -1
                    while slots[h] >= 0:
                        if c_same(states + slots[h] * w, tmp, M.npts):
                            f = slots[h]
                            break
                        h = (h + 1) & (nslots - 1)
                    if f < 0:
                        if count >= cutoff:
                            status = EXCEEDED
                            break
                        f = count
                        memcpy(states + f * w, tmp, w * sizeof(uint64_t))
                        slots[h] = f
                        count += 1
                        grown += 1
                    table[3 * e + g] = f
                if status:
                    break
            if status == 0:
                fs, fe = fe, count
                if grown:
                    with gil:
                        spheres.append(grown)
    result_table = None
    if status == 0:
        result_table = [[table[3 * e], table[3 * e + 1], table[3 * e + 2]] for e in range(count)]
    free(states); free(slots); free(table)
    if status:
        return status, spheres, None
    return count, spheres, result_table


def ball_classes(sup, gens, state, p, int radius):
    cdef Model M
    c_model(&M, sup, state, p)
    cdef int w = 6 * M.npts
    cdef int total = 1 + 3 * ((1 << radius) - 1)
    cdef uint64_t* states = <uint64_t*>malloc(total * w * sizeof(uint64_t))
    cdef int* first = <int*>malloc(total * sizeof(int))
    cdef int* ids = <int*>malloc(total * sizeof(int))
    cdef int nslots = 1
    while nslots < 4 * total:
        nslots <<= 1
    cdef int* slots = <int*>malloc(nslots * sizeof(int))
    cdef int gax[3][3]
    cdef int glen[3]
    cdef int i, l, wd, it, lvl_start, lvl_end, n, nclasses = 0, status = 0
    cdef uint64_t h
    for l in range(3):
        glen[l] = len(gens[l])
        if glen[l] > 3:
            free(states); free(first); free(ids); free(slots)
            raise ValueError("generator images are limited to three letters")
        for i in range(glen[l]):
            gax[l][i] = gens[l][i]
    for i in range(nslots):
        slots[i] = -1
    for i in range(w):
        states[i] = state[i]
    first[0] = -1
    n = 1
    lvl_start, lvl_end = 0, 1
    with nogil:
        for it in range(radius):
            for wd in range(lvl_start, lvl_end):
                for l in range(3):
                    if l == first[wd]:
                        continue
                    if c_apply_axes(&M, gax[l], glen[l], states + wd * w, states + n * w):
                        status = VANISHED
                        break
                    first[n] = l
                    n += 1
                if status:
                    break
            if status:
                break
            lvl_start, lvl_end = lvl_end, n
        if status == 0:
            for wd in range(n):
                h = c_hash(states + wd * w, M.npts) & (nslots - 1)
                ids[wd] = -1
                while slots[h] >= 0:
                    if c_same(states + slots[h] * w, states + wd * w, M.npts):
                        ids[wd] = ids[slots[h]]
                        break
                    h = (h + 1) & (nslots - 1)
                if ids[wd] < 0:
                    ids[wd] = nclasses
                    nclasses += 1
                    slots[h] = wd
    result = None
    if status == 0:
        result = [ids[i] for i in range(n)]
    free(states); free(first); free(ids); free(slots)
    return result


def word_order(sup, axes, state, p, int cutoff):
    cdef Model M
    c_model(&M, sup, state, p)
    cdef int w = 6 * M.npts
    cdef uint64_t start[6 * MAXPTS]
    cdef uint64_t cur[6 * MAXPTS]
    cdef int i, k = len(axes), r = EXCEEDED
    cdef int ax[64]
    if k > 64:
        raise ValueError("word too long for the compiled kernel")
    for i in range(k):
        ax[i] = axes[i]
    for i in range(w):
        start[i] = state[i]
        cur[i] = state[i]
    with nogil:
        for i in range(1, cutoff + 1):
            if c_apply_axes(&M, ax, k, cur, cur):
                r = VANISHED
                break
            if c_same(cur, start, M.npts):
                r = i
                break
    return r


def key(state):
    return tuple(state[0::2])


def permute_bits(mask, image):
    from ._pykernels import permute_bits as ref
    return ref(mask, image)


# --- tropical orbit scan ---------------------------------------------------------------

DEF TMAXW = 12
cdef int64_t TBAIL = (<int64_t>1) << 34


cdef struct TropModel:
    int nm[3]
    int np[3]
    int em[3][9][2]
    int ep[3][9][2]


cdef inline int64_t c_abs(int64_t x) nogil:
    return -x if x < 0 else x


cdef inline void c_trop_step(TropModel* T, int axis, int64_t* t) nogil:
    cdef int i = 1 if axis == 0 else 0
    cdef int j = 1 if axis == 2 else 2
    cdef int64_t p = t[i], q = t[j], v, vm, vp
    cdef int e
    vm = T.em[axis][0][0] * p + T.em[axis][0][1] * q
    for e in range(1, T.nm[axis]):
        v = T.em[axis][e][0] * p + T.em[axis][e][1] * q
        if v < vm:
            vm = v
    vp = T.ep[axis][0][0] * p + T.ep[axis][0][1] * q
    for e in range(1, T.np[axis]):
        v = T.ep[axis][e][0] * p + T.ep[axis][e][1] * q
        if v < vp:
            vp = v
    t[axis] = vm - vp - t[axis]


def tropical_scan(sup, axes, starts, int horizon, long first=0):
    cdef TropModel T
    cdef int a, b, k, n, h
    cdef int ax[TMAXW]
    cdef long s, nst
    cdef int64_t t[3]
    cdef int64_t norm, n2
    cdef bint ok, bailed
    if len(axes) > TMAXW:
        raise ValueError("word too long for the tropical scan")
    for a in range(3):
        for k, mask in enumerate((sup[2 * a], sup[2 * a + 1])):
            n = 0
            for b in range(9):
                if (mask >> b) & 1:
                    if k == 0:
                        T.em[a][n][0] = b // 3 - 1
                        T.em[a][n][1] = b % 3 - 1
                    else:
                        T.ep[a][n][0] = b // 3 - 1
                        T.ep[a][n][1] = b % 3 - 1
                    n += 1
            if n == 0:
                raise ValueError("empty support")
            if k == 0:
                T.nm[a] = n
            else:
                T.np[a] = n
    n = len(axes)
    for k in range(n):
        ax[k] = axes[k]
    cdef list flat = list(starts)
    nst = len(flat) // 3
    for s in range(first, nst):
        t[0] = flat[3 * s]
        t[1] = flat[3 * s + 1]
        t[2] = flat[3 * s + 2]
        with nogil:
            norm = c_abs(t[0]) + c_abs(t[1]) + c_abs(t[2])
            ok = True
            bailed = False
            for h in range(horizon):
                for k in range(n):
                    c_trop_step(&T, ax[k], t)
                n2 = c_abs(t[0]) + c_abs(t[1]) + c_abs(t[2])
                if n2 <= norm:
                    ok = False
                    break
                norm = n2
                if norm > TBAIL:
                    bailed = True
                    break
        if ok:
            return s, (None if bailed else (t[0], t[1], t[2]))
    return -1, None
