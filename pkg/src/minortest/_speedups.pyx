# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled walk kernel.

Mirrors the pure-Python walk loop exactly: same splitmix64 stream, same
query-counting rules, same collision bookkeeping.  Virtual vertices are the
base vertices 1..n; in subdivision mode (mode 2) the auxiliary vertex of edge
e is encoded as n + 1 + slot, where slot is the CSR position of e seen from
its smaller endpoint.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef unsigned long long MASK = 0xFFFFFFFFFFFFFFFFULL
cdef unsigned long long GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline unsigned long long _mix(unsigned long long z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline unsigned long long _next(unsigned long long *state) nogil:
    state[0] = state[0] + GOLDEN
    return _mix(state[0])


cdef inline unsigned long long _fold2(unsigned long long seed,
                                      unsigned long long a,
                                      unsigned long long b,
                                      unsigned long long c) nogil:
    cdef unsigned long long h = 0x243F6A8885A308D3ULL
    h = _mix(h + GOLDEN + seed)
    h = _mix(h + GOLDEN + a)
    h = _mix(h + GOLDEN + b)
    h = _mix(h + GOLDEN + c)
    return h


cdef inline int _label_bit(unsigned long long seed, long long u, long long v) nogil:
    cdef long long lo = u if u <= v else v
    cdef long long hi = v if u <= v else u
    return <int>(_fold2(seed, <unsigned long long>lo, <unsigned long long>hi, 0) & 1ULL)


cdef inline long long _canonical_slot(const long long[::1] indptr,
                                      const long long[::1] indices,
                                      long long u, long long v) nogil:
    # slot of edge {u,v} as seen from its smaller endpoint
    cdef long long lo = u if u < v else v
    cdef long long hi = v if u < v else u
    cdef long long p
    for p in range(indptr[lo], indptr[lo + 1]):
        if indices[p] == hi:
            return p
    return -1


cdef inline long long _slot_owner(const long long[::1] indptr, long long n,
                                  long long slot) nogil:
    # binary search: owner vertex o with indptr[o] <= slot < indptr[o+1]
    cdef long long lo = 1, hi = n, mid
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        if indptr[mid] <= slot:
            lo = mid
        else:
            hi = mid - 1
    return lo


def walk_batch(const long long[::1] indptr, const long long[::1] indices,
               long long n, long long d_view, int mode,
               unsigned long long label_seed, unsigned long long rng_state,
               long long start, long long K, long long L,
               long long budget):
    """Run K walks of length L from one start; returns
    (status, rng_state, queries, collision, walks_v, walks_p, walks_len).

    status: 0 no collision, 1 collision, 2 budget exhausted.
    budget < 0 means unlimited.
    """
    cdef long long n_virtual = n + 1 + indptr[n + 1]
    walks_v_arr = np.zeros((K, L + 1), dtype=np.int64)
    walks_p_arr = np.zeros((K, L + 1), dtype=np.int8)
    walks_len_arr = np.zeros(K, dtype=np.int64)
    stamp_arr = np.zeros(n_virtual + 1, dtype=np.int64)
    handle_arr = np.full((n_virtual + 1, 2, 2), -1, dtype=np.int64)

    cdef long long[:, ::1] walks_v = walks_v_arr
    cdef char[:, ::1] walks_p = walks_p_arr
    cdef long long[::1] walks_len = walks_len_arr
    cdef long long[::1] stamp = stamp_arr
    cdef long long[:, :, ::1] handle = handle_arr

    cdef unsigned long long state = rng_state
    cdef long long queries = 0
    cdef int status = 0
    cdef long long ka = -1, ia = -1, kb = -1, ib = -1

    cdef long long k, t, v, u, i, pos, deg, slot, owner, other
    cdef int p, dp, bit
    cdef long long cur_stamp = 1

    # table entry for the start vertex at parity 0 (walk 0, position 0)
    stamp[start] = cur_stamp
    handle[start, 0, 0] = 0
    handle[start, 0, 1] = 0
    handle[start, 1, 0] = -1
    handle[start, 1, 1] = -1

    with nogil:
        for k in range(K):
            v = start
            p = 0
            walks_v[k, 0] = start
            walks_p[k, 0] = 0
            pos = 0
            for t in range(L):
                i = _next(&state) % d_view  # 0-based slot choice
                if v <= n:
                    # stepping from an original vertex costs one base query
                    if budget >= 0 and queries >= budget:
                        status = 2
                        break
                    queries += 1
                    deg = indptr[v + 1] - indptr[v]
                    if i >= deg:
                        continue  # null answer: lazy stay
                    u = indices[indptr[v] + i]
                    if mode == 2:
                        bit = _label_bit(label_seed, v, u)
                        if bit == 1:
                            slot = indptr[v] + i if v < u else _canonical_slot(indptr, indices, v, u)
                            u = n + 1 + slot
                        dp = 1
                    elif mode == 1:
                        dp = _label_bit(label_seed, v, u)
                    else:
                        dp = 1
                else:
                    # auxiliary vertex: neighbors are known without queries
                    if i >= 2:
                        continue
                    slot = v - n - 1
                    owner = _slot_owner(indptr, n, slot)
                    other = indices[slot]
                    u = owner if i == 0 else other
                    dp = 1
                p ^= dp
                v = u
                pos += 1
                walks_v[k, pos] = v
                walks_p[k, pos] = <char>p
                if stamp[v] != cur_stamp:
                    stamp[v] = cur_stamp
                    handle[v, 0, 0] = -1
                    handle[v, 1, 0] = -1
                    handle[v, p, 0] = k
                    handle[v, p, 1] = pos
                else:
                    if handle[v, 1 - p, 0] >= 0:
                        ka = handle[v, 1 - p, 0]
                        ia = handle[v, 1 - p, 1]
                        kb = k
                        ib = pos
                        status = 1
                        break
                    if handle[v, p, 0] < 0:
                        handle[v, p, 0] = k
                        handle[v, p, 1] = pos
            walks_len[k] = pos + 1
            if status != 0:
                break

    collision = None
    if status == 1:
        collision = (int(ka), int(ia), int(kb), int(ib))
    return status, state, int(queries), collision, walks_v_arr, walks_p_arr, walks_len_arr
