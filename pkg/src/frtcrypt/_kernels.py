"""JIT-compiled inner loops for the sequential generators.

These recurrences cannot be vectorised; compiling them keeps mask generation
at O(MN) with a small constant so it does not distort transform timings.
Arithmetic is plain IEEE double (no fastmath) and matches the pure-Python
reference loops in the test suite bit for bit.
"""

import math

import numpy as np
from numba import njit

_U64 = np.uint64
_TWO_POW_M53 = 1.0 / 9007199254740992.0


@njit(cache=True)
def logistic_run(p, x, skip, count):
    for _ in range(skip):
        x = p * x * (1.0 - x)
    out = np.empty(count)
    for i in range(count):
        x = p * x * (1.0 - x)
        out[i] = x
    return out


@njit(cache=True)
def tent_run(a, x, skip, count):
    for _ in range(skip):
        x = a * x if x <= 0.5 else a * (1.0 - x)
    out = np.empty(count)
    for i in range(count):
        x = a * x if x <= 0.5 else a * (1.0 - x)
        out[i] = x
    return out


@njit(cache=True)
def kaplan_yorke_run(a, b, x, y, skip, count):
    four_pi = 4.0 * math.pi
    for _ in range(skip):
        y = b * y + math.cos(four_pi * x)
        x = (a * x) % 1.0
    xs = np.empty(count)
    ys = np.empty(count)
    for i in range(count):
        y = b * y + math.cos(four_pi * x)
        x = (a * x) % 1.0
        xs[i] = x
        ys[i] = y
    return xs, ys


@njit(cache=True)
def _rotl(x, k):
    return (x << _U64(k)) | (x >> _U64(64 - k))


@njit(cache=True)
def xoshiro256ss_uniform(state, count):
    """Advance ``state`` (4 x uint64, modified in place) ``count`` times.

    Returns doubles ``(r >> 11) * 2**-53`` in ``[0, 1)``.
    """
    s0, s1, s2, s3 = state[0], state[1], state[2], state[3]
    out = np.empty(count)
    for i in range(count):
        r = _rotl(s1 * _U64(5), 7) * _U64(9)
        t = s1 << _U64(17)
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        out[i] = float(r >> _U64(11)) * _TWO_POW_M53
    state[0], state[1], state[2], state[3] = s0, s1, s2, s3
    return out


@njit(cache=True)
def haar_forward(x, ll, lh, hl, hh):
    m, n = ll.shape
    for i in range(m):
        for j in range(n):
            a = x[2 * i, 2 * j]
            b = x[2 * i, 2 * j + 1]
            c = x[2 * i + 1, 2 * j]
            d = x[2 * i + 1, 2 * j + 1]
            s = a + b
            t = c + d
            u = a - b
            v = c - d
            ll[i, j] = (s + t) * 0.5
            lh[i, j] = (u + v) * 0.5
            hl[i, j] = (s - t) * 0.5
            hh[i, j] = (u - v) * 0.5


@njit(cache=True)
def haar_inverse(ll, lh, hl, hh, out):
    m, n = ll.shape
    for i in range(m):
        for j in range(n):
            p = ll[i, j] + hl[i, j]
            q = lh[i, j] + hh[i, j]
            r = ll[i, j] - hl[i, j]
            s = lh[i, j] - hh[i, j]
            out[2 * i, 2 * j] = (p + q) * 0.5
            out[2 * i, 2 * j + 1] = (p - q) * 0.5
            out[2 * i + 1, 2 * j] = (r + s) * 0.5
            out[2 * i + 1, 2 * j + 1] = (r - s) * 0.5
