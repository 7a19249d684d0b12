"""Numba-compiled kernels; see ``_numpy`` for the reference semantics."""
import math

import numpy as np
from numba import njit

LN2 = 0.6931471805599453


@njit(cache=True, nogil=True)
def _cap(x):
    if x < 1.0:
        return 0.5 * (math.log1p(x) / LN2)
    return 0.5 * math.log2(1.0 + x)


@njit(cache=True, nogil=True)
def cap_array(x):
    out = np.empty_like(x)
    for i in range(x.size):
        out[i] = _cap(x[i])
    return out


@njit(cache=True, nogil=True)
def _cumsum0_row(x, out):
    n = x.shape[0]
    out[0] = 0.0
    if n <= 10_000:
        s = 0.0
        for i in range(n):
            s += x[i]
            out[i + 1] = s
        return
    # Neumaier compensated summation
    s = 0.0
    c = 0.0
    for i in range(n):
        v = x[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i + 1] = s + c


@njit(cache=True, nogil=True)
def cumsum0_2d(x):
    rows, n = x.shape
    out = np.empty((rows, n + 1))
    for r in range(rows):
        _cumsum0_row(x[r], out[r])
    return out


@njit(cache=True, nogil=True)
def prefix_min(suffix, macp, bc_scale):
    n_dest, width = macp.shape
    bc = np.empty(width)
    for k in range(width):
        bc[k] = _cap(bc_scale * suffix[k])
    best = np.inf
    bd = -1
    bk = -1
    for d in range(n_dest):
        for k in range(width):
            v = bc[k] + _cap(macp[d, k])
            if v < best:
                best = v
                bd = d
                bk = k
    return best, bd, bk


@njit(cache=True, nogil=True)
def exhaustive_min(bc_lo, bc_hi, mac_lo, mac_hi, pen_lo, pen_hi, nlo,
                   bc_scale, square_mac, hi_start, hi_stop):
    lomask = bc_lo.shape[0] - 1
    himask = bc_hi.shape[0] - 1
    n_lo = bc_lo.shape[0]
    n_dest = mac_lo.shape[0]
    best = np.inf
    bd = -1
    bm = -1
    for h in range(hi_start, hi_stop):
        ch = himask ^ h
        for lo in range(n_lo):
            cl = lomask ^ lo
            bc = _cap(bc_scale * (bc_lo[cl] + bc_hi[ch]))
            pen = pen_lo[cl] + pen_hi[ch]
            mask = (h << nlo) | lo
            for d in range(n_dest):
                m = mac_lo[d, lo] + mac_hi[d, h]
                if square_mac:
                    m = m * m
                v = (bc + _cap(m)) - pen
                if v < best or (v == best and (d < bd or (d == bd and mask < bm))):
                    best = v
                    bd = d
                    bm = mask
    return best, bd, bm
