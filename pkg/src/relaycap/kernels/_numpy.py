"""Pure-numpy kernels. Same arithmetic, operation for operation, as ``_numba``."""
import numpy as np

LN2 = 0.6931471805599453
_SLAB = 1 << 16


def cap_array(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = x < 1.0
    out[small] = 0.5 * (np.log1p(x[small]) / LN2)
    big = ~small
    out[big] = 0.5 * np.log2(1.0 + x[big])
    return out


def cumsum0(x):
    """Left-to-right running sum with a leading zero.

    Above 10**4 terms the accumulation runs in extended precision, which
    stands in for the compensated loop of the compiled kernel.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros(x.shape[:-1] + (x.shape[-1] + 1,), dtype=np.float64)
    if x.shape[-1] > 10_000:
        out[..., 1:] = np.cumsum(x.astype(np.longdouble), axis=-1).astype(np.float64)
    else:
        out[..., 1:] = np.cumsum(x, axis=-1)
    return out


def prefix_min(suffix, macp, bc_scale):
    bc = cap_array(bc_scale * suffix)
    vals = bc[None, :] + cap_array(macp)
    flat = int(np.argmin(vals))
    d, k = divmod(flat, vals.shape[1])
    return float(vals[d, k]), d, k


def exhaustive_min(bc_lo, bc_hi, mac_lo, mac_hi, pen_lo, pen_hi, nlo,
                   bc_scale, square_mac, hi_start, hi_stop):
    """Minimum of ``cap(bc_scale*BC(comp)) + cap(MAC_d(J)) - PEN(comp)``.

    Subsets are split as ``mask = hi << nlo | lo``; every additive subset
    quantity is ``lo_table[lo] + hi_table[hi]``. Only ``hi`` in
    ``[hi_start, hi_stop)`` is scanned. Returns ``(value, d, mask)``, the
    lexicographic minimum over all scanned triples.
    """
    nlo_size = bc_lo.shape[0]
    himask = bc_hi.shape[0] - 1
    bc_lo_c = bc_lo[::-1]
    pen_lo_c = pen_lo[::-1]
    n_dest = mac_lo.shape[0]
    # several hi rows per step keep each vectorized slab near 2**16 entries
    step = max(1, _SLAB // nlo_size)
    best = (np.inf, -1, -1)
    for h0 in range(hi_start, hi_stop, step):
        hs = np.arange(h0, min(h0 + step, hi_stop))
        ch = himask ^ hs
        bc = cap_array(bc_scale * (bc_lo_c[None, :] + bc_hi[ch][:, None]))
        pen = pen_lo_c[None, :] + pen_hi[ch][:, None]
        for d in range(n_dest):
            m = mac_lo[d][None, :] + mac_hi[d, hs][:, None]
            if square_mac:
                m = m * m
            vals = (bc + cap_array(m)) - pen
            r, i = divmod(int(np.argmin(vals)), nlo_size)
            cand = (float(vals[r, i]), d, (int(hs[r]) << nlo) | i)
            if cand < best:
                best = cand
    return best
