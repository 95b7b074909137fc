"""Pure-numpy implementations of the numerical kernels.

These mirror the compiled routines in ``_kernels.pyx`` and are used when the
extension is not built (or when ``NPCFACTORS_PURE_PYTHON=1``).
"""
import numpy as np
from scipy.signal import lfilter

_MASK32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)

PHILOX_M0 = np.uint64(0xD2E7470EE14C6C93)
PHILOX_M1 = np.uint64(0xCA5A826395121157)
PHILOX_W0 = np.uint64(0x9E3779B97F4A7C15)
PHILOX_W1 = np.uint64(0xBB67AE8584CAA73B)

_TWO_PI = 2.0 * np.pi
_INV_2_53 = 1.0 / 9007199254740992.0


def _mulhilo(a, b):
    # 64x64 -> 128 bit product split into 32-bit limbs; uint64 arithmetic wraps.
    a_lo, a_hi = a & _MASK32, a >> _S32
    b_lo, b_hi = b & _MASK32, b >> _S32
    ll = a_lo * b_lo
    lh = a_lo * b_hi
    hl = a_hi * b_lo
    hh = a_hi * b_hi
    mid = (ll >> _S32) + (lh & _MASK32) + (hl & _MASK32)
    hi = hh + (lh >> _S32) + (hl >> _S32) + (mid >> _S32)
    lo = a * b
    return hi, lo


def philox4x64(counters, key):
    """Philox4x64-10 block function.

    Parameters
    ----------
    counters : (m, 4) uint64 array
    key : length-2 uint64 sequence

    Returns
    -------
    (m, 4) uint64 array of random words.
    """
    c = np.array(counters, dtype=np.uint64, copy=True).reshape(-1, 4)
    c0, c1, c2, c3 = c[:, 0], c[:, 1], c[:, 2], c[:, 3]
    k0 = np.uint64(key[0])
    k1 = np.uint64(key[1])
    with np.errstate(over="ignore"):
        for rnd in range(10):
            if rnd:
                k0 = k0 + PHILOX_W0
                k1 = k1 + PHILOX_W1
            hi0, lo0 = _mulhilo(PHILOX_M0, c0)
            hi1, lo1 = _mulhilo(PHILOX_M1, c2)
            c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return np.stack([c0, c1, c2, c3], axis=1)


def _box_muller(words):
    u1 = ((words[:, 0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53
    u2 = (words[:, 1::2] >> np.uint64(11)).astype(np.float64) * _INV_2_53
    rad = np.sqrt(-2.0 * np.log(u1))
    out = np.empty(words.shape, dtype=np.float64)
    out[:, 0::2] = rad * np.cos(_TWO_PI * u2)
    out[:, 1::2] = rad * np.sin(_TWO_PI * u2)
    return out


def gaussian_grid(key0, key1, stream, n_rows, n_cols):
    """Standard normals; entry (t, i) comes from counter (stream, t, i // 4, 0)."""
    n_blocks = (n_cols + 3) // 4
    t = np.repeat(np.arange(n_rows, dtype=np.uint64), n_blocks)
    b = np.tile(np.arange(n_blocks, dtype=np.uint64), n_rows)
    ctr = np.zeros((n_rows * n_blocks, 4), dtype=np.uint64)
    ctr[:, 0] = np.uint64(stream)
    ctr[:, 1] = t
    ctr[:, 2] = b
    words = philox4x64(ctr, (key0, key1))
    z = _box_muller(words).reshape(n_rows, n_blocks * 4)
    return np.ascontiguousarray(z[:, :n_cols])


def uniform_grid(key0, key1, n_rows, n_cols):
    """Uniforms on [0, 1); entry (i, j) is word 0 of counter (i, j, 0, 0)."""
    i = np.repeat(np.arange(n_rows, dtype=np.uint64), n_cols)
    j = np.tile(np.arange(n_cols, dtype=np.uint64), n_rows)
    ctr = np.zeros((n_rows * n_cols, 4), dtype=np.uint64)
    ctr[:, 0] = i
    ctr[:, 1] = j
    words = philox4x64(ctr, (key0, key1))
    u = (words[:, 0] >> np.uint64(11)).astype(np.float64) * _INV_2_53
    return u.reshape(n_rows, n_cols)


def ar1_filter(z, rho, sigma):
    """Map iid normals z (T x n) to rows with covariance sigma^2 rho^|i-j|."""
    z = np.asarray(z, dtype=np.float64)
    s = z * (sigma * np.sqrt(1.0 - rho * rho))
    s[:, 0] = sigma * z[:, 0]
    if rho == 0.0:
        return s
    return lfilter([1.0], [1.0, -rho], s, axis=1)


def kms_matvec(v, rho, sigma):
    """Product of the n x n matrix sigma^2 rho^|i-j| with v (n,) or (n, k)."""
    v = np.asarray(v, dtype=np.float64)
    if rho == 0.0:
        return (sigma * sigma) * v
    fwd = lfilter([1.0], [1.0, -rho], v, axis=0)
    bwd = lfilter([1.0], [1.0, -rho], v[::-1], axis=0)[::-1]
    return (sigma * sigma) * (fwd + bwd - v)
