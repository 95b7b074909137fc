"""Counter-based random streams.

Every random number is a pure function of a 128-bit key ``(seed, tag)`` and a
256-bit counter, evaluated with Philox4x64-10. Nothing is stateful, so any
sub-block of a panel can be regenerated independently and panels of different
sizes share their common entries.
"""
import numpy as np

from . import kernels

LOADINGS = 0x4C4F4144  # stream tags, one per kind of draw
FACTORS = 0x46414354
IDIO = 0x4944494F
DERIVE = 0x44455249
START = 0x53544152

_U64 = 1 << 64


def _check_u64(value, name):
    value = int(value)
    if not 0 <= value < _U64:
        raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {value}")
    return value


def uniforms(seed, tag, n_rows, n_cols):
    """Uniform [0, 1) grid; entry (i, j) depends only on (seed, tag, i, j)."""
    seed = _check_u64(seed, "seed")
    return kernels.uniform_grid(seed, tag, int(n_rows), int(n_cols))


def normals(seed, tag, stream, n_rows, n_cols):
    """Standard normal grid; entry (t, i) depends only on (seed, tag, stream, t, i)."""
    seed = _check_u64(seed, "seed")
    stream = _check_u64(stream, "stream")
    return kernels.gaussian_grid(seed, tag, stream, int(n_rows), int(n_cols))


def derive_seed(seed, index):
    """Child seed for replicate ``index``; distinct indices give unrelated seeds."""
    seed = _check_u64(seed, "seed")
    index = _check_u64(index, "index")
    ctr = np.array([[index, 0, 0, 0]], dtype=np.uint64)
    return int(kernels.philox4x64(ctr, (seed, DERIVE))[0, 0])


def start_vector(n, seed=0):
    """Fixed pseudo-random unit vector used to seed Lanczos iterations."""
    v = normals(seed, START, 0, 1, n)[0]
    return v / np.linalg.norm(v)
