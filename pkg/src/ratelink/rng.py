"""Counter-based random streams (Philox4x32-10), vectorised with numpy.

Every variate is a pure function of ``(seed, stream, a, b)``: the 64-bit seed
is the Philox key and the counter is ``(a, b, stream_lo, stream_hi)``.  This
lets a network of ``n = 10**6`` links generate only the gains an experiment
actually touches, while the full matrix stays well defined.
"""

from __future__ import annotations

import numpy as np

MASK32 = np.uint64(0xFFFFFFFF)
_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85
_ROUNDS = 10

# 52 bits keep (bits + 0.5) exact, so u never rounds to 0 or 1
_INV52 = 1.0 / 4503599627370496.0


def _split64(value: int) -> tuple[int, int]:
    value = int(value)
    if not 0 <= value < 2**64:
        raise ValueError(f"expected an unsigned 64-bit integer, got {value}")
    return value & 0xFFFFFFFF, value >> 32


# Below this many blocks plain Python integers beat numpy's per-call overhead.
SMALL_BLOCK = 16


def _philox_words(c0: int, c1: int, c2: int, c3: int, k0: int, k1: int) -> tuple[int, ...]:
    for r in range(_ROUNDS):
        if r:
            k0 = (k0 + _W0) & 0xFFFFFFFF
            k1 = (k1 + _W1) & 0xFFFFFFFF
        p0 = 0xD2511F53 * c0
        p1 = 0xCD9E8D57 * c2
        c0, c1, c2, c3 = (p1 >> 32) ^ c1 ^ k0, p1 & 0xFFFFFFFF, (p0 >> 32) ^ c3 ^ k1, p0 & 0xFFFFFFFF
    return c0, c1, c2, c3


def philox4x32(counter, key) -> tuple[np.ndarray, ...]:
    """Philox4x32-10 block function.

    ``counter`` is a 4-tuple of uint32-valued arrays (broadcastable against each
    other), ``key`` a 2-tuple of ints.  Returns four uint64 arrays holding the
    32-bit output words.
    """
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) & MASK32 for c in counter)
    c0, c1, c2, c3 = np.broadcast_arrays(c0, c1, c2, c3)
    k0, k1 = int(key[0]) & 0xFFFFFFFF, int(key[1]) & 0xFFFFFFFF
    if c0.size <= SMALL_BLOCK:
        words = [_philox_words(int(w), int(x), int(y), int(z), k0, k1)
                 for w, x, y, z in zip(c0.flat, c1.flat, c2.flat, c3.flat)]
        out = np.array(words, dtype=np.uint64).reshape(c0.shape + (4,))
        return out[..., 0], out[..., 1], out[..., 2], out[..., 3]
    for r in range(_ROUNDS):
        if r:
            k0 = (k0 + _W0) & 0xFFFFFFFF
            k1 = (k1 + _W1) & 0xFFFFFFFF
        p0 = _M0 * c0
        p1 = _M1 * c2
        hi0, lo0 = p0 >> np.uint64(32), p0 & MASK32
        hi1, lo1 = p1 >> np.uint64(32), p1 & MASK32
        c0, c1, c2, c3 = (
            hi1 ^ c1 ^ np.uint64(k0),
            lo1,
            hi0 ^ c3 ^ np.uint64(k1),
            lo0,
        )
    return c0, c1, c2, c3


def uniforms(seed: int, stream: int, a, b) -> np.ndarray:
    """Uniform variates in the open interval (0, 1), one per ``(a, b)`` pair."""
    key = _split64(seed)
    s_lo, s_hi = _split64(stream)
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    w0, w1, _, _ = philox4x32((a, b, np.uint64(s_lo), np.uint64(s_hi)), key)
    bits = ((w1 << np.uint64(32)) | w0) >> np.uint64(12)
    return (bits.astype(np.float64) + 0.5) * _INV52


def exponentials(seed: int, stream: int, a, b) -> np.ndarray:
    """Unit-mean exponential variates by inverse CDF, ``-log(u)``."""
    return -np.log(uniforms(seed, stream, a, b))
