"""Counter-based random number generation (Philox4x32-10).

Samplers draw from keyed, counted streams: the value of draw k on stream s is
a pure function of (master_seed, stream_id, channel, k).  Batches can then be
partitioned across any number of workers without the results depending on
scheduling, and reruns are bit-identical.

Layout:
  key   = two 32-bit words from splitmix64(splitmix64(master_seed) ^ stream_id)
  ctr   = (draw_index lo32, draw_index hi32, channel, 0x77696e64)
  block = philox4x32_10(ctr, key) -> four 32-bit words -> two 53-bit uniforms

Channels keep independent draw sequences inside one path simulation:
  0: primary normals (the driving noise)
  1: auxiliary uniforms (bridge crossings, sampled extrema, Cauchy draws)
  2: secondary normals (an independent Brownian motion in the same sampler)

This module holds the pure-Python scalar reference (used in tests) and the
vectorized numpy implementation (the fallback backend).  The numba kernels
re-implement the same functions scalar-fashion from the same constants; the
integer streams are identical by construction.
"""

from __future__ import annotations

import math

import numpy as np

MASK32 = 0xFFFFFFFF
MASK64 = 0xFFFFFFFFFFFFFFFF

PHILOX_M0 = 0xD2511F53
PHILOX_M1 = 0xCD9E8D57
PHILOX_W0 = 0x9E3779B9
PHILOX_W1 = 0xBB67AE85
PHILOX_ROUNDS = 10

# Fixed fourth counter word; tags every block produced by this package.
CTR_TAG = 0x77696E64

SPLITMIX_GAMMA = 0x9E3779B97F4A7C15

CHANNEL_NORMAL = 0
CHANNEL_UNIFORM = 1
CHANNEL_NORMAL2 = 2

TWO_NEG_53 = 2.0 ** -53
TWO_PI = 2.0 * math.pi


def splitmix64(x: int) -> int:
    """One splitmix64 output step on a 64-bit state (python-int reference)."""
    z = (x + SPLITMIX_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_key(master_seed: int, stream_id: int) -> int:
    """64-bit Philox key for one stream (low word k0, high word k1)."""
    return splitmix64(splitmix64(master_seed & MASK64) ^ (stream_id & MASK64))


def philox4x32(c0: int, c1: int, c2: int, c3: int, k0: int, k1: int):
    """Philox4x32, PHILOX_ROUNDS rounds; scalar python-int reference."""
    x0, x1, x2, x3 = c0 & MASK32, c1 & MASK32, c2 & MASK32, c3 & MASK32
    k0 &= MASK32
    k1 &= MASK32
    for r in range(PHILOX_ROUNDS):
        if r > 0:
            k0 = (k0 + PHILOX_W0) & MASK32
            k1 = (k1 + PHILOX_W1) & MASK32
        p0 = (x0 * PHILOX_M0) & MASK64
        p1 = (x2 * PHILOX_M1) & MASK64
        hi0, lo0 = p0 >> 32, p0 & MASK32
        hi1, lo1 = p1 >> 32, p1 & MASK32
        x0 = hi1 ^ x1 ^ k0
        x1 = lo1
        x2 = hi0 ^ x3 ^ k1
        x3 = lo0
    return x0, x1, x2, x3


def _block_to_uniforms(x0: int, x1: int, x2: int, x3: int):
    """Two uniforms from one block: first in (0,1], second in [0,1)."""
    hi = (((x0 << 32) | x1) >> 11) & MASK64
    lo = (((x2 << 32) | x3) >> 11) & MASK64
    return (hi + 1) * TWO_NEG_53, lo * TWO_NEG_53


def uniform_pair(key: int, idx: int, channel: int):
    """Scalar reference: two uniforms for draw idx on the given channel."""
    x = philox4x32(idx & MASK32, (idx >> 32) & MASK32, channel, CTR_TAG,
                   key & MASK32, (key >> 32) & MASK32)
    return _block_to_uniforms(*x)


def normal_pair(key: int, idx: int, channel: int = CHANNEL_NORMAL):
    """Scalar reference: Box-Muller pair for draw idx."""
    u1, u2 = uniform_pair(key, idx, channel)
    r = math.sqrt(-2.0 * math.log(u1))
    return r * math.cos(TWO_PI * u2), r * math.sin(TWO_PI * u2)


# ---------------------------------------------------------------------------
# Vectorized (numpy) implementation; same integer streams as the scalar path.
# ---------------------------------------------------------------------------

def philox4x32_np(c0, c1, c2, c3, k0, k1):
    """Vectorized Philox4x32 over uint64 arrays (values < 2^32)."""
    x0 = c0.astype(np.uint64)
    x1 = c1.astype(np.uint64)
    x2 = c2.astype(np.uint64)
    x3 = c3.astype(np.uint64)
    kk0 = k0.astype(np.uint64)
    kk1 = k1.astype(np.uint64)
    m0 = np.uint64(PHILOX_M0)
    m1 = np.uint64(PHILOX_M1)
    w0 = np.uint64(PHILOX_W0)
    w1 = np.uint64(PHILOX_W1)
    mask32 = np.uint64(MASK32)
    sh = np.uint64(32)
    for r in range(PHILOX_ROUNDS):
        if r > 0:
            kk0 = (kk0 + w0) & mask32
            kk1 = (kk1 + w1) & mask32
        p0 = x0 * m0
        p1 = x2 * m1
        hi0, lo0 = p0 >> sh, p0 & mask32
        hi1, lo1 = p1 >> sh, p1 & mask32
        x0 = hi1 ^ x1 ^ kk0
        x1 = lo1
        x2 = hi0 ^ x3 ^ kk1
        x3 = lo0
    return x0, x1, x2, x3


def stream_keys_np(master_seed: int, stream_ids) -> np.ndarray:
    """Vectorized `stream_key` over an array of stream ids."""
    base = np.uint64(splitmix64(master_seed & MASK64))
    z = (base ^ stream_ids.astype(np.uint64)) + np.uint64(SPLITMIX_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def uniform_pair_np(keys, idx, channel: int):
    """Two uniform arrays (first in (0,1], second in [0,1)) for per-path draw
    indices `idx` on the given channel."""
    idx64 = idx.astype(np.uint64)
    mask32 = np.uint64(MASK32)
    c0 = idx64 & mask32
    c1 = idx64 >> np.uint64(32)
    c2 = np.full_like(idx64, np.uint64(channel))
    c3 = np.full_like(idx64, np.uint64(CTR_TAG))
    k0 = keys & mask32
    k1 = keys >> np.uint64(32)
    x0, x1, x2, x3 = philox4x32_np(c0, c1, c2, c3, k0, k1)
    hi = ((x0 << np.uint64(32)) | x1) >> np.uint64(11)
    lo = ((x2 << np.uint64(32)) | x3) >> np.uint64(11)
    u1 = (hi + np.uint64(1)).astype(np.float64) * TWO_NEG_53
    u2 = lo.astype(np.float64) * TWO_NEG_53
    return u1, u2


def normal_pair_np(keys, idx, channel: int = CHANNEL_NORMAL):
    """Vectorized Box-Muller pair for per-path draw indices."""
    u1, u2 = uniform_pair_np(keys, idx, channel)
    r = np.sqrt(-2.0 * np.log(u1))
    ang = TWO_PI * u2
    return r * np.cos(ang), r * np.sin(ang)
