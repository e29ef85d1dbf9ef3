"""Deterministic 64-bit PRNG and weighted index sampling.

Pure-integer xoshiro256++ so that streams are bit-identical across
platforms for a given seed; weighted sampling is a binary search on the
cumulative distribution, O(log m) per draw.
"""

import math
from bisect import bisect_right

import numpy as np

_MASK = (1 << 64) - 1
_INV53 = 2.0 ** -53


def splitmix64(state):
    """One splitmix64 step: returns (next_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


class Xoshiro256pp:
    """xoshiro256++ generator whose state is seeded through splitmix64."""

    def __init__(self, seed):
        state = int(seed) & _MASK
        words = []
        for _ in range(4):
            state, w = splitmix64(state)
            words.append(w)
        self._s = words

    def next_u64(self):
        s0, s1, s2, s3 = self._s
        v = (s0 + s3) & _MASK
        result = ((((v << 23) & _MASK) | (v >> 41)) + s0) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) & _MASK) | (s3 >> 19)
        self._s = [s0, s1, s2, s3]
        return result

    def random(self):
        """One double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV53

    def uniforms(self, count):
        """`count` doubles in (0, 1], suitable for log() transforms."""
        s0, s1, s2, s3 = self._s
        out = np.empty(count)
        for idx in range(count):
            v = (s0 + s3) & _MASK
            r = ((((v << 23) & _MASK) | (v >> 41)) + s0) & _MASK
            t = (s1 << 17) & _MASK
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = ((s3 << 45) & _MASK) | (s3 >> 19)
            out[idx] = ((r >> 11) + 1) * _INV53
        self._s = [s0, s1, s2, s3]
        return out

    def normals(self, count):
        """`count` standard-normal doubles via the Box-Muller transform."""
        pairs = (count + 1) // 2
        u = self.uniforms(2 * pairs)
        radius = np.sqrt(-2.0 * np.log(u[0::2]))
        angle = (2.0 * math.pi) * u[1::2]
        z = np.empty(2 * pairs)
        z[0::2] = radius * np.cos(angle)
        z[1::2] = radius * np.sin(angle)
        return z[:count]

    def below(self, bound):
        """Integer in [0, bound)."""
        if bound < 1:
            raise ValueError("bound must be >= 1")
        return min(int(self.random() * bound), bound - 1)


class CumulativeSampler:
    """Draws indices with fixed probabilities via cumulative-sum bisection."""

    def __init__(self, probs):
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probs must be a nonempty 1-d vector")
        if np.any(p <= 0) or not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be positive and finite")
        total = float(p.sum())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {total!r}")
        cum = np.cumsum(p)
        cum[-1] = 1.0  # guard against rounding in the last entry
        self._cum = cum.tolist()

    def draw(self, rng):
        return bisect_right(self._cum, rng.random())


def sample_row(probs, rng):
    """One index drawn with probability probs[i], deterministic in rng state."""
    return CumulativeSampler(probs).draw(rng)


def normalized_weights(weights):
    """Validates positive finite weights and rescales them to sum to 1."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a nonempty 1-d vector")
    if np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be positive and finite")
    return w / w.sum()
