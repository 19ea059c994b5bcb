"""Seeded synthetic ARIMA series.

Random numbers come from a counter-based SplitMix64 stream so that a given
seed produces the same bits everywhere:

* the i-th 64-bit output (i = 0, 1, ...) is ``mix64(seed + (i + 1) * 0x9E3779B97F4A7C15)``
  computed mod 2**64, where ``mix64`` is the SplitMix64 finaliser
  (xor-shift 30, multiply 0xBF58476D1CE4E5B9, xor-shift 27,
  multiply 0x94D049BB133111EB, xor-shift 31);
* a uniform on (0, 1] is ``((x >> 11) + 1) * 2**-53``;
* standard normals come in pairs from consecutive uniforms (u1, u2) by
  Box-Muller: ``sqrt(-2 ln u1) * cos(2 pi u2)`` then ``... * sin(2 pi u2)``.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .estimation import ArimaParams
from .series import Series

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def splitmix64(seed, count):
    """First ``count`` SplitMix64 outputs for ``seed`` as a uint64 array."""
    seed = np.uint64(int(seed) & _MASK64)
    with np.errstate(over="ignore"):
        z = seed + np.arange(1, count + 1, dtype=np.uint64) * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        z = z ^ (z >> np.uint64(31))
    return z


def uniforms(seed, count):
    """Uniform variates on (0, 1]."""
    bits = splitmix64(seed, count)
    return ((bits >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0 ** -53


def standard_normals(seed, count):
    pairs = (count + 1) // 2
    u = uniforms(seed, 2 * pairs)
    radius = np.sqrt(-2.0 * np.log(u[0::2]))
    angle = 2.0 * np.pi * u[1::2]
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


@dataclass(frozen=True)
class SimSpec:
    params: ArimaParams
    n: int
    d: int = 0
    burn_in: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.d < 0 or self.burn_in < 0:
            raise ValueError("d and burn_in must be nonnegative")


def simulate(spec, name="simulated", start_year=1):
    """Draw an ARIMA(p, d, q) sample path for ``spec``.

    The ARMA part runs from rest for ``burn_in + n`` steps, the burn-in is
    dropped, ``mu`` is added, and the result is integrated ``d`` times from
    zero.
    """
    prm = spec.params
    total = spec.burn_in + spec.n
    eps = np.sqrt(prm.sigma2) * standard_normals(spec.seed, total)
    y = kernels.arma_filter(eps, np.asarray(prm.phi), np.asarray(prm.theta))
    x = y[spec.burn_in:] + prm.mu
    for _ in range(spec.d):
        x = np.cumsum(x)
    return Series(name=name, start_year=start_year, values=tuple(x.tolist()))
