"""Grid simulation of Brownian paths and the tax-reflected process.

These are the reference (per-path) operations; the estimators in `mc` and
`constant` use vectorized equivalents but must match these semantics.  All
randomness flows through SeedSpec, which hands out independent splittable
streams so that runs are bit-reproducible for a fixed master seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidGridError, InvalidTaxError


@dataclass(frozen=True)
class SeedSpec:
    """Addressable random stream: (master seed, stream index).

    Distinct stream indices give statistically independent streams; extra
    integer tags can split a stream further (e.g. one substream per noise
    source of a path, so that draws stay aligned when array sizes change).
    """

    master_seed: int
    stream_index: int = 0

    def generator(self, *tags: int) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.master_seed,
                                    spawn_key=(self.stream_index, *tags))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class GridPath:
    """Process values on the uniform grid t_k = k * horizon / n_steps."""

    n_steps: int
    horizon: float
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.n_steps < 1 or not self.horizon > 0:
            raise InvalidGridError(
                f"need n_steps >= 1 and horizon > 0, got {self.n_steps}, {self.horizon}")
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.shape != (self.n_steps + 1,):
            raise InvalidGridError(f"values must have length n_steps+1, got {v.shape}")
        if v[0] != 0.0:
            raise InvalidGridError("paths must start at 0")

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.n_steps + 1)


def sample_bm(n_steps: int, horizon: float, seed: SeedSpec) -> GridPath:
    """Standard Brownian motion on the grid; exact in distribution at grid times."""
    if n_steps < 1 or not horizon > 0:
        raise InvalidGridError(f"need n_steps >= 1 and horizon > 0, got {n_steps}, {horizon}")
    rng = seed.generator(0)
    dW = rng.standard_normal(n_steps) * math.sqrt(horizon / n_steps)
    values = np.concatenate([[0.0], np.cumsum(dW)])
    return GridPath(n_steps=n_steps, horizon=horizon, values=values)


def drifted(path: GridPath, c: float) -> GridPath:
    """Subtract the premium drift: B(t_k) - c * t_k."""
    return replace(path, values=path.values - c * path.times)


def running_inf(path: GridPath) -> GridPath:
    """Pointwise running minimum over grid values."""
    return replace(path, values=np.minimum.accumulate(path.values))


def reflect(drifted_path: GridPath, gamma: float) -> GridPath:
    """Tax-reflected process: values minus gamma times the running infimum.

    gamma=0 is the identity; gamma=1 gives the nonnegative workload process.
    """
    if not 0.0 <= gamma < 2.0:
        raise InvalidTaxError(f"gamma must lie in [0, 2), got {gamma}")
    inf = np.minimum.accumulate(drifted_path.values)
    return replace(drifted_path, values=drifted_path.values - gamma * inf)


def bridge_min_sample(x, y, dt, unif):
    """Exact sample of the path minimum between grid points.

    Conditional on endpoints x, y over an interval of length dt, the minimum
    of the connecting Brownian bridge has the law of
    (x + y - sqrt((y - x)^2 - 2*dt*log(U))) / 2 with U uniform on (0, 1].
    Always <= min(x, y); U=1 gives min(x, y) exactly.  Accepts arrays.
    """
    if np.any(np.asarray(dt) <= 0):
        raise InvalidGridError("dt must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = 0.5 * (x + y - np.sqrt((y - x) ** 2 - 2.0 * dt * np.log(unif)))
    if m.ndim == 0:
        return float(m)
    return m


def refined_running_inf(drifted_path: GridPath, rng: np.random.Generator) -> GridPath:
    """Running infimum with exact bridge minima sampled inside each interval.

    Removes the downward discretization bias of the grid infimum: given the
    grid skeleton, the returned values are exactly distributed as the
    continuous-time running infimum at grid times.
    """
    v = drifted_path.values
    u = rng.random(drifted_path.n_steps)
    # numpy uniforms live in [0,1); the bridge formula wants (0,1]
    mins = bridge_min_sample(v[:-1], v[1:], drifted_path.dt, 1.0 - u)
    out = np.minimum.accumulate(np.concatenate([[v[0]], mins]))
    return replace(drifted_path, values=out)
