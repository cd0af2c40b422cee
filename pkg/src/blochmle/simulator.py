"""Synthetic tomography counts with a fixed, portable random generator.

All randomness is drawn as 53-bit uniforms from numpy's counter-based
Philox bit generator and mapped through the inverse CDF of the outcome
distribution in its canonical order, so a given spec reproduces identical
counts on any platform.  Standard mode uses one substream per axis, spawned
deterministically from the seed; randomized mode uses a single stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CountRecord, InvalidInputError, weight_vector

MODES = ("standard", "randomized")

# Grace for pure states normalized in floating point (norm^2 = 1 +/- few ulp).
_NORM_SLACK = 1e-12


@dataclass(frozen=True)
class SimulationSpec:
    """Ground truth and sampling plan for one synthetic experiment.

    ``n_shots`` counts measurements per axis in standard mode and in total
    in randomized mode, where one of the three axes is picked each shot
    with the given weights.
    """

    xi_true: tuple[float, float, float]
    mode: str
    n_shots: int
    weights: tuple[float, float, float] | None = None
    seed: int = 0

    def __post_init__(self):
        xi = np.asarray(self.xi_true, dtype=float)
        if xi.shape != (3,) or not np.all(np.isfinite(xi)):
            raise InvalidInputError(f"xi_true must be a finite 3-vector, got {self.xi_true!r}")
        if float(np.dot(xi, xi)) > 1.0 + _NORM_SLACK:
            raise InvalidInputError(f"xi_true must lie in the unit ball, got norm^2 = {np.dot(xi, xi)}")
        object.__setattr__(self, "xi_true", tuple(float(x) for x in xi))
        if self.mode not in MODES:
            raise InvalidInputError(f"mode must be one of {MODES}, got {self.mode!r}")
        if int(self.n_shots) < 1:
            raise InvalidInputError(f"n_shots must be >= 1, got {self.n_shots}")
        object.__setattr__(self, "n_shots", int(self.n_shots))
        if self.mode == "randomized":
            if self.weights is None:
                raise InvalidInputError("randomized mode needs axis weights")
            w = weight_vector(self.weights)
            object.__setattr__(self, "weights", tuple(float(x) for x in w))
        elif self.weights is not None:
            raise InvalidInputError("standard mode takes no weights (every axis gets n_shots)")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidInputError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        object.__setattr__(self, "seed", int(self.seed))


def _axis_streams(seed: int, n: int) -> list[np.random.Generator]:
    return [np.random.Generator(np.random.Philox(child)) for child in np.random.SeedSequence(seed).spawn(n)]


def simulate(spec: SimulationSpec) -> CountRecord:
    """Draw counts for the given spec; bit-identical for identical specs.

    Raises if sampling leaves some axis with zero shots (possible in
    randomized mode with very small ``n_shots``), since such a record has
    no defined empirical estimate.
    """
    xi = np.asarray(spec.xi_true, dtype=float)
    if spec.mode == "standard":
        n_plus = []
        for axis, rng in enumerate(_axis_streams(spec.seed, 3)):
            p_up = min(max((1.0 + xi[axis]) / 2.0, 0.0), 1.0)
            u = rng.random(spec.n_shots)
            n_plus.append(int(np.count_nonzero(u < p_up)))
        n_minus = [spec.n_shots - p for p in n_plus]
        return CountRecord(tuple(n_plus), tuple(n_minus))

    s = np.asarray(spec.weights, dtype=float)
    probs = np.empty(6)
    probs[0::2] = s * (1.0 + xi) / 2.0
    probs[1::2] = s * (1.0 - xi) / 2.0
    probs = np.clip(probs, 0.0, None)
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(spec.seed)))
    u = rng.random(spec.n_shots)
    tallies = np.bincount(np.searchsorted(cdf, u, side="right"), minlength=6)
    return CountRecord(tuple(int(t) for t in tallies[0::2]), tuple(int(t) for t in tallies[1::2]))
