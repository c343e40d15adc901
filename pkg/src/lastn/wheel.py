"""Pocket-probability models for ideal and biased roulette wheels.

Pockets are indexed 0..W-1 in order of increasing probability.  The mapping
between these indices and the physical numbers painted on a given wheel is
unknown and irrelevant to the strategy: only the shape of the distribution
matters.  Two bias families are provided in addition to the uniform law:

* ``gaussian`` -- probabilities fall off from the centre index with Gaussian
  tails below it and mirror-image excess above it, controlled by a spread
  parameter ``delta``.
* ``linear`` -- a straight ramp around the centre, controlled by ``beta``.

Both families are antisymmetric around the centre index c = (W-1)/2, which
makes them sum to one by construction, and both reduce to the uniform law at
parameter zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AMERICAN",
    "EUROPEAN",
    "FAMILIES",
    "BiasModel",
    "WheelError",
    "WheelSpec",
    "make_model",
    "spread_ratio_closed_form",
]


class WheelError(ValueError):
    """Invalid wheel geometry, bias parameter, or pocket index."""


@dataclass(frozen=True)
class WheelSpec:
    """Wheel geometry: number of pockets and the single-number payout factor.

    The payout is what a winning one-unit bet collects (stake included) and is
    deliberately independent of ``pockets``; the house edge of an ideal wheel
    is exactly ``payout/pockets - 1``.
    """

    pockets: int = 37
    payout: int = 36

    def __post_init__(self) -> None:
        if self.pockets < 2:
            raise WheelError(f"pockets must be >= 2, got {self.pockets}")
        if self.payout < 1:
            raise WheelError(f"payout must be >= 1, got {self.payout}")

    @property
    def center(self) -> float:
        """Centre index of the probability ramp; fractional for even wheels."""
        return (self.pockets - 1) / 2


EUROPEAN = WheelSpec(pockets=37, payout=36)
AMERICAN = WheelSpec(pockets=38, payout=36)

FAMILIES = ("uniform", "gaussian", "linear")


def _gaussian_probs(delta: float, wheel: WheelSpec) -> np.ndarray:
    w = wheel.pockets
    c = wheel.center
    k = np.arange(w)
    lower = np.exp(-(delta**2) * (k - c) ** 2 / 2.0) / w
    # Upper half mirrored as 2/W - P(W-1-k): keeps the pairwise sum exact.
    probs = np.where(k <= c, lower, 2.0 / w - lower[w - 1 - k])
    return probs


def _linear_probs(beta: float, wheel: WheelSpec) -> np.ndarray:
    w = wheel.pockets
    c = wheel.center
    k = np.arange(w)
    lower = (1.0 + (k - c) / c * beta) / w
    probs = np.where(k <= c, lower, 2.0 / w - lower[w - 1 - k])
    return probs


@dataclass(frozen=True)
class BiasModel:
    """A probability law over the pockets of a wheel.

    Instances are immutable and safe to share across worker threads or
    processes; random generators are always passed in by the caller.
    """

    kind: str
    param: float
    wheel: WheelSpec

    def __post_init__(self) -> None:
        if self.kind not in FAMILIES:
            raise WheelError(f"unknown bias family {self.kind!r}; choose from {FAMILIES}")
        if self.kind == "uniform":
            if self.param != 0.0:
                raise WheelError("uniform model takes no spread parameter")
            probs = np.full(self.wheel.pockets, 1.0 / self.wheel.pockets)
        elif self.kind == "gaussian":
            if not (self.param >= 0.0 and math.isfinite(self.param)):
                raise WheelError(f"delta must be finite and >= 0, got {self.param}")
            probs = _gaussian_probs(self.param, self.wheel)
        else:
            if not (0.0 <= self.param < 1.0):
                raise WheelError(f"beta must be in [0, 1), got {self.param}")
            probs = _linear_probs(self.param, self.wheel)
        cum = np.cumsum(probs)
        cum[-1] = 1.0  # guard searchsorted against cumulative rounding
        probs.setflags(write=False)
        cum.setflags(write=False)
        object.__setattr__(self, "_probs", probs)
        object.__setattr__(self, "_cum", cum)

    @classmethod
    def uniform(cls, wheel: WheelSpec = EUROPEAN) -> "BiasModel":
        return cls("uniform", 0.0, wheel)

    @classmethod
    def gaussian_tail(cls, delta: float, wheel: WheelSpec = EUROPEAN) -> "BiasModel":
        return cls("gaussian", float(delta), wheel)

    @classmethod
    def linear(cls, beta: float, wheel: WheelSpec = EUROPEAN) -> "BiasModel":
        return cls("linear", float(beta), wheel)

    @property
    def probabilities(self) -> np.ndarray:
        """Read-only vector of pocket probabilities, non-decreasing in k."""
        return self._probs  # type: ignore[attr-defined]

    @property
    def cumulative(self) -> np.ndarray:
        """Read-only cumulative table used by the sampler."""
        return self._cum  # type: ignore[attr-defined]

    def probability(self, k: int) -> float:
        if not 0 <= k < self.wheel.pockets:
            raise WheelError(f"pocket index {k} out of range 0..{self.wheel.pockets - 1}")
        return float(self.probabilities[k])

    def spread_ratio(self) -> float:
        """Ratio of the most likely to the least likely pocket probability.

        Returns ``inf`` when the lowest probability underflows to zero
        (extreme spread), which is a legitimate report rather than an error.
        """
        p0 = float(self.probabilities[0])
        if p0 <= 0.0:
            return math.inf
        return float(self.probabilities[-1]) / p0

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw pocket indices with this law via the cumulative table.

        A binary search over the cumulative table is plenty at wheel sizes of
        a few dozen pockets; the sampler is a pure function of the generator
        state, so reproducibility is entirely the caller's seed discipline.
        """
        u = rng.random(size)
        return np.searchsorted(self.cumulative, u, side="right")


def spread_ratio_closed_form(kind: str, param: float, wheel: WheelSpec = EUROPEAN) -> float:
    """Closed-form spread ratio, kept separate from the probability-table path
    so the two can be cross-checked against each other."""
    if kind == "uniform":
        return 1.0
    c = wheel.center
    if kind == "gaussian":
        try:
            return 2.0 * math.exp(param**2 * c**2 / 2.0) - 1.0
        except OverflowError:
            return math.inf
    if kind == "linear":
        if param >= 1.0:
            return math.inf
        return (1.0 + param) / (1.0 - param)
    raise WheelError(f"unknown bias family {kind!r}")


def make_model(family: str, param: float, wheel: WheelSpec = EUROPEAN) -> BiasModel:
    """Build a model from a family name and spread parameter."""
    if family == "uniform":
        return BiasModel.uniform(wheel)
    if family == "gaussian":
        return BiasModel.gaussian_tail(param, wheel)
    if family == "linear":
        return BiasModel.linear(param, wheel)
    raise WheelError(f"unknown bias family {family!r}; choose from {FAMILIES}")
