"""Gradient oracles for the streaming quadratic objective.

All stochastic oracles are unbiased for the exact gradient H (x - x*).  The
rank-one oracle a (<a, x> - b) splits into a multiplicative part
a a^T (x - x*) and an additive part -eta a with eta = b - <a, x*>; the
running-average oracle trades this noise for Theta(d^2) memory by keeping the
sufficient statistics of all past samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problems import LeastSquaresProblem, Sample


@dataclass(frozen=True)
class SgdOracle:
    """Rank-one stochastic gradient from one streamed sample."""

    kind: str = "sgd"


@dataclass(frozen=True)
class MiniBatchOracle:
    """Mean of `batch_size` independent rank-one gradients per step."""

    batch_size: int
    kind: str = "minibatch"

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass(frozen=True)
class ExactOracle:
    """Deterministic gradient H (x - x*)."""

    kind: str = "exact"


@dataclass(frozen=True)
class ExactAdditiveOracle:
    """Exact gradient plus isotropic Gaussian noise of the given scale."""

    noise_std: float
    kind: str = "exact_additive"

    def __post_init__(self):
        if self.noise_std < 0:
            raise ValueError("noise_std must be nonnegative")


class RunningAverageOracle:
    """Gradient from the running average of all residuals seen so far.

    After ingesting samples 0..t the estimate at x is
    (1/(t+1)) sum_i a_i (<a_i, x> - b_i), held as the sufficient statistics
    gram_sum = sum_i a_i a_i^T and cross_sum = sum_i b_i a_i, so memory and
    per-call cost are Theta(d^2) independent of t.  Single-writer: ingesting
    mutates the state, so do not share one instance across concurrent runs.
    """

    kind = "running_average"

    def __init__(self, dimension: int):
        self.dimension = dimension
        self.count = 0
        self.gram_sum = np.zeros((dimension, dimension))
        self.cross_sum = np.zeros(dimension)

    def ingest(self, s: Sample) -> None:
        a = s.features
        self.gram_sum += np.outer(a, a)
        self.cross_sum += s.response * a
        self.count += 1

    def gradient(self, x: np.ndarray) -> np.ndarray:
        if self.count == 0:
            raise ValueError("no samples ingested yet")
        return (self.gram_sum @ x - self.cross_sum) / self.count


def sgd_gradient(s: Sample, x: np.ndarray) -> np.ndarray:
    """Rank-one gradient a (<a, x> - b) of the squared residual at x."""
    a = s.features
    if a.shape != np.shape(x):
        raise ValueError("feature/iterate dimension mismatch")
    return a * (float(a @ x) - s.response)


def minibatch_gradient(samples: list[Sample], x: np.ndarray) -> np.ndarray:
    """Arithmetic mean of the per-sample rank-one gradients."""
    if len(samples) == 0:
        raise ValueError("empty mini-batch")
    g = np.zeros_like(np.asarray(x, dtype=float))
    for s in samples:
        g += sgd_gradient(s, x)
    return g / len(samples)


def exact_gradient(problem: LeastSquaresProblem, x: np.ndarray,
                   additive_noise_std: float = 0.0,
                   rng: np.random.Generator | None = None) -> np.ndarray:
    """H (x - x*), optionally perturbed by N(0, additive_noise_std^2 I)."""
    if additive_noise_std < 0:
        raise ValueError("additive_noise_std must be nonnegative")
    g = problem.covariance @ (np.asarray(x, dtype=float) - problem.optimum)
    if additive_noise_std > 0:
        if rng is None:
            raise ValueError("additive noise needs a random stream")
        g = g + additive_noise_std * rng.standard_normal(problem.dimension)
    return g


def running_average_gradient(state: RunningAverageOracle, new_sample: Sample,
                             x: np.ndarray) -> np.ndarray:
    """Ingest one more sample, then evaluate the running-average gradient."""
    state.ingest(new_sample)
    return state.gradient(x)
