"""Synthetic streaming least-squares problems.

A problem is a feature distribution together with a ground-truth optimum and
homoscedastic response noise.  Two feature families are supported, both with
closed-form moment constants:

* Gaussian features a ~ N(0, H) for an arbitrary SPD covariance H;
* one-hot features a = e_i drawn with probability p_i (so H = diag(p)).

Excess risk is measured exactly as 0.5 (x - x*)^T H (x - x*).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class DistributionKind(Enum):
    GAUSSIAN = "gaussian"
    ONE_HOT = "one_hot"


@dataclass(frozen=True)
class Sample:
    """One streamed observation (a, b) with b = <a, x*> + noise."""

    features: np.ndarray
    response: float


@dataclass(frozen=True)
class ProblemConstants:
    """Distribution-dependent constants of the fourth-moment assumptions.

    r_squared bounds E[|a|^2 a a^T] by r_squared * H, stat_condition bounds
    E[|a|^2_{H^-1} a a^T] by stat_condition * H, and kurtosis bounds
    E[<a, M a> a a^T] by kurtosis * tr(M H) * H for PSD M.
    """

    r_squared: float
    stat_condition: float
    kurtosis: float
    l_smooth: float
    trace_h: float
    noise_var: float


@dataclass(frozen=True)
class LeastSquaresProblem:
    """Streaming least-squares instance; immutable after construction.

    The covariance eigendecomposition is computed once so that Gaussian
    sampling is a single matrix-vector product a = sqrt_factor @ g with
    g standard normal.
    """

    dimension: int
    covariance: np.ndarray
    optimum: np.ndarray
    noise_std: float
    distribution_kind: DistributionKind
    probabilities: np.ndarray | None = None
    sqrt_factor: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        d = self.dimension
        if d < 1:
            raise ValueError("dimension must be >= 1")
        if self.noise_std < 0:
            raise ValueError("noise_std must be nonnegative")
        H = self.covariance
        if H.shape != (d, d):
            raise ValueError("covariance must be d x d")
        if not np.allclose(H, H.T, atol=1e-12):
            raise ValueError("covariance must be symmetric")
        if np.linalg.eigvalsh(H)[0] <= 0:
            raise ValueError("covariance must be positive definite")
        if self.distribution_kind is DistributionKind.ONE_HOT:
            p = self.probabilities
            if p is None:
                raise ValueError("one-hot problems need probabilities")
            if np.any(p <= 0):
                raise ValueError("one-hot probabilities must be positive")
            if abs(p.sum() - 1.0) > 1e-12:
                raise ValueError("one-hot probabilities must sum to 1")
            if not np.array_equal(H, np.diag(p)):
                raise ValueError("one-hot covariance must equal diag(p)")
        for arr in (self.covariance, self.optimum, self.probabilities,
                    self.sqrt_factor):
            if arr is not None:
                arr.setflags(write=False)

    def describe(self) -> dict:
        """Plain-dict descriptor used in run metadata and JSON summaries."""
        return {
            "kind": self.distribution_kind.value,
            "dimension": self.dimension,
            "noise_std": self.noise_std,
            "trace_h": float(np.trace(self.covariance)),
        }


def make_gaussian_problem(d: int, decay_exponent: float, scale: float,
                          sigma: float, seed: int) -> LeastSquaresProblem:
    """Gaussian-feature problem with power-law spectrum lambda_i = scale / i^decay.

    The eigenbasis is Haar-random (QR of a Gaussian matrix with the sign of
    the R diagonal fixed, drawn from `seed`) and the optimum projects equally
    on every eigenvector with unit norm, so the distance from the zero
    initialization is exactly 1.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if decay_exponent < 0:
        raise ValueError("decay_exponent must be >= 0")
    if scale <= 0:
        raise ValueError("scale must be positive")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(seed)
    eigvals = scale / np.arange(1, d + 1, dtype=float) ** decay_exponent
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    basis = q * np.sign(np.diag(r))
    covariance = (basis * eigvals) @ basis.T
    covariance = 0.5 * (covariance + covariance.T)
    optimum = basis.sum(axis=1) / np.sqrt(d)
    sqrt_factor = basis * np.sqrt(eigvals)
    return LeastSquaresProblem(
        dimension=d,
        covariance=covariance,
        optimum=optimum,
        noise_std=float(sigma),
        distribution_kind=DistributionKind.GAUSSIAN,
        sqrt_factor=sqrt_factor,
    )


def make_one_hot_problem(d: int, probabilities="uniform",
                         start: np.ndarray | None = None,
                         noise_std: float = 0.0) -> LeastSquaresProblem:
    """One-hot-feature problem: a = e_i with probability p_i, H = diag(p).

    The optimum is start + (1/sqrt(d)) * sum_i e_i, so |x* - start|^2 = 1
    regardless of d.  The default is the noiseless worst case for
    acceleration; `noise_std` adds homoscedastic response noise when the
    noisy regime is wanted.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if isinstance(probabilities, str):
        if probabilities != "uniform":
            raise ValueError(f"unknown probability spec {probabilities!r}")
        p = np.full(d, 1.0 / d)
    else:
        p = np.asarray(probabilities, dtype=float)
        if p.shape != (d,):
            raise ValueError("probabilities must have length d")
        if np.any(p <= 0):
            raise ValueError("probabilities must be positive")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1")
    if start is None:
        start = np.zeros(d)
    optimum = np.asarray(start, dtype=float) + np.full(d, 1.0 / np.sqrt(d))
    return LeastSquaresProblem(
        dimension=d,
        covariance=np.diag(p),
        optimum=optimum,
        noise_std=float(noise_std),
        distribution_kind=DistributionKind.ONE_HOT,
        probabilities=p,
    )


def sample_chunk(problem: LeastSquaresProblem, rng: np.random.Generator,
                 n: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw n i.i.d. samples; returns (features (n, d), responses (n,)).

    The draw order inside a chunk is fixed (all feature randomness, then all
    response noise), so runs are reproducible for a given generator state and
    chunk sequence.
    """
    d = problem.dimension
    if problem.distribution_kind is DistributionKind.GAUSSIAN:
        feats = rng.standard_normal((n, d)) @ problem.sqrt_factor.T
    else:
        cum = np.cumsum(problem.probabilities)
        cum[-1] = 1.0
        idx = np.searchsorted(cum, rng.random(n), side="right")
        feats = np.zeros((n, d))
        feats[np.arange(n), idx] = 1.0
    resp = feats @ problem.optimum
    if problem.noise_std > 0:
        resp = resp + problem.noise_std * rng.standard_normal(n)
    return feats, resp


def sample(problem: LeastSquaresProblem, rng: np.random.Generator) -> Sample:
    """Draw a single sample from the caller-owned random stream."""
    feats, resp = sample_chunk(problem, rng, 1)
    return Sample(features=feats[0], response=float(resp[0]))


def excess_risk(problem: LeastSquaresProblem, x: np.ndarray) -> float:
    """Exact excess risk 0.5 (x - x*)^T H (x - x*); zero iff x = x*."""
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.dimension,):
        raise ValueError(
            f"x has shape {x.shape}, expected ({problem.dimension},)")
    diff = x - problem.optimum
    return 0.5 * float(diff @ problem.covariance @ diff)


def constants(problem: LeastSquaresProblem) -> ProblemConstants:
    """Closed-form moment constants for the two supported families.

    Gaussian: R^2 = tr H + 2 L (Wick identity, tight on the top eigenvector),
    statistical condition number d + 2, kurtosis 3.  One-hot: R^2 = 1 with
    equality, statistical condition number and kurtosis both 1 / min_i p_i.
    """
    eigvals = np.linalg.eigvalsh(problem.covariance)
    l_smooth = float(eigvals[-1])
    trace_h = float(np.trace(problem.covariance))
    if problem.distribution_kind is DistributionKind.GAUSSIAN:
        r_squared = trace_h + 2.0 * l_smooth
        stat_condition = float(problem.dimension + 2)
        kurtosis = 3.0
    else:
        p_min = float(problem.probabilities.min())
        r_squared = 1.0
        stat_condition = 1.0 / p_min
        kurtosis = 1.0 / p_min
    assert stat_condition >= problem.dimension - 1e-9
    assert r_squared >= l_smooth - 1e-12
    return ProblemConstants(
        r_squared=r_squared,
        stat_condition=stat_condition,
        kurtosis=kurtosis,
        l_smooth=l_smooth,
        trace_h=trace_h,
        noise_var=problem.noise_std ** 2,
    )
