"""Accelerated stochastic gradient descent for streaming least squares.

The accelerated method (AcSGD) couples a gradient step of size beta with an
aggressive step of size alpha that is amplified by the iteration counter:

    y_{t+1} = x_t - beta * g_t
    z_{t+1} = z_t - alpha * (t+1) * g_t
    (t+2) x_{t+1} = (t+1) y_{t+1} + z_{t+1}

started from x_0 = y_0 = z_0.  Robustness to rank-one gradient noise comes
from scaling alpha down by the statistical condition number; alpha = beta
recovers deterministic Nesterov acceleration, alpha = 0 averaged gradient
descent, beta = 0 a heavy-ball variant.  The weighted average
sum_t (t+1) x_t / sum_t (t+1) is the estimator with the optimal variance
rate; plain SGD (x_{t+1} = x_t - gamma g_t) is the baseline.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .problems import LeastSquaresProblem, constants as problem_constants, \
    sample_chunk
from .oracles import SgdOracle, MiniBatchOracle, ExactOracle, \
    ExactAdditiveOracle, RunningAverageOracle

AVERAGING_MODES = {
    "last": _kernels.AVG_LAST,
    "weighted": _kernels.AVG_WEIGHTED,
    "polyak": _kernels.AVG_POLYAK,
    "tail": _kernels.AVG_TAIL,
}

DIVERGENCE_RISK = _kernels.DIVERGENCE_RISK

# Samples drawn per chunk; fixed so that a (problem, seed, config) triple
# always consumes the random stream in the same order.
_CHUNK_SAMPLES = 1 << 16


@dataclass(frozen=True)
class StepSizes:
    """The pair (alpha, beta); alpha = 0 gives averaged gradient descent."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("step sizes must be nonnegative")

    def satisfies_averaged_conditions(self, c) -> bool:
        """(alpha + 2 beta) R^2 <= 1 and alpha <= beta / (2 kappa_tilde)."""
        tol = 1e-12
        return ((self.alpha + 2 * self.beta) * c.r_squared <= 1 + tol
                and self.alpha <= self.beta / (2 * c.stat_condition) + tol)

    def satisfies_last_iterate_conditions(self, c, d: int) -> bool:
        """kappa (alpha + 2 beta) tr H <= 1 and alpha <= beta / (2 kappa d)."""
        tol = 1e-12
        return (c.kurtosis * (self.alpha + 2 * self.beta) * c.trace_h
                <= 1 + tol
                and self.alpha <= self.beta / (2 * c.kurtosis * d) + tol)

    def satisfies_minibatch_conditions(self, c, batch_size: int) -> bool:
        """(alpha + 2 beta) R^2 <= b, alpha <= b beta / (2 kt), both <= 1/L."""
        tol = 1e-12
        return ((self.alpha + 2 * self.beta) * c.r_squared
                <= batch_size + tol
                and self.alpha <= batch_size * self.beta
                / (2 * c.stat_condition) + tol
                and self.alpha <= 1 / c.l_smooth + tol
                and self.beta <= 1 / c.l_smooth + tol)


def default_step_sizes_averaged(c) -> StepSizes:
    """beta = 1/(3 R^2), alpha = 1/(6 kappa_tilde R^2); saturates
    alpha = beta / (2 kappa_tilde) and keeps (alpha + 2 beta) R^2 <= 1."""
    beta = 1.0 / (3.0 * c.r_squared)
    alpha = 1.0 / (6.0 * c.stat_condition * c.r_squared)
    return StepSizes(alpha=alpha, beta=beta)


def default_step_sizes_last_iterate(c, d: int) -> StepSizes:
    """beta = 1/(3 kappa tr H), alpha = 1/(6 d kappa^2 tr H), the choice
    meeting the last-iterate conditions with equality in alpha."""
    beta = 1.0 / (3.0 * c.kurtosis * c.trace_h)
    alpha = 1.0 / (6.0 * d * c.kurtosis ** 2 * c.trace_h)
    return StepSizes(alpha=alpha, beta=beta)


def benchmark_step_sizes(c, d: int) -> StepSizes:
    """The more aggressive empirical choice used in the synthetic benchmarks:
    beta = 1/(3 tr H) and alpha = beta / d."""
    beta = 1.0 / (3.0 * c.trace_h)
    return StepSizes(alpha=beta / d, beta=beta)


def default_sgd_step_size(problem: LeastSquaresProblem) -> float:
    """gamma = 1/(3 tr H) for Gaussian features, 1/(3 R^2) otherwise."""
    c = problem_constants(problem)
    if problem.distribution_kind.value == "gaussian":
        return 1.0 / (3.0 * c.trace_h)
    return 1.0 / (3.0 * c.r_squared)


@dataclass(frozen=True)
class AcsgdState:
    """Iterate triple (x, y, z) plus counter and averaging accumulators.

    weighted_sum holds sum_{tau<=t} (tau+1) x_tau and weight_total the
    matching sum of weights, (t+1)(t+2)/2 after t steps.
    """

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    t: int
    weighted_sum: np.ndarray
    weight_total: float

    @property
    def weighted_average(self) -> np.ndarray:
        return self.weighted_sum / self.weight_total


def init_state(x0: np.ndarray) -> AcsgdState:
    x0 = np.asarray(x0, dtype=float)
    return AcsgdState(x=x0.copy(), y=x0.copy(), z=x0.copy(), t=0,
                      weighted_sum=x0.copy(), weight_total=1.0)


def acsgd_step(state: AcsgdState, gradient: np.ndarray,
               steps: StepSizes) -> AcsgdState:
    """One accelerated update; `gradient` must be evaluated at state.x."""
    t = state.t
    y_next = state.x - steps.beta * gradient
    z_next = state.z - steps.alpha * (t + 1) * gradient
    x_next = ((t + 1) * y_next + z_next) / (t + 2)
    return AcsgdState(
        x=x_next, y=y_next, z=z_next, t=t + 1,
        weighted_sum=state.weighted_sum + (t + 2) * x_next,
        weight_total=state.weight_total + (t + 2),
    )


def recombination_residual(state: AcsgdState) -> float:
    """Relative residual of (t+1) x_t = t y_t + z_t (identically 0 at t=0)."""
    lhs = (state.t + 1) * state.x
    rhs = state.t * state.y + state.z
    return float(np.linalg.norm(lhs - rhs) / (1 + np.linalg.norm(lhs)))


@dataclass
class RunRecord:
    """Excess-risk time series of one run plus its configuration."""

    iterations: np.ndarray
    samples: np.ndarray
    risk_last: np.ndarray
    risk_avg: np.ndarray
    diverged: bool
    algorithm: str
    oracle: str
    averaging: str
    seed: int
    alpha: float
    beta: float
    problem: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.any(np.diff(self.iterations) <= 0):
            raise ValueError("iterations must be strictly increasing")
        finite_last = self.risk_last[np.isfinite(self.risk_last)]
        finite_avg = self.risk_avg[np.isfinite(self.risk_avg)]
        if (finite_last < -1e-15).any() or (finite_avg < -1e-15).any():
            raise ValueError("negative excess risk beyond numerical floor")


def default_log_schedule(iterations: int,
                         points_per_decade: int = 50) -> np.ndarray:
    """Geometric schedule: 0, then ~points_per_decade log points per decade
    up to and including `iterations`."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    n = max(2, int(np.ceil(points_per_decade * np.log10(iterations + 1))))
    grid = np.unique(np.round(
        np.geomspace(1, iterations, n)).astype(np.int64))
    return np.concatenate(([0], grid))


def _oracle_label(oracle) -> str:
    if isinstance(oracle, MiniBatchOracle):
        return f"minibatch(b={oracle.batch_size})"
    if isinstance(oracle, ExactAdditiveOracle):
        return f"exact_additive({oracle.noise_std:g})"
    return oracle.kind


def _warn_if_unstable(algorithm, steps, c):
    if algorithm == "acsgd":
        if not steps.satisfies_averaged_conditions(c):
            warnings.warn(
                "step sizes violate (alpha + 2 beta) R^2 <= 1, "
                "alpha <= beta/(2 kappa_tilde); the run may diverge",
                stacklevel=3)
    else:
        if steps.beta * c.r_squared > 1 + 1e-12:
            warnings.warn("SGD step size exceeds 1/R^2; the run may diverge",
                          stacklevel=3)


def run(problem: LeastSquaresProblem, oracle, algorithm: str,
        steps: StepSizes, iterations: int, averaging: str = "weighted",
        log_schedule: np.ndarray | None = None, seed: int = 0,
        x0: np.ndarray | None = None,
        tail_fraction: float = 0.25) -> RunRecord:
    """Stream `iterations` samples through the chosen algorithm.

    For SGD the gradient step size is steps.beta.  Divergence (non-finite or
    > 1e12 excess risk at a log point) truncates the record and sets the
    `diverged` flag instead of raising, so unstable configurations can be
    exhibited.  Identical (problem, seed, config) triples give bit-identical
    records.
    """
    if algorithm not in ("acsgd", "sgd"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if averaging not in AVERAGING_MODES:
        raise ValueError(f"unknown averaging {averaging!r}")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    d = problem.dimension
    if x0 is None:
        x0 = np.zeros(d)
    x0 = np.asarray(x0, dtype=float)
    c = problem_constants(problem)
    _warn_if_unstable(algorithm, steps, c)

    if log_schedule is None:
        log_ts = default_log_schedule(iterations)
    else:
        log_ts = np.unique(np.asarray(log_schedule, dtype=np.int64))
        log_ts = log_ts[(log_ts >= 0) & (log_ts <= iterations)]

    avg_mode = AVERAGING_MODES[averaging]
    if avg_mode == _kernels.AVG_TAIL:
        if not 0 < tail_fraction <= 1:
            raise ValueError("tail_fraction must be in (0, 1]")
        # window holding exactly the last ceil(f T) of the T+1 iterates
        tail_start = iterations - int(np.ceil(tail_fraction * iterations)) + 1
    else:
        tail_start = -1

    if isinstance(oracle, (ExactOracle, ExactAdditiveOracle)):
        rec = _run_exact(problem, oracle, algorithm, steps, iterations,
                         log_ts, seed, x0, avg_mode, tail_start)
    elif isinstance(oracle, (SgdOracle, MiniBatchOracle,
                             RunningAverageOracle)):
        rec = _run_streaming(problem, oracle, algorithm, steps, iterations,
                             log_ts, seed, x0, avg_mode, tail_start)
    else:
        raise ValueError(f"unknown oracle {oracle!r}")

    its, samples, risk_last, risk_avg, diverged = rec
    return RunRecord(
        iterations=its, samples=samples, risk_last=risk_last,
        risk_avg=risk_avg, diverged=diverged, algorithm=algorithm,
        oracle=_oracle_label(oracle), averaging=averaging, seed=seed,
        alpha=steps.alpha, beta=steps.beta, problem=problem.describe(),
    )


def run_minibatch(problem: LeastSquaresProblem, batch_size: int,
                  steps: StepSizes, iterations: int,
                  averaging: str = "weighted", seed: int = 0,
                  algorithm: str = "acsgd",
                  log_schedule: np.ndarray | None = None,
                  x0: np.ndarray | None = None,
                  tail_fraction: float = 0.25) -> RunRecord:
    """Mini-batch variant; consumes batch_size samples per iteration and the
    record's `samples` column carries the per-sample abscissa t * b."""
    return run(problem, MiniBatchOracle(batch_size), algorithm, steps,
               iterations, averaging, log_schedule, seed, x0, tail_fraction)


def _risk(problem, v) -> float:
    diff = v - problem.optimum
    return 0.5 * float(diff @ problem.covariance @ diff)


def _run_streaming(problem, oracle, algorithm, steps, iterations, log_ts,
                   seed, x0, avg_mode, tail_start):
    d = problem.dimension
    batch = oracle.batch_size if isinstance(oracle, MiniBatchOracle) else 1
    running_avg = isinstance(oracle, RunningAverageOracle)
    if running_avg:
        if algorithm != "acsgd":
            raise ValueError(
                "the running-average oracle is only wired to acsgd")
        if oracle.count != 0:
            raise ValueError("running-average oracle must be fresh")
        gram_sum = oracle.gram_sum
        cross_sum = oracle.cross_sum
        gram_sum.setflags(write=True)
        cross_sum.setflags(write=True)

    rng = np.random.default_rng(seed)
    x = x0.copy()
    y = x0.copy()
    z = x0.copy()
    wsum = x0.copy()
    psum = x0.copy()
    tsum = x0.copy() if tail_start == 0 else np.zeros(d)

    out_last = np.full(log_ts.shape[0], np.nan)
    out_avg = np.full(log_ts.shape[0], np.nan)
    ptr = 0
    if log_ts.shape[0] and log_ts[0] == 0:
        out_last[0] = out_avg[0] = _risk(problem, x0)
        ptr = 1

    H = problem.covariance
    xstar = problem.optimum
    t = 0
    wtot = 1.0
    status = 0
    iters_per_chunk = max(1, _CHUNK_SAMPLES // batch)
    while t < iterations and status == 0:
        n_iters = min(iters_per_chunk, iterations - t)
        feats, resp = sample_chunk(problem, rng, n_iters * batch)
        if running_avg:
            t, wtot, ptr, status = _kernels.acsgd_running_average_chunk(
                x, y, z, wsum, psum, tsum, gram_sum, cross_sum, feats, resp,
                t, wtot, steps.alpha, steps.beta, tail_start, log_ts, ptr,
                H, xstar, out_last, out_avg, avg_mode)
        elif algorithm == "acsgd":
            t, wtot, ptr, status = _kernels.acsgd_chunk(
                x, y, z, wsum, psum, tsum, feats, resp, batch, t, wtot,
                steps.alpha, steps.beta, tail_start, log_ts, ptr, H, xstar,
                out_last, out_avg, avg_mode)
        else:
            t, wtot, ptr, status = _kernels.sgd_chunk(
                x, wsum, psum, tsum, feats, resp, batch, t, wtot, steps.beta,
                tail_start, log_ts, ptr, H, xstar, out_last, out_avg,
                avg_mode)
    if running_avg:
        oracle.count = t

    its = log_ts[:ptr]
    return (its, its * batch, out_last[:ptr], out_avg[:ptr], status == 1)


def _run_exact(problem, oracle, algorithm, steps, iterations, log_ts, seed,
               x0, avg_mode, tail_start):
    rng = np.random.default_rng(seed)
    noise = oracle.noise_std if isinstance(oracle, ExactAdditiveOracle) \
        else 0.0
    H = problem.covariance
    xstar = problem.optimum
    d = problem.dimension

    state = init_state(x0)
    x_sgd = x0.copy()
    wsum = x0.copy()
    wtot = 1.0
    psum = x0.copy()
    tsum = x0.copy() if tail_start == 0 else np.zeros(d)

    its, risks_last, risks_avg = [], [], []
    diverged = False
    log_set = set(int(v) for v in log_ts)

    def current() -> np.ndarray:
        return state.x if algorithm == "acsgd" else x_sgd

    def averaged(t: int) -> np.ndarray:
        if avg_mode == _kernels.AVG_WEIGHTED:
            return wsum / wtot
        if avg_mode == _kernels.AVG_POLYAK:
            return psum / (t + 1)
        if avg_mode == _kernels.AVG_TAIL and t >= tail_start >= 0:
            return tsum / (t - tail_start + 1)
        return current()

    def log_point(t: int) -> bool:
        rl = _risk(problem, current())
        ra = _risk(problem, averaged(t))
        its.append(t)
        risks_last.append(rl)
        risks_avg.append(ra)
        bad = not (np.isfinite(rl) and np.isfinite(ra)) \
            or rl > DIVERGENCE_RISK or ra > DIVERGENCE_RISK
        return bad

    if 0 in log_set and log_point(0):
        diverged = True
    t = 0
    while t < iterations and not diverged:
        point = current()
        g = H @ (point - xstar)
        if noise > 0:
            g = g + noise * rng.standard_normal(d)
        if algorithm == "acsgd":
            state = acsgd_step(state, g, steps)
        else:
            x_sgd = x_sgd - steps.beta * g
        wsum += (t + 2) * current()
        wtot += t + 2
        t += 1
        psum += current()
        if tail_start >= 0 and t >= tail_start:
            tsum += current()
        if t in log_set and log_point(t):
            diverged = True

    its = np.asarray(its, dtype=np.int64)
    return (its, its.copy(), np.asarray(risks_last), np.asarray(risks_avg),
            diverged)
