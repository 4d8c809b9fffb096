"""Accelerated constant-step stochastic gradient methods for streaming
least squares, with numerical certification of the underlying covariance
operator algebra."""

from .problems import (DistributionKind, LeastSquaresProblem,
                       ProblemConstants, Sample, constants, excess_risk,
                       make_gaussian_problem, make_one_hot_problem, sample,
                       sample_chunk)
from .oracles import (ExactAdditiveOracle, ExactOracle, MiniBatchOracle,
                      RunningAverageOracle, SgdOracle, exact_gradient,
                      minibatch_gradient, running_average_gradient,
                      sgd_gradient)
from .algorithms import (AcsgdState, RunRecord, StepSizes, acsgd_step,
                         benchmark_step_sizes, default_log_schedule,
                         default_sgd_step_size, default_step_sizes_averaged,
                         default_step_sizes_last_iterate, init_state,
                         recombination_residual, run, run_minibatch)
from .experiments import (AlgorithmSpec, ExperimentConfig, ProblemSpec,
                          SlopeEstimate, fit_slope, load_config,
                          lower_bound_experiment,
                          memory_tradeoff_experiment, run_experiment)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
