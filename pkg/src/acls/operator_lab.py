"""Numerical certification of the covariance-operator algebra.

The rescaled iterates theta_t = (v_t, w_t) = (t (y_t - x*), z_t - x*) follow
the time-invariant random recursion theta_{t+1} = J_t theta_t + eps_{t+1}.
This module builds the mean update matrix A = E[J], the operators

    T  o Theta = E[J Theta J^T]
    T~ o Theta = A Theta A^T
    M  o Theta = E[(J - A) Theta (J - A)^T]          (so T = T~ + M)

on 2d x 2d covariance space, the closed-form geometric series of the 2x2
eigen-blocks of A, the exact operator inverse (1 - T~)^{-1} applied to the
gradient-noise matrix, and the almost-eigenvector inequalities that drive
the convergence bounds.  Exact expectations are restricted to one-hot
feature distributions, where they are finite sums; Monte-Carlo routines
cover the process-level facts (bias/variance decomposition, variance
covariance bound).

Everything here is verification machinery: dimensions are capped at 16 and
dense algebra is used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.linalg import solve_discrete_lyapunov

from .algorithms import StepSizes
from .problems import DistributionKind, LeastSquaresProblem, \
    constants as problem_constants, sample_chunk

_MAX_DIM = 16


def _check_dim(d: int):
    if d > _MAX_DIM:
        raise ValueError(
            f"operator routines are capped at d <= {_MAX_DIM}, got {d}")


@dataclass(frozen=True)
class BlockMatrix2d:
    """2x2 block matrix over d x d blocks, stored dense."""

    tl: np.ndarray
    tr: np.ndarray
    bl: np.ndarray
    br: np.ndarray

    def __post_init__(self):
        d = self.tl.shape[0]
        for blk in (self.tl, self.tr, self.bl, self.br):
            if blk.shape != (d, d):
                raise ValueError("all blocks must be d x d")

    @property
    def dimension(self) -> int:
        return self.tl.shape[0]

    @property
    def full(self) -> np.ndarray:
        return np.block([[self.tl, self.tr], [self.bl, self.br]])

    @classmethod
    def from_full(cls, mat: np.ndarray) -> "BlockMatrix2d":
        n = mat.shape[0]
        if mat.shape != (n, n) or n % 2:
            raise ValueError("matrix must be square with even size")
        d = n // 2
        return cls(tl=mat[:d, :d].copy(), tr=mat[:d, d:].copy(),
                   bl=mat[d:, :d].copy(), br=mat[d:, d:].copy())

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        f = self.full
        return bool(np.abs(f - f.T).max() <= tol)


def min_symmetric_eigenvalue(mat) -> float:
    """Smallest eigenvalue of the symmetric part (the PSD test statistic)."""
    f = mat.full if isinstance(mat, BlockMatrix2d) else np.asarray(mat)
    return float(np.linalg.eigvalsh(0.5 * (f + f.T))[0])


@dataclass(frozen=True)
class ScalarPairSystem:
    """The 2x2 eigen-block Gamma = [[1-b, 1-b], [-a, 1-a]] of the mean
    update, with its (possibly complex) eigenvalue pair."""

    a: float
    b: float
    gamma: np.ndarray
    rho_plus: complex
    rho_minus: complex

    @classmethod
    def from_products(cls, a: float, b: float) -> "ScalarPairSystem":
        half = 0.5 * (a + b)
        root = np.sqrt(complex(half * half - a))
        return cls(a=a, b=b,
                   gamma=np.array([[1 - b, 1 - b], [-a, 1 - a]]),
                   rho_plus=complex(1 - half + root),
                   rho_minus=complex(1 - half - root))

    @property
    def delta(self) -> complex:
        return self.rho_plus - self.rho_minus

    def vieta_residuals(self) -> tuple[float, float]:
        """|rho+ rho- - (1-b)| and |rho+ + rho- - (2-(a+b))|."""
        prod = self.rho_plus * self.rho_minus
        tot = self.rho_plus + self.rho_minus
        return (abs(prod - (1 - self.b)), abs(tot - (2 - (self.a + self.b))))

    @property
    def spectral_radius(self) -> float:
        return max(abs(self.rho_plus), abs(self.rho_minus))


def noise_matrix(H: np.ndarray, steps: StepSizes) -> BlockMatrix2d:
    """Gradient-noise coefficient matrix [[b^2 H, a b H], [a b H, a^2 H]]."""
    a, b = steps.alpha, steps.beta
    return BlockMatrix2d(tl=b * b * H, tr=a * b * H, bl=a * b * H,
                         br=a * a * H)


def coefficient_matrix(H: np.ndarray) -> BlockMatrix2d:
    """Risk-reading matrix [[H, H], [H, H]]: <coeff, theta x theta> is the
    squared H-norm of v + w."""
    return BlockMatrix2d(tl=H.copy(), tr=H.copy(), bl=H.copy(), br=H.copy())


def build_A(H: np.ndarray, steps: StepSizes) -> BlockMatrix2d:
    """Mean update matrix [[I - bH, I - bH], [-aH, I - aH]]; its spectrum is
    the union over eigenvalues lambda of H of the eigenvalues of
    Gamma(a lambda, b lambda)."""
    d = H.shape[0]
    _check_dim(d)
    eye = np.eye(d)
    a, b = steps.alpha, steps.beta
    return BlockMatrix2d(tl=eye - b * H, tr=eye - b * H, bl=-a * H,
                         br=eye - a * H)


def apply_T_tilde(A: BlockMatrix2d, Theta: BlockMatrix2d) -> BlockMatrix2d:
    """T~ o Theta = A Theta A^T."""
    if A.dimension != Theta.dimension:
        raise ValueError("dimension mismatch")
    Af, Tf = A.full, Theta.full
    return BlockMatrix2d.from_full(Af @ Tf @ Af.T)


def apply_T_tilde_transpose(A: BlockMatrix2d,
                            Theta: BlockMatrix2d) -> BlockMatrix2d:
    """T~^T o Theta = A^T Theta A."""
    if A.dimension != Theta.dimension:
        raise ValueError("dimension mismatch")
    Af, Tf = A.full, Theta.full
    return BlockMatrix2d.from_full(Af.T @ Tf @ Af)


def _one_hot_atoms(problem: LeastSquaresProblem):
    if problem.distribution_kind is not DistributionKind.ONE_HOT:
        raise ValueError("exact operator expectations need one-hot features")
    _check_dim(problem.dimension)
    return problem.probabilities, problem.covariance


def _J_minus_A(a_vec: np.ndarray, H: np.ndarray, steps: StepSizes):
    delta = H - np.outer(a_vec, a_vec)
    return np.block([[steps.beta * delta, steps.beta * delta],
                     [steps.alpha * delta, steps.alpha * delta]])


def apply_M_exact(problem: LeastSquaresProblem, Theta: BlockMatrix2d,
                  steps: StepSizes) -> BlockMatrix2d:
    """M o Theta as the exact finite sum sum_i p_i (J_i - A) Theta (J_i - A)^T.

    Cross-checked against the Kronecker factorization
    [[b^2, ab], [ab, a^2]] (x) E[(H - aa^T) S (H - aa^T)] with S the sum of
    the four blocks of Theta; the two routes must agree to 1e-12.
    """
    p, H = _one_hot_atoms(problem)
    d = problem.dimension
    Tf = Theta.full
    direct = np.zeros((2 * d, 2 * d))
    middle = np.zeros((d, d))
    S = Theta.tl + Theta.tr + Theta.bl + Theta.br
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        JA = _J_minus_A(e, H, steps)
        direct += p[i] * (JA @ Tf @ JA.T)
        delta = H - np.outer(e, e)
        middle += p[i] * (delta @ S @ delta)
    a, b = steps.alpha, steps.beta
    factored = np.kron(np.array([[b * b, a * b], [a * b, a * a]]), middle)
    scale = max(1.0, np.abs(direct).max())
    if np.abs(direct - factored).max() > 1e-12 * scale:
        raise AssertionError("Kronecker factorization of M violated")
    return BlockMatrix2d.from_full(direct)


def apply_M_transpose_exact(problem: LeastSquaresProblem,
                            Theta: BlockMatrix2d,
                            steps: StepSizes) -> BlockMatrix2d:
    """M^T o Theta = sum_i p_i (J_i - A)^T Theta (J_i - A)."""
    p, H = _one_hot_atoms(problem)
    d = problem.dimension
    Tf = Theta.full
    out = np.zeros((2 * d, 2 * d))
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        JA = _J_minus_A(e, H, steps)
        out += p[i] * (JA.T @ Tf @ JA)
    return BlockMatrix2d.from_full(out)


def apply_T_exact(problem: LeastSquaresProblem, Theta: BlockMatrix2d,
                  steps: StepSizes) -> BlockMatrix2d:
    """T o Theta = sum_i p_i J_i Theta J_i^T (exact for one-hot features)."""
    p, H = _one_hot_atoms(problem)
    d = problem.dimension
    eye = np.eye(d)
    Tf = Theta.full
    out = np.zeros((2 * d, 2 * d))
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        aa = np.outer(e, e)
        J = np.block([[eye - steps.beta * aa, eye - steps.beta * aa],
                      [-steps.alpha * aa, eye - steps.alpha * aa]])
        out += p[i] * (J @ Tf @ J.T)
    return BlockMatrix2d.from_full(out)


# ---------------------------------------------------------------------------
# Geometric series of the 2x2 eigen-blocks
# ---------------------------------------------------------------------------

def _check_products(a: float, b: float):
    if not (0 < a < 1 and 0 < b < 1):
        raise ValueError(f"products (a, b) = ({a}, {b}) outside (0, 1)^2")


def geometric_series_closed_form(a: float, b: float) -> np.ndarray:
    """sum_t Gamma^t Aleph (Gamma^t)^T with Aleph = [[b^2, ab], [ab, a^2]],
    in closed form:

        1 / (b (4 - (a + 2b))) * [[2a + b(2b - 3a), a(2b - a)],
                                  [a(2b - a),       2a^2     ]]
    """
    _check_products(a, b)
    den = b * (4.0 - (a + 2.0 * b))
    return np.array([[2 * a + b * (2 * b - 3 * a), a * (2 * b - a)],
                     [a * (2 * b - a), 2 * a * a]]) / den


@njit(cache=True)
def _geometric_series_sum(a, b, n_terms):
    # running P = Gamma^t, accumulating P Aleph P^T term by term
    g00, g01, g10, g11 = 1.0 - b, 1.0 - b, -a, 1.0 - a
    x00, x01, x11 = b * b, a * b, a * a
    s00, s01, s11 = x00, x01, x11
    p00, p01, p10, p11 = 1.0, 0.0, 0.0, 1.0
    for _ in range(n_terms):
        q00 = g00 * p00 + g01 * p10
        q01 = g00 * p01 + g01 * p11
        q10 = g10 * p00 + g11 * p10
        q11 = g10 * p01 + g11 * p11
        p00, p01, p10, p11 = q00, q01, q10, q11
        m00 = p00 * x00 + p01 * x01
        m01 = p00 * x01 + p01 * x11
        m10 = p10 * x00 + p11 * x01
        m11 = p10 * x01 + p11 * x11
        s00 += m00 * p00 + m01 * p01
        s01 += m00 * p10 + m01 * p11
        s11 += m10 * p10 + m11 * p11
    return s00, s01, s11


def _auto_horizon(a: float, b: float, n_terms: int | None) -> int:
    """Horizon with a numerically converged tail: the summands decay like
    r^t with r the squared spectral radius of Gamma, so run at least 2000
    terms and enough for r^n < 1e-18."""
    if n_terms is not None:
        return n_terms
    r = ScalarPairSystem.from_products(a, b).spectral_radius ** 2
    if r >= 1.0:
        raise ValueError("series does not converge")
    return int(min(2_000_000, max(2000, np.ceil(np.log(1e-18) / np.log(r)))))


def geometric_series_brute_force(a: float, b: float,
                                 n_terms: int | None = None) -> np.ndarray:
    """Truncated sum_{t=0}^{n} Gamma^t Aleph (Gamma^t)^T by explicit matrix
    powers; the independent check of the closed form."""
    _check_products(a, b)
    n = _auto_horizon(a, b, n_terms)
    s00, s01, s11 = _geometric_series_sum(a, b, n)
    return np.array([[s00, s01], [s01, s11]])


def geometric_series_bias_coefficient(a: float, b: float) -> float:
    """Closed form of sum_t nu(t) with
    nu(t) = [((1 - rho+)^2 rho+^t - (1 - rho-)^2 rho-^t) / (rho+ - rho-)]^2:

        2a / (b (4 - (a + 2b))) + (a + 2b) / (4 - (a + 2b))
    """
    _check_products(a, b)
    den = 4.0 - (a + 2.0 * b)
    return 2.0 * a / (b * den) + (a + 2.0 * b) / den


@njit(cache=True)
def _bias_series_sum(rp, rm, n_terms):
    delta = rp - rm
    if abs(delta) < 1e-7:
        # confluent double eigenvalue: the difference quotient becomes the
        # derivative of (1 - r)^2 r^t at r = (rp + rm) / 2
        r = 0.5 * (rp + rm)
        total_c = 0.0 + 0.0j
        pw = 1.0 + 0.0j  # r^(t-1), with the t = 0 term handled separately
        w0 = -2.0 * (1.0 - r)
        total_c += w0 * w0
        for t in range(1, n_terms + 1):
            w = (-2.0 * (1.0 - r) * r + t * (1.0 - r) ** 2) * pw
            total_c += w * w
            pw *= r
        return total_c
    cp = (1.0 - rp) ** 2
    cm = (1.0 - rm) ** 2
    pp = 1.0 + 0.0j
    pm = 1.0 + 0.0j
    total = 0.0 + 0.0j
    for _ in range(n_terms + 1):
        w = (cp * pp - cm * pm) / delta
        total += w * w
        pp *= rp
        pm *= rm
    return total


def bias_series_brute_force(a: float, b: float,
                            n_terms: int | None = None) -> float:
    """Truncated sum of nu(t), evaluated with complex eigenvalue arithmetic;
    the imaginary residue must stay below 1e-12."""
    _check_products(a, b)
    n = _auto_horizon(a, b, n_terms)
    sys = ScalarPairSystem.from_products(a, b)
    total = _bias_series_sum(sys.rho_plus, sys.rho_minus, n)
    if abs(total.imag) > 1e-12 * max(1.0, abs(total.real)):
        raise AssertionError(
            f"imaginary residue {total.imag:.3e} exceeds tolerance")
    return float(total.real)


# ---------------------------------------------------------------------------
# Operator inverses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorInverse:
    """Exact (1 - T~)^{-1} o noise and its eigenvalue-free upper bound."""

    exact: BlockMatrix2d
    upper_bound: BlockMatrix2d


def _assemble_blocks(U: np.ndarray, coeffs: np.ndarray) -> BlockMatrix2d:
    """Build sum_i C_i (x) u_i u_i^T from per-eigenvalue 2x2 matrices
    coeffs[i] and the eigenbasis columns of U."""
    blocks = []
    for idx in ((0, 0), (0, 1), (1, 0), (1, 1)):
        diag = coeffs[:, idx[0], idx[1]]
        blocks.append((U * diag) @ U.T)
    return BlockMatrix2d(tl=blocks[0], tr=blocks[1], bl=blocks[2],
                         br=blocks[3])


def _steps_in_domain(eigvals: np.ndarray, steps: StepSizes):
    L = eigvals[-1]
    if not (0 < steps.alpha < 1 / L and 0 < steps.beta < 1 / L):
        raise ValueError("step sizes must lie strictly inside (0, 1/L)")


def inv_one_minus_T_tilde_noise(H: np.ndarray,
                                steps: StepSizes) -> OperatorInverse:
    """Exact (1 - T~)^{-1} applied to the gradient-noise matrix, assembled
    eigenvalue-by-eigenvalue from the 2x2 closed form at
    (a, b) = (alpha lambda_i, beta lambda_i), plus the upper bound

        (1/3) [[2a/b H^{-1} + (2b - 3a) I,  a/b (2b - a) I],
               [a/b (2b - a) I,             2 a^2 / b I   ]]

    which dominates the exact value whenever (alpha + 2 beta) L <= 1 (this
    is asserted when the condition holds).
    """
    d = H.shape[0]
    _check_dim(d)
    eigvals, U = np.linalg.eigh(H)
    _steps_in_domain(eigvals, steps)
    alpha, beta = steps.alpha, steps.beta
    coeffs = np.empty((d, 2, 2))
    for i, lam in enumerate(eigvals):
        coeffs[i] = geometric_series_closed_form(alpha * lam,
                                                 beta * lam) / lam
    exact = _assemble_blocks(U, coeffs)

    eye = np.eye(d)
    H_inv = (U / eigvals) @ U.T
    off = alpha / beta * (2 * beta - alpha) * eye
    bound = BlockMatrix2d(
        tl=(2 * alpha / beta * H_inv + (2 * beta - 3 * alpha) * eye) / 3.0,
        tr=off / 3.0, bl=off / 3.0,
        br=2 * alpha ** 2 / beta * eye / 3.0)
    if (alpha + 2 * beta) * eigvals[-1] <= 1 + 1e-12:
        gap = min_symmetric_eigenvalue(bound.full - exact.full)
        if gap < -1e-10:
            raise AssertionError(
                f"closed-form upper bound violated (gap {gap:.3e})")
    return OperatorInverse(exact=exact, upper_bound=bound)


def inv_one_minus_T_tilde_transpose_coeff(H: np.ndarray,
                                          steps: StepSizes) -> BlockMatrix2d:
    """Exact (1 - T~^T)^{-1} applied to the coefficient matrix
    [[H, H], [H, H]]: per eigenvalue, the 2x2 fixed point of
    X = Gamma^T X Gamma + lambda * ones(2, 2)."""
    d = H.shape[0]
    _check_dim(d)
    eigvals, U = np.linalg.eigh(H)
    _steps_in_domain(eigvals, steps)
    ones = np.ones((2, 2))
    coeffs = np.empty((d, 2, 2))
    for i, lam in enumerate(eigvals):
        gam = ScalarPairSystem.from_products(steps.alpha * lam,
                                             steps.beta * lam).gamma
        coeffs[i] = solve_discrete_lyapunov(gam.T, lam * ones)
    return _assemble_blocks(U, coeffs)


def tilde_inverse_fixed_point(A: BlockMatrix2d,
                              Theta: BlockMatrix2d) -> BlockMatrix2d:
    """Solve X = A X A^T + Theta directly (discrete Lyapunov equation); an
    independent route to (1 - T~)^{-1} o Theta used for cross-checks."""
    return BlockMatrix2d.from_full(
        solve_discrete_lyapunov(A.full, Theta.full))


# ---------------------------------------------------------------------------
# Almost-eigenvector margins
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlmostEigenvectorReport:
    """Margins of the 2/3 almost-eigenvector inequalities.

    margin_noise  = min eig of (2/3) noise - M o (1 - T~)^{-1} o noise,
    margin_coeff  = min eig of (2/3) coeff - M^T o (1 - T~^T)^{-1} o coeff.
    Both must be >= -1e-10 whenever the averaged-regime step conditions
    hold (conditions_ok); with violated conditions the margins are reported
    without any assertion.
    """

    margin_noise: float
    margin_coeff: float
    conditions_ok: bool
    alpha: float
    beta: float
    dimension: int


def verify_almost_eigenvector(problem: LeastSquaresProblem,
                              steps: StepSizes) -> AlmostEigenvectorReport:
    p, H = _one_hot_atoms(problem)
    c = problem_constants(problem)
    conditions_ok = steps.satisfies_averaged_conditions(c)

    noise = noise_matrix(H, steps)
    inv_noise = inv_one_minus_T_tilde_noise(H, steps).exact
    lhs_noise = apply_M_exact(problem, inv_noise, steps)
    margin_noise = min_symmetric_eigenvalue(
        (2.0 / 3.0) * noise.full - lhs_noise.full)

    coeff = coefficient_matrix(H)
    inv_coeff = inv_one_minus_T_tilde_transpose_coeff(H, steps)
    lhs_coeff = apply_M_transpose_exact(problem, inv_coeff, steps)
    margin_coeff = min_symmetric_eigenvalue(
        (2.0 / 3.0) * coeff.full - lhs_coeff.full)

    return AlmostEigenvectorReport(
        margin_noise=margin_noise, margin_coeff=margin_coeff,
        conditions_ok=conditions_ok, alpha=steps.alpha, beta=steps.beta,
        dimension=problem.dimension)


# ---------------------------------------------------------------------------
# Process-level Monte-Carlo checks
# ---------------------------------------------------------------------------

def _jackknife_min_eig(contribs: np.ndarray) -> tuple[float, float]:
    """Min eigenvalue of the mean of per-seed symmetric matrices, with its
    leave-one-out jackknife standard error."""
    n = contribs.shape[0]
    mean = contribs.mean(axis=0)
    stat = float(np.linalg.eigvalsh(mean)[0])
    if n < 2:
        return stat, 0.0
    loo = np.empty(n)
    for i in range(n):
        loo[i] = np.linalg.eigvalsh((n * mean - contribs[i]) / (n - 1))[0]
    se = float(np.sqrt((n - 1) / n * ((loo - loo.mean()) ** 2).sum()))
    return stat, se


def _theta_step(v, w, feats, drive, alpha, beta):
    """One rescaled-recursion step shared by every coupled process:
    v' = s + beta * a * c, w' = w + alpha * a * c with s = v + w and
    c = (t+1) eta - <a, s>."""
    s = v + w
    coef = drive - np.einsum("ij,ij->i", feats, s)
    scaled = feats * coef[:, None]
    return s + beta * scaled, w + alpha * scaled


@dataclass(frozen=True)
class BiasVarianceReport:
    """Decomposition of the summed rescaled iterates into the noiseless
    process started at x0 (bias) and the noisy process started at x*
    (variance), driven by shared sample streams."""

    identity_residual: float
    min_eig_gap: float
    jackknife_se: float
    projected_gap: float
    projected_se: float
    n_seeds: int
    iterations: int

    @property
    def psd_ok(self) -> bool:
        return self.min_eig_gap >= -5.0 * self.jackknife_se


def simulate_bias_variance(problem: LeastSquaresProblem, steps: StepSizes,
                           iterations: int, n_seeds: int, seed: int = 0,
                           x0: np.ndarray | None = None) -> BiasVarianceReport:
    """Run the full, bias and variance recursions on shared streams.

    Checks (i) the per-seed identity theta_t = theta^b_t + theta^v_t at
    every step and (ii) the Monte-Carlo moment inequality
    E[thbar (x) thbar] <= 2 (E[thbar^b (x) thbar^b] + E[thbar^v (x) thbar^v])
    on the summed iterates thbar = sum_{t<=T} theta_t.
    """
    d = problem.dimension
    if d > 8:
        raise ValueError("bias/variance simulation is capped at d <= 8")
    if iterations > 1000:
        raise ValueError("bias/variance simulation is capped at T <= 1000")
    if x0 is None:
        x0 = np.zeros(d)
    alpha, beta = steps.alpha, steps.beta
    sigma = problem.noise_std
    xstar = problem.optimum
    rng = np.random.default_rng(seed)

    w0 = np.tile(x0 - xstar, (n_seeds, 1))
    v_f = np.zeros((n_seeds, d))
    w_f = w0.copy()
    v_b = np.zeros((n_seeds, d))
    w_b = w0.copy()
    v_v = np.zeros((n_seeds, d))
    w_v = np.zeros((n_seeds, d))
    sums = {k: np.zeros((n_seeds, 2 * d)) for k in ("f", "b", "v")}
    for key, (v, w) in (("f", (v_f, w_f)), ("b", (v_b, w_b)),
                        ("v", (v_v, w_v))):
        sums[key][:, :d] += v
        sums[key][:, d:] += w

    identity_residual = 0.0
    for t in range(iterations):
        feats, _ = sample_chunk(problem, rng, n_seeds)
        eta = sigma * rng.standard_normal(n_seeds) if sigma > 0 \
            else np.zeros(n_seeds)
        drive = (t + 1) * eta
        zero = np.zeros(n_seeds)
        v_f, w_f = _theta_step(v_f, w_f, feats, drive, alpha, beta)
        v_b, w_b = _theta_step(v_b, w_b, feats, zero, alpha, beta)
        v_v, w_v = _theta_step(v_v, w_v, feats, drive, alpha, beta)
        identity_residual = max(
            identity_residual,
            float(np.abs(v_f - v_b - v_v).max()),
            float(np.abs(w_f - w_b - w_v).max()))
        sums["f"] += np.hstack((v_f, w_f))
        sums["b"] += np.hstack((v_b, w_b))
        sums["v"] += np.hstack((v_v, w_v))

    # per-seed contributions to 2 (C_b + C_v) - C_full
    contribs = (2 * (np.einsum("ni,nj->nij", sums["b"], sums["b"])
                     + np.einsum("ni,nj->nij", sums["v"], sums["v"]))
                - np.einsum("ni,nj->nij", sums["f"], sums["f"]))
    min_eig, se = _jackknife_min_eig(contribs)

    coeff = coefficient_matrix(problem.covariance).full
    proj = np.einsum("nij,ij->n", contribs, coeff)
    proj_mean = float(proj.mean())
    proj_se = float(proj.std(ddof=1) / np.sqrt(n_seeds)) if n_seeds > 1 \
        else 0.0
    return BiasVarianceReport(
        identity_residual=identity_residual, min_eig_gap=min_eig,
        jackknife_se=se, projected_gap=proj_mean, projected_se=proj_se,
        n_seeds=n_seeds, iterations=iterations)


@dataclass(frozen=True)
class VarianceBoundReport:
    """Gap between the explicit variance covariance bound
    t^2 sigma^2 [[2a/b H^{-1} + (2b-3a) I, ...]] and the Monte-Carlo second
    moment of the variance process at time t."""

    min_eig_gap: float
    jackknife_se: float
    n_seeds: int
    time: int

    @property
    def psd_ok(self) -> bool:
        return self.min_eig_gap >= -5.0 * self.jackknife_se


def variance_covariance_bound_check(problem: LeastSquaresProblem,
                                    steps: StepSizes, t: int,
                                    n_seeds: int,
                                    seed: int = 0) -> VarianceBoundReport:
    """Monte-Carlo check of E[theta^v_t (x) theta^v_t] <= t^2 sigma^2 times
    the explicit block bound (three times the closed-form inverse bound)."""
    d = problem.dimension
    _check_dim(d)
    sigma = problem.noise_std
    rng = np.random.default_rng(seed)
    v = np.zeros((n_seeds, d))
    w = np.zeros((n_seeds, d))
    alpha, beta = steps.alpha, steps.beta
    for k in range(t):
        feats, _ = sample_chunk(problem, rng, n_seeds)
        eta = sigma * rng.standard_normal(n_seeds) if sigma > 0 \
            else np.zeros(n_seeds)
        v, w = _theta_step(v, w, feats, (k + 1) * eta, alpha, beta)

    bound = 3.0 * t * t * sigma * sigma \
        * inv_one_minus_T_tilde_noise(problem.covariance, steps) \
        .upper_bound.full
    theta = np.hstack((v, w))
    contribs = bound[None, :, :] - np.einsum("ni,nj->nij", theta, theta)
    min_eig, se = _jackknife_min_eig(contribs)
    return VarianceBoundReport(min_eig_gap=min_eig, jackknife_se=se,
                               n_seeds=n_seeds, time=t)
