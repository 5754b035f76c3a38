"""Exact Gaussian (covariance-matrix) solver for the linear coupled dynamics.

The two-mode system is linear in the mode operators, so first and second
quadrature moments close on themselves: means follow d<r>/dt = A <r> and the
covariance follows dV/dt = A V + V A^T + D.  Quadratures are
X = (c + c^dag)/sqrt(2), P = -i(c - c^dag)/sqrt(2) with [X, P] = i and vacuum
variance 1/2, ordered as (X_a, P_a, X_b, P_b).

The :class:`~modcool.model.SystemSpec` carries ordinary frequencies in Hz;
the drift and diffusion matrices are assembled in angular units (1/s) so
trajectories are parameterised by laboratory time in seconds.  Fitted decay
rates are converted back to Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import solve_continuous_lyapunov
from scipy.optimize import curve_fit

from .model import SystemSpec

TWO_PI = 2.0 * math.pi

# Symplectic form for the quadrature ordering (X_a, P_a, X_b, P_b).
SYMPLECTIC_FORM = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])

# Tolerances of the physicality and solver contracts.
PHYSICALITY_TOL = 1e-9
LYAPUNOV_RTOL = 1e-10
_SYMMETRY_TOL = 1e-12

_MODE_SLICES = {"a": slice(0, 2), "b": slice(2, 4)}


class StabilityError(RuntimeError):
    """The drift matrix is not Hurwitz, so no stationary state exists."""


class StiffnessError(RuntimeError):
    """The adaptive integrator failed, typically from extreme rate separation."""


class FitError(RuntimeError):
    """A decay-rate fit could not be carried out on the given trajectory."""


@dataclass(frozen=True)
class DriftModel:
    """Drift and diffusion matrices (angular units, 1/s) of one spec."""

    spec: SystemSpec
    drift: np.ndarray
    diffusion: np.ndarray

    def __post_init__(self) -> None:
        drift = np.asarray(self.drift, dtype=float)
        diffusion = np.asarray(self.diffusion, dtype=float)
        if drift.shape != (4, 4) or diffusion.shape != (4, 4):
            raise ValueError("drift and diffusion must be 4x4")
        if not np.allclose(diffusion, diffusion.T, atol=0, rtol=0):
            raise ValueError("diffusion must be symmetric")
        if np.any(np.diag(diffusion) < 0):
            raise ValueError("diffusion must be positive semi-definite")
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "diffusion", diffusion)


@dataclass(frozen=True)
class CovarianceState:
    """Gaussian state: quadrature means, covariance matrix and a timestamp."""

    mean: np.ndarray
    covariance: np.ndarray
    time: float

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.covariance, dtype=float)
        if mean.shape != (4,) or cov.shape != (4, 4):
            raise ValueError("mean must be length 4 and covariance 4x4")
        asym = np.max(np.abs(cov - cov.T))
        if asym > _SYMMETRY_TOL * max(1.0, np.max(np.abs(cov))):
            raise ValueError(f"covariance asymmetric by {asym:.3e}")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)


@dataclass(frozen=True)
class StabilityReport:
    """Drift eigenvalues (1/s) with the Hurwitz verdict."""

    eigenvalues: np.ndarray
    hurwitz: bool
    margin: float            # largest real part; negative when Hurwitz
    stiffness_ratio: float   # max|eig| / min|Re eig|, inf on the imaginary axis


@dataclass(frozen=True)
class Trajectory:
    """Time series of Gaussian states produced by :func:`evolve`."""

    times: np.ndarray
    states: tuple[CovarianceState, ...]
    model: DriftModel

    def occupations(self, mode: str) -> np.ndarray:
        return np.array([occupation(s, mode) for s in self.states])


@dataclass(frozen=True)
class CoolingFit:
    """Result of an exponential decay fit of a mechanical occupation trace."""

    rate: float                  # Hz
    n_initial: float
    n_final: float
    residual: float              # rms residual over the decay amplitude
    window: tuple[float, float]  # seconds
    flagged: bool                # residual above threshold (oscillatory decay)


def build_drift(spec: SystemSpec) -> DriftModel:
    """Assemble the quadrature drift and diffusion matrices of a spec.

    The drift realises
        dX_a = omega_a P_a - gamma0/2 X_a,
        dP_a = -omega_a X_a - gamma0/2 P_a - 2 g X_b,
        dX_b = -delta P_b - kappa0/2 X_b,
        dP_b = delta X_b - 2 g X_a - kappa0/2 P_b,
    and the diffusion is diag(gamma0 (n_a0 + 1/2), ..., kappa0 (n_b0 + 1/2)),
    which anchors the uncoupled steady state at the bath occupations.  All
    entries carry the 2*pi of the Hz -> angular conversion.
    """
    omega_a = TWO_PI * spec.omega_a
    delta = TWO_PI * spec.delta
    g = TWO_PI * spec.g
    gamma0 = TWO_PI * spec.gamma0
    kappa0 = TWO_PI * spec.kappa0
    drift = np.array([
        [-gamma0 / 2.0, omega_a, 0.0, 0.0],
        [-omega_a, -gamma0 / 2.0, -2.0 * g, 0.0],
        [0.0, 0.0, -kappa0 / 2.0, -delta],
        [-2.0 * g, 0.0, delta, -kappa0 / 2.0],
    ])
    diffusion = np.diag([
        gamma0 * (spec.n_a0 + 0.5),
        gamma0 * (spec.n_a0 + 0.5),
        kappa0 * (spec.n_b0 + 0.5),
        kappa0 * (spec.n_b0 + 0.5),
    ])
    return DriftModel(spec=spec, drift=drift, diffusion=diffusion)


def stability(model: DriftModel) -> StabilityReport:
    """Eigenvalues of the drift matrix and the Hurwitz flag."""
    eigenvalues = np.linalg.eigvals(model.drift)
    margin = float(np.max(eigenvalues.real))
    min_decay = float(np.min(np.abs(eigenvalues.real)))
    max_mag = float(np.max(np.abs(eigenvalues)))
    ratio = math.inf if min_decay == 0 else max_mag / min_decay
    return StabilityReport(
        eigenvalues=eigenvalues,
        hurwitz=bool(margin < 0),
        margin=margin,
        stiffness_ratio=ratio,
    )


def physicality_margin(state: CovarianceState) -> float:
    """Smallest eigenvalue of V + i Omega / 2; >= -1e-9 for a physical state."""
    m = state.covariance + 0.5j * SYMPLECTIC_FORM
    return float(np.linalg.eigvalsh(m)[0])


def thermal_state(n_a: float, n_b: float, time: float = 0.0) -> CovarianceState:
    """Product of thermal states with the given occupations (zero means)."""
    if n_a < 0 or n_b < 0:
        raise ValueError("occupations must be non-negative")
    cov = np.diag([n_a + 0.5, n_a + 0.5, n_b + 0.5, n_b + 0.5])
    return CovarianceState(mean=np.zeros(4), covariance=cov, time=time)


def occupation(state: CovarianceState, mode: str) -> float:
    """Mean quantum number <c^dag c> of one mode of a Gaussian state."""
    if mode not in _MODE_SLICES:
        raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")
    margin = physicality_margin(state)
    if margin < -PHYSICALITY_TOL:
        raise ValueError(
            f"covariance violates the uncertainty bound by {margin:.3e}")
    sl = _MODE_SLICES[mode]
    block = state.covariance[sl, sl]
    mean = state.mean[sl]
    return 0.5 * (block[0, 0] + block[1, 1] + mean[0] ** 2 + mean[1] ** 2 - 1.0)


def steady_state(model: DriftModel) -> CovarianceState:
    """Stationary Gaussian state solving A V + V A^T + D = 0.

    Raises :class:`StabilityError` when the drift is not Hurwitz.  The
    returned covariance satisfies the Lyapunov equation to within
    1e-10 * ||D||_F and the physicality bound V + i Omega/2 >= 0.
    """
    report = stability(model)
    if not report.hurwitz:
        worst = report.eigenvalues[np.argmax(report.eigenvalues.real)]
        raise StabilityError(
            f"drift is not Hurwitz: eigenvalue {worst:.6g} has "
            f"non-negative real part")
    a, d = model.drift, model.diffusion
    v = solve_continuous_lyapunov(a, -d)
    v = 0.5 * (v + v.T)
    d_scale = np.linalg.norm(d)
    # One refinement pass keeps the residual contract comfortable even for
    # badly scale-separated rates.
    for _ in range(2):
        residual = a @ v + v @ a.T + d
        if np.linalg.norm(residual) <= LYAPUNOV_RTOL * d_scale:
            break
        correction = solve_continuous_lyapunov(a, -residual)
        v = 0.5 * ((v + correction) + (v + correction).T)
    else:
        residual = a @ v + v @ a.T + d
        if np.linalg.norm(residual) > LYAPUNOV_RTOL * d_scale:
            raise RuntimeError(
                f"Lyapunov residual {np.linalg.norm(residual):.3e} exceeds "
                f"{LYAPUNOV_RTOL:.1e} * ||D||")
    state = CovarianceState(mean=np.zeros(4), covariance=v, time=math.inf)
    margin = physicality_margin(state)
    if margin < -PHYSICALITY_TOL:
        raise RuntimeError(
            f"stationary covariance violates physicality by {margin:.3e}")
    return state


def evolve(model: DriftModel, initial: CovarianceState, duration: float,
           rtol: float = 1e-9, atol: float = 1e-12, num_points: int = 400,
           method: str = "DOP853") -> Trajectory:
    """Integrate means and covariance over ``duration`` seconds.

    Adaptive local error control at the supplied tolerances; integration
    failure (step-size collapse) raises :class:`StiffnessError` carrying the
    drift stiffness ratio.  Returns ``num_points`` evenly spaced snapshots
    starting at t = 0.
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    if num_points < 2:
        raise ValueError("num_points must be at least 2")
    a, d = model.drift, model.diffusion

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        mean = y[:4]
        v = y[4:].reshape(4, 4)
        dv = a @ v + v @ a.T + d
        return np.concatenate([a @ mean, dv.ravel()])

    y0 = np.concatenate([initial.mean, initial.covariance.ravel()])
    times = np.linspace(0.0, duration, num_points)
    sol = solve_ivp(rhs, (0.0, duration), y0, method=method, rtol=rtol,
                    atol=atol, t_eval=times)
    if not sol.success:
        ratio = stability(model).stiffness_ratio
        raise StiffnessError(
            f"integration failed ({sol.message}); drift stiffness ratio "
            f"max|eig|/min|Re eig| = {ratio:.3e}")
    states = []
    for k, t in enumerate(times):
        mean = sol.y[:4, k]
        v = sol.y[4:, k].reshape(4, 4)
        v = 0.5 * (v + v.T)
        states.append(CovarianceState(mean=mean, covariance=v, time=float(t)))
    return Trajectory(times=times, states=tuple(states), model=model)


def fit_cooling_rate(trajectory: Trajectory, mode: str = "a",
                     transient: float | None = None,
                     residual_threshold: float = 0.05,
                     min_decay: float = 10.0) -> CoolingFit:
    """Fit n(t) = n_f + (n_i - n_f) exp(-Gamma t) to an occupation trace.

    The first ``transient`` seconds are discarded before fitting; the
    default is three circuit lifetimes, 3/(2 pi kappa0), so the fast cavity
    settling does not contaminate the mechanical envelope.  The excess
    occupation must decay by at least ``min_decay`` over the fit window,
    otherwise :class:`FitError` is raised.  A fit whose rms residual exceeds
    ``residual_threshold`` of the decay amplitude is returned with
    ``flagged`` set -- the signature of oscillatory strong-coupling decay
    that a single exponential cannot represent.

    Returns the decay rate as an ordinary frequency (Hz).
    """
    times = trajectory.times
    values = trajectory.occupations(mode)
    if transient is None:
        kappa0 = trajectory.model.spec.kappa0
        transient = 3.0 / (TWO_PI * kappa0) if kappa0 > 0 else 0.0
    mask = times >= times[0] + transient
    if np.count_nonzero(mask) < 8:
        raise ValueError("fewer than 8 samples remain after the transient cut")
    t = times[mask] - times[mask][0]
    n = values[mask]
    if not np.all(np.isfinite(n)):
        raise FitError("occupation trace contains non-finite values")
    if n[0] <= n[-1]:
        raise FitError(
            f"trajectory does not decay: n(t0) = {n[0]:.6g} <= "
            f"n(t1) = {n[-1]:.6g}")

    n_f0 = float(n[-1])
    amp0 = float(n[0] - n_f0)
    below = np.nonzero(n - n_f0 <= amp0 / math.e)[0]
    rate0 = 1.0 / t[below[0]] if below.size and t[below[0]] > 0 else 3.0 / t[-1]

    def decay(tt, n_f, amp, rate):
        return n_f + amp * np.exp(-rate * tt)

    try:
        params, _ = curve_fit(decay, t, n, p0=[n_f0, amp0, rate0],
                              bounds=([0.0, 0.0, 0.0], [np.inf] * 3),
                              maxfev=20000)
    except (RuntimeError, ValueError) as exc:
        raise FitError(f"exponential fit did not converge: {exc}") from exc
    n_f, amp, rate = map(float, params)
    residual = float(np.sqrt(np.mean((n - decay(t, *params)) ** 2))
                     / max(amp, 1e-300))
    tail = n[-1] - n_f
    factor = math.inf if tail <= 0 else (n[0] - n_f) / tail
    if factor < min_decay:
        raise FitError(
            f"excess occupation decays by factor {factor:.3g} < {min_decay} "
            f"over the fit window; extend the trajectory")
    return CoolingFit(
        rate=rate / TWO_PI,
        n_initial=float(n[0]),
        n_final=n_f,
        residual=residual,
        window=(float(times[mask][0]), float(times[-1])),
        flagged=bool(residual > residual_threshold),
    )
