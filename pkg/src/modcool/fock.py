"""Brute-force master-equation oracle on a truncated two-mode Fock space.

The rotating-frame Hamiltonian with the bilinear coupling (optionally with
its pair-creation part dropped) and local thermal dissipators is assembled
as a sparse Liouvillian acting on column-stacked density matrices.  The
module exists to verify the Gaussian solver and the closed-form results by a
completely independent route, so it favours explicit construction over
cleverness.

Frequencies in the :class:`~modcool.model.SystemSpec` are ordinary (Hz) and
are converted to angular units here; evolution times are seconds.  Stationary
states are invariant under that overall scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.sparse.linalg import eigs, expm_multiply, spsolve

from .model import SystemSpec

TWO_PI = 2.0 * math.pi

# Contract tolerances for returned density matrices.
TRACE_TOL = 1e-10
HERMITICITY_TOL = 1e-10
POSITIVITY_TOL = 1e-8
TRACE_DRIFT_TOL = 1e-8

# Hilbert-space size up to which the stationary state is obtained from the
# sparse null space directly; larger systems fall back to long-time
# propagation.
_DIRECT_DIM_LIMIT = 256


class TruncationError(RuntimeError):
    """Fock truncation too small: the highest level carries real population."""


class DegenerateSteadyStateError(RuntimeError):
    """The Liouvillian has a (near-)degenerate stationary subspace."""


@dataclass(frozen=True)
class OracleConfig:
    """Truncation sizes and model switches for the oracle.

    ``include_counter_rotating`` keeps the full bilinear coupling
    g (a + a^dag)(b + b^dag); switching it off retains only the excitation-
    exchange part g (a^dag b + a b^dag).  ``tail_threshold`` bounds the
    population allowed in the highest Fock level of either mode before a
    result is rejected.
    """

    dims: tuple[int, int]
    include_counter_rotating: bool = True
    tail_threshold: float = 1e-6

    def __post_init__(self) -> None:
        n_a, n_b = self.dims
        if n_a < 2 or n_b < 2:
            raise ValueError(f"truncation dims must be >= 2, got {self.dims}")
        if not 0.0 < self.tail_threshold < 1.0:
            raise ValueError("tail_threshold must lie in (0, 1)")


@dataclass(frozen=True)
class DensityState:
    """Density matrix on the truncated two-mode space, index (n_a * N_b + n_b)."""

    dims: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        n = self.dims[0] * self.dims[1]
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.shape != (n, n):
            raise ValueError(f"matrix shape {matrix.shape} != {(n, n)}")
        herm = np.max(np.abs(matrix - matrix.conj().T))
        if herm > HERMITICITY_TOL:
            raise ValueError(f"matrix deviates from Hermitian by {herm:.3e}")
        trace = matrix.trace().real
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {trace} deviates from 1 beyond {TRACE_TOL}")
        object.__setattr__(self, "matrix", matrix)

    def eigenvalue_floor(self) -> float:
        """Smallest eigenvalue; >= -1e-8 for an acceptable state."""
        return float(np.linalg.eigvalsh(self.matrix)[0])


@dataclass(frozen=True)
class TailReport:
    """Populations of the highest retained Fock level of each mode."""

    tail_a: float
    tail_b: float
    threshold: float
    ok: bool


@dataclass(frozen=True)
class FockGenerator:
    """Sparse Liouvillian of one spec/config pair (angular units, 1/s)."""

    spec: SystemSpec
    config: OracleConfig
    matrix: sp.csr_matrix


@dataclass(frozen=True)
class FockTrajectory:
    """Time series of density matrices produced by :func:`evolve`."""

    times: np.ndarray
    states: tuple[DensityState, ...]
    generator: FockGenerator


def _destroy(n: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n)), 1, format="csr", dtype=complex)


def _mode_operators(dims: tuple[int, int]) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    n_a, n_b = dims
    a = sp.kron(_destroy(n_a), sp.identity(n_b, dtype=complex, format="csr"),
                format="csr")
    b = sp.kron(sp.identity(n_a, dtype=complex, format="csr"), _destroy(n_b),
                format="csr")
    return a, b


def _dissipator(c: sp.csr_matrix, identity: sp.csr_matrix) -> sp.csr_matrix:
    """Superoperator of D[c] rho = c rho c^dag - {c^dag c, rho}/2 (column stacking)."""
    cdc = (c.conj().T @ c).tocsr()
    return (sp.kron(c.conj(), c, format="csr")
            - 0.5 * sp.kron(identity, cdc, format="csr")
            - 0.5 * sp.kron(cdc.T, identity, format="csr"))


def build_generator(spec: SystemSpec, config: OracleConfig) -> FockGenerator:
    """Assemble the sparse Liouvillian for a spec on the truncated space.

    Hamiltonian (angular units): omega_a a^dag a - delta b^dag b plus the
    bilinear coupling, full or excitation-exchange-only depending on
    ``config.include_counter_rotating``.  Dissipators: local thermal damping
    of each mode at gamma0 and kappa0 with bath occupations n_a0, n_b0.
    """
    a, b = _mode_operators(config.dims)
    identity = sp.identity(config.dims[0] * config.dims[1], dtype=complex,
                           format="csr")
    omega_a = TWO_PI * spec.omega_a
    delta = TWO_PI * spec.delta
    g = TWO_PI * spec.g
    gamma0 = TWO_PI * spec.gamma0
    kappa0 = TWO_PI * spec.kappa0

    hamiltonian = omega_a * (a.conj().T @ a) - delta * (b.conj().T @ b)
    if config.include_counter_rotating:
        hamiltonian = hamiltonian + g * ((a + a.conj().T) @ (b + b.conj().T))
    else:
        hamiltonian = hamiltonian + g * (a.conj().T @ b + a @ b.conj().T)
    hamiltonian = hamiltonian.tocsr()

    liouvillian = -1j * (sp.kron(identity, hamiltonian, format="csr")
                         - sp.kron(hamiltonian.T, identity, format="csr"))
    for rate, op in (
        (gamma0 * (spec.n_a0 + 1.0), a),
        (gamma0 * spec.n_a0, a.conj().T.tocsr()),
        (kappa0 * (spec.n_b0 + 1.0), b),
        (kappa0 * spec.n_b0, b.conj().T.tocsr()),
    ):
        if rate > 0:
            liouvillian = liouvillian + rate * _dissipator(op, identity)
    return FockGenerator(spec=spec, config=config,
                         matrix=liouvillian.tocsr())


def _vec(matrix: np.ndarray) -> np.ndarray:
    return matrix.reshape(-1, order="F")


def _unvec(vector: np.ndarray, n: int) -> np.ndarray:
    return vector.reshape((n, n), order="F")


def _populations(state: DensityState) -> np.ndarray:
    n_a, n_b = state.dims
    return state.matrix.diagonal().real.reshape(n_a, n_b)


def mode_occupation(state: DensityState, mode: str) -> float:
    """Mean quantum number Tr(rho c^dag c) of one mode."""
    pops = _populations(state)
    if mode == "a":
        return float(np.arange(state.dims[0]) @ pops.sum(axis=1))
    if mode == "b":
        return float(pops.sum(axis=0) @ np.arange(state.dims[1]))
    raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")


def truncation_check(state: DensityState,
                     threshold: float = 1e-6) -> TailReport:
    """Population of the highest retained Fock level of each mode."""
    pops = _populations(state)
    tail_a = float(pops[-1, :].sum())
    tail_b = float(pops[:, -1].sum())
    return TailReport(tail_a=tail_a, tail_b=tail_b, threshold=threshold,
                      ok=bool(tail_a <= threshold and tail_b <= threshold))


def thermal_density(dims: tuple[int, int], n_a: float,
                    n_b: float) -> DensityState:
    """Product of truncated thermal states, renormalised on the kept levels."""
    if n_a < 0 or n_b < 0:
        raise ValueError("occupations must be non-negative")

    def weights(dim: int, n: float) -> np.ndarray:
        if n == 0:
            w = np.zeros(dim)
            w[0] = 1.0
            return w
        w = (n / (n + 1.0)) ** np.arange(dim)
        return w / w.sum()

    diag = np.outer(weights(dims[0], n_a), weights(dims[1], n_b)).reshape(-1)
    return DensityState(dims=dims, matrix=np.diag(diag.astype(complex)))


def _hermitize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.conj().T)


def _check_positive(state: DensityState) -> None:
    floor = state.eigenvalue_floor()
    if floor < -POSITIVITY_TOL:
        raise RuntimeError(
            f"density matrix has eigenvalue {floor:.3e} below -{POSITIVITY_TOL}")


def _residual_trace_norm(generator: FockGenerator, rho: np.ndarray) -> float:
    n = rho.shape[0]
    resid = _unvec(generator.matrix @ _vec(rho), n)
    return float(np.linalg.svd(resid, compute_uv=False).sum())


def _gap_reference(spec: SystemSpec) -> float:
    rates = [TWO_PI * r for r in (spec.gamma0, spec.kappa0) if r > 0]
    return min(rates) if rates else TWO_PI * spec.omega_a


def _check_gap(generator: FockGenerator, gap: float) -> None:
    reference = _gap_reference(generator.spec)
    if gap < 1e-7 * reference:
        raise DegenerateSteadyStateError(
            f"stationary subspace is degenerate: spectral gap {gap:.3e} 1/s "
            f"(slowest dissipation scale {reference:.3e} 1/s)")


def _steady_eigs(generator: FockGenerator) -> tuple[np.ndarray, float]:
    """Stationary state and spectral gap from one shift-inverted Arnoldi run.

    The two Liouvillian eigenvalues nearest a tiny positive shift are the
    stationary one (numerically zero) and the slowest relaxation rate; the
    eigenvector of the former is the stationary density matrix.  A fixed
    thermal starting vector keeps the run deterministic.
    """
    matrix = generator.matrix.tocsc()
    n2 = matrix.shape[0]
    n = int(math.isqrt(n2))
    shift = 1e-6 * float(np.abs(matrix.data).max())
    spec = generator.spec
    v0 = _vec(thermal_density(generator.config.dims, min(spec.n_a0, 1.0),
                              min(spec.n_b0, 1.0)).matrix)
    values, vectors = eigs(matrix, k=2, sigma=shift, which="LM", tol=1e-12,
                           v0=v0)
    order = np.argsort(np.abs(values))
    gap = float(np.abs(values[order[1]]))
    return _unvec(vectors[:, order[0]], n), gap


def _steady_direct(generator: FockGenerator) -> np.ndarray:
    """Null vector of the Liouvillian with the trace functional pinned to 1."""
    matrix = generator.matrix
    n2 = matrix.shape[0]
    n = int(math.isqrt(n2))
    trace_row = sp.csr_matrix(
        (np.ones(n), (np.zeros(n, dtype=int), np.arange(n) * (n + 1))),
        shape=(1, n2), dtype=complex)
    system = sp.vstack([trace_row, matrix[1:, :]], format="csc")
    rhs = np.zeros(n2, dtype=complex)
    rhs[0] = 1.0
    solution = spsolve(system, rhs)
    return _unvec(solution, n)


def _steady_by_propagation(generator: FockGenerator, initial: DensityState,
                           residual_tol: float,
                           max_steps: int) -> np.ndarray:
    spec = generator.spec
    rates = [TWO_PI * r for r in (spec.gamma0, spec.kappa0) if r > 0]
    if not rates:
        raise DegenerateSteadyStateError(
            "propagation cannot converge without dissipation")
    dt = 2.0 / min(rates)
    n = initial.matrix.shape[0]
    vec = _vec(initial.matrix.copy())
    step = (generator.matrix * dt).tocsc()
    for _ in range(max_steps):
        vec = expm_multiply(step, vec)
        rho = _hermitize(_unvec(vec, n))
        rho = rho / rho.trace().real
        if _residual_trace_norm(generator, rho) <= residual_tol:
            return rho
        vec = _vec(rho)
    raise RuntimeError(
        f"propagation did not reach the stationary residual within "
        f"{max_steps} steps of {dt:.3e} s")


def steady_state(generator: FockGenerator, method: str = "auto",
                 residual_tol: float = 1e-10, check_unique: bool = True,
                 initial: DensityState | None = None,
                 max_steps: int = 400) -> DensityState:
    """Stationary density matrix of the Liouvillian.

    ``method`` is ``"direct"`` (sparse null-space solve), ``"propagate"``
    (repeated exponential stepping from ``initial`` or a thermal state), or
    ``"auto"``, which picks the direct route up to a Hilbert dimension of
    256 and propagation beyond.  The returned state satisfies
    ``||L(rho)||_tr <= residual_tol`` relative to the largest Liouvillian
    entry, is renormalised to unit trace, and must pass the truncation-tail
    check of the generator's config.

    With ``check_unique`` (direct route) the spectral gap of the Liouvillian
    comes out of the same factorisation as the state and a (near-)degenerate
    stationary subspace raises :class:`DegenerateSteadyStateError`.  The
    propagation route relies on its converged contraction instead.
    """
    dims = generator.config.dims
    dim = dims[0] * dims[1]
    if method == "auto":
        method = "direct" if dim <= _DIRECT_DIM_LIMIT else "propagate"
    if method not in ("direct", "propagate"):
        raise ValueError(f"unknown method {method!r}")
    scale = float(np.abs(generator.matrix.data).max())
    tolerance = residual_tol * max(1.0, scale)
    if method == "direct":
        if check_unique:
            # One factorisation yields both the state and the spectral gap.
            rho, gap = _steady_eigs(generator)
            _check_gap(generator, gap)
        else:
            rho = _steady_direct(generator)
        rho = _hermitize(rho)
        rho = rho / rho.trace().real
        resid = _residual_trace_norm(generator, rho)
        if resid > tolerance and check_unique:
            # Arnoldi eigenvector not accurate enough; pin the trace and solve.
            rho = _hermitize(_steady_direct(generator))
            rho = rho / rho.trace().real
            resid = _residual_trace_norm(generator, rho)
        if resid > tolerance:
            raise RuntimeError(
                f"stationary residual {resid:.3e} exceeds {tolerance:.3e}")
    else:
        # Propagation exists for systems too large to factor, where the gap
        # estimate (which needs the same factorisation) is out of reach; a
        # converged contraction to the residual tolerance is the uniqueness
        # evidence on this path.
        if initial is None:
            initial = thermal_density(dims, min(generator.spec.n_a0, 1.0),
                                      min(generator.spec.n_b0, 1.0))
        rho = _steady_by_propagation(generator, initial, tolerance, max_steps)
    state = DensityState(dims=dims, matrix=rho)
    _check_positive(state)
    tails = truncation_check(state, generator.config.tail_threshold)
    if not tails.ok:
        raise TruncationError(
            f"stationary state leaks into the highest Fock levels: "
            f"tail_a = {tails.tail_a:.3e}, tail_b = {tails.tail_b:.3e} "
            f"(threshold {tails.threshold:.1e}); enlarge dims")
    return state


def evolve(generator: FockGenerator, initial: DensityState, duration: float,
           rtol: float = 1e-9, atol: float = 1e-11,
           num_points: int = 100) -> FockTrajectory:
    """Integrate the master equation for ``duration`` seconds.

    The initial state must fit the truncation (tail check against the
    generator's threshold).  Trace conservation is verified to 1e-8 over the
    whole trajectory before snapshots are renormalised; a larger drift
    raises.
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    if initial.dims != generator.config.dims:
        raise ValueError(
            f"initial dims {initial.dims} != generator dims "
            f"{generator.config.dims}")
    tails = truncation_check(initial, generator.config.tail_threshold)
    if not tails.ok:
        raise TruncationError(
            f"initial state does not fit the truncation: tail_a = "
            f"{tails.tail_a:.3e}, tail_b = {tails.tail_b:.3e}")
    matrix = generator.matrix
    n = initial.matrix.shape[0]
    times = np.linspace(0.0, duration, num_points)
    sol = solve_ivp(lambda _t, y: matrix @ y, (0.0, duration),
                    _vec(initial.matrix.astype(complex)), method="DOP853",
                    rtol=rtol, atol=atol, t_eval=times)
    if not sol.success:
        raise RuntimeError(f"master-equation integration failed: {sol.message}")
    states = []
    for k in range(num_points):
        rho = _hermitize(_unvec(sol.y[:, k], n))
        trace = rho.trace().real
        if abs(trace - 1.0) > TRACE_DRIFT_TOL:
            raise RuntimeError(
                f"trace drifted to {trace} at t = {times[k]:.3e} s "
                f"(allowed deviation {TRACE_DRIFT_TOL})")
        state = DensityState(dims=initial.dims, matrix=rho / trace)
        _check_positive(state)
        states.append(state)
    return FockTrajectory(times=times, states=tuple(states),
                          generator=generator)
