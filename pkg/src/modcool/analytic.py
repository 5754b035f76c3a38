"""Closed-form cooling theory for the modulated bilinear coupling.

Every function takes the reduced :class:`~modcool.model.SystemSpec` and
returns ordinary frequencies (Hz) or occupation numbers.  All expressions are
homogeneous in frequency, so rates in Hz produce rates in Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import SystemSpec

# Relative tolerance for deciding that the drive sits on the first red
# sideband (delta = -omega_a), where the resonant specialisations apply.
_SIDEBAND_RTOL = 1e-9


def _require_on_sideband(spec: SystemSpec, who: str) -> None:
    if not math.isclose(spec.delta, -spec.omega_a, rel_tol=_SIDEBAND_RTOL):
        raise ValueError(
            f"{who} applies only on the first red sideband "
            f"(delta = -omega_a); got delta = {spec.delta:.6g} Hz with "
            f"omega_a = {spec.omega_a:.6g} Hz")


def cooling_rate(spec: SystemSpec) -> float:
    """Backaction cooling rate of the mechanical mode, in Hz.

    Gamma_c = 4 g^2 kappa0 |delta| omega_a /
              [ (delta^2 - omega_a^2 + kappa0^2/4)^2 + omega_a^2 kappa0^2 ]

    Valid in the weak-coupling regime; finite for every admissible spec and
    zero both for g = 0 and at zero detuning.
    """
    if spec.kappa0 <= 0:
        raise ValueError("cooling_rate requires kappa0 > 0")
    num = 4.0 * spec.g ** 2 * spec.kappa0 * abs(spec.delta) * spec.omega_a
    den = ((spec.delta ** 2 - spec.omega_a ** 2 + spec.kappa0 ** 2 / 4.0) ** 2
           + spec.omega_a ** 2 * spec.kappa0 ** 2)
    return num / den


def resonant_cooling_rate(spec: SystemSpec) -> float:
    """Cooling rate on the first red sideband: 4 g^2 / kappa0 / (1 + kappa0^2/16 omega_a^2).

    This is the on-sideband specialisation of :func:`cooling_rate`; calling
    it off the sideband raises.
    """
    if spec.kappa0 <= 0:
        raise ValueError("resonant_cooling_rate requires kappa0 > 0")
    _require_on_sideband(spec, "resonant_cooling_rate")
    return (4.0 * spec.g ** 2 / spec.kappa0
            / (1.0 + spec.kappa0 ** 2 / (16.0 * spec.omega_a ** 2)))


def backaction_floor(spec: SystemSpec) -> float:
    """Quantum backaction occupation floor n_0 = kappa0^2 / (16 omega_a^2)."""
    return spec.kappa0 ** 2 / (16.0 * spec.omega_a ** 2)


def final_occupation(spec: SystemSpec) -> float:
    """Stationary mechanical occupation from the rate balance.

    n_f = (Gamma_c n_0 + gamma0 n_a0) / (Gamma_c + gamma0), with the cooling
    rate from :func:`cooling_rate` and the floor from
    :func:`backaction_floor`.  This exact rate-balance form remains
    well-defined when the cooling rate is comparable to the intrinsic
    linewidth; see :func:`final_occupation_weak_damping` for the expanded
    form.
    """
    rate = cooling_rate(spec)
    if rate + spec.gamma0 == 0:
        raise ValueError("no stationary occupation: both rates vanish")
    return ((rate * backaction_floor(spec) + spec.gamma0 * spec.n_a0)
            / (rate + spec.gamma0))


def final_occupation_weak_damping(spec: SystemSpec) -> float:
    """Expanded stationary occupation n_0 + (gamma0/Gamma_c)(n_a0 - n_0).

    First order in gamma0/Gamma_c; requires a nonzero cooling rate.
    """
    rate = cooling_rate(spec)
    if rate == 0:
        raise ValueError("weak-damping expansion requires a nonzero cooling rate")
    n0 = backaction_floor(spec)
    return n0 + (spec.gamma0 / rate) * (spec.n_a0 - n0)


def sideband_rates(spec: SystemSpec) -> tuple[float, float]:
    """On-sideband transition rates (A_minus, A_plus) in Hz.

    A_minus = 4 g^2 / kappa0 is the resonant quantum-exchange (cooling)
    rate; A_plus = g^2 kappa0 / (4 omega_a^2) is the off-resonant
    pair-creation (heating) rate responsible for the backaction floor via
    n_0 = A_plus / (A_minus - A_plus).
    """
    if spec.kappa0 <= 0:
        raise ValueError("sideband_rates requires kappa0 > 0")
    _require_on_sideband(spec, "sideband_rates")
    a_minus = 4.0 * spec.g ** 2 / spec.kappa0
    a_plus = spec.g ** 2 * spec.kappa0 / (4.0 * spec.omega_a ** 2)
    return a_minus, a_plus


def rwa_final_occupation(spec: SystemSpec) -> float:
    """Stationary occupation with the pair-creation coupling term dropped.

    n_f = (1 + (4 (omega_a + delta)^2 + kappa0^2) / (4 g^2)) (gamma0/kappa0) n_a0

    First order in gamma0.  Without the counter-rotating term there is no
    backaction floor, so the result is proportional to gamma0 and diverges
    as g -> 0 (no cooling channel); g = 0 therefore raises.  The expression
    is exposed for any detuning but is derived near the red sideband.
    """
    if spec.g <= 0:
        raise ValueError("rwa_final_occupation requires g > 0")
    if spec.kappa0 <= 0:
        raise ValueError("rwa_final_occupation requires kappa0 > 0")
    bracket = 1.0 + ((4.0 * (spec.omega_a + spec.delta) ** 2 + spec.kappa0 ** 2)
                     / (4.0 * spec.g ** 2))
    return bracket * (spec.gamma0 / spec.kappa0) * spec.n_a0


@dataclass(frozen=True)
class CoolingPrediction:
    """Bundle of the closed-form predictions for one spec.

    The sideband transition rates are populated only on the first red
    sideband; elsewhere they are None.
    """

    cooling_rate: float
    backaction_floor: float
    final_occupation: float
    heating_rate: float | None
    resonant_rate: float | None

    def __post_init__(self) -> None:
        if self.cooling_rate < 0 or self.backaction_floor < 0:
            raise ValueError("rates and floor must be non-negative")
        if self.final_occupation < 0:
            raise ValueError("final occupation must be non-negative")
        if self.resonant_rate is not None and self.heating_rate is not None:
            if self.resonant_rate <= self.heating_rate:
                raise ValueError(
                    "resonant rate must exceed heating rate for a finite floor")


def predict(spec: SystemSpec) -> CoolingPrediction:
    """Evaluate all closed-form quantities for one spec."""
    on_sideband = math.isclose(spec.delta, -spec.omega_a,
                               rel_tol=_SIDEBAND_RTOL)
    if on_sideband and spec.g > 0:
        a_minus, a_plus = sideband_rates(spec)
    else:
        a_minus = a_plus = None
    return CoolingPrediction(
        cooling_rate=cooling_rate(spec),
        backaction_floor=backaction_floor(spec),
        final_occupation=final_occupation(spec),
        heating_rate=a_plus,
        resonant_rate=a_minus,
    )
