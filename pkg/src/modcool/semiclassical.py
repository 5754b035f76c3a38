"""Semiclassical circuit theory of the dynamical backaction force.

The gate drive at frequency f_d mixes with the beam motion at f_a and drives
the island at the sidebands f_d +/- f_a.  The resulting voltage reacts back
on the beam through the capacitor force; expanding that force to first order
in the displacement yields a spring-constant shift and a friction term whose
rate is the semiclassical cooling rate.  The model carries no quantum noise,
so it predicts a zero occupation floor: its stationary occupation
gamma0 n_a0 / (gamma0 + Gamma_c) goes to zero as the cooling rate grows.

Phasor convention: the drive is the real voltage 2 v_c sin(2 pi f_d t),
i.e. each rotating component has amplitude v_c, and products of real fields
are averaged over the fast drive period keeping the terms at the mechanical
frequency.  With that convention the friction reproduces the closed-form
rate of :func:`circuit_cooling_rate` up to the small lower-sideband
correction, and equals 4 g_l^2 / kappa0 on the first red sideband.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.constants import epsilon_0

from .model import (
    CircuitParams,
    circuit_damping_rate,
    coupling_constants,
    implied_mass,
    lc_frequency,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SemiclassicalParams:
    """Inputs of the circuit-theory backaction model.

    The mass defaults to the value implied by the circuit's zero-point
    spread at the mechanical frequency.  When the plate area, gap and
    coupling capacitance are all supplied they should be mutually
    consistent (eps0 * area / d0 close to c_x0); a mismatch above 20%
    warns but does not fail, since the area only scales the force.
    """

    circuit: CircuitParams
    plate_area: float
    drive_frequency: float
    mech_frequency: float
    mass: float | None = None
    vacuum_permittivity: float = epsilon_0

    def __post_init__(self) -> None:
        if self.plate_area <= 0:
            raise ValueError(f"plate_area must be positive, got {self.plate_area}")
        if self.drive_frequency <= 0 or self.mech_frequency <= 0:
            raise ValueError("drive and mechanical frequencies must be positive")
        if self.mass is not None and self.mass <= 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.vacuum_permittivity <= 0:
            raise ValueError("vacuum_permittivity must be positive")
        geometric = (self.vacuum_permittivity * self.plate_area
                     / self.circuit.d0)
        if abs(geometric - self.circuit.c_x0) > 0.2 * self.circuit.c_x0:
            warnings.warn(
                f"eps0*S0/d0 = {geometric:.3e} F differs from c_x0 = "
                f"{self.circuit.c_x0:.3e} F by more than 20%", stacklevel=2)

    @property
    def effective_mass(self) -> float:
        if self.mass is not None:
            return self.mass
        return implied_mass(self.mech_frequency, self.circuit.delta_x0)


@dataclass(frozen=True)
class BackactionCoefficients:
    """First-order expansion of the backaction force F ~ lambda x - m Gamma_c dx/dt.

    ``spring_shift`` (N/m) softens the beam, ``friction_rate`` (Hz) is
    positive for net cooling, and ``island_voltage_gain`` is the
    dimensionless upper-sideband transfer v_b / (v_c x / d0).
    """

    spring_shift: float
    friction_rate: float
    island_voltage_gain: complex

    def __post_init__(self) -> None:
        if not math.isfinite(self.spring_shift):
            raise ValueError("spring_shift must be finite")
        if not math.isfinite(self.friction_rate):
            raise ValueError("friction_rate must be finite")


def _island_pole(circuit: CircuitParams, omega: float) -> complex:
    """Denominator omega_b^2 - omega^2 + i kappa0 omega (angular units)."""
    omega_b = TWO_PI * lc_frequency(circuit)
    kappa0 = 1.0 / (circuit.resistance * circuit.c_sigma0)
    return omega_b ** 2 - omega ** 2 + 1j * kappa0 * omega


def island_voltage(params: SemiclassicalParams,
                   x_amplitude: float) -> complex:
    """Upper-sideband island voltage phasor driven by the beam motion.

    v_b = -(w_d + w_a)^2 C_x0 x v_c / [C_sigma0 d0 (w_b^2 - (w_d+w_a)^2
          + i kappa0 (w_d + w_a))]   (all frequencies angular internally).

    At the pole w_d + w_a = w_b the magnitude is
    w_b C_x0 |x| v_c / (C_sigma0 d0 kappa0) and the phasor sits in
    quadrature with the motion (ratio to x purely imaginary).
    """
    circuit = params.circuit
    omega = TWO_PI * (params.drive_frequency + params.mech_frequency)
    pole = _island_pole(circuit, omega)
    if pole == 0:
        raise ZeroDivisionError(
            "island response diverges: undamped circuit driven exactly on "
            "resonance")
    return (-(omega ** 2) * circuit.c_x0 * x_amplitude * circuit.v_c
            / (circuit.c_sigma0 * circuit.d0 * pole))


def _sideband_response(circuit: CircuitParams, omega: float) -> complex:
    """Dimensionless island transfer at angular frequency omega.

    Sign as derived from the island Hamiltonian (equation of motion
    v_b'' + kappa0 v_b' + w_b^2 v_b = -(C_x0/C_sigma0 d0) (v_c x)''),
    which is the sign that makes red-detuned driving produce friction.
    The transfer reported by :func:`island_voltage` carries the opposite
    overall sign convention for v_b; magnitudes agree.
    """
    return (omega ** 2) * circuit.c_x0 / (circuit.c_sigma0
                                          * _island_pole(circuit, omega))


def backaction_coefficients(params: SemiclassicalParams) -> BackactionCoefficients:
    """Expand the capacitor force to first order in the beam displacement.

    The force -eps0 S0 (V_c - V_b)^2 / (2 (d0 + x)^2) is averaged over the
    fast drive period keeping the components at the mechanical frequency.
    Both mixing sidebands f_d +/- f_a are retained: the upper one cools and
    the lower one heats, so the net friction changes sign between red- and
    blue-detuned driving.  The constant (x-independent) pull is discarded.
    """
    circuit = params.circuit
    omega_plus = TWO_PI * (params.drive_frequency + params.mech_frequency)
    omega_minus = TWO_PI * (params.drive_frequency - params.mech_frequency)
    resp_plus = _sideband_response(circuit, omega_plus)
    resp_minus = _sideband_response(circuit, omega_minus)
    prefactor = (params.vacuum_permittivity * params.plate_area
                 * circuit.v_c ** 2 / circuit.d0 ** 3)
    spring_shift = prefactor * (2.0 + (resp_plus + resp_minus).real)
    omega_a = TWO_PI * params.mech_frequency
    friction_angular = (-prefactor * (resp_plus - resp_minus).imag
                        / (params.effective_mass * omega_a))
    gain = (-(omega_plus ** 2) * circuit.c_x0
            / (circuit.c_sigma0 * _island_pole(circuit, omega_plus)))
    return BackactionCoefficients(
        spring_shift=spring_shift,
        friction_rate=friction_angular / TWO_PI,
        island_voltage_gain=gain,
    )


def circuit_cooling_rate(g_l: float, f_b: float, kappa0: float, f_d: float,
                         f_a: float) -> float:
    """Closed-form semiclassical cooling rate, in Hz.

    Gamma_c = 4 g_l^2 (f_d + f_a)^3 kappa0 / f_b /
              [ ((f_d + f_a)^2 - f_b^2)^2 + (f_d + f_a)^2 kappa0^2 ]

    Homogeneous of degree one in frequency, so ordinary frequencies in give
    an ordinary frequency out.  Reduces to 4 g_l^2 / kappa0 exactly at
    f_d + f_a = f_b (drive on the first red sideband).
    """
    if kappa0 <= 0:
        raise ValueError("circuit_cooling_rate requires kappa0 > 0")
    if f_b <= 0:
        raise ValueError("f_b must be positive")
    f_up = f_d + f_a
    num = 4.0 * g_l ** 2 * f_up ** 3 * kappa0 / f_b
    den = (f_up ** 2 - f_b ** 2) ** 2 + f_up ** 2 * kappa0 ** 2
    return num / den


def semiclassical_cooling_rate(params: SemiclassicalParams) -> float:
    """Closed-form cooling rate evaluated from the circuit parameters."""
    return circuit_cooling_rate(
        g_l=coupling_constants(params.circuit).g_l,
        f_b=lc_frequency(params.circuit),
        kappa0=circuit_damping_rate(params.circuit),
        f_d=params.drive_frequency,
        f_a=params.mech_frequency,
    )
