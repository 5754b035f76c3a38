"""From raw circuit quantities to a cooling forecast, step by step.

Starting from capacitances, an inductance, a gap, a gate amplitude and a
dissipative element, derive the LC resonance, both coupling channels, the
reduced rotating-frame system and the closed-form cooling outcome --
the same pipeline as the `modcool design` command.
"""
import math

from modcool import (
    CircuitParams,
    ModeParams,
    analytic,
    build_system,
    circuit_damping_rate,
    coupling_constants,
    effective_temperature,
    implied_mass,
    lc_frequency,
)
from modcool.semiclassical import circuit_cooling_rate

circuit = CircuitParams(
    c_x0=0.6e-15,        # motion-dependent coupling capacitor [F]
    c_sigma0=2.5e-15,    # total island capacitance [F]
    inductance=1.0 / (2.5e-15 * (2 * math.pi * 7.5e9) ** 2),  # -> 7.5 GHz
    d0=100e-9,           # capacitor gap [m]
    delta_x0=2.8023e-13, # zero-point spread [m]
    v_c=0.025,           # gate amplitude [V]
    resistance=1.59155e7,  # dissipative element [ohm] -> 4 MHz linewidth
    t0=0.020,            # bath temperature [K]
)
beam = ModeParams(frequency=20e6, damping=2e3)

f_b = lc_frequency(circuit)
couplings = coupling_constants(circuit)
print("circuit")
print(f"  LC resonance            {f_b:.4e} Hz")
print(f"  linewidth 1/(2piRC)     {circuit_damping_rate(circuit):.4e} Hz")
print(f"  photon-number coupling  {couplings.g_r:.4e} Hz")
print(f"  bilinear coupling       {couplings.g_l:.4e} Hz")
print(f"  ratio g_l/g_r           {couplings.g_l / couplings.g_r:.1f}"
      "   (the gate makes the bilinear channel dominate)")
print(f"  implied beam mass       {implied_mass(beam.frequency, circuit.delta_x0):.3e} kg")
print()

# Drive the modulation one beam frequency below the LC resonance.
spec = build_system(circuit, beam, f_b - beam.frequency)
print("reduced system (first red sideband)")
print(f"  delta = {spec.delta:.4e} Hz, g = {spec.g:.4e} Hz, "
      f"kappa0 = {spec.kappa0:.4e} Hz")
print(f"  bath occupations n_a0 = {spec.n_a0:.2f}, n_b0 = {spec.n_b0:.2e}")
print()

print("forecast")
print(f"  cooling rate            {analytic.cooling_rate(spec):.4e} Hz")
print(f"  semiclassical rate      "
      f"{circuit_cooling_rate(spec.g, f_b, spec.kappa0, f_b - beam.frequency, beam.frequency):.4e} Hz")
print(f"  backaction floor        {analytic.backaction_floor(spec):.2e}")
print(f"  stationary occupation   {analytic.final_occupation(spec):.4f}")
print(f"  effective reservoir     "
      f"{effective_temperature(spec, circuit.t0, f_b) * 1e6:.1f} uK")
