import pytest

from modcool import CircuitParams, SystemSpec

# Cooling benchmark of the detuning-sweep figures: 20 MHz beam driven on the
# first red sideband of a 4 MHz-linewidth circuit.
BENCHMARK = SystemSpec(omega_a=20e6, delta=-20e6, g=2e6, gamma0=2e3,
                       kappa0=4e6, n_a0=20.0, n_b0=0.0)

# Same physics in units of the mechanical frequency with a one-quantum bath,
# small enough for Fock-space solvers.
SCALED = SystemSpec(omega_a=1.0, delta=-1.0, g=0.02, gamma0=1e-3, kappa0=0.2,
                    n_a0=1.0, n_b0=0.0)


def benchmark_circuit(v_c: float = 0.025) -> CircuitParams:
    """Hardware realisation of the benchmark: 7.5 GHz LC circuit, 16 Mohm
    dissipation (4 MHz linewidth), gate drive tuned for a 2 MHz coupling."""
    return CircuitParams(
        c_x0=0.6e-15,
        c_sigma0=2.5e-15,
        inductance=1.0 / (2.5e-15 * (2.0 * 3.141592653589793 * 7.5e9) ** 2),
        d0=100e-9,
        delta_x0=2.8023e-13,
        v_c=v_c,
        resistance=1.59155e7,
        t0=0.020,
    )


@pytest.fixture
def benchmark() -> SystemSpec:
    return BENCHMARK


@pytest.fixture
def scaled() -> SystemSpec:
    return SCALED
