"""scramlab: information retrieval from scrambled random Clifford circuits.

Stabilizer simulation with GF(2)-rank entropies, uniform Clifford sampling,
brick-wall Monte Carlo sweeps of Holevo and coherent information, and an
exact orbit-counting calculator for the steady-state curves.
"""

__version__ = "0.1.0"

from .circuits import BrickWallCircuit, apply_circuit, build_brick_wall, dump_circuit
from .globalcliff import (
    GlobalCliffordTableau,
    apply_global_clifford,
    compose,
    sample_global_clifford,
)
from .harness import (
    DynamicsResult,
    ExperimentConfig,
    ScalingResult,
    SweepResult,
    decay_rate,
    finite_size_scaling,
    run_dynamics,
    run_sweep,
)
from .metrics import SampleOutcome, SampleSpec, coherent_sample, draw_sample_spec, holevo_sample
from .orbit import (
    ExactCurve,
    OrbitTerm,
    argmax_orbit_weight,
    clifford_group_order,
    critical_exponent_estimate,
    enumerate_orbit_terms,
    exact_curve,
    expected_entropy_exact,
    holevo_exact,
    stabilizer_subgroup_order,
    thermo_limit,
    verify_kkt,
)
from .paulis import PauliString
from .stabilizer import (
    QubitSubset,
    StabilizerState,
    apply_two_qubit_gate,
    dense_density_matrix,
    gf2_rank,
    new_basis_state,
    new_mixed_encoding_state,
    new_purified_state,
    subsystem_entropy,
)
from .twoqubit import TwoQubitClifford, enumerate_two_qubit_cliffords, sample_two_qubit_clifford

__all__ = [
    "BrickWallCircuit",
    "DynamicsResult",
    "ExactCurve",
    "ExperimentConfig",
    "GlobalCliffordTableau",
    "OrbitTerm",
    "PauliString",
    "QubitSubset",
    "SampleOutcome",
    "SampleSpec",
    "ScalingResult",
    "StabilizerState",
    "SweepResult",
    "TwoQubitClifford",
    "apply_circuit",
    "apply_global_clifford",
    "apply_two_qubit_gate",
    "argmax_orbit_weight",
    "build_brick_wall",
    "clifford_group_order",
    "coherent_sample",
    "compose",
    "critical_exponent_estimate",
    "decay_rate",
    "dense_density_matrix",
    "draw_sample_spec",
    "dump_circuit",
    "enumerate_orbit_terms",
    "enumerate_two_qubit_cliffords",
    "exact_curve",
    "expected_entropy_exact",
    "finite_size_scaling",
    "gf2_rank",
    "holevo_exact",
    "holevo_sample",
    "new_basis_state",
    "new_mixed_encoding_state",
    "new_purified_state",
    "run_dynamics",
    "run_sweep",
    "sample_global_clifford",
    "sample_two_qubit_clifford",
    "stabilizer_subgroup_order",
    "subsystem_entropy",
    "thermo_limit",
    "verify_kkt",
]
