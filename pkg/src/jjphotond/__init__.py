"""Simulator for a microwave photon detector built on a current-biased
Josephson junction coupled to a cavity.

The junction is truncated to its two lowest levels and coupled to a
single cavity mode; the open-system density matrix evolves under a
master equation with cavity decay, junction relaxation, and a
trace-decreasing tunneling term that models escape to the voltage state.
Detector figures of merit (switching probability, dark counts, quantum
efficiency, optimal detection time, bandwidth) derive from the trace
loss.
"""

__version__ = "0.1.0"

from .errors import (
    BandwidthRangeError,
    ConfigError,
    IntegrationFailureError,
    StiffnessError,
)
from .liouville import (
    HilbertSpace,
    Liouvillian,
    assemble,
    build_damping_dissipators,
    build_hamiltonian,
    build_space,
    build_tunneling,
    pure_state,
)
from .metrics import (
    BandwidthResult,
    EfficiencyCurve,
    OptimalPoint,
    SweepResult,
    bandwidth,
    efficiency_curve,
    optimal_detection,
    plateau_estimate,
    sweep,
    switching_probability,
    with_parameter,
)
from .params import (
    PhysicalConstants,
    SimParams,
    TimeGrid,
    Tolerances,
    baseline_config,
    load_config,
    seconds_rate_to_internal,
    to_external,
    validate,
)
from .propagation import Trajectory, backend, evolve, evolve_at, exact_state
from .wkb import (
    JunctionBias,
    JunctionDerived,
    barrier_height,
    derive,
    plasma_frequency,
    rate_ratio,
    rates_anchored,
    transition_frequency,
    tunneling_rate,
)

__all__ = [
    "__version__",
    "BandwidthRangeError", "ConfigError", "IntegrationFailureError", "StiffnessError",
    "HilbertSpace", "Liouvillian", "assemble", "build_damping_dissipators",
    "build_hamiltonian", "build_space", "build_tunneling", "pure_state",
    "BandwidthResult", "EfficiencyCurve", "OptimalPoint", "SweepResult",
    "bandwidth", "efficiency_curve", "optimal_detection", "plateau_estimate",
    "sweep", "switching_probability", "with_parameter",
    "PhysicalConstants", "SimParams", "TimeGrid", "Tolerances",
    "baseline_config", "load_config", "seconds_rate_to_internal",
    "to_external", "validate",
    "Trajectory", "backend", "evolve", "evolve_at", "exact_state",
    "JunctionBias", "JunctionDerived", "barrier_height", "derive",
    "plasma_frequency", "rate_ratio", "rates_anchored",
    "transition_frequency", "tunneling_rate",
]
