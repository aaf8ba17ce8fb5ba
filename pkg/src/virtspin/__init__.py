"""Two virtual qubits on a single spin-3/2: gates, pulse compilation, simulation."""
from .catalog import BoolFn2, GateId, gate, gate_id
from .compiler import compile, compile_gate, cost, rewrite_delta_m, verify
from .density import DensityMatrix, prepare_pseudo_pure, thermal_state
from .dj import DjMode, StateModel, run_dj
from .program import parse, serialize
from .pulses import Angle, Delay, Gradient, PulseSequence, PulseSpec, X, Y, operator_product, propagator, sequence_operator
from .su4 import global_phase, phase_distance
from .system import SystemSpec

__version__ = "0.1.0"
