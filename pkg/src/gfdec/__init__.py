"""Gradient-flow decoding of LDPC codes.

Decoding as continuous-time dynamics: a received word defines the potential
f(x) = 0.5*||x - y||^2 + h(x), where the code potential h vanishes exactly
on the bipolar codewords, and the decoder Euler-integrates dx/dt = -grad f.
The package also ships sum-product BP and multi-bit GDBF baselines, an AWGN
channel model, a reproducible BER sweep harness, and an exporter for the
analog-circuit form of the dynamics.
"""

from .baselines import (
    BpParams,
    GdbfParams,
    bp_decode,
    bp_decode_batch,
    gdbf_decode,
    gdbf_decode_batch,
    gdbf_inversion,
    gdbf_objective,
    gdbf_step,
)
from .bench import (
    BerRecord,
    ConfigError,
    ExperimentConfig,
    emit_diagnostics,
    parse_config,
    records_to_csv,
    render_config,
    run_ber_sweep,
)
from .channel import ChannelParams, sigma_from_snr, transmit, trial_rng
from .circuit import (
    CircuitGraph,
    CircuitSimulationError,
    build_circuit_graph,
    division_gradient,
    emit_dot,
    emit_netlist,
    simulate_circuit,
)
from .codes import (
    AlistError,
    Encoder,
    ParityCheckMatrix,
    binary_to_bipolar,
    build_encoder,
    hard_decision,
    parse_alist,
    random_codeword,
    read_alist,
    syndrome,
    write_alist,
    write_alist_file,
)
from .dynamics import (
    DecodeResult,
    EulerParams,
    Trajectory,
    decode,
    decode_batch,
    decode_word,
    euler_step,
    initial_state,
)
from .potential import (
    PotentialParams,
    code_energy,
    code_energy_gradient,
    total_energy,
    total_gradient,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
