"""Toolkit for intensity-modulated direct-detection modulation format design.

Constructs minimum-distance-optimal constellations in the nonnegativity cone
of a two-dimensional signal space, evaluates their optical power metrics,
spectra, fractional power bandwidths and gains over OOK, and verifies error
rates by Monte Carlo simulation.
"""

__version__ = "0.1.0"

from .core import (
    BasisConfig,
    BasisKind,
    Constellation,
    average_optical_coeff,
    canonicalize,
    is_admissible,
    load_constellation,
    mean_squared_norm,
    min_distance,
    normalize_unit_dmin,
    peak_optical_coeff,
    save_constellation,
    synthesize_waveform,
)
from .baselines import BaselineKind, make_baseline, ook, pam, qpsk_scm
from .metrics import (
    GainReport,
    avg_power_gain_db,
    energy_per_bit,
    gain_report,
    nearest_neighbor_ser,
    peak_power_gain_db,
    predicted_ser,
    qfunc,
)
from .optimizer import (
    DesignProblem,
    Objective,
    SolveReport,
    SolverSettings,
    is_cone_lattice_subset,
    objective_value,
    solve,
)
from .registry import format_names, get_format
from .simulator import (
    ChannelConfig,
    SimReport,
    binary_reflected_labels,
    detect,
    run_vector,
    run_waveform,
    two_proportion_z,
)
from .spectral import (
    BandwidthQuery,
    SpectrumProfile,
    basis_transform,
    build_spectrum,
    fractional_bandwidth,
    signal_transform,
    spectral_efficiency,
    total_power,
)

__all__ = [name for name in dir() if not name.startswith("_")]
