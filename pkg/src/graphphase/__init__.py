"""Phase analysis of signals on directed graphs.

Perturb a directed graph until its adjacency is diagonalizable and
invertible, then compute the graph Fourier and Hilbert transforms, the
analytic signal with its instantaneous amplitude, phase and frequency, and
the graph's cycle-cover structure.
"""

__version__ = "0.1.0"

from .cycles import AcyclicityIndex, CycleCover, acyclicity_index, extract_cycle_cover, has_cycle_cover
from .errors import (
    DefectiveError,
    GraphPhaseError,
    InvalidArgumentError,
    NumericalError,
    ParseError,
    PerturbationError,
    PreconditionError,
)
from .graphs import (
    DiGraph,
    GraphSignal,
    GridSpec,
    RosaceSpec,
    gen_cycle,
    gen_grid,
    gen_path,
    gen_rosace,
    load_edge_list,
    load_signal,
    rosace_truth,
    save_edge_list,
    save_signal,
    signal_planar_wave,
    signal_rosace,
)
from .hilbert import (
    AnalyticGraphSignal,
    GhtOperator,
    amplitude,
    analytic,
    build_ght,
    classical_hilbert_dft,
    ght,
    instantaneous_frequency,
    phase,
    verify_overlap_identities,
)
from .perturb import DefectiveCluster, PerturbationResult, candidate_edge, find_worst_cluster, perturb
from .spectral import (
    DEFAULT_TOLERANCES,
    ConjugatePair,
    Real,
    SpectralDecomposition,
    SpectralDiagnostics,
    ToleranceSet,
    decompose,
    diagnostics,
    gft,
    igft,
)
