"""homsim: time-resolved two-photon interference at a 50:50 beam splitter.

Computes joint and conditional photon-detection densities for arbitrary
single-photon wavepackets, exact closed forms for Gaussian pulse pairs
(quantum beats, inhomogeneous broadening, temporal filtering), and
seeded Monte Carlo detector click streams with coincidence analysis.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import (
    AliasingRisk,
    DegenerateWidth,
    EmptyRange,
    GridMismatch,
    GridTooNarrow,
    HomsimError,
    LengthMismatch,
    NotNormalizable,
    QuadratureNotConverged,
    TooFewEvents,
    ZeroDensityInstant,
)
from .wavepacket import (
    DEFAULT_GRID,
    GaussianMode,
    ModeFunction,
    SampledMode,
    SpectralAmplitude,
    TimeGrid,
    detection_density,
    from_spectrum,
    make_gaussian_mode,
    make_sampled_mode,
    overlap,
    read_mode_csv,
    sample_mode,
    to_spectrum,
    write_mode_csv,
)
from .interference import (
    ConditionalState,
    PortPair,
    PortPairProbabilities,
    conditional_density,
    conditional_state,
    dephased_joint_density,
    first_detection_density,
    joint_density,
    joint_density_spectral,
    port_pair_probabilities,
    same_port_density,
    write_density_csv,
)
from .gaussian import (
    PhotonPairConfig,
    freq_distribution,
    gaussian_pair,
    p_2hnu,
    p_2hnu_averaged,
    p_2hnu_dephased,
    p_inh,
    p_joint_gaussian,
    p_same_port_gaussian,
    p_total,
)
from .ensemble import (
    Curve,
    averaged_coincidence_curve,
    coincidence_curve,
    filtered_coincidence,
    gaussian_delta_family,
    gaussian_pair_family,
    plane_coincidence_probability,
    total_coincidence_vs_delay,
)
from .montecarlo import (
    CoincidenceHistogram,
    DetectionPair,
    EventLog,
    TotalCoincidenceEstimate,
    coincidence_histogram,
    estimate_total_coincidence,
    load_event_log,
    run_experiment,
    sample_pair,
    save_event_log,
)
