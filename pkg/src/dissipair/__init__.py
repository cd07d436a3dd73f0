"""Simulator for quadratic bosonic lattices with a dissipative pairing
jump operator L = sqrt(kappa) (a_{site0} + eta a_{site1}^dag).

Computes dynamical stability boundaries, exceptional points, pure Gaussian
steady states, topological edge-mode populations, entanglement structure,
and output-field squeezing spectra.
"""

__version__ = "0.1.0"

from .core import (
    BdgMatrix,
    CovarianceState,
    JumpOperator,
    QuadraticSystem,
    build_diffusion,
    build_drift,
    canonical_pairing,
    local_loss_frame,
    symplectic_eigenvalues,
    to_quadrature_basis,
    uncorrelated_pair,
)
from .errors import (
    ChiralSymmetryError,
    ConfigError,
    DissipairError,
    NonUniqueError,
    UnstableError,
)
from .lattices import (
    EigenmodeSet,
    LatticeGeometry,
    build_hofstadter,
    build_ssh,
    build_three_mode,
    check_chiral,
    cylinder_bands,
    eigenpairs,
)
from .stability import (
    ExceptionalPoint,
    SpectrumReport,
    StabilityBoundary,
    closed_form_thresholds,
    ep_scan,
    eta_critical_spectral,
    eta_critical_wavefunction,
    fgr_rates,
    spectrum,
)
from .steady import (
    ObservableSet,
    SqueezeParameters,
    bogoliubov_steady_state,
    dissipative_gap_vs_size,
    lyapunov_steady_state,
    mirrored_dissipator,
    observables,
    squeezed_noise_comparator,
)
from .entanglement import (
    Bipartition,
    DisorderSweepResult,
    angled_bipartitions,
    disorder_sweep,
    edge_localization,
    entanglement_entropy,
    line_cut,
    mutual_information,
    spiral_order,
    volume_law_fit,
)
from .spectrum_io import (
    IoSetup,
    SqueezeSpectrumResult,
    build_io_system,
    eta_opt_search,
    squeezing_spectrum,
)
