"""N bosons on a one-dimensional lattice as one particle on an N-dimensional synthetic lattice."""

__version__ = "0.1.0"

from .model import (
    Boundary,
    CouplingKind,
    CouplingPattern,
    ExcitationSpec,
    InteractionSpec,
    LatticeSpec,
    cell_distance,
    coupling_strength,
    pair_potential,
    site_c,
    site_d,
)
from .synth import (
    AmplitudeField,
    SyntheticOperator,
    boson_number_distribution,
    build_synthetic_operator,
    v_to_u,
)
from .bloch import (
    BandStructure,
    StripeGeometry,
    analytic_band_ssh2d,
    analytic_band_tb,
    build_stripe_bloch,
    projected_bands,
    synthetic_bloch_matrix,
)
from .spectra import (
    Category,
    EigenPair,
    Parity,
    classify_band_by_region,
    classify_localization,
    eigensystem,
    hermitian_eig,
    parity_classify,
    resolve_parities,
)
from .dynamics import SourceTerm, evolve, run_interface_experiment
from .oracle import build_fock_hamiltonian, evolve_fock
