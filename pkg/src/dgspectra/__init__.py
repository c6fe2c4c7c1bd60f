"""dgspectra: spectral analysis of penalty-flux DG discretizations of
first-order hyperbolic systems."""

__version__ = "0.1.0"

from .assembly import DGOperator, assemble, face_jump_energy
from .conforming import (
    BlockDecomposition,
    ConformingSplit,
    block_decompose,
    build_conforming_split,
    conforming_dimension_oracle,
    conforming_spectrum,
)
from .mesh import Mesh, build_mesh_1d, build_mesh_2d_bisected
from .pde import FluxConfig, HyperbolicSystem, make_system, normal_flux_data, recommend_tau
from .refelem import ReferenceElement, build_reference_element
from .spectral import (
    GerschgorinStructure,
    Spectrum,
    compute_spectrum,
    eigenvector_partition,
    gerschgorin_structure,
    spectrum_of_operator,
)
from .tauanalysis import (
    ModalExpansion,
    SpectrumSweep,
    expand_in_tau1_basis,
    find_returning_modes,
    sweep,
    verify_lemma_rates,
)
from .timedomain import EnergyTrace, integrate
