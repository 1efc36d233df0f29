"""moyalkit: numerical verification toolkit for Moyal star products, Weyl
quantization, Clifford algebra on exterior powers, Bott projectors and the
explicit idempotent family deforming the Bott generator into the vacuum
projection."""

__version__ = "0.1.0"

from .core import (
    ExteriorBasis,
    SymplecticSpace,
    clifford_c,
    clifford_ct,
    eps_matrix,
    exterior_power_unitary,
    hermitian_form,
    iota_matrix,
    make_standard_space,
    number_operator,
)
from .symbols import (
    GaussianSymbol,
    WeylPoly,
    build_A_symbol,
    fourier_iso_check,
    mehler,
    moyal_gauss,
    moyal_poly,
    moyal_poly_matrix,
    scaling_iso,
    vacuum_symbol,
)
from .quantize import (
    HermiteBasisSpec,
    OperatorMatrix,
    bargmann_fock_matrices,
    build_A_operator,
    kernel_analysis,
    ladder_matrices,
    position_matrices,
    quantize_gaussian,
    quantize_poly,
)
from .projectors import (
    POINT_AT_INFINITY,
    ProjectionField,
    bott_projector,
    chern_number,
    equivariance_check,
    sphere_projector,
    stereographic,
)
from .harness import (
    IN_SCOPE_ANCHORS,
    SuiteConfig,
    circle_szego,
    equivariant_toeplitz_demo,
    run_suite,
    toeplitz_index,
    winding_number,
    write_report,
)
from .deform import (
    B_operator,
    DeformationFamily,
    R_operator,
    boundary_idempotent,
    idempotent_e,
    lambda_continuity,
    pointwise_family_e0,
    tau_convergence,
)
