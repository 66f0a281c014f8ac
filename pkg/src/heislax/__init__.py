"""Lax dynamics on coadjoint orbits of Heisenberg groups and integrability certificates."""
from .dynamics import (
    LaxPair,
    Trajectory,
    energy_series,
    factorization_residual,
    flow_exact,
    integrate,
    isospectral_drift,
    lax_matrices,
    lax_rhs,
    solve_by_factorization,
    trajectory_csv,
)
from .errors import (
    DegenerateMetricError,
    DivergenceError,
    HeislaxError,
    InvalidArgument,
    NotADerivationError,
)
from .extension import (
    MetricLieAlgebra,
    double_extend,
    from_symmetric,
    oscillator,
    pendula,
    splitting,
)
from .heisenberg import (
    Derivation,
    SymmetricMap,
    deriv_of_sym,
    heisenberg,
    heisenberg_metric,
    standard_J,
    sym_of_deriv,
)
from .integrability import (
    IntegrabilityCertificate,
    abelian_family,
    centralizer,
    certificate,
    complex_symmetric_test,
    first_integrals,
    involution_test,
    level_set_classify,
    pairwise_test,
    poisson_quadratics,
)
from .lie_core import (
    LieAlgebra,
    MetricForm,
    QuadraticFunction,
    ad_invariance_defect,
    ad_matrix,
    adjoint_exp,
    bracket,
    jacobi_defect,
)
from .orbits import OrbitPoint, kks, poisson_orbit

__all__ = [
    "LaxPair",
    "Trajectory",
    "energy_series",
    "factorization_residual",
    "flow_exact",
    "integrate",
    "isospectral_drift",
    "lax_matrices",
    "lax_rhs",
    "solve_by_factorization",
    "trajectory_csv",
    "DegenerateMetricError",
    "DivergenceError",
    "HeislaxError",
    "InvalidArgument",
    "NotADerivationError",
    "MetricLieAlgebra",
    "double_extend",
    "from_symmetric",
    "oscillator",
    "pendula",
    "splitting",
    "Derivation",
    "SymmetricMap",
    "deriv_of_sym",
    "heisenberg",
    "heisenberg_metric",
    "standard_J",
    "sym_of_deriv",
    "IntegrabilityCertificate",
    "abelian_family",
    "centralizer",
    "certificate",
    "complex_symmetric_test",
    "first_integrals",
    "involution_test",
    "level_set_classify",
    "pairwise_test",
    "poisson_quadratics",
    "LieAlgebra",
    "MetricForm",
    "QuadraticFunction",
    "ad_invariance_defect",
    "ad_matrix",
    "adjoint_exp",
    "bracket",
    "jacobi_defect",
    "OrbitPoint",
    "kks",
    "poisson_orbit",
]
