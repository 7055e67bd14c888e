"""Idempotent states, pre-subgroups and coidalgebras of finite quantum groups."""

from .algebra import (
    AlgebraData,
    AlgebraElement,
    AlgebraError,
    NotPositiveError,
    OwnerMismatch,
    TensorElement,
    adjoint,
    haar_inner,
    is_central,
    is_positive,
    is_projection,
    multiply,
    sqrt_positive,
)
from .coidalgebra import (
    Coidalgebra,
    CoidalgebraError,
    HaarEquivalenceReport,
    coidalgebra_of,
    expectation_of_state,
    haar_equivalence_report,
    image_coidalgebra,
    multiplicativity_on_image_check,
    quotient_coidalgebra,
    state_of_coidalgebra,
)
from .hopf import AxiomError, QuantumGroup, ValidationReport, validate
from .io import SchemaError, parse, write
from .kernels import BACKEND
from .lattice import IdempotentLattice, build_lattice, export
from .models import BUILTINS, builtin
from .presubgroups import (
    CertificationError,
    GroupLikeProjection,
    PreSubgroup,
    QuantumSubgroup,
    bbs_order,
    is_grouplike_projection,
    is_presubgroup,
    quantum_subgroup_from_central,
    search_idempotents,
    to_grouplike,
    to_presubgroup,
)
from .states import (
    Functional,
    IdempotentState,
    StateError,
    cesaro_idempotent,
    convolve,
    counit_functional,
    haar_functional,
    is_idempotent_state,
    is_state,
    order_le,
    presubgroup_of,
    vector_state,
)

__version__ = "0.1.0"
