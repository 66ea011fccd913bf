"""Construction and exact certification of plans orthogonal through the block factor."""

from .algebra import (
    CosetDecomposition,
    CyclicGroup,
    GaloisField,
    cyclotomic_cosets,
    cyclotomy_number,
    field_arithmetic,
    gf_construct,
    multiset_difference,
)
from .constructions import (
    OrthogonalArray,
    build_oa,
    recursive_product,
    small_example_plan,
    thm31_plan,
    thm32a_plan,
    thm32b_plan,
    thm33a_plan,
    thm33b_plan,
    thm34_plan,
    verify_oa,
)
from .plan import INF, IncidenceMatrix, Plan, develop, incidence_factor_block, incidence_factor_factor
from .verify import (
    CertReport,
    check_balanced_potb,
    check_bibd,
    check_connected,
    check_gdd,
    check_pergola,
    check_potb,
)

__version__ = "0.1.0"
