"""Free decomposition spaces on inert presheaves, with checkers and incidence coalgebras."""

from .free import (
    BudgetError,
    FreeSimplex,
    InertPresheaf,
    IntegrityError,
    PresheafMap,
    check_sheaf,
    culf_projection,
    free,
    map_free,
    recover_presheaf,
    shift_down,
    shift_up,
    terminal_presheaf,
    validate_presheaf,
)
from .incidence import TensorComb, comult, counit, convolve, length, mobius
from .kernels import BACKEND
from .simplex import OrdinalMap, compose, factorize
from .simplicial import (
    CheckReport,
    SimplicialMap,
    TruncatedSimplicialSet,
    b_nat,
    check_culf,
    check_decomposition,
    check_segal,
    check_simplicial_identities,
    edgewise,
    is_pullback,
)

__version__ = "0.1.0"
