"""Main eigenvalues of generalized Bethe trees."""

from .exact import (
    Poly,
    charpoly_tree,
    charpoly_tridiagonal,
    krylov_rank,
    main_count_divisor,
    poly_divides,
    verify_xi_identity,
    xi_vector,
)
from .partition import (
    characteristic_matrix,
    check_compatibility,
    check_similarity,
    divisor_matrix,
    is_equitable,
    level_partition,
)
from .spectra import main_spectrum_numeric, symmetric_eigen, walk_matrix_rank
from .tree import (
    BetheTree,
    DegreeSequence,
    adjacency,
    build_tree,
    classify,
    counterexample_degrees,
    level_sizes,
)

__version__ = "0.1.0"
