"""Weight homomorphisms and semi-natural bases of algebras given by structure constants."""

from .fields import GF, QQ, FieldError, FieldSpec, FieldValue, parse_value
from .linalg import Matrix, identity, invert, determinant, row_sums, vector
from .algebra import Algebra, change_basis, direct_product, is_semi_natural, load_algebra
from .solver import Verdict, certify_unique, solve_eigen, solve_exhaustive, weight_homomorphisms
from .seminatural import census, coset_partition, enumerate_seminat, seminat_from_solution

__version__ = "0.1.0"
