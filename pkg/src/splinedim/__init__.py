"""Lower bounds and exact dimensions of trivariate spline spaces."""
from .bounds import (
    CubicPolynomial,
    EdgeData,
    VertexSummary,
    binom_extended,
    binom_trunc,
    d_gamma,
    edge_data,
    lb,
    lb_closed_star,
    lb_open_star,
    lb_polynomial,
    n_gamma,
    vertex_summary,
)
from .complex import (
    CellComplex,
    Face,
    StarComplex,
    ValidationReport,
    build_complex,
    cone,
    cone_star,
    link,
    star,
    validate_manifold,
)
from .errors import *  # noqa: F401,F403
from .examples import EXAMPLES, example_star, generate_example
from .linalg import FieldSpec, SparseMatrix, kernel_dim, rank
from .oracle import (
    ConstraintSystem,
    HilbertFit,
    build_system,
    hilbert_polynomial,
    homog_spline_dim,
    initial_degree,
    spline_dim,
)

__version__ = "0.1.0"
