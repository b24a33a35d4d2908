"""Weighted conditional type operators on discretized L2 spaces.

Closed-form adjoints, spectra, Moore-Penrose inverses, resolvents,
characteristic matrices and Tikhonov paths for ``T f = w E(u f)``, with a
dense SVD oracle to check them against.
"""

from .errors import *  # noqa: F401,F403
from .measure import (
    MeasureSpace,
    Partition,
    build_partition,
    build_space,
    conditional_expectation,
    ess_bounds,
    finest_partition,
    norm,
    product_space,
    symmetric_grid,
    symmetric_partition,
    trivial_partition,
    weighted_inner_product,
)
from .wct import (
    WctOperator,
    adjoint_apply,
    apply,
    build_wct,
    materialize,
    modulus_apply,
    norms,
    spectrum,
)
from .pinv import (
    mp_axiom_residuals,
    pinv_apply,
    pinv_operator,
    projection_apply,
    solve_min_norm,
)
from .resolvent import (
    characteristic_entries,
    graph_projection_apply,
    resolvent_apply,
    tikhonov_resolvent_apply,
)
from .regularization import (
    generic_regularized_solve,
    regularization_path,
    tikhonov_minimizer,
    tikhonov_value,
)
from .fredholm import (
    build_kernel_problem,
    embed_as_wct,
    solve_fredholm,
)

__version__ = "0.1.0"
