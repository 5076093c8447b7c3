"""Exact F2 cochain calculus and expansion invariants for small complexes."""

__version__ = "0.1.0"

from .complexes import (  # noqa: F401
    Cochain,
    Complex,
    complete_complex,
    cone,
    from_facets,
    linial_meshulam,
    link,
    norm,
    restrict,
    rp2_six_vertex,
    skeleton,
    sphere_boundary,
    weight_table,
)
from .cohomology import (  # noqa: F401
    coboundary,
    cohomology_dim,
    coset_min_norm,
    epsilon_i,
    epsilon_is_positive,
    epsilon_tilde_i,
    expansion_report,
    mu_i,
    systole,
)
from .buildings import (  # noqa: F401
    color_cells,
    enumerate_subspaces,
    gaussian_binomial,
    section_graph,
    spherical_building,
)
from .minimization import (  # noqa: F401
    classify_thin_thick,
    colored_norms,
    is_locally_minimal,
    is_minimal,
    locally_minimize,
)
