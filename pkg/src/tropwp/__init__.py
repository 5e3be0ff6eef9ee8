"""Weierstrass points on tropical curves via admissible covers of trees."""

__version__ = "0.1.0"

from .errors import TropWPError
from .graphs import (
    DiscreteGraph,
    GraphBuilder,
    automorphisms,
    canonical_key,
    contract,
    enumerate_trivalent_trees,
    find_isomorphisms,
    forget_legs,
    genus,
    standard_families,
    to_dot,
    validate_graph,
)
from .divisors import (
    Divisor,
    MetricGraph,
    Point,
    canonical_divisor,
    is_weierstrass,
    rank,
    reduce_divisor,
    riemann_roch_residual,
)
from .covers import Cover, RealizedCover, matrices, rh_equality_check, validate_cover
from .hurwitz import cover_multiplicity, hurwitz_genus0, stabilizers, standard_weight
from .enumeration import enumerate_all, enumerate_covers_over_tree, local_covers, weierstrass_profile
from .weierstrass import (
    count_gwp,
    fiber_witnesses,
    generic_metric_graph,
    marked_classes,
    pushforward_total,
)
