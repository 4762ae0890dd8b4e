"""rittdyn: exact and numerical tools for tameness of rational functions,
fiber-product genera, decompositions of iterates, and orbit intersections."""

from .field import GaussianRational, INF, gq
from .funcalg import (
    DEGREE_GUARD,
    DegreeGuardError,
    Mobius,
    Poly,
    RatFunc,
    compose,
    conjugate,
    derivative,
    equal_exact,
    iterate,
    power_map,
)
from .numerics import (
    ComplexPoint,
    KERNEL_IMPL,
    LoopPath,
    all_roots,
    track_fiber,
)
from .orbifold import (
    GenusClass,
    Orbifold,
    RamificationPortrait,
    Signature,
    euler_characteristic,
    normalization_genus_class,
    nu_pair,
    ramification_portrait,
)
from .monodromy import MonodromyData, group_order, monodromy
from .fiberprod import (
    FiberComponent,
    bound_c1,
    bound_c2,
    check_bound,
    curve_components,
    genus_bound,
    tameness,
)
from .decomp import (
    DecompClass,
    block_systems,
    divide_left,
    divide_right,
    engstrom_split,
    equivalence_classes,
    induced_stabilization,
    poly_decompose,
)
from .dynamics import (
    OrbitRecord,
    SpecialVerdict,
    chebyshev,
    common_iterate_search,
    d_family,
    make_family,
    orbit,
    orbit_intersect,
    prime_set_check,
    special_detect,
)

__version__ = "0.1.0"
