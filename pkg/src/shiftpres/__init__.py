"""Factorization fibers, Betti elements and minimal presentations of affine semigroups,
with shifted families and checks of explicit results about them."""

from .core import (
    DimensionError,
    NablaPartition,
    Relation,
    Semigroup,
    contains,
    evaluate,
    factorizations_up_to,
    fiber,
    grading,
    is_betti,
    nabla,
)
from .families import (
    SECTION4,
    SECTION5,
    ShiftedFamily,
    classify_orientation,
    detect_eventual_period,
    family_constants,
    instantiate,
    phi_map,
    psi_map,
    psi_prime_map,
    sweep,
)
from .presentation import (
    BettiReport,
    LatticeBasis,
    Presentation,
    betti_elements,
    kernel_lattice,
    minimal_presentation,
    presentation_size,
    primitive_trade_3gen,
    verify_presentation,
)

__version__ = "0.1.0"
