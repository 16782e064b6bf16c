"""Capacities on lattices and regular set systems: maximal chains, Shapley values and entropies."""

from .capacity import (
    Capacity,
    CapacityError,
    ChainDistribution,
    additive_uniform,
    blend,
    blend_with_uniform,
    cardinality_based,
    chain_distribution,
    validate,
)
from .canonical import (
    bicapacity_lattice,
    bicapacity_normalize,
    bicapacity_shapley,
    boolean_lattice,
    gamma_bicap,
    multichoice_lattice,
    multichoice_shapley,
    xi_coefficient,
)
from .measures import (
    EntropyReport,
    ShapleyVector,
    StructureError,
    entropy,
    marichal_entropy_direct,
    relative_entropy,
    shannon_entropy,
    shannon_relative,
    shapley,
    shapley_chain,
    shapley_classical,
    shapley_lattice,
    shapley_lattice_dual,
)
from .order import (
    BoundedLattice,
    ChainBudgetExceeded,
    NotALatticeError,
    OrderError,
    Poset,
    build_hasse,
    enumerate_maximal_chains,
    eta,
    eta_dual,
    is_distributive,
    is_vee_minimal_regular,
    is_wedge_minimal_regular,
    join_irreducibles,
    jordan_dedekind_holds,
    meet_irreducibles,
)
from .setsystem import (
    SetSystem,
    containment_poset,
    dualize,
    from_lattice,
    is_antimatroid,
    is_convex_geometry,
    is_regular,
    to_lattice,
)

__version__ = "0.1.0"
