"""Topological distance games: stability, constructive solvers, dynamics,
exhaustive oracles and the named instance families."""

from .core import (
    INFINITE,
    DistanceFactor,
    FriendshipGraph,
    TdgError,
    TdgInstance,
    TopologyGraph,
    all_pairs_distances,
    check_assignment,
    empty_nodes,
    friendship_graph,
    jump,
    swap,
    utility,
)
from .dynamics import (
    BestGain,
    DynamicsTrace,
    FirstDeviator,
    Scripted,
    SeededRandom,
    StateGraph,
    explore_state_graph,
    necessarily_converges,
    possibly_converges,
    run_dynamics,
    run_scripted_exponential,
    run_swap_dynamics,
)
from .oracle import exists_jump_stable, exists_swap_stable, verify_local_optimum_correspondence
from .solvers import SolverReport, solve_acyclic, solve_cycle_on_cycle, solve_extended_star, solve_path
from .stability import (
    beneficial_jumps,
    beneficial_swaps,
    is_jump_stable,
    is_swap_stable,
    potential_lambda_vec,
    potential_phi,
)

__version__ = "0.1.0"
