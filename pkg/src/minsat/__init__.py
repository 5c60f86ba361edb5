"""Geometric MinSat toolkit: instances, Wilber-type lower bounds, exact and approximate solvers."""

from .bounds import BoundReport, cgb_exact, cgb_order, cgb_sampled, gb_exact, wb2_funnel
from .geometry import (
    Point,
    PointSet,
    is_feasible,
    is_satisfied,
    normalize,
    reduce,
    to_canonical,
    to_special,
    unsatisfied_pairs,
)
from .limits import SizeGuardError
from .partition import (
    PartitionTree,
    balanced_tree,
    random_tree,
    split_at,
    tree_from_order,
    wb_forbidden,
    wb_strong_exact,
    wb_weak,
)
from .solvers import (
    OnlineSolver,
    box_solution,
    online_solver,
    opt_bruteforce,
    opt_exact_dp,
    opt_size,
    recursive_bst,
    static_solution,
)

__version__ = "0.1.0"
