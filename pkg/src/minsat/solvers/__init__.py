from .exact import candidate_grid, opt_bruteforce, opt_exact_dp, opt_size
from .online import (
    Box,
    OnlineSolver,
    box_solution,
    boxes,
    check_doubled,
    double_instance,
    family_trees,
    modify_solution,
    offline_modified,
    online_solver,
    unfold_families,
)
from .recursive import RecursionTrace, depth_bound, recursive_bst, static_bound, static_solution
