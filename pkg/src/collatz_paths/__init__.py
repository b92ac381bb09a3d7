"""Path algebra for the accelerated Collatz map, with a claim-audit engine."""

from .paths import (
    AffineForm,
    DoesNotFollow,
    GridPoint,
    LengthMismatch,
    Move,
    NotMonotone,
    OutOfRange,
    Path,
    PathError,
    Trajectory,
    affine_form,
    apply_path,
    coefficient_a,
    coefficient_a_recurrence,
    collatz_step,
    follows,
    grid_points,
    move_sequence,
    parse_path,
    simulate,
    trajectory_path,
    validate_path,
)
from .solver import (
    CharacteristicSolution,
    CResult,
    NotCoprime,
    VerificationFailed,
    characteristic_solution,
    diophantine_residual,
    mod_inverse,
    smallest_follower,
    smallest_follower_any_end,
    solve_c,
)
from .oracle import (
    ReachOutcome,
    ReachStatus,
    brute_force_min_follower,
    follower_table,
    followers_in_range,
    reaches_one,
)

__version__ = "0.1.0"
