"""Proper splittings of complex matrices with closed range.

A proper splitting of ``T`` writes it as ``U - V`` with ``U`` sharing the
range and the null space of ``T``.  The package constructs the named
splittings (polar, canonical idempotent, group inverse, Moore-Penrose,
range projection, projection times Hermitian, and the induced ones),
decides convergence of the associated iteration both spectrally and
through closed-form norm criteria, runs the iteration to the reduced
solution of ``T X = W`` for a chosen complement of the null space, checks
the star, minus, sharp and Loewner partial orders, and computes the
closest normalized tight frame of a finite frame.
"""

__version__ = "0.1.0"

from .core import (
    DEFAULT_TOL,
    SubspaceBasis,
    Tolerances,
    is_hermitian,
    is_psd,
    matrices_equal,
    numerical_rank,
    operator_norm,
    range_included,
    range_projector,
    spectral_radius,
    subspaces_equal,
    svd,
)
from .errors import (
    CriterionFailed,
    Diverged,
    IterationFailure,
    NonSquare,
    NotComplements,
    NotGroupInvertible,
    NotHermitian,
    NotInPLh,
    NotInvertible,
    NotPSD,
    NotProper,
    NotUnitary,
    NumericalFailure,
    ParseError,
    PropersplitError,
    ShapeMismatch,
    SingularIteration,
    Stalled,
    Unsolvable,
)
from .geninv import (
    PolarParts,
    abs_op,
    canonical_oblique,
    douglas_reduced,
    group_inverse,
    hermitian_sqrt,
    moore_penrose,
    oblique_projector,
    polar,
    reverse_order_law_holds,
)
from .orders import (
    OrderVerdict,
    blt_criterion,
    loewner_leq,
    minus_leq,
    mp_antitone_check,
    sharp_leq,
    star_leq,
)
from .solver import (
    FrameSpec,
    IterationReport,
    exact_reduced,
    frame_bounds,
    frame_symmetric_approx,
    iterate_reduced,
)
from .splittings import (
    ComparisonReport,
    ConvergenceReport,
    IdentityChecks,
    PositivityDiagnostics,
    ProperSplitting,
    compare,
    convergence,
    group_splitting,
    induced_conj,
    induced_invertible,
    induced_right,
    iteration_matrix,
    make_splitting,
    mp_splitting,
    plh_splitting,
    polar_splitting,
    positivity_diagnostics,
    projection_splitting,
    q_splitting,
    rho_formula_check,
    splitting_identities_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
