"""Range of optimal values of an interval absolute value program.

The problem data ``A``, ``b``, ``c``, ``D`` are interval-valued, and
each point selection ("realization") defines one program

    maximize  c @ x  subject to  A x - D |x| <= b,     D >= 0.

Over all realizations the optimal value sweeps an interval.  Its upper
endpoint (the best case) is computed exactly by a single generalized
program.  The lower endpoint (the worst case) is bracketed: a one-shot
program gives a lower bound, a sign-consistency certificate can prove
that bound exact, and an iterative sign-update scheme tightens an upper
bound on the worst case from above.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .avlp import (
    DEFAULT_ORTHANT_CAP,
    GenAvlpProgram,
    from_realization,
    solve_gen_avlp,
    SolveOutcome,
)
from .errors import AvlpRangeError, DimensionError, InputError, NumericalError
from .intervals import (
    DEFAULT_TOL,
    IntervalMatrix,
    IntervalVector,
    SignVector,
    realize_rs,
    realize_s,
    sign_of,
)
from .simplex import Status, _solve_inequality


def _frozen_array(value, ndim: int, what: str) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.ndim != ndim:
        raise DimensionError(f"{what} must be {ndim}-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{what} must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class AvlpProblem:
    """Interval problem data.

    ``A`` couples constraints to ``x``, ``D`` to ``|x|`` (subtracted,
    so it relaxes constraints and must have a nonnegative lower bound),
    ``b`` bounds the rows and ``c`` is the objective.
    """

    A: IntervalMatrix
    b: IntervalVector
    c: IntervalVector
    D: IntervalMatrix

    def __post_init__(self):
        m, n = self.A.inf.shape
        if self.b.inf.shape != (m,):
            raise DimensionError(
                f"b has {self.b.inf.shape[0]} entries, expected one per row ({m})"
            )
        if self.c.inf.shape != (n,):
            raise DimensionError(
                f"c has {self.c.inf.shape[0]} entries, expected one per column ({n})"
            )
        if self.D.inf.shape != (m, n):
            raise DimensionError(
                f"D has shape {self.D.inf.shape}, expected {(m, n)}"
            )
        bad = np.argwhere(self.D.inf < 0)
        if bad.size:
            i, j = bad[0]
            raise InputError(
                f"D must have a nonnegative lower bound; entry ({i + 1},{j + 1}) "
                f"has lower bound {self.D.inf[i, j]}"
            )

    @property
    def m(self) -> int:
        return self.A.inf.shape[0]

    @property
    def n(self) -> int:
        return self.A.inf.shape[1]


@dataclass(frozen=True)
class Realization:
    """One point selection of the interval data."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _frozen_array(self.A, 2, "A"))
        object.__setattr__(self, "b", _frozen_array(self.b, 1, "b"))
        object.__setattr__(self, "c", _frozen_array(self.c, 1, "c"))
        object.__setattr__(self, "D", _frozen_array(self.D, 2, "D"))

    def program(self) -> GenAvlpProgram:
        return from_realization(self.A, self.b, self.c, self.D)

    def solve(
        self,
        tol: float = DEFAULT_TOL,
        orthant_cap: int = DEFAULT_ORTHANT_CAP,
    ) -> SolveOutcome:
        return solve_gen_avlp(self.program(), tol=tol, orthant_cap=orthant_cap)


@dataclass(frozen=True)
class IterationStep:
    """One step of the upper-bound iteration."""

    index: int
    status: Status
    value: float
    bound: float
    sign: SignVector | None
    ray: np.ndarray | None = None


@dataclass(frozen=True)
class RangeReport:
    """Aggregated results of the three range analyses.

    ``lower_tight`` is True when the worst case value is proved to
    equal ``worst_lower``, either by the sign-consistency certificate
    or because an infeasible realization pinned both at ``-inf``.
    Fields are None when the corresponding analysis failed; the failure
    message is kept in ``errors`` under the field name.
    """

    best: float | None
    worst_lower: float | None
    worst_upper: float | None
    lower_tight: bool
    best_witness: Realization | None
    upper_witness: Realization | None
    upper_log: tuple[IterationStep, ...] = ()
    errors: dict[str, str] = field(default_factory=dict)
    tol: float = DEFAULT_TOL


def _best_program(problem: AvlpProblem) -> GenAvlpProgram:
    return GenAvlpProgram(
        linear_cost=problem.c.mid,
        abs_cost=problem.c.rad,
        linear_lhs=problem.A.mid,
        abs_lhs=-(problem.A.rad + problem.D.sup),
        rhs=problem.b.sup,
    )


def _worst_lower_program(problem: AvlpProblem) -> GenAvlpProgram:
    return GenAvlpProgram(
        linear_cost=problem.c.mid,
        abs_cost=-problem.c.rad,
        linear_lhs=problem.A.mid,
        abs_lhs=problem.A.rad - problem.D.inf,
        rhs=problem.b.inf,
    )


def best_case(
    problem: AvlpProblem,
    tol: float = DEFAULT_TOL,
    orthant_cap: int = DEFAULT_ORTHANT_CAP,
) -> tuple[float, Realization | None]:
    """Largest optimal value over all realizations, with a witness.

    The combined program maximizes ``mid(c) @ x + rad(c) @ |x|``
    subject to ``mid(A) x - (rad(A) + sup(D)) |x| <= sup(b)``; its
    value is the exact best case.  The witness realization attains that
    value: at the optimal sign ``s`` it picks the matrix corner
    ``mid(A) - rad(A) diag(s)``, the cost corner ``mid(c) + diag(s)
    rad(c)``, and the permissive bounds ``sup(b)``, ``sup(D)``.  No
    witness is returned when every realization is infeasible.
    """
    out = solve_gen_avlp(_best_program(problem), tol=tol, orthant_cap=orthant_cap)
    if out.status is Status.INFEASIBLE:
        return -np.inf, None
    s = out.sign if out.status is Status.OPTIMAL else out.orthant
    s_arr = s.as_array()
    witness = Realization(
        A=realize_rs(problem.A, np.ones(problem.m), s_arr),
        b=problem.b.sup,
        c=realize_s(problem.c, s_arr),
        D=problem.D.sup,
    )
    return out.value, witness


def relaxed_interval_lp(
    problem: AvlpProblem,
) -> tuple[IntervalMatrix, IntervalVector, IntervalVector]:
    """Interval LP whose best case matches the problem's best case.

    The absolute-value relief is absorbed into the matrix radius: the
    returned matrix has the same midpoint as ``A`` and radius
    ``rad(A) + sup(D)``.
    """
    widened = IntervalMatrix.from_midrad(problem.A.mid, problem.A.rad + problem.D.sup)
    return widened, problem.b, problem.c


def worst_lower_bound(
    problem: AvlpProblem,
    tol: float = DEFAULT_TOL,
    orthant_cap: int = DEFAULT_ORTHANT_CAP,
) -> float:
    """Lower bound on the smallest optimal value over realizations.

    Value of ``max mid(c) @ x - rad(c) @ |x|`` subject to
    ``mid(A) x + (rad(A) - inf(D)) |x| <= inf(b)``; ``-inf`` when that
    program is infeasible.  The bound can be strict (the worst case
    value may sit above it, and may not be attained at all).
    """
    out = solve_gen_avlp(_worst_lower_program(problem), tol=tol, orthant_cap=orthant_cap)
    return out.value


def lower_tightness(
    problem: AvlpProblem,
    s_star: SignVector,
    tol: float = DEFAULT_TOL,
    orthant_cap: int = DEFAULT_ORTHANT_CAP,
) -> bool:
    """Certify that the worst-case lower bound is exact.

    ``s_star`` must be the sign of an optimizer of the lower-bound
    program.  The test builds the realization with matrix corner
    ``mid(A) + rad(A) diag(s*)``, cost corner ``mid(c) - diag(s*)
    rad(c)`` and stingy bounds ``inf(b)``, ``inf(D)``, and asks whether
    that realization attains its optimum at a point whose componentwise
    signs match ``s*`` (zeros are compatible with either sign).  When
    it does, the realization's value equals the lower bound, which is
    therefore the exact worst case.  The certificate is sufficient
    only: False does not refute tightness.
    """
    s_arr = s_star.as_array()
    lhs = realize_rs(problem.A, np.ones(problem.m), -s_arr)
    cost = realize_s(problem.c, -s_arr)
    relief = problem.D.inf
    rhs = problem.b.inf
    out = solve_gen_avlp(
        from_realization(lhs, rhs, cost, relief), tol=tol, orthant_cap=orthant_cap
    )
    if out.status is not Status.OPTIMAL:
        return False
    # value of the same realization restricted to the closed orthant of
    # s*; equality means some global optimizer lives there
    n = problem.n
    restricted = _solve_inequality(
        np.vstack([lhs - relief * s_arr[None, :], -np.diag(s_arr)]),
        np.concatenate([rhs, np.zeros(n)]),
        cost,
        None,
        tol,
    )
    if restricted.status is not Status.OPTIMAL:
        return False
    return abs(restricted.value - out.value) <= tol * (1.0 + abs(out.value))


def worst_upper_bound(
    problem: AvlpProblem,
    tol: float = DEFAULT_TOL,
    max_iters: int = 50,
    orthant_cap: int = DEFAULT_ORTHANT_CAP,
) -> tuple[float, Realization | None, tuple[IterationStep, ...]]:
    """Upper bound on the worst case value by iterated sign updates.

    Starting from the midpoint matrix and cost, each step solves the
    realization with bounds ``inf(b)``, ``inf(D)``, reads the sign
    ``s`` of its optimizer (of its ray when unbounded), and moves the
    matrix to ``mid(A) + rad(A) diag(s)`` and the cost to
    ``mid(c) - diag(s) rad(c)``.  The bound is the running minimum of
    the iterate values.  Iteration stops when a sign repeats, when the
    value stops improving by more than ``tol``, or after ``max_iters``
    steps.  An infeasible iterate proves the worst case is exactly
    ``-inf`` and stops immediately; an unbounded iterate contributes
    ``+inf`` and the iteration continues along its ray's sign.
    """
    lhs = problem.A.mid
    cost = problem.c.mid
    rhs = problem.b.inf
    relief = problem.D.inf

    bound = np.inf
    witness: Realization | None = None
    log: list[IterationStep] = []
    visited: set[tuple[int, ...]] = set()
    ones = np.ones(problem.m)

    for index in range(max_iters):
        current = Realization(A=lhs, b=rhs, c=cost, D=relief)
        out = solve_gen_avlp(current.program(), tol=tol, orthant_cap=orthant_cap)
        if out.status is Status.INFEASIBLE:
            bound = -np.inf
            witness = current
            log.append(IterationStep(index, out.status, -np.inf, bound, None))
            break
        if out.status is Status.OPTIMAL:
            s = out.sign
            if out.value < bound - tol:
                bound = out.value
                witness = current
                stale = False
            else:
                stale = True
            log.append(IterationStep(index, out.status, out.value, bound, s))
            if stale:
                break
        else:
            s = sign_of(out.ray)
            log.append(IterationStep(index, out.status, np.inf, bound, s, ray=out.ray))
        if s.entries in visited:
            break
        visited.add(s.entries)
        s_arr = s.as_array()
        lhs = realize_rs(problem.A, ones, -s_arr)
        cost = realize_s(problem.c, -s_arr)

    return bound, witness, tuple(log)


def sample_realization(problem: AvlpProblem, rng: np.random.Generator) -> Realization:
    """Draw one realization uniformly from the interval data."""
    return Realization(
        A=problem.A.sample(rng),
        b=problem.b.sample(rng),
        c=problem.c.sample(rng),
        D=problem.D.sample(rng),
    )


def full_range(
    problem: AvlpProblem,
    tol: float = DEFAULT_TOL,
    max_iters: int = 50,
    orthant_cap: int = DEFAULT_ORTHANT_CAP,
) -> RangeReport:
    """Run all three analyses and aggregate them into a report.

    Component failures are caught and recorded per field; the other
    analyses still run.  The mutual orderings of the produced values
    are checked before returning.
    """
    errors: dict[str, str] = {}

    best = best_witness = None
    try:
        best, best_witness = best_case(problem, tol=tol, orthant_cap=orthant_cap)
    except AvlpRangeError as exc:
        errors["best"] = str(exc)

    worst_lower = None
    lower_tight = False
    try:
        lower_out = solve_gen_avlp(
            _worst_lower_program(problem), tol=tol, orthant_cap=orthant_cap
        )
        worst_lower = lower_out.value
        if lower_out.status is Status.OPTIMAL:
            # multiple orthants can tie for the optimum; the
            # certificate needs only one of their signs to pass
            seen: set[tuple[int, ...]] = set()
            for record in lower_out.records:
                if record.status is not Status.OPTIMAL:
                    continue
                if record.value < lower_out.value - tol * (1.0 + abs(lower_out.value)):
                    continue
                s = sign_of(record.optimizer)
                if s.entries in seen:
                    continue
                seen.add(s.entries)
                if lower_tightness(problem, s, tol=tol, orthant_cap=orthant_cap):
                    lower_tight = True
                    break
    except AvlpRangeError as exc:
        errors["worst_lower"] = str(exc)

    worst_upper = upper_witness = None
    upper_log: tuple[IterationStep, ...] = ()
    try:
        worst_upper, upper_witness, upper_log = worst_upper_bound(
            problem, tol=tol, max_iters=max_iters, orthant_cap=orthant_cap
        )
        hit_infeasible = any(step.status is Status.INFEASIBLE for step in upper_log)
        if hit_infeasible and worst_lower == -np.inf:
            # an infeasible realization pins the worst case at -inf,
            # which the lower bound then matches exactly
            lower_tight = True
    except AvlpRangeError as exc:
        errors["worst_upper"] = str(exc)

    report = RangeReport(
        best=best,
        worst_lower=worst_lower,
        worst_upper=worst_upper,
        lower_tight=lower_tight,
        best_witness=best_witness,
        upper_witness=upper_witness,
        upper_log=upper_log,
        errors=errors,
        tol=tol,
    )
    _check_report(report)
    return report


def _check_report(report: RangeReport) -> None:
    tol = report.tol
    lo, hi, best = report.worst_lower, report.worst_upper, report.best
    if lo is not None and hi is not None and np.isfinite(lo) and np.isfinite(hi):
        if lo > hi + tol * (1.0 + abs(hi)):
            raise NumericalError(
                f"inconsistent report: worst-case lower bound {lo} exceeds "
                f"upper bound {hi}"
            )
    if best is not None and hi is not None and best < hi - tol * (1.0 + abs(hi)):
        raise NumericalError(
            f"inconsistent report: best case {best} below worst-case upper bound {hi}"
        )


__all__ = [
    "AvlpProblem",
    "Realization",
    "IterationStep",
    "RangeReport",
    "best_case",
    "relaxed_interval_lp",
    "worst_lower_bound",
    "lower_tightness",
    "worst_upper_bound",
    "sample_realization",
    "full_range",
]
