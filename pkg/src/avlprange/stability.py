"""Basis stability of the relaxed interval program.

A row basis ``B`` (one row per variable, with the basic square block
nonsingular) is stable when it stays optimal for every realization of
the relaxed program ``max c @ x, A* x <= b`` where ``A*`` widens ``A``
by the largest absolute-value relief.  Stability is certified here by
sufficient conditions only: verified regularity of the basic block, a
verified enclosure of the basic solutions that keeps every nonbasic
row satisfied, and a verified nonnegative (for nondegeneracy: strictly
positive) enclosure of the basic multipliers.  The third outcome is an
honest ``unknown``; instability is never asserted.

Under a verified certificate the range endpoints collapse to single
solves: the best case is one ordinary LP in the multipliers, and the
worst case is the objective at the unique solution of the square
absolute-value system built from the basic rows.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .avlp import DEFAULT_ORTHANT_CAP, GenAvlpProgram, min_form, solve_gen_avlp
from .errors import (
    InputError,
    NumericalError,
    SingularMatrixError,
    SizeCapError,
    UnknownRegularityError,
)
from .intervals import (
    DEFAULT_TOL,
    IntervalMatrix,
    IntervalVector,
    RegularityCheck,
    _as_float_array,
    all_sign_vectors,
    beeck_regular,
    interval_matvec,
    realize_rs,
    realize_s,
    rex_rohn_regular,
    sign_of,
)
from .linalg import enclose_interval_solution, solve_square
from .ranges import AvlpProblem, Realization, relaxed_interval_lp
from .simplex import LpProblem, Status, solve_lp

NONDEGENERACY_MARGIN = 1e-7


@dataclass(frozen=True)
class Basis:
    """Row index set intended to select one basic row per variable.

    Indices are 0-based; ``from_one_based`` converts the 1-based labels
    used on the command line.
    """

    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(i) for i in self.rows)
        if len(set(rows)) != len(rows):
            raise InputError(f"basis rows must be distinct, got {rows}")
        if any(i < 0 for i in rows):
            raise InputError(f"basis rows must be nonnegative, got {rows}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_one_based(cls, labels) -> "Basis":
        return cls(tuple(int(i) - 1 for i in labels))

    def __iter__(self):
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=int)

    def complement(self, total_rows: int) -> np.ndarray:
        mask = np.ones(total_rows, dtype=bool)
        mask[self.as_array()] = False
        return np.nonzero(mask)[0]


class CertificateStatus(str, Enum):
    VERIFIED_NONDEGENERATE = "verified_nondegenerate"
    VERIFIED = "verified"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class StabilityCertificate:
    """Outcome of the three sufficient checks.

    ``primal_margin`` is the smallest verified slack of the nonbasic
    rows over the primal enclosure; ``dual_margin`` the smallest lower
    bound of the multiplier enclosure.  On ``unknown`` the first
    failing check is named in ``reason`` and later fields may be None.
    """

    status: CertificateStatus
    regularity: RegularityCheck | None = None
    primal_enclosure: IntervalVector | None = None
    primal_margin: float | None = None
    dual_enclosure: IntervalVector | None = None
    dual_margin: float | None = None
    reason: str | None = None


@dataclass(frozen=True)
class GaveSystem:
    """Square system ``M x + F |x| = g`` in the unknown ``x``."""

    M: np.ndarray
    F: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        M = _as_float_array(self.M, 2, "M")
        F = _as_float_array(self.F, 2, "F")
        g = _as_float_array(self.g, 1, "g")
        n = g.shape[0]
        if M.shape != (n, n) or F.shape != (n, n):
            raise InputError(
                f"system must be square: M {M.shape}, F {F.shape}, g has {n} entries"
            )
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "g", g)


def _basis_rows(basis, problem: AvlpProblem) -> np.ndarray:
    if not isinstance(basis, Basis):
        basis = Basis(tuple(basis))
    rows = basis.as_array()
    if rows.shape[0] != problem.n:
        raise InputError(
            f"basis must select {problem.n} rows, got {rows.shape[0]}"
        )
    if rows.size and rows.max() >= problem.m:
        raise InputError(
            f"basis row {rows.max()} out of range for {problem.m} constraint rows"
        )
    return rows


def _verified_regularity(matrix: IntervalMatrix) -> RegularityCheck:
    check = beeck_regular(matrix)
    if check.verified:
        return check
    return rex_rohn_regular(matrix)


def verify_b_stability(
    problem: AvlpProblem, basis, tol: float = DEFAULT_TOL
) -> StabilityCertificate:
    """Run the three sufficient stability checks for one basis.

    Returns ``verified_nondegenerate`` when additionally every basic
    multiplier is verifiably above ``NONDEGENERACY_MARGIN``, plain
    ``verified`` when multipliers are only verifiably nonnegative, and
    ``unknown`` (with the failing check named) otherwise.
    """
    rows = _basis_rows(basis, problem)
    star, rhs, cost = relaxed_interval_lp(problem)
    basic = star.take_rows(rows)

    regularity = _verified_regularity(basic)
    if not regularity.verified:
        return StabilityCertificate(
            status=CertificateStatus.UNKNOWN,
            regularity=regularity,
            reason="regularity of the basic block could not be verified"
            + (f" ({regularity.reason})" if regularity.reason else ""),
        )

    try:
        primal = enclose_interval_solution(basic, rhs.take(rows), tol=tol)
    except (UnknownRegularityError, NumericalError, SingularMatrixError) as exc:
        return StabilityCertificate(
            status=CertificateStatus.UNKNOWN,
            regularity=regularity,
            reason=f"primal enclosure failed: {exc}",
        )

    comp = np.setdiff1d(np.arange(problem.m), rows)
    if comp.size:
        reach = interval_matvec(star.take_rows(comp), primal)
        margins = rhs.inf[comp] - reach.sup
        primal_margin = float(margins.min())
        worst_row = int(comp[int(np.argmin(margins))])
    else:
        primal_margin = np.inf
        worst_row = -1
    if primal_margin < -tol:
        return StabilityCertificate(
            status=CertificateStatus.UNKNOWN,
            regularity=regularity,
            primal_enclosure=primal,
            primal_margin=primal_margin,
            reason=f"nonbasic row {worst_row + 1} not verifiably satisfied "
            f"(margin {primal_margin:.3g})",
        )

    try:
        dual = enclose_interval_solution(basic.T, cost, tol=tol)
    except (UnknownRegularityError, NumericalError, SingularMatrixError) as exc:
        return StabilityCertificate(
            status=CertificateStatus.UNKNOWN,
            regularity=regularity,
            primal_enclosure=primal,
            primal_margin=primal_margin,
            reason=f"dual enclosure failed: {exc}",
        )
    dual_margin = float(dual.inf.min())
    if dual_margin < 0.0:
        which = int(np.argmin(dual.inf))
        return StabilityCertificate(
            status=CertificateStatus.UNKNOWN,
            regularity=regularity,
            primal_enclosure=primal,
            primal_margin=primal_margin,
            dual_enclosure=dual,
            dual_margin=dual_margin,
            reason=f"multiplier {which + 1} not verifiably nonnegative "
            f"(lower bound {dual_margin:.3g})",
        )

    status = (
        CertificateStatus.VERIFIED_NONDEGENERATE
        if dual_margin > NONDEGENERACY_MARGIN
        else CertificateStatus.VERIFIED
    )
    return StabilityCertificate(
        status=status,
        regularity=regularity,
        primal_enclosure=primal,
        primal_margin=primal_margin,
        dual_enclosure=dual,
        dual_margin=dual_margin,
    )


def _warn_unverified(
    certificate: StabilityCertificate | None,
    need: str,
    accepted: frozenset[CertificateStatus],
) -> None:
    if certificate is None:
        warnings.warn(
            f"no stability certificate supplied; the result is valid only "
            f"under {need}",
            stacklevel=3,
        )
    elif certificate.status not in accepted:
        warnings.warn(
            f"certificate status is '{certificate.status.value}'; the result "
            f"is valid only under {need}",
            stacklevel=3,
        )


def best_case_bstable(
    problem: AvlpProblem,
    basis,
    tol: float = DEFAULT_TOL,
    certificate: StabilityCertificate | None = None,
) -> float:
    """Best case value under basis stability, via one LP.

    The program runs over nonnegative multipliers ``y`` of the basic
    rows: maximize ``sup(b)_B @ y`` subject to the widened-block corner
    conditions ``inf(A*)_B.T y <= sup(c)`` and ``sup(A*)_B.T y >=
    inf(c)``.  Outside verified stability the value is meaningless, so
    a missing or inconclusive certificate draws a warning.
    """
    rows = _basis_rows(basis, problem)
    _warn_unverified(
        certificate,
        "basis stability",
        frozenset(
            {CertificateStatus.VERIFIED, CertificateStatus.VERIFIED_NONDEGENERATE}
        ),
    )
    star, rhs, cost = relaxed_interval_lp(problem)
    n = problem.n
    low = star.inf[rows]
    high = star.sup[rows]
    lp = LpProblem(
        c=rhs.sup[rows],
        G=np.vstack([low.T, -high.T, -np.eye(n)]),
        g=np.concatenate([cost.sup, -cost.inf, np.zeros(n)]),
    )
    out = solve_lp(lp, tol=tol)
    if out.status is not Status.OPTIMAL:
        raise NumericalError(
            f"best-case program is {out.status.value}; this contradicts basis "
            f"stability of the supplied basis"
        )
    return out.value


def solve_gave(
    system: GaveSystem,
    cap: int = DEFAULT_ORTHANT_CAP,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Solve ``M x + F |x| = g`` by sign iteration with a safety net.

    A sign vector ``s`` fixes ``|x| = diag(s) x`` and leaves a linear
    solve; the iteration starts from the sign of ``M^-1 g`` and feeds
    each solution's sign back in, accepting any candidate whose true
    residual is below ``1e-8 * (1 + max|g|)``.  If signs cycle (more
    than ``n + 2`` distinct ones) or a solve fails, every sign pattern
    is enumerated instead, which requires ``n <= cap``.  Uniqueness
    holds when the envelope ``[M - |F|, M + |F|]`` is verifiably
    regular; when it is not, a warning is issued and the first
    sign-consistent solution is returned anyway.
    """
    M, F, g = system.M, system.F, system.g
    n = g.shape[0]

    envelope = IntervalMatrix(M - np.abs(F), M + np.abs(F))
    if not _verified_regularity(envelope).verified:
        warnings.warn(
            "uniqueness of the absolute value system's solution was not "
            "verified; returning the first sign-consistent solution",
            stacklevel=2,
        )

    residual_cap = 1e-8 * (1.0 + float(np.max(np.abs(g), initial=0.0)))

    def residual(x: np.ndarray) -> float:
        return float(np.max(np.abs(M @ x + F @ np.abs(x) - g), initial=0.0))

    try:
        s = sign_of(solve_square(M, g))
    except (SingularMatrixError, NumericalError):
        s = None

    visited: set[tuple[int, ...]] = set()
    while s is not None and len(visited) <= n + 2 and s.entries not in visited:
        visited.add(s.entries)
        try:
            x = solve_square(M + F * s.as_array()[None, :], g)
        except (SingularMatrixError, NumericalError):
            break
        if residual(x) <= residual_cap:
            return x
        s = sign_of(x)

    if n > cap:
        raise SizeCapError(
            f"sign iteration failed and exhaustive search over 2**{n} sign "
            f"patterns exceeds the cap of {cap} variables"
        )
    for s in all_sign_vectors(n):
        try:
            x = solve_square(M + F * s.as_array()[None, :], g)
        except (SingularMatrixError, NumericalError):
            continue
        if residual(x) <= residual_cap:
            return x
    raise NumericalError(
        "no sign-consistent solution of the absolute value system was found; "
        "this contradicts the verified uniqueness assumption"
    )


def worst_case_bstable(
    problem: AvlpProblem,
    basis,
    cap: int = DEFAULT_ORTHANT_CAP,
    tol: float = DEFAULT_TOL,
    certificate: StabilityCertificate | None = None,
) -> tuple[float, np.ndarray, Realization]:
    """Exact worst case under nondegenerate basis stability.

    The worst-case optimizer is the unique solution ``x*`` of the
    square system ``mid(A)_B x + (rad(A) - inf(D))_B |x| = inf(b)_B``;
    the value is ``mid(c) @ x* - rad(c) @ |x*|``.  The returned witness
    realization attains it: with ``s = sign(x*)`` the basic rows take
    the corner ``mid(A) + rad(A) diag(s)``, the cost takes ``mid(c) -
    diag(s) rad(c)``, bounds are ``inf(b)`` and ``inf(D)``, and the
    nonbasic rows (free to be anything) are reported at ``mid(A)``.
    """
    rows = _basis_rows(basis, problem)
    _warn_unverified(
        certificate,
        "nondegenerate basis stability",
        frozenset({CertificateStatus.VERIFIED_NONDEGENERATE}),
    )

    system = GaveSystem(
        M=problem.A.mid[rows],
        F=(problem.A.rad - problem.D.inf)[rows],
        g=problem.b.inf[rows],
    )
    x_star = solve_gave(system, cap=cap, tol=tol)
    value = float(problem.c.mid @ x_star - problem.c.rad @ np.abs(x_star))

    s_arr = sign_of(x_star).as_array()
    corner = realize_rs(problem.A, np.ones(problem.m), -s_arr)
    lhs = problem.A.mid.copy()
    lhs[rows] = corner[rows]
    witness = Realization(
        A=lhs,
        b=problem.b.inf,
        c=realize_s(problem.c, -s_arr),
        D=problem.D.inf,
    )
    return value, x_star, witness


@dataclass(frozen=True)
class CharacterizationValues:
    """Four reformulations of the worst case over the basic rows.

    All four use the objective ``mid(c) @ x - rad(c) @ |x|`` and the
    row map ``mid(A)_B x + (rad(A) - inf(D))_B |x|`` against
    ``inf(b)_B``: minimized where the rows are held at least at the
    bound, maximized where they are held at most at it, and both
    optima on the boundary where they hold with equality.  Under
    nondegenerate stability all four coincide with the worst case
    value.
    """

    min_at_least: float
    max_at_most: float
    max_at_equality: float
    min_at_equality: float


def bstable_characterizations(
    problem: AvlpProblem,
    basis,
    cap: int = DEFAULT_ORTHANT_CAP,
    tol: float = DEFAULT_TOL,
) -> CharacterizationValues:
    """Solve all four basic-row programs and report their values."""
    rows = _basis_rows(basis, problem)
    lhs = problem.A.mid[rows]
    relief = (problem.A.rad - problem.D.inf)[rows]
    bound = problem.b.inf[rows]
    p = problem.c.mid
    q = -problem.c.rad

    over = GenAvlpProgram(p, q, lhs, relief, bound)
    min_at_least = -solve_gen_avlp(min_form(over), tol=tol, orthant_cap=cap).value
    max_at_most = solve_gen_avlp(over, tol=tol, orthant_cap=cap).value

    boundary = GenAvlpProgram(
        p,
        q,
        np.vstack([lhs, -lhs]),
        np.vstack([relief, -relief]),
        np.concatenate([bound, -bound]),
    )
    max_at_equality = solve_gen_avlp(boundary, tol=tol, orthant_cap=cap).value
    min_at_equality = solve_gen_avlp(
        boundary, tol=tol, orthant_cap=cap, minimize=True
    ).value
    return CharacterizationValues(
        min_at_least=min_at_least,
        max_at_most=max_at_most,
        max_at_equality=max_at_equality,
        min_at_equality=min_at_equality,
    )


__all__ = [
    "NONDEGENERACY_MARGIN",
    "Basis",
    "CertificateStatus",
    "StabilityCertificate",
    "GaveSystem",
    "verify_b_stability",
    "best_case_bstable",
    "solve_gave",
    "worst_case_bstable",
    "CharacterizationValues",
    "bstable_characterizations",
]
