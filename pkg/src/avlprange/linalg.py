"""Square solves, verified interval-system enclosures, and orthant
vertex enumeration.

The enclosure routine covers the united solution set of ``M x = b``
for a square interval matrix and interval right side.  It preconditions
with the inverse midpoint, builds an initial box from norm bounds on
the preconditioned residual, intersects it with the Hansen-Bliek-Rohn
bound of the preconditioned system, then tightens the box with interval
Gauss-Seidel sweeps.  It refuses to answer when regularity could not be
verified or when the preconditioned system does not contract; it never
returns an unverified box.

``hull_vertices_orthant`` enumerates the corner solutions of a regular
interval system restricted to one orthant.  Inside a fixed orthant the
solution set's extreme points are taken at endpoint matrices, which is
what the 2**n corner sweep visits.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionError,
    NumericalError,
    OrthantEscapeError,
    SingularMatrixError,
    UnknownRegularityError,
)
from .intervals import (
    DEFAULT_TOL,
    IntervalMatrix,
    IntervalVector,
    SignVector,
    beeck_regular,
    realize_rs,
    rex_rohn_regular,
)

#: A pivot below this fraction of the matrix norm counts as singular.
PIVOT_RTOL = 1e-12

#: Residual contract for square solves, relative to the natural scale.
RESIDUAL_RTOL = 1e-8

#: Points closer than this in the max norm are duplicates in
#: hull_vertices_orthant.
DEDUP_TOL = 1e-7

_GS_IMPROVEMENT = 1e-10
_GS_MAX_SWEEPS = 100


@dataclass(frozen=True)
class LuFactorization:
    """LU factors of a square matrix with partial pivoting.

    Wraps the packed LAPACK representation; ``solve`` and
    ``solve_transpose`` reuse the factorization for repeated right
    sides.
    """

    lu: np.ndarray
    piv: np.ndarray
    norm: float

    @classmethod
    def factor(cls, matrix) -> "LuFactorization":
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError(f"LU factorization needs a square matrix, got {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise SingularMatrixError("matrix contains non-finite entries")
        norm = float(np.max(np.sum(np.abs(matrix), axis=1))) if matrix.size else 0.0
        try:
            with warnings.catch_warnings():
                # exact zero pivots are diagnosed below with a typed error
                warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
                lu, piv = scipy.linalg.lu_factor(matrix, check_finite=False)
        except (ValueError, scipy.linalg.LinAlgError) as exc:
            raise SingularMatrixError(f"LU factorization failed: {exc}") from exc
        pivot_floor = PIVOT_RTOL * max(norm, 1.0)
        if np.min(np.abs(np.diag(lu))) < pivot_floor:
            raise SingularMatrixError(
                f"pivot below {pivot_floor:.3e}; matrix is singular to working precision"
            )
        return cls(lu, piv, norm)

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    def solve(self, rhs) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=float)
        return scipy.linalg.lu_solve((self.lu, self.piv), rhs, check_finite=False)

    def solve_transpose(self, rhs) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=float)
        return scipy.linalg.lu_solve((self.lu, self.piv), rhs, trans=1, check_finite=False)

    def reconstruction_error(self, matrix) -> float:
        """Max-norm error of rebuilding the permuted matrix from L and U."""
        matrix = np.asarray(matrix, dtype=float)
        n = self.n
        lower = np.tril(self.lu, -1) + np.eye(n)
        upper = np.triu(self.lu)
        perm = np.arange(n)
        for i, p in enumerate(self.piv):
            perm[i], perm[p] = perm[p], perm[i]
        return float(np.max(np.abs(matrix[perm] - lower @ upper))) if n else 0.0


def solve_square(matrix, rhs) -> np.ndarray:
    """Solve a square real system with partial pivoting.

    Raises ``SingularMatrixError`` on tiny pivots and
    ``NumericalError`` when the residual of the computed solution is
    out of contract.
    """
    matrix = np.asarray(matrix, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    fact = LuFactorization.factor(matrix)
    if rhs.shape[0] != fact.n:
        raise DimensionError(f"right side has length {rhs.shape[0]}, expected {fact.n}")
    x = fact.solve(rhs)
    scale = fact.norm * float(np.max(np.abs(x), initial=0.0)) + float(
        np.max(np.abs(rhs), initial=0.0)
    )
    residual = float(np.max(np.abs(matrix @ x - rhs), initial=0.0))
    if residual > RESIDUAL_RTOL * max(scale, 1.0):
        raise NumericalError(
            f"square solve residual {residual:.3e} exceeds contract for scale {scale:.3e}"
        )
    return x


def _interval_mul(al, au, bl, bu):
    p1 = al * bl
    p2 = al * bu
    p3 = au * bl
    p4 = au * bu
    return (
        np.minimum(np.minimum(p1, p2), np.minimum(p3, p4)),
        np.maximum(np.maximum(p1, p2), np.maximum(p3, p4)),
    )


def _interval_div(al, au, bl, bu):
    # requires 0 outside [bl, bu]
    q1 = al / bl
    q2 = al / bu
    q3 = au / bl
    q4 = au / bu
    return (min(q1, q2, q3, q4), max(q1, q2, q3, q4))


def _hansen_bliek_rohn(a_lo, a_hi, b_lo, b_hi):
    """Solution-set bound for a preconditioned system, or None.

    Works on the comparison system: mignitude on the diagonal,
    negated magnitudes off it.  Valid whenever the comparison matrix
    has a nonnegative inverse, which the caller's contraction gate
    makes the common case; returns None instead of guessing when the
    assumptions fail numerically.
    """
    n = a_lo.shape[0]
    diag_lo = np.diag(a_lo)
    if np.min(diag_lo) <= 0.0:
        return None
    comp = -np.maximum(np.abs(a_lo), np.abs(a_hi))
    np.fill_diagonal(comp, diag_lo)
    try:
        inv_comp = LuFactorization.factor(comp).solve(np.eye(n))
    except (SingularMatrixError, NumericalError):
        return None
    if np.min(inv_comp) < -1e-12:
        return None
    mag_b = np.maximum(np.abs(b_lo), np.abs(b_hi))
    u = inv_comp @ mag_b
    d = np.diag(inv_comp)
    if np.min(d) <= 0.0:
        return None
    alpha = np.maximum(diag_lo - 1.0 / d, 0.0)
    beta = np.maximum(u / d - mag_b, 0.0)
    lo = np.empty(n)
    hi = np.empty(n)
    for i in range(n):
        den_lo = a_lo[i, i] - alpha[i]
        den_hi = a_hi[i, i] + alpha[i]
        if den_lo <= 0.0:
            return None
        lo[i], hi[i] = _interval_div(b_lo[i] - beta[i], b_hi[i] + beta[i], den_lo, den_hi)
    return lo, hi


def enclose_interval_solution(
    matrix: IntervalMatrix,
    rhs: IntervalVector,
    tol: float = DEFAULT_TOL,
) -> IntervalVector:
    """Box containing every solution of every member system ``M' x = b'``.

    Requires one of the sufficient regularity tests to pass.  The box is
    built by midpoint-inverse preconditioning, a norm-bound initial
    enclosure intersected with the Hansen-Bliek-Rohn bound, and interval
    Gauss-Seidel refinement (stops once the largest width improvement
    drops below 1e-10 or after 100 sweeps).
    """
    m, n = matrix.shape
    if m != n:
        raise DimensionError(f"enclosure needs a square system, got {matrix.shape}")
    if len(rhs) != n:
        raise DimensionError(f"right side has length {len(rhs)}, expected {n}")
    check = beeck_regular(matrix)
    if not check.verified:
        check = rex_rohn_regular(matrix)
    if not check.verified:
        raise UnknownRegularityError(
            "unknown-regularity: neither sufficient condition verified the matrix"
        )

    inv_mid = np.linalg.inv(matrix.mid)
    pre_mid = inv_mid @ matrix.mid
    pre_rad = np.abs(inv_mid) @ matrix.rad
    rhs_mid = inv_mid @ rhs.mid
    rhs_rad = np.abs(inv_mid) @ rhs.rad

    # distance of the preconditioned family from the identity
    gap = np.abs(np.eye(n) - pre_mid) + pre_rad
    rho = float(np.max(np.abs(np.linalg.eigvals(gap))))
    if rho > 1.0 - 1e-9:
        raise NumericalError(
            f"preconditioned system does not contract (statistic {rho:.6f}); "
            "cannot produce a verified enclosure"
        )

    x_tilde = solve_square(matrix.mid, rhs.mid)
    res_mid = rhs_mid - pre_mid @ x_tilde
    res_mag = np.abs(res_mid) + rhs_rad + pre_rad @ np.abs(x_tilde)
    gap_norm = float(np.max(np.sum(gap, axis=1)))
    if gap_norm < 1.0:
        radius = np.full(n, float(np.max(res_mag)) / (1.0 - gap_norm))
    else:
        radius = np.linalg.solve(np.eye(n) - gap, res_mag)
    radius = np.maximum(radius, 0.0) + tol
    lo = x_tilde - radius
    hi = x_tilde + radius

    a_lo = pre_mid - pre_rad
    a_hi = pre_mid + pre_rad
    b_lo = rhs_mid - rhs_rad
    b_hi = rhs_mid + rhs_rad
    bound = _hansen_bliek_rohn(a_lo, a_hi, b_lo, b_hi)
    if bound is not None:
        lo = np.maximum(lo, bound[0])
        hi = np.minimum(hi, bound[1])
        crossing = lo > hi
        if np.any(crossing):
            if np.max(lo - hi) > 1e-10 * max(1.0, float(np.max(np.abs(lo)))):
                raise NumericalError(
                    "enclosure intersection emptied; inconsistent bounds"
                )
            mid_fix = 0.5 * (lo + hi)
            lo[crossing] = mid_fix[crossing]
            hi[crossing] = mid_fix[crossing]
    for _ in range(_GS_MAX_SWEEPS):
        best_gain = 0.0
        for i in range(n):
            pl, ph = _interval_mul(a_lo[i], a_hi[i], lo, hi)
            pl[i] = 0.0
            ph[i] = 0.0
            num_lo = b_lo[i] - ph.sum()
            num_hi = b_hi[i] - pl.sum()
            if a_lo[i, i] <= 0.0 <= a_hi[i, i]:
                continue  # cannot divide; leave the row to other sweeps
            q_lo, q_hi = _interval_div(num_lo, num_hi, a_lo[i, i], a_hi[i, i])
            new_lo = max(lo[i], q_lo)
            new_hi = min(hi[i], q_hi)
            if new_lo > new_hi:
                if new_lo - new_hi > 1e-10 * max(1.0, abs(new_lo)):
                    raise NumericalError(
                        "Gauss-Seidel intersection emptied; inconsistent enclosure state"
                    )
                new_lo = new_hi = 0.5 * (new_lo + new_hi)
            best_gain = max(best_gain, (hi[i] - lo[i]) - (new_hi - new_lo))
            lo[i] = new_lo
            hi[i] = new_hi
        if best_gain < _GS_IMPROVEMENT:
            break
    return IntervalVector(lo, hi)


def hull_vertices_orthant(
    matrix: IntervalMatrix,
    rhs,
    s: SignVector,
    tol: float = DEFAULT_TOL,
) -> list[np.ndarray]:
    """Corner solutions of a regular interval system within orthant ``s``.

    Solves the 2**n endpoint systems selected by row signs ``r`` and
    returns the deduplicated solution list (first occurrence kept,
    duplicates closer than 1e-7 in the max norm dropped).  Every
    solution must satisfy ``diag(s) x >= 0``; a corner that escapes the
    orthant invalidates the construction and raises
    ``OrthantEscapeError``.
    """
    m, n = matrix.shape
    if m != n:
        raise DimensionError(f"vertex enumeration needs a square system, got {matrix.shape}")
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (n,):
        raise DimensionError(f"right side has shape {rhs.shape}, expected ({n},)")
    if len(s) != n:
        raise DimensionError(f"sign vector has length {len(s)}, expected {n}")
    check = beeck_regular(matrix)
    if not check.verified:
        check = rex_rohn_regular(matrix)
    if not check.verified:
        raise UnknownRegularityError(
            "unknown-regularity: corner sweep requires a verified regular matrix"
        )
    s_arr = s.as_array()
    points: list[np.ndarray] = []
    for r in itertools.product((-1.0, 1.0), repeat=n):
        corner = realize_rs(matrix, np.array(r), s_arr)
        x = solve_square(corner, rhs)
        if np.any(s_arr * x < -tol):
            raise OrthantEscapeError(
                f"orthant-escape: corner solution {x} leaves orthant {tuple(s)}"
            )
        if all(float(np.max(np.abs(x - p))) > DEDUP_TOL for p in points):
            points.append(x)
    return points
