"""Dense two-phase simplex for inequality-form programs with free
variables.

The primal shape solved here is ``maximize c @ x subject to G x <= g``
(selected rows may be equalities) with no sign restriction on ``x``.
Internally the standard-form dual ``minimize g @ y subject to
G.T y = c, y >= 0`` is solved by a two-phase tableau simplex: phase one
always starts from the all-artificial basis, and every dual basis is a
set of rows of ``G``.  The primal solution is read off the optimal
multipliers, so the reported basis is a row index set ``B`` with
``G[B]`` nonsingular, ``x = G[B]^-1 g[B]`` and ``G[B]^-T c >= 0`` --
the same convention used by the basis-stability machinery.

Pivoting is deterministic: largest-coefficient entering rule with
lowest-index tie breaks, switching to Bland's rule after a run of
``3 * (rows + cols)`` degenerate pivots, and an explicit failure beyond
``50 * (rows + cols)`` iterations.  Unbounded outcomes carry a
certified ray ``d`` with ``G d <= 0`` (``= 0`` on equality rows) and
``c @ d > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionError, InputError, NumericalError, SingularMatrixError
from .intervals import DEFAULT_TOL
from .linalg import LuFactorization

_PIVOT_FLOOR = 1e-10


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class BasisOptimality(str, Enum):
    OPTIMAL = "optimal"
    OPTIMAL_NONDEGENERATE = "optimal_nondegenerate"
    NOT_OPTIMAL = "not_optimal"


@dataclass(frozen=True)
class LpProblem:
    """``maximize c @ x subject to G x <= g`` with free ``x``.

    ``equalities`` optionally flags rows that must hold with equality.
    """

    c: np.ndarray
    G: np.ndarray
    g: np.ndarray
    equalities: np.ndarray | None = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        G = np.asarray(self.G, dtype=float)
        g = np.asarray(self.g, dtype=float)
        if c.ndim != 1 or G.ndim != 2 or g.ndim != 1:
            raise DimensionError("LpProblem needs c (1-D), G (2-D), g (1-D)")
        if c.shape[0] < 1:
            raise InputError("LpProblem needs at least one variable")
        if G.shape != (g.shape[0], c.shape[0]):
            raise DimensionError(
                f"G shape {G.shape} inconsistent with c ({c.shape[0]}) and g ({g.shape[0]})"
            )
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(G)) and np.all(np.isfinite(g))):
            raise InputError("LpProblem data must be finite")
        eq = self.equalities
        if eq is not None:
            eq = np.asarray(eq, dtype=bool)
            if eq.shape != g.shape:
                raise DimensionError("equalities mask must have one flag per row")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "equalities", eq)

    @property
    def m(self) -> int:
        return self.G.shape[0]

    @property
    def n(self) -> int:
        return self.G.shape[1]


@dataclass(frozen=True)
class LpOutcome:
    """Result of one LP solve.

    For ``OPTIMAL``: ``x``, ``y`` and ``value`` are set, and ``basis``
    is the optimal row index set when a basic optimum exists (full row
    rank at the optimum), else None.  For ``UNBOUNDED``: ``value`` is
    ``+inf``, ``ray`` is a certified improving direction and ``x`` a
    feasible point.  For ``INFEASIBLE``: ``value`` is ``-inf`` and
    ``certificate`` holds Farkas multipliers ``y >= 0`` with
    ``G.T y = 0`` and ``g @ y < 0``.
    """

    status: Status
    value: float
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    basis: tuple[int, ...] | None = None
    ray: np.ndarray | None = None
    certificate: np.ndarray | None = None


@dataclass
class _StdResult:
    status: Status
    z: np.ndarray | None = None
    basis: list[int] | None = None
    multipliers: np.ndarray | None = None
    value: float = np.nan
    farkas: np.ndarray | None = None
    ray: np.ndarray | None = None
    dropped: int = 0


def _solve_standard(A: np.ndarray, b: np.ndarray, c: np.ndarray, tol: float) -> _StdResult:
    """Two-phase tableau simplex on ``min c @ z, A z = b, z >= 0``."""
    k, ncols_orig = A.shape
    sign = np.where(b < 0, -1.0, 1.0)
    a1 = A * sign[:, None]
    b1 = b * sign

    width = ncols_orig + k
    T = np.zeros((k + 1, width + 1))
    T[:k, :ncols_orig] = a1
    rows_idx = np.arange(k)
    T[rows_idx, ncols_orig + rows_idx] = 1.0
    T[:k, -1] = b1
    basis = list(range(ncols_orig, width))
    active = np.ones(k, dtype=bool)

    limit = 50 * (k + ncols_orig) + 20
    bland_after = 3 * (k + ncols_orig)

    def run_phase() -> int | None:
        """Pivot to optimality; returns the entering column on an
        unbounded direction, else None."""
        degenerate = 0
        for _ in range(limit):
            rc = T[k, :ncols_orig]
            if degenerate <= bland_after:
                # most negative reduced cost, lowest index on ties
                j = int(np.argmin(rc))
                if rc[j] >= -tol:
                    return None
            else:
                j = int(np.argmax(rc < -tol))  # Bland: first eligible
                if rc[j] >= -tol:
                    return None
            col = T[:k, j]
            rhs_col = T[:k, -1]
            theta = None
            for i in range(k):
                if active[i] and col[i] > _PIVOT_FLOOR:
                    t = rhs_col[i] / col[i]
                    if theta is None or t < theta:
                        theta = t
            if theta is None:
                return j
            cutoff = theta + 1e-12 * (1.0 + abs(theta))
            r = -1
            label = width
            for i in range(k):
                if active[i] and col[i] > _PIVOT_FLOOR:
                    if rhs_col[i] / col[i] <= cutoff and basis[i] < label:
                        r = i
                        label = basis[i]
            degenerate = degenerate + 1 if theta <= tol else 0
            _pivot(T, basis, r, j)
        raise NumericalError("numerical-failure: simplex iteration limit exceeded")

    # phase 1: drive the artificials out
    T[k, :ncols_orig] = -a1.sum(axis=0)
    T[k, -1] = -b1.sum()
    entering = run_phase()
    if entering is not None:  # pragma: no cover - phase 1 is bounded below
        raise NumericalError("numerical-failure: phase one reported unbounded")
    infeas = -T[k, -1]
    feas_tol = 1e-7 * (1.0 + float(np.max(np.abs(b1), initial=0.0)))
    if infeas > feas_tol:
        p = 1.0 - T[k, ncols_orig:width]
        return _StdResult(Status.INFEASIBLE, farkas=sign * p, value=np.inf)

    # remove residual basic artificials; rows that cannot give one up
    # are redundant and drop out of play
    in_basis = set(basis)
    dropped = 0
    for r in range(k):
        if basis[r] < ncols_orig:
            continue
        row = T[r, :ncols_orig]
        pivot_col = -1
        for j in range(ncols_orig):
            if j not in in_basis and abs(row[j]) > 1e-9:
                pivot_col = j
                break
        if pivot_col >= 0:
            in_basis.discard(basis[r])
            _pivot(T, basis, r, pivot_col)
            in_basis.add(pivot_col)
        else:
            active[r] = False
            dropped += 1

    # phase 2 under the real costs
    costrow = np.zeros(width + 1)
    costrow[:ncols_orig] = c
    coeffs = np.array([c[basis[r]] if active[r] else 0.0 for r in range(k)])
    costrow -= coeffs @ T[:k]
    T[k] = costrow
    entering = run_phase()

    if entering is not None:
        j = entering
        ray = np.zeros(ncols_orig)
        ray[j] = 1.0
        for r in range(k):
            if active[r]:
                ray[basis[r]] = -T[r, j]
        return _StdResult(Status.UNBOUNDED, ray=ray, value=-np.inf, dropped=dropped)

    z = np.zeros(ncols_orig)
    for r in range(k):
        if active[r]:
            z[basis[r]] = T[r, -1]
    small = np.abs(z) < 1e2 * tol
    z[small] = np.maximum(z[small], 0.0)
    p = np.where(active, -T[k, ncols_orig:width], 0.0)
    return _StdResult(
        Status.OPTIMAL,
        z=z,
        basis=[basis[r] for r in range(k) if active[r]],
        multipliers=sign * p,
        value=float(c @ z),
        dropped=dropped,
    )


def _pivot(T: np.ndarray, basis: list[int], r: int, j: int) -> None:
    T[r] /= T[r, j]
    colvals = T[:, j].copy()
    colvals[r] = 0.0
    T -= colvals[:, None] * T[r]
    T[:, j] = 0.0
    T[r, j] = 1.0
    basis[r] = j


@dataclass
class _Core:
    status: Status
    value: float
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    basis: tuple[int, ...] | None = None
    ray: np.ndarray | None = None
    certificate: np.ndarray | None = None


def _solve_inequality(
    G: np.ndarray,
    g: np.ndarray,
    c: np.ndarray,
    equalities: np.ndarray | None,
    tol: float,
) -> _Core:
    """Internal fast path for ``max c @ x, G x <= g`` (rows flagged in
    ``equalities`` hold with equality).  No input validation."""
    m, n = G.shape
    if equalities is not None and equalities.any():
        col_blocks = [G.T, -G.T[:, equalities]]
        dual = np.concatenate(col_blocks, axis=1)
        cost = np.concatenate([g, -g[equalities]])
        colrow = np.concatenate([np.arange(m), np.nonzero(equalities)[0]])
        colsgn = np.concatenate([np.ones(m), -np.ones(int(equalities.sum()))])
    else:
        # columns map one-to-one onto rows; skip the scatter-adds below
        dual = G.T
        cost = g
        colrow = None
        colsgn = None

    def to_rows(vec: np.ndarray) -> np.ndarray:
        if colrow is None:
            return vec
        out = np.zeros(m)
        np.add.at(out, colrow, vec * colsgn)
        return out

    res = _solve_standard(dual, c, cost, tol)
    if res.status is Status.OPTIMAL:
        x = res.multipliers
        y = to_rows(res.z)
        if colrow is None:
            rows = sorted(int(j) for j in res.basis)
        else:
            rows = sorted({int(colrow[j]) for j in res.basis})
        basis = tuple(rows) if (len(rows) == n and res.dropped == 0) else None
        return _Core(Status.OPTIMAL, float(c @ x), x=x, y=y, basis=basis)
    if res.status is Status.UNBOUNDED:
        # dual unbounded below: the primal is infeasible
        return _Core(Status.INFEASIBLE, -np.inf, certificate=to_rows(res.ray))

    # dual infeasible: primal is unbounded if feasible, infeasible otherwise
    direction = res.farkas
    feas = _solve_standard(dual, np.zeros(n), cost, tol)
    if feas.status is Status.OPTIMAL:
        scale = float(np.max(np.abs(direction), initial=0.0))
        ray = direction / scale if scale > 0 else direction
        return _Core(Status.UNBOUNDED, np.inf, x=feas.multipliers, ray=ray)
    if feas.status is Status.UNBOUNDED:
        return _Core(Status.INFEASIBLE, -np.inf, certificate=to_rows(feas.ray))
    raise NumericalError("numerical-failure: feasibility probe returned an impossible status")


def solve_lp(problem: LpProblem, tol: float = DEFAULT_TOL) -> LpOutcome:
    """Solve ``maximize c @ x subject to G x <= g`` with free variables.

    Returns status, optimal value (``+-inf`` for unbounded/infeasible),
    primal and dual solutions, the optimal row basis when one exists,
    and a certificate (improving ray or Farkas multipliers) for the
    degenerate statuses.
    """
    core = _solve_inequality(problem.G, problem.g, problem.c, problem.equalities, tol)
    return LpOutcome(
        status=core.status,
        value=core.value,
        x=core.x,
        y=core.y,
        basis=core.basis,
        ray=core.ray,
        certificate=core.certificate,
    )


def check_basis_optimal(G, g, c, basis, tol: float = DEFAULT_TOL) -> BasisOptimality:
    """Classify a row index set as an optimal basis of
    ``max c @ x, G x <= g``.

    The basis ``B`` must select ``n`` distinct rows.  ``B`` is optimal
    when ``x = G[B]^-1 g[B]`` satisfies the nonbasic rows and the basic
    multipliers ``G[B]^-T c`` are nonnegative; it is reported
    nondegenerate when the multipliers are strictly positive beyond the
    tolerance.  Raises ``SingularMatrixError`` when ``G[B]`` cannot be
    factored.
    """
    G = np.asarray(G, dtype=float)
    g = np.asarray(g, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = G.shape
    rows = tuple(int(i) for i in basis)
    if len(rows) != n or len(set(rows)) != n:
        raise InputError(f"basis must name {n} distinct rows, got {rows}")
    if any(i < 0 or i >= m for i in rows):
        raise InputError(f"basis rows out of range for {m} rows: {rows}")
    idx = np.array(rows, dtype=int)
    fact = LuFactorization.factor(G[idx])
    x = fact.solve(g[idx])
    y = fact.solve_transpose(c)
    mask = np.ones(m, dtype=bool)
    mask[idx] = False
    primal_ok = bool(np.all(G[mask] @ x <= g[mask] + tol))
    dual_ok = bool(np.all(y >= -tol))
    if primal_ok and dual_ok:
        if np.all(y > tol):
            return BasisOptimality.OPTIMAL_NONDEGENERATE
        return BasisOptimality.OPTIMAL
    return BasisOptimality.NOT_OPTIMAL


__all__ = [
    "Status",
    "BasisOptimality",
    "LpProblem",
    "LpOutcome",
    "solve_lp",
    "check_basis_optimal",
    "SingularMatrixError",
]
