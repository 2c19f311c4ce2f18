"""Programs that are linear in ``x`` and ``|x|`` jointly.

A generalized program here is

    maximize  linear_cost @ x + abs_cost @ |x|
    subject to  linear_lhs @ x + abs_lhs @ |x| <= rhs

with ``|x|`` taken entrywise.  Restricted to the orthant where
``sign(x) = s`` the absolute value collapses, ``|x| = diag(s) x``, and
the program becomes an ordinary LP.  The solver enumerates all ``2**n``
orthants, solves each restriction, and combines: an unbounded orthant
makes the whole program unbounded, otherwise the best finite orthant
wins, and the program is infeasible only when every orthant is.  Ties
go to the lexicographically smallest sign vector (all-minus first), so
results are deterministic.

The enumeration is exact but exponential, so problems are refused
beyond a configurable variable cap (default 16).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputError, SizeCapError
from .intervals import DEFAULT_TOL, SignVector, all_sign_vectors, sign_of
from .simplex import Status, _solve_inequality

DEFAULT_ORTHANT_CAP = 16


@dataclass(frozen=True)
class GenAvlpProgram:
    """Data of ``max linear_cost @ x + abs_cost @ |x|`` subject to
    ``linear_lhs @ x + abs_lhs @ |x| <= rhs``."""

    linear_cost: np.ndarray
    abs_cost: np.ndarray
    linear_lhs: np.ndarray
    abs_lhs: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.linear_cost, dtype=float)
        q = np.asarray(self.abs_cost, dtype=float)
        G = np.asarray(self.linear_lhs, dtype=float)
        H = np.asarray(self.abs_lhs, dtype=float)
        g = np.asarray(self.rhs, dtype=float)
        if p.ndim != 1 or q.ndim != 1 or g.ndim != 1 or G.ndim != 2 or H.ndim != 2:
            raise DimensionError("cost and rhs vectors must be 1-D, matrices 2-D")
        n = p.shape[0]
        if n < 1:
            raise InputError("program needs at least one variable")
        if q.shape[0] != n:
            raise DimensionError(f"abs_cost has {q.shape[0]} entries, expected {n}")
        m = g.shape[0]
        if G.shape != (m, n) or H.shape != (m, n):
            raise DimensionError(
                f"matrix shapes {G.shape} and {H.shape} inconsistent with "
                f"{m} constraints over {n} variables"
            )
        for arr in (p, q, G, H, g):
            if not np.all(np.isfinite(arr)):
                raise InputError("program data must be finite")
        object.__setattr__(self, "linear_cost", p)
        object.__setattr__(self, "abs_cost", q)
        object.__setattr__(self, "linear_lhs", G)
        object.__setattr__(self, "abs_lhs", H)
        object.__setattr__(self, "rhs", g)

    @property
    def m(self) -> int:
        return self.rhs.shape[0]

    @property
    def n(self) -> int:
        return self.linear_cost.shape[0]


@dataclass(frozen=True)
class OrthantRecord:
    """Outcome of one orthant restriction."""

    orthant: SignVector
    status: Status
    value: float
    optimizer: np.ndarray | None = None


@dataclass(frozen=True)
class SolveOutcome:
    """Combined result over all orthants.

    ``orthant`` is the sign vector of the winning restriction, ``ray``
    an improving direction when unbounded (it stays inside the winning
    orthant's cone), and ``records`` the per-orthant outcomes in
    lexicographic order.
    """

    status: Status
    value: float
    optimizer: np.ndarray | None
    orthant: SignVector | None
    ray: np.ndarray | None
    records: tuple[OrthantRecord, ...]

    @property
    def sign(self) -> SignVector | None:
        """Sign pattern of the optimizer (zeros count as plus).

        This is the sign of the point itself, which on an orthant
        boundary can differ from the label of the orthant that produced
        it, and it is what downstream sign-update rules consume.
        """
        if self.optimizer is None:
            return None
        return sign_of(self.optimizer)

    def active_rows(self, program: GenAvlpProgram, tol: float = DEFAULT_TOL) -> tuple[int, ...]:
        """Indices of constraints tight at the optimizer.

        Requires an optimal outcome; the program must be the one that
        produced it.
        """
        if self.status is not Status.OPTIMAL or self.optimizer is None:
            raise InputError("active rows are defined only for an optimal outcome")
        x = self.optimizer
        lhs = program.linear_lhs @ x + program.abs_lhs @ np.abs(x)
        slack = program.rhs - lhs
        scale = 1.0 + np.abs(program.rhs)
        return tuple(int(i) for i in np.nonzero(slack <= tol * scale)[0])


def solve_gen_avlp(
    program: GenAvlpProgram,
    tol: float = DEFAULT_TOL,
    orthant_cap: int = DEFAULT_ORTHANT_CAP,
    minimize: bool = False,
) -> SolveOutcome:
    """Solve a generalized program by exhaustive orthant decomposition.

    With ``minimize=True`` the objective is minimized instead; the
    infeasible value is then ``+inf`` and the unbounded value ``-inf``.
    Raises ``SizeCapError`` when the variable count exceeds
    ``orthant_cap``.
    """
    n = program.n
    if n > orthant_cap:
        raise SizeCapError(
            f"orthant decomposition over {n} variables needs 2**{n} subproblems, "
            f"cap is {orthant_cap}"
        )
    flip = -1.0 if minimize else 1.0
    p = flip * program.linear_cost
    q = flip * program.abs_cost

    m = program.m
    rhs = np.concatenate([program.rhs, np.zeros(n)])
    lhs = np.zeros((m + n, n))
    diag_idx = np.arange(n)

    records: list[OrthantRecord] = []
    best_core = None
    best_sign: SignVector | None = None
    for s in all_sign_vectors(n):
        s_arr = s.as_array()
        np.multiply(program.abs_lhs, s_arr[None, :], out=lhs[:m])
        lhs[:m] += program.linear_lhs
        lhs[m + diag_idx, diag_idx] = -s_arr
        core = _solve_inequality(lhs, rhs, p + s_arr * q, None, tol)
        records.append(
            OrthantRecord(
                orthant=s,
                status=core.status,
                value=flip * core.value,
                optimizer=core.x if core.status is Status.OPTIMAL else None,
            )
        )
        if core.status is Status.INFEASIBLE:
            continue
        if best_core is None:
            best_core, best_sign = core, s
        elif core.status is Status.UNBOUNDED and best_core.status is not Status.UNBOUNDED:
            best_core, best_sign = core, s
        elif (
            core.status is Status.OPTIMAL
            and best_core.status is Status.OPTIMAL
            and core.value > best_core.value
        ):
            best_core, best_sign = core, s

    if best_core is None:
        return SolveOutcome(
            status=Status.INFEASIBLE,
            value=-flip * np.inf,
            optimizer=None,
            orthant=None,
            ray=None,
            records=tuple(records),
        )
    return SolveOutcome(
        status=best_core.status,
        value=flip * best_core.value,
        optimizer=best_core.x,
        orthant=best_sign,
        ray=best_core.ray,
        records=tuple(records),
    )


def from_realization(
    lhs: np.ndarray,
    rhs: np.ndarray,
    cost: np.ndarray,
    relief: np.ndarray,
) -> GenAvlpProgram:
    """Embed point data ``max cost @ x, lhs @ x - relief @ |x| <= rhs``.

    ``relief`` scales the slack each constraint gains from ``|x|`` and
    must be entrywise nonnegative; a negative entry is rejected.
    """
    relief = np.asarray(relief, dtype=float)
    bad = np.argwhere(relief < 0)
    if bad.size:
        i, j = bad[0]
        raise InputError(
            f"relief matrix must be nonnegative, entry ({i + 1},{j + 1}) is {relief[i, j]}"
        )
    n = np.asarray(cost, dtype=float).shape[0] if np.ndim(cost) else 1
    return GenAvlpProgram(
        linear_cost=cost,
        abs_cost=np.zeros(n),
        linear_lhs=lhs,
        abs_lhs=-relief,
        rhs=rhs,
    )


def min_form(program: GenAvlpProgram) -> GenAvlpProgram:
    """Convert a minimize-with->=-rows program to maximize-with-<= form.

    Interpret the input container as ``min linear_cost @ x +
    abs_cost @ |x|`` subject to ``linear_lhs @ x + abs_lhs @ |x| >=
    rhs``.  Negating the objective and every row gives an equivalent
    maximize form; the minimum sought equals minus the converted
    program's maximum.  Applying the conversion twice returns the
    original data.
    """
    return GenAvlpProgram(
        linear_cost=-program.linear_cost,
        abs_cost=-program.abs_cost,
        linear_lhs=-program.linear_lhs,
        abs_lhs=-program.abs_lhs,
        rhs=-program.rhs,
    )


__all__ = [
    "DEFAULT_ORTHANT_CAP",
    "GenAvlpProgram",
    "OrthantRecord",
    "SolveOutcome",
    "solve_gen_avlp",
    "from_realization",
    "min_form",
]
