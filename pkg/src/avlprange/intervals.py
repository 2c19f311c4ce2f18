"""Interval vectors and matrices with midpoint/radius views.

An interval quantity is the box ``[inf, sup]`` taken entrywise and
inclusive at both ends.  Storage is the endpoint pair; midpoint and
radius are computed on demand.  Degenerate intervals (``inf == sup``)
are ordinary real data and everything here treats them as such.

Two structured selections of members come up again and again:

* ``realize_rs(M, r, s)`` picks the member ``mid - diag(r) @ rad @ diag(s)``
  for row/column selectors with entries in ``[-1, 1]``; at ``+-1``
  selectors this lands exactly on endpoint corners.
* ``realize_s(c, s)`` picks ``mid + diag(s) @ rad`` from an interval
  vector.

Sign conventions: the sign of zero is ``+1`` everywhere in this package.

Membership of a point in the solution set of an interval linear system
is decided by the Oettli-Prager inequality, and two classical sufficient
regularity tests (spectral-radius and singular-value based) are provided
for square interval matrices.  Both tests only ever answer "verified" or
"unknown"; they never claim singularity.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputError

#: Global absolute comparison tolerance. Containment and feasibility
#: checks use this value unless a caller overrides it.
DEFAULT_TOL = 1e-9

#: A strict inequality backing a regularity claim must hold with at
#: least this margin before the claim is reported as verified.
REGULARITY_MARGIN = 1e-9


def _as_float_array(value, ndim: int, what: str) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.ndim != ndim:
        raise DimensionError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise InputError(f"{what} must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{what} must contain only finite values")
    return arr


def _check_bounds(inf: np.ndarray, sup: np.ndarray, what: str) -> None:
    if inf.shape != sup.shape:
        raise DimensionError(
            f"{what}: inf shape {inf.shape} does not match sup shape {sup.shape}"
        )
    bad = inf > sup
    if np.any(bad):
        where = tuple(int(i) + 1 for i in np.argwhere(bad)[0])
        raise InputError(f"{what}: inf exceeds sup at entry {where}")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class IntervalVector:
    """Entrywise interval vector ``[inf, sup]``."""

    inf: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        inf = _as_float_array(self.inf, 1, "interval vector inf")
        sup = _as_float_array(self.sup, 1, "interval vector sup")
        _check_bounds(inf, sup, "interval vector")
        object.__setattr__(self, "inf", _freeze(inf))
        object.__setattr__(self, "sup", _freeze(sup))

    @classmethod
    def from_midrad(cls, mid, rad) -> "IntervalVector":
        mid = _as_float_array(mid, 1, "interval vector mid")
        rad = _as_float_array(rad, 1, "interval vector rad")
        if mid.shape != rad.shape:
            raise DimensionError("mid and rad shapes differ")
        if np.any(rad < 0):
            raise InputError("interval radius must be nonnegative")
        return cls(mid - rad, mid + rad)

    @classmethod
    def from_point(cls, values) -> "IntervalVector":
        values = _as_float_array(values, 1, "vector")
        return cls(values, values)

    def __len__(self) -> int:
        return self.inf.shape[0]

    @property
    def shape(self) -> tuple[int, ...]:
        return self.inf.shape

    @property
    def mid(self) -> np.ndarray:
        return 0.5 * (self.inf + self.sup)

    @property
    def rad(self) -> np.ndarray:
        return 0.5 * (self.sup - self.inf)

    @property
    def width(self) -> np.ndarray:
        return self.sup - self.inf

    def take(self, indices) -> "IntervalVector":
        idx = np.asarray(indices, dtype=int)
        return IntervalVector(self.inf[idx], self.sup[idx])

    def contains(self, point, tol: float = DEFAULT_TOL) -> bool:
        point = _as_float_array(point, 1, "point")
        if point.shape != self.shape:
            raise DimensionError("point shape does not match interval vector")
        return bool(np.all(point >= self.inf - tol) and np.all(point <= self.sup + tol))

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """Uniformly sampled member; degenerate entries stay put."""
        return self.inf + rng.random(self.shape) * (self.sup - self.inf)


@dataclass(frozen=True)
class IntervalMatrix:
    """Entrywise interval matrix ``[inf, sup]``."""

    inf: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        inf = _as_float_array(self.inf, 2, "interval matrix inf")
        sup = _as_float_array(self.sup, 2, "interval matrix sup")
        _check_bounds(inf, sup, "interval matrix")
        object.__setattr__(self, "inf", _freeze(inf))
        object.__setattr__(self, "sup", _freeze(sup))

    @classmethod
    def from_midrad(cls, mid, rad) -> "IntervalMatrix":
        mid = _as_float_array(mid, 2, "interval matrix mid")
        rad = _as_float_array(rad, 2, "interval matrix rad")
        if mid.shape != rad.shape:
            raise DimensionError("mid and rad shapes differ")
        if np.any(rad < 0):
            raise InputError("interval radius must be nonnegative")
        return cls(mid - rad, mid + rad)

    @classmethod
    def from_point(cls, values) -> "IntervalMatrix":
        values = _as_float_array(values, 2, "matrix")
        return cls(values, values)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.inf.shape

    @property
    def mid(self) -> np.ndarray:
        return 0.5 * (self.inf + self.sup)

    @property
    def rad(self) -> np.ndarray:
        return 0.5 * (self.sup - self.inf)

    @property
    def width(self) -> np.ndarray:
        return self.sup - self.inf

    def take_rows(self, indices) -> "IntervalMatrix":
        idx = np.asarray(indices, dtype=int)
        return IntervalMatrix(self.inf[idx, :], self.sup[idx, :])

    def transpose(self) -> "IntervalMatrix":
        return IntervalMatrix(self.inf.T, self.sup.T)

    @property
    def T(self) -> "IntervalMatrix":
        return self.transpose()

    def contains(self, matrix, tol: float = DEFAULT_TOL) -> bool:
        matrix = _as_float_array(matrix, 2, "matrix")
        if matrix.shape != self.shape:
            raise DimensionError("matrix shape does not match interval matrix")
        return bool(
            np.all(matrix >= self.inf - tol) and np.all(matrix <= self.sup + tol)
        )

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return self.inf + rng.random(self.shape) * (self.sup - self.inf)


@dataclass(frozen=True, order=True)
class SignVector:
    """Vector with entries in ``{-1, +1}``.

    Instances order lexicographically entry by entry (so ``(-1, +1)``
    sorts before ``(+1, -1)``), are hashable, and convert to float
    arrays for arithmetic.
    """

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        if not entries:
            raise InputError("sign vector must be nonempty")
        if any(e not in (-1, 1) for e in entries):
            raise InputError(f"sign vector entries must be -1 or +1, got {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_point(cls, x) -> "SignVector":
        """Signs of a real vector with sign(0) = +1."""
        x = _as_float_array(x, 1, "point")
        return cls(tuple(1 if v >= 0 else -1 for v in x))

    @classmethod
    def ones(cls, n: int) -> "SignVector":
        return cls((1,) * n)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def negate(self) -> "SignVector":
        return SignVector(tuple(-e for e in self.entries))


def sign_of(x) -> SignVector:
    """Sign pattern of a real vector under the sign(0) = +1 convention."""
    return SignVector.from_point(x)


def _make_sign_vectors(n: int) -> tuple["SignVector", ...]:
    out = []
    for k in range(2**n):
        bits = [(k >> (n - 1 - i)) & 1 for i in range(n)]
        out.append(SignVector(tuple(-1 if b == 0 else 1 for b in bits)))
    return tuple(out)


# memoized for small n where repeated enumeration dominates the cost
_sign_vectors_cached = functools.lru_cache(maxsize=10)(_make_sign_vectors)


def all_sign_vectors(n: int):
    """All 2**n sign vectors of length n in lexicographic order
    (all-minus first, all-plus last)."""
    if n < 1:
        raise InputError("sign vector length must be at least 1")
    if n <= 10:
        return list(_sign_vectors_cached(n))
    return list(_make_sign_vectors(n))


def _coerce_selector(value, length: int, what: str) -> np.ndarray:
    if isinstance(value, SignVector):
        arr = value.as_array()
    else:
        arr = _as_float_array(value, 1, what)
    if arr.shape[0] != length:
        raise DimensionError(f"{what} must have length {length}, got {arr.shape[0]}")
    if np.any(np.abs(arr) > 1.0 + 1e-12):
        raise InputError(f"{what} entries must lie in [-1, 1]")
    return arr


def realize_rs(matrix: IntervalMatrix, r, s) -> np.ndarray:
    """Member ``mid - diag(r) @ rad @ diag(s)`` of an interval matrix.

    ``r`` selects per row, ``s`` per column; entries must lie in
    ``[-1, 1]``.  Computed as a convex combination of the endpoint
    arrays so that ``+-1`` selectors reproduce ``inf``/``sup`` exactly.
    """
    r = _coerce_selector(r, matrix.shape[0], "row selector")
    s = _coerce_selector(s, matrix.shape[1], "column selector")
    # mid - t*rad with t = r_i s_j equals ((1+t)inf + (1-t)sup) / 2
    w = 0.5 * (1.0 + np.outer(r, s))
    return w * matrix.inf + (1.0 - w) * matrix.sup


def realize_s(vector: IntervalVector, s) -> np.ndarray:
    """Member ``mid + diag(s) @ rad`` of an interval vector."""
    s = _coerce_selector(s, len(vector), "sign selector")
    w = 0.5 * (1.0 - s)
    return w * vector.inf + (1.0 - w) * vector.sup


@dataclass(frozen=True)
class RegularityCheck:
    """Outcome of a sufficient regularity test.

    ``statistic`` is the quantity that must stay strictly below 1 for
    the test to certify regularity; ``verified`` is False whenever the
    margin is not met, the midpoint is singular, or the statistic could
    not be computed.  A False answer carries no information about actual
    singularity.
    """

    condition: str
    verified: bool
    statistic: float
    reason: str | None = None


def _require_square(matrix: IntervalMatrix) -> int:
    m, n = matrix.shape
    if m != n:
        raise DimensionError(f"regularity checks need a square matrix, got {matrix.shape}")
    return n


def beeck_regular(matrix: IntervalMatrix) -> RegularityCheck:
    """Spectral-radius sufficient regularity test.

    Verifies regularity when ``rho(|mid^-1| @ rad) < 1`` holds with
    margin.  Returns unknown when the midpoint cannot be inverted.
    """
    _require_square(matrix)
    try:
        inv_mid = np.linalg.inv(matrix.mid)
    except np.linalg.LinAlgError:
        return RegularityCheck("beeck", False, np.inf, "midpoint-singular")
    iteration = np.abs(inv_mid) @ matrix.rad
    rho = float(np.max(np.abs(np.linalg.eigvals(iteration)))) if iteration.size else 0.0
    if not np.isfinite(rho):
        return RegularityCheck("beeck", False, np.inf, "spectral-radius-overflow")
    return RegularityCheck("beeck", rho <= 1.0 - REGULARITY_MARGIN, rho)


def rex_rohn_regular(matrix: IntervalMatrix) -> RegularityCheck:
    """Singular-value sufficient regularity test.

    Verifies regularity when the largest singular value of the radius
    stays below the smallest singular value of the midpoint, again with
    margin.  The statistic reported is the ratio of the two.
    """
    _require_square(matrix)
    sigma_rad = float(np.linalg.svd(matrix.rad, compute_uv=False)[0])
    sigma_mid = float(np.linalg.svd(matrix.mid, compute_uv=False)[-1])
    if sigma_mid <= 0.0:
        return RegularityCheck("rex-rohn", False, np.inf, "midpoint-singular")
    ratio = sigma_rad / sigma_mid
    return RegularityCheck("rex-rohn", ratio <= 1.0 - REGULARITY_MARGIN, ratio)


def oettli_prager_member(
    matrix: IntervalMatrix,
    rhs: IntervalVector,
    x,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Whether ``x`` solves ``M' x = b'`` for some member pair.

    Uses the Oettli-Prager inequality
    ``|mid(M) x - mid(b)| <= rad(M) |x| + rad(b)`` rowwise within an
    absolute tolerance.
    """
    x = _as_float_array(x, 1, "point")
    m, n = matrix.shape
    if x.shape[0] != n:
        raise DimensionError(f"point has length {x.shape[0]}, expected {n}")
    if len(rhs) != m:
        raise DimensionError(f"right side has length {len(rhs)}, expected {m}")
    lhs = np.abs(matrix.mid @ x - rhs.mid)
    bound = matrix.rad @ np.abs(x) + rhs.rad
    return bool(np.all(lhs <= bound + tol))


def interval_matvec(matrix: IntervalMatrix, x: IntervalVector) -> IntervalVector:
    """Interval-arithmetic product of an interval matrix with an
    interval vector (entrywise products, rowwise sums)."""
    m, n = matrix.shape
    if len(x) != n:
        raise DimensionError(f"vector has length {len(x)}, expected {n}")
    p1 = matrix.inf * x.inf[None, :]
    p2 = matrix.inf * x.sup[None, :]
    p3 = matrix.sup * x.inf[None, :]
    p4 = matrix.sup * x.sup[None, :]
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4)).sum(axis=1)
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4)).sum(axis=1)
    return IntervalVector(lo, hi)
