"""Low-level linear algebra: determinants, adjugates, minor scans and ball volumes.

Two arithmetic paths exist. Integer and :class:`fractions.Fraction` input is
handled exactly with fraction-free (Bareiss) elimination; floating point input
goes through LAPACK's partially pivoted LU factorisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational

import numpy as np

from .errors import RankDeficient, SizeTooLarge, ZeroRow

EPS_ZERO = 1e-12
DEFAULT_MINOR_BUDGET = 10**7

# entries of one batched determinant call
_CHUNK_ENTRIES = 1 << 21


@dataclass(frozen=True)
class BallGeometry:
    dimension: int
    volume: float


def is_exact(M) -> bool:
    """True if every entry of ``M`` is an int or a Fraction (not a float)."""
    if isinstance(M, np.ndarray) and M.dtype != object:
        return np.issubdtype(M.dtype, np.integer)
    return all(
        isinstance(x, Rational) and not isinstance(x, (bool, np.bool_))
        for row in M
        for x in row
    )


def _as_exact_rows(M):
    return [[Fraction(int(x)) if isinstance(x, np.integer) else Fraction(x) for x in row]
            for row in M]


def bareiss_determinant(M) -> Fraction:
    """Exact determinant by fraction-free elimination.

    Integer input stays integral throughout; every division is exact.
    """
    a = _as_exact_rows(M)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) / prev
        prev = akk
    return sign * a[n - 1][n - 1]


def determinant(M):
    """Determinant of a square matrix.

    Returns a :class:`Fraction` for exact input and a float otherwise.
    """
    if is_exact(M):
        return bareiss_determinant(M)
    arr = np.asarray(M, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix is not square")
    if arr.shape[0] == 0:
        return 1.0
    return float(np.linalg.det(arr))


def _drop_one(n):
    # index lists with one position removed, one per position
    return [[r for r in range(n) if r != i] for i in range(n)]


def adjugate(M):
    """Adjugate (classical adjoint) of a square matrix, ``n >= 2``.

    Column ``k`` holds the cofactors of row ``k``, so ``M @ adj(M) == det(M) * I``.
    """
    if is_exact(M):
        a = _as_exact_rows(M)
        n = len(a)
        if n < 2:
            raise ValueError("adjugate needs n >= 2")
        keep = _drop_one(n)
        adj = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [[a[r][c] for c in keep[j]] for r in keep[i]]
                adj[j][i] = (-1) ** (i + j) * bareiss_determinant(minor)
        return adj
    arr = np.asarray(M, dtype=float)
    n = arr.shape[0]
    if arr.ndim != 2 or arr.shape[1] != n:
        raise ValueError("matrix is not square")
    if n < 2:
        raise ValueError("adjugate needs n >= 2")
    keep = np.array(_drop_one(n))
    # minors[i, j] = arr[keep[i]][:, keep[j]]
    minors = arr[keep[:, None, :, None], keep[None, :, None, :]]
    cof = np.linalg.det(minors)
    signs = (-1.0) ** np.add.outer(np.arange(n), np.arange(n))
    return (signs * cof).T


def minor_max(A, k: int, budget: int = DEFAULT_MINOR_BUDGET):
    """Largest absolute value over all ``k x k`` sub-determinants of ``A``.

    The scan is exhaustive over row and column subsets. Raises
    :class:`SizeTooLarge` when ``C(m, k) * C(n, k)`` exceeds ``budget``.
    """
    exact = is_exact(A)
    if exact:
        rows = _as_exact_rows(A)
        m, n = len(rows), len(rows[0]) if rows else 0
    else:
        arr = np.asarray(A, dtype=float)
        m, n = arr.shape
    if not 1 <= k <= min(m, n):
        raise ValueError(f"k={k} must lie in [1, min(m, n)={min(m, n)}]")
    count = math.comb(m, k) * math.comb(n, k)
    if count > budget:
        raise SizeTooLarge(count, budget, "minors")

    if exact:
        best = Fraction(0)
        col_sets = list(combinations(range(n), k))
        for rs in combinations(range(m), k):
            for cs in col_sets:
                d = abs(bareiss_determinant([[rows[r][c] for c in cs] for r in rs]))
                if d > best:
                    best = d
        return best

    if k == 1:
        return float(np.abs(arr).max())
    col_idx = np.array(list(combinations(range(n), k)))
    row_idx = np.array(list(combinations(range(m), k)))
    per_row_set = len(col_idx) * k * k
    chunk = max(1, _CHUNK_ENTRIES // per_row_set)
    best = 0.0
    for start in range(0, len(row_idx), chunk):
        rs = row_idx[start:start + chunk]
        sub = arr[rs[:, None, :, None], col_idx[None, :, None, :]]
        dets = np.abs(np.linalg.det(sub))
        best = max(best, float(dets.max()))
    return best


def normalize_rows(A, b, eps_zero: float = EPS_ZERO):
    """Scale each constraint ``A_i x <= b_i`` so that ``||A_i|| == 1``.

    The feasible set is unchanged. Returns float arrays.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise ValueError("A must be m x n and b must have length m")
    norms = np.linalg.norm(A, axis=1)
    for i, nrm in enumerate(norms):
        if not nrm > eps_zero:
            raise ZeroRow(i)
    return A / norms[:, None], b / norms


def _exact_sqrt(q: Fraction):
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def normalize_rows_exact(A, b):
    """Exact counterpart of :func:`normalize_rows`.

    Returns ``(A, b)`` as lists of Fractions when every row norm is rational
    (e.g. ``(3, 4)`` or ``(0, 1)``), otherwise ``None``.
    """
    rows = _as_exact_rows(A)
    rhs = [Fraction(x) for x in b]
    out_A, out_b = [], []
    for i, row in enumerate(rows):
        sq = sum(x * x for x in row)
        if sq == 0:
            raise ZeroRow(i)
        nrm = _exact_sqrt(sq)
        if nrm is None:
            return None
        out_A.append([x / nrm for x in row])
        out_b.append(rhs[i] / nrm)
    return out_A, out_b


def ball_volume(n: int) -> BallGeometry:
    """Lebesgue measure of the n-dimensional unit ball, pi^(n/2) / Gamma(n/2 + 1)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    # V_1 = 2, V_0 = 1, V_d = V_{d-2} * 2 pi / d
    vol, start = (2.0, 3) if n % 2 else (1.0, 2)
    for d in range(start, n + 1, 2):
        vol *= 2.0 * math.pi / d
    return BallGeometry(n, vol)


def paper_ball_volume(n: int) -> float:
    """The expression pi^n / n! that the bound derivation uses for even n."""
    return math.pi**n / math.factorial(n)


def orthonormal_subspace_basis(vectors, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (as rows) of the span of ``vectors``.

    The i-th output row has a positive inner product with the i-th input,
    so already orthonormal input comes back unchanged.
    """
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    k = V.shape[0]
    if k > V.shape[1]:
        raise RankDeficient(f"{k} vectors in R^{V.shape[1]} cannot be independent")
    Q, R = np.linalg.qr(V.T)
    diag = np.diag(R)
    scale = max(float(np.linalg.norm(V, axis=1).max()), 1.0)
    if np.any(np.abs(diag) <= tol * scale):
        raise RankDeficient(f"numerical rank of {k} vectors is below {k}")
    Q = Q * np.sign(diag)
    return Q.T.copy()


def minor_min_nonzero(A, k: int, eps: float = 1e-10, budget: int = DEFAULT_MINOR_BUDGET):
    """Smallest absolute ``k x k`` sub-determinant exceeding ``eps`` (None if all vanish)."""
    exact = is_exact(A)
    if exact:
        rows = _as_exact_rows(A)
        m, n = len(rows), len(rows[0])
    else:
        arr = np.asarray(A, dtype=float)
        m, n = arr.shape
    if not 1 <= k <= min(m, n):
        raise ValueError(f"k={k} must lie in [1, min(m, n)={min(m, n)}]")
    count = math.comb(m, k) * math.comb(n, k)
    if count > budget:
        raise SizeTooLarge(count, budget, "minors")
    if exact:
        best = None
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                d = abs(bareiss_determinant([[rows[r][c] for c in cs] for r in rs]))
                if d > eps and (best is None or d < best):
                    best = d
        return best
    col_idx = np.array(list(combinations(range(n), k)))
    row_idx = np.array(list(combinations(range(m), k)))
    chunk = max(1, _CHUNK_ENTRIES // (len(col_idx) * k * k))
    best = None
    for start in range(0, len(row_idx), chunk):
        rs = row_idx[start:start + chunk]
        dets = np.abs(np.linalg.det(arr[rs[:, None, :, None], col_idx[None, :, None, :]]))
        dets = dets[dets > eps]
        if dets.size and (best is None or dets.min() < best):
            best = float(dets.min())
    return best
