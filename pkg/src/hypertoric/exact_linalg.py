"""Exact integer and rational linear algebra.

Matrices are numpy arrays with ``dtype=object`` holding Python ints or
:class:`fractions.Fraction`, so arithmetic never leaves the exact domain and
shapes such as ``(0, d)`` survive.  Nothing in this module touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GaussRational",
    "LPResult",
    "int_matrix",
    "rat_vector",
    "gauss_vector",
    "smith_normal_form",
    "hermite_rows",
    "integer_kernel_basis",
    "rational_kernel",
    "rational_solve",
    "rank",
    "det",
    "is_saturated",
    "is_unimodular_configuration",
    "right_inverse",
    "lp_maximize",
]


# ---------------------------------------------------------------------------
# Gaussian rationals


class GaussRational:
    """Exact complex rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussRational":
        if isinstance(value, GaussRational):
            return value
        if isinstance(value, (tuple, list)):
            re, im = value
            return cls(Fraction(re), Fraction(im))
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact; pass a (re, im) pair")
        return cls(Fraction(value), 0)

    def __add__(self, other):
        o = _gauss_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _gauss_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _gauss_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _gauss_or_none(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __eq__(self, other):
        o = _gauss_or_none(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _gauss_or_none(value):
    if isinstance(value, GaussRational):
        return value
    if isinstance(value, (int, Fraction, np.integer)):
        return GaussRational(value, 0)
    return None


# ---------------------------------------------------------------------------
# constructors


def int_matrix(rows: Iterable[Sequence[int]], ncols: int | None = None) -> np.ndarray:
    """Build an exact integer matrix.

    ``ncols`` is only needed for matrices with no rows.
    """
    rows = [[int(v) for v in row] for row in rows]
    if not rows:
        if ncols is None:
            raise ValueError("ncols is required for an empty matrix")
        return np.empty((0, ncols), dtype=object)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged integer matrix")
    if ncols is not None and ncols != width:
        raise ValueError(f"expected {ncols} columns, got {width}")
    out = np.empty((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = v
    return out


def rat_vector(values: Iterable) -> np.ndarray:
    vals = [Fraction(v) for v in values]
    out = np.empty(len(vals), dtype=object)
    out[:] = vals
    return out


def gauss_vector(values: Iterable) -> np.ndarray:
    vals = [GaussRational.coerce(v) for v in values]
    out = np.empty(len(vals), dtype=object)
    out[:] = vals
    return out


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _to_lists(M) -> list[list]:
    M = np.asarray(M, dtype=object)
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return [list(row) for row in M]


def _from_lists(rows: list[list], ncols: int) -> np.ndarray:
    out = np.empty((len(rows), ncols), dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out


# ---------------------------------------------------------------------------
# integer normal forms


def smith_normal_form(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smith normal form ``S = L @ M @ R`` with ``L``, ``R`` unimodular.

    The diagonal of ``S`` is nonnegative and each entry divides the next.
    """
    M = np.asarray(M, dtype=object)
    nr, nc = M.shape
    D = [[int(v) for v in row] for row in M]
    L = _identity(nr)
    R = _identity(nc)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        L[dst] = [a + q * b for a, b in zip(L[dst], L[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in R:
            row[dst] += q * row[src]

    for t in range(min(nr, nc)):
        entries = [(abs(D[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if D[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            changed = False
            for i in range(t + 1, nr):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, nc):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # divisibility: fold an offending row into the pivot row
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            L[t] = [-a for a in L[t]]

    return _from_lists(D, nc), _from_lists(L, nr), _from_lists(R, nc)


def hermite_rows(M) -> np.ndarray:
    """Row-style Hermite normal form of the row lattice of ``M``.

    Zero rows are dropped; pivots are positive and the entries above each
    pivot are reduced into ``[0, pivot)``.
    """
    M = np.asarray(M, dtype=object)
    nc = M.shape[1]
    rows = [[int(v) for v in row] for row in M]
    r = 0
    for col in range(nc):
        while True:
            live = [i for i in range(r, len(rows)) if rows[i][col]]
            if not live:
                break
            p = min(live, key=lambda i: abs(rows[i][col]))
            rows[r], rows[p] = rows[p], rows[r]
            others = [i for i in range(r + 1, len(rows)) if rows[i][col]]
            if not others:
                break
            for i in others:
                q = rows[i][col] // rows[r][col]
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
        if r < len(rows) and rows[r][col]:
            if rows[r][col] < 0:
                rows[r] = [-a for a in rows[r]]
            p = rows[r][col]
            for i in range(r):
                q = rows[i][col] // p
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
            r += 1
    return _from_lists(rows[:r], nc)


def integer_kernel_basis(M) -> np.ndarray:
    """Rows spanning the full integer kernel ``{x in Z^cols : M x = 0}``.

    The basis is Hermite-reduced, so it is canonical for the lattice.
    """
    M = np.asarray(M, dtype=object)
    nc = M.shape[1]
    S, _, R = smith_normal_form(M)
    r = sum(1 for i in range(min(S.shape)) if S[i, i])
    K = R[:, r:].T
    if K.shape[0] == 0:
        return np.empty((0, nc), dtype=object)
    return hermite_rows(K)


def right_inverse(U) -> np.ndarray:
    """Integer matrix ``S`` with ``U @ S = I``; requires SNF(U) to be all ones."""
    U = np.asarray(U, dtype=object)
    n = U.shape[0]
    D, L, R = smith_normal_form(U)
    if any(D[i, i] != 1 for i in range(n)):
        raise ValueError("matrix has no integer right inverse")
    return R[:, :n] @ L


def is_saturated(M) -> bool:
    """True iff the rows of ``M`` are independent and span a saturated lattice."""
    M = np.asarray(M, dtype=object)
    k = M.shape[0]
    if k == 0:
        return True
    D, _, _ = smith_normal_form(M)
    return all(D[i, i] == 1 for i in range(k))


# ---------------------------------------------------------------------------
# rational elimination


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][col]
        rows[r] = [a / piv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def _as_fraction_rows(M) -> tuple[list[list[Fraction]], int]:
    M = np.asarray(M, dtype=object)
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return [[Fraction(v) for v in row] for row in M], M.shape[1]


def rank(M) -> int:
    rows, nc = _as_fraction_rows(M)
    return len(_rref(rows, nc)[1])


def rational_solve(M, v) -> np.ndarray | None:
    """Some exact solution of ``M x = v``, or ``None`` if inconsistent.

    Pivots are taken from the rightmost columns first, and the remaining
    (leftmost) free coordinates are set to zero.  This makes the returned
    particular solution deterministic.
    """
    rows, nc = _as_fraction_rows(M)
    v = [Fraction(x) for x in v]
    if len(v) != len(rows):
        raise ValueError(f"right-hand side has length {len(v)}, expected {len(rows)}")
    aug = [row[::-1] + [b] for row, b in zip(rows, v)]
    red, pivots = _rref(aug, nc + 1)
    if nc in pivots:
        return None
    x_rev = [Fraction(0)] * nc
    for row, col in zip(red, pivots):
        x_rev[col] = row[nc]
    return rat_vector(x_rev[::-1])


def rational_kernel(M) -> np.ndarray:
    """Basis (as rows) of the rational kernel of ``M``, from the RREF."""
    rows, nc = _as_fraction_rows(M)
    red, pivots = _rref(rows, nc)
    free = [j for j in range(nc) if j not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * nc
        vec[f] = Fraction(1)
        for row, p in zip(red, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    out = np.empty((len(basis), nc), dtype=object)
    for i, vec in enumerate(basis):
        out[i, :] = vec
    return out


def det(M) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    M = [[int(v) for v in row] for row in np.asarray(M, dtype=object)]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def is_unimodular_configuration(U) -> bool:
    """True iff every ``n`` linearly independent columns of ``U`` have det ±1.

    Walks independent column sets depth first.  Every independent set of
    columns extends to a column basis, and a subset of a lattice basis spans a
    saturated sublattice, so the first independent set with a non-saturated
    span already witnesses failure.
    """
    U = np.asarray(U, dtype=object)
    n, d = U.shape
    if rank(U) != n:
        raise ValueError("unimodularity test requires U of full row rank")
    cols = [U[:, j] for j in range(d)]

    def extend(chosen: list[int], start: int) -> bool:
        for j in range(start, d):
            trial = chosen + [j]
            block = np.array([cols[i] for i in trial], dtype=object)
            if rank(block) < len(trial):
                continue
            if not is_saturated(block):
                return False
            if len(trial) < n and not extend(trial, j + 1):
                return False
        return True

    return extend([], 0)


def nonunimodular_bases(U, limit: int | None = None) -> list[tuple[int, ...]]:
    """Column index sets forming a basis of determinant other than ±1."""
    U = np.asarray(U, dtype=object)
    n, d = U.shape
    found = []
    for idx in combinations(range(d), n):
        val = det(U[:, list(idx)])
        if val not in (0, 1, -1):
            found.append(idx)
            if limit is not None and len(found) >= limit:
                break
    return found


# ---------------------------------------------------------------------------
# exact linear programming


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None


def _pivot(T: list[list[Fraction]], r: int, c: int) -> None:
    p = T[r][c]
    T[r] = [a / p for a in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c]:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]


def _run_simplex(T, basis, obj, allowed) -> str:
    """Maximize ``obj`` over the tableau ``T`` (last column = rhs), Bland's rule."""
    ncols = len(T[0]) - 1
    while True:
        entering = None
        for j in range(ncols):
            if not allowed[j] or j in basis:
                continue
            reduced = obj[j] - sum(obj[basis[i]] * T[i][j] for i in range(len(T)))
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i in range(len(T)):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        leave = best[1]
        _pivot(T, leave, entering)
        basis[leave] = entering


def lp_maximize(c: Sequence, G: Sequence[Sequence], h: Sequence) -> LPResult:
    """Exact ``max c.v`` subject to ``G v <= h`` with ``v`` free.

    Two-phase dense tableau simplex over :class:`Fraction` with Bland's rule.
    """
    c = [Fraction(x) for x in c]
    nv = len(c)
    G = [[Fraction(x) for x in row] for row in G]
    h = [Fraction(x) for x in h]
    nrow = len(G)
    # columns: v+ (nv), v- (nv), slack (nrow), artificial (nrow)
    nstd = 2 * nv + nrow
    T, basis = [], []
    n_art = 0
    art_cols = []
    for i, (row, b) in enumerate(zip(G, h)):
        line = row + [-a for a in row] + [Fraction(int(k == i)) for k in range(nrow)]
        if b < 0:
            line = [-a for a in line]
            b = -b
            art_cols.append(i)
        T.append(line + [b])
    # append artificial columns before rhs
    total = nstd + len(art_cols)
    for i, line in enumerate(T):
        rhs = line.pop()
        for k, ai in enumerate(art_cols):
            line.append(Fraction(int(ai == i)))
        line.append(rhs)
    for i in range(nrow):
        if i in art_cols:
            basis.append(nstd + art_cols.index(i))
        else:
            basis.append(2 * nv + i)
    n_art = len(art_cols)

    if n_art:
        obj1 = [Fraction(0)] * nstd + [Fraction(-1)] * n_art
        _run_simplex(T, basis, obj1, [True] * total)
        phase1 = sum(obj1[basis[i]] * T[i][-1] for i in range(nrow))
        if phase1 < 0:
            return LPResult("infeasible")
        # drive zero-level artificials out of the basis
        for i in range(nrow):
            if basis[i] >= nstd:
                j = next((j for j in range(nstd) if T[i][j]), None)
                if j is not None:
                    _pivot(T, i, j)
                    basis[i] = j
        keep = [i for i in range(nrow) if basis[i] < nstd]
        T = [T[i][:nstd] + [T[i][-1]] for i in keep]
        basis = [basis[i] for i in keep]

    obj2 = c + [-a for a in c] + [Fraction(0)] * nrow
    status = _run_simplex(T, basis, obj2, [True] * nstd)
    if status == "unbounded":
        return LPResult("unbounded")
    sol = [Fraction(0)] * nstd
    for i, j in enumerate(basis):
        sol[j] = T[i][-1]
    v = tuple(sol[k] - sol[nv + k] for k in range(nv))
    value = sum((ci * vi for ci, vi in zip(c, v)), Fraction(0))
    return LPResult("optimal", value, v)
