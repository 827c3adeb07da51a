"""Exact integer and rational linear algebra.

Vectors are plain tuples (of ``int`` or ``Fraction``) and matrices are
sequences of rows.  Nothing here ever touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

IntVec = tuple  # tuple[int, ...]
RatVec = tuple  # tuple[Fraction, ...]
Matrix = Sequence[Sequence[int]]

GE = ">="
EQ = "="


def _shape(m: Matrix) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    for row in m:
        if len(row) != cols:
            raise ValueError("ragged matrix")
    return rows, cols


def content(v: Sequence[int]) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def primitive_part(v: Sequence[int]) -> IntVec:
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return tuple(int(x) // g for x in v)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def mat_vec(m: Matrix, v: Sequence):
    return tuple(dot(row, v) for row in m)


def transpose(m: Matrix) -> list[list]:
    rows, cols = _shape(m)
    return [[m[i][j] for i in range(rows)] for j in range(cols)]


def det(m: Matrix) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    n, cols = _shape(m)
    if n != cols:
        raise ValueError(f"det needs a square matrix, got {n}x{cols}")
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(m: Matrix) -> int:
    rows, cols = _shape(m)
    a = [[Fraction(x) for x in row] for row in m]
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def inverse(m: Matrix) -> list[list[Fraction]]:
    """Exact inverse of a square nonsingular matrix."""
    n, cols = _shape(m)
    if n != cols:
        raise ValueError("inverse needs a square matrix")
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def column_hermite(m: Matrix) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Unimodular column reduction ``m @ U = H`` with ``H`` in column echelon form.

    Returns ``(H, U, pivot_rows)``; column ``j < len(pivot_rows)`` of ``H``
    has its first nonzero entry (positive) in row ``pivot_rows[j]`` and the
    remaining columns of ``H`` are zero.
    """
    rows, cols = _shape(m)
    # each working column carries its own slice of U underneath
    work = [[int(m[i][j]) for i in range(rows)] + [int(k == j) for k in range(cols)]
            for j in range(cols)]
    pivots: list[int] = []
    p = 0
    for i in range(rows):
        if p == cols:
            break
        while True:
            nz = [j for j in range(p, cols) if work[j][i] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: (abs(work[j][i]), j))
            work[p], work[j0] = work[j0], work[p]
            done = True
            for j in range(p + 1, cols):
                if work[j][i] != 0:
                    q = work[j][i] // work[p][i]
                    work[j] = [x - q * y for x, y in zip(work[j], work[p])]
                    if work[j][i] != 0:
                        done = False
            if done:
                break
        if any(work[j][i] != 0 for j in range(p, cols)):
            if work[p][i] < 0:
                work[p] = [-x for x in work[p]]
            pivots.append(i)
            p += 1
    H = [[work[j][i] for j in range(cols)] for i in range(rows)]
    U = [[work[j][rows + k] for j in range(cols)] for k in range(cols)]
    return H, U, pivots


def kernel_basis(m: Matrix, cols: Optional[int] = None) -> list[IntVec]:
    """A basis of the full integer kernel ``{x in Z^cols : m x = 0}``.

    The basis comes from the unimodular transform of a column Hermite
    reduction, so it generates the saturated kernel lattice.
    """
    if not m:
        if cols is None:
            raise ValueError("column count needed for an empty matrix")
        return [tuple(int(i == j) for j in range(cols)) for i in range(cols)]
    _, U, pivots = column_hermite(m)
    n = len(U)
    basis = [tuple(U[k][j] for k in range(n)) for j in range(len(pivots), n)]
    return [_size_reduce(v, basis[:i]) for i, v in enumerate(basis)]


def _size_reduce(v, earlier):
    # cosmetic: shrink entries against earlier basis vectors
    for b in earlier:
        bb = dot(b, b)
        if bb:
            q = round(Fraction(dot(v, b), bb))
            if q:
                v = tuple(x - q * y for x, y in zip(v, b))
    return v


def solve_integer(m: Matrix, b: Sequence[int]) -> Optional[IntVec]:
    """Some integer solution of ``m x = b``, or ``None`` if there is none."""
    rows, cols = _shape(m)
    if len(b) != rows:
        raise ValueError("dimension mismatch")
    H, U, pivots = column_hermite(m)
    residual = [int(x) for x in b]
    y = [0] * cols
    for j, i in enumerate(pivots):
        for r in range(i):
            if residual[r] != 0:
                return None
        q, rem = divmod(residual[i], H[i][j])
        if rem:
            return None
        y[j] = q
        if q:
            residual = [res - q * H[r][j] for r, res in enumerate(residual)]
    if any(residual):
        return None
    return tuple(dot(U[k], y) for k in range(cols))


def solve_rational(m: Matrix, b: Sequence) -> Optional[RatVec]:
    """The unique rational solution of ``m x = b``; ``None`` if inconsistent.

    ``m`` must have full column rank; a rank-deficient matrix is a caller
    bug and raises ``ValueError``.
    """
    rows, cols = _shape(m)
    if len(b) != rows:
        raise ValueError("dimension mismatch")
    a = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(m, b)]
    r = 0
    where = []
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            raise ValueError("solve_rational: matrix is not of full column rank")
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        where.append(r)
        r += 1
    if any(a[i][cols] != 0 for i in range(r, rows)):
        return None
    return tuple(a[where[c]][cols] for c in range(cols))


def lp_feasible(constraints, dim: Optional[int] = None, nonneg: bool = False) -> Optional[RatVec]:
    """Exact feasibility for ``{a.x >= b}`` / ``{a.x = b}`` systems.

    ``constraints`` is a sequence of ``(a, rel, b)`` with ``rel`` one of
    ``">="`` or ``"="``.  Variables are free unless ``nonneg`` is set.
    Returns a rational witness or ``None``.  Phase-I simplex on a dense
    tableau, Bland's rule for both entering and leaving variables.
    """
    constraints = list(constraints)
    if dim is None:
        if not constraints:
            raise ValueError("dimension needed for an empty system")
        dim = len(constraints[0][0])
    for a, rel, _ in constraints:
        if len(a) != dim:
            raise ValueError("constraint vectors must share one dimension")
        if rel not in (GE, EQ):
            raise ValueError(f"unknown relation {rel!r}")
    if not constraints:
        return tuple(Fraction(0) for _ in range(dim))

    nstruct = dim if nonneg else 2 * dim
    nslack = sum(1 for _, rel, _ in constraints if rel == GE)
    m = len(constraints)
    ncols = nstruct + nslack + m
    tab: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    s = 0
    for i, (a, rel, b) in enumerate(constraints):
        row = [Fraction(0)] * ncols
        for j, x in enumerate(a):
            row[j] = Fraction(x)
            if not nonneg:
                row[dim + j] = -Fraction(x)
        if rel == GE:
            row[nstruct + s] = Fraction(-1)
            s += 1
        b = Fraction(b)
        if b < 0:
            row = [-x for x in row]
            b = -b
        row[nstruct + nslack + i] = Fraction(1)
        tab.append(row)
        rhs.append(b)
    basis = [nstruct + nslack + i for i in range(m)]
    # reduced costs of the phase-I objective (sum of artificials)
    cost = [Fraction(0)] * ncols
    for j in range(nstruct + nslack):
        cost[j] = -sum(tab[i][j] for i in range(m))

    while True:
        enter = next((j for j in range(ncols) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = rhs[i] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # unbounded direction; cannot happen in phase I
            break
        p = tab[leave][enter]
        tab[leave] = [x / p for x in tab[leave]]
        rhs[leave] /= p
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
                rhs[i] -= f * rhs[leave]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, tab[leave])]
        basis[leave] = enter

    first_art = nstruct + nslack
    if any(rhs[i] != 0 for i, j in enumerate(basis) if j >= first_art):
        return None
    values = [Fraction(0)] * ncols
    for i, j in enumerate(basis):
        values[j] = rhs[i]
    if nonneg:
        return tuple(values[:dim])
    return tuple(values[j] - values[dim + j] for j in range(dim))


def in_rational_cone(generators: Sequence[Sequence], target: Sequence) -> Optional[RatVec]:
    """Nonnegative rational coefficients expressing ``target`` over ``generators``."""
    k = len(generators)
    if k == 0:
        return () if not any(target) else None
    cons = []
    for x in range(len(target)):
        cons.append(([g[x] for g in generators], EQ, target[x]))
    return lp_feasible(cons, dim=k, nonneg=True)
