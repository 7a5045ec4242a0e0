"""Exact dense linear algebra over Q(q) scalars.

Small dimensions throughout (weight-space sized), so the emphasis is on
exactness and predictable pivoting, not asymptotics.  Rank/pivot work on
integer-polynomial matrices goes through fraction-free Bareiss elimination;
solving against a certified-nonsingular block uses fraction-field LU.
"""

from __future__ import annotations

from .errors import ConsistencyError, DegeneracyError
from .scalars import ONE, ZERO, Scalar, _pdivexact, _pmul

Matrix = list  # list[list[Scalar]]

# fixed modulus/evaluation points for randomized pivot preselection; the
# results are verified exactly afterwards, so these only affect performance
_P = (1 << 61) - 1
_EVAL_POINTS = (1031, 4097, 65537, 262147, 999983)


def zeros(n: int, m: int) -> Matrix:
    return [[ZERO] * m for _ in range(n)]


def mat_vec(mat: Matrix, vec: list) -> list:
    out = []
    for row in mat:
        acc = ZERO
        for a, x in zip(row, vec):
            if a.cn and x.cn:
                acc = acc + a * x
        out.append(acc)
    return out


def bareiss_rank_pivots(rows: list[list[tuple]]) -> tuple[int, list[int]]:
    """Fraction-free rank and pivot columns of an integer-polynomial matrix.

    ``rows`` is consumed; entries are little-endian int tuples.
    """
    if not rows:
        return 0, []
    nrows, ncols = len(rows), len(rows[0])
    prev = (1,)
    r = 0
    pivots = []
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pivots.append(col)
        pv = rows[r][col]
        for i in range(r + 1, nrows):
            head = rows[i][col]
            for j in range(col + 1, ncols):
                num = _poly_sub(_pmul(pv, rows[i][j]), _pmul(head, rows[r][j]))
                rows[i][j] = _pdivexact(num, prev)
            rows[i][col] = ()
        prev = pv
        r += 1
        if r == nrows:
            break
    return r, pivots


def _poly_sub(a: tuple, b: tuple) -> tuple:
    if not b:
        return a
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        out[i] -= x
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def scalar_rows_to_int_polys(mat: Matrix) -> list[list[tuple]]:
    """Clear each row's denominators and q-shifts; rank and pivots unchanged.

    Entry j of a row becomes cn_j*num_j times the product of every *other*
    entry's cd*den, via prefix/suffix products.
    """
    out = []
    for row in mat:
        m = len(row)
        dens = [tuple(a.cd * x for x in a.den) if a.cn else (1,) for a in row]
        prefix = [(1,)] * (m + 1)
        for j in range(m):
            prefix[j + 1] = _pmul(prefix[j], dens[j])
        suffix = [(1,)] * (m + 1)
        for j in range(m - 1, -1, -1):
            suffix[j] = _pmul(suffix[j + 1], dens[j])
        kmin = min((a.k for a in row if a.cn), default=0)
        cleared = []
        for j, a in enumerate(row):
            if not a.cn:
                cleared.append(())
                continue
            p = tuple(a.cn * x for x in a.num)
            p = _pmul(p, _pmul(prefix[j], suffix[j + 1]))
            cleared.append((0,) * (a.k - kmin) + p)
        out.append(cleared)
    return out


def modp_rank_pivots(mat: Matrix, attempt: int = 0) -> tuple[int, list[int]]:
    """Rank lower bound and pivot columns from evaluation at q = a over F_p."""
    if attempt > 40:
        raise ConsistencyError("no usable evaluation point for modular pivoting")
    x = _EVAL_POINTS[attempt % len(_EVAL_POINTS)] + 997 * (attempt // len(_EVAL_POINTS))
    rows = []
    for row in mat:
        try:
            rows.append([a.eval_mod(x, _P) for a in row])
        except ZeroDivisionError:
            return modp_rank_pivots(mat, attempt + 1)
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    r = 0
    pivots = []
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pivots.append(col)
        inv = pow(rows[r][col], -1, _P)
        for i in range(r + 1, nrows):
            f = rows[i][col]
            if f:
                f = f * inv % _P
                rows[i] = [(a - f * b) % _P for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == nrows:
            break
    return r, pivots


class LU:
    """Fraction-field LU with first-nonzero pivoting for exact solves."""

    def __init__(self, mat: Matrix):
        n = len(mat)
        a = [row[:] for row in mat]
        perm = list(range(n))
        for col in range(n):
            piv = None
            for i in range(col, n):
                if a[i][col].cn:
                    piv = i
                    break
            if piv is None:
                raise DegeneracyError("singular matrix in LU factorization")
            a[col], a[piv] = a[piv], a[col]
            perm[col], perm[piv] = perm[piv], perm[col]
            inv = a[col][col].inverse()
            for i in range(col + 1, n):
                if a[i][col].cn:
                    f = a[i][col] * inv
                    a[i][col] = f
                    for j in range(col + 1, n):
                        if a[col][j].cn:
                            a[i][j] = a[i][j] - f * a[col][j]
        self.n = n
        self.a = a
        self.perm = perm

    def solve(self, rhs: list) -> list:
        n = self.n
        y = [rhs[self.perm[i]] for i in range(n)]
        for i in range(n):
            acc = y[i]
            for j in range(i):
                if self.a[i][j].cn and y[j].cn:
                    acc = acc - self.a[i][j] * y[j]
            y[i] = acc
        for i in range(n - 1, -1, -1):
            acc = y[i]
            for j in range(i + 1, n):
                if self.a[i][j].cn and y[j].cn:
                    acc = acc - self.a[i][j] * y[j]
            y[i] = acc * self.a[i][i].inverse()
        return y


def rref(mat: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns, exact."""
    rows = [row[:] for row in mat]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if rows[i][col].cn:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col].cn:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def kernel(mat: Matrix, ncols: int | None = None) -> list[list[Scalar]]:
    """Exact right-kernel basis of mat (possibly with zero rows)."""
    if not mat:
        if ncols is None:
            return []
        return [[ONE if j == f else ZERO for j in range(ncols)] for f in range(ncols)]
    if ncols is None:
        ncols = len(mat[0])
    rows, pivots = rref(mat)
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        out.append(v)
    return out


def rank(mat: Matrix) -> int:
    if not mat:
        return 0
    return len(rref(mat)[0])


def solve_in_span(basis_rows: Matrix, target: list) -> list | None:
    """Coefficients c with sum(c_r * basis_rows[r]) == target, or None."""
    if not basis_rows:
        return None if any(x.cn for x in target) else []
    k = len(basis_rows)
    n = len(target)
    # columns of the system are the basis vectors: solve B^T c = target
    aug = [[basis_rows[r][j] for r in range(k)] + [target[j]] for j in range(n)]
    rows, pivots = rref(aug)
    if k in pivots:
        return None
    sol = [ZERO] * k
    for r, pc in enumerate(pivots):
        sol[pc] = rows[r][k]
    # verify (free variables set to zero must still reproduce the target)
    for j in range(n):
        acc = ZERO
        for r in range(k):
            if sol[r].cn and basis_rows[r][j].cn:
                acc = acc + sol[r] * basis_rows[r][j]
        if acc != target[j]:
            return None
    return sol
