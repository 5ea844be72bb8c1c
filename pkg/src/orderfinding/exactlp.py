"""Exact linear programming over ordered fields.

The guessing-game and classical-bound analyses both reduce to small zero-sum
games solved as linear programs.  Floating-point LP cannot certify answers
like "the value is exactly 1/2", so the simplex method here runs in exact
arithmetic: plain Fractions for rational data, and the quadratic field
Q(sqrt(2)) for the order-3 outcome distribution, whose entries involve
sqrt(2).  Bland's rule guarantees termination.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class QSqrt2:
    """An element a + b*sqrt(2) with rational a, b: an exactly ordered field."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _coerce(value) -> "QSqrt2":
        if isinstance(value, QSqrt2):
            return value
        if isinstance(value, (int, Fraction)):
            return QSqrt2(value, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt2(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        den = o.a * o.a - 2 * o.b * o.b
        if den == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(2))")
        return QSqrt2((self.a * o.a - 2 * self.b * o.b) / den, (self.b * o.a - self.a * o.b) / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def _sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return -1 if a < 0 else (1 if a > 0 else 0)
        if a == 0:
            return -1 if b < 0 else 1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with 2 b^2, the sign follows the larger part
        big_a = a * a > 2 * b * b
        return (1 if a > 0 else -1) if big_a else (1 if b > 0 else -1)

    def __bool__(self):
        return not (self.a == 0 and self.b == 0)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - other)._sign() < 0

    def __le__(self, other):
        return (self - other)._sign() <= 0

    def __gt__(self, other):
        return (self - other)._sign() > 0

    def __ge__(self, other):
        return (self - other)._sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * 2**0.5

    def as_fraction(self) -> Fraction | None:
        """The value as a Fraction when the sqrt(2) part vanishes, else None."""
        return self.a if self.b == 0 else None

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"{self.a} + {self.b}*sqrt(2)"


class Infeasible(ValueError):
    pass


class Unbounded(ValueError):
    pass


def _pivot(rows, rhs, obj, obj_rhs, basis, pr, pc):
    piv = rows[pr][pc]
    inv = 1 / piv
    rows[pr] = [v * inv for v in rows[pr]]
    rhs[pr] = rhs[pr] * inv
    prow = rows[pr]
    for i in range(len(rows)):
        if i == pr:
            continue
        f = rows[i][pc]
        if f:
            row = rows[i]
            rows[i] = [v - f * w for v, w in zip(row, prow)]
            rhs[i] = rhs[i] - f * rhs[pr]
    f = obj[pc]
    if f:
        obj[:] = [v - f * w for v, w in zip(obj, prow)]
        obj_rhs[0] = obj_rhs[0] - f * rhs[pr]
    basis[pr] = pc


def _run_simplex(rows, rhs, obj, obj_rhs, basis):
    """Maximize; obj holds reduced costs (positive = improving).

    Uses Dantzig's rule for speed, switching to Bland's rule (which cannot
    cycle) once the pivot count passes a safety threshold.
    """
    bland_after = 3 * (len(rows) + len(obj)) + 100
    pivots = 0
    while True:
        pc = None
        if pivots < bland_after:
            best_rc = None
            for j, v in enumerate(obj):
                if v > 0 and (best_rc is None or v > best_rc):
                    best_rc = v
                    pc = j
        else:
            pc = next((j for j, v in enumerate(obj) if v > 0), None)
        if pc is None:
            return
        pr = None
        best = None
        for i, row in enumerate(rows):
            a = row[pc]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[pr]):
                    best = ratio
                    pr = i
        if pr is None:
            raise Unbounded("LP is unbounded")
        _pivot(rows, rhs, obj, obj_rhs, basis, pr, pc)
        pivots += 1


def simplex_maximize(A: Sequence[Sequence], b: Sequence, c: Sequence):
    """Maximize c.x subject to A x = b, x >= 0, in exact arithmetic.

    Entries may be int, Fraction or QSqrt2 (consistently mixed).  Returns
    (value, x, duals) with duals y solving y.A = c on the optimal basis,
    i.e. the exact dual solution for the equality constraints.
    """
    m, n = len(A), len(c)
    rows = [list(row) for row in A]
    rhs = list(b)
    flips = [1] * m
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
            flips[i] = -1

    zero = 0 * rhs[0] if m else 0
    # Phase 1: artificial basis, maximize -(sum of artificials).
    for i in range(m):
        rows[i] = rows[i] + [1 if j == i else 0 for j in range(m)]
    basis = [n + i for i in range(m)]
    obj = [zero] * (n + m)
    obj_rhs = [zero]
    for i in range(m):
        for j in range(n):
            obj[j] = obj[j] + rows[i][j]
        obj_rhs[0] = obj_rhs[0] + rhs[i]
    # reduced costs of artificials are 0 in the starting basis
    _run_simplex(rows, rhs, obj, obj_rhs, basis)
    if obj_rhs[0] != 0:
        raise Infeasible("LP is infeasible")
    # Drive any degenerate artificials out of the basis.
    drop = []
    for i in range(m):
        if basis[i] >= n:
            pc = next((j for j in range(n) if rows[i][j] != 0), None)
            if pc is None:
                drop.append(i)
            else:
                _pivot(rows, rhs, obj, obj_rhs, basis, i, pc)
    for i in reversed(drop):
        del rows[i], rhs[i], basis[i]
    rows = [row[:n] for row in rows]

    # Phase 2 objective: reduced costs for the current basis.
    obj = list(c)
    obj_rhs = [zero]
    for i, bi in enumerate(basis):
        f = obj[bi]
        if f:
            obj = [v - f * w for v, w in zip(obj, rows[i])]
            obj_rhs[0] = obj_rhs[0] - f * rhs[i]
    _run_simplex(rows, rhs, obj, obj_rhs, basis)

    x = [zero] * n
    for i, bi in enumerate(basis):
        x[bi] = rhs[i]
    value = sum((ci * xi for ci, xi in zip(c, x)), zero)

    duals = _basis_duals(A, c, basis, flips, zero)
    return value, x, duals


def _basis_duals(A, c, basis, flips, zero):
    """Solve B^T y = c_B exactly for the optimal basis (original row signs)."""
    m = len(A)
    if m == 0:
        return []
    cols = []
    cb = []
    for bi in basis:
        cols.append([A[i][bi] for i in range(m)])
        cb.append(c[bi])
    # Solve sum_k y_i (col_k)_i ... i.e. (B^T) y = c_B with B columns = cols.
    size = len(cols)
    mat = [[cols[k][i] for i in range(m)] + [cb[k]] for k in range(size)]
    # Gaussian elimination (the system is square and nonsingular on a basis).
    y = [zero] * m
    piv_cols = []
    r = 0
    for col in range(m):
        sel = next((i for i in range(r, size) if mat[i][col] != 0), None)
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(size):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [v - f * w for v, w in zip(mat[i], mat[r])]
        piv_cols.append(col)
        r += 1
        if r == size:
            break
    for idx, col in enumerate(piv_cols):
        y[col] = mat[idx][m]
    return [yi * fi for yi, fi in zip(y, flips)]


def solve_maximin_assignment(payoffs: Sequence[Sequence]):
    """Solve max_g min_col sum_row payoff[row][col] * g[row][col].

    g assigns to each row a probability vector over columns (rows of g sum
    to 1).  This is the guesser's side of the zero-sum game "observe the
    row, guess the column".  Returns (value, g, prior) with prior the dual
    optimal distribution over columns (the hardest column mixture).
    """
    n_rows = len(payoffs)
    n_cols = len(payoffs[0])
    n_g = n_rows * n_cols
    zero = 0 * payoffs[0][0]
    one = zero + 1

    def gvar(r, c):
        return r * n_cols + c

    v_var = n_g
    slack0 = n_g + 1
    n_vars = n_g + 1 + n_cols

    A = []
    b = []
    for col in range(n_cols):
        row = [zero] * n_vars
        for r in range(n_rows):
            row[gvar(r, col)] = payoffs[r][col]
        row[v_var] = -one
        row[slack0 + col] = -one
        A.append(row)
        b.append(zero)
    for r in range(n_rows):
        row = [zero] * n_vars
        for col in range(n_cols):
            row[gvar(r, col)] = one
        A.append(row)
        b.append(one)
    c = [zero] * n_vars
    c[v_var] = one

    value, x, duals = simplex_maximize(A, b, c)
    g = [[x[gvar(r, col)] for col in range(n_cols)] for r in range(n_rows)]
    prior = [-duals[col] for col in range(n_cols)]
    total = sum(prior, zero)
    if total != 0:
        prior = [p / total for p in prior]
    return value, g, prior
