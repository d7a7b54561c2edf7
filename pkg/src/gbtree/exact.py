"""Exact arithmetic: Krylov rank, characteristic polynomials, divisibility.

Rationals are :class:`fractions.Fraction`; coefficients that are integral are
kept as plain ``int`` so the tree polynomials stay in big-integer arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .partition import divisor_matrix
from .tree import DegreeSequence, check_size, counterexample_degrees


def _norm(c):
    c = Fraction(c) if not isinstance(c, int) else c
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Poly:
    """Univariate polynomial over the rationals, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [_norm(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.leading == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, Rational):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, Rational):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, divisor: "Poly"):
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dd = divisor.degree
        lead = divisor.leading
        if len(rem) - 1 < dd:
            return Poly(), Poly(rem)
        quot = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1 - dd, -1, -1):
            c = rem[i + dd]
            if c == 0:
                continue
            q = Fraction(c, lead) if isinstance(lead, int) and isinstance(c, int) else c / lead
            q = _norm(q)
            quot[i] = q
            for j, dc in enumerate(divisor.coeffs):
                rem[i + j] -= q * dc
        return Poly(quot), Poly(rem[:dd])

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json_list(self) -> list[str]:
        """Coefficients as decimal strings (``"p/q"`` for non-integers)."""
        return [str(c) for c in self.coeffs]

    def to_json(self) -> str:
        return json.dumps(self.to_json_list())


def poly_divides(p: Poly, q: Poly) -> bool:
    """True iff ``p`` divides ``q`` with zero remainder."""
    if p.is_zero():
        raise ZeroDivisionError("zero divisor polynomial")
    _, r = divmod(q, p)
    return r.is_zero()


# ---------------------------------------------------------------------------
# rational linear algebra

def _as_fraction_matrix(M) -> list[list[Fraction]]:
    rows = np.asarray(M, dtype=object).tolist() if not isinstance(M, list) else M
    return [[Fraction(x) for x in row] for row in rows]


def rank(M) -> int:
    """Rank over Q by Gaussian elimination with exact fractions.

    Pivot is the first nonzero entry in the column; the pivot row is scaled
    to 1 before elimination.
    """
    m = _as_fraction_matrix(M)
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(r + 1, n_rows):
            f = m[i][c]
            if f:
                row_r = m[r]
                m[i] = [a - f * b for a, b in zip(m[i], row_r)]
        r += 1
        if r == n_rows:
            break
    return r


def mat_vec(M, v) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def krylov_matrix(M, v) -> list[list[Fraction]]:
    """Columns ``v, Mv, ..., M^{k-1} v`` as a k-by-k list of rows."""
    m = _as_fraction_matrix(M)
    k = len(m)
    if any(len(row) != k for row in m):
        raise ValueError("M must be square")
    v = [Fraction(x) for x in v]
    if len(v) != k:
        raise ValueError(f"vector has length {len(v)}, matrix is {k}x{k}")
    cols = [v]
    for _ in range(k - 1):
        cols.append(mat_vec(m, cols[-1]))
    return [[cols[j][i] for j in range(k)] for i in range(k)]


def krylov_rank(M, v) -> int:
    """Rank over Q of ``[v, Mv, ..., M^{k-1} v]``."""
    return rank(krylov_matrix(M, v))


def _check_jacobi_divisor(B) -> list[list[int]]:
    rows = [[int(x) for x in row] for row in np.asarray(B, dtype=object).tolist()]
    k = len(rows)
    if k < 2 or any(len(r) != k for r in rows):
        raise ValueError("divisor must be a square matrix of size >= 2")
    for i in range(k):
        for j in range(k):
            if abs(i - j) > 1 and rows[i][j] != 0:
                raise ValueError(f"divisor is not tridiagonal: entry ({i + 1},{j + 1}) = {rows[i][j]}")
    for i in range(k - 1):
        if rows[i][i + 1] <= 0 or rows[i + 1][i] <= 0:
            raise ValueError(f"off-diagonal entries at rows {i + 1},{i + 2} must be positive")
    return rows


def main_count_divisor(B) -> int:
    """Number of main eigenvalues of a generalized-Bethe-tree divisor.

    An eigenvalue is main when its ``B^T``-eigenspace is not orthogonal to
    ``e``. Writing ``e`` in the eigenbasis of ``B``, the coefficient on the
    ``B``-eigenvector for lambda is proportional to ``<eta, e>`` with ``eta``
    the matching ``B^T``-eigenvector, so the count is ``krylov_rank(B, e)``.
    (Using ``B^T`` here would pair ``e`` with the wrong eigenvectors.)
    The same number is the rank of the walk matrix of the tree, because
    ``A^j e_n = C B^j e_k`` and ``C`` has full column rank.

    B must be tridiagonal with positive off-diagonals: that makes it
    diagonally similar to a symmetric Jacobi matrix, hence diagonalizable,
    which the rank argument needs.
    """
    rows = _check_jacobi_divisor(B)
    return krylov_rank(rows, [1] * len(rows))


def charpoly_tridiagonal(B) -> Poly:
    """``det(xI - B)`` via the three-term recurrence (zero diagonal only)."""
    rows = [[int(x) for x in row] for row in np.asarray(B, dtype=object).tolist()]
    k = len(rows)
    if k < 1 or any(len(r) != k for r in rows):
        raise ValueError("B must be square")
    for i in range(k):
        if rows[i][i] != 0:
            raise ValueError(f"nonzero diagonal entry at {i + 1}: {rows[i][i]}")
        for j in range(k):
            if abs(i - j) > 1 and rows[i][j] != 0:
                raise ValueError(f"B is not tridiagonal: entry ({i + 1},{j + 1}) = {rows[i][j]}")
    x = Poly.x()
    prev, cur = Poly.const(1), x
    for i in range(1, k):
        prev, cur = cur, x * cur - (rows[i - 1][i] * rows[i][i - 1]) * prev
    return cur


def charpoly_tree(ds: DegreeSequence, cap: int | None = None) -> Poly:
    """``det(xI - A)`` of the whole tree ``B(ds)``, level by level.

    For a rooted tree T whose root has c children all carrying a copy of S:
    ``phi(T) = phi(S)^(c-1) * (x phi(S) - c psi(S))`` and ``psi(T) = phi(S)^c``,
    where psi is the characteristic polynomial with the root deleted.
    Leaves have ``phi = x``, ``psi = 1``.
    """
    check_size(ds, cap)
    x = Poly.x()
    phi, psi = x, Poly.const(1)
    for level in range(ds.k - 1, 0, -1):
        c = ds.children(level)
        base = phi ** (c - 1)
        phi, psi = base * (x * phi - c * psi), base * phi
    return phi


# ---------------------------------------------------------------------------
# the counterexample eigenvector

def xi_vector(k: int) -> tuple[int, ...]:
    """Eigenvector of ``B^T`` for eigenvalue -2 in the counterexample family.

    ``(1, -2, -1, 2(k-3))`` followed by ``(-1)^j 4(k-3-j)`` for ``j = 1..k-4``.
    """
    counterexample_degrees(k)  # validates k
    head = (1, -2, -1, 2 * (k - 3))
    tail = tuple((-1) ** j * 4 * (k - 3 - j) for j in range(1, k - 3))
    return head + tail


@dataclass(frozen=True)
class XiReport:
    k: int
    eigen_ok: bool
    orthogonal_ok: bool
    # first row of B^T xi + 2 xi that is nonzero, 1-based
    offending_index: int | None = None

    @property
    def ok(self) -> bool:
        return self.eigen_ok and self.orthogonal_ok

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "eigen_ok": self.eigen_ok,
            "orthogonal_ok": self.orthogonal_ok,
            "offending_index": self.offending_index,
        }


def verify_xi_identity(k: int, xi: Sequence[int] | None = None) -> XiReport:
    """Check ``B^T xi = -2 xi`` and ``sum(xi) = 0`` in integer arithmetic.

    ``xi`` defaults to :func:`xi_vector`; pass a tampered vector to see a failure.
    """
    B = divisor_matrix(counterexample_degrees(k)).tolist()
    xi = [int(v) for v in (xi_vector(k) if xi is None else xi)]
    if len(xi) != k:
        raise ValueError(f"xi must have {k} entries, got {len(xi)}")
    residual = [sum(B[j][i] * xi[j] for j in range(k)) + 2 * xi[i] for i in range(k)]
    bad = next((i + 1 for i, r in enumerate(residual) if r != 0), None)
    return XiReport(k, bad is None, sum(xi) == 0, bad)


def nullspace(M) -> list[list[Fraction]]:
    """Basis of the right nullspace over Q (reduced row echelon form)."""
    m = _as_fraction_matrix(M)
    n_rows, n_cols = len(m), len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -m[row][fc]
        basis.append(v)
    return basis


def integer_eigenvalues(B) -> list[int]:
    """Integer roots of ``det(xI - B)``, searched within the row-sum bound."""
    p = charpoly_tridiagonal(B)
    bound = int(np.abs(np.asarray(B, dtype=object)).sum(axis=1).max())
    return [lam for lam in range(-bound, bound + 1) if p(lam) == 0]


def is_main_rational_eigenvalue(B, lam) -> bool:
    """Exact main test for a rational eigenvalue of the divisor.

    Main iff some vector of the ``B^T``-eigenspace for ``lam`` has nonzero
    coordinate sum.
    """
    rows = [[Fraction(int(x)) for x in row] for row in np.asarray(B, dtype=object).tolist()]
    k = len(rows)
    lam = Fraction(lam)
    shifted = [[rows[j][i] - (lam if i == j else 0) for j in range(k)] for i in range(k)]
    basis = nullspace(shifted)
    if not basis:
        raise ValueError(f"{lam} is not an eigenvalue")
    return any(sum(v) != 0 for v in basis)
