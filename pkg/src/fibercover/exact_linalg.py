"""Exact integer matrix algebra: Smith normal form and modular linear solving.

Everything runs on Python ints, so torsion coefficients come out exact no
matter how badly intermediate entries blow up.  Diagonal entries of a Smith
form are normalized non-negative with d1 | d2 | ... so that canonical forms
can be compared directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence


class IntMatrix:
    """Immutable matrix of exact integers.  Degenerate shapes (0 rows or
    0 columns) are allowed so that trivial groups need no special casing."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]], shape: Optional[tuple[int, int]] = None):
        rows = tuple(tuple(int(x) for x in row) for row in data)
        if shape is not None:
            r, c = shape
            if len(rows) not in (0, r) or any(len(row) != c for row in rows):
                raise ValueError(f"data does not match shape {shape}")
            if len(rows) == 0 and r > 0:
                raise ValueError(f"data does not match shape {shape}")
        else:
            r = len(rows)
            c = len(rows[0]) if rows else 0
            if any(len(row) != c for row in rows):
                raise ValueError("ragged rows")
        object.__setattr__(self, "rows", r)
        object.__setattr__(self, "cols", c)
        object.__setattr__(self, "_data", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], shape=(n, n))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], shape=(rows, cols))

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        r = rows if rows is not None else len(entries)
        c = cols if cols is not None else len(entries)
        data = [[entries[i] if i == j and i < len(entries) else 0 for j in range(c)] for i in range(r)]
        return cls(data, shape=(r, c))

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self._data)

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._data == other._data
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self._data]!r})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = [other.column(j) for j in range(other.cols)]
        data = [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self._data]
        return IntMatrix(data, shape=(self.rows, other.cols))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise ValueError(f"vector length {len(vec)} != cols {self.cols}")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self._data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix([self.column(j) for j in range(self.cols)], shape=(self.cols, self.rows))

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(row) for row in self._data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if pivot is None:
                    return 0
                m[k], m[pivot] = m[pivot], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and self.det() in (1, -1)

    def inverse_unimodular(self) -> "IntMatrix":
        """Exact inverse of a unimodular matrix (integer entries guaranteed)."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
               for i, row in enumerate(self._data)]
        for col in range(n):
            pivot = next((i for i in range(col, n) if aug[i][col] != 0), None)
            if pivot is None:
                raise ValueError("matrix is singular")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            pv = aug[col][col]
            aug[col] = [x / pv for x in aug[col]]
            for i in range(n):
                if i != col and aug[i][col] != 0:
                    f = aug[i][col]
                    aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
        inv = [row[n:] for row in aug]
        if any(x.denominator != 1 for row in inv for x in row):
            raise ValueError("matrix is not unimodular")
        return IntMatrix([[int(x) for x in row] for row in inv], shape=(n, n))


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ of @ V == D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    of: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        n = min(self.D.rows, self.D.cols)
        return tuple(self.D[i, i] for i in range(n))

    def verify(self) -> bool:
        if self.U @ self.of @ self.V != self.D:
            return False
        if not (self.U.is_unimodular() and self.V.is_unimodular()):
            return False
        d = self.diagonal
        if any(x < 0 for x in d):
            return False
        for a, b in zip(d, d[1:]):
            if a == 0 and b != 0:
                return False
            if a != 0 and b % a != 0:
                return False
        return True


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Diagonalize A by unimodular row/column operations.

    Classic pivoting scheme: move the smallest nonzero entry of the working
    block to the corner, clear its row and column by Euclidean steps, then
    fold in any entry the corner does not divide and repeat.
    """
    if A.rows == 0 or A.cols == 0:
        raise ValueError("Smith normal form of an empty matrix")
    r, c = A.rows, A.cols
    m = [list(row) for row in A]
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        m[dst] = [a + q * b for a, b in zip(m[dst], m[src])]
        u[dst] = [a + q * b for a, b in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in m:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        m[i] = [-a for a in m[i]]
        u[i] = [-a for a in u[i]]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            if m[t][t] < 0:
                negate_row(t)
            dirty = False
            for i in range(t + 1, r):
                if m[i][t] != 0:
                    add_row(i, t, -(m[i][t] // m[t][t]))
                    if m[i][t] != 0:
                        dirty = True
            for j in range(t + 1, c):
                if m[t][j] != 0:
                    add_col(j, t, -(m[t][j] // m[t][t]))
                    if m[t][j] != 0:
                        dirty = True
            if dirty:
                continue
            pivot = m[t][t]
            offender = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if m[i][j] % pivot != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if m[t][t] == 0:
            break

    U = IntMatrix(u, shape=(r, r))
    V = IntMatrix(v, shape=(c, c))
    D = IntMatrix(m, shape=(r, c))
    return SmithDecomposition(U=U, D=D, V=V, of=A)


@dataclass(frozen=True)
class ModularSolution:
    """Solution set of A x = b (mod m): particular + kernel generators.

    For m > 0 the full solution set is particular + integer combinations of
    the kernel generators, all taken mod m.  For m = 0 the combinations run
    over all of Z.
    """

    particular: tuple[int, ...]
    kernel: tuple[tuple[int, ...], ...]
    modulus: int

    def all_solutions(self) -> list[tuple[int, ...]]:
        """Enumerate the solution set (modulus > 0 only; small cases)."""
        if self.modulus == 0:
            raise ValueError("solution set over Z is infinite")
        m = self.modulus
        seen = {self.particular}
        frontier = [self.particular]
        while frontier:
            x = frontier.pop()
            for k in self.kernel:
                y = tuple((a + b) % m for a, b in zip(x, k))
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return sorted(seen)


def _solve_single(d: int, rhs: int, m: int) -> Optional[tuple[int, int]]:
    """Solve d*y = rhs (mod m), m > 0.  Returns (particular y, kernel step)."""
    d %= m
    rhs %= m
    g = gcd(d, m)
    if rhs % g != 0:
        return None
    mg = m // g
    y = ((rhs // g) * pow(d // g, -1, mg)) % mg if mg > 1 else 0
    return y, mg


def solve_mod(A: IntMatrix, b: Sequence[int], m: int) -> Optional[ModularSolution]:
    """Solve A x = b (mod m); m = 0 means over the integers.

    Returns None when the system has no solution.  Kernel generators span
    the homogeneous solutions, so particular + span(kernel) is the full
    solution set.
    """
    if m < 0:
        raise ValueError("modulus must be >= 0")
    if len(b) != A.rows:
        raise ValueError(f"rhs length {len(b)} != rows {A.rows}")
    if A.cols == 0:
        consistent = all((x == 0 if m == 0 else x % m == 0) for x in b)
        return ModularSolution((), (), m) if consistent else None
    if A.rows == 0:
        part = (0,) * A.cols
        kern = tuple(tuple(int(i == j) for j in range(A.cols)) for i in range(A.cols))
        return ModularSolution(part, kern, m)

    snf = smith_normal_form(A)
    c2 = snf.U.apply(b)
    y_part = [0] * A.cols
    kernel_y: list[tuple[int, ...]] = []

    for j in range(A.cols):
        d = snf.D[j, j] if j < A.rows else 0
        rhs = c2[j] if j < A.rows else 0
        if m == 0:
            if d == 0:
                if rhs != 0:
                    return None
                kernel_y.append(tuple(int(i == j) for i in range(A.cols)))
            else:
                if rhs % d != 0:
                    return None
                y_part[j] = rhs // d
        else:
            solved = _solve_single(d, rhs, m)
            if solved is None:
                return None
            y_part[j], step = solved
            if step % m != 0:
                kernel_y.append(tuple(step * int(i == j) for i in range(A.cols)))
    for i in range(A.cols, A.rows):
        if (c2[i] != 0) if m == 0 else (c2[i] % m != 0):
            return None

    x_part = snf.V.apply(y_part)
    kernel_x = [snf.V.apply(k) for k in kernel_y]
    if m > 0:
        x_part = tuple(x % m for x in x_part)
        kernel_x = [tuple(x % m for x in k) for k in kernel_x]
        kernel_x = [k for k in kernel_x if any(k)]
    return ModularSolution(tuple(x_part), tuple(dict.fromkeys(tuple(k) for k in kernel_x)), m)
