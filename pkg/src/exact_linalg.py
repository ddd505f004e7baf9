#!/usr/bin/env python3
"""
Exact integer linear algebra for dynkin-walk
Dense matrices of Python integers: determinant, ranks over Q and GF(2),
Smith normal form with unimodular witnesses, and the minor-gcd oracle
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import DimensionError, InvalidParameterError, MatrixFormatError

logger = logging.getLogger("dynkin-walk.exact_linalg")

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class BigMatrix:
    """Dense row-major matrix of arbitrary-precision integers"""
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError(f"negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "BigMatrix":
        """Build from nested sequences; cols is needed only for matrices with no rows"""
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else (cols or 0)
        flat = []
        for i, row in enumerate(rows):
            if len(row) != n_cols:
                raise DimensionError(f"row {i + 1} has {len(row)} entries, expected {n_cols}")
            flat.extend(int(x) for x in row)
        return cls(n_rows, n_cols, tuple(flat))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def to_lists(self) -> List[List[int]]:
        """Mutable copy used as a working array by the kernels"""
        return [list(self.row(i)) for i in range(self.rows)]

    def __matmul__(self, other: "BigMatrix") -> "BigMatrix":
        return mat_mul(self, other)


@dataclass(frozen=True)
class SnfResult:
    """Smith normal form diag(d) together with unimodular U, V such that U*M*V = diag(d)"""
    diag: Tuple[int, ...]
    U: BigMatrix
    V: BigMatrix

    def invariant_product(self, k: int) -> int:
        """d_1 * ... * d_k"""
        return math.prod(self.diag[:k])

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)


# ---------------------------------------------------------------------------
# construction and plumbing
# ---------------------------------------------------------------------------

def identity(n: int) -> BigMatrix:
    return BigMatrix(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))


def zeros(rows: int, cols: int) -> BigMatrix:
    return BigMatrix(rows, cols, (0,) * (rows * cols))


def diagonal_matrix(diag: Sequence[int], rows: int, cols: int) -> BigMatrix:
    """rows x cols matrix carrying diag on its main diagonal"""
    out = [[0] * cols for _ in range(rows)]
    for i, d in enumerate(diag):
        out[i][i] = d
    return BigMatrix.from_rows(out, cols=cols)


def transpose(m: BigMatrix) -> BigMatrix:
    return BigMatrix(m.cols, m.rows, tuple(m[i, j] for j in range(m.cols) for i in range(m.rows)))


def submatrix(m: BigMatrix, rows: Sequence[int], cols: Sequence[int]) -> BigMatrix:
    """Select rows and columns (0-based) in the given order"""
    return BigMatrix(len(rows), len(cols), tuple(m[i, j] for i in rows for j in cols))


def block_pad(hat: BigMatrix) -> BigMatrix:
    """The (k+1)x(k+1) matrix [[0, 0], [hat, 0]] for a k x k block"""
    if not hat.is_square:
        raise DimensionError(f"padding needs a square block, got {hat.rows}x{hat.cols}")
    k = hat.rows
    out = [[0] * (k + 1)]
    for i in range(k):
        out.append(list(hat.row(i)) + [0])
    return BigMatrix.from_rows(out)


def mat_mul(a: BigMatrix, b: BigMatrix) -> BigMatrix:
    """Exact product a*b"""
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    b_cols = [b.column(j) for j in range(b.cols)]
    entries = []
    for i in range(a.rows):
        row = a.row(i)
        support = [(k, x) for k, x in enumerate(row) if x]
        for col in b_cols:
            entries.append(sum(x * col[k] for k, x in support))
    return BigMatrix(a.rows, b.cols, tuple(entries))


def mat_vec(a: BigMatrix, v: Sequence[int]) -> Vector:
    """Exact product a*v"""
    if a.cols != len(v):
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by a vector of length {len(v)}")
    return tuple(sum(x * y for x, y in zip(a.row(i), v) if x) for i in range(a.rows))


# ---------------------------------------------------------------------------
# matrix text format
# ---------------------------------------------------------------------------

def parse_matrix(text: str) -> BigMatrix:
    """Read 'rows cols' followed by rows of space-separated decimal integers"""
    lines = [(no, line.strip()) for no, line in enumerate(text.splitlines(), start=1)]
    lines = [(no, line) for no, line in lines if line and not line.startswith("#")]
    if not lines:
        raise MatrixFormatError(1, "empty input")

    header_no, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise MatrixFormatError(header_no, f"expected 'rows cols', got {header!r}")
    try:
        rows, cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise MatrixFormatError(header_no, f"non-integer dimensions {header!r}") from None
    if rows < 0 or cols < 0:
        raise MatrixFormatError(header_no, "dimensions must be nonnegative")

    body = lines[1:]
    if len(body) != rows:
        last = body[-1][0] if body else header_no
        raise MatrixFormatError(last, f"expected {rows} matrix rows, found {len(body)}")

    data = []
    for no, line in body:
        tokens = line.split()
        if len(tokens) != cols:
            raise MatrixFormatError(no, f"expected {cols} entries, found {len(tokens)}")
        try:
            data.append([int(t) for t in tokens])
        except ValueError:
            raise MatrixFormatError(no, f"non-integer entry in {line!r}") from None
    return BigMatrix.from_rows(data, cols=cols)


def format_matrix(m: BigMatrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    for i in range(m.rows):
        lines.append(" ".join(str(x) for x in m.row(i)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# determinant and ranks
# ---------------------------------------------------------------------------

def det_bareiss(m: BigMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination"""
    if not m.is_square:
        raise DimensionError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.to_lists()
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
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def rank_rational(m: BigMatrix) -> int:
    """Rank over Q by fraction-free elimination with full pivoting"""
    a = m.to_lists()
    rows, cols = m.rows, m.cols
    prev = 1
    rank = 0
    for k in range(min(rows, cols)):
        pivot_at = None
        best = None
        for i in range(k, rows):
            row = a[i]
            for j in range(k, cols):
                x = row[j]
                if x and (best is None or abs(x) < best):
                    best, pivot_at = abs(x), (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot_at is None:
            break
        pi, pj = pivot_at
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, rows):
            row_i = a[i]
            lead = row_i[k]
            for j in range(k + 1, cols):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
        rank += 1
    return rank


def rank_mod2(m: BigMatrix) -> int:
    """Rank over GF(2); rows are packed into integer bitsets"""
    pivots = {}
    rank = 0
    for i in range(m.rows):
        bits = 0
        for j, x in enumerate(m.row(i)):
            if x & 1:
                bits |= 1 << j
        while bits:
            top = bits.bit_length() - 1
            if top in pivots:
                bits ^= pivots[top]
            else:
                pivots[top] = bits
                rank += 1
                break
    return rank


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def _smallest_nonzero(a: List[List[int]], t: int) -> Optional[Tuple[int, int]]:
    best = None
    at = None
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            x = row[j]
            if x and (best is None or abs(x) < best):
                best, at = abs(x), (i, j)
                if best == 1:
                    return at
    return at


def smith_normal_form(m: BigMatrix) -> SnfResult:
    """Smith normal form with row/column witnesses

    The pivot is always the nonzero entry of smallest absolute value in the
    trailing submatrix. Every row operation is mirrored on U and every column
    operation on V, so U*M*V equals the returned diagonal by construction.
    """
    rows, cols = m.rows, m.cols
    a = m.to_lists()
    u = identity(rows).to_lists()
    v = identity(cols).to_lists()

    def swap_rows(i: int, j: int):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int):
        # row_dst += q * row_src
        for mat in (a, u):
            r_dst, r_src = mat[dst], mat[src]
            for j, x in enumerate(r_src):
                if x:
                    r_dst[j] += q * x

    def add_col(dst: int, src: int, q: int):
        for mat in (a, v):
            for row in mat:
                x = row[src]
                if x:
                    row[dst] += q * x

    steps = 0
    for t in range(min(rows, cols)):
        while True:
            at = _smallest_nonzero(a, t)
            if at is None:
                break
            i, j = at
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            pivot = a[t][t]
            steps += 1

            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // pivot))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // pivot))

            if any(a[i][t] for i in range(t + 1, rows)) or any(a[t][j] for j in range(t + 1, cols)):
                continue

            # row and column are clear; enforce divisibility on the trailing block
            offender = None
            for i in range(t + 1, rows):
                if any(x % pivot for x in a[i][t + 1:]):
                    offender = i
                    break
            if offender is None:
                break
            add_row(t, offender, 1)

        if _smallest_nonzero(a, t) is None:
            break

    diag = []
    for t in range(min(rows, cols)):
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        diag.append(a[t][t])

    logger.debug(f"SNF of {rows}x{cols} matrix finished after {steps} pivot steps")
    return SnfResult(tuple(diag), BigMatrix.from_rows(u, cols=rows), BigMatrix.from_rows(v, cols=cols))


def is_smith_normal_form(diag: Sequence[int]) -> bool:
    """Nonnegative, zeros trailing, and each entry divides the next"""
    if any(d < 0 for d in diag):
        return False
    for d, e in zip(diag, diag[1:]):
        if d == 0:
            if e != 0:
                return False
        elif e % d:
            return False
    return True


def snf_witness_holds(m: BigMatrix, snf: SnfResult) -> bool:
    """U*M*V equals diag(d) exactly and both witnesses are unimodular"""
    product = mat_mul(mat_mul(snf.U, m), snf.V)
    if product != diagonal_matrix(snf.diag, m.rows, m.cols):
        return False
    return abs(det_bareiss(snf.U)) == 1 and abs(det_bareiss(snf.V)) == 1


def minor_gcd_oracle(m: BigMatrix, k: int) -> int:
    """gcd of all k x k minors by brute force; meant for small matrices"""
    if k < 1 or k > min(m.rows, m.cols):
        raise DimensionError(f"minor order {k} outside 1..{min(m.rows, m.cols)}")
    g = 0
    for rows in itertools.combinations(range(m.rows), k):
        for cols in itertools.combinations(range(m.cols), k):
            g = math.gcd(g, det_bareiss(submatrix(m, rows, cols)))
            if g == 1:
                return 1
    return g


# ---------------------------------------------------------------------------
# rational solves
# ---------------------------------------------------------------------------

def solve_rational(m: BigMatrix, b: Sequence[int]) -> List[Fraction]:
    """Exact solution of m*x = b for m of full column rank

    Row echelon form over Fractions on the augmented system, then back
    substitution; extra rows must reduce to 0 = 0.
    """
    if len(b) != m.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {m.rows}")
    n_rows, n_cols = m.rows, m.cols
    a = [[Fraction(x) for x in m.row(i)] + [Fraction(b[i])] for i in range(n_rows)]

    piv_r = 0
    for piv_c in range(n_cols):
        for i_row in range(piv_r, n_rows):
            if a[i_row][piv_c] != 0:
                break
        else:
            raise DimensionError(f"column {piv_c + 1} is dependent; matrix lacks full column rank")
        if i_row != piv_r:
            a[piv_r], a[i_row] = a[i_row], a[piv_r]
        fp = a[piv_r][piv_c]
        for r in range(piv_r + 1, n_rows):
            fr = a[r][piv_c]
            if fr == 0:
                continue
            frp = fr / fp
            for c in range(piv_c, n_cols + 1):
                a[r][c] -= a[piv_r][c] * frp
        piv_r += 1

    for r in range(n_cols, n_rows):
        if a[r][n_cols] != 0:
            raise InvalidParameterError("linear system is inconsistent")

    sol = [Fraction(0)] * n_cols
    for r in range(n_cols - 1, -1, -1):
        s = a[r][n_cols] - sum((a[r][c] * sol[c] for c in range(r + 1, n_cols)), Fraction(0))
        sol[r] = s / a[r][r]
    return sol
