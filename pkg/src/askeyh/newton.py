"""Newton bases, lower-triangular tables and basis-change matrices."""
from __future__ import annotations

import csv
import enum
import io
import json
from typing import Callable, Iterator, Sequence

from .numerics import EXACT, Field, Scalar, format_scalar

NodeSequence = Callable[[int], Scalar]


def nodes_from_list(values: Sequence[Scalar]) -> NodeSequence:
    values = list(values)

    def node(k: int) -> Scalar:
        return values[k]

    return node


class Shape(str, enum.Enum):
    LOWER_TRIANGULAR = "lower_triangular"
    LOWER_HESSENBERG = "lower_hessenberg"


class TriangularTable:
    """Rows 0..N of a lower-triangular (or lower-Hessenberg) matrix.

    Rows are produced by ``row_fn(n)`` on first access and cached.  Row ``n``
    has ``n + 1`` entries (``n + 2`` for Hessenberg); entries outside the
    band read as zero.
    """

    def __init__(self, N: int, row_fn: Callable[[int], list], *,
                 shape: Shape = Shape.LOWER_TRIANGULAR, unit_diagonal: bool = False,
                 field: Field = EXACT, name: str = ""):
        if N < 0:
            raise ValueError("N must be nonnegative")
        self.N = N
        self.shape = shape
        self.unit_diagonal = unit_diagonal
        self.field = field
        self.name = name
        self._row_fn = row_fn
        self._rows: dict[int, list] = {}

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], **kwargs) -> TriangularTable:
        rows = [list(r) for r in rows]
        return cls(len(rows) - 1, lambda n: rows[n], **kwargs)

    def width(self, n: int) -> int:
        return n + 2 if self.shape is Shape.LOWER_HESSENBERG else n + 1

    def row(self, n: int) -> list:
        if not 0 <= n <= self.N:
            raise IndexError(f"row {n} outside 0..{self.N}")
        r = self._rows.get(n)
        if r is None:
            r = list(self._row_fn(n))
            if len(r) != self.width(n):
                raise ValueError(f"row {n} has {len(r)} entries, expected {self.width(n)}")
            self._rows[n] = r
        return r

    def __getitem__(self, idx: tuple[int, int]) -> Scalar:
        n, k = idx
        if k < 0 or k >= self.width(n):
            return self.field.zero
        return self.row(n)[k]

    def rows(self) -> Iterator[list]:
        for n in range(self.N + 1):
            yield self.row(n)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.rows()]

    def to_json(self) -> str:
        return json.dumps([[format_scalar(v) for v in r] for r in self.rows()])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for r in self.rows():
            writer.writerow([format_scalar(v) for v in r])
        return buf.getvalue()

    def __repr__(self):
        return f"TriangularTable({self.name or '?'}, N={self.N}, {self.shape.value})"


def matmul(A: TriangularTable, B: TriangularTable, N: int | None = None) -> list[list]:
    """Rows 0..N of A @ B for lower-triangular A, B (dense lists, length n+1)."""
    N = min(A.N, B.N) if N is None else N
    zero = A.field.zero
    out = []
    for n in range(N + 1):
        arow = A.row(n)
        row = []
        for k in range(n + 1):
            s = zero
            for j in range(k, n + 1):
                s += arow[j] * B[j, k]
            row.append(s)
        out.append(row)
    return out


def basis_matrices(nodes: NodeSequence, N: int, field: Field = EXACT) -> tuple[TriangularTable, TriangularTable]:
    """V (monomial coefficients of v_n) and its inverse.

    V row n+1 is row n shifted by one minus x_n times row n.  Vinv column
    entries follow h_m(x_0..x_k) = h_m(x_0..x_{k-1}) + x_k h_{m-1}(x_0..x_k).
    """
    one, zero = field.one, field.zero
    xs = [nodes(k) for k in range(N + 1)]

    v_rows = [[one]]
    for n in range(N):
        prev = v_rows[-1]
        nxt = [zero] * (n + 2)
        for k, c in enumerate(prev):
            nxt[k + 1] += c
            nxt[k] -= xs[n] * c
        v_rows.append(nxt)

    # hom[k][m] = complete homogeneous h_m(x_0..x_k); Vinv[n][k] = hom[k][n-k]
    hom: list[list] = []
    for k in range(N + 1):
        col = [one]
        for m in range(1, N - k + 1):
            below = hom[k - 1][m] if k > 0 else zero
            col.append(below + xs[k] * col[m - 1])
        hom.append(col)
    vinv_rows = [[hom[k][n - k] for k in range(n + 1)] for n in range(N + 1)]

    V = TriangularTable.from_rows(v_rows, unit_diagonal=True, field=field, name="V")
    Vinv = TriangularTable.from_rows(vinv_rows, unit_diagonal=True, field=field, name="Vinv")
    return V, Vinv


def eval_in_newton(coeffs: Sequence[Scalar], nodes: NodeSequence, t: Scalar) -> Scalar:
    """sum_k coeffs[k] v_k(t), nested from the highest coefficient down."""
    if not coeffs:
        return 0 * t
    acc = coeffs[-1]
    for k in range(len(coeffs) - 2, -1, -1):
        acc = acc * (t - nodes(k)) + coeffs[k]
    return acc


def w_ratio(nodes: NodeSequence, n: int, k: int, t: Scalar) -> Scalar:
    """prod_{j=k}^{n-1} (t - nodes(j)); 1 when k == n."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    acc = 1 + 0 * t
    for j in range(k, n):
        acc *= t - nodes(j)
    return acc


def newton_value(nodes: NodeSequence, k: int, t: Scalar) -> Scalar:
    """v_k(t)."""
    return w_ratio(nodes, k, 0, t)


def poly_multiply(p: Sequence[Scalar], q: Sequence[Scalar]) -> list:
    if not p or not q:
        return []
    out = [0 * p[0]] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_eval(p: Sequence[Scalar], t: Scalar) -> Scalar:
    acc = 0 * t
    for c in reversed(p):
        acc = acc * t + c
    return acc


def poly_derivative(p: Sequence[Scalar]) -> list:
    return [k * p[k] for k in range(1, len(p))]
