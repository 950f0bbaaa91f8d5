"""Rule matrix construction and exact mod-p linear algebra.

The rule matrix realizes one CA time step on the flattened configuration
vector: row 0 couples the root to itself (d) and its three children
(a, b, c); every other row couples a vertex to its parent (c), itself (d)
and, below the boundary level, its two children (a, b). Each entry is
tagged with its coefficient label so the block pattern can be checked
symbolically, independent of the residues a,b,c,d happen to take.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    FormatError,
    SingularMatrix,
)
from .field import PrimeField
from .tree import TreeShape


@dataclass(frozen=True)
class Params:
    """Local-rule coefficients over Z_p.

    a, b weight the two children, c the parent, d the cell itself
    (at the root, a, b, c weight the three children). All four must be
    nonzero unless allow_zero is set.
    """

    a: int
    b: int
    c: int
    d: int
    field: PrimeField
    allow_zero: bool = False

    def __post_init__(self):
        p = self.field.p
        for name in "abcd":
            v = getattr(self, name)
            if not 0 <= v < p:
                raise ValueError(f"coefficient {name}={v} outside [0, {p})")
            if v == 0 and not self.allow_zero:
                raise ValueError(f"coefficient {name} must be nonzero (pass allow_zero to relax)")

    @property
    def p(self) -> int:
        return self.field.p

    def coeff(self, label: str) -> int:
        return getattr(self, label)


@dataclass(frozen=True)
class RuleMatrix:
    """Square mod-p matrix of order 1+3(2^n-1), stored row-sparse.

    rows[r] lists (column, label) pairs with label in {a,b,c,d};
    iterating a row costs its nonzero count.
    """

    shape: TreeShape
    params: Params
    rows: tuple[tuple[tuple[int, str], ...], ...]
    _dense: np.ndarray = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.order
        dense = np.zeros((n, n), dtype=np.int64)
        for r, row in enumerate(self.rows):
            for col, label in row:
                dense[r, col] = self.params.coeff(label)
        dense.setflags(write=False)
        object.__setattr__(self, "_dense", dense)

    @property
    def order(self) -> int:
        return self.shape.total_vertices

    @property
    def p(self) -> int:
        return self.params.p

    def dense(self) -> np.ndarray:
        """Dense residue matrix (read-only view)."""
        return self._dense

    def label_at(self, r: int, c: int) -> str:
        """Coefficient label of entry (r, c): one of '0', 'a', 'b', 'c', 'd'."""
        for col, label in self.rows[r]:
            if col == c:
                return label
        return "0"

    def label_grid(self) -> list[list[str]]:
        n = self.order
        return [[self.label_at(r, c) for c in range(n)] for r in range(n)]


def build_rule_matrix(shape: TreeShape, params: Params) -> RuleMatrix:
    """Assemble the rule matrix from the parent/children maps."""
    rows = []
    for v in range(shape.total_vertices):
        entries = []
        pi = shape.parent_index(v)
        if pi is not None:
            entries.append((pi, "c"))
        entries.append((v, "d"))
        kids = shape.child_indices(v)
        if pi is None:
            # root: three children weighted a, b, c
            for ci, label in zip(kids, ("a", "b", "c")):
                entries.append((ci, label))
        else:
            for ci, label in zip(kids, ("a", "b")):
                entries.append((ci, label))
        entries.sort()
        rows.append(tuple(entries))
    return RuleMatrix(shape=shape, params=params, rows=tuple(rows))


# ---------------------------------------------------------------------------
# Gaussian elimination over Z_p (dense working copies; partial pivoting by
# first nonzero residue, ties broken by lowest row index)


def _as_matrix(m) -> tuple[np.ndarray, int]:
    if isinstance(m, RuleMatrix):
        return m.dense().copy(), m.p
    raise TypeError(f"expected RuleMatrix, got {type(m).__name__}")


def det_mod(mat: np.ndarray, p: int) -> int:
    """Determinant of a square matrix over Z_p by elimination."""
    m = mat.astype(np.int64).copy() % p
    n = m.shape[0]
    det = 1
    for i in range(n):
        pivot = next((r for r in range(i, n) if m[r, i] != 0), None)
        if pivot is None:
            return 0
        if pivot != i:
            m[[i, pivot]] = m[[pivot, i]]
            det = (-det) % p
        pv = int(m[i, i])
        det = det * pv % p
        inv = pow(pv, -1, p)
        for r in range(i + 1, n):
            f = m[r, i] * inv % p
            if f:
                m[r, i:] = (m[r, i:] - f * m[i, i:]) % p
    return det


def rref_mod(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over Z_p; returns (rref, pivot columns)."""
    m = mat.astype(np.int64).copy() % p
    n_rows, n_cols = m.shape
    pivots = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if m[i, c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        for i in range(n_rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def det_mod_p(m: RuleMatrix) -> int:
    mat, p = _as_matrix(m)
    return det_mod(mat, p)


def rank_mod_p(m: RuleMatrix) -> int:
    mat, p = _as_matrix(m)
    _, pivots = rref_mod(mat, p)
    return len(pivots)


def linalg_report(m: RuleMatrix) -> "LinAlgReport":
    mat, p = _as_matrix(m)
    det = det_mod(mat, p)
    rank = len(rref_mod(mat, p)[1])
    return LinAlgReport(det=det, rank=rank, nullity=m.order - rank, invertible=det != 0)


@dataclass(frozen=True)
class LinAlgReport:
    det: int
    rank: int
    nullity: int
    invertible: bool


def invert(m: RuleMatrix) -> np.ndarray:
    """Inverse matrix over Z_p; raises SingularMatrix if det = 0."""
    mat, p = _as_matrix(m)
    n = mat.shape[0]
    aug = np.hstack([mat, np.eye(n, dtype=np.int64)])
    red, pivots = rref_mod(aug, p)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix(f"rule matrix is singular mod {p}")
    return red[:, n:]


def kernel_basis_mod(mat: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of the null space of mat over Z_p (one vector per free column)."""
    red, pivots = rref_mod(mat, p)
    n_cols = mat.shape[1]
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.zeros(n_cols, dtype=np.int64)
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-red[r, fc]) % p
        basis.append(v)
    return basis


def kernel_basis(m: RuleMatrix) -> list[np.ndarray]:
    mat, p = _as_matrix(m)
    return kernel_basis_mod(mat, p)


@dataclass(frozen=True)
class SolutionSet:
    """Affine solution set of M x = y over Z_p.

    Either inconsistent (y outside the column space) or the coset
    particular + span(kernel), of size p^len(kernel).
    """

    p: int
    order: int
    consistent: bool
    particular: Optional[np.ndarray] = None
    kernel: tuple[np.ndarray, ...] = ()

    def count(self) -> int:
        return self.p ** len(self.kernel) if self.consistent else 0

    def enumerate(self) -> Iterable[np.ndarray]:
        """Yield every solution (caller is responsible for capping)."""
        if not self.consistent:
            return
        import itertools

        for coeffs in itertools.product(range(self.p), repeat=len(self.kernel)):
            x = self.particular.copy()
            for k, v in zip(coeffs, self.kernel):
                x = (x + k * v) % self.p
            yield x


def solve(m: RuleMatrix, y: np.ndarray) -> SolutionSet:
    """Full preimage set of y under the matrix map."""
    mat, p = _as_matrix(m)
    y = np.asarray(y, dtype=np.int64) % p
    n = mat.shape[0]
    if y.shape != (n,):
        raise DimensionMismatch(f"expected vector of length {n}, got shape {y.shape}")
    aug = np.hstack([mat, y.reshape(-1, 1)])
    red, pivots = rref_mod(aug, p)
    if n in pivots:  # pivot in the augmented column: inconsistent
        return SolutionSet(p=p, order=n, consistent=False)
    x = np.zeros(n, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = red[r, n]
    kern = kernel_basis_mod(mat, p)
    return SolutionSet(p=p, order=n, consistent=True, particular=x, kernel=tuple(kern))


# ---------------------------------------------------------------------------
# Text formats

_MAGIC_DENSE = "treeca-matrix"
_MAGIC_COO = "treeca-matrix-coo"


def format_matrix(m: RuleMatrix, sparse: bool = False) -> str:
    """Serialize in the v1 text format (dense by default, COO if sparse)."""
    dense = m.dense()
    if not sparse:
        lines = [f"{_MAGIC_DENSE} 1 {m.shape.n} {m.p}"]
        lines += [" ".join(str(int(v)) for v in row) for row in dense]
    else:
        triples = [
            (r, c, int(dense[r, c]))
            for r in range(m.order)
            for c, _ in m.rows[r]
            if dense[r, c] != 0
        ]
        lines = [f"{_MAGIC_COO} 1 {m.shape.n} {m.p} {len(triples)}"]
        lines += [f"{r} {c} {v}" for r, c, v in triples]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> tuple[int, int, np.ndarray]:
    """Parse either v1 text format; returns (n, p, dense matrix)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty matrix text")
    head = lines[0].split()
    if head[0] == _MAGIC_DENSE and head[1] == "1" and len(head) == 4:
        n, p = int(head[2]), int(head[3])
        order = 1 + 3 * (2**n - 1)
        if len(lines) - 1 != order:
            raise FormatError(f"expected {order} rows, got {len(lines) - 1}")
        mat = np.array([[int(v) for v in ln.split()] for ln in lines[1:]], dtype=np.int64)
        if mat.shape != (order, order):
            raise FormatError(f"expected {order}x{order} matrix, got {mat.shape}")
    elif head[0] == _MAGIC_COO and head[1] == "1" and len(head) == 5:
        n, p, nnz = int(head[2]), int(head[3]), int(head[4])
        order = 1 + 3 * (2**n - 1)
        if len(lines) - 1 != nnz:
            raise FormatError(f"expected {nnz} triples, got {len(lines) - 1}")
        mat = np.zeros((order, order), dtype=np.int64)
        for ln in lines[1:]:
            r, c, v = (int(t) for t in ln.split())
            mat[r, c] = v
    else:
        raise FormatError(f"unrecognized matrix header {lines[0]!r}")
    if (mat < 0).any() or (mat >= p).any():
        raise FormatError(f"entries outside [0, {p})")
    return n, p, mat
