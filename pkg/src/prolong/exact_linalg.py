"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`.  Matrices are stored densely or
sparsely depending on their fill; every routine returns canonical results
(reduced row-echelon form) so that subspaces compare equal exactly when
they are equal.

Dense elimination is fraction-free (Bareiss) on integer-scaled rows with a
single exact normalization at the end.  Sparse elimination works on
primitive integer rows (content removed after every update) in
Gauss-Jordan fashion.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

Scalar = Fraction

# Fill ratio below which a RatMatrix keeps sparse row storage.
SPARSE_DENSITY = 0.1

SparseVec = dict  # column index -> Fraction, never stores zeros


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _clean(vec: Mapping[int, object]) -> dict[int, Fraction]:
    return {int(i): _frac(v) for i, v in vec.items() if v != 0}


class RatMatrix:
    """Immutable rational matrix with dense or sparse row storage."""

    __slots__ = ("nrows", "ncols", "_rows", "_sparse")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[Mapping[int, object]]):
        if len(rows) != nrows:
            raise ValueError(f"expected {nrows} rows, got {len(rows)}")
        clean = []
        for r in rows:
            d = _clean(r)
            if d and (min(d) < 0 or max(d) >= ncols):
                raise IndexError("column index out of range")
            clean.append(d)
        self.nrows = nrows
        self.ncols = ncols
        nnz = sum(len(r) for r in clean)
        size = nrows * ncols
        self._sparse = size > 0 and nnz < SPARSE_DENSITY * size
        if self._sparse:
            self._rows = tuple(clean)
        else:
            self._rows = tuple(
                tuple(r.get(j, Fraction(0)) for j in range(ncols)) for r in clean
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], ncols: int | None = None) -> RatMatrix:
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [{j: v for j, v in enumerate(r) if v != 0} for r in rows])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> RatMatrix:
        return cls(nrows, ncols, [{} for _ in range(nrows)])

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls(n, n, [{i: 1} for i in range(n)])

    @property
    def is_sparse(self) -> bool:
        return self._sparse

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry {ij} outside {self.shape}")
        if self._sparse:
            return self._rows[i].get(j, Fraction(0))
        return self._rows[i][j]

    def row(self, i: int) -> dict[int, Fraction]:
        r = self._rows[i]
        if self._sparse:
            return dict(r)
        return {j: v for j, v in enumerate(r) if v}

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        return [self.row(i) for i in range(self.nrows)]

    def to_lists(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(self.ncols)] for i in range(self.nrows)]

    def transpose(self) -> RatMatrix:
        cols: list[dict[int, Fraction]] = [{} for _ in range(self.ncols)]
        for i in range(self.nrows):
            for j, v in self.row(i).items():
                cols[j][i] = v
        return RatMatrix(self.ncols, self.nrows, cols)

    def apply(self, vec: Sequence[object] | Mapping[int, object]) -> list[Fraction]:
        """Return ``M @ vec`` as a dense list."""
        if isinstance(vec, Mapping):
            v = _clean(vec)
        else:
            if len(vec) != self.ncols:
                raise ValueError("dimension mismatch")
            v = {j: _frac(x) for j, x in enumerate(vec) if x != 0}
        out = []
        for i in range(self.nrows):
            r = self.row(i)
            if len(r) < len(v):
                out.append(sum((c * v[j] for j, c in r.items() if j in v), Fraction(0)))
            else:
                out.append(sum((c * r[j] for j, c in v.items() if j in r), Fraction(0)))
        return out

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        orows = other.sparse_rows()
        rows = []
        for i in range(self.nrows):
            acc: dict[int, Fraction] = {}
            for k, a in self.row(i).items():
                for j, b in orows[k].items():
                    acc[j] = acc.get(j, Fraction(0)) + a * b
            rows.append(acc)
        return RatMatrix(self.nrows, other.ncols, rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.sparse_rows() == other.sparse_rows()

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(r.items())) for r in self.sparse_rows())))

    def __repr__(self) -> str:
        kind = "sparse" if self._sparse else "dense"
        return f"RatMatrix({self.nrows}x{self.ncols}, {kind})"


# ---------------------------------------------------------------------------
# integer row helpers


def _primitive(row: dict[int, int]) -> dict[int, int]:
    """Divide out the content and make the leading entry positive."""
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {j: v // g for j, v in row.items()}
    return row


def _integer_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    return {j: int(v * den) for j, v in row.items() if v}


# ---------------------------------------------------------------------------
# elimination back ends


def _rref_dense_bareiss(rows: list[list[Fraction]], ncols: int) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Fraction-free forward pass followed by exact normalization."""
    m = []
    for r in rows:
        den = 1
        for v in r:
            den = lcm(den, v.denominator)
        ir = [int(v * den) for v in r]
        if any(ir):
            m.append(ir)
    nrows = len(m)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        p = pr[c]
        for i in range(r + 1, nrows):
            mi = m[i]
            a = mi[c]
            if a == 0:
                # still rescale so every trailing entry stays a minor
                for j in range(c + 1, ncols):
                    if mi[j]:
                        q, rem = divmod(p * mi[j], prev)
                        assert rem == 0, "Bareiss division not exact"
                        mi[j] = q
                continue
            for j in range(c + 1, ncols):
                q, rem = divmod(p * mi[j] - a * pr[j], prev)
                assert rem == 0, "Bareiss division not exact"
                mi[j] = q
            mi[c] = 0
        prev = p
        pivots.append(c)
        r += 1
    # exact normalization and back substitution
    ech = [
        {j: Fraction(v, m[i][pivots[i]]) for j, v in enumerate(m[i]) if v}
        for i in range(len(pivots))
    ]
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        for t in range(i):
            a = ech[t].get(c)
            if a:
                row_t = ech[t]
                for j, v in ech[i].items():
                    nv = row_t.get(j, 0) - a * v
                    if nv:
                        row_t[j] = nv
                    else:
                        row_t.pop(j, None)
    return ech, pivots


def _rref_sparse(rows: Iterable[Mapping[int, Fraction]]) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Gauss-Jordan on primitive integer rows; shortest rows first."""
    work = [_integer_row(r) for r in rows]
    work = [r for r in work if r]
    work.sort(key=len)
    piv_rows: dict[int, dict[int, int]] = {}  # pivot column -> row
    col_index: dict[int, set[int]] = {}  # column -> pivot columns of rows touching it

    def reduce(v: dict[int, int]) -> dict[int, int]:
        hits = [c for c in v if c in piv_rows]
        while hits:
            for c in hits:
                a = v.get(c)
                if not a:
                    continue
                p = piv_rows[c]
                b = p[c]
                g = gcd(a, b)
                fa, fb = b // g, a // g
                if fa != 1:
                    v = {j: x * fa for j, x in v.items()}
                for j, x in p.items():
                    nv = v.get(j, 0) - fb * x
                    if nv:
                        v[j] = nv
                    else:
                        v.pop(j, None)
            hits = [c for c in v if c in piv_rows]
        return v

    for v in work:
        v = reduce(dict(v))
        if not v:
            continue
        v = _primitive(v)
        c = min(v)
        # eliminate the new pivot column from existing rows
        for pc in list(col_index.get(c, ())):
            row = piv_rows[pc]
            a = row.get(c)
            if not a:
                continue
            b = v[c]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            if fa != 1:
                row = {j: x * fa for j, x in row.items()}
            for j, x in v.items():
                nv = row.get(j, 0) - fb * x
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
                    s = col_index.get(j)
                    if s is not None:
                        s.discard(pc)
            row = _primitive(row)
            piv_rows[pc] = row
            for j in row:
                col_index.setdefault(j, set()).add(pc)
        piv_rows[c] = v
        for j in v:
            col_index.setdefault(j, set()).add(c)

    pivots = sorted(piv_rows)
    out = []
    for c in pivots:
        row = piv_rows[c]
        lead = row[c]
        out.append({j: Fraction(x, lead) for j, x in row.items()})
    return out, pivots


def rref_rows(rows: Sequence[Mapping[int, object]], ncols: int, *, method: str = "auto") -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row-echelon form of the span of ``rows`` (sparse dict rows).

    ``method`` is ``"bareiss"``, ``"sparse"``, ``"naive"`` or ``"auto"``.
    The result does not depend on the method.
    """
    clean = [_clean(r) for r in rows]
    clean = [r for r in clean if r]
    if not clean:
        return [], []
    if method == "auto":
        nnz = sum(len(r) for r in clean)
        method = "sparse" if nnz < SPARSE_DENSITY * len(clean) * ncols else "bareiss"
    if method == "bareiss":
        dense = [[r.get(j, Fraction(0)) for j in range(ncols)] for r in clean]
        return _rref_dense_bareiss(dense, ncols)
    if method == "sparse":
        return _rref_sparse(clean)
    if method == "naive":
        return _rref_naive(clean, ncols)
    raise ValueError(f"unknown elimination method {method!r}")


def _rref_naive(rows: list[dict[int, Fraction]], ncols: int) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Textbook Gauss-Jordan over Fraction; kept as an independent check."""
    m = [[r.get(j, Fraction(0)) for j in range(ncols)] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [{j: v for j, v in enumerate(m[i]) if v} for i in range(r)], pivots


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of Q^n given by its canonical reduced row-echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: Sequence[dict[int, Fraction]], pivots: Sequence[int]):
        # trusted constructor; use Subspace.span for arbitrary input
        self.ambient_dim = ambient_dim
        self.basis = tuple(basis)
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence[object] | Mapping[int, object]], *, method: str = "auto") -> Subspace:
        rows = []
        for v in vectors:
            if isinstance(v, Mapping):
                d = _clean(v)
            else:
                if len(v) != ambient_dim:
                    raise ValueError("vector length differs from ambient dimension")
                d = {j: _frac(x) for j, x in enumerate(v) if x != 0}
            if d and max(d) >= ambient_dim:
                raise IndexError("coordinate outside ambient space")
            rows.append(d)
        basis, pivots = rref_rows(rows, ambient_dim, method=method)
        return cls(ambient_dim, basis, pivots)

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, [], [])

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, [{i: Fraction(1)} for i in range(ambient_dim)], range(ambient_dim))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def dense_basis(self) -> list[list[Fraction]]:
        return [[v.get(j, Fraction(0)) for j in range(self.ambient_dim)] for v in self.basis]

    def coordinates(self, vec: Mapping[int, object] | Sequence[object]) -> list[Fraction] | None:
        """Coefficients of ``vec`` in the echelon basis, or None if not a member."""
        if not isinstance(vec, Mapping):
            vec = {j: x for j, x in enumerate(vec) if x != 0}
        v = _clean(vec)
        coeffs = [v.get(p, Fraction(0)) for p in self.pivots]
        for a, b in zip(coeffs, self.basis):
            if a:
                for j, x in b.items():
                    nv = v.get(j, 0) - a * x
                    if nv:
                        v[j] = nv
                    else:
                        v.pop(j, None)
        return None if v else coeffs

    def __contains__(self, vec) -> bool:
        return self.coordinates(vec) is not None

    def contains_subspace(self, other: Subspace) -> bool:
        self._check(other)
        return all(self.coordinates(v) is not None for v in other.basis)

    def sum(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace.span(self.ambient_dim, list(self.basis) + list(other.basis))

    def annihilator(self) -> list[dict[int, Fraction]]:
        """Sparse functionals cutting out this subspace (one per non-pivot column)."""
        cols: dict[int, list[tuple[int, Fraction]]] = {}
        for t, b in enumerate(self.basis):
            for j, x in b.items():
                cols.setdefault(j, []).append((t, x))
        pivset = set(self.pivots)
        out = []
        for c in range(self.ambient_dim):
            if c in pivset:
                continue
            f = {c: Fraction(1)}
            for t, x in cols.get(c, ()):
                f[self.pivots[t]] = -x
            out.append(f)
        return out

    def _check(self, other: Subspace) -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


# ---------------------------------------------------------------------------
# operations


def _rows_of(M: RatMatrix | Sequence[Mapping[int, object]]) -> tuple[list[dict[int, Fraction]], int | None]:
    if isinstance(M, RatMatrix):
        return M.sparse_rows(), M.ncols
    return [_clean(r) for r in M], None


def _method_for(M: RatMatrix) -> str:
    return "sparse" if M.is_sparse else "bareiss"


def nullspace_rows(rows: Sequence[Mapping[int, object]], ncols: int, *, method: str = "auto") -> Subspace:
    """Kernel of the matrix whose sparse rows are given."""
    ech, pivots = rref_rows(rows, ncols, method=method)
    pivset = set(pivots)
    colmap: dict[int, list[tuple[int, Fraction]]] = {}
    for i, r in enumerate(ech):
        for j, x in r.items():
            if j not in pivset:
                colmap.setdefault(j, []).append((i, x))
    vecs = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for i, x in colmap.get(f, ()):
            v[pivots[i]] = -x
        vecs.append(v)
    # free-variable vectors are independent; one more pass makes them canonical
    return Subspace.span(ncols, vecs)


def nullspace(M: RatMatrix, *, method: str | None = None) -> Subspace:
    """Right kernel of ``M`` as a canonical subspace."""
    return nullspace_rows(M.sparse_rows(), M.ncols, method=method or _method_for(M))


def rank(M: RatMatrix, *, method: str | None = None) -> int:
    ech, _ = rref_rows(M.sparse_rows(), M.ncols, method=method or _method_for(M))
    return len(ech)


def intersect(A: Subspace, B: Subspace) -> Subspace:
    """A ∩ B, computed by cutting the smaller space with the other's annihilator."""
    A._check(B)
    if A.dim > B.dim:
        A, B = B, A
    if A.dim == 0:
        return A
    # only functionals that can see A matter
    support: set[int] = set()
    for v in A.basis:
        support.update(v)
    bcols: dict[int, list[tuple[int, Fraction]]] = {}
    for t, b in enumerate(B.basis):
        for j, x in b.items():
            bcols.setdefault(j, []).append((t, x))
    pivset = set(B.pivots)
    candidates = set(c for c in support if c not in pivset)
    for t, p in enumerate(B.pivots):
        if p in support:
            candidates.update(j for j in B.basis[t] if j not in pivset)
    acols: dict[int, list[tuple[int, Fraction]]] = {}
    for s, v in enumerate(A.basis):
        for j, x in v.items():
            acols.setdefault(j, []).append((s, x))
    rows = []
    for c in sorted(candidates):
        row: dict[int, Fraction] = {}
        for s, x in acols.get(c, ()):
            row[s] = row.get(s, 0) + x
        for t, bx in bcols.get(c, ()):
            for s, x in acols.get(B.pivots[t], ()):
                row[s] = row.get(s, 0) - bx * x
        row = {s: x for s, x in row.items() if x}
        if row:
            rows.append(row)
    kernel = nullspace_rows(rows, A.dim)
    vecs = []
    for comb in kernel.basis:
        acc: dict[int, Fraction] = {}
        for s, a in comb.items():
            for j, x in A.basis[s].items():
                acc[j] = acc.get(j, 0) + a * x
        vecs.append(acc)
    return Subspace.span(A.ambient_dim, vecs)


def solve(M: RatMatrix, b: Sequence[object]) -> list[Fraction] | None:
    """Some x with ``M x = b`` (free variables zero), or None if inconsistent."""
    if len(b) != M.nrows:
        raise ValueError("right-hand side length differs from row count")
    n = M.ncols
    rows = M.sparse_rows()
    aug = []
    for r, bi in zip(rows, b):
        row = dict(r)
        if bi != 0:
            row[n] = _frac(bi)
        aug.append(row)
    ech, pivots = rref_rows(aug, n + 1, method=_method_for(M))
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for r, p in zip(ech, pivots):
        x[p] = r.get(n, Fraction(0))
    return x


def inverse(M: RatMatrix) -> RatMatrix:
    """Inverse of a square matrix; raises ValueError if singular."""
    n = M.nrows
    if M.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = []
    for i, r in enumerate(M.sparse_rows()):
        row = dict(r)
        row[n + i] = Fraction(1)
        aug.append(row)
    ech, pivots = rref_rows(aug, 2 * n, method="bareiss")
    if pivots[:n] != list(range(n)) or len(pivots) != n:
        raise ValueError("matrix is singular")
    return RatMatrix(n, n, [{j - n: x for j, x in r.items() if j >= n} for r in ech])
