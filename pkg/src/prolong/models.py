"""Concrete algebras and matrix families attached to the rank-3 symbol m(k).

Polynomial realization of the Heisenberg algebra n(k) by contact generating
functions:

    E_i -> y_i,    F_i -> (-1)^i x_{k-i},    N -> (-1)^(k+1).

With [E_i, F_{k-i}] = (-1)^i N and {x_0, y_0} = 1 the constant representing
N must carry the sign (-1)^(k+1); it is recorded as ``n_sign`` in the model
metadata.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import comb, factorial
from typing import Sequence

from .exact_linalg import RatMatrix, Subspace, inverse, nullspace_rows
from .lie_core import AlgebraError, GradedAlgebra, build_algebra
from .polynomials import Grading, WeightedPolynomial, contact_bracket, monomials, weight


def _require_k(k: int, least: int) -> None:
    if not isinstance(k, int) or k < least:
        raise ValueError(f"k must be an integer >= {least}, got {k!r}")


# ---------------------------------------------------------------------------
# abstract algebras


def make_m(k: int) -> GradedAlgebra:
    """The (k+4)-dimensional fundamental algebra m(k) on X, E_1..E_k, F_{k-1}, F_k, N."""
    _require_k(k, 2)
    basis = [("X", -1)] + [(f"E_{i}", -i) for i in range(1, k + 1)]
    basis += [(f"F_{k - 1}", -1), (f"F_{k}", -2), ("N", -2)]
    brackets = [("X", f"E_{i}", [(f"E_{i + 1}", 1)]) for i in range(1, k)]
    brackets += [
        ("X", f"F_{k - 1}", [(f"F_{k}", 1)]),
        (f"F_{k - 1}", "E_1", [("N", 1)]),
    ]
    return build_algebra(basis, brackets, metadata={"family": "m", "k": k})


def make_gprime(k: int) -> GradedAlgebra:
    """First partial prolongation g'(k), dimension 2k+4."""
    _require_k(k, 2)
    basis = [(f"E_{i}", -i) for i in range(k + 1)]
    basis += [(f"F_{i}", k - 2 - i) for i in range(k + 1)]
    basis += [("N", -2), ("X", -1)]
    brackets = [(f"E_{i}", f"F_{k - i}", [("N", (-1) ** i)]) for i in range(k + 1)]
    brackets += [("X", f"E_{i}", [(f"E_{i + 1}", 1)]) for i in range(k)]
    brackets += [("X", f"F_{i}", [(f"F_{i + 1}", 1)]) for i in range(k)]
    return build_algebra(basis, brackets, metadata={"family": "gprime", "k": k})


def make_heisenberg(k: int) -> tuple[GradedAlgebra, RatMatrix]:
    """Heisenberg n(k) with its standard grading and the symplectic matrix J.

    J is the matrix of sigma in the basis (E_0..E_k, F_0..F_k), where
    [u, v] = sigma(u, v) N.
    """
    _require_k(k, 2)
    basis = [(f"E_{i}", -1) for i in range(k + 1)]
    basis += [(f"F_{i}", -1) for i in range(k + 1)]
    basis += [("N", -2)]
    brackets = [(f"E_{i}", f"F_{k - i}", [("N", (-1) ** i)]) for i in range(k + 1)]
    alg = build_algebra(basis, brackets, metadata={"family": "heisenberg", "k": k})
    n = 2 * k + 2
    rows: list[dict[int, int]] = [{} for _ in range(n)]
    for i in range(k + 1):
        j = k - i
        rows[i][k + 1 + j] = (-1) ** i
        rows[k + 1 + j][i] = -((-1) ** i)
    return alg, RatMatrix(n, n, rows)


def second_degrees(k: int) -> dict[str, int]:
    """Degrees of the n(k) basis in the grading inherited from g'(k)."""
    out = {f"E_{i}": -i for i in range(k + 1)}
    out.update({f"F_{i}": k - 2 - i for i in range(k + 1)})
    out["N"] = -2
    return out


# ---------------------------------------------------------------------------
# rational normal curve, Hankel matrices, secant ideals


@dataclass(frozen=True)
class HankelMatrix:
    """Catalecticant matrix; entry (i, j) is (i+j)! * x_{i+j}."""

    k: int
    r: int

    @property
    def nrows(self) -> int:
        return self.r + 2

    @property
    def ncols(self) -> int:
        return self.k - self.r

    def entry(self, i: int, j: int) -> tuple[int, int]:
        """(coefficient, variable index) of entry (i, j)."""
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError((i, j))
        return factorial(i + j), i + j

    def polynomial(self, i: int, j: int) -> WeightedPolynomial:
        c, v = self.entry(i, j)
        return WeightedPolynomial.x(self.k, v) * c

    def evaluate(self, xs: Sequence[object]) -> RatMatrix:
        return RatMatrix.from_rows(
            [
                [Fraction(self.entry(i, j)[0]) * Fraction(xs[self.entry(i, j)[1]]) for j in range(self.ncols)]
                for i in range(self.nrows)
            ]
        )

    def column_subsets(self) -> list[tuple[int, ...]]:
        return list(combinations(range(self.ncols), self.nrows))


def _check_r(k: int, r: int) -> None:
    if not isinstance(r, int) or r < 0 or r + 2 > k - r:
        raise ValueError(f"secant index r={r} out of range for k={k} (need 0 <= r and r+2 <= k-r)")


def hankel(k: int, r: int) -> HankelMatrix:
    _require_k(k, 2)
    _check_r(k, r)
    return HankelMatrix(k, r)


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def maximal_minor(H: HankelMatrix, cols: Sequence[int]) -> WeightedPolynomial:
    """Determinant of the square submatrix on ``cols`` (rows in natural order)."""
    n = 2 * H.k + 3
    size = H.nrows
    terms: dict[tuple[int, ...], Fraction] = {}
    for p in permutations(range(size)):
        coeff = _perm_sign(p)
        e = [0] * n
        for i in range(size):
            c, v = H.entry(i, cols[p[i]])
            coeff *= c
            e[v] += 1
        key = tuple(e)
        terms[key] = terms.get(key, 0) + coeff
    return WeightedPolynomial(H.k, terms)


def secant_ideal(k: int, r: int) -> list[WeightedPolynomial]:
    """All maximal minors of hankel(k, r), columns in lexicographic order."""
    H = hankel(k, r)
    return [maximal_minor(H, cols) for cols in H.column_subsets()]


def secant_ideal_names(k: int, r: int) -> list[str]:
    return [f"M{r}({','.join(map(str, cols))})" for cols in hankel(k, r).column_subsets()]


def curve_point(k: int, u, v) -> tuple[Fraction, ...]:
    """[u^k : u^(k-1) v : ... : v^k / k!] (a fixed affine representative)."""
    u, v = Fraction(u), Fraction(v)
    if u == 0 and v == 0:
        raise ValueError("curve parameters (u, v) must not both vanish")
    return tuple(u ** (k - i) * v ** i / factorial(i) for i in range(k + 1))


def secant_point(k: int, r: int, params: Sequence[tuple[object, object, object]]) -> tuple[Fraction, ...]:
    """sum_i w_i * curve_point(k, u_i, v_i) for r+1 triples (u_i, v_i, w_i)."""
    if len(params) != r + 1:
        raise ValueError(f"need {r + 1} parameter triples, got {len(params)}")
    acc = [Fraction(0)] * (k + 1)
    for u, v, w in params:
        p = curve_point(k, u, v)
        w = Fraction(w)
        acc = [a + w * c for a, c in zip(acc, p)]
    return tuple(acc)


# ---------------------------------------------------------------------------
# n + s in the contact model


def heisenberg_polynomials(k: int) -> dict[str, WeightedPolynomial]:
    P = WeightedPolynomial
    out = {f"E_{i}": P.y(k, i) for i in range(k + 1)}
    out.update({f"F_{i}": P.x(k, k - i) * (-1) ** i for i in range(k + 1)})
    out["N"] = P.constant(k, (-1) ** (k + 1))
    return out


def s_polynomials(k: int) -> dict[str, WeightedPolynomial]:
    """X, H, Y, Z1, Z2 and the 2x2 Hankel minors spanning I_2(C)."""
    P = WeightedPolynomial
    x = [P.x(k, i) for i in range(k + 1)]
    y = [P.y(k, i) for i in range(k + 1)]
    zero = P(k)
    out = {
        "X": sum((x[i] * y[i + 1] for i in range(k)), zero),
        "H": sum((x[i] * y[i] * (k - 2 * i) for i in range(k + 1)), zero),
        "Y": sum((x[i] * y[i - 1] * (i * (k + 1 - i)) for i in range(1, k + 1)), zero),
        "Z1": sum((x[i] * y[i] for i in range(k + 1)), zero),
        "Z2": P.z(k),
    }
    for name, poly in zip(secant_ideal_names(k, 0), secant_ideal(k, 0)):
        out[name] = poly
    return out


def _monomial_coords(polys: Sequence[WeightedPolynomial]):
    index: dict[tuple[int, ...], int] = {}
    for p in polys:
        for e in p.terms:
            index.setdefault(e, len(index))
    return index


def realize(polys: dict[str, WeightedPolynomial], degrees: dict[str, int], *, metadata=None) -> GradedAlgebra:
    """Graded algebra spanned by named polynomials under the contact bracket."""
    names = list(polys)
    index = _monomial_coords(list(polys.values()))
    results = {}
    for a, b in combinations(range(len(names)), 2):
        br = contact_bracket(polys[names[a]], polys[names[b]])
        results[(a, b)] = br
        for e in br.terms:
            index.setdefault(e, len(index))
    vecs = [{index[e]: c for e, c in polys[nm].terms.items()} for nm in names]
    # express brackets in the named basis by solving against the monomial matrix
    span = Subspace.span(len(index), vecs)
    if span.dim != len(names):
        raise AlgebraError("basis polynomials are linearly dependent")
    # echelon coordinates -> named coordinates
    C = RatMatrix.from_rows([span.coordinates(v) for v in vecs]).transpose()
    to_named = inverse(C)
    brackets = []
    for (a, b), br in results.items():
        c = span.coordinates({index[e]: v for e, v in br.terms.items()})
        if c is None:
            raise AlgebraError(f"{{{names[a]}, {names[b]}}} leaves the span: not closed")
        coeffs = to_named.apply(c)
        brackets.append((names[a], names[b], [(names[t], x) for t, x in enumerate(coeffs) if x]))
    return build_algebra([(nm, degrees[nm]) for nm in names], brackets, metadata=metadata)


@dataclass
class SModel:
    k: int
    algebra: GradedAlgebra  # n + s with the Heisenberg grading
    polynomials: dict[str, WeightedPolynomial]
    s_names: list[str]
    matrices: dict[str, RatMatrix]  # action on n_-1 in basis (E_0..E_k, F_0..F_k)
    second_degree: dict[str, int]
    metadata: dict = field(default_factory=dict)

    @property
    def s_dim(self) -> int:
        return len(self.s_names)

    def fixed_g0(self) -> Subspace:
        """s as a subspace of Hom(n_-1, n_-1), coordinates a * (2k+2) + b."""
        d = 2 * self.k + 2
        vecs = []
        for nm in self.s_names:
            M = self.matrices[nm]
            vecs.append({a * d + b: M[b, a] for a in range(d) for b in range(d) if M[b, a]})
        return Subspace.span(d * d, vecs)


def make_s(k: int) -> SModel:
    """n(k) + s(k) realized by contact polynomials; s = gl(2) + <Id> + I_2(C)."""
    _require_k(k, 3)
    npolys = heisenberg_polynomials(k)
    spolys = s_polynomials(k)
    polys = {**npolys, **spolys}
    degrees = {nm: (-2 if nm == "N" else -1) for nm in npolys}
    degrees.update({nm: 0 for nm in spolys})
    meta = {"family": "n+s", "k": k, "n_sign": (-1) ** (k + 1)}
    alg = realize(polys, degrees, metadata=meta)
    nminus = [f"E_{i}" for i in range(k + 1)] + [f"F_{i}" for i in range(k + 1)]
    pos = {nm: i for i, nm in enumerate(nminus)}
    matrices = {}
    for s in spolys:
        rows: list[dict[int, Fraction]] = [{} for _ in nminus]
        si = alg.index(s)
        for a, nm in enumerate(nminus):
            for t, x in alg.bracket_basis(si, alg.index(nm)).items():
                rows[pos[alg.basis[t].name]][a] = x
        matrices[s] = RatMatrix(len(nminus), len(nminus), rows)
    second = second_degrees(k)
    for nm, p in spolys.items():
        w = weight(p, Grading.SECOND)
        second[nm] = w - 2
    return SModel(k, alg, polys, list(spolys), matrices, second, meta)


def maximal_extension(k: int) -> Subspace:
    """Largest candidate for a graded subalgebra of csp with negative part <X>.

    Weight-2 polynomials u of nonnegative (second) degree d with
    ad_X^(d+1) u in <X>, plus X itself, as a subspace over weight-2
    monomials.  Any graded subalgebra with negative part <X> lies inside it.
    """
    _require_k(k, 3)
    mons = monomials(k, 2)
    pos = {e: i for i, e in enumerate(mons)}
    P = WeightedPolynomial
    X = s_polynomials(k)["X"]
    by_deg: dict[int, list[tuple[int, ...]]] = {}
    for e in mons:
        d = weight(P(k, {e: 1}), Grading.SECOND) - 2
        by_deg.setdefault(d, []).append(e)
    xvec = {pos[e]: c for e, c in X.terms.items()}
    ann_x = Subspace.span(len(mons), [xvec]).annihilator()
    vecs = [xvec]
    for d, block in sorted(by_deg.items()):
        if d < 0:
            continue
        images = []
        for e in block:
            u = P(k, {e: 1})
            for _ in range(d + 1):
                u = contact_bracket(X, u)
            images.append({pos[m]: c for m, c in u.terms.items()})
        rows = []
        for f in ann_x:
            row = {}
            for j, img in enumerate(images):
                s = sum((c * img.get(i, 0) for i, c in f.items()), Fraction(0))
                if s:
                    row[j] = s
            if row:
                rows.append(row)
        ker = nullspace_rows(rows, len(block))
        for v in ker.basis:
            vecs.append({pos[block[j]]: c for j, c in v.items()})
    return Subspace.span(len(mons), vecs)


def s_span(k: int) -> Subspace:
    mons = monomials(k, 2)
    pos = {e: i for i, e in enumerate(mons)}
    return Subspace.span(
        len(mons), [{pos[e]: c for e, c in p.terms.items()} for p in s_polynomials(k).values()]
    )


def expected_i2_dim(k: int) -> int:
    return comb(k, 2)


def gl2_irrep(m: int) -> list[RatMatrix]:
    """gl(2) acting irreducibly on binary forms of degree m-1: u d/dv, v d/du, u d/du - v d/dv, Id.

    Basis of the m-dimensional space: u^(m-1-j) v^j, j = 0..m-1.
    """
    if m < 2:
        raise ValueError("representation dimension must be at least 2")
    d = m - 1
    e = [{} for _ in range(m)]
    f = [{} for _ in range(m)]
    for j in range(m):
        if j > 0:
            e[j - 1][j] = j  # u d/dv lowers the v-exponent
        if j < d:
            f[j + 1][j] = d - j  # v d/du raises it
    h = [{j: d - 2 * j} for j in range(m)]
    ident = [{j: 1} for j in range(m)]
    return [RatMatrix(m, m, rows) for rows in (e, f, h, ident)]
