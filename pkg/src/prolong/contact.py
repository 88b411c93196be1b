"""Degree-by-degree polynomial model of the prolongation of n(k) + s(k).

Component i >= 1 is the space of Standard-homogeneous polynomials g of
weight i+2 with {x_j, g} and {y_j, g} in component i-1, where

    {x_j, g} = dg/dy_j + (x_j/2) dg/dz,   {y_j, g} = -dg/dx_j + (y_j/2) dg/dz.

Both operators are homogeneous for the Second grading too, so each
component is solved one Second-weight block at a time.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import permutations
from fractions import Fraction
from math import factorial, prod
from typing import Mapping, Sequence

from .exact_linalg import Subspace, nullspace_rows
from .lie_core import AlgebraError
from .models import heisenberg_polynomials, make_heisenberg, make_s, secant_ideal
from .polynomials import Grading, WeightedPolynomial, contact_bracket, monomials, variable_weights
from .prolongation import LinearMapSpace

# Largest component index the oracle will try before giving up.
DEFAULT_ORACLE_CAP = 32


class OracleError(RuntimeError):
    """The polynomial oracle disagrees with the expected structure."""


# ---------------------------------------------------------------------------
# embedding of n + s


def embed_ns(k: int) -> dict[str, WeightedPolynomial]:
    """Basis names of n(k) + s(k) mapped to their generating polynomials.

    The map is checked to be a homomorphism on n(k) against the abstract
    Heisenberg brackets; s(k) is defined through its polynomials and its
    closure is checked when the algebra is realized.
    """
    if not isinstance(k, int) or k < 3:
        raise ValueError(f"k must be an integer >= 3, got {k!r}")
    heis, _ = make_heisenberg(k)
    npolys = heisenberg_polynomials(k)
    names = heis.names
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            want = WeightedPolynomial(k)
            for t, c in heis.bracket_basis(a, b).items():
                want = want + npolys[names[t]] * c
            got = contact_bracket(npolys[names[a]], npolys[names[b]])
            if got != want:
                raise AlgebraError(
                    f"embedding is not a homomorphism on [{names[a]},{names[b]}]: "
                    f"{got.to_text()} != {want.to_text()}"
                )
    return dict(make_s(k).polynomials)


# ---------------------------------------------------------------------------
# monomial bookkeeping


def second_weight(k: int, e: Sequence[int]) -> int:
    return sum(w * a for w, a in zip(variable_weights(k, Grading.SECOND), e))


def _positions(k: int, w: int) -> dict[tuple[int, ...], int]:
    return {e: i for i, e in enumerate(monomials(k, w))}


def poly_vector(f: WeightedPolynomial, pos: Mapping[tuple[int, ...], int]) -> dict[int, Fraction]:
    try:
        return {pos[e]: c for e, c in f.terms.items()}
    except KeyError as exc:
        raise ValueError(f"monomial {exc.args[0]} is not in the given weight space") from None


def vector_poly(k: int, w: int, vec: Mapping[int, Fraction]) -> WeightedPolynomial:
    mons = monomials(k, w)
    return WeightedPolynomial(k, {mons[i]: c for i, c in vec.items()})


def _twice_ops(k: int, e: tuple[int, ...]) -> list[dict[tuple[int, ...], int]]:
    """2{x_j, m} for j = 0..k, then 2{y_j, m}, for the monomial m = x^e."""
    n = 2 * k + 2
    c = e[n]
    out = []
    for j in range(k + 1):
        img: dict[tuple[int, ...], int] = {}
        yj = k + 1 + j
        if e[yj]:
            t = list(e)
            t[yj] -= 1
            img[tuple(t)] = 2 * e[yj]
        if c:
            t = list(e)
            t[n] -= 1
            t[j] += 1
            t = tuple(t)
            img[t] = img.get(t, 0) + c
        out.append(img)
    for j in range(k + 1):
        img = {}
        xj = j
        yj = k + 1 + j
        if e[xj]:
            t = list(e)
            t[xj] -= 1
            img[tuple(t)] = -2 * e[xj]
        if c:
            t = list(e)
            t[n] -= 1
            t[yj] += 1
            t = tuple(t)
            img[t] = img.get(t, 0) + c
        out.append(img)
    return out


def _op_shift(k: int, op: int) -> int:
    """Second-weight change of operator ``op`` (x_j ops first, then y_j)."""
    j = op % (k + 1)
    return -(2 - j) if op <= k else -j


# ---------------------------------------------------------------------------
# components


@dataclass
class Component:
    """Component i of the oracle: a subspace of the weight-(i+2) polynomials."""

    k: int
    index: int
    space: Subspace

    @property
    def weight(self) -> int:
        return self.index + 2

    @property
    def dim(self) -> int:
        return self.space.dim

    def polynomials(self) -> list[WeightedPolynomial]:
        return [vector_poly(self.k, self.weight, v) for v in self.space.basis]

    def blocks(self) -> dict[int, list[dict[tuple[int, ...], Fraction]]]:
        """Basis vectors grouped by Second weight (each must be homogeneous)."""
        mons = monomials(self.k, self.weight)
        out: dict[int, list[dict[tuple[int, ...], Fraction]]] = {}
        for v in self.space.basis:
            ws = {second_weight(self.k, mons[i]) for i in v}
            if len(ws) != 1:
                raise OracleError(f"component {self.index} is not homogeneous for the second grading")
            out.setdefault(ws.pop(), []).append({mons[i]: c for i, c in v.items()})
        return out

    def second_dims(self) -> dict[int, int]:
        return {w - 2: len(vs) for w, vs in sorted(self.blocks().items())}


def s_component(k: int) -> Component:
    """Component 0: the image of s(k) in the weight-2 polynomials."""
    polys = make_s(k).polynomials
    s_names = make_s(k).s_names
    pos = _positions(k, 2)
    space = Subspace.span(len(pos), [poly_vector(polys[nm], pos) for nm in s_names])
    return Component(k, 0, space)


def _solve_block(k: int, unknowns: list[tuple[int, ...]], prev_blocks) -> list[dict[int, Fraction]]:
    """Nullspace of the membership conditions on one Second-weight block."""
    # each previous block as an echelon system over its own monomials
    reduced: dict[int, tuple] = {}
    rows: dict[tuple[int, tuple[int, ...]], dict[int, int]] = {}
    for u, e in enumerate(unknowns):
        for op, img in enumerate(_twice_ops(k, e)):
            if not img:
                continue
            target = second_weight(k, e) + _op_shift(k, op)
            if target not in reduced:
                basis = prev_blocks.get(target, [])
                reduced[target] = _echelon_block(basis)
            piv_rows = reduced[target]
            vec: dict[tuple[int, ...], Fraction] = {m: Fraction(c) for m, c in img.items()}
            for m, row in piv_rows.items():
                a = vec.get(m)
                if a:
                    for mm, x in row.items():
                        nv = vec.get(mm, 0) - a * x
                        if nv:
                            vec[mm] = nv
                        else:
                            vec.pop(mm, None)
            for m, x in vec.items():
                rows.setdefault((op, m), {})[u] = x
    ker = nullspace_rows(list(rows.values()), len(unknowns))
    return list(ker.basis)


def _echelon_block(basis: list[dict[tuple[int, ...], Fraction]]) -> dict[tuple[int, ...], dict]:
    """Pivot monomial -> reduced basis vector, for membership tests."""
    if not basis:
        return {}
    mons = sorted({m for v in basis for m in v}, reverse=True)
    pos = {m: i for i, m in enumerate(mons)}
    sp = Subspace.span(len(mons), [{pos[m]: c for m, c in v.items()} for v in basis])
    return {mons[p]: {mons[i]: c for i, c in v.items()} for p, v in zip(sp.pivots, sp.basis)}


def gns_component_space(k: int, i: int, previous: Sequence[Component]) -> Component:
    if i < 1:
        raise ValueError("component index must be >= 1")
    if len(previous) < i or any(c.index != t for t, c in enumerate(previous[:i])):
        raise ValueError(f"components 0..{i - 1} must be supplied in order")
    prev = previous[i - 1]
    prev_blocks = prev.blocks()
    w = i + 2
    mons = monomials(k, w)
    pos = {e: t for t, e in enumerate(mons)}
    by_block: dict[int, list[tuple[int, ...]]] = {}
    for e in mons:
        by_block.setdefault(second_weight(k, e), []).append(e)
    vecs = []
    for sw in sorted(by_block):
        unknowns = by_block[sw]
        for v in _solve_block(k, unknowns, prev_blocks):
            vecs.append({pos[unknowns[u]]: c for u, c in v.items()})
    return Component(k, i, Subspace.span(len(mons), vecs))


def gns_component(k: int, i: int, previous: Sequence[Component]) -> list[WeightedPolynomial]:
    """Basis of component i given components 0..i-1."""
    return gns_component_space(k, i, previous).polynomials()


def secant_span(k: int, i: int) -> Subspace:
    """span(secant_ideal(k, i)) in the weight-(i+2) polynomials; zero if i is out of range."""
    pos = _positions(k, i + 2)
    if i + 2 > k - i:
        return Subspace.zero(len(pos))
    return Subspace.span(len(pos), [poly_vector(p, pos) for p in secant_ideal(k, i)])


# ---------------------------------------------------------------------------
# full oracle


@dataclass
class OracleResult:
    k: int
    components: list[Component]
    negative: dict[int, int] = field(default_factory=dict)

    def dims(self) -> dict[int, int]:
        """Per-degree dimensions in the Standard grading."""
        out = dict(self.negative)
        for c in self.components:
            if c.dim:
                out[c.index] = c.dim
        return dict(sorted(out.items()))

    @property
    def total_dim(self) -> int:
        return sum(self.dims().values())

    def polynomials(self, i: int) -> list[WeightedPolynomial]:
        return self.components[i].polynomials()


def _default_cap() -> int:
    env = os.environ.get("PROLONG_MAX_DEGREE")
    return int(env) if env else DEFAULT_ORACLE_CAP


def oracle_full(k: int, cap: int | None = None) -> OracleResult:
    """All components of the polynomial model, checked against the secant ideals."""
    if not isinstance(k, int) or k < 3:
        raise ValueError(f"k must be an integer >= 3, got {k!r}")
    cap = _default_cap() if cap is None else cap
    embed_ns(k)
    comps = [s_component(k)]
    i = 1
    while True:
        if i > cap:
            raise OracleError(f"oracle reached the cap {cap} before vanishing (k={k})")
        comp = gns_component_space(k, i, comps)
        expected = secant_span(k, i)
        if comp.space != expected:
            raise OracleError(
                f"component {i} for k={k} has dim {comp.dim}, secant ideal span has dim {expected.dim}"
                " (or the spaces differ)"
            )
        comps.append(comp)
        if comp.dim == 0:
            break
        i += 1
    return OracleResult(k, comps, {-2: 1, -1: 2 * k + 2})


def bidegree_table(k: int, result: OracleResult | None = None) -> dict[tuple[int, int], int]:
    """Dimensions by (Standard degree, Second degree)."""
    res = result if result is not None else oracle_full(k)
    table: dict[tuple[int, int], int] = {}

    def bump(key):
        table[key] = table.get(key, 0) + 1

    for nm, p in heisenberg_polynomials(k).items():
        e = next(iter(p.terms))
        bump((sum(e) + e[-1] - 2, second_weight(k, e) - 2))
    for comp in res.components:
        for sd, n in comp.second_dims().items():
            table[(comp.index, sd)] = table.get((comp.index, sd), 0) + n
    return dict(sorted(table.items()))


def marginal(table: Mapping[tuple[int, int], int], axis: int) -> dict[int, int]:
    """Sum a bidegree table onto one grading (0: Standard, 1: Second)."""
    out: dict[int, int] = {}
    for key, n in table.items():
        out[key[axis]] = out.get(key[axis], 0) + n
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# symmetric tensors and I_2 of the rational normal curve


def _flat(idx: Sequence[int], n: int) -> int:
    out = 0
    for a in idx:
        out = out * n + a
    return out


def poly_to_tensor(f: WeightedPolynomial, order: int) -> dict[int, Fraction]:
    """Symmetric tensor of all order-th partial derivatives of a form in the x's."""
    if not f.uses_only_x():
        raise ValueError("only polynomials in the x variables have a tensor form")
    n = f.k + 1
    out = {}
    for e, c in f.terms.items():
        alpha = e[:n]
        if sum(alpha) != order:
            raise ValueError(f"polynomial is not a form of degree {order}")
        val = c * prod(factorial(a) for a in alpha)
        base = [a for a in range(n) for _ in range(alpha[a])]
        for idx in set(permutations(base)):
            out[_flat(idx, n)] = val
    return out


def tensor_to_poly(k: int, tensor: Mapping[int, Fraction], order: int) -> WeightedPolynomial:
    """Inverse of :func:`poly_to_tensor` on symmetric tensors."""
    n = k + 1
    terms: dict[tuple[int, ...], Fraction] = {}
    for flat, val in tensor.items():
        idx = []
        for _ in range(order):
            flat, r = divmod(flat, n)
            idx.append(r)
        if idx != sorted(idx, reverse=True):
            continue  # one representative per multiset
        alpha = [0] * (2 * k + 3)
        for a in idx:
            alpha[a] += 1
        terms[tuple(alpha)] = Fraction(val) / prod(factorial(a) for a in alpha[:n])
    return WeightedPolynomial(k, terms)


def i2_curve(k: int) -> LinearMapSpace:
    """I_2 of the rational normal curve as Hessians, a subspace of Hom(E, E*)."""
    n = k + 1
    space = Subspace.span(n * n, [poly_to_tensor(q, 2) for q in secant_ideal(k, 0)])
    return LinearMapSpace(n, n, space=space)


def tensor_space_to_polys(k: int, space: Subspace, order: int) -> Subspace:
    """A space of symmetric tensors as a subspace of the weight-``order`` polynomials."""
    pos = _positions(k, order)
    return Subspace.span(len(pos), [poly_vector(tensor_to_poly(k, v, order), pos) for v in space.basis])

