"""Tanaka prolongation of graded Lie algebras and standard prolongation of
subspaces of Hom(V, W).

Elements of nonnegative degree are stored as their action on the negative
part: for ``u`` of degree ``p`` and each basis vector ``e_b`` of the base,
``u(e_b) = [u, e_b]`` is a vector over the *global* basis (base elements
first, then the components g_0, g_1, ... in order).

The degree-p unknown is the restriction of a map to g_{-1}; values on deeper
components follow from the derivation rule since the base is fundamental.
Component bases are the reduced echelon bases in the coordinates of
Hom(g_{-1}, g_{p-1}), index ``a * dim g_{p-1} + t``.
"""
from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact_linalg import RatMatrix, Subspace, intersect, nullspace_rows, solve
from .lie_core import AlgebraError, BasisElement, GradedAlgebra, is_fundamental

log = logging.getLogger(__name__)

DEFAULT_MAX_DEGREE = 64


class ProlongationError(RuntimeError):
    """Internal inconsistency while prolonging or assembling."""


def default_max_degree() -> int:
    env = os.environ.get("PROLONG_MAX_DEGREE")
    return int(env) if env else DEFAULT_MAX_DEGREE


def _axpy(acc: dict, vec: Mapping, a) -> None:
    for j, x in vec.items():
        nv = acc.get(j, 0) + a * x
        if nv:
            acc[j] = nv
        else:
            acc.pop(j, None)


@dataclass(frozen=True)
class ProlongElement:
    """A nonnegative-degree element, given by its action on the base."""

    degree: int
    images: tuple[dict[int, Fraction], ...]  # per base basis index, a global vector

    def maps(self, state: "TanakaState") -> dict[int, RatMatrix]:
        """Matrices component j -> component j+degree for each negative j."""
        out = {}
        for j in state.negative_degrees:
            src = state.base.component_indices(j)
            dst = state.component_globals(j + self.degree)
            pos = {g: r for r, g in enumerate(dst)}
            rows: list[dict[int, Fraction]] = [{} for _ in dst]
            for c, b in enumerate(src):
                for g, x in self.images[b].items():
                    rows[pos[g]][c] = x
            out[j] = RatMatrix(len(dst), len(src), rows)
        return out


@dataclass
class StepStats:
    degree: int
    unknowns: int
    equations: int
    dim: int
    seconds: float


class TanakaState:
    """Prolongation in progress: the base plus components g_0 .. g_p."""

    def __init__(self, base: GradedAlgebra):
        if any(d >= 0 for d in base.degrees):
            raise AlgebraError("base must be negatively graded")
        if not is_fundamental(base):
            raise AlgebraError("base is not generated by its degree -1 component")
        self.base = base
        self.n = base.dim
        self.negative_degrees = sorted({d for d in base.degrees}, reverse=True)
        self.gen = base.component_indices(-1)
        self.components: list[Subspace] = []  # in Hom(g_-1, g_{p-1}) coordinates
        self.elements: list[list[ProlongElement]] = []
        self.offsets: list[int] = []
        self.stats: list[StepStats] = []
        self._reps = self._bracket_representations()

    # -- global bookkeeping ----------------------------------------------
    @property
    def top(self) -> int:
        return len(self.components) - 1

    def component_globals(self, d: int) -> list[int]:
        if d < 0:
            return self.base.component_indices(d)
        if d > self.top:
            return []
        off = self.offsets[d]
        return list(range(off, off + len(self.elements[d])))

    def degree_of(self, g: int) -> int:
        if g < self.n:
            return self.base.basis[g].degree
        for d in range(len(self.offsets) - 1, -1, -1):
            if g >= self.offsets[d]:
                return d
        raise IndexError(g)

    def _element(self, g: int) -> ProlongElement:
        d = self.degree_of(g)
        return self.elements[d][g - self.offsets[d]]

    def act(self, g: int, b: int) -> dict[int, Fraction]:
        """[e_g, e_b] for a global index g and a base index b."""
        if g < self.n:
            return self.base.bracket_basis(g, b)
        return self._element(g).images[b]

    def _bracket_representations(self) -> dict[int, list[tuple[int, int, Fraction]]]:
        """Write each base element of degree <= -2 as sum c [e_a, e_w], a in g_-1."""
        reps: dict[int, list[tuple[int, int, Fraction]]] = {}
        for d in self.negative_degrees:
            if d == -1:
                continue
            target = self.base.component_indices(d)
            prev = self.base.component_indices(d + 1)
            pairs = [(a, w) for a in self.gen for w in prev]
            vecs = [self.base.bracket_basis(a, w) for a, w in pairs]
            pos = {g: r for r, g in enumerate(target)}
            rows: list[dict[int, Fraction]] = [{} for _ in target]
            for c, v in enumerate(vecs):
                for g, x in v.items():
                    rows[pos[g]][c] = x
            M = RatMatrix(len(target), len(pairs), rows)
            for r, b in enumerate(target):
                rhs = [Fraction(int(i == r)) for i in range(len(target))]
                sol = solve(M, rhs)
                if sol is None:
                    raise AlgebraError("base is not fundamental")
                reps[b] = [(a, w, c) for (a, w), c in zip(pairs, sol) if c]
        return reps

    # -- installing components -------------------------------------------
    def install(self, p: int, space: Subspace, elements: Sequence[ProlongElement]) -> None:
        if p != len(self.components):
            raise ProlongationError(f"installing degree {p} but next degree is {len(self.components)}")
        self.offsets.append(self.n + sum(len(e) for e in self.elements))
        self.components.append(space)
        self.elements.append(list(elements))

    def global_dim(self) -> int:
        return self.n + sum(len(e) for e in self.elements)

    # -- the linear system -------------------------------------------------
    def _lin_bracket(self, expr: dict[int, dict[int, Fraction]], b: int, sign: int) -> dict[int, dict[int, Fraction]]:
        """sign * [expr, e_b] for a linear expression global -> {unknown: coeff}."""
        out: dict[int, dict[int, Fraction]] = {}
        for g, coeffs in expr.items():
            for h, x in self.act(g, b).items():
                slot = out.setdefault(h, {})
                _axpy(slot, coeffs, sign * x)
                if not slot:
                    del out[h]
        return out

    def _merge(self, acc: dict, other: dict, scale) -> None:
        for h, coeffs in other.items():
            slot = acc.setdefault(h, {})
            _axpy(slot, coeffs, scale)
            if not slot:
                del acc[h]

    def derivation_system(self, p: int, *, full: bool = False):
        """Unknown layout, per-basis linear images and constraint rows at degree p."""
        if p > len(self.components):
            raise ProlongationError(f"components below degree {p} have not been computed")
        layout: dict[int, list[int]] = {}  # base index -> target globals
        unk: dict[tuple[int, int], int] = {}
        src = self.gen if not full else list(range(self.n))
        for b in src:
            tgt = self.component_globals(self.base.basis[b].degree + p)
            layout[b] = tgt
            for g in tgt:
                unk[(b, g)] = len(unk)
        phi: dict[int, dict[int, dict[int, Fraction]]] = {}
        for b in src:
            phi[b] = {g: {unk[(b, g)]: Fraction(1)} for g in layout[b]}
        if not full:
            for d in self.negative_degrees:
                if d == -1:
                    continue
                for b in self.base.component_indices(d):
                    acc: dict[int, dict[int, Fraction]] = {}
                    for a, w, c in self._reps[b]:
                        self._merge(acc, self._lin_bracket(phi[a], w, 1), c)
                        self._merge(acc, self._lin_bracket(phi[w], a, -1), c)
                    phi[b] = acc
        rows = []
        for u in range(self.n):
            for v in range(u + 1, self.n):
                acc: dict[int, dict[int, Fraction]] = {}
                for t, x in self.base.bracket_basis(u, v).items():
                    self._merge(acc, phi[t], x)
                self._merge(acc, self._lin_bracket(phi[u], v, -1), 1)
                self._merge(acc, self._lin_bracket(phi[v], u, 1), 1)
                rows.extend(r for r in acc.values() if r)
        return unk, phi, rows

    def elements_from_solutions(self, p: int, unk, phi, vectors) -> list[ProlongElement]:
        out = []
        for theta in vectors:
            images = []
            for b in range(self.n):
                img: dict[int, Fraction] = {}
                for h, coeffs in phi[b].items():
                    s = sum((x * theta[u] for u, x in coeffs.items() if u in theta), Fraction(0))
                    if s:
                        img[h] = s
                images.append(img)
            out.append(ProlongElement(p, tuple(images)))
        return out

    def restricted_coordinates(self, p: int, images: Sequence[Mapping[int, Fraction]]) -> dict[int, Fraction]:
        """Hom(g_-1, g_{p-1}) coordinates of a degree-p map given on the base."""
        tgt = self.component_globals(p - 1)
        pos = {g: t for t, g in enumerate(tgt)}
        vec = {}
        for a_pos, a in enumerate(self.gen):
            for g, x in images[a].items():
                if g not in pos:
                    raise ProlongationError(f"degree-{p} image of a generator leaves g_{p - 1}")
                vec[a_pos * len(tgt) + pos[g]] = x
        return vec


def _restricted_basis(state: TanakaState, p: int, unk, kernel: Subspace) -> Subspace:
    tgt = state.component_globals(p - 1)
    pos = {g: t for t, g in enumerate(tgt)}
    apos = {a: i for i, a in enumerate(state.gen)}
    inv = {u: key for key, u in unk.items()}
    vecs = []
    for v in kernel.basis:
        w = {}
        for u, x in v.items():
            b, g = inv[u]
            if b in apos:
                w[apos[b] * len(tgt) + pos[g]] = x
        vecs.append(w)
    return Subspace.span(len(state.gen) * len(tgt), vecs)


def prolong_step(state: TanakaState, p: int, *, full: bool = False) -> tuple[Subspace, list[ProlongElement]]:
    """All degree-p derivations from the base into the algebra built so far.

    Returns the component (canonical, in Hom(g_-1, g_{p-1}) coordinates) and
    its basis elements.  ``full=True`` solves the unrestricted system on every
    base component instead; the result is the same.
    """
    if p < 0:
        raise ValueError("degree must be nonnegative")
    if p != len(state.components):
        raise ProlongationError(
            f"degree {p} requested but components up to {len(state.components) - 1} are installed"
        )
    t0 = time.perf_counter()
    unk, phi, rows = state.derivation_system(p, full=full)
    kernel = nullspace_rows(rows, len(unk))
    space = _restricted_basis(state, p, unk, kernel)
    if full:
        if space.dim != kernel.dim:
            raise ProlongationError("full-system solution degenerates on g_-1")
        unk, phi, _ = state.derivation_system(p)
    # map the canonical restricted basis back to unknown coordinates
    tgt = state.component_globals(p - 1)
    vecs = []
    for v in space.basis:
        theta = {}
        for idx, x in v.items():
            a_pos, t = divmod(idx, len(tgt))
            theta[unk[(state.gen[a_pos], tgt[t])]] = x
        vecs.append(theta)
    elements = state.elements_from_solutions(p, unk, phi, vecs)
    state.stats.append(StepStats(p, len(unk), len(rows), space.dim, time.perf_counter() - t0))
    log.debug("degree %d: %d unknowns, %d equations, dim %d", p, len(unk), len(rows), space.dim)
    return space, elements


def der0(m: GradedAlgebra) -> Subspace:
    """Grading-preserving derivations, in Hom(g_-1, g_-1) coordinates."""
    state = TanakaState(m)
    space, _ = prolong_step(state, 0)
    return space


def grading_element_coordinates(m: GradedAlgebra) -> dict[int, Fraction]:
    gen = m.component_indices(-1)
    return {i * len(gen) + i: Fraction(-1) for i in range(len(gen))}


@dataclass
class ProlongationResult:
    base: GradedAlgebra
    components: list[tuple[int, Subspace]]
    elements: list[list[ProlongElement]]
    assembled: GradedAlgebra | None
    terminated: str  # "vanished" | "capped"
    stats: list[StepStats] = field(default_factory=list)
    state: TanakaState | None = None

    @property
    def nu(self) -> int:
        nz = [d for d, s in self.components if s.dim]
        return max(nz) if nz else -1

    def dims(self) -> dict[int, int]:
        out = dict(self.base.dims_by_degree())
        for d, s in self.components:
            if s.dim:
                out[d] = s.dim
        return dict(sorted(out.items()))

    @property
    def total_dim(self) -> int:
        return sum(self.dims().values())

    @property
    def nonnegative_dim(self) -> int:
        return sum(s.dim for _, s in self.components)

    def to_dict(self) -> dict:
        out = {
            "dims": {str(d): n for d, n in self.dims().items()},
            "nu": self.nu,
            "terminated": self.terminated,
        }
        out["algebra"] = self.assembled.to_dict() if self.assembled is not None else None
        return out


def _fixed_g0_elements(state: TanakaState, fixed_g0: Subspace) -> tuple[Subspace, list[ProlongElement]]:
    full_space, _ = prolong_step(TanakaState(state.base), 0)
    if fixed_g0.ambient_dim != full_space.ambient_dim:
        raise AlgebraError("fixed_g0 lives in the wrong coordinate space")
    if not full_space.contains_subspace(fixed_g0):
        raise AlgebraError("fixed_g0 is not contained in der0 of the base")
    unk, phi, _ = state.derivation_system(0)
    tgt = state.component_globals(-1)
    vecs = []
    for v in fixed_g0.basis:
        theta = {}
        for idx, x in v.items():
            a_pos, t = divmod(idx, len(tgt))
            theta[unk[(state.gen[a_pos], tgt[t])]] = x
        vecs.append(theta)
    elements = state.elements_from_solutions(0, unk, phi, vecs)
    # closure under the commutator
    for i, u in enumerate(elements):
        for v in elements[i + 1:]:
            comm = []
            for a in state.gen:
                w: dict[int, Fraction] = {}
                for g, x in v.images[a].items():
                    _axpy(w, u.images[g], x)
                for g, x in u.images[a].items():
                    _axpy(w, v.images[g], -x)
                comm.append(w)
            images = [{} for _ in range(state.n)]
            for a, w in zip(state.gen, comm):
                images[a] = w
            coords = state.restricted_coordinates(0, images)
            if coords and fixed_g0.coordinates(coords) is None:
                raise AlgebraError("fixed_g0 is not closed under the bracket")
    state.stats.append(StepStats(0, 0, 0, fixed_g0.dim, 0.0))
    return fixed_g0, elements


def tanaka(
    m: GradedAlgebra,
    fixed_g0: Subspace | None = None,
    max_degree: int | None = None,
    *,
    assemble_brackets: bool = True,
) -> ProlongationResult:
    """Tanaka prolongation of ``m``; with ``fixed_g0`` the prolongation of m + g_0."""
    cap = default_max_degree() if max_degree is None else max_degree
    if cap < 1:
        raise ValueError("max_degree must be at least 1")
    state = TanakaState(m)
    if fixed_g0 is None:
        space, elems = prolong_step(state, 0)
    else:
        space, elems = _fixed_g0_elements(state, fixed_g0)
    state.install(0, space, elems)
    terminated = "capped"
    for p in range(1, cap + 1):
        space, elems = prolong_step(state, p)
        state.install(p, space, elems)
        if space.dim == 0:
            terminated = "vanished"
            break
    if terminated == "capped":
        log.warning("prolongation of %r hit the degree cap %d", m, cap)
    result = ProlongationResult(
        base=m,
        components=[(d, s) for d, s in enumerate(state.components)],
        elements=state.elements,
        assembled=None,
        terminated=terminated,
        stats=state.stats,
        state=state,
    )
    if assemble_brackets and terminated == "vanished":
        result.assembled = assemble(result)
    return result


def assemble(result: ProlongationResult) -> GradedAlgebra:
    """Full structure constants of the prolonged algebra.

    For u in g_i, v in g_j (i, j >= 0) the bracket is the degree-(i+j) element
    w with w(x) = [[u, x], v] + [u, [v, x]] on the base.
    """
    state = result.state
    if state is None or result.terminated != "vanished":
        raise ProlongationError("can only assemble a prolongation that vanished")
    n = state.n
    N = state.global_dim()
    table: dict[tuple[int, int], dict[int, Fraction]] = {}

    def basis_bracket(g: int, h: int) -> dict[int, Fraction]:
        if g == h:
            return {}
        if h < n:
            return state.act(g, h)
        if g < n:
            return {t: -x for t, x in state.act(h, g).items()}
        if g < h:
            return table.get((g, h), {})
        return {t: -x for t, x in table.get((h, g), {}).items()}

    def bracket(u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> dict[int, Fraction]:
        acc: dict[int, Fraction] = {}
        for g, a in u.items():
            for h, b in v.items():
                br = basis_bracket(g, h)
                if br:
                    _axpy(acc, br, a * b)
        return acc

    nonneg = list(range(n, N))
    pairs = sorted(
        ((g, h) for g in nonneg for h in nonneg if g < h),
        key=lambda gh: state.degree_of(gh[0]) + state.degree_of(gh[1]),
    )
    for g, h in pairs:
        s = state.degree_of(g) + state.degree_of(h)
        images = []
        for b in range(n):
            w = bracket(state.act(g, b), {h: Fraction(1)})
            _axpy(w, bracket({g: Fraction(1)}, state.act(h, b)), 1)
            images.append(w)
        if s > state.top or not state.elements[s]:
            if any(images):
                raise ProlongationError(
                    f"bracket of globals {g},{h} is a nonzero derivation of degree {s} "
                    "outside the computed prolongation"
                )
            continue
        coords = state.restricted_coordinates(s, images)
        c = state.components[s].coordinates(coords)
        if c is None:
            raise ProlongationError(f"bracket of globals {g},{h} is not in g_{s}")
        vec = {state.offsets[s] + t: x for t, x in enumerate(c) if x}
        # the located element must agree with the recursion on the whole base
        for b in range(n):
            got: dict[int, Fraction] = {}
            for t, x in vec.items():
                _axpy(got, state.act(t, b), x)
            if got != images[b]:
                raise ProlongationError(
                    f"bracket of globals {g},{h} disagrees with the recursion on base element {b}"
                )
        if vec:
            table[(g, h)] = vec

    names = list(state.base.names)
    degs = list(state.base.degrees)
    for d, elems in enumerate(state.elements):
        for i in range(len(elems)):
            names.append(f"g{d}_{i}")
            degs.append(d)
    basis = [BasisElement(nm, dg, i) for i, (nm, dg) in enumerate(zip(names, degs))]
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j), v in state.base.structure_constants().items():
        brackets[(i, j)] = v
    for g in nonneg:
        for b in range(n):
            v = state.act(g, b)
            if v:
                brackets[(b, g)] = {t: -x for t, x in v.items()}
    brackets.update(table)
    return GradedAlgebra(basis, brackets)


# ---------------------------------------------------------------------------
# standard prolongation of L in Hom(V, W)


class LinearMapSpace:
    """Subspace of Hom(V, W); matrices are dim_W x dim_V.

    Flattened coordinate of entry (w, b) is ``b * dim_W + w`` so that the
    prolongation of a space in Hom(V, W) lives in Hom(V, V*(x)W) with nested
    row-major tensor indices.
    """

    def __init__(self, dim_V: int, dim_W: int, basis: Sequence[RatMatrix] | None = None, *, space: Subspace | None = None):
        self.dim_V = dim_V
        self.dim_W = dim_W
        if space is None:
            vecs = []
            for M in basis or ():
                if M.shape != (dim_W, dim_V):
                    raise ValueError(f"expected {dim_W}x{dim_V} matrix, got {M.shape}")
                vecs.append({b * dim_W + w: x for w in range(dim_W) for b, x in M.row(w).items()})
            space = Subspace.span(dim_V * dim_W, vecs)
            if basis is not None and space.dim != len(basis):
                raise ValueError("basis matrices are linearly dependent")
        self.space = space

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> list[RatMatrix]:
        out = []
        for v in self.space.basis:
            rows: list[dict[int, Fraction]] = [{} for _ in range(self.dim_W)]
            for idx, x in v.items():
                b, w = divmod(idx, self.dim_W)
                rows[w][b] = x
            out.append(RatMatrix(self.dim_W, self.dim_V, rows))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearMapSpace):
            return NotImplemented
        return (self.dim_V, self.dim_W) == (other.dim_V, other.dim_W) and self.space == other.space

    def __repr__(self) -> str:
        return f"LinearMapSpace(dim={self.dim}, V={self.dim_V}, W={self.dim_W})"


def _sym_basis(dim_V: int, order: int, dim_W: int) -> list[dict[int, Fraction]]:
    """Symmetric tensors in (V*)^{(x)order} (x) W, one per (multiset, w)."""
    from itertools import combinations_with_replacement, permutations

    vecs = []
    for ms in combinations_with_replacement(range(dim_V), order):
        perms = set(permutations(ms))
        for w in range(dim_W):
            v = {}
            for perm in perms:
                idx = 0
                for a in perm:
                    idx = idx * dim_V + a
                v[idx * dim_W + w] = Fraction(1)
            vecs.append(v)
    return vecs


def standard_prolongation(L: LinearMapSpace) -> LinearMapSpace:
    """L^(1) = (V* (x) L) ∩ (Sym^2 V* (x) W), as a subspace of Hom(V, V*(x)W)."""
    dV, dW = L.dim_V, L.dim_W
    inner = dV * dW
    ambient = dV * inner
    tensor_L = []
    for a in range(dV):
        for v in L.space.basis:
            tensor_L.append({a * inner + idx: x for idx, x in v.items()})
    A = Subspace.span(ambient, tensor_L)
    B = Subspace.span(ambient, _sym_basis(dV, 2, dW))
    return LinearMapSpace(dV, inner, space=intersect(A, B))


def iterated_prolongation(L: LinearMapSpace, r: int) -> LinearMapSpace:
    out = L
    for _ in range(r):
        out = standard_prolongation(out)
    return out


def standard_prolongation_direct(L: LinearMapSpace, i: int) -> LinearMapSpace:
    """L^(i) = ((V*)^{(x)i} (x) L) ∩ (Sym^{i+1} V* (x) W) in one intersection."""
    if i < 0:
        raise ValueError("prolongation order must be nonnegative")
    if i == 0:
        return L
    dV, dW = L.dim_V, L.dim_W
    inner = dV * dW
    block = dV ** i
    ambient = block * inner
    vecs = []
    for pre in range(block):
        for v in L.space.basis:
            vecs.append({pre * inner + idx: x for idx, x in v.items()})
    A = Subspace.span(ambient, vecs)
    B = Subspace.span(ambient, _sym_basis(dV, i + 1, dW))
    return LinearMapSpace(dV, ambient // dV, space=intersect(A, B))
