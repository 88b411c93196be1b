"""Finite-dimensional graded Lie algebras over Q given by structure constants."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .exact_linalg import Subspace

# Jacobi is checked eagerly at construction up to this dimension.
EAGER_JACOBI_LIMIT = 200


class AlgebraError(ValueError):
    """Raised when structure constants do not define a graded Lie algebra."""


@dataclass(frozen=True)
class BasisElement:
    name: str
    degree: int
    index: int


Vec = dict  # basis index -> Fraction


def _add_into(acc: dict[int, Fraction], vec: Mapping[int, Fraction], scale: Fraction = Fraction(1)) -> None:
    for j, x in vec.items():
        nv = acc.get(j, 0) + scale * x
        if nv:
            acc[j] = nv
        else:
            acc.pop(j, None)


class GradedAlgebra:
    """Graded Lie algebra; brackets stored only for index pairs i < j."""

    def __init__(
        self,
        basis: Sequence[BasisElement],
        brackets: Mapping[tuple[int, int], Mapping[int, Fraction]],
        *,
        validate: bool | None = None,
        metadata: Mapping[str, object] | None = None,
    ):
        self.basis = tuple(basis)
        self._index = {b.name: b.index for b in self.basis}
        self._brackets = {
            (i, j): dict(v) for (i, j), v in brackets.items() if v
        }
        self.metadata = dict(metadata or {})
        if validate is None:
            validate = len(self.basis) <= EAGER_JACOBI_LIMIT
        self._check_grading()
        if validate:
            report = check_jacobi(self)
            if report:
                (i, j, l), residual = report[0]
                names = tuple(self.basis[t].name for t in (i, j, l))
                raise AlgebraError(
                    f"Jacobi identity fails on {names}: residual {self.format_vector(residual)}"
                )

    # -- basic access ---------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def names(self) -> list[str]:
        return [b.name for b in self.basis]

    @property
    def degrees(self) -> list[int]:
        return [b.degree for b in self.basis]

    @property
    def min_degree(self) -> int:
        return min(self.degrees) if self.basis else 0

    @property
    def max_degree(self) -> int:
        return max(self.degrees) if self.basis else 0

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no basis element named {name!r}") from None

    def __getitem__(self, name: str) -> AlgebraElement:
        return self.element({self.index(name): 1})

    def element(self, coeffs: Mapping[int, object] | Sequence[object]) -> AlgebraElement:
        if isinstance(coeffs, Mapping):
            vec = {int(i): Fraction(v) for i, v in coeffs.items() if v != 0}
        else:
            if len(coeffs) != self.dim:
                raise ValueError("coefficient vector has wrong length")
            vec = {i: Fraction(v) for i, v in enumerate(coeffs) if v != 0}
        return AlgebraElement(self, vec)

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        if i == j:
            return {}
        if i < j:
            return self._brackets.get((i, j), {})
        return {t: -x for t, x in self._brackets.get((j, i), {}).items()}

    def bracket_vec(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> dict[int, Fraction]:
        acc: dict[int, Fraction] = {}
        for i, a in u.items():
            for j, b in v.items():
                if i == j:
                    continue
                br = self.bracket_basis(i, j)
                if br:
                    _add_into(acc, br, a * b)
        return acc

    def structure_constants(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        return {k: dict(v) for k, v in self._brackets.items()}

    def format_vector(self, vec: Mapping[int, Fraction]) -> str:
        if not vec:
            return "0"
        return " + ".join(f"({x})*{self.basis[i].name}" for i, x in sorted(vec.items()))

    def graded_component(self, d: int) -> Subspace:
        return Subspace.span(self.dim, [{b.index: 1} for b in self.basis if b.degree == d])

    def component_indices(self, d: int) -> list[int]:
        return [b.index for b in self.basis if b.degree == d]

    def dims_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for b in self.basis:
            out[b.degree] = out.get(b.degree, 0) + 1
        return dict(sorted(out.items()))

    def _check_grading(self) -> None:
        for (i, j), vec in self._brackets.items():
            if not i < j:
                raise AlgebraError(f"bracket key {(i, j)} must satisfy i < j")
            want = self.basis[i].degree + self.basis[j].degree
            for t in vec:
                if self.basis[t].degree != want:
                    bi, bj, bt = self.basis[i], self.basis[j], self.basis[t]
                    raise AlgebraError(
                        f"grading violation: [{bi.name},{bj.name}] has a component on "
                        f"{bt.name} of degree {bt.degree}, expected degree {want}"
                    )

    # -- comparison and serialization -----------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedAlgebra):
            return NotImplemented
        return (
            [(b.name, b.degree) for b in self.basis] == [(b.name, b.degree) for b in other.basis]
            and self._brackets == other._brackets
        )

    def __repr__(self) -> str:
        return f"GradedAlgebra(dim={self.dim}, degrees={self.dims_by_degree()})"

    def to_dict(self) -> dict:
        brs = []
        for (i, j) in sorted(self._brackets):
            vec = self._brackets[(i, j)]
            brs.append(
                {
                    "left": self.basis[i].name,
                    "right": self.basis[j].name,
                    "value": [
                        {"name": self.basis[t].name, "coeff": format_scalar(x)}
                        for t, x in sorted(vec.items())
                    ],
                }
            )
        return {
            "basis": [{"name": b.name, "degree": b.degree} for b in self.basis],
            "brackets": brs,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping) -> GradedAlgebra:
        basis = [(b["name"], int(b["degree"])) for b in data["basis"]]
        brackets = [
            (br["left"], br["right"], [(v["name"], parse_scalar(v["coeff"])) for v in br["value"]])
            for br in data.get("brackets", [])
        ]
        return build_algebra(basis, brackets)

    @classmethod
    def from_json(cls, text: str) -> GradedAlgebra:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class AlgebraElement:
    algebra: GradedAlgebra
    coeffs: Mapping[int, Fraction]

    def vector(self) -> list[Fraction]:
        return [self.coeffs.get(i, Fraction(0)) for i in range(self.algebra.dim)]

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        _same(self, other)
        acc = dict(self.coeffs)
        _add_into(acc, other.coeffs)
        return AlgebraElement(self.algebra, acc)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, {i: -x for i, x in self.coeffs.items()})

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + (-other)

    def __rmul__(self, c) -> AlgebraElement:
        c = Fraction(c)
        if not c:
            return AlgebraElement(self.algebra, {})
        return AlgebraElement(self.algebra, {i: c * x for i, x in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and dict(self.coeffs) == dict(other.coeffs)

    def __repr__(self) -> str:
        return self.algebra.format_vector(self.coeffs)


def _same(u: AlgebraElement, v: AlgebraElement) -> None:
    if u.algebra is not v.algebra:
        raise ValueError("elements belong to different algebras")


def bracket(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    _same(u, v)
    return AlgebraElement(u.algebra, u.algebra.bracket_vec(u.coeffs, v.coeffs))


def format_scalar(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_scalar(s: str | int) -> Fraction:
    return Fraction(s)


def build_algebra(
    basis: Iterable[tuple[str, int]],
    brackets: Iterable[tuple[str, str, Iterable[tuple[str, object]]]] = (),
    *,
    validate: bool | None = None,
    metadata: Mapping[str, object] | None = None,
) -> GradedAlgebra:
    """Build and validate an algebra from named basis elements and brackets.

    Each bracket is ``(left, right, [(name, coeff), ...])``; unspecified
    brackets are zero.  Declaring both ``[a,b]`` and ``[b,a]`` is an error
    unless they agree.
    """
    elems = []
    index: dict[str, int] = {}
    for name, deg in basis:
        if name in index:
            raise AlgebraError(f"duplicate basis name {name!r}")
        index[name] = len(elems)
        elems.append(BasisElement(name, int(deg), len(elems)))
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for left, right, value in brackets:
        for n in (left, right):
            if n not in index:
                raise AlgebraError(f"bracket [{left},{right}] references unknown name {n!r}")
        i, j = index[left], index[right]
        vec: dict[int, Fraction] = {}
        for n, c in value:
            if n not in index:
                raise AlgebraError(f"bracket [{left},{right}] has unknown name {n!r} in its value")
            _add_into(vec, {index[n]: Fraction(c)})
        if i == j:
            if vec:
                raise AlgebraError(f"[{left},{left}] must be zero")
            continue
        if i > j:
            i, j = j, i
            vec = {t: -x for t, x in vec.items()}
        if (i, j) in table and table[(i, j)] != vec:
            raise AlgebraError(f"conflicting values for [{left},{right}]")
        table[(i, j)] = vec
    return GradedAlgebra(elems, table, validate=validate, metadata=metadata)


def check_jacobi(A: GradedAlgebra) -> list[tuple[tuple[int, int, int], dict[int, Fraction]]]:
    """Failing basis triples (i<j<l) with the nonzero Jacobi residual."""
    n = A.dim
    # adjacency: for each i, the j with a nonzero bracket
    nonzero: list[set[int]] = [set() for _ in range(n)]
    for (i, j) in A._brackets:
        nonzero[i].add(j)
        nonzero[j].add(i)
    report = []
    for i, j, l in combinations(range(n), 3):
        if not (nonzero[i] or nonzero[j] or nonzero[l]):
            continue
        res: dict[int, Fraction] = {}
        for a, b, c in ((i, j, l), (j, l, i), (l, i, j)):
            inner = A.bracket_basis(b, c)
            if inner:
                _add_into(res, A.bracket_vec({a: Fraction(1)}, inner))
        if res:
            report.append(((i, j, l), res))
    return report


def is_fundamental(A: GradedAlgebra) -> bool:
    """True iff iterated brackets of the degree -1 part span A."""
    if any(d >= 0 for d in A.degrees):
        raise AlgebraError("is_fundamental expects a negatively graded algebra")
    gen = A.component_indices(-1)
    span = Subspace.span(A.dim, [{i: 1} for i in gen])
    layer = [dict(v) for v in span.basis]
    while layer:
        new = []
        for g in gen:
            for v in layer:
                w = A.bracket_vec({g: Fraction(1)}, v)
                if w and w not in span:
                    new.append(w)
        if not new:
            break
        span = Subspace.span(A.dim, list(span.basis) + new)
        layer = new
    return span.dim == A.dim


def graded_component(A: GradedAlgebra, d: int) -> Subspace:
    return A.graded_component(d)
