"""Sparse polynomials in x_0..x_k, y_0..y_k, z and the contact bracket.

Exponent vectors are tuples of length 2k+3 laid out as (x_0..x_k, y_0..y_k, z).
Contact form: dz + 1/2 sum(x_i dy_i - y_i dx_i), with

    d/dx_i = ∂/∂x_i + (y_i/2) ∂/∂z,   d/dy_i = ∂/∂y_i - (x_i/2) ∂/∂z.
"""
from __future__ import annotations

import enum
import json
import re
from functools import lru_cache
from itertools import combinations_with_replacement
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .lie_core import format_scalar

HALF = Fraction(1, 2)


class Grading(enum.Enum):
    STANDARD = "standard"  # x_i, y_i weight 1; z weight 2
    SECOND = "second"  # x_i weight i; y_i weight 2-i; z weight 2


class _Zero:
    def __repr__(self) -> str:
        return "ZERO"


#: weight() of the zero polynomial
ZERO = _Zero()


def variable_weights(k: int, grading: Grading) -> tuple[int, ...]:
    if grading is Grading.STANDARD:
        return (1,) * (2 * k + 2) + (2,)
    return tuple(range(k + 1)) + tuple(2 - i for i in range(k + 1)) + (2,)


def variable_names(k: int) -> list[str]:
    return [f"x{i}" for i in range(k + 1)] + [f"y{i}" for i in range(k + 1)] + ["z"]


def _order_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class WeightedPolynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("k", "terms", "_hash")

    def __init__(self, k: int, terms: Mapping[tuple[int, ...], object] | None = None):
        self.k = k
        n = 2 * k + 3
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise ValueError(f"exponent vector {e} does not have length {n}")
            if c != 0:
                clean[tuple(e)] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def _raw(cls, k: int, terms: dict) -> WeightedPolynomial:
        p = cls.__new__(cls)
        p.k = k
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, k: int, c=1) -> WeightedPolynomial:
        return cls(k, {(0,) * (2 * k + 3): c})

    @classmethod
    def var(cls, k: int, index: int) -> WeightedPolynomial:
        e = [0] * (2 * k + 3)
        e[index] = 1
        return cls._raw(k, {tuple(e): Fraction(1)})

    @classmethod
    def x(cls, k: int, i: int) -> WeightedPolynomial:
        return cls.var(k, i)

    @classmethod
    def y(cls, k: int, i: int) -> WeightedPolynomial:
        return cls.var(k, k + 1 + i)

    @classmethod
    def z(cls, k: int) -> WeightedPolynomial:
        return cls.var(k, 2 * k + 2)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: WeightedPolynomial) -> None:
        if self.k != other.k:
            raise ValueError(f"polynomials over different k: {self.k} vs {other.k}")

    def __add__(self, other):
        if not isinstance(other, WeightedPolynomial):
            other = WeightedPolynomial.constant(self.k, other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return WeightedPolynomial._raw(self.k, t)

    __radd__ = __add__

    def __neg__(self):
        return WeightedPolynomial._raw(self.k, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, WeightedPolynomial):
            other = WeightedPolynomial.constant(self.k, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, WeightedPolynomial):
            c = Fraction(other)
            if not c:
                return WeightedPolynomial._raw(self.k, {})
            return WeightedPolynomial._raw(self.k, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return WeightedPolynomial._raw(self.k, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = WeightedPolynomial.constant(self.k, 1)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, index: int) -> WeightedPolynomial:
        t = {}
        for e, c in self.terms.items():
            a = e[index]
            if a:
                ne = e[:index] + (a - 1,) + e[index + 1:]
                t[ne] = c * a
        return WeightedPolynomial._raw(self.k, t)

    def dx(self, i: int) -> WeightedPolynomial:
        return self.diff(i)

    def dy(self, i: int) -> WeightedPolynomial:
        return self.diff(self.k + 1 + i)

    def dz(self) -> WeightedPolynomial:
        return self.diff(2 * self.k + 2)

    def Dx(self, i: int) -> WeightedPolynomial:
        """d/dx_i = ∂/∂x_i + (y_i/2) ∂/∂z."""
        return self.dx(i) + WeightedPolynomial.y(self.k, i) * self.dz() * HALF

    def Dy(self, i: int) -> WeightedPolynomial:
        """d/dy_i = ∂/∂y_i - (x_i/2) ∂/∂z."""
        return self.dy(i) - WeightedPolynomial.x(self.k, i) * self.dz() * HALF

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, WeightedPolynomial):
            return self.k == other.k and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == WeightedPolynomial.constant(self.k, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.k, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda ec: _order_key(ec[0]), reverse=True)

    def weights(self, grading: Grading) -> set[int]:
        w = variable_weights(self.k, grading)
        return {sum(a * b for a, b in zip(e, w)) for e in self.terms}

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def uses_only_x(self) -> bool:
        k = self.k
        return all(not any(e[k + 1:]) for e in self.terms)

    def evaluate(self, values: Sequence[object]) -> Fraction:
        """Evaluate at a point given as 2k+3 values (x.., y.., z)."""
        vals = [Fraction(v) for v in values]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, a in zip(vals, e):
                if a:
                    term *= v ** a
            total += term
        return total

    def evaluate_x(self, xs: Sequence[object]) -> Fraction:
        """Evaluate a polynomial in x only at x = xs."""
        if not self.uses_only_x():
            raise ValueError("polynomial depends on y or z")
        return self.evaluate(list(xs) + [0] * (self.k + 2))

    # -- formatting -----------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = variable_names(self.k)
        parts = []
        for e, c in self.sorted_terms():
            sign = "-" if c < 0 else "+"
            factors = [f"({format_scalar(abs(c))})"]
            for nm, a in zip(names, e):
                if a == 1:
                    factors.append(nm)
                elif a > 1:
                    factors.append(f"{nm}^{a}")
            parts.append(sign + "·".join(factors))
        return " ".join(parts)

    @classmethod
    def from_text(cls, k: int, text: str) -> WeightedPolynomial:
        text = text.strip()
        if text == "0":
            return cls(k)
        names = {nm: i for i, nm in enumerate(variable_names(k))}
        terms: dict = {}
        for tok in text.split():
            m = re.fullmatch(r"([+-])\(([^)]+)\)((?:·[a-z]\d*(?:\^\d+)?)*)", tok)
            if not m:
                raise ValueError(f"cannot parse term {tok!r}")
            c = Fraction(m.group(2)) * (-1 if m.group(1) == "-" else 1)
            e = [0] * (2 * k + 3)
            for f in filter(None, m.group(3).split("·")):
                nm, _, pw = f.partition("^")
                if nm not in names:
                    raise ValueError(f"unknown variable {nm!r} for k={k}")
                e[names[nm]] += int(pw) if pw else 1
            e = tuple(e)
            terms[e] = terms.get(e, 0) + c
        return cls(k, terms)

    def to_json_terms(self) -> list[dict]:
        return [
            {"exponents": list(e), "coeff": format_scalar(c)} for e, c in self.sorted_terms()
        ]

    @classmethod
    def from_json_terms(cls, k: int, data: Iterable[Mapping]) -> WeightedPolynomial:
        terms: dict = {}
        for t in data:
            e = tuple(int(a) for a in t["exponents"])
            terms[e] = terms.get(e, 0) + Fraction(t["coeff"])
        return cls(k, terms)

    def __repr__(self) -> str:
        return self.to_text()


@lru_cache(maxsize=None)
def monomials(k: int, w: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of Standard weight w, in canonical (descending) order."""
    if w < 0:
        return ()
    n = 2 * k + 2
    out = []
    for c in range(w // 2 + 1):
        for combo in combinations_with_replacement(range(n), w - 2 * c):
            e = [0] * (n + 1)
            for v in combo:
                e[v] += 1
            e[n] = c
            out.append(tuple(e))
    out.sort(key=_order_key, reverse=True)
    return tuple(out)


def weight(f: WeightedPolynomial, grading: Grading):
    """Common weight of a homogeneous polynomial, None if inhomogeneous, ZERO for 0."""
    if f.is_zero():
        return ZERO
    ws = f.weights(grading)
    return ws.pop() if len(ws) == 1 else None


def contact_bracket(f: WeightedPolynomial, g: WeightedPolynomial) -> WeightedPolynomial:
    """{f,g} = f g_z - g f_z + sum_i (df/dx_i dg/dy_i - dg/dx_i df/dy_i)."""
    f._check(g)
    out = f * g.dz() - g * f.dz()
    for i in range(f.k + 1):
        out = out + f.Dx(i) * g.Dy(i) - g.Dx(i) * f.Dy(i)
    return out


class ContactField:
    """Polynomial vector field sum a_i ∂x_i + b_i ∂y_i + c ∂z."""

    __slots__ = ("k", "coeffs")

    def __init__(self, k: int, coeffs: Sequence[WeightedPolynomial]):
        if len(coeffs) != 2 * k + 3:
            raise ValueError("need one coefficient per variable")
        self.k = k
        self.coeffs = tuple(coeffs)

    @property
    def dx_coeffs(self) -> tuple[WeightedPolynomial, ...]:
        return self.coeffs[: self.k + 1]

    @property
    def dy_coeffs(self) -> tuple[WeightedPolynomial, ...]:
        return self.coeffs[self.k + 1: 2 * self.k + 2]

    @property
    def dz_coeff(self) -> WeightedPolynomial:
        return self.coeffs[-1]

    def apply(self, h: WeightedPolynomial) -> WeightedPolynomial:
        out = WeightedPolynomial(self.k)
        for idx, c in enumerate(self.coeffs):
            if c:
                out = out + c * h.diff(idx)
        return out

    def commutator(self, other: ContactField) -> ContactField:
        return ContactField(
            self.k,
            [self.apply(b) - other.apply(a) for a, b in zip(self.coeffs, other.coeffs)],
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ContactField):
            return NotImplemented
        return self.k == other.k and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        names = variable_names(self.k)
        parts = [f"({c.to_text()})∂{nm}" for nm, c in zip(names, self.coeffs) if c]
        return " + ".join(parts) or "0"


def to_field(f: WeightedPolynomial) -> ContactField:
    """X_f = sum(-df/dy_i d/dx_i + df/dx_i d/dy_i) + f ∂/∂z, expanded."""
    k = f.k
    dx = []
    dy = []
    cz = f
    for i in range(k + 1):
        a = -f.Dy(i)
        b = f.Dx(i)
        dx.append(a)
        dy.append(b)
        # d/dx_i carries (y_i/2)∂z and d/dy_i carries -(x_i/2)∂z
        cz = cz + a * WeightedPolynomial.y(k, i) * HALF - b * WeightedPolynomial.x(k, i) * HALF
    return ContactField(k, dx + dy + [cz])


def polys_to_json(polys: Sequence[WeightedPolynomial]) -> str:
    if not polys:
        return json.dumps({"k": None, "polynomials": []})
    return json.dumps(
        {"k": polys[0].k, "polynomials": [p.to_json_terms() for p in polys]}, indent=2
    ) + "\n"
