"""Dimension and depth checks for m(k), and the engine/oracle cross-check."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .contact import bidegree_table, marginal, oracle_full
from .models import make_m
from .prolongation import ProlongationResult, tanaka


class FibTable:
    """Fibonacci numbers with Fib_1 = Fib_2 = 1."""

    def __getitem__(self, n: int) -> int:
        return fib(n)

    @staticmethod
    def compositions(k: int) -> int:
        """Compositions of k+2 into 1's and 2's, counted by the number of 2's."""
        return sum(comb(k + 2 - i, i) for i in range(k // 2 + 2))


@lru_cache(maxsize=None)
def fib(n: int) -> int:
    if n < 1:
        raise ValueError("Fib_n is defined for n >= 1")
    a, b = 1, 1
    for _ in range(n - 2):
        a, b = b, a + b
    return a if n == 1 else b


def expected_total(k: int) -> int:
    return fib(k + 3) + k + 6


def expected_nu(k: int) -> int:
    return (k + 1) ** 2 // 4 - 2


def _require(k: int) -> None:
    if not isinstance(k, int) or k < 3:
        raise ValueError(f"the formulas are asserted for k >= 3, got k={k!r}")


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    computed: object

    @property
    def passed(self) -> bool:
        return self.expected == self.computed

    def as_tuple(self) -> tuple[object, object, bool]:
        return self.expected, self.computed, self.passed


@lru_cache(maxsize=16)
def _engine(k: int) -> ProlongationResult:
    return tanaka(make_m(k))


def check_fibonacci(k: int, result: ProlongationResult | None = None) -> tuple[int, int, bool]:
    _require(k)
    res = result if result is not None else _engine(k)
    return Check("fibonacci", expected_total(k), res.total_dim).as_tuple()


def check_depth(k: int, result: ProlongationResult | None = None) -> tuple[int, int, bool]:
    _require(k)
    res = result if result is not None else _engine(k)
    return Check("depth", expected_nu(k), res.nu).as_tuple()


@dataclass
class Report:
    k: int
    method: str  # "tanaka" | "oracle" | "both"
    dims: dict[int, int]
    total_dim: int
    nu: int
    checks: list[Check] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    oracle_dims: dict[int, int] | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        out = {
            "k": self.k,
            "method": self.method,
            "dims": {str(d): n for d, n in self.dims.items()},
            "total_dim": self.total_dim,
            "nu": self.nu,
            "checks": [
                {"name": c.name, "expected": c.expected, "computed": c.computed, "pass": c.passed}
                for c in self.checks
            ],
            "pass": self.passed,
        }
        if self.oracle_dims is not None:
            out["oracle_dims"] = {str(d): n for d, n in self.oracle_dims.items()}
        return out

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"{c.name} {c.computed} (expected {c.expected})" for c in self.checks]
        return f"k={self.k} [{self.method}] {status}: " + "; ".join(parts)


def tanaka_report(k: int) -> Report:
    """Formula checks on the engine alone."""
    _require(k)
    t = time.perf_counter()
    res = tanaka(make_m(k))
    elapsed = time.perf_counter() - t
    checks = [
        Check("total_dim", expected_total(k), res.total_dim),
        Check("nu", expected_nu(k), res.nu),
    ]
    return Report(k, "tanaka", res.dims(), res.total_dim, res.nu, checks, {"tanaka": elapsed})


def cross_check(k: int) -> Report:
    """Engine on m(k) against the polynomial oracle on n(k) + s(k).

    The engine grading of m(k) is the Second grading of the oracle, so the
    oracle's bidegree table is summed onto its Second degree and compared
    degree by degree with the engine table.
    """
    _require(k)
    t0 = time.perf_counter()
    res = tanaka(make_m(k))
    t1 = time.perf_counter()
    orc = oracle_full(k)
    table = bidegree_table(k, orc)
    t2 = time.perf_counter()
    second = marginal(table, 1)
    standard = marginal(table, 0)
    checks = [
        Check("total_dim", res.total_dim, orc.total_dim),
        Check("per_degree", res.dims(), second),
        Check("standard_marginal", orc.dims(), standard),
        Check("nu", res.nu, max(d for d, n in second.items() if n)),
    ]
    return Report(
        k, "both", res.dims(), res.total_dim, res.nu, checks,
        {"tanaka": t1 - t0, "oracle": t2 - t1}, oracle_dims=second,
    )


def oracle_report(k: int) -> Report:
    _require(k)
    t = time.perf_counter()
    orc = oracle_full(k)
    table = bidegree_table(k, orc)
    elapsed = time.perf_counter() - t
    second = marginal(table, 1)
    nu = max(d for d, n in second.items() if n)
    checks = [
        Check("total_dim", expected_total(k), orc.total_dim),
        Check("nu", expected_nu(k), nu),
    ]
    return Report(k, "oracle", orc.dims(), orc.total_dim, nu, checks, {"oracle": elapsed}, oracle_dims=second)
