from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from prolong.lie_core import (
    AlgebraError,
    GradedAlgebra,
    bracket,
    build_algebra,
    check_jacobi,
    graded_component,
    is_fundamental,
)
from prolong.models import make_gprime, make_heisenberg, make_m


def test_abelian_one_dim():
    A = build_algebra([("N", -2)])
    assert A.dim == 1 and check_jacobi(A) == []


def test_m2_degrees():
    A = make_m(2)
    assert A.dim == 6
    assert sorted(A.degrees, reverse=True) == [-1, -1, -1, -2, -2, -2]


def test_grading_violation():
    with pytest.raises(AlgebraError, match="grading violation"):
        build_algebra([("A", -1), ("B", -1), ("C", -3)], [("A", "B", [("C", 1)])])


def test_duplicate_and_unknown_names():
    with pytest.raises(AlgebraError, match="duplicate"):
        build_algebra([("A", -1), ("A", -1)])
    with pytest.raises(AlgebraError, match="unknown"):
        build_algebra([("A", -1)], [("A", "B", [])])
    with pytest.raises(AlgebraError, match="unknown"):
        build_algebra([("A", -1), ("B", -1)], [("A", "B", [("C", 1)])])


def test_conflicting_declarations():
    basis = [("A", -1), ("B", -1), ("C", -2)]
    build_algebra(basis, [("A", "B", [("C", 1)]), ("B", "A", [("C", -1)])])
    with pytest.raises(AlgebraError, match="conflicting"):
        build_algebra(basis, [("A", "B", [("C", 1)]), ("B", "A", [("C", 1)])])


def test_bracket_examples():
    m3 = make_m(3)
    assert bracket(m3["X"], m3["E_1"]) == m3["E_2"]
    assert bracket(m3["X"], m3["X"]).is_zero()
    g3 = make_gprime(3)
    assert bracket(g3["E_1"], g3["F_2"]) == -g3["N"]


def test_bracket_algebra_mismatch():
    with pytest.raises(ValueError):
        bracket(make_m(3)["X"], make_m(4)["X"])


@pytest.mark.parametrize("k", range(2, 7))
def test_heisenberg_and_gprime_satisfy_jacobi(k):
    assert check_jacobi(make_heisenberg(k)[0]) == []
    assert check_jacobi(make_gprime(k)) == []


def test_corrupted_gprime_reports_triple_with_x_and_e1():
    g = make_gprime(3)
    data = g.to_dict()
    for br in data["brackets"]:
        if (br["left"], br["right"]) == ("E_1", "X") or (br["left"], br["right"]) == ("X", "E_1"):
            br["value"] = [{"name": v["name"], "coeff": str(2 * F(v["coeff"]))} for v in br["value"]]
    basis = [(b["name"], b["degree"]) for b in data["basis"]]
    brs = [(b["left"], b["right"], [(v["name"], F(v["coeff"])) for v in b["value"]]) for b in data["brackets"]]
    bad = build_algebra(basis, brs, validate=False)
    report = check_jacobi(bad)
    assert report
    x, e1 = bad.index("X"), bad.index("E_1")
    assert any(x in t and e1 in t for t, _ in report)
    with pytest.raises(AlgebraError, match="Jacobi"):
        build_algebra(basis, brs)


@pytest.mark.parametrize("k", range(2, 9))
def test_m_is_fundamental(k):
    assert is_fundamental(make_m(k))


def test_fundamental_negative_cases():
    assert not is_fundamental(build_algebra([("A", -1), ("B", -2)]))
    assert is_fundamental(make_heisenberg(4)[0])
    with pytest.raises(AlgebraError):
        is_fundamental(make_gprime(3))


def test_graded_components():
    m4 = make_m(4)
    assert graded_component(m4, -4) == m4.graded_component(-4)
    comp = graded_component(m4, -4)
    assert comp.dim == 1 and {m4.index("E_4"): 1} in comp
    assert graded_component(m4, 0).dim == 0
    g4 = make_gprime(4)
    c0 = graded_component(g4, 0)
    assert c0.dim == 2
    assert {g4.index("E_0"): 1} in c0 and {g4.index("F_2"): 1} in c0


@pytest.mark.parametrize("k", range(2, 9))
def test_m_dimension_and_depth(k):
    m = make_m(k)
    assert m.dim == k + 4
    assert m.min_degree == -k
    assert sum(m.dims_by_degree().values()) == m.dim


def test_json_round_trip_is_byte_identical():
    for alg in (make_m(5), make_gprime(4), make_heisenberg(3)[0]):
        text = alg.to_json()
        again = GradedAlgebra.from_json(text)
        assert again == alg
        assert again.to_json() == text


def test_json_coefficients_are_reduced_strings():
    data = make_gprime(3).to_dict()
    coeffs = {v["coeff"] for br in data["brackets"] for v in br["value"]}
    assert coeffs <= {"1", "-1"}


algebras = st.sampled_from([make_m(4), make_gprime(3), make_heisenberg(2)[0]])


@given(algebras, st.data())
def test_bracket_antisymmetric_and_bilinear(A, data):
    coef = st.lists(st.integers(-3, 3), min_size=A.dim, max_size=A.dim)
    u = A.element(data.draw(coef))
    v = A.element(data.draw(coef))
    w = A.element(data.draw(coef))
    assert (bracket(u, v) + bracket(v, u)).is_zero()
    assert bracket(u + w, v) == bracket(u, v) + bracket(w, v)
    assert bracket(3 * u, v) == 3 * bracket(u, v)
