from math import comb

import pytest

from prolong.contact import (
    OracleError,
    _positions,
    poly_vector,
    bidegree_table,
    embed_ns,
    gns_component,
    gns_component_space,
    i2_curve,
    marginal,
    oracle_full,
    poly_to_tensor,
    s_component,
    secant_span,
    tensor_space_to_polys,
    tensor_to_poly,
)
from prolong.models import make_s, secant_ideal
from prolong.polynomials import WeightedPolynomial as P, contact_bracket
from prolong.prolongation import iterated_prolongation, standard_prolongation_direct


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_embedding_examples(k):
    emb = embed_ns(k)
    assert emb["E_0"] == P.y(k, 0)
    assert emb[f"F_{k}"] == P.x(k, 0) * (-1) ** k
    # {E_0, F_k} = N; the constant carrying N is (-1)^(k+1)
    assert contact_bracket(emb["E_0"], emb[f"F_{k}"]) == emb["N"]
    assert emb["N"] == P.constant(k, (-1) ** (k + 1))


def test_embedding_requires_k3():
    with pytest.raises(ValueError):
        embed_ns(2)


def _chain(k, upto):
    comps = [s_component(k)]
    for i in range(1, upto + 1):
        comps.append(gns_component_space(k, i, comps))
    return comps


def test_component_examples():
    assert len(gns_component(4, 1, _chain(4, 0))) == comb(3, 3) == 1
    assert gns_component(3, 1, _chain(3, 0)) == []
    comps = _chain(6, 2)
    assert comps[2].dim == 1
    assert comps[2].space == secant_span(6, 2)
    assert len(secant_ideal(6, 2)) == 1


def test_missing_previous_components():
    with pytest.raises(ValueError):
        gns_component(4, 2, [s_component(4)])
    with pytest.raises(ValueError):
        gns_component(4, 0, [])


@pytest.mark.parametrize("k", [4, 5, 6])
def test_positive_components_use_only_x(k):
    for comp in oracle_full(k).components[1:]:
        assert all(p.uses_only_x() for p in comp.polynomials())


def test_oracle_examples():
    r3 = oracle_full(3)
    assert r3.total_dim == 17
    assert [c.dim for c in r3.components[1:]] == [0]
    r5 = oracle_full(5)
    assert [c.dim for c in r5.components[1:]] == [comb(4, 3), 0]
    r6 = oracle_full(6)
    assert [c.dim for c in r6.components[1:]] == [10, 1, 0]


def test_oracle_cap():
    with pytest.raises(OracleError):
        oracle_full(6, cap=1)


def test_bidegree_examples():
    k = 4
    table = bidegree_table(k)
    S_second = {"H": 0, "Z1": 0, "Z2": 0, "Y": 1, "X": -1}
    S = make_s(k)
    for nm, sd in S_second.items():
        assert S.second_degree[nm] == sd
    # standard degree of every s element is 0, so Y sits at (0, 1)
    assert table[(0, 1)] >= 1
    res = oracle_full(k)
    assert marginal(table, 0) == res.dims()


@pytest.mark.parametrize("k", [3, 4, 5, 6, 7])
def test_top_second_degree(k):
    table = bidegree_table(k)
    assert max(sd for (_, sd), n in table.items() if n) == (k + 1) ** 2 // 4 - 2


def test_tensor_round_trip():
    k = 4
    for q in secant_ideal(4, 1):
        t = poly_to_tensor(q, 3)
        assert tensor_to_poly(k, t, 3) == q
    with pytest.raises(ValueError):
        poly_to_tensor(P.y(k, 0), 1)
    with pytest.raises(ValueError):
        poly_to_tensor(P.x(k, 0), 2)


@pytest.mark.parametrize("k", [4, 5, 6])
def test_prolongation_of_i2_matches_minors(k):
    L = i2_curve(k)
    assert L.dim == comb(k, 2)
    i = 1
    while i + 2 <= k - i:
        P_i = iterated_prolongation(L, i)
        assert tensor_space_to_polys(k, P_i.space, i + 2) == secant_span(k, i)
        i += 1
    assert iterated_prolongation(L, i).dim == 0


@pytest.mark.parametrize("k,i", [(4, 1), (5, 1), (6, 1), (6, 2)])
def test_recursive_and_direct_prolongation_agree(k, i):
    L = i2_curve(k)
    assert iterated_prolongation(L, i) == standard_prolongation_direct(L, i)


@pytest.mark.parametrize("k", [5, 6])
def test_partial_derivatives_drop_one_level(k):
    # every x-derivative of a degree-(r+2) minor lies in the span for r-1
    for r in range(1, (k - 2) // 2 + 1):
        lower = secant_span(k, r - 1)
        pos = _positions(k, r + 1)
        for q in secant_ideal(k, r):
            for j in range(k + 1):
                d = q.dx(j)
                if not d.is_zero():
                    assert poly_vector(d, pos) in lower

