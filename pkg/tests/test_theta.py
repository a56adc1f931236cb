import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wonderbt.apartment import ApartmentPoint, point_from_json
from wonderbt.errors import ConfigurationError, ContractError
from wonderbt.rootsys import build_root_system
from wonderbt.theta import (
    BigCellPoly,
    LinearForm,
    base_point,
    compactified,
    gauss_norm,
    poly_from_json,
    separating_form,
    seminorm_axioms_check,
    theta_eval,
)

fr = Fraction
A2 = build_root_system("A2")


def random_poly(rs, rnd, levi=(), terms=4):
    roots = [r for r in rs.roots if not all(c == 0 or i in levi for i, c in enumerate(r))]
    monos = []
    for _ in range(rnd.randint(1, terms)):
        exps = {rnd.choice(roots): rnd.randint(1, 3) for _ in range(rnd.randint(0, 3))}
        monos.append((exps, fr(rnd.randint(0, 8), rnd.choice([1, 2, 4]))))
    return BigCellPoly(rs, tuple(monos), frozenset(levi))


def random_point(rnd, rank, tau=()):
    exps = {i: rnd.randint(-4, 4) for i in range(rank) if i not in tau}
    return compactified(rank, tau, exps)


def test_monomial_values():
    f = BigCellPoly.monomial(A2, {(-1, 0): 1})
    x = base_point(2)
    # <-a1, y> = 2^-e1
    assert theta_eval(f, x, ApartmentPoint((2, 0))) == fr(1, 4)
    g = BigCellPoly.monomial(A2, {(-1, -1): 1, (0, 1): 1}, norm=fr(1, 2))
    assert theta_eval(g, ApartmentPoint((0, 3)), ApartmentPoint((1, 1))) == fr(1, 2) * fr(1, 4) * 8


def test_cli_example_values():
    f = poly_from_json({
        "type": "A2",
        "monomials": [{"exps": {"-a1": 1}, "norm": "1"}, {"exps": {"-a1-a2": 1, "a2": 1}, "norm": "1/2"}],
    })
    x = base_point(2)
    ys = [ApartmentPoint((0, 0)), point_from_json({"coords": {"a1": "1/4", "a2": "2"}}),
          compactified(2, {0}, {1: 1})]
    assert [theta_eval(f, x, y) for y in ys] == [1, 4, 0]


def test_stratum_vanishing():
    f = BigCellPoly.monomial(A2, {(0, -1): 1})
    assert theta_eval(f, base_point(2), compactified(2, {1}, {0: 3})) == 0
    assert theta_eval(f, base_point(2), compactified(2, {0}, {1: 3})) == fr(1, 8)
    # positive roots only see x
    g = BigCellPoly.monomial(A2, {(1, 0): 2}, norm=3)
    assert theta_eval(g, ApartmentPoint((1, 0)), compactified(2, {0, 1}, {})) == 12


def test_levi_and_root_checks():
    with pytest.raises(ContractError):
        BigCellPoly.monomial(A2, {(-1, 0): 1}, levi={0})
    with pytest.raises(ContractError):
        BigCellPoly.monomial(A2, {(1, -1): 1})
    with pytest.raises(ContractError):
        BigCellPoly.monomial(A2, {(-1, 0): 1}, norm=-1)
    with pytest.raises(ConfigurationError):
        poly_from_json({"type": "A2"})
    with pytest.raises(ConfigurationError):
        poly_from_json({"type": "A2", "monomials": [{"exps": {"-a1": 1}}]})


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_base_point_is_gauss_norm(name):
    rs = build_root_system(name)
    rnd = random.Random(name)
    for _ in range(50):
        f = random_poly(rs, rnd)
        assert theta_eval(f, base_point(rs.rank), base_point(rs.rank)) == gauss_norm(f)


@given(st.integers(0, 10**6))
def test_monotone_in_y(seed):
    # shrinking every simple-root value of y grows |f| on negative roots
    rnd = random.Random(seed)
    f = random_poly(A2, rnd)
    x = random_point(rnd, 2)
    y = random_point(rnd, 2)
    y2 = compactified(2, (), {i: e - rnd.randint(0, 2) for i, e in y.exps})
    f_neg = BigCellPoly(A2, tuple((dict(e), n) for e, n in f.monomials
                                 if all(c <= 0 for r, _ in e for c in r)))
    assert theta_eval(f_neg, x, y2) >= theta_eval(f_neg, x, y)


@given(st.integers(0, 10**6))
def test_seminorm_axioms(seed):
    rnd = random.Random(seed)
    f, g = random_poly(A2, rnd), random_poly(A2, rnd)
    x = random_point(rnd, 2)
    y = random_point(rnd, 2, rnd.choice([(), (0,), (1,), (0, 1)]))
    assert all(seminorm_axioms_check(f, g, x, y).values())


@given(st.integers(0, 10**6), st.integers(0, 4))
def test_homogeneity(seed, k):
    rnd = random.Random(seed)
    f = random_poly(A2, rnd)
    scaled = BigCellPoly(A2, tuple((dict(e), n * 2 ** k) for e, n in f.monomials))
    x, y = random_point(rnd, 2), random_point(rnd, 2)
    assert theta_eval(scaled, x, y) == 2 ** k * theta_eval(f, x, y)


def test_separation_examples():
    y1, y2 = compactified(2, {0}, {1: 1}), compactified(2, {0}, {1: 3})
    sep = separating_form(y1, y2, A2)
    assert sep.form.coefficients == (((0, -1), 1),)
    assert sep.values == (fr(1, 2), fr(1, 8))
    sep = separating_form(ApartmentPoint((1, 0)), ApartmentPoint((0, 0)), A2)
    assert sep.form.coefficients == (((-1, 0), 1),)
    with pytest.raises(ContractError):
        separating_form(y1, y1, A2)
    with pytest.raises(ContractError):
        separating_form(y1, compactified(2, {1}, {0: 1}), A2)


def test_separation_grouping():
    grouping = {(-1, 0): "g", (0, -1): "g"}
    sep = separating_form(ApartmentPoint((1, 2)), ApartmentPoint((2, 2)), A2, grouping=grouping)
    assert sep.form.relative == "g" and sep.values == (fr(1, 2), fr(1, 4))
    # swapped coordinates: the grouped form gives 1/2 twice and -a1-a2 gives 1/8 twice
    with pytest.raises(ContractError):
        separating_form(ApartmentPoint((1, 2)), ApartmentPoint((2, 1)), A2, grouping=grouping)


@pytest.mark.parametrize("name", ["A2", "B2", "A3"])
def test_separation_sound(name):
    rs = build_root_system(name)
    rnd = random.Random(name)
    done = 0
    while done < 60:
        tau = tuple(i for i in range(rs.rank) if rnd.random() < 0.4)
        if len(tau) == rs.rank:
            continue
        y1, y2 = random_point(rnd, rs.rank, tau), random_point(rnd, rs.rank, tau)
        if y1 == y2:
            continue
        sep = separating_form(y1, y2, rs)
        poly = sep.form.as_poly(rs)
        x = base_point(rs.rank)
        assert sep.values == (theta_eval(poly, x, y1), theta_eval(poly, x, y2))
        assert sep.values[0] != sep.values[1]
        done += 1


def test_linear_form_validation():
    with pytest.raises(ContractError):
        LinearForm((-1, 0), (((-1, 0), 0),))


def test_json_round_trip():
    rnd = random.Random(3)
    for _ in range(20):
        f = random_poly(A2, rnd)
        assert poly_from_json(f.to_json()) == f


def test_product_and_sum():
    f = BigCellPoly(A2, (({(-1, 0): 1}, 2), ({}, 1)))
    g = BigCellPoly(A2, (({(-1, 0): 1}, 3),))
    h = f * g
    assert dict(h.monomials) == {(((-1, 0), 2),): 6, (((-1, 0), 1),): 3}
    assert dict((f + g).monomials)[(((-1, 0), 1),)] == 3
