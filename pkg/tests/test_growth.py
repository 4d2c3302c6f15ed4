from fractions import Fraction

import pytest

from regforge.common.errors import IncomparableError, InputError, NonIntegerExponentError
from regforge.modules.growth.functions import (A_fn, A_star, ack, alpha_fn, c_fn, check_index_maps, delta_fn, e_fn,
                                               f_star, m_fn, standard_index_maps, t_fn, verify_inequalities)
from regforge.modules.growth.tower import TowerInt, add_int, compare, divide_pow2, mul_pow2, power, two_to


def test_materialized_integers():
    assert TowerInt.of(12) == 12
    assert int(add_int(TowerInt.of(12), -2)) == 10
    assert int(mul_pow2(TowerInt.of(12), -2)) == 3
    assert int(divide_pow2(TowerInt.of(96), TowerInt.of(32))) == 3
    with pytest.raises(ValueError):
        TowerInt.of(-1)
    with pytest.raises(NonIntegerExponentError):
        mul_pow2(TowerInt.of(3), -1)


def test_rational_powers():
    assert power(two_to(8), Fraction(1, 2)) == 16
    assert str(power(two_to(8), Fraction(-1, 2))) == "2^-4"
    with pytest.raises(NonIntegerExponentError):
        power(two_to(3), Fraction(1, 2))


def test_budget_switches_to_symbolic_form(monkeypatch):
    monkeypatch.setenv("REGFORGE_TOWER_BITS", "16")
    big = TowerInt.of(2 ** 20)
    assert big.is_symbolic
    assert str(big) == "2^{20}"
    assert big > 2 ** 15
    with pytest.raises(ValueError, match="budget"):
        TowerInt.of(2 ** 20 + 1)


def test_e_and_t():
    assert e_fn(1) == 2 ** 11
    assert t_fn(1) == 2 ** 200
    assert t_fn(2) == two_to(two_to(189))
    assert str(t_fn(2)) == "2^{2^{189}}"
    assert t_fn(3) > t_fn(2)
    with pytest.raises(InputError):
        e_fn(0)


def test_ackermann_values():
    assert ack(1, 3) == 8
    assert ack(2, 4) == 65536
    assert ack(3, 2) == 4
    assert ack(3, 3) == 65536
    with pytest.raises(InputError):
        ack(0, 1)


def test_hyper_values_compare_through_lower_bounds():
    far = t_fn(100)
    assert far.kind == "hyper"
    assert far > t_fn(3)
    with pytest.raises(IncomparableError):
        compare(far, t_fn(101))
    assert far != t_fn(101)


def test_a_functions():
    assert A_fn(2, 5) == 5
    assert int(A_fn(3, 1)) == 2 ** 2048
    assert A_fn(3, 1) == power(delta_fn(3), Fraction(-4))
    assert f_star(lambda j: j, 1) == 2 ** 189
    assert m_fn(2, 1) == A_star(2, 1) == 2 ** 189
    with pytest.raises(InputError):
        A_fn(1, 1)


def test_small_constants():
    assert str(delta_fn(1)) == "2^-8"
    assert str(delta_fn(3)) == "2^-512"
    assert delta_fn(2) < delta_fn(1) < 1
    assert c_fn(1) < alpha_fn(1) < delta_fn(1)


def test_index_maps_overflow_desk_chains():
    maps = standard_index_maps(3, 2)
    assert [j for j, _, _ in maps] == [1, 2]
    with pytest.raises(InputError, match="index-out-of-range"):
        check_index_maps(3, 2, 10)


def test_every_inequality_holds():
    report = verify_inequalities(3, 4)
    assert report.passed
    assert {c.name for c in report.checks} >= {"monotone", "t-over-e", "A-base", "A-vs-Ack", "delta-bound"}
    with pytest.raises(InputError):
        verify_inequalities(1, 4)
