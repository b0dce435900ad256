import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, strategies as st

from bec2.bessel import bessel_j, bessel_j_orders, bessel_j_series, bessel_j_table
from bec2.errors import DomainError

# J_0(1), J_1(1) from the exact-arithmetic power series
J0_1 = 0.7651976865579666
J1_1 = 0.44005058574493355


def test_series_oracle_reference_values():
    assert bessel_j_series(0, 1.0) == J0_1
    assert bessel_j_series(1, 1.0) == pytest.approx(J1_1, abs=1e-16)
    assert sp.j0(1.0) == pytest.approx(J0_1, abs=2e-16)


@pytest.mark.parametrize("x", [0.1, 1.0, 2.5, 5.0, 7.3, 10.0])
def test_miller_matches_series(x):
    for q in range(-15, 16):
        assert abs(bessel_j(q, x) - bessel_j_series(q, x)) <= 1e-12


@pytest.mark.parametrize("x", [1e-300, 1e-8, 1e-3, 0.5, 30.0, 123.4, 699.0, -4.2, -60.0])
def test_miller_matches_scipy(x):
    q = int(abs(x)) + 40
    ref = sp.jv(np.arange(q + 1), x)
    assert np.max(np.abs(bessel_j_table(x, q) - ref)) <= 5e-14


def test_zero_argument():
    t = bessel_j_table(0.0, 5)
    assert t[0] == 1.0 and np.all(t[1:] == 0.0)


def test_argument_range():
    with pytest.raises(DomainError):
        bessel_j_table(700.5, 3)
    with pytest.raises(DomainError):
        bessel_j_table(float("nan"), 3)


@given(st.floats(0, 50))
def test_completeness(x):
    q = math.ceil(x) + 20
    _, j = bessel_j_orders(x, q)
    assert np.sum(j * j) >= 1 - 1e-10
    assert np.sum(j * j) <= 1 + 1e-12


@given(st.floats(-100, 100), st.integers(0, 30))
def test_parity(x, q):
    orders, j = bessel_j_orders(x, q)
    assert np.array_equal(j[::-1], j * (-1.0) ** orders)
