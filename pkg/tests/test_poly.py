"""Exact integer polynomial arithmetic."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetanull import IntPolynomial


def _x(i, n=3):
    return IntPolynomial.variable(i, n)


def test_binomial_identity():
    x, y = _x(0, 2), _x(1, 2)
    assert (x + y) ** 2 == x**2 + 2 * x * y + y**2
    assert (x - y) * (x + y) == x**2 - y**2


def test_constants_and_zero():
    c = IntPolynomial.constant(7, 2)
    assert c.evaluate([100, -100]) == 7
    assert (c - c).is_zero
    assert c - 7 == 0
    assert IntPolynomial.constant(0, 2).is_zero


def test_pow_by_squaring():
    x, y = _x(0, 2), _x(1, 2)
    p = x + 2 * y
    assert p**5 == p * p * p * p * p
    assert p**0 == 1
    with pytest.raises(ValueError):
        p ** (-1)


def test_substitute_and_evaluate():
    x, y, z = _x(0), _x(1), _x(2)
    p = x * y**2 - 3 * z + 5
    assert p.substitute(1, 0) == 5 - 3 * z
    assert p.substitute(2, 2) == x * y**2 - 1
    assert p.evaluate([2, 3, 4]) == 2 * 9 - 12 + 5


def test_permute():
    x, y, z = _x(0), _x(1), _x(2)
    p = x**2 * y + z
    assert p.permute([1, 0, 2]) == y**2 * x + z
    assert p.permute([0, 1, 2]) == p
    with pytest.raises(ValueError):
        p.permute([0, 0, 2])


def test_total_degree():
    x, y = _x(0, 2), _x(1, 2)
    assert (x**3 * y + y**2).total_degree() == 4
    assert IntPolynomial.constant(5, 2).total_degree() == 0
    assert IntPolynomial.constant(0, 2).total_degree() == 0


def test_immutability_and_hash():
    x = _x(0, 1)
    with pytest.raises(AttributeError):
        x.coeffs = {}
    assert hash(x + 1) == hash(1 + x)
    assert len({x, x + 0, x * 1}) == 1


def test_variable_count_mismatch_rejected():
    with pytest.raises(ValueError):
        IntPolynomial.variable(3, 3)
    with pytest.raises(ValueError):
        _x(0, 2) + _x(0, 3)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_ring_axioms_on_random_polynomials(data):
    ints = st.integers(-4, 4)
    def poly(draw):
        terms = draw(st.lists(st.tuples(ints, st.tuples(*[st.integers(0, 3)] * 2)), max_size=4))
        total = IntPolynomial.constant(0, 2)
        x, y = _x(0, 2), _x(1, 2)
        for coeff, (i, j) in terms:
            total = total + coeff * x**i * y**j
        return total
    p, q, r = poly(data.draw), poly(data.draw), poly(data.draw)
    assert p + q == q + p
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert (p - p).is_zero
    pt = [data.draw(ints), data.draw(ints)]
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)
