import random
from fractions import Fraction as F

import pytest

from novispec import GammaGroup, StructuralError
from novispec.gamma import fraction_gcd, vec_add, vec_neg


def test_identity_evaluates_to_zero():
    g = GammaGroup((F(1), F(3, 2)), (0, 1))
    assert g.evaluate((0, 0)) == (0, 0)


def test_linear_extension_example():
    g = GammaGroup((F(1), F(3, 2)), (0, 1))
    assert g.evaluate((2, -1)) == (F(1, 2), -1)


def test_degenerate_generator_rejected():
    with pytest.raises(StructuralError):
        GammaGroup((F(0),), (0,))


def test_proportional_rows_rejected():
    # omega and c1 proportional on rank two leaves a joint kernel vector
    with pytest.raises(StructuralError):
        GammaGroup((F(1), F(2)), (2, 4))


def test_rank_three_rational_always_rejected():
    with pytest.raises(StructuralError):
        GammaGroup((F(1), F(2), F(3)), (1, 0, 0))


def test_homomorphism_on_random_triples():
    rng = random.Random(0)
    g = GammaGroup((F(1), F(3, 2)), (0, 1))
    for _ in range(50):
        a = (rng.randint(-5, 5), rng.randint(-5, 5))
        b = (rng.randint(-5, 5), rng.randint(-5, 5))
        wa, ca = g.evaluate(a)
        wb, cb = g.evaluate(b)
        assert g.evaluate(vec_add(a, b)) == (wa + wb, ca + cb)
        assert g.evaluate(vec_neg(a)) == (-wa, -ca)


def test_dimension_mismatch():
    g = GammaGroup((F(1),), (2,))
    with pytest.raises(StructuralError):
        g.omega((1, 2))


def test_period_generator():
    assert GammaGroup((F(1), F(3, 2)), (0, 1)).period_generator() == F(1, 2)
    assert GammaGroup((), ()).period_generator() == 0
    assert fraction_gcd([F(2, 3), F(1, 2)]) == F(1, 6)


def test_in_period_group():
    g = GammaGroup((F(1), F(3, 2)), (0, 1))
    assert g.in_period_group(F(5, 2))
    assert not g.in_period_group(F(1, 3))
    trivial = GammaGroup((), ())
    assert trivial.in_period_group(0)
    assert not trivial.in_period_group(1)


def test_solve_unique_element():
    g = GammaGroup((F(1), F(3, 2)), (0, 1))
    for target in [(F(1, 2), -1), (F(0), 0), (F(5), 2)]:
        v = g.solve(*target)
        if v is not None:
            assert g.evaluate(v) == target
    assert g.solve(F(1, 2), -1) == (2, -1)
    assert g.solve(F(1, 3), 0) is None  # off the period lattice

    r1 = GammaGroup((F(1),), (2,))
    assert r1.solve(F(3), 6) == (3,)
    assert r1.solve(F(3), 5) is None

    z = GammaGroup((F(0),), (1,))
    assert z.solve(F(0), 4) == (4,)
    assert z.solve(F(1), 4) is None
