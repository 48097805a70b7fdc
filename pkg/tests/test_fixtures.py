from fractions import Fraction as F

import novispec as nv
from novispec import NEG_INF
from novispec.cli import _validate_manifold
from novispec.fixtures import (
    BUILTIN_FIXTURES,
    load_builtin,
    random_continuity_pair,
    random_instance,
    random_monodromy,
)


def test_builtins_pass_their_own_invariants():
    for name in sorted(BUILTIN_FIXTURES):
        fix = load_builtin(name)
        _validate_manifold(fix, F(1, 8))
        C = fix.build(min(F(1, 8), fix.max_eps))
        assert C.validate().ok


def test_random_instances_are_valid_and_deterministic():
    for seed in range(40):
        a = random_instance(seed)
        b = random_instance(seed)
        assert a.complex.validate().ok
        assert a.complex.orbits == b.complex.orbits
        assert a.representative.terms == b.representative.terms
        assert a.expected_rho == b.expected_rho
        assert len(a.complex.orbits) <= 6
        if not a.representative.is_zero():
            assert a.complex.boundary(a.representative).is_zero()
            if a.expected_rho != NEG_INF:
                assert a.representative.level() >= a.expected_rho


def test_continuity_pairs_are_consistent():
    for seed in range(10):
        pair = random_continuity_pair(seed)
        assert pair.source.validate().ok
        assert pair.target.validate().ok
        assert pair.forward.certify().ok
        assert pair.backward.certify().ok
        if not pair.rep_source.is_zero():
            assert pair.source.boundary(pair.rep_source).is_zero()


def test_monodromy_fixture_decks():
    decks = 0
    for seed in range(0, 12, 3):
        C, rep, shift, is_deck = random_monodromy(seed)
        if is_deck:
            decks += 1
            shifted, _, _ = nv.monodromy_shift(C, shift, None)
            assert shifted.orbits == C.orbits
    assert decks >= 1
