import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import haar_skew, skew, unitary
from resgrass import (BlockOperator, DimensionMismatch, EnsembleSpec, InvalidExponent, InvariantViolation,
                      PolarizedSpace, RestrictedUnitary, SkewHermitian, commutator, exp_skew, identity, make_d,
                      pr_minus, pr_plus, random_predual, random_skew, random_unitary)


def test_space_validation():
    assert PolarizedSpace(2, 3).n == 5
    with pytest.raises(ValueError):
        PolarizedSpace(0, 2)
    with pytest.raises(ValueError):
        PolarizedSpace(2, -1)


def test_blocks_roundtrip(rng):
    space = PolarizedSpace(2, 3)
    x = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    a = BlockOperator(space, x)
    assert a.pp.shape == (2, 2) and a.pm.shape == (2, 3) and a.mp.shape == (3, 2) and a.mm.shape == (3, 3)
    b = BlockOperator.from_blocks(space, a.pp, a.pm, a.mp, a.mm)
    assert np.array_equal(a.entries, b.entries)
    assert np.array_equal((a.diagonal_part() + a.off_diagonal_part()).entries, a.entries)


def test_entries_are_read_only(rng):
    a = BlockOperator(PolarizedSpace(1, 1), np.eye(2))
    with pytest.raises(ValueError):
        a.entries[0, 0] = 5


def test_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        BlockOperator(PolarizedSpace(1, 1), np.eye(3))
    a = identity(PolarizedSpace(1, 1))
    b = identity(PolarizedSpace(1, 2))
    with pytest.raises(DimensionMismatch):
        a @ b


def test_d_squares_to_minus_identity(space):
    d = make_d(space)
    assert np.allclose((d @ d).entries, -np.eye(space.n))
    assert np.allclose(d.entries, 1j * (pr_plus(space) - pr_minus(space)).entries)


def test_commutator_with_d_is_off_diagonal(space, rng):
    a = haar_skew(space, rng)
    c = commutator(make_d(space), a)
    assert np.allclose(c.pp, 0) and np.allclose(c.mm, 0)
    assert np.allclose(c.mp, -2j * a.mp)
    assert np.allclose(c.pm, 2j * a.pm)


def test_skew_hermitian_rejects_hermitian():
    with pytest.raises(InvariantViolation):
        SkewHermitian(PolarizedSpace(1, 1), np.eye(2))


def test_restricted_unitary_rejects_non_unitary():
    with pytest.raises(InvariantViolation):
        RestrictedUnitary(PolarizedSpace(1, 1), 2 * np.eye(2))


def test_exp_of_rotation_generator():
    space = PolarizedSpace(1, 1)
    t = 0.7
    g = exp_skew(SkewHermitian(space, t * np.array([[0, -1], [1, 0]])))
    assert np.allclose(g.entries, [[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]], atol=1e-14)


def test_exp_of_diagonal():
    space = PolarizedSpace(1, 1)
    g = exp_skew(SkewHermitian(space, np.diag([0.3j, -1.1j])))
    assert np.allclose(np.diag(g.entries), np.exp([0.3j, -1.1j]))


def test_unitary_inverse(space):
    g = unitary(space, 3)
    assert np.allclose((g @ g.inverse()).entries, np.eye(space.n), atol=1e-12)


def test_ensemble_is_deterministic():
    space = PolarizedSpace(3, 4)
    a = random_skew(space, EnsembleSpec(11))
    b = random_skew(space, EnsembleSpec(11))
    c = random_skew(space, EnsembleSpec(12))
    assert np.array_equal(a.entries, b.entries)
    assert not np.array_equal(a.entries, c.entries)


@pytest.mark.parametrize("gen", [random_skew, random_predual])
def test_ensemble_truncations_are_nested(gen):
    spec = EnsembleSpec(5, 2.0)
    small = gen(PolarizedSpace(3, 2), spec)
    big = gen(PolarizedSpace(6, 7), spec)
    for blk in ("pp", "pm", "mp", "mm"):
        sb = getattr(small, blk)
        assert np.array_equal(getattr(big, blk)[: sb.shape[0], : sb.shape[1]], sb)


def test_magnitude_zero_gives_zero():
    a = random_skew(PolarizedSpace(3, 3), EnsembleSpec(0, 2.0, magnitude=0.0))
    assert np.count_nonzero(a.entries) == 0


def test_off_diagonal_decay():
    space = PolarizedSpace(40, 40)
    a = random_skew(space, EnsembleSpec(1, 2.0))
    near = np.abs(a.mp[:5, :5]).mean()
    far = np.abs(a.mp[-5:, -5:]).mean()
    assert far < near / 50


def test_ensemble_exponent_ranges():
    space = PolarizedSpace(2, 2)
    with pytest.raises(InvalidExponent):
        random_skew(space, EnsembleSpec(0), p=2.5)
    with pytest.raises(InvalidExponent):
        random_predual(space, EnsembleSpec(0), q=1.5)
    random_predual(space, EnsembleSpec(0), q=np.inf)
    with pytest.raises(ValueError):
        EnsembleSpec(0, decay_alpha=-1.0)


def test_random_unitary_is_unitary():
    g = random_unitary(PolarizedSpace(4, 3), EnsembleSpec(9))
    assert np.allclose(g.entries @ g.entries.conj().T, np.eye(7), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), n_plus=st.integers(1, 5), n_minus=st.integers(1, 5))
def test_random_skew_is_skew(seed, n_plus, n_minus):
    a = skew(PolarizedSpace(n_plus, n_minus), seed)
    assert np.max(np.abs(a.entries + a.entries.conj().T)) == 0.0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), t=st.floats(-3, 3))
def test_exp_is_one_parameter_group(seed, t):
    space = PolarizedSpace(2, 2)
    a = skew(space, seed)
    lhs = exp_skew(a * t) @ exp_skew(a * (1 - t))
    assert np.allclose(lhs.entries, exp_skew(a).entries, atol=1e-11)
