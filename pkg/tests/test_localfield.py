import itertools

import pytest

from doubling_gamma.localfield import (
    ONE,
    PI,
    SQUARE_CLASSES,
    U,
    UPI,
    AddChar,
    MultChar,
    SquareClass,
    chi_eval,
    classify_quad_ext,
    dual_psi,
    hilbert_symbol,
    hilbert_symbol_bruteforce,
    local_field,
)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_hilbert_matches_solvability_oracle(q):
    ctx = local_field(q)
    for a, b in itertools.product(SQUARE_CLASSES, repeat=2):
        assert hilbert_symbol(ctx, a, b) == hilbert_symbol_bruteforce(ctx, a, b)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 25, 27])
def test_hilbert_symbol_axioms(q):
    ctx = local_field(q)
    for a, b, c in itertools.product(SQUARE_CLASSES, repeat=3):
        assert hilbert_symbol(ctx, a, b) == hilbert_symbol(ctx, b, a)
        assert hilbert_symbol(ctx, a * b, c) == hilbert_symbol(ctx, a, c) * hilbert_symbol(ctx, b, c)
    for a in SQUARE_CLASSES:
        assert hilbert_symbol(ctx, a, ctx.minus_one * a) == 1


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_nondegenerate(q):
    ctx = local_field(q)
    for a in SQUARE_CLASSES[1:]:
        assert any(hilbert_symbol(ctx, a, b) == -1 for b in SQUARE_CLASSES)


def test_minus_one_class():
    assert local_field(3).minus_one == U
    assert local_field(7).minus_one == U
    assert local_field(5).minus_one == ONE
    assert local_field(9).minus_one == ONE


def test_residue_field_q9_structure():
    R = local_field(9).residue
    assert len(list(R.units())) == 8
    squares = {R.mul[x][x] for x in R.units()}
    assert len(squares) == 4
    assert R.nonsquare not in squares
    assert sum(1 for x in R.elements() if R.trace[x] == 0) == 3


def test_square_class_parse_roundtrip():
    for c in SQUARE_CLASSES:
        assert SquareClass.parse(c.name) == c
    assert PI * UPI == U


def test_quadratic_extensions():
    ctx = local_field(5)
    assert classify_quad_ext(ctx, U).ramified is False
    assert classify_quad_ext(ctx, U).f == 2
    assert classify_quad_ext(ctx, PI).ramified is True
    with pytest.raises(ValueError):
        classify_quad_ext(ctx, ONE)


@pytest.mark.parametrize("q", [3, 5])
def test_characters(q):
    ctx = local_field(q)
    chi_u = MultChar.quadratic(q, U)
    assert int(chi_u.value_at_uniformizer().a) == -1
    assert not chi_u.is_ramified
    chi_pi = MultChar.quadratic(q, PI)
    assert chi_pi.is_ramified and chi_pi.conductor == 1
    # restricted to units, chi_pi is the Legendre symbol
    assert chi_eval(chi_pi, 0, U) == -1
    assert chi_pi.value_at_minus_one() == hilbert_symbol(ctx, PI, ctx.minus_one)
    assert (chi_u * chi_pi).quad == UPI


def test_psi_rescaling():
    psi = AddChar(0, 0)
    assert psi.rescale(1) == AddChar(1, 0)
    assert psi.rescale(-1, U) == AddChar(-1, 1)
    assert dual_psi(local_field(3), psi) == AddChar(0, 1)
    assert dual_psi(local_field(5), psi) == psi
