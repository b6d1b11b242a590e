import itertools
from fractions import Fraction

import pytest

from doubling_gamma.exactnum import RationalQS
from doubling_gamma.integrals import (
    InnerFactor,
    ShellError,
    ShellIntegrand,
    ShellTerm,
    check_quat_indicator,
    eval_shell_integral,
    gamma_from_whittaker,
    numeric_shell_integral,
    shell_integrand_for,
    whittaker_minimal,
)
from doubling_gamma.doubling import eps_at_half
from doubling_gamma.localfield import ONE, PI, SQUARE_CLASSES, U, UPI, AddChar, MultChar, hilbert_symbol, local_field
from doubling_gamma.params import gamma_of_parameter, principal_parameter
from doubling_gamma.ratexpr import evaluate
from doubling_gamma.spaces import HermSpace

QS = [3, 5, 7]


def test_inner_factor_volumes():
    f = InnerFactor(0, 1, 0)
    assert f.value(3, 0) == 0  # vol(O) = 1
    assert f.value(3, 1) is None  # psi non-trivial on t^{-1} O
    g = InnerFactor(1, 2, None)
    assert g.value(3, 1) == 1  # x^2 in t^{-2}O  <=>  x in t^{-1}O
    with pytest.raises(ShellError):
        InnerFactor(0, 3, 0)


@pytest.mark.parametrize("q", QS)
def test_shell_values(q):
    # the three displayed values: 1, 1/(1+q^{-s-1/2}), 1 + q^{-s+1/2}
    assert eval_shell_integral(shell_integrand_for("SOa2", 0, q)).is_one()
    assert eval_shell_integral(shell_integrand_for("SOa2", 1, q)) == evaluate("1/(1+q^(-s-1/2))", q)
    assert eval_shell_integral(shell_integrand_for("Q1_1", 0, q)) == evaluate("1 + q^(-s+1/2)", q)


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("key", [("SOa2", 0), ("SOa2", 1), ("Q1_1", 0)])
def test_shell_numeric(q, key):
    integrand = shell_integrand_for(key[0], key[1], q)
    exact = eval_shell_integral(integrand)
    for s in (0.7, 1.3 + 0.4j, 2.1):
        assert numeric_shell_integral(integrand, s, shells=40) == pytest.approx(exact.eval_numeric(s), abs=1e-10)


def test_geometric_series():
    # sum_k |t|^{s} over k >= 0 with no inner factor: 1/(1 - q^{-s})
    q = 5
    integrand = ShellIntegrand(q, (ShellTerm(RationalQS.one(q), (), 1, Fraction(0)),))
    assert eval_shell_integral(integrand) == evaluate("zeta(s)", q)


@pytest.mark.parametrize("q", QS)
def test_whittaker_unramified_value(q):
    # l(f_s) = 1/zeta(2s+1)
    assert whittaker_minimal("SOa2", q, 0) == evaluate("1 - q^(-2*s-1)", q)


def whittaker_spaces(q):
    out = []
    for d in (U, PI, UPI):
        out.append(HermSpace("SO", 2, q, disc=d))
        out.append(HermSpace("Q-1", 1, q, quat=(U, PI), disc=d))
    out.append(HermSpace("U", 1, q, ext=U))
    out.append(HermSpace("Q1", 1, q, quat=(U, PI), disc=local_field(q).minus_one))
    return [sp for sp in out if sp is not None]


@pytest.mark.parametrize("q", QS)
def test_whittaker_reproduces_gamma(q):
    for sp in whittaker_spaces(q):
        psi = AddChar()
        assert gamma_from_whittaker(sp, psi) == gamma_of_parameter(principal_parameter(sp), psi, q).shift(Fraction(1, 2)), sp.label()


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("ext", [PI, UPI])
def test_whittaker_ramified_unitary_misses_eps(q, ext):
    # pinned: for ramified E the correction term is short by eps(1/2, chi_E, psi),
    # which changes sign with the seed while the Whittaker side does not
    sp = HermSpace("U", 1, q, ext=ext)
    ratios = []
    for seed in (0, 1):
        psi = AddChar(0, seed)
        expect = gamma_of_parameter(principal_parameter(sp), psi, q).shift(Fraction(1, 2))
        ratio = expect / gamma_from_whittaker(sp, psi)
        assert ratio == RationalQS.constant(q, eps_at_half(MultChar.quadratic(q, ext), psi))
        ratios.append(ratio)
    assert ratios[0] == -ratios[1]


def test_whittaker_needs_level_zero():
    with pytest.raises(ShellError):
        gamma_from_whittaker(HermSpace("SO", 2, 3, disc=U), AddChar(1))


@pytest.mark.parametrize("q", [3, 5])
def test_quat_indicator_division_pairs(q):
    ctx = local_field(q)
    pairs = [(a, b) for a, b in itertools.product(SQUARE_CLASSES, repeat=2) if hilbert_symbol(ctx, a, b) == -1]
    assert pairs
    for a, b in pairs[:2]:
        v = check_quat_indicator(q, a, b, N=4)
        assert v.ok and v.checked > 0


def test_quat_indicator_brute_force_agrees():
    assert check_quat_indicator(3, U, PI, N=3, brute=True).ok
    assert check_quat_indicator(3, U, PI, N=3).ok


def test_quat_indicator_negative_control():
    with pytest.raises(ShellError):
        check_quat_indicator(3, ONE, PI)
    assert not check_quat_indicator(3, ONE, PI, N=3, require_division=False).ok
    assert not check_quat_indicator(3, ONE, PI, N=3, brute=True, require_division=False).ok
