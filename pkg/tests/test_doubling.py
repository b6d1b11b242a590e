import json
from fractions import Fraction

import pytest

from doubling_gamma.doubling import (
    AbstractGJ,
    CharTwist,
    DescriptorError,
    GammaResult,
    GLBlock,
    MinimalTrivial,
    ReprDescriptor,
    TrivialGroup,
    Unramified,
    big_gamma,
    central_sign,
    check_functional_equation,
    correction_R,
    dual_descriptor,
    gamma_minimal,
    gamma_minimal_printed,
    gamma_of_tower,
    t_factor,
)
from doubling_gamma.exactnum import Coeff, RationalQS
from doubling_gamma.localfield import ONE, PI, U, UPI, AddChar, MultChar, SquareClass
from doubling_gamma.params import gamma_of_parameter, principal_parameter
from doubling_gamma.ratexpr import evaluate
from doubling_gamma.spaces import DoublingNilpotent, HermSpace
from doubling_gamma.cli import minimal_spaces

HALF = Fraction(1, 2)


def tw(q, z, ext=None):
    return MultChar.unramified(q, z, ext)


@pytest.mark.parametrize("q", [3, 5])
def test_minimal_matches_parameter(q):
    for tag, spaces in minimal_spaces(q).items():
        for sp in spaces:
            for psi in (AddChar(0, 0), AddChar(0, 1), AddChar(2, 1)):
                res = gamma_minimal(sp, psi)
                assert res.gamma == gamma_of_parameter(principal_parameter(sp), psi, q), (tag, sp.label())
                assert res.consistent()


def test_soa3_printed_ratio():
    sp = HermSpace("SO", 3, 3, disc=PI)
    g = gamma_minimal(sp, AddChar()).gamma.shift(HALF)
    assert g == evaluate("zeta(-s)/zeta(s) * zeta(-s+1)/zeta(s+1)", 3)


def test_soa4_printed_formula_misses_a_square():
    # pinned: the printed single ratio differs from the parameter by zeta(-s+1/2)/zeta(s+1/2)
    for q in (3, 5):
        (sp,) = minimal_spaces(q)["SOa4"]
        psi = AddChar()
        ratio = gamma_minimal(sp, psi).gamma / gamma_minimal_printed(sp, psi)
        assert ratio.shift(HALF) == evaluate("zeta(-s+1/2)/zeta(s+1/2)", q)


def test_printed_minimal_agrees_elsewhere():
    for tag, spaces in minimal_spaces(5).items():
        if tag == "SOa4":
            continue
        for sp in spaces:
            assert gamma_minimal_printed(sp, AddChar()) == gamma_minimal(sp, AddChar()).gamma


def test_t_factor_by_hand():
    # Sp(2): N = 3, T_3(pi) = |pi|^{3(s-1/2)} = q^{3/2 - 3s}
    assert t_factor(HermSpace("Sp", 2, 3), None, 1) == evaluate("q^(-3*s+3/2)", 3)
    # SO(2), disc u: N = 2, chi_u(pi) = -1
    assert t_factor(HermSpace("SO", 2, 3, disc=U), None, 1) == evaluate("-q^(-2*s+1)", 3)
    # unit a: only the quadratic character survives
    assert t_factor(HermSpace("SO", 2, 5, disc=PI), None, 0, U) == RationalQS.constant(5, -1)


def test_t_factor_odd_unitary_pinned():
    # pinned: the table has no chi_E(a) for U(n odd), the U(1) formula needs it
    sp = HermSpace("U", 1, 3, ext=U)
    ratio = t_factor(sp, None, 1) / t_factor(sp, None, 1, printed=True)
    assert ratio == RationalQS.constant(3, -1)
    sp2 = HermSpace("U", 2, 3, ext=U)
    assert t_factor(sp2, None, 1) == t_factor(sp2, None, 1, printed=True)


def test_t_factor_odd_orthogonal_pinned():
    sp = HermSpace("SO", 3, 5, disc=PI)
    ratio = t_factor(sp, None, 0, U) / t_factor(sp, None, 0, U, printed=True)
    assert ratio == RationalQS.constant(5, -1)


def test_q1_correction_term():
    # gamma(s+1/2, chi_u)/eps(1/2, chi_u) for the quaternion Q1 line
    sp = HermSpace("Q1", 1, 3, quat=(U, PI), disc=U)
    A = DoublingNilpotent(0, ONE)
    R = correction_R(sp, None, A, AddChar())
    assert R == evaluate("(1+q^(-s-1/2))/(1+q^(s-1/2))", 3)
    assert R != evaluate("(1+q^(s-1/2))/(1+q^(-s-1/2))", 3)


def test_correction_needs_corank_one_for_odd_so():
    from doubling_gamma.spaces import SpaceError

    with pytest.raises(SpaceError):
        correction_R(HermSpace("SO", 3, 3, disc=PI), None, DoublingNilpotent(), AddChar())


def suite(q):
    return [
        ReprDescriptor(HermSpace("GL", 2, q), (GLBlock(1, CharTwist(tw(q, 2))), GLBlock(1, CharTwist(MultChar.quadratic(q, PI)))),
                       TrivialGroup(), (tw(q, 3), MultChar.trivial(q))),
        ReprDescriptor(HermSpace("Sp", 4, q), (GLBlock(2, CharTwist(MultChar.quadratic(q, UPI))),), TrivialGroup()),
        ReprDescriptor(HermSpace("SO", 5, q), (GLBlock(1, CharTwist(tw(q, 5))),), Unramified((Coeff(q, 2),))),
        ReprDescriptor(HermSpace("U", 3, q, ext=PI), (GLBlock(1, CharTwist(tw(q, 2, PI))),), MinimalTrivial()),
        ReprDescriptor(HermSpace("QGL", 2, q, quat=(U, PI)), (GLBlock(2, CharTwist(tw(q, 7))),), TrivialGroup()),
        ReprDescriptor(HermSpace("Q1", 2, q), (GLBlock(1, CharTwist(tw(q, 2))),), MinimalTrivial()),
        ReprDescriptor(HermSpace("Q-1", 3, q, quat=(U, PI), disc=PI), (GLBlock(1, CharTwist(tw(q, 3))),), MinimalTrivial()),
        ReprDescriptor(HermSpace("qGL", 2, q, ext=U), (GLBlock(1, CharTwist(tw(q, 3, U))), GLBlock(1, CharTwist(tw(q, 5, U)))),
                       TrivialGroup()),
    ]


@pytest.mark.parametrize("q", [3, 5])
def test_functional_equation_and_monomial_eps(q):
    for desc in suite(q):
        for psi in (AddChar(0, 0), AddChar(1, 1)):
            assert check_functional_equation(desc, psi).ok, desc.label()
            res = gamma_of_tower(desc, psi)
            assert res.eps.is_monomial()
            assert res.consistent()


def test_dual_descriptor_involution():
    for desc in suite(3):
        assert dual_descriptor(dual_descriptor(desc)) == desc


def test_abstract_block_matches_character_block():
    # an AbstractGJ block with the Tate data of chi reproduces the CharTwist block
    from doubling_gamma.tate import tate_gamma
    from doubling_gamma.localfield import dual_psi, local_field

    q, psi = 5, AddChar()
    chi = tw(q, 3)
    data = AbstractGJ(tate_gamma(chi, psi), tate_gamma(chi.inverse(), dual_psi(local_field(q), psi)))
    sp = HermSpace("GL", 1, q)
    a = gamma_of_tower(ReprDescriptor(sp, (GLBlock(1, CharTwist(chi)),), TrivialGroup()), psi).gamma
    b = gamma_of_tower(ReprDescriptor(sp, (GLBlock(1, data),), TrivialGroup()), psi).gamma
    assert a == b


def test_unramified_leaf_is_l_ratio():
    # Sp(2) spherical with Satake z: std = z + 1 + z^{-1}
    q, z = 3, Coeff(3, 2)
    res = gamma_of_tower(ReprDescriptor(HermSpace("Sp", 2, q), (), Unramified((z,))), AddChar())
    expect = evaluate("L(1-s, w1)/L(s, w) * L(1-s, 1)/L(s, 1) * L(1-s, w)/L(s, w1)", q,
                      chars={"w": tw(q, z), "w1": tw(q, z.inverse())})
    assert res.gamma == expect


def test_split_quaternion_matches_natural_space():
    # GL_1(M_2(F)) in split Q1(2) is GL_2(F) in Sp(4)
    q, psi = 3, AddChar()
    chi = tw(q, 2)
    split = ReprDescriptor(HermSpace("Q1", 2, q), (GLBlock(1, CharTwist(chi)),), TrivialGroup())
    nat = ReprDescriptor(HermSpace("Sp", 4, q), (GLBlock(2, CharTwist(chi)),), TrivialGroup())
    assert gamma_of_tower(split, psi).gamma == gamma_of_tower(nat, psi).gamma


def test_descriptor_errors():
    q = 3
    with pytest.raises(DescriptorError):
        ReprDescriptor(HermSpace("Sp", 2, q), (GLBlock(2, CharTwist(tw(q, 2))),))
    with pytest.raises(DescriptorError):
        ReprDescriptor(HermSpace("GL", 1, q), omega=MultChar.trivial(q))
    with pytest.raises(DescriptorError):
        ReprDescriptor(HermSpace("SO", 3, q, disc=PI), omega=(MultChar.trivial(q),) * 2)
    with pytest.raises(DescriptorError):
        GLBlock(0, CharTwist(tw(q, 2)))
    with pytest.raises(DescriptorError):
        gamma_of_tower(ReprDescriptor(HermSpace("U", 2, q, ext=U), (GLBlock(1, CharTwist(tw(q, 2))),), TrivialGroup()),
                       AddChar())


def test_central_sign():
    q = 3  # -1 is the non-square u
    d = ReprDescriptor(HermSpace("Sp", 2, q), (GLBlock(1, CharTwist(MultChar.quadratic(q, PI))),), TrivialGroup())
    assert central_sign(d) == -1
    d2 = ReprDescriptor(HermSpace("Sp", 2, q), (GLBlock(1, CharTwist(MultChar.quadratic(q, U))),), TrivialGroup())
    assert central_sign(d2) == 1
    assert central_sign(ReprDescriptor(HermSpace("Sp", 2, q), (), Unramified((2,), csign=-1))) == -1


def test_big_gamma_undoes_normalization():
    q, psi = 3, AddChar()
    sp = HermSpace("SO", 2, q, disc=U)
    d = ReprDescriptor(sp)
    A = DoublingNilpotent(0, SquareClass(0, 0))
    G = big_gamma(d, A, psi)
    assert G * correction_R(sp, None, A, psi) == gamma_of_tower(d, psi).gamma.shift(HALF)


def test_result_json_round_trip():
    res = gamma_of_tower(suite(3)[2], AddChar(1, 1))
    text = res.to_json()
    assert json.loads(text)["version"] == 1
    assert GammaResult.from_json_obj(json.loads(text)) == res
    assert res.to_json() == text


def test_psi_level_of_minimal_case():
    sp = HermSpace("SO", 2, 5, disc=PI)
    g0 = gamma_minimal(sp, AddChar(0, 1)).gamma
    g1 = gamma_minimal(sp, AddChar(1, 1)).gamma
    assert g1 == g0 * t_factor(sp, None, 1)
