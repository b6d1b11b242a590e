import itertools

import pytest

from doubling_gamma.localfield import ONE, PI, SQUARE_CLASSES, U, UPI, hilbert_symbol_bruteforce, local_field
from doubling_gamma.spaces import (
    NOT_MINIMAL,
    HermSpace,
    SpaceError,
    classify_minimal,
    disc_of_nilpotent,
    from_diagonal,
    std_dimension,
)

QS = [3, 5, 7, 9]


@pytest.mark.parametrize("q", QS)
def test_binary_disc_and_anisotropy(q):
    ctx = local_field(q)
    for a in SQUARE_CLASSES:
        sp = from_diagonal("SO", [ONE, ctx.minus_one * a], q)
        assert sp.disc == a
        assert sp.anisotropic == (not a.is_trivial())


@pytest.mark.parametrize("q", [3, 5])
def test_ternary_hasse_matches_bruteforce_symbol(q):
    ctx = local_field(q)
    m = ctx.minus_one
    for a, b in itertools.product(SQUARE_CLASSES, repeat=2):
        sp = from_diagonal("SO", [ONE, m * a, m * b], q)
        assert sp.hasse == hilbert_symbol_bruteforce(ctx, m * a, m * b)


@pytest.mark.parametrize("q", [3, 5, 9])
def test_invariants_stable_under_permutation_and_squares(q):
    for entries in itertools.product(SQUARE_CLASSES, repeat=3):
        ref = from_diagonal("SO", list(entries), q)
        for perm in itertools.permutations(entries):
            sp = from_diagonal("SO", list(perm), q)
            assert (sp.disc, sp.hasse) == (ref.disc, ref.hasse)


@pytest.mark.parametrize("q", QS)
def test_anisotropic_counts(q):
    # one anisotropic ternary class per disc, one anisotropic quaternary class
    for n, expected in ((3, 4), (4, 1), (5, 0)):
        count = 0
        for d, c in itertools.product(SQUARE_CLASSES, (1, -1)):
            try:
                sp = HermSpace("SO", n, q, disc=d, hasse=c)
            except SpaceError:
                continue
            count += sp.anisotropic
        assert count == expected


def test_unitary_eps():
    q = 5
    ctx = local_field(q)
    for b, a in itertools.product((U, PI, UPI), SQUARE_CLASSES):
        sp = from_diagonal("U", [ONE, ctx.minus_one * a], q, ext=b)
        assert sp.eps == hilbert_symbol_bruteforce(ctx, b, a)


def test_unitary_kernels():
    q = 3
    assert HermSpace("U", 3, q, ext=PI).kernel_dim() == 1
    aniso = from_diagonal("U", [ONE, ONE], q, ext=PI)  # disc = -1 = u
    assert aniso.eps == -1 and aniso.anisotropic
    assert classify_minimal(aniso) == "Ura2"
    # unramified anisotropic U(2) is not in the minimal list
    aniso_unr = from_diagonal("U", [ONE, PI], q, ext=U)
    assert aniso_unr.anisotropic and classify_minimal(aniso_unr) == NOT_MINIMAL


def test_quaternion_division_detection():
    q = 5
    assert HermSpace("Q1", 1, q, quat=(U, PI), disc=local_field(q).minus_one).quat == (U, PI)
    assert HermSpace("Q1", 1, q, quat=(U, U), disc=local_field(q).minus_one).quat is None


def test_std_dimension_table():
    q = 3
    assert std_dimension(HermSpace("Sp", 2, q)) == 3
    assert std_dimension(HermSpace("SO", 3, q, disc=ONE, hasse=1)) == 2
    assert std_dimension(HermSpace("Q1", 1, q, quat=(U, PI), disc=U)) == 3
    assert std_dimension(HermSpace("GL", 2, q)) == 4
    assert std_dimension(HermSpace("qGL", 1, q, ext=U)) == 4


def test_classify_minimal():
    q = 3
    assert classify_minimal(HermSpace("SO", 1, q, disc=U)) == "trivial"
    assert classify_minimal(HermSpace("Sp", 2, q)) == NOT_MINIMAL
    assert classify_minimal(HermSpace("SO", 3, q, disc=PI, hasse=1)) == "SOa3"
    assert classify_minimal(HermSpace("Q-1", 1, q, quat=(U, PI), disc=PI)) == "Q-1_1"
    assert classify_minimal(HermSpace("U", 1, q, ext=U)) == "U1"


def test_disc_of_nilpotent():
    ctx = local_field(3)
    assert disc_of_nilpotent(ctx, 1, PI) == UPI  # -1 is the non-square class for q = 3
    assert disc_of_nilpotent(ctx, 2, ONE) == ONE
    assert disc_of_nilpotent(ctx, 0, U) == ONE


def test_peel_preserves_disc_and_kernel():
    q = 5
    sp = HermSpace("SO", 6, q, disc=PI, hasse=-1)
    k = sp.kernel_dim()
    for m in range(sp.witt_index() + 1):
        sub = sp.peel(m)
        assert sub.kernel_dim() == k
        assert sub.n == 6 - 2 * m
    with pytest.raises(SpaceError):
        sp.peel(sp.witt_index() + 1)


def test_json_roundtrip():
    q = 7
    spaces = [
        HermSpace("SO", 3, q, disc=PI, hasse=-1),
        HermSpace("U", 2, q, ext=PI, disc=U),
        HermSpace("Q-1", 1, q, quat=(U, PI), disc=UPI),
        HermSpace("qGL", 2, q),
        HermSpace("Sp", 4, q),
    ]
    for sp in spaces:
        assert HermSpace.from_json_obj(sp.to_json_obj()) == sp


def test_inconsistent_inputs_rejected():
    with pytest.raises(SpaceError):
        HermSpace("Sp", 3, 3)
    with pytest.raises(SpaceError):
        HermSpace("SO", 1, 3, disc=ONE, hasse=-1)
    with pytest.raises(SpaceError):
        HermSpace("GL", 1, 3, ext=U)
