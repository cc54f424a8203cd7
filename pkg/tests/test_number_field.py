"""Field construction, element arithmetic, signatures, embeddings."""

import random
from fractions import Fraction

import mpmath
import pytest

from nfk.errors import FieldConstructionError, MissingRootOfUnityError
from nfk.exact_math import IntPolynomial
from nfk.number_field import build_field, dedekind_q_maximal

CUBIC = [-9, -1, 0, 1]  # x^3 - x - 9


def test_build_cubic_field():
    K = build_field(CUBIC, 2, label="cubic-9")
    assert K.degree == 3
    assert K.disc == -2183
    assert (K.r1, K.r2) == (1, 1)


def test_build_quadratic_fields():
    Ki = build_field([1, 0, 1], 2, label="qi")
    assert Ki.disc == -4 and (Ki.r1, Ki.r2) == (0, 1)
    Kz = build_field([1, 1, 1], 3, label="zeta3")
    assert Kz.disc == -3
    z = Kz.contains_zeta(3)
    assert z is not None and (z * z + z + Kz.one).is_zero()
    Kq = build_field([0, 1], 2, label="q")
    assert Kq.degree == 1 and (Kq.r1, Kq.r2) == (1, 0)


def test_build_field_rejections():
    with pytest.raises(FieldConstructionError):
        build_field([-1, 0, 1], 2)  # x^2 - 1 reducible
    with pytest.raises(FieldConstructionError):
        build_field([3, 0, 1], 2)  # Z[sqrt(-3)] not maximal at 2
    with pytest.raises(MissingRootOfUnityError):
        build_field([-2, 0, 1], 3)  # zeta_3 not in Q(sqrt 2)
    with pytest.raises(FieldConstructionError):
        build_field([1, 0, 1], 4)  # ell must be prime


def test_dedekind_criterion_directly():
    assert dedekind_q_maximal(IntPolynomial([1, 0, 1]), 2)  # Z[i] maximal at 2
    assert dedekind_q_maximal(IntPolynomial([5, 0, 1]), 2)  # Z[sqrt(-5)] maximal at 2
    assert not dedekind_q_maximal(IntPolynomial([3, 0, 1]), 2)
    assert dedekind_q_maximal(IntPolynomial([-2, 0, 1]), 2)  # Z[sqrt 2] maximal at 2


def test_element_arithmetic_cubic():
    K = build_field(CUBIC, 2)
    t = K.theta
    # theta^3 = theta + 9
    assert t * t * t == t + K.from_int(9)
    assert (t ** 3).coords == (9, 1, 0)
    x = K.element([1, 2, 3])
    y = K.element([-4, 0, 5])
    assert (x + y) - y == x
    assert x * y == y * x
    assert x * (y + y) == x * y * K.from_int(2)


def test_norm_trace_examples():
    K = build_field(CUBIC, 2)
    t = K.theta
    assert t.norm() == 9  # N(theta) = -f(0) for odd degree: 9
    assert t.trace() == 0
    assert (t - K.from_int(2)).norm() == 3
    assert (t + K.from_int(1)).norm() == 9
    Ki = build_field([1, 0, 1], 2)
    i = Ki.theta
    assert (Ki.from_int(1) + i).norm() == 2
    assert (Ki.from_int(3) + Ki.element([0, 2])).norm() == 13
    assert (Ki.from_int(3)).trace() == 6


def test_norm_multiplicative_trace_additive():
    random.seed(21)
    for coeffs in ([1, 0, 1], [5, 0, 1], CUBIC):
        K = build_field(coeffs, 2)
        for _ in range(100):
            x = K.element([random.randint(-9, 9) for _ in range(K.degree)])
            y = K.element([random.randint(-9, 9) for _ in range(K.degree)])
            assert (x * y).norm() == x.norm() * y.norm()
            assert (x + y).trace() == x.trace() + y.trace()
        # norm against embeddings (floating cross-check)
        x = K.element([random.randint(-9, 9) for _ in range(K.degree)])
        if not x.is_zero():
            numeric = K.abs_norm_from_embeddings(x, 80)
            assert abs(numeric - abs(x.norm())) < 1e-10 * max(1, abs(x.norm()))


def test_inverse_and_division():
    K = build_field(CUBIC, 2)
    random.seed(22)
    for _ in range(50):
        x = K.element([random.randint(-9, 9) for _ in range(3)])
        if x.is_zero():
            continue
        assert (x * x.inverse()).is_one()
        y = K.element([random.randint(-9, 9) for _ in range(3)])
        assert (y / x) * x == y


def test_embeddings_structure_and_precision():
    K = build_field(CUBIC, 2)
    with mpmath.workprec(160):
        vals = K.embeddings(K.theta, 128)
        assert len(vals) == 2  # one real + one complex pair
        real, comp = vals
        assert abs(real - mpmath.mpf("2.24004098746943775817")) < mpmath.mpf(2) ** -64
        assert comp.imag != 0
        # theta satisfies f under each embedding
        for v in vals:
            assert abs(v**3 - v - 9) < mpmath.mpf(2) ** -100


def test_minkowski_bounds():
    Ki = build_field([1, 0, 1], 2)
    b = Ki.minkowski_bound()
    assert Fraction("1.2732") < b < Fraction("1.2734")
    Km5 = build_field([5, 0, 1], 2)
    b5 = Km5.minkowski_bound()
    assert Fraction("2.8470") < b5 < Fraction("2.8473")
    Kc = build_field(CUBIC, 2)
    bc = Kc.minkowski_bound()
    assert Fraction("13.219") < bc < Fraction("13.221")


def test_zeta_membership():
    Kz = build_field([1, 1, 1], 3)
    assert Kz.contains_zeta(3) is not None
    assert Kz.contains_zeta(2) == Kz.from_int(-1)
    Ki = build_field([1, 0, 1], 2)
    assert Ki.contains_zeta(3) is None
    K = build_field(CUBIC, 2)
    assert K.contains_zeta(3) is None  # has a real embedding
    assert K.contains_zeta(5) is None


def test_power_traces_against_embeddings():
    K = build_field(CUBIC, 2)
    rts = K.roots(200)
    with mpmath.workprec(200):
        for k in range(5):
            numeric = rts[0] ** k + 2 * mpmath.re(rts[1] ** k)
            assert abs(numeric - K.power_traces[k]) < mpmath.mpf(2) ** -80


def test_trace_form_gram_determinant_is_disc():
    # det Tr(theta^i theta^j) = disc(K) for the power basis
    from nfk.exact_math import IntMatrix, det_int

    for coeffs, d in (([1, 0, 1], -4), ([5, 0, 1], -20), (CUBIC, -2183)):
        K = build_field(coeffs, 2)
        n = K.degree
        gram = [[int((K.theta ** (i + j)).trace()) for j in range(n)] for i in range(n)]
        assert det_int(IntMatrix(gram)) == d
