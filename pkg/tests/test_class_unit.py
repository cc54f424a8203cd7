"""Unit groups (torsion, fundamental, regulator) and Minkowski-census class groups."""

import random

import mpmath
import pytest

from nfk.class_unit import (
    compute_class_group,
    compute_unit_group,
    unit_coset_reps,
)
from nfk.errors import MissingRootOfUnityError
from nfk.ideals import (
    FactoredIdeal,
    ideal_from_element,
    ideal_from_rational,
    split_prime,
)
from nfk.number_field import build_field


def test_units_rank_zero(field_q, field_qi, field_qm5):
    uq = compute_unit_group(field_q)
    assert uq.w == 2 and uq.rank == 0 and uq.regulator == 1
    assert uq.zeta.coords == (-1,)

    ui = compute_unit_group(field_qi)
    assert ui.w == 4 and ui.rank == 0
    assert ui.zeta.coords == (0, 1)
    assert len(ui.torsion_elements()) == 4

    um = compute_unit_group(field_qm5)
    assert um.w == 2 and um.rank == 0
    assert um.zeta.coords == (-1, 0)


def test_units_zeta3(field_zeta3):
    u = compute_unit_group(field_zeta3)
    assert u.w == 6 and u.rank == 0
    zl, order = u.zeta_ell_part(3)
    assert order == 3
    assert zl.coords in ((0, 1), (-1, -1))  # a primitive cube root
    assert (zl * zl * zl).is_one()


def test_units_sqrt2(field_qs2):
    u = compute_unit_group(field_qs2)
    assert u.w == 2 and u.rank == 1
    assert u.fundamental[0].coords == (1, 1)
    with mpmath.workprec(80):
        assert abs(u.regulator - mpmath.log(1 + mpmath.sqrt(2))) < mpmath.mpf("1e-9")


def test_units_cubic9(field_cubic9):
    u = compute_unit_group(field_cubic9)
    assert u.w == 2 and u.rank == 1
    fund = u.fundamental[0]
    assert abs(fund.norm()) == 1
    assert ideal_from_element(fund).is_one()
    assert fund.coords == (16, 9, 4)
    assert 4.02 < float(u.regulator) < 4.04


def test_units_rank_two_smoke():
    K = build_field([-1, -3, 0, 1], ell=2, label="cyclic-cubic-9")
    u = compute_unit_group(K)
    assert (K.r1, K.r2) == (3, 0)
    assert u.rank == 2 and u.w == 2
    for f in u.fundamental:
        assert abs(f.norm()) == 1
    # regulator of the totally real cubic of discriminant 81
    assert 0.84 < float(u.regulator) < 0.86


def test_known_units_override():
    K = build_field([-2, 0, 1], ell=2, label="qs2-fresh")
    u = compute_unit_group(K, known_units=[[1, 1]])
    assert u.fundamental[0].coords == (1, 1)
    K2 = build_field([-2, 0, 1], ell=2, label="qs2-fresh2")
    with pytest.raises(ValueError):
        compute_unit_group(K2, known_units=[[2, 0]])
    K3 = build_field([-2, 0, 1], ell=2, label="qs2-fresh3")
    with pytest.raises(ValueError):
        compute_unit_group(K3, known_units=[[-1, 0]])


def test_unit_coset_reps_counts(field_q, field_qi, field_qm5, field_cubic9, field_zeta3):
    for K, expected in (
        (field_q, 2),
        (field_qi, 2),
        (field_qm5, 2),
        (field_cubic9, 4),
    ):
        ug = compute_unit_group(K)
        reps = unit_coset_reps(ug, 2)
        assert len(reps) == expected == 2 ** (K.r1 + K.r2)
        assert any(r.is_one() for r in reps)
    reps3 = unit_coset_reps(compute_unit_group(field_zeta3), 3)
    assert len(reps3) == 3
    zl, _ = compute_unit_group(field_zeta3).zeta_ell_part(3)
    assert {r.coords for r in reps3} == {(1, 0), zl.coords, (zl * zl).coords}


def test_unit_coset_reps_gaussian_is_one_i(field_qi):
    reps = unit_coset_reps(compute_unit_group(field_qi), 2)
    assert {r.coords for r in reps} == {(1, 0), (0, 1)}


def test_unit_coset_requires_zeta(field_qs2):
    with pytest.raises(MissingRootOfUnityError):
        unit_coset_reps(compute_unit_group(field_qs2), 3)


def test_coset_ratios_never_powers(field_cubic9):
    ug = compute_unit_group(field_cubic9)
    reps = unit_coset_reps(ug, 2)
    u1 = ug.fundamental[0]
    small_units = []
    for a in range(2):
        for k in range(-3, 4):
            small_units.append((ug.zeta**a) * (u1**k))
    for i, ri in enumerate(reps):
        for j, rj in enumerate(reps):
            if i == j:
                continue
            ratio = ri / rj
            assert not any((v * v).coords == ratio.coords for v in small_units)


def test_class_groups_trivial(field_q, field_qi, field_qs2, field_zeta3):
    for K in (field_q, field_qi, field_qs2, field_zeta3):
        cg = compute_class_group(K)
        assert cg.h == 1
        assert cg.group.divisor_chain() == []


def test_class_group_qm5(field_qm5):
    cg = compute_class_group(field_qm5)
    assert cg.h == 2
    assert cg.group.divisor_chain() == [2]
    p2 = split_prime(field_qm5, 2)[0]
    assert cg.class_of_prime(p2) == 1
    assert cg.index_of(ideal_from_rational(field_qm5, 2)) == 0
    assert cg.index_of(p2.ideal) == 1
    # [p2]^2 = [(2)] = identity
    assert cg.index_of(FactoredIdeal(field_qm5, {p2: 2})) == 0


def test_class_homomorphism_random(field_qm5):
    cg = compute_class_group(field_qm5)
    K = field_qm5
    rng = random.Random(23)
    primes = [q for p in (2, 3, 7, 11, 13) for q in split_prime(K, p)]
    for _ in range(30):
        qa, qb = rng.choice(primes), rng.choice(primes)
        ea, eb = rng.randint(-3, 3), rng.randint(-3, 3)
        a = FactoredIdeal(K, {qa: ea})
        b = FactoredIdeal(K, {qb: eb})
        assert cg.index_of(a * b) == cg.group.op(cg.index_of(a), cg.index_of(b))


def test_class_group_cubic9(field_cubic9):
    cg = compute_class_group(field_cubic9)
    # census result; the analytic class number formula cross-check lives in
    # the zeta tests (residue vs 2^r1 (2pi)^r2 hR / (w sqrt|d|))
    assert cg.h == 2
    assert cg.group.divisor_chain() == [2]
    # self-consistency: representatives round-trip and the table is a group
    for i, rep in enumerate(cg.reps):
        assert cg.index_of(rep) == i
    assert cg.h == len(cg.reps)
    K = field_cubic9
    # the norm-3 prime containing theta - 2 is principal; inert (2) too
    target = K.element([-2, 1, 0])
    q = next(q for q in split_prime(K, 3) if q.ideal.contains(target))
    assert cg.class_of_prime(q) == 0
    assert cg.class_of_prime(split_prime(K, 2)[0]) == 0
    # the three norm-3 classes multiply to the principal class
    three = [cg.class_of_prime(q) for q in split_prime(K, 3)]
    assert sum(three) % 2 == 0 and sorted(three) == [0, 1, 1]


def test_ell_free_representative(field_qm5):
    cg = compute_class_group(field_qm5)
    rep = cg.ell_free_representative(1, 2)
    (q,) = rep.support()
    assert q.p == 3  # the prime over 2 is in the class but not coprime to 2
    assert cg.index_of(rep) == 1
    assert cg.ell_free_representative(0, 2).is_unit_ideal()


def test_known_h_mismatch():
    K = build_field([5, 0, 1], ell=2, label="qm5-fresh")
    with pytest.raises(ArithmeticError):
        compute_class_group(K, known_h=3)


def test_power_subgroup_indices(field_qm5):
    cg = compute_class_group(field_qm5)
    assert cg.power_subgroup_indices(2) == [0]
    assert cg.power_subgroup_indices(1) == [0, 1]
