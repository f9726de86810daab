import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from nbraid.groupring import (
    DecompositionCertificate,
    FiniteGroup,
    GF2Space,
    GroupRing,
    GroupTooLarge,
    PreconditionFailed,
    SpecialElement,
    Term,
    aug_dims,
    aug_power_basis,
    check_decomposition,
    random_special,
    special_reduce,
)
from nbraid.suites import klein_quotient_split

FROZEN = oracles.frozen()


def z4_inversion():
    Z4 = FiniteGroup.cyclic(4)
    return FiniteGroup.semidirect(Z4, Z4, lambda c, a: (a * (-1) ** c) % 4)


def test_small_cyclic_dims():
    assert aug_dims(FiniteGroup.cyclic(2), 2) == FROZEN["z2_aug_dims"] == [1, 0]
    assert aug_dims(FiniteGroup.cyclic(4), 4) == FROZEN["z4_aug_dims"] == [3, 2, 1, 0]
    assert oracles.aug_dims(oracles.cyclic(4), 4) == FROZEN["z4_aug_dims"]


def test_power_zero_is_whole_ring():
    G = FiniteGroup.cyclic(8)
    assert aug_power_basis(G, 0).dim == 8
    assert aug_power_basis(G, 1).dim == 7


@pytest.mark.parametrize("make", [lambda: FiniteGroup.cyclic(8), lambda: z4_inversion()[0],
                                  lambda: FiniteGroup.direct(FiniteGroup.cyclic(2), FiniteGroup.cyclic(4))[0]])
def test_chains_agree_across_pivot_orders(make):
    G = make()
    prev = None
    for k in range(1, 6):
        hi = aug_power_basis(G, k, pivot="high")
        lo = aug_power_basis(G, k, pivot="low")
        assert hi.equals(lo)
        if prev is not None:
            assert prev.contains_space(hi)
        prev = hi
    assert aug_power_basis(G, 1).dim == G.order - 1


def test_nilpotent_chain_reaches_zero():
    G, _, _ = z4_inversion()
    dims = aug_dims(G, 12)
    assert dims[-1] == 0 and all(a > b or a == 0 for a, b in zip(dims, dims[1:]))


def test_squares_shortcut():
    G, _, _ = z4_inversion()
    R = GroupRing(G)
    for k in range(G.order):
        assert np.array_equal(R.aug(G.mul(k, k)), R.mul(R.aug(k), R.aug(k)))


def test_decomposition_klein_class2():
    Q, A, C = klein_quotient_split(2)
    assert Q.order == 16
    r = check_decomposition(Q, A, C, 3)
    assert r.ok
    frozen = FROZEN["klein_mod4_decomposition"]
    assert aug_dims(Q, 3) == [lhs for lhs, _ in frozen]
    assert all(lhs == rhs for lhs, rhs in frozen)


def test_decomposition_explicit_semidirect_matches_quotient():
    G, A, C = z4_inversion()
    Q, _, _ = klein_quotient_split(2)
    assert aug_dims(G, 4) == aug_dims(Q, 4)
    assert check_decomposition(G, A, C, 3).ok


def test_decomposition_direct_product():
    Z4 = FiniteGroup.cyclic(4)
    G, A, C = FiniteGroup.direct(Z4, Z4)
    assert check_decomposition(G, A, C, 3).ok
    assert aug_dims(G, 3) == [lhs for lhs, _ in FROZEN["z4xz4_decomposition"]]


def test_trivial_complement():
    G = FiniteGroup.cyclic(8)
    assert check_decomposition(G, list(range(8)), [0], 4).ok


def test_precondition_failed():
    # (Z/2)^2 with the swap: the action on H_1(A; F_2) is not trivial
    V, _, _ = FiniteGroup.direct(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))
    swap = {0: 0, 1: 2, 2: 1, 3: 3}
    G, A, C = FiniteGroup.semidirect(V, FiniteGroup.cyclic(2), lambda c, a: swap[a] if c else a)
    with pytest.raises(PreconditionFailed):
        check_decomposition(G, A, C, 2)


def test_swap_identity_certificate():
    G, A, C = z4_inversion()
    R = GroupRing(G)
    a, c = A[1], C[1]
    cert = special_reduce(SpecialElement((c, a), ("C", "A")), G, A, C)
    assert cert.verify(R, C)
    f = G.mul(c, a, int(G.inv[c]), int(G.inv[a]))
    lhs = R.mul(R.aug(c), R.aug(a))
    rhs = R.mul(R.aug(a), R.aug(c)) ^ R.right_mul(R.aug(f), G.mul(a, c))
    assert np.array_equal(lhs, rhs)


def test_standard_element_is_kept():
    G, A, C = z4_inversion()
    e = SpecialElement((A[1], C[1]), ("A", "C"))
    assert e.type == (0, 1) and e.is_standard()
    cert = special_reduce(e, G, A, C)
    assert cert.terms == [Term((A[1],), (C[1],), 0)]


def test_certificate_json():
    G, A, C = z4_inversion()
    cert = special_reduce(SpecialElement((C[1], A[1], C[3]), ("C", "A", "C")), G, A, C)
    doc = json.loads(cert.to_json(G))
    assert doc["element"]["type"] == [1, 0, 1]
    assert all(t["i"] + t["h"] == 3 for t in doc["terms"])
    assert isinstance(cert, DecompositionCertificate)


def test_bad_special_element():
    with pytest.raises(ValueError):
        SpecialElement((), ())
    G, A, C = z4_inversion()
    with pytest.raises(ValueError):
        special_reduce(SpecialElement((C[1],), ("A",)), G, A, C)


def test_group_too_large():
    with pytest.raises(GroupTooLarge):
        FiniteGroup.direct(FiniteGroup.cyclic(64), FiniteGroup.cyclic(128))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_certificates_reproduce_input(seed):
    Q, A, C = klein_quotient_split(2)
    R = GroupRing(Q)
    e = random_special(random.Random(seed), A, C, 4)
    cert = special_reduce(e, Q, A, C)
    assert cert.verify(R, C)
    for t in cert.terms:
        assert set(t.a_factors) <= set(A) and set(t.c_factors) <= set(C)


@given(st.lists(st.integers(0, 2**16 - 1), max_size=12), st.lists(st.integers(0, 2**16 - 1), max_size=12))
def test_gf2_space_membership(xs, ys):
    S = GF2Space(16)
    for v in xs:
        S.add(np.array([v >> i & 1 for i in range(16)], dtype=np.uint8))
    assert S.dim == oracles._span_rank(xs)
    for v in xs:
        assert np.array([v >> i & 1 for i in range(16)], dtype=np.uint8) in S
