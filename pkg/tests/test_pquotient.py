import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from nbraid.padp import klein_sequence, semidirect_zz
from nbraid.pquotient import ResourceLimit, h1_mod_p, p_quotient, p_quotients
from nbraid.presentations import GroupSpec, free_presentation, presentation_for, surface_presentation
from nbraid.words import B, Word, commutator

FROZEN = oracles.frozen()


def orders(pres, p, c):
    return [q.order for q in p_quotients(pres, p, c)]


def all_elements(q):
    return [list(v) for v in itertools.product(range(q.p), repeat=q.rank)]


def test_oracle_values_reproduce():
    assert oracles.cyclic(16).quotient_orders(2, 3) == FROZEN["z_orders"]
    assert oracles.zz_semidirect(16, -1).quotient_orders(2, 3) == FROZEN["klein_orders"]


def test_z_orders():
    assert orders(free_presentation(1), 2, 3) == FROZEN["z_orders"] == [2, 4, 8]
    assert orders(free_presentation(1), 3, 3) == FROZEN["z_orders_p3"]
    q, _ = p_quotient(free_presentation(1), 2, 3)
    x = q.generators[0]
    # the generator has order 8
    assert [any(q.image(Word.gen(x, k))) for k in range(1, 9)] == [True] * 7 + [False]


def test_free_rank2_class2():
    q, rep = p_quotient(free_presentation(2), 2, 2)
    assert q.order == FROZEN["free2_class2_order"] == 32
    assert rep.ranks == [2, 3]
    elems = all_elements(q)
    # exhaustive associativity of the collected table
    table = {}
    for u in elems:
        for v in elems:
            table[tuple(u), tuple(v)] = tuple(q.multiply(u, v))
    for u, v, w in itertools.product(elems, repeat=3):
        assert table[table[tuple(u), tuple(v)], tuple(w)] == table[tuple(u), table[tuple(v), tuple(w)]]
    # the images generate, and the brute-force series in the finite group has the right shape
    G = oracles.Brute([tuple(v) for v in q.images.values()], lambda a, b: table[a, b], tuple(q.identity()))
    assert len(G.elements) == 32
    assert G.quotient_orders(2, 3) == [4, 32, 32]


@pytest.mark.parametrize("d,c", [(1, 4), (2, 3), (3, 2), (4, 2)])
def test_free_layer_ranks(d, c):
    _, rep = p_quotient(free_presentation(d), 2, c, limit=2**40)
    assert rep.ranks == FROZEN["free_layer_ranks"][str(d)][:c]


def test_klein_orders():
    kl = klein_sequence().B
    assert orders(kl, 2, 3) == FROZEN["klein_orders"][:3]
    assert orders(kl, 2, 2) == [4, 16]
    assert orders(kl, 3, 3) == FROZEN["klein_orders_p3"]
    assert orders(semidirect_zz(1).B, 2, 3) == FROZEN["zxz_orders"]


def test_h1_dims():
    for g, d in FROZEN["h1_surface"].items():
        assert h1_mod_p(surface_presentation(int(g)), 2).dimension == d
    assert h1_mod_p(free_presentation(3), 2).dimension == 3
    h = h1_mod_p(presentation_for(GroupSpec.closed(2, 2)), 2)
    assert h.dimension == FROZEN["h1_p2n2"] == 4
    assert B(1, 2) not in h.basis and not any(h.project(Word.gen(B(1, 2))))


def test_b12_image_class1():
    q, _ = p_quotient(presentation_for(GroupSpec.closed(2, 2)), 2, 1)
    assert q.is_identity(Word.gen(B(1, 2)))


@pytest.mark.parametrize("spec,cls", [(GroupSpec.closed(2, 2), 3), (GroupSpec.bordered(2, 1, 2), 2),
                                       (GroupSpec.surface(3), 3)])
def test_quotient_contracts(spec, cls):
    pres = presentation_for(spec)
    qs = p_quotients(pres, 2, cls)
    h = h1_mod_p(pres, 2)
    assert qs[0].order == 2 ** h.dimension
    for c, q in enumerate(qs, start=1):
        assert all(q.is_identity(r) for r in pres.relators)
        # orders multiply along the layers
        assert q.order == qs[0].order * 2 ** sum(len(q.layer(k)) for k in range(2, c + 1))
        # projection to the previous class agrees with the direct computation
        if c > 1:
            prev = qs[c - 2]
            for g in pres.generators:
                assert q.truncate(q.images[g], c - 1) == prev.images[g]
        # the last layer is central of exponent p
        top = q.layer(c)
        for i in top:
            e = q.identity()
            e[i] = 1
            assert not any(q.multiply(e, e))
            for j in range(q.rank):
                f = q.identity()
                f[j] = 1
                assert q.multiply(e, f) == q.multiply(f, e)
        # [P_m, P_n] lands in weight >= m + n
        for i, j in itertools.combinations(range(q.rank), 2):
            wi, wj = q.weights[i], q.weights[j]
            if wi + wj <= c:
                a, b = q.identity(), q.identity()
                a[i], b[j] = 1, 1
                comm = q.multiply(q.multiply(q.inverse(a), q.inverse(b)), q.multiply(a, b))
                assert q.weight_of(comm) >= wi + wj


def test_determinism():
    pres = presentation_for(GroupSpec.closed(2, 2))
    a, _ = p_quotient(pres, 2, 2)
    b, _ = p_quotient(pres, 2, 2)
    assert a.to_dict() == b.to_dict()


def test_resource_limit():
    with pytest.raises(ResourceLimit) as info:
        p_quotient(free_presentation(3), 2, 4, limit=1000)
    assert info.value.completed_class >= 1


def test_bad_prime():
    with pytest.raises(ValueError):
        p_quotient(free_presentation(1), 4, 2)


gens22 = presentation_for(GroupSpec.closed(2, 2)).generators
words22 = st.lists(st.tuples(st.sampled_from(gens22), st.sampled_from((1, -1))), max_size=12).map(Word)


@settings(max_examples=80, deadline=None)
@given(words22, words22)
def test_image_is_multiplicative(u, v):
    q, _ = p_quotient(presentation_for(GroupSpec.closed(2, 2)), 2, 2)
    assert q.image(u * v) == q.multiply(q.image(u), q.image(v))
    assert q.image(u.inverse()) == q.inverse(q.image(u))
    assert q.weight_of(q.image(commutator(u, v))) >= 2


def test_preimage_words():
    q, _ = p_quotient(free_presentation(2), 2, 2)
    for i, w in enumerate(q.preimages):
        e = q.identity()
        e[i] = 1
        assert q.image(w) == e
