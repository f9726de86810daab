import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from nbraid.combing import (
    LevelError,
    NotInvertible,
    action,
    bordered_tower,
    closed_solver,
    comb,
    equal,
    invert_action,
    invert_automorphism,
    is_trivial,
    is_trivial_bordered,
    is_trivial_closed,
    klein_normal_form,
    lambda_map,
    pi1_is_trivial,
    tau,
)
from nbraid.presentations import GroupSpec, presentation_for, sigma_word
from nbraid.words import B, Word, commutator, p, parse_word, rho, substitute

W = parse_word
P2 = GroupSpec.bordered(2, 1, 2)
P3 = GroupSpec.bordered(2, 1, 3)
C22 = GroupSpec.closed(2, 2)


def test_action_examples():
    assert action((rho(1, 1), 1), B(2, 3), P3) == W("B[2,3]")
    assert action((rho(1, 1), 1), rho(3, 1), P3) == W("r[3,1]^-1 B[1,3]^-1 r[3,1]^2")
    assert action((B(1, 2), 1), B(1, 3), P3) == W("B[2,3]^-1 B[1,3] B[2,3]")


def test_action_level_error():
    with pytest.raises(LevelError):
        action((rho(2, 1), 1), rho(1, 1), P3)


@pytest.mark.parametrize("spec", [P3, GroupSpec.bordered(1, 2, 3), GroupSpec.bordered(3, 1, 3)])
def test_inverse_actions_compose_to_identity(spec):
    tower = bordered_tower(spec)
    assert tower.check_tables() == []
    for c in tower.generators():
        for level in range(c.strand + 1, spec.n + 1):
            inv = invert_action(tower, c, level)
            fwd = {z: tower.action(c, 1, z) for z in inv}
            for z, w in inv.items():
                # the forward action of the inverse image gives back the generator
                assert substitute(w, fwd) == Word.gen(z)


def test_inverse_of_trivial_action():
    tower = bordered_tower(P3)
    assert invert_action(tower, rho(1, 1), 3)[B(2, 3)] == W("B[2,3]")


def test_not_invertible():
    a, b = B(1, 2), rho(2, 1)
    with pytest.raises(NotInvertible):
        invert_automorphism({a: Word.gen(a, 2), b: Word.gen(b)})


def test_comb_examples():
    assert comb(W("B[1,2]"), P2).levels == (W("B[1,2]"), Word())
    form = comb(W("r[1,1] r[2,1] r[1,1]^-1"), P2)
    assert form.levels == (W("r[2,1]^-1 B[1,2]^-1 r[2,1]^2"), Word())
    assert all(comb(r, P2).is_identity() for r in presentation_for(P2).relators)


def test_bordered_triviality():
    assert is_trivial_bordered(Word(), P2)
    assert not is_trivial_bordered(W("r[1,1]"), P2)
    assert is_trivial_bordered(commutator(W("r[1,1]"), W("r[2,1]^-1")) * W("B[1,2]"), P2)


def test_pi1_examples():
    for g in (2, 3, 4, 5):
        assert pi1_is_trivial(Word.product(Word.gen(p(i), 2) for i in range(1, g + 1)), g)
        assert pi1_is_trivial(Word(), g)
    assert not pi1_is_trivial(commutator(W("p[1]"), W("p[2]")), 2)
    # the commutator is b^2 (a = p1, b = p1 p2), as the affine model confirms
    assert klein_normal_form(commutator(W("p[1]"), W("p[2]"))) == (2, 0)
    assert oracles.klein_p_word("p[1]^-1 p[2]^-1 p[1] p[2]") == oracles.klein_affine([("b", 2)])


klein_words = st.lists(st.tuples(st.sampled_from(["p[1]", "p[2]"]), st.sampled_from([1, -1, 2, -2])),
                       max_size=16).map(lambda ts: " ".join(f"{s}^{e}" for s, e in ts))


@given(klein_words)
def test_klein_solver_matches_affine_model(text):
    assert pi1_is_trivial(W(text), 2) == (oracles.klein_p_word(text) == (1, 0, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 5), st.lists(st.integers(0, 30), min_size=1, max_size=6), st.randoms(use_true_random=False))
def test_surface_relator_conjugates_are_trivial(g, cuts, rnd):
    gens = [Word.gen(p(i)) for i in range(1, g + 1)]
    rel = Word.product(Word.gen(p(i), 2) for i in range(1, g + 1))
    w = Word()
    for _ in cuts:
        u = Word.product(rnd.choice(gens) ** rnd.choice((1, -1)) for _ in range(rnd.randint(0, 5)))
        w = w * u * rel ** rnd.choice((1, -1)) * u.inverse()
    assert pi1_is_trivial(w, g)
    # a nonzero mod-2 abelian image is a certificate of nontriviality
    v = w * gens[0]
    assert not pi1_is_trivial(v, g)


def test_closed_examples():
    assert is_trivial_closed(commutator(W("r[1,1]"), W("r[2,1]^-1")) * W("B[1,2]"), C22)
    assert not is_trivial_closed(W("r[1,1]"), C22)
    for g, n in ((2, 2), (3, 2), (3, 3)):
        S = closed_solver(g, n)
        assert S.is_trivial(Word.product(S.sigma[i] ** 2 for i in range(1, g + 1)))


def test_closed_n1_is_surface_group():
    spec = GroupSpec.closed(3, 1)
    assert is_trivial(W("r[1,1]^2 r[1,2]^2 r[1,3]^2"), spec)
    assert not is_trivial(W("r[1,1]"), spec)


def test_tau_examples():
    S = closed_solver(2, 2)
    assert is_trivial_closed(tau(S.sigma[1], C22), C22)
    a = W("r[2,1] B[1,2]^-1 r[2,2]")
    assert equal(tau(a, C22), a, C22)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_tau_product_rule(seed):
    rng = random.Random(seed)
    gens = presentation_for(C22).generators

    def rand():
        return Word([(rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randint(0, 6))])

    S = closed_solver(2, 2)
    b1, b2 = rand(), rand()
    t1, t2 = tau(b1, C22), tau(b2, C22)
    lhs = tau(b1 * b2, C22)
    rhs = commutator(S.sigma_of(lambda_map(b2)), t1.inverse()) * t1 * t2
    assert equal(lhs, rhs, C22)
    assert equal(tau(t1, C22), t1, C22)
    # tau lands in the kernel of lambda
    assert pi1_is_trivial(lambda_map(t1), 2)


def test_printed_g2_section_defect_is_real():
    # forgetting strand 1 sends the printed sigma(p1)^2 sigma(p2)^2 to (p1 p2)^2 in the Klein bottle group
    rel = Word.product(sigma_word(i, 2, 2) ** 2 for i in (1, 2))
    forget = {B(1, 2): Word(), rho(1, 1): Word(), rho(1, 2): Word(),
              rho(2, 1): Word.gen(p(1)), rho(2, 2): Word.gen(p(2))}
    image = substitute(rel, forget)
    assert image == W("p[1] p[2] p[1] p[2]")
    assert oracles.klein_p_word(str(image)) != (1, 0, 0)
    assert not is_trivial_closed(rel, C22)


words_p2 = st.lists(st.tuples(st.sampled_from(presentation_for(P3).generators), st.sampled_from((1, -1))),
                    max_size=14).map(Word)


@settings(max_examples=100, deadline=None)
@given(words_p2, st.integers(0, 100), st.integers(0, 10**6))
def test_comb_normal_form_properties(w, cut, k):
    rels = presentation_for(P3).relators
    r = rels[k % len(rels)]
    cut = cut % (len(w) + 1)
    v = Word(w.letters[:cut] + r.letters + w.letters[cut:])
    form = comb(w, P3)
    assert comb(v, P3).levels == form.levels
    assert comb(form.word(), P3).levels == form.levels
    assert equal(form.word(), w, P3)
    for m, level in zip(range(P3.n, 0, -1), form.levels):
        assert all(s.strand == m for s in level.symbols())
