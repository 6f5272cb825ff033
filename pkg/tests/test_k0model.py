import random

import pytest

from klwb.coxeter import build_weyl
from klwb.charpoints import parse_point
from klwb.k0model import (
    GluingViolation,
    IdentityFailure,
    KModule,
    KTuple,
    PreconditionFailure,
    resolve_m,
)
from klwb.klalgebra import KLAlgebra
from klwb.rings import LaurentPoly, Qv, annihilator_family, p_poly


def lp(d):
    return LaurentPoly(d)


def rand_poly_vec(M, rng, density=0.4):
    return [
        lp({rng.randrange(-2, 3): rng.randrange(-3, 4)})
        if rng.random() < density
        else LaurentPoly.zero()
        for _ in range(M.dim)
    ]


def test_module_shape_and_unit():
    M = KModule.for_type("A1", 6)
    assert M.dim == 24
    assert len(M.kl.algebras) == 7
    assert M.offsets == [0, 2, 6, 10, 14, 18, 22]
    u = M.unit_vector()
    ones = [i for i, x in enumerate(u) if x]
    # one entry per (orbit, point), all sitting at the identity row
    assert len(ones) == 12
    for oi, alg in enumerate(M.kl.algebras):
        for p in range(alg.orbit.size):
            assert u[M.offsets[oi] + alg.flat_index(0, p)] == 1


def test_generator_action_matches_block_product():
    M = KModule.for_type("A2", 2)
    rng = random.Random(20260814)
    for _ in range(10):
        oi = rng.randrange(len(M.kl.algebras))
        alg = M.kl.algebras[oi]
        eid = rng.randrange(M.group.size)
        pidx = rng.randrange(alg.orbit.size)
        s = rng.randrange(M.group.rank)
        vec = M.basis_vector(M.offsets[oi] + alg.flat_index(eid, pidx))
        got = M.apply_generator(s, vec)
        prod = alg.mul(alg.pi_generator(s), alg.basis(eid, pidx))
        for (e, p), c in prod.terms.items():
            e = alg.group.id_of(e)
            assert got[M.offsets[oi] + alg.flat_index(e, alg.orbit.index_of(p))] == c
        assert sum(1 for x in got if x) == len(prod.terms)


def test_word_independence_and_braid_matrix_level():
    rng = random.Random(7)
    M = KModule.for_type("A2", 2)
    vec = [Qv(x) for x in rand_poly_vec(M, rng)]
    assert M.apply_word((0, 1, 0), vec) == M.apply_word((1, 0, 1), vec)
    M = KModule.for_type("B2", 2)
    vec = [Qv(x) for x in rand_poly_vec(M, rng)]
    lhs = M.apply_word((0, 1, 0, 1), vec)
    assert lhs == M.apply_word((1, 0, 1, 0), vec)
    assert lhs == M.apply_element(M.group.longest_id, vec)


def test_fulltwist_matches_double_longest_and_is_central():
    M = KModule.for_type("A2", 2)
    rng = random.Random(5)
    vec = [Qv(x) for x in rand_poly_vec(M, rng)]
    w0 = M.group.words[M.group.longest_id]
    assert M.apply_fulltwist(vec) == M.apply_word(w0 + w0, vec)
    for s in range(M.group.rank):
        assert M.apply_generator(s, M.apply_fulltwist(vec)) == M.apply_fulltwist(
            M.apply_generator(s, vec)
        )


def test_twist_poly_horner():
    M = KModule.for_type("A1", 6)
    rng = random.Random(2)
    vec = [Qv(x) for x in rand_poly_vec(M, rng)]
    fv = M.apply_fulltwist(vec)
    ffv = M.apply_fulltwist(fv)
    bp = annihilator_family(1)  # (x - 1)(x - v^2)
    want = [
        a - b * (lp({0: 1, 2: 1})) + c * lp({2: 1})
        for a, b, c in zip(ffv, fv, vec)
    ]
    assert M.apply_twist_poly(bp, vec) == want


def test_tuple_arithmetic_and_serialization():
    M = KModule.for_type("A1", 2)
    assert M.zero_tuple().is_zero
    t = M.make_free(1, M.basis_vector(0))
    s = t + t - t.scale(2)
    assert s.is_zero
    assert t == M.make_free(1, M.basis_vector(0))
    assert t != t.scale(lp({2: 1}))
    js = t.to_json()
    assert set(js) == {"e", "1"}
    assert js["1"][0] == "1"
    w = M.group.elements[1]
    assert t.get(w) == t.get(1)
    assert set(t.components) == set(M.group.elements)
    with pytest.raises(ValueError):
        KTuple(M, {0: [Qv(1)]})
    with pytest.raises(TypeError):
        KTuple(M, {0: ["x"] * M.dim})


def test_free_tuples_satisfy_gluing():
    rng = random.Random(20260814)
    for typ, den in (("A1", 6), ("A2", 2)):
        M = KModule.for_type(typ, den)
        rep = M.check_gluing(M.make_free(rng.randrange(M.group.size), rand_poly_vec(M, rng)))
        assert len(rep) == M.group.rank * M.group.size
        assert all(r["status"] == "pass" and "witness" in r for r in rep)
        assert M.gluing_ok(M.random_free_combination(rng, 3))


def test_constant_tuple_on_trivial_orbit_passes_over_field():
    M = KModule.for_type("A1", 1)
    rep = M.check_gluing(M.constant_tuple())
    assert [r["status"] for r in rep] == ["pass", "pass"]
    # membership needs the localized scalar 1/(v^2 - 1)
    assert any("-1 + v^2" in r["witness"] for r in rep)


def test_constant_tuple_fails_outside_kernel_blocks():
    M = KModule.for_type("A1", 2)
    c = M.constant_tuple()
    assert not M.gluing_ok(c)
    with pytest.raises(GluingViolation):
        M.polyconj_split(c)


def test_adversarial_perturbation_fails_gluing():
    M = KModule.for_type("A1", 6)
    t = M.make_free(0, M.unit_vector())
    assert M.gluing_ok(t)
    # the generator squares to the identity on the 1/2 block, so the image
    # of its square minus one vanishes there and any perturbation escapes
    oi = M.kl.orbit_index(parse_point("1/2"))
    delta = M.basis_vector(M.offsets[oi])
    t2 = t + M.tuple_from({1: delta})
    rep = M.check_gluing(t2)
    assert any(r["status"] == "fail" for r in rep)
    with pytest.raises(GluingViolation):
        M.polyconj_split(t2)


def test_iota_squares_to_fulltwist():
    rng = random.Random(11)
    M = KModule.for_type("A2", 2)
    t = M.random_free_combination(rng, 2)
    u = M.iota_sq(t)
    for w in range(M.group.size):
        assert list(u.get(w)) == M.apply_fulltwist(t.get(w))
    a = M.random_free_combination(rng, 2)
    assert M.iota(t + a) == M.iota(t) + M.iota(a)


def test_canonical_identity_exhaustive_rank_one():
    M = KModule.for_type("A1", 6)
    for i in range(M.dim):
        rep = M.canonical_identity(M.basis_vector(i))
        assert [r["status"] for r in rep] == ["pass", "pass"]


def test_canonical_identity_random_vectors():
    rng = random.Random(20260814)
    for typ in ("A2", "B2"):
        M = KModule.for_type(typ, 2)
        for _ in range(3):
            rep = M.canonical_identity(rand_poly_vec(M, rng))
            assert len(rep) == M.group.size
            assert all(r["status"] == "pass" for r in rep)


def test_polyconj_split_contracts():
    rng = random.Random(31)
    M = KModule.for_type("A1", 6)
    a = M.random_free_combination(rng, 3)
    a0, a1, cert = M.polyconj_split(a)
    assert cert == {
        "m": 2,
        "p": p_poly(2).render(),
        "sum": "pass",
        "free": "pass",
        "annihilated": "pass",
    }
    assert a0 + a1 == a.scale(p_poly(2))
    # the free part is determined by its identity component
    assert a0 == M.make_free(0, a0.get(0))
    pt = annihilator_family(2, tilde=True)
    for w in range(M.group.size):
        assert not any(M.apply_twist_poly(pt, a1.get(w)))
    assert M.gluing_ok(a1)


def test_polyconj_field_valued_input():
    rng = random.Random(3)
    M = KModule.for_type("A1", 2)
    a = M.random_free_combination(rng, 2).scale(Qv(1, 3))
    a0, a1, cert = M.polyconj_split(a)
    assert cert["sum"] == "pass" and cert["annihilated"] == "pass"
    assert a0 + a1 == a.scale(p_poly(2))


def test_polyconj_paper_range_fails_in_rank_one():
    # the full twist has eigenvalue v^4 already in rank one, outside the
    # length-of-w0 exponent range, so the splitting contract breaks there
    M = KModule.for_type("A1", 6)
    a = M.make_free(0, M.basis_vector(0))
    a0, a1, cert = M.polyconj_split(a, m="safe")
    assert cert["free"] == "pass"
    with pytest.raises(IdentityFailure):
        M.polyconj_split(a, m="paper")


def test_euclid_descent():
    rng = random.Random(31)
    M = KModule.for_type("A1", 6)
    a = M.random_free_combination(rng, 3)
    _, a1, _ = M.polyconj_split(a)
    g, rep = M.euclid_descent(a1, 1)
    assert rep["status"] == "pass" and rep["m"] == 2
    assert g.degree == annihilator_family(2, tilde=True).degree - 1
    g2, rep2 = M.euclid_descent(a1, 2)
    assert rep2["status"] == "pass" and g2.degree == 3
    with pytest.raises(PreconditionFailure):
        M.euclid_descent(a, 1)
    with pytest.raises(ValueError):
        M.euclid_descent(a1, 0)


def test_express_free_tuple():
    M = KModule.for_type("A1", 6)
    res = M.express_in_free_span(M.make_free(0, M.basis_vector(3)))
    assert res == {
        "admissible": True,
        "max_power": 0,
        "m": 2,
        "coefficients": {"e|3": "1"},
    }


def test_express_constant_tuple_needs_localization():
    M = KModule.for_type("A1", 1)
    c = M.constant_tuple()
    res = M.express_in_free_span(c)
    assert res["admissible"] and res["max_power"] == 1
    assert any("1 - v^2" in s for s in res["coefficients"].values())
    for k in (1, 2, 3):
        res = M.express_in_free_span(c.scale(p_poly(2) ** k))
        assert res["admissible"] and res["max_power"] == 0


def test_express_detects_non_membership():
    M = KModule.for_type("A1", 2)
    assert M.express_in_free_span(M.constant_tuple()) is None


def test_express_scaled_combination():
    rng = random.Random(9)
    M = KModule.for_type("A2", 1)
    a = M.random_free_combination(rng, 2)
    mm = resolve_m("safe", M.group)
    for k in (1, 3):
        res = M.express_in_free_span(a.scale(p_poly(mm) ** k))
        assert res is not None and res["admissible"]


def test_resolve_m():
    W = build_weyl("B2")
    assert resolve_m(None, W) == 8
    assert resolve_m("safe", W) == 8
    assert resolve_m("paper", W) == 4
    assert resolve_m(5, W) == 5
    with pytest.raises(ValueError):
        resolve_m(0, W)
    with pytest.raises(ValueError):
        resolve_m("fast", W)


def test_module_from_algebra_shares_group():
    kl = KLAlgebra.for_type("B2", 2)
    M = KModule(kl)
    assert M.group is kl.group
    assert M.dim == sum(a.dim for a in kl.algebras)
