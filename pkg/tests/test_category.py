from itertools import permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from freeacts.acts import (
    ActElement,
    compose_homs,
    coordinatewise,
    enumerate_act_automorphisms,
    enumerate_homs,
    identity_hom,
    right_translation,
    semilinear_from_hom,
)
from freeacts.category import (
    EnumerationStats,
    SemiInnerCertificate,
    TruncatedFunctor,
    build_truncated_skeleton,
    category_generators,
    check_functoriality,
    conjugation_functor,
    enumerate_category_automorphisms,
    evaluate_certificate,
    extract_sigma,
    identity_functor,
    inner_functor,
    is_injection_constant,
    is_inner,
    naturality_failures,
    normalize_injection_constant,
    outer_group_of_category,
    semi_inner_certificate,
    twisted_functor,
)
from freeacts.errors import NotFunctorial, Timeout, TooLarge
from freeacts.monoid import cyclic_group, enumerate_automorphisms, inner_automorphisms, symmetric_group

from conftest import ORDER4_MONOIDS, SMALL_MONOIDS


def c3_inversion():
    return enumerate_automorphisms(cyclic_group(3))[1]


class TestSkeleton:
    def test_sizes(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        assert sk.sizes == {(1, 1): 3, (1, 2): 6, (2, 1): 9, (2, 2): 36}
        assert sk.morphism_count() == 54

    def test_composition_table_matches_acthoms(self, c2):
        sk = build_truncated_skeleton(c2, 3)
        for n, m, k in product(sk.ranks, repeat=3):
            if sk.sizes[(n, m)] * sk.sizes[(m, k)] > 5000:
                continue
            for f in range(sk.sizes[(n, m)]):
                for g in range(sk.sizes[(m, k)]):
                    gf = compose_homs(sk.hom(m, k, g), sk.hom(n, m, f))
                    assert sk.compose_index(n, m, k, g, f) == gf.index()

    def test_structural_indices(self, s3):
        sk = build_truncated_skeleton(s3, 2)
        assert sk.hom(2, 2, sk.identity_index(2)) == identity_hom(s3, 2)
        assert sk.hom(1, 2, sk.injection_index(2, 2)).basis_images == (ActElement(2, 0),)
        assert sk.hom(2, 1, sk.codiagonal_index(2)).basis_images == (ActElement(1, 0), ActElement(1, 0))

    def test_budget(self, s3):
        with pytest.raises(TooLarge):
            build_truncated_skeleton(s3, 3, max_homset=1000)


def brute_force_trivial_n2():
    """All families of hom-set bijections for S = 1, N = 2 that satisfy the functor laws.

    Objects: the swap is impossible since |Hom(F1,F2)| = 2 but |Hom(F2,F1)| = 1.
    """
    from freeacts.monoid import trivial_monoid

    m = trivial_monoid()
    homs = {(a, b): enumerate_homs(m, a, b) for a in (1, 2) for b in (1, 2)}
    keys = list(homs)
    found = 0
    for perms in product(*(permutations(range(len(homs[k]))) for k in keys)):
        phi = dict(zip(keys, perms))

        def F(f):
            k = (f.source_rank, f.target_rank)
            return homs[k][phi[k][homs[k].index(f)]]

        ok = all(F(identity_hom(m, n)) == identity_hom(m, n) for n in (1, 2))
        for a, b, c in product((1, 2), repeat=3):
            for f in homs[(a, b)]:
                for g in homs[(b, c)]:
                    ok = ok and F(compose_homs(g, f)) == compose_homs(F(g), F(f))
        found += ok
    return found


class TestEnumeration:
    def test_trivial_monoid_rank2_brute_force(self, trivial):
        assert brute_force_trivial_n2() == 2
        autos = enumerate_category_automorphisms(build_truncated_skeleton(trivial, 2))
        assert len(autos) == 2
        # the non-identity one is conjugation by the swap of F_2
        swap = enumerate_act_automorphisms(trivial, 2)[1]
        assert inner_functor(autos[0].skeleton, [identity_hom(trivial, 1), swap]) in autos

    @pytest.mark.parametrize("m", SMALL_MONOIDS + ORDER4_MONOIDS, ids=lambda m: m.name)
    def test_rank1_equals_monoid_automorphisms(self, m):
        sk = build_truncated_skeleton(m, 1)
        q = m.order
        comp = [[compose_homs(right_translation(m, t), right_translation(m, s)).index() for s in range(q)] for t in range(q)]
        brute = sum(
            p[0] == 0 and all(p[comp[t][s]] == comp[p[t]][p[s]] for s in range(q) for t in range(q))
            for p in permutations(range(q))
        )
        autos = enumerate_category_automorphisms(sk, max_monoid_order=4)
        assert len(autos) == brute == len(enumerate_automorphisms(m))

    @pytest.mark.parametrize("m", SMALL_MONOIDS, ids=lambda m: m.name)
    def test_equals_all_semilinear_conjugations(self, m):
        sk = build_truncated_skeleton(m, 2)
        autos = enumerate_category_automorphisms(sk)
        expected = set()
        for sigma in enumerate_automorphisms(m):
            for h1 in enumerate_act_automorphisms(m, 1):
                for h2 in enumerate_act_automorphisms(m, 2):
                    comps = [semilinear_from_hom(sigma, h1).mapping, semilinear_from_hom(sigma, h2).mapping]
                    expected.add(conjugation_functor(sk, comps).key())
        assert {phi.key() for phi in autos} == expected
        assert all(phi.is_stable() for phi in autos)

    @pytest.mark.parametrize("name,m,count", [("C2", cyclic_group(2), 8), ("C3", cyclic_group(3), 36)])
    def test_known_counts(self, name, m, count):
        stats = EnumerationStats()
        autos = enumerate_category_automorphisms(build_truncated_skeleton(m, 2), stats=stats)
        assert len(autos) == count
        assert stats.object_maps_tried == 2 and stats.object_maps_rejected_by_cardinality == 1

    def test_pin_objects_same_result(self, c2):
        sk = build_truncated_skeleton(c2, 2)
        assert enumerate_category_automorphisms(sk, pin_objects=True) == enumerate_category_automorphisms(sk)

    def test_group_closure(self, c2):
        sk = build_truncated_skeleton(c2, 2)
        autos = set(enumerate_category_automorphisms(sk))
        assert identity_functor(sk) in autos
        for a in autos:
            assert a.inverse() in autos
            assert a.compose(a.inverse()) == identity_functor(sk)

    def test_generators_span(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        gens = category_generators(sk)
        assert gens[0][0] == (1, 1)
        assert len(gens) < sk.morphism_count()

    def test_monoid_order_cap(self):
        with pytest.raises(TooLarge):
            enumerate_category_automorphisms(build_truncated_skeleton(symmetric_group(3), 1))

    def test_timeout_reports_partial(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        with pytest.raises(Timeout) as exc:
            enumerate_category_automorphisms(sk, timeout=1e-9)
        assert exc.value.partial is not None


class TestTwisted:
    def test_c3_inversion_on_translation(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        phi = twisted_functor(c3_inversion(), sk)
        assert phi.apply(right_translation(c3, 1)) == right_translation(c3, 2)

    @pytest.mark.parametrize("m", [cyclic_group(3), symmetric_group(3)], ids=["C3", "S3"])
    def test_pointwise_definition(self, m):
        sk = build_truncated_skeleton(m, 2)
        for sigma in enumerate_automorphisms(m):
            phi = twisted_functor(sigma, sk)
            assert not check_functoriality(phi)
            inv = sigma.inverse()
            for n, k in sk.keys:
                for f in enumerate_homs(m, n, k):
                    g = phi.apply(f)
                    for c in range(1, n + 1):
                        for t in range(m.order):
                            x = ActElement(c, t)
                            y = f(ActElement(c, inv(t)))
                            assert g(x) == ActElement(y.copy, sigma(y.elem))

    @pytest.mark.parametrize("m", SMALL_MONOIDS, ids=lambda m: m.name)
    def test_extract_sigma_round_trip(self, m):
        sk = build_truncated_skeleton(m, 2)
        for sigma in enumerate_automorphisms(m):
            phi = twisted_functor(sigma, sk)
            assert extract_sigma(phi).image == sigma.image
            assert is_injection_constant(phi)

    def test_extract_sigma_noncommutative(self, s3):
        sk = build_truncated_skeleton(s3, 1)
        for sigma in enumerate_automorphisms(s3):
            assert extract_sigma(twisted_functor(sigma, sk)) == sigma


class TestFunctoriality:
    def test_mutation_detected(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        phi = twisted_functor(c3_inversion(), sk)
        assert check_functoriality(phi) == []
        maps = {k: v.copy() for k, v in phi.hom_maps.items()}
        maps[(2, 2)][[5, 6]] = maps[(2, 2)][[6, 5]]
        bad = check_functoriality(TruncatedFunctor(sk, phi.object_map, maps))
        assert bad and all(v.kind in ("composition", "identity") for v in bad)
        maps[(2, 2)][5] = maps[(2, 2)][7]
        assert check_functoriality(TruncatedFunctor(sk, phi.object_map, maps))[0].kind == "bijection"

    def test_conjugation_by_non_semilinear_fails(self, zero):
        # swapping e and 0 in F_1 turns the constant map onto 0 into the constant map onto e
        sk = build_truncated_skeleton(zero, 1)
        with pytest.raises(NotFunctorial):
            conjugation_functor(sk, [(1, 0)])

    def test_json_round_trip(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        phi = twisted_functor(c3_inversion(), sk)
        assert TruncatedFunctor.from_dict(phi.to_dict(), sk) == phi


class TestNormalization:
    def test_inner_times_twisted_normalizes_to_twisted(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        sigma = c3_inversion()
        etas = [enumerate_act_automorphisms(c3, 1)[1], enumerate_act_automorphisms(c3, 2)[11]]
        phi = inner_functor(sk, etas).compose(twisted_functor(sigma, sk))
        norm = normalize_injection_constant(phi)
        assert norm.phi0 == twisted_functor(sigma, sk)
        assert is_injection_constant(norm.phi0)
        assert naturality_failures(norm.phi0, phi, norm.witness) == 0

    def test_trivial_monoid_normalizes_to_identity(self, trivial):
        sk = build_truncated_skeleton(trivial, 2)
        for phi in enumerate_category_automorphisms(sk):
            assert normalize_injection_constant(phi).phi0 == identity_functor(sk)

    def test_naturality_counts_failures(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        ident = identity_functor(sk)
        comps = [identity_hom(c3, 1), enumerate_act_automorphisms(c3, 2)[1]]
        assert naturality_failures(ident, ident, comps) > 0


class TestCertificates:
    @pytest.mark.parametrize("use_recipe", [True, False])
    def test_c3_all(self, c3, use_recipe):
        sk = build_truncated_skeleton(c3, 2)
        for phi in enumerate_category_automorphisms(sk)[::5]:
            cert = semi_inner_certificate(phi, use_recipe=use_recipe)
            assert cert is not None
            assert cert.method == ("recipe" if use_recipe else "search")
            assert evaluate_certificate(phi, cert) == []

    def test_wrong_certificate_rejected(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        phi = twisted_functor(c3_inversion(), sk)
        ident = enumerate_automorphisms(c3)[0]
        bogus = SemiInnerCertificate(ident, [coordinatewise(ident, n) for n in sk.ranks])
        assert evaluate_certificate(phi, bogus)
        mixed = SemiInnerCertificate(c3_inversion(), [coordinatewise(ident, 1), coordinatewise(c3_inversion(), 2)])
        assert evaluate_certificate(phi, mixed)

    def test_certificate_json(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        cert = semi_inner_certificate(twisted_functor(c3_inversion(), sk))
        again = SemiInnerCertificate.from_dict(cert.to_dict(), c3)
        assert again == cert

    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from(SMALL_MONOIDS), st.data())
    def test_random_semilinear_conjugations_certified(self, m, data):
        sk = build_truncated_skeleton(m, 2)
        sigma = data.draw(st.sampled_from(enumerate_automorphisms(m)))
        hs = [data.draw(st.sampled_from(enumerate_act_automorphisms(m, n))) for n in sk.ranks]
        comps = [semilinear_from_hom(sigma, h) for h in hs]
        phi = conjugation_functor(sk, [c.mapping for c in comps])
        assert not check_functoriality(phi)
        cert = semi_inner_certificate(phi)
        assert cert is not None and evaluate_certificate(phi, cert) == []
        assert evaluate_certificate(phi, SemiInnerCertificate(sigma, comps)) == []


class TestInner:
    def test_twisted_inversion_not_inner(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        assert is_inner(twisted_functor(c3_inversion(), sk)) is None

    def test_inner_functor_is_inner(self, c3):
        sk = build_truncated_skeleton(c3, 2)
        etas = [enumerate_act_automorphisms(c3, 1)[2], enumerate_act_automorphisms(c3, 2)[7]]
        phi = inner_functor(sk, etas)
        found = is_inner(phi)
        assert found is not None
        assert naturality_failures(identity_functor(sk), phi, found) == 0

    def test_s3_twists_all_inner(self, s3):
        sk = build_truncated_skeleton(s3, 2)
        inner = {a.image for a in inner_automorphisms(s3)}
        for sigma in enumerate_automorphisms(s3):
            assert (is_inner(twisted_functor(sigma, sk)) is not None) == (sigma.image in inner)


class TestOuter:
    @pytest.mark.parametrize(
        "m,order", [(cyclic_group(1), 1), (cyclic_group(2), 1), (cyclic_group(3), 2)], ids=["trivial", "C2", "C3"]
    )
    def test_orders(self, m, order):
        cog = outer_group_of_category(build_truncated_skeleton(m, 2))
        assert cog.order == order == cog.monoid_outer.order
        assert cog.is_isomorphism
        assert sorted(cog.witness) == list(range(order))
        d = cog.to_dict()
        assert d["order"] == order and d["is_isomorphism"]

    def test_class_sizes_equal(self, c3):
        cog = outer_group_of_category(build_truncated_skeleton(c3, 2))
        assert [len(c) for c in cog.classes] == [18, 18]
