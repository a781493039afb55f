import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohwork.algebra import FinMod
from cohwork.cochains import normalized_cochain_complex
from cohwork.gmodules import Character, GModule
from cohwork.groups import catalog_group
from cohwork.random_gen import random_gmodule, random_real_module
from cohwork.tate import (
    ArchPlace,
    CompleteComplex,
    PlaceError,
    arch_duality_check,
    complete_complex,
    sign_character,
    tate_cohomology,
    tate_cup,
    tau_map,
)

from oracles import brute_arch_pairing_perfect, brute_tate

FAST = settings(max_examples=25, deadline=None)
seeds = st.integers(0, 2**32 - 1)
C2 = catalog_group("C2")
REAL = ArchPlace.real(C2, 1, "r")


def _twisted(a, k, i=1):
    return GModule.from_character(C2, FinMod((a,), k), sign_character(C2, k), i)


def _brute(M, n):
    return brute_tate(M.matrix(1), M.base.orders, M.k, n)


class TestCompleteComplex:
    def test_complex_place_acyclic(self):
        G = catalog_group("C4")
        M = random_gmodule(random.Random(0), G, 3)
        X = complete_complex(ArchPlace.complex(G), M)
        assert X.is_acyclic()
        assert X.d(0).is_zero() and X.d(1) == M.base.identity() * 1
        for n in range(-3, 4):
            assert tate_cohomology(ArchPlace.complex(G), M, n).is_zero

    def test_real_trivial(self):
        k = 3
        X = complete_complex(REAL, GModule.trivial(C2, FinMod((k,), k)))
        assert [int(X.d(n).dense()[0, 0]) if not X.d(n).is_zero() else 0 for n in range(-2, 2)] == [0, 2, 0, 2]

    def test_real_sign(self):
        k = 3
        X = complete_complex(REAL, _twisted(k, k))
        assert [int(X.d(n).dense()[0, 0]) if not X.d(n).is_zero() else 0 for n in range(-2, 2)] == [6, 0, 6, 0]

    def test_incompatible_groups(self):
        with pytest.raises(PlaceError):
            complete_complex(REAL, GModule.trivial(catalog_group("C4"), FinMod((1,), 1)))

    def test_place_validation(self):
        with pytest.raises(PlaceError):
            ArchPlace.real(C2, 0)
        G = catalog_group("C4")
        with pytest.raises(PlaceError):
            ArchPlace.real(G, 1)
        with pytest.raises(PlaceError):
            ArchPlace("real", G.trivial_subgroup())


class TestTateCohomology:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_trivial_cyclic(self, k):
        M = GModule.trivial(C2, FinMod((k,), k))
        for n in range(-3, 4):
            assert tate_cohomology(REAL, M, n).invariant_factors() == [2]
        assert _brute(M, 0) == [2] and _brute(M, 1) == [2]

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_sign_cyclic(self, k):
        M = _twisted(k, k)
        assert tate_cohomology(REAL, M, 0).invariant_factors() == [2]
        assert tate_cohomology(REAL, M, 1).invariant_factors() == [2]
        P = CompleteComplex(M.restrict(REAL.subgroup))
        assert P.cohomology(2).invariant_factors() == [2]

    def test_window(self):
        with pytest.raises(PlaceError):
            tate_cohomology(REAL, GModule.trivial(C2, FinMod((1,), 1)), 4, D=4)

    @FAST
    @given(seeds)
    def test_matches_enumeration_and_periodic(self, seed):
        M = random_real_module(random.Random(seed), random.Random(seed).randint(1, 3), max_rank=2)
        X = complete_complex(REAL, M)
        for n in range(-3, 4):
            assert X.cohomology(n).invariant_factors() == _brute(M, n)
        for n in range(-3, 2):
            assert X.cohomology(n) == X.cohomology(n + 2)
        # finite modules have Herbrand quotient 1
        h0, h1 = X.cohomology(0).size, X.cohomology(1).size
        assert h0 == h1 and M.base.size % h0 == 0

    def test_catalog_groups(self):
        rng = random.Random(1)
        from cohwork.groups import catalog

        for G in catalog():
            M = random_gmodule(rng, G, 2)
            assert all(complete_complex(ArchPlace.complex(G), M).cohomology(n).is_zero for n in range(-3, 4))
            for s in G.involutions:
                place = ArchPlace.real(G, s)
                X = complete_complex(place, M)
                h0, h1 = X.cohomology(0).size, X.cohomology(1).size
                assert h0 == h1 and M.base.size % h0 == 0


class TestTau:
    def test_complex_place(self):
        G = catalog_group("C2xC2")
        M = random_gmodule(random.Random(2), G, 2)
        t = tau_map(ArchPlace.complex(G), M)
        assert t[0] == M.base.identity()
        assert all(t.source.module(n).is_zero for n in range(1, 5))

    def test_sign_z4_degree_one(self):
        M = _twisted(2, 2)
        t = tau_map(REAL, M)
        f = t.induced(1)
        assert f.domain.invariant_factors() == [2] and f.is_isomorphism()

    @FAST
    @given(seeds)
    def test_iso_positive_degrees_surjective_at_zero(self, seed):
        rng = random.Random(seed)
        M = random_real_module(rng, rng.randint(1, 4))
        t = tau_map(REAL, M)
        assert t.first_noncommuting_degree() is None
        assert t.induced(0).is_surjective()
        for n in range(1, 4):
            assert t.induced(n).is_isomorphism()

    def test_catalog_chain_maps(self):
        from cohwork.groups import catalog

        rng = random.Random(3)
        for G in catalog():
            M = random_gmodule(rng, G, 2)
            for s in G.involutions:
                assert tau_map(ArchPlace.real(G, s), M).first_noncommuting_degree() is None


class TestDuality:
    def test_trivial_z2_degree_zero(self):
        rep = arch_duality_check(REAL, GModule.trivial(C2, FinMod((1,), 1)), 0)
        assert rep.ok and rep.pairing_matrix.tolist() == [[1]]

    def test_sign_z4_degree_one(self):
        M = _twisted(2, 2)
        assert arch_duality_check(REAL, M, 1).ok
        assert brute_arch_pairing_perfect(M.matrix(1), M.base.orders, 2, 1)

    def test_rejects_nonsign_character(self):
        M = GModule.trivial(C2, FinMod((2,), 2))
        with pytest.raises(PlaceError):
            arch_duality_check(REAL, M, 1, chi=Character.trivial(C2, 2))

    def test_rejects_complex_place(self):
        with pytest.raises(PlaceError):
            arch_duality_check(ArchPlace.complex(C2), GModule.trivial(C2, FinMod((1,), 1)), 0)

    @FAST
    @given(seeds, st.sampled_from([0, 1, 2]))
    def test_perfect_random(self, seed, n):
        rng = random.Random(seed)
        k = rng.randint(1, 4)
        M = random_real_module(rng, k, max_rank=2)
        assert arch_duality_check(REAL, M, n).ok
        if M.base.size <= 64:
            assert brute_arch_pairing_perfect(M.matrix(1), M.base.orders, k, n)

    def test_swap_module(self):
        ind = GModule.from_generators(C2, FinMod((2, 2), 2), {1: np.array([[0, 1], [1, 0]])})
        for n in (0, 1, 2):
            assert arch_duality_check(REAL, ind, n).ok


class TestCup:
    @FAST
    @given(seeds, st.integers(-2, 2), st.integers(-2, 2))
    def test_cocycle_and_bilinear(self, seed, p, q):
        rng = random.Random(seed)
        k = rng.randint(1, 3)
        M = random_real_module(rng, k, max_rank=2).restrict(REAL.subgroup)
        T = GModule.trivial(M.G, FinMod((k,), k))
        X, Y, P = CompleteComplex(M), CompleteComplex(T), CompleteComplex(M)

        def act(m, c):
            return M.base.reduce(np.asarray(m, dtype=np.int64) * int(c[0]))

        HX, HY, HP = X.cohomology_group(p), Y.cohomology_group(q), P.cohomology_group(p + q)

        def rand(H, r):
            v = H.lift([rng.randrange(o) for o in H.module.orders])
            return np.array([v.get(i, 0) for i in range(r)], dtype=np.int64)

        a1, a2 = rand(HX, M.base.ngens), rand(HX, M.base.ngens)
        b = rand(HY, 1)

        def cls(v):
            return HP.classify({i: int(x) for i, x in enumerate(v) if x})

        c1 = cls(tate_cup(X, Y, P, act, p, q, a1, b))
        c2 = cls(tate_cup(X, Y, P, act, p, q, a2, b))
        c12 = cls(tate_cup(X, Y, P, act, p, q, M.base.reduce(a1 + a2), b))
        assert c1 is not None and c2 is not None
        assert c12 == [(x + y) % o for x, y, o in zip(c1, c2, HP.module.orders)]
