import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohwork.algebra import FinMod
from cohwork.cochains import (
    CochainError,
    Pairing,
    bar_cochain_complex,
    cup_product,
    group_cohomology,
    normalized_cochain_complex,
    restriction,
    shapiro,
)
from cohwork.complexes import is_quasi_iso
from cohwork.gmodules import Character, GModule
from cohwork.groups import catalog_group
from cohwork.random_gen import all_characters, random_gmodule

from oracles import brute_group_cohomology

FAST = settings(max_examples=20, deadline=None)
seeds = st.integers(0, 2**32 - 1)


def _sign_module(G, a, k):
    """``Z/2^a`` twisted by some character taking the value -1, or trivial if none exists."""
    minus = (1 << k) - 1
    signs = [c for c in all_characters(G, k) if minus in c.values]
    chi = signs[0] if signs else Character.trivial(G, k)
    return GModule.from_character(G, FinMod((a,), k), chi, 1)


def _acts(M):
    return [M.matrix(g) for g in range(M.G.order)]


class TestComplex:
    def test_trivial_group(self):
        G = catalog_group("C1")
        C = normalized_cochain_complex(G, GModule.trivial(G, FinMod((2,), 2)), 3)
        assert C.module(0).ngens == 1
        assert all(C.module(n).is_zero for n in range(1, 4))

    def test_c2_differentials(self):
        G = catalog_group("C2")
        M = _sign_module(G, 2, 2)  # sigma = -1 on Z/4
        C = normalized_cochain_complex(G, M, 4)
        assert [C.module(n).ngens for n in range(5)] == [1] * 5
        # sigma - 1 = -2 and 1 + sigma = 0 alternate
        assert [int(C.d(n).dense()[0, 0]) % 4 for n in range(4)] == [2, 0, 2, 0]

    def test_klein_ranks(self):
        G = catalog_group("C2xC2")
        C = normalized_cochain_complex(G, GModule.trivial(G, FinMod((1,), 1)), 2)
        assert [C.module(n).ngens for n in range(3)] == [1, 3, 9]


class TestGroupCohomology:
    def test_c2_trivial_z2(self):
        G = catalog_group("C2")
        M = GModule.trivial(G, FinMod((1,), 4))
        for n in range(3):
            assert group_cohomology(G, M, n).invariant_factors() == [2]
            assert brute_group_cohomology(G, _acts(M), [2], n, 4) == [2]

    def test_c2_sign_z4_invariants(self):
        G = catalog_group("C2")
        assert group_cohomology(G, _sign_module(G, 2, 2), 0).invariant_factors() == [2]

    def test_trivial_group(self):
        G = catalog_group("C1")
        M = GModule.trivial(G, FinMod((2, 1), 2))
        assert group_cohomology(G, M, 0) == M.base
        assert group_cohomology(G, M, 1).is_zero

    def test_window(self):
        G = catalog_group("C2")
        M = GModule.trivial(G, FinMod((1,), 1))
        with pytest.raises(CochainError):
            group_cohomology(G, M, 3, D=3)

    @pytest.mark.parametrize(
        "name,maxdeg",
        [("C2", 2), ("C3", 2), ("C4", 1), ("C2xC2", 1), ("S3", 1)],
    )
    def test_against_cocycle_enumeration(self, name, maxdeg):
        G = catalog_group(name)
        rng = random.Random(name)
        mods = [GModule.trivial(G, FinMod((1,), 2)), _sign_module(G, 2, 2)]
        if G.order <= 3:
            mods.append(random_gmodule(rng, G, 2, max_rank=1))
        for M in mods:
            if M.base.size ** (G.order ** maxdeg) > 70000:
                continue
            for n in range(maxdeg + 1):
                got = group_cohomology(G, M, n).invariant_factors()
                assert got == brute_group_cohomology(G, _acts(M), M.base.orders, n, M.k), (name, n)

    @FAST
    @given(st.sampled_from(["C2", "C4", "C2xC2", "S3", "Q8"]), seeds)
    def test_h0_is_invariants(self, name, seed):
        G = catalog_group(name)
        M = random_gmodule(random.Random(seed), G, 3)
        assert group_cohomology(G, M, 0).invariant_factors() == M.invariants.module.invariant_factors()

    @pytest.mark.parametrize("a", [1, 2])
    def test_bar_matches_normalized(self, a):
        G = catalog_group("C2")
        for M in (GModule.trivial(G, FinMod((1,), 2)), _sign_module(G, a, 2)):
            N = normalized_cochain_complex(G, M, 3)
            B = bar_cochain_complex(G, M, 3)
            for n in range(3):
                assert N.cohomology(n) == B.cohomology(n)


class TestRestriction:
    def test_whole_group(self):
        G = catalog_group("C4")
        M = _sign_module(G, 2, 3)
        r = restriction(G, G.whole(), M, 3)
        for n in range(4):
            assert r[n] == r.source.module(n).identity()

    def test_trivial_subgroup(self):
        G = catalog_group("C4")
        M = _sign_module(G, 2, 3)
        r = restriction(G, G.trivial_subgroup(), M, 3)
        assert r[0] == M.base.identity()
        assert all(r.target.module(n).is_zero for n in range(1, 4))

    def test_c4_to_c2_is_chain_map(self):
        G = catalog_group("C4")
        H = next(H for H in G.subgroups if H.order == 2)
        M = random_gmodule(random.Random(0), G, 3)
        r = restriction(G, H, M, 4)
        assert r.first_noncommuting_degree() is None

    @FAST
    @given(st.sampled_from(["C2", "C4", "C2xC2", "S3"]), seeds)
    def test_degree_zero_on_invariants(self, name, seed):
        G = catalog_group(name)
        M = random_gmodule(random.Random(seed), G, 2)
        for H in G.subgroups:
            r = restriction(G, H, M, 2)
            for g in M.invariants.gens:
                assert r[0].apply(g) == g


class TestShapiro:
    def test_c2_trivial_subgroup(self):
        G = catalog_group("C2")
        H = G.trivial_subgroup()
        S = shapiro(G, H, GModule.trivial(H.group, FinMod((1,), 1)), 3)
        assert S.CInd.cohomology(0).invariant_factors() == [2]
        assert S.CInd.cohomology(1).is_zero
        assert is_quasi_iso(S.sh)

    def test_whole_group(self):
        G = catalog_group("S3")
        M = GModule.trivial(G, FinMod((2,), 2))
        S = shapiro(G, G.whole(), M, 3)
        assert all(S.sh[n] == S.sh.source.module(n).identity() for n in range(4))

    @pytest.mark.parametrize("name", ["C2", "C4", "C2xC2"])
    def test_cone_acyclic(self, name):
        G = catalog_group(name)
        for H in G.subgroups:
            S = shapiro(G, H, _sign_module(H.group, 2, 2) if H.order > 1 else GModule.trivial(H.group, FinMod((2,), 2)), 4)
            assert S.sh.first_noncommuting_degree() is None
            assert is_quasi_iso(S.sh)


def _z2_pairing(G, k=1):
    M = GModule.trivial(G, FinMod((1,), k))
    return M, Pairing(M, M, M, [[[1]]])


class TestCup:
    def test_degree_zero(self):
        G = catalog_group("C2")
        M, P = _z2_pairing(G)
        C = normalized_cochain_complex(G, M, 2)
        assert cup_product(C, {0: 1}, 0, C, {0: 1}, 0, P, C) == {0: 1}

    def test_h1_squared_generates_h2(self):
        G = catalog_group("C2")
        M, P = _z2_pairing(G)
        C = normalized_cochain_complex(G, M, 3)
        f = C.cohomology_group(1).representative(0)
        prod = cup_product(C, f, 1, C, f, 1, P, C)
        cls = C.cohomology_group(2).classify(prod)
        assert cls == [1]

    def test_non_cocycle_rejected(self):
        G = catalog_group("C2")
        M = _sign_module(G, 2, 2)
        P = Pairing(M, GModule.trivial(G, FinMod((2,), 2)), M, [[[1]]])
        C = normalized_cochain_complex(G, M, 2)
        T = normalized_cochain_complex(G, P.N, 2)
        with pytest.raises(CochainError):
            cup_product(C, {0: 1}, 0, T, {0: 1}, 0, P, C)

    @FAST
    @given(st.sampled_from(["C2", "C4", "C2xC2"]), st.integers(0, 2), st.integers(0, 1), seeds)
    def test_cocycle_and_bilinear(self, name, p, q, seed):
        rng = random.Random(seed)
        G = catalog_group(name)
        k = 2
        M = random_gmodule(rng, G, k, max_rank=1) if G.order == 2 else GModule.trivial(G, FinMod((rng.randint(1, 2),), k))
        N = GModule.trivial(G, FinMod((2,), k))
        # M x Z/4 -> M, (m, c) -> c m
        P = Pairing(M, N, M, np.eye(M.base.ngens, dtype=np.int64).reshape(M.base.ngens, 1, M.base.ngens))
        D = p + q + 1
        CM, CN = normalized_cochain_complex(G, M, D), normalized_cochain_complex(G, N, D)
        HM, HN = CM.cohomology_group(p), CN.cohomology_group(q)
        HP = CM.cohomology_group(p + q)

        def rand(H):
            return H.lift([rng.randrange(o) for o in H.module.orders])

        f1, f2, g = rand(HM), rand(HM), rand(HN)
        out = cup_product(CM, f1, p, CN, g, q, P, CM)
        assert HP.classify(out) is not None
        s = {i: f1.get(i, 0) + f2.get(i, 0) for i in set(f1) | set(f2)}
        s = {i: x % CM.module(p).orders[i] for i, x in s.items() if x % CM.module(p).orders[i]}
        lhs = HP.classify(cup_product(CM, s, p, CN, g, q, P, CM))
        a = HP.classify(out)
        b = HP.classify(cup_product(CM, f2, p, CN, g, q, P, CM))
        assert lhs == [(x + y) % o for x, y, o in zip(a, b, HP.module.orders)]
