import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohwork.algebra import FinMod, evaluation_map
from cohwork.gmodules import (
    Character,
    GModule,
    GModuleError,
    induced_module,
    induction_unit,
    kummer_dual,
    twist,
)
from cohwork.groups import CATALOG_NAMES, catalog_group
from cohwork.random_gen import random_character, random_gmodule

FAST = settings(max_examples=30, deadline=None)
seeds = st.integers(0, 2**32 - 1)
names = st.sampled_from([n for n in CATALOG_NAMES if catalog_group(n).order <= 6])


def _sign(G, k):
    return Character.from_generators(G, {G.generators[0]: -1}, k)


def test_character_must_be_multiplicative():
    with pytest.raises(GModuleError):
        Character(catalog_group("C3"), [1, 3, 1], 3)
    with pytest.raises(GModuleError):
        Character(catalog_group("C2"), [1, 2], 3)


def test_action_relations_checked():
    C2 = catalog_group("C2")
    M = FinMod((2,), 2)
    with pytest.raises(GModuleError):
        GModule.from_generators(C2, M, {1: np.array([[2]])})


class TestTwist:
    def test_zero_twist(self):
        C2 = catalog_group("C2")
        M = GModule.trivial(C2, FinMod((3,), 3))
        assert twist(M, _sign(C2, 3), 0) is M

    def test_sign_twist(self):
        C2 = catalog_group("C2")
        M = twist(GModule.trivial(C2, FinMod((3,), 3)), _sign(C2, 3), 1)
        assert int(M.matrix(1)[0, 0]) == 7

    @FAST
    @given(names, seeds, st.integers(-3, 3), st.integers(-3, 3))
    def test_additive(self, name, seed, i, j):
        rng = random.Random(seed)
        G = catalog_group(name)
        k = rng.randint(1, 4)
        M = random_gmodule(rng, G, k)
        chi = random_character(rng, G, k)
        assert twist(twist(M, chi, i), chi, j).same_action(twist(M, chi, i + j))


class TestKummer:
    @pytest.mark.parametrize("i", [-2, -1, 0, 1, 2, 3])
    def test_twisted_cyclic(self, i):
        G = catalog_group("C2")
        k = 4
        chi = _sign(G, k)
        D = kummer_dual(GModule.from_character(G, FinMod((k,), k), chi, i), chi)
        assert D.same_action(GModule.from_character(G, FinMod((k,), k), chi, 1 - i))

    def test_trivial(self):
        G = catalog_group("C2xC2")
        M = GModule.trivial(G, FinMod((1, 2), 3))
        D = kummer_dual(M, Character.trivial(G, 3))
        assert D.is_trivial_action()

    @FAST
    @given(names, seeds)
    def test_double_dual(self, name, seed):
        rng = random.Random(seed)
        G = catalog_group(name)
        k = rng.randint(1, 4)
        M = random_gmodule(rng, G, k)
        chi = random_character(rng, G, k)
        DD = kummer_dual(kummer_dual(M, chi), chi)
        ev = evaluation_map(M.base)
        assert ev.is_isomorphism()
        assert M.is_equivariant(DD, ev)

    @FAST
    @given(names, seeds, st.integers(-2, 2))
    def test_dual_of_twist(self, name, seed, i):
        rng = random.Random(seed)
        G = catalog_group(name)
        k = rng.randint(1, 4)
        M = random_gmodule(rng, G, k)
        chi = random_character(rng, G, k)
        assert kummer_dual(twist(M, chi, i), chi).same_action(twist(kummer_dual(M, chi), chi, -i))


class TestInduced:
    def test_whole_group(self):
        G = catalog_group("C4")
        M = GModule.trivial(G, FinMod((2,), 2))
        ind, unit = induction_unit(M, G.whole())
        assert unit.is_isomorphism()

    def test_c2_from_trivial(self):
        G = catalog_group("C2")
        M = GModule.trivial(G.trivial_subgroup().group, FinMod((1,), 1))
        ind = induced_module(G, G.trivial_subgroup(), M)
        assert ind.module.base.invariant_factors() == [2, 2]
        assert np.array_equal(ind.module.matrix(1) % 2, [[0, 1], [1, 0]])
        _, unit = induction_unit(GModule.trivial(G, FinMod((1,), 1)), G.trivial_subgroup())
        assert np.array_equal(unit.dense() % 2, [[1], [1]])

    @pytest.mark.parametrize("name", [n for n in CATALOG_NAMES if catalog_group(n).order <= 8])
    def test_size_and_unit(self, name):
        G = catalog_group(name)
        rng = random.Random(len(name))
        M = random_gmodule(rng, G, 3)
        for H in G.subgroups:
            ind, unit = induction_unit(M, H)
            assert ind.module.base.size == M.base.size ** H.index
            assert unit.is_injective()
            assert M.is_equivariant(ind.module, unit)
            # the action really is a G-action (checked here, skipped at construction)
            GModule(G, ind.module.base, ind.module.action)

    def test_module_over_wrong_group(self):
        G = catalog_group("C4")
        with pytest.raises(GModuleError):
            induced_module(G, G.trivial_subgroup(), GModule.trivial(G, FinMod((1,), 2)))


@FAST
@given(names, seeds)
def test_invariants_by_enumeration(name, seed):
    rng = random.Random(seed)
    G = catalog_group(name)
    M = random_gmodule(rng, G, 2)
    if M.base.size > 64:
        return
    mats = [M.matrix(g) for g in range(G.order)]
    orders = np.asarray(M.base.orders)
    fixed = [x for x in M.base.elements() if all(not ((A @ np.array(x) - np.array(x)) % orders).any() for A in mats)]
    assert M.invariants.size == len(fixed)
    assert all(M.invariants.contains(list(x)) for x in fixed)
