import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohwork.algebra import (
    AlgebraError,
    FinMod,
    ModHom,
    NotWellDefined,
    Submodule,
    dual_hom,
    evaluation_map,
    hom_parts,
    intersect,
    invariant_factors,
    is_exact_at,
    pontryagin_dual,
)
from cohwork.linalg import smith_normal_form

from oracles import quotient_factors, span
from strategies import finmods, hom_triples, homs

FAST = settings(max_examples=40, deadline=None)


def _det_odd(U, k):
    # invertible mod 2^k iff invertible mod 2
    A = (np.asarray(U) % 2).astype(np.uint8)
    n = A.shape[0]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if A[i, c]), None)
        if piv is None:
            return False
        A[[r, piv]] = A[[piv, r]]
        for i in range(n):
            if i != r and A[i, c]:
                A[i] ^= A[r]
        r += 1
    return True


def _check_snf(A, k):
    D, U, V = smith_normal_form(A, k)
    q = 1 << k
    assert np.array_equal((U @ (np.asarray(A) % q) @ V) % q, D)
    assert _det_odd(U, k) and _det_odd(V, k)
    diag = [int(D[i, i]) or q for i in range(min(D.shape))]
    assert all(d & (d - 1) == 0 for d in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    off = D.copy()
    np.fill_diagonal(off, 0) if D.shape[0] == D.shape[1] else None
    for i in range(D.shape[0]):
        for j in range(D.shape[1]):
            if i != j:
                assert D[i, j] == 0
    return diag


class TestSmith:
    def test_already_diagonal(self):
        assert _check_snf([[2, 0], [0, 4]], 4) == [2, 4]

    def test_row_column_reduction(self):
        assert _check_snf([[2, 4], [6, 8]], 4) == [2, 4]

    def test_zero(self):
        D, _, _ = smith_normal_form(np.zeros((2, 2), dtype=int), 3)
        assert not D.any()

    def test_random_matrices(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            k = int(rng.integers(1, 5))
            m, n = rng.integers(1, 7, size=2)
            A = rng.integers(0, 1 << k, size=(m, n))
            _check_snf(A, k)


def _elements_set(S: Submodule):
    orders = S.ambient.orders
    return span([np.array([g.get(i, 0) for i in range(len(orders))]) for g in S.gens], orders)


def _hom_image_kernel(h: ModHom):
    A, B = h.domain, h.codomain
    img, ker = set(), set()
    for x in A.elements():
        y = tuple(int(v) for v in h(np.array(x)))
        img.add(y)
        if not any(y):
            ker.add(x)
    return ker, img


class TestHomParts:
    def test_times_two_on_z4(self):
        M = FinMod((2,), 4)
        ker, img, cok = hom_parts(ModHom.scalar(M, 2))
        assert ker.module.invariant_factors() == [2]
        assert img.module.invariant_factors() == [2]
        assert cok.invariant_factors() == [2]

    def test_identity_and_zero(self):
        M = FinMod((1, 3), 4)
        N = FinMod((2,), 4)
        ker, img, cok = hom_parts(M.identity())
        assert ker.module.is_zero and img.module.is_isomorphic(M) and cok.is_zero
        ker, img, cok = hom_parts(ModHom.zero(M, N))
        assert ker.module.is_isomorphic(M) and img.module.is_zero and cok.is_isomorphic(N)

    def test_ill_formed_rejected(self):
        with pytest.raises(NotWellDefined):
            ModHom(FinMod((1,), 3), FinMod((3,), 3), [[1]])

    @FAST
    @given(hom_triples())
    def test_sizes_match_enumeration(self, t):
        A, B, h = t
        ker, img = _hom_image_kernel(h)
        K, I, C = hom_parts(h)
        assert K.size * I.size == A.size
        assert K.size == len(ker) and I.size == len(img)
        k = A.k
        assert K.module.invariant_factors() == quotient_factors(ker, {(0,) * A.ngens}, A.orders, k)
        assert I.module.invariant_factors() == quotient_factors(img, {(0,) * B.ngens}, B.orders, k)
        allB = {tuple(x) for x in B.elements()}
        assert C.invariant_factors() == quotient_factors(allB, img, B.orders, k)


class TestInvariantFactors:
    def test_diagonal_presentation(self):
        P = FinMod.from_relations(2, [[2, 0], [0, 4]], 3)
        assert invariant_factors(P.module) == [4, 2]

    def test_redundant_generator(self):
        # e3 = e1 + e2, 2 e1 = 0, 4 e2 = 0
        rel = [[2, 0, 1], [0, 4, 1], [0, 0, -1]]
        P = FinMod.from_relations(3, rel, 4)
        assert invariant_factors(P.module) == [4, 2]

    def test_zero(self):
        assert invariant_factors(FinMod.zero(4)) == []

    @FAST
    @given(st.integers(1, 3), st.data())
    def test_presentation_size(self, k, data):
        n = data.draw(st.integers(1, 3))
        m = data.draw(st.integers(0, 3))
        rel = np.array(data.draw(st.lists(st.integers(0, (1 << k) - 1), min_size=n * m, max_size=n * m)),
                       dtype=np.int64).reshape(n, m)
        P = FinMod.from_relations(n, rel, k)
        orders = [1 << k] * n
        den = span([rel[:, j] for j in range(m)], orders)
        allx = {tuple(x) for x in itertools.product(*(range(o) for o in orders))}
        assert P.module.invariant_factors() == quotient_factors(allx, den, orders, k)
        again = FinMod.from_relations(n, rel, k)
        assert again.module == P.module


class TestExactness:
    def test_extension_middle(self):
        Z2, Z4 = FinMod((1,), 2), FinMod((2,), 2)
        f = ModHom(Z2, Z4, [[2]])
        g = ModHom(Z4, Z2, [[1]])
        assert is_exact_at(f, g)

    def test_zero_then_identity(self):
        Z2 = FinMod((1,), 1)
        assert is_exact_at(ModHom.zero(Z2, Z2), Z2.identity())

    def test_identity_twice(self):
        Z2 = FinMod((1,), 1)
        assert not is_exact_at(Z2.identity(), Z2.identity())

    def test_mismatch(self):
        with pytest.raises(AlgebraError):
            is_exact_at(FinMod((1,), 2).identity(), FinMod((2,), 2).identity())


class TestIntersect:
    def test_cyclic(self):
        M = FinMod((3,), 3)
        S = intersect(Submodule(M, [[2]]), Submodule(M, [[4]]))
        assert S == Submodule(M, [[4]])

    def test_diagonal_and_axis(self):
        M = FinMod((1, 1), 1)
        assert intersect(Submodule(M, [[1, 1]]), Submodule(M, [[1, 0]])).size == 1

    def test_ambient_mismatch(self):
        with pytest.raises(AlgebraError):
            intersect(Submodule(FinMod((1,), 2), []), Submodule(FinMod((2,), 2), []))

    @FAST
    @given(st.data())
    def test_matches_enumeration(self, data):
        k = data.draw(st.integers(1, 2))
        M = data.draw(finmods(k=k, max_gens=3, min_gens=1))
        if M.size > 256:
            M = FinMod(M.exps[:2], k)

        def sub():
            n = data.draw(st.integers(0, 3))
            return Submodule(M, [data.draw(st.lists(st.integers(0, 3), min_size=M.ngens, max_size=M.ngens))
                                 for _ in range(n)])

        S1, S2 = sub(), sub()
        S = intersect(S1, S2)
        expected = _elements_set(S1) & _elements_set(S2)
        assert _elements_set(S) == expected
        assert all(S1.contains(g) and S2.contains(g) for g in S.gens)


class TestDual:
    @pytest.mark.parametrize("j", [1, 2, 3, 4])
    def test_cyclic(self, j):
        assert pontryagin_dual(FinMod((j,), 4)).invariant_factors() == [1 << j]

    def test_sum(self):
        assert pontryagin_dual(FinMod((1, 2), 4)).invariant_factors() == [4, 2]

    def test_evaluation_iso_random(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            k = int(rng.integers(1, 5))
            n = int(rng.integers(0, 4))
            M = FinMod(tuple(int(a) for a in rng.integers(1, k + 1, size=n)), k)
            ev = evaluation_map(M)
            assert ev.is_isomorphism()

    @FAST
    @given(st.data())
    def test_dual_hom_is_precomposition(self, data):
        A, B, h = data.draw(hom_triples())
        hv = dual_hom(h)
        from cohwork.algebra import pairing_value

        for phi in itertools.islice(pontryagin_dual(B).elements(), 16):
            for x in itertools.islice(A.elements(), 16):
                lhs = pairing_value(A, hv(np.array(phi)), x)
                rhs = pairing_value(B, phi, h(np.array(x)))
                assert lhs == rhs

    def test_dual_reverses_short_exact_sequences(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            k = int(rng.integers(1, 4))
            # 0 -> A -> A + C -> C -> 0 twisted by a random automorphism of the middle
            A = FinMod(tuple(int(a) for a in rng.integers(1, k + 1, size=rng.integers(1, 3))), k)
            C = FinMod(tuple(int(a) for a in rng.integers(1, k + 1, size=rng.integers(1, 3))), k)
            Bm = A + C
            i = np.zeros((Bm.ngens, A.ngens), dtype=np.int64)
            i[: A.ngens] = np.eye(A.ngens, dtype=np.int64)
            p = np.zeros((C.ngens, Bm.ngens), dtype=np.int64)
            p[:, A.ngens:] = np.eye(C.ngens, dtype=np.int64)
            f, g = ModHom(A, Bm, i), ModHom(Bm, C, p)
            zA, zC = ModHom.zero(FinMod.zero(k), A), ModHom.zero(C, FinMod.zero(k))
            assert is_exact_at(zA, f) and is_exact_at(f, g) and is_exact_at(g, zC)
            fv, gv = dual_hom(f), dual_hom(g)
            assert is_exact_at(dual_hom(zC), gv)
            assert is_exact_at(gv, fv)
            assert is_exact_at(fv, dual_hom(zA))


@FAST
@given(st.data())
def test_kernel_image_counts(data):
    A, B, h = data.draw(hom_triples())
    assert h.kernel().size * h.image().size == A.size


@FAST
@given(st.data())
def test_composition_is_well_defined(data):
    k = data.draw(st.integers(1, 3))
    A = data.draw(finmods(k=k))
    B = data.draw(finmods(k=k))
    C = data.draw(finmods(k=k))
    f = data.draw(homs(A, B))
    g = data.draw(homs(B, C))
    gf = g @ f
    for x in itertools.islice(A.elements(), 20):
        assert np.array_equal(gf(np.array(x)), g(f(np.array(x))))
