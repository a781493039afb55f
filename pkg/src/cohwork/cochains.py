"""Inhomogeneous cochain complexes of finite groups.

A normalized ``n``-cochain is a function on ``n``-tuples of non-identity
elements.  Coordinates are ordered by tuple (big-endian in the position of
each element in ``G.nonidentity``) with the module coordinate innermost.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .algebra import AlgebraError, FinMod, ModHom
from .complexes import ChainMap, Complex, ComplexError
from .gmodules import GModule, Induced, induced_module
from .groups import FinGroup, Subgroup
from .linalg import Vector

DEFAULT_DEGREE = 4


class CochainError(AlgebraError):
    pass


def _tuples(m: int, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((m,) * n).reshape(n, -1).T
    return grids.astype(np.int64)


def _index(T: np.ndarray, m: int) -> np.ndarray:
    idx = np.zeros(T.shape[0], dtype=np.int64)
    for t in range(T.shape[1]):
        idx = idx * m + T[:, t]
    return idx


class CochainComplex(Complex):
    """``C^n(G, M)`` for ``0 <= n <= D``; cohomology is trusted up to ``D - 1``."""

    def __init__(self, G: FinGroup, M: GModule, D: int = DEFAULT_DEGREE, *, normalized: bool = True):
        if D < 0:
            raise CochainError("max degree must be nonnegative")
        if M.G.order != G.order:
            raise CochainError("module is over a different group")
        self.G = G
        self.M = M
        self.D = D
        self.normalized = normalized
        self.cells = list(G.nonidentity) if normalized else list(range(G.order))
        m = len(self.cells)
        r = M.base.ngens
        self.m = m
        mods = {}
        for n in range(D + 1):
            if m ** n and r:
                mods[n] = FinMod(M.base.exps * (m ** n), M.k)
        diffs = {}
        for n in range(D):
            if n in mods and n + 1 in mods:
                diffs[n] = self._differential(n, mods[n], mods[n + 1])
        super().__init__(mods, diffs, M.k, window=(None, D - 1), check=False, name=f"C({G.name})")

    def ntuples(self, n: int) -> int:
        return self.m ** n

    def tuple_index(self, elems: Sequence[int]) -> int | None:
        """Position of a tuple of group elements, or None if it is degenerate."""
        pos = {g: i for i, g in enumerate(self.cells)}
        idx = 0
        for g in elems:
            if g not in pos:
                return None
            idx = idx * self.m + pos[g]
        return idx

    def tuples(self, n: int) -> list[tuple[int, ...]]:
        return [tuple(self.cells[i] for i in t) for t in itertools.product(range(self.m), repeat=n)]

    def value(self, vec: Vector, elems: Sequence[int]) -> list[int]:
        """``f(g_1, ..., g_n)`` as a coordinate list in ``M``."""
        r = self.M.base.ngens
        idx = self.tuple_index(elems)
        if idx is None:
            return [0] * r
        return [vec.get(idx * r + a, 0) for a in range(r)]

    def cochain(self, n: int, func) -> Vector:
        """Cochain from a Python function on tuples of group elements."""
        r = self.M.base.ngens
        out: Vector = {}
        for t, elems in enumerate(self.tuples(n)):
            val = self.M.base.reduce(func(elems))
            for a in range(r):
                if val[a]:
                    out[t * r + a] = int(val[a])
        return out

    def _differential(self, n: int, src: FinMod, tgt: FinMod) -> ModHom:
        G, M = self.G, self.M
        m, r = self.m, M.base.ngens
        cells = np.asarray(self.cells, dtype=np.int64)
        pos = np.full(G.order, -1, dtype=np.int64)
        pos[cells] = np.arange(m)
        T = _tuples(m, n + 1)
        tidx = _index(T, m)
        E = cells[T]
        rows, cols, vals = [], [], []
        # g_1 f(g_2, ..., g_{n+1})
        sidx = _index(T[:, 1:], m)
        for p in range(m):
            sel = T[:, 0] == p
            A = M.matrix(int(cells[p]))
            a, b = np.nonzero(A)
            if not len(a) or not sel.any():
                continue
            tr, sr = tidx[sel], sidx[sel]
            rows.append((tr[:, None] * r + a[None, :]).ravel())
            cols.append((sr[:, None] * r + b[None, :]).ravel())
            vals.append(np.broadcast_to(A[a, b][None, :], (len(tr), len(a))).ravel())
        ar = np.arange(r)

        def ident(tr, sr, sign):
            rows.append((tr[:, None] * r + ar[None, :]).ravel())
            cols.append((sr[:, None] * r + ar[None, :]).ravel())
            vals.append(np.full(len(tr) * r, sign, dtype=np.int64))

        # sum (-1)^i f(..., g_i g_{i+1}, ...)
        for i in range(1, n + 1):
            prod = G.table[E[:, i - 1], E[:, i]]
            ppos = pos[prod]
            keep = ppos >= 0
            S = np.concatenate([T[keep, : i - 1], ppos[keep, None], T[keep, i + 1 :]], axis=1)
            ident(tidx[keep], _index(S, m), -1 if i % 2 else 1)
        # (-1)^(n+1) f(g_1, ..., g_n)
        ident(tidx, _index(T[:, :n], m), -1 if (n + 1) % 2 else 1)
        mat = sp.csr_array(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(tgt.ngens, src.ngens)
        )
        return ModHom(src, tgt, mat, check=False)


def normalized_cochain_complex(G: FinGroup, M: GModule, D: int = DEFAULT_DEGREE) -> CochainComplex:
    return CochainComplex(G, M, D)


def bar_cochain_complex(G: FinGroup, M: GModule, D: int = DEFAULT_DEGREE) -> CochainComplex:
    """Unnormalized cochains on all ``|G|^n`` tuples (for cross-checks on tiny cases)."""
    return CochainComplex(G, M, D, normalized=False)


def group_cohomology(G: FinGroup, M: GModule, n: int, D: int | None = None) -> FinMod:
    D = max(DEFAULT_DEGREE, n + 1) if D is None else D
    if not 0 <= n <= D - 1:
        raise CochainError(f"degree {n} outside the computable window 0..{D - 1}")
    if n < 0:
        return FinMod.zero(M.k)
    return normalized_cochain_complex(G, M, D).cohomology(n)


def _selection(rows: np.ndarray, cols: np.ndarray, shape) -> sp.csr_array:
    return sp.csr_array((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=shape)


def restriction_chain_map(CG: CochainComplex, CH: CochainComplex, H: Subgroup) -> ChainMap:
    """``f -> f restricted to tuples from H``."""
    if H.ambient.order != CG.G.order or CH.G.order != H.order:
        raise CochainError("subgroup does not match the complexes")
    r = CG.M.base.ngens
    gpos = {g: i for i, g in enumerate(CG.cells)}
    hcells = np.asarray([gpos[H.elements[h]] for h in CH.cells], dtype=np.int64)
    maps = {}
    for n in range(min(CG.D, CH.D) + 1):
        if n not in CG._mods or n not in CH._mods:
            continue
        T = _tuples(CH.m, n)
        sidx = _index(hcells[T], CG.m)
        tidx = _index(T, CH.m)
        ar = np.arange(r)
        mat = _selection((tidx[:, None] * r + ar).ravel(), (sidx[:, None] * r + ar).ravel(), (CH.module(n).ngens, CG.module(n).ngens))
        maps[n] = ModHom(CG.module(n), CH.module(n), mat, check=False)
    return ChainMap(CG, CH, maps, check=False, name="res")


def restriction(G: FinGroup, H: Subgroup, M: GModule, D: int = DEFAULT_DEGREE) -> ChainMap:
    CG = normalized_cochain_complex(G, M, D)
    CH = normalized_cochain_complex(H.group, M.restrict(H), D)
    return restriction_chain_map(CG, CH, H)


def shapiro_chain_map(CInd: CochainComplex, CH: CochainComplex, ind: Induced) -> ChainMap:
    """``C(G, Ind_H^G M) -> C(H, M)``: restrict to ``H`` and evaluate at the identity."""
    H = ind.H
    R = CInd.M.base.ngens
    r = CH.M.base.ngens
    gpos = {g: i for i, g in enumerate(CInd.cells)}
    hcells = np.asarray([gpos[H.elements[h]] for h in CH.cells], dtype=np.int64)
    maps = {}
    for n in range(min(CInd.D, CH.D) + 1):
        if n not in CInd._mods or n not in CH._mods:
            continue
        T = _tuples(CH.m, n)
        sidx = _index(hcells[T], CInd.m)
        tidx = _index(T, CH.m)
        ar = np.arange(r)
        mat = _selection((tidx[:, None] * r + ar).ravel(), (sidx[:, None] * R + ar).ravel(), (CH.module(n).ngens, CInd.module(n).ngens))
        maps[n] = ModHom(CInd.module(n), CH.module(n), mat, check=False)
    return ChainMap(CInd, CH, maps, check=False, name="Sh")


@dataclass
class ShapiroData:
    induced: Induced
    CInd: CochainComplex
    CH: CochainComplex
    sh: ChainMap


def shapiro(G: FinGroup, H: Subgroup, M: GModule, D: int = DEFAULT_DEGREE) -> ShapiroData:
    """Shapiro comparison for an ``H``-module ``M``."""
    ind = induced_module(G, H, M)
    CInd = normalized_cochain_complex(G, ind.module, D)
    CH = normalized_cochain_complex(H.group, M, D)
    return ShapiroData(ind, CInd, CH, shapiro_chain_map(CInd, CH, ind))


def cochain_map_of_hom(C1: CochainComplex, C2: CochainComplex, phi: ModHom, *, check_equivariant: bool = True) -> ChainMap:
    """Apply an equivariant module map pointwise to cochains."""
    if C1.G is not C2.G and C1.G.order != C2.G.order:
        raise CochainError("complexes over different groups")
    if check_equivariant and not C1.M.is_equivariant(C2.M, phi):
        raise CochainError("module map is not equivariant")
    maps = {}
    for n in range(min(C1.D, C2.D) + 1):
        if n in C1._mods and n in C2._mods:
            mat = sp.kron(sp.identity(C1.ntuples(n), dtype=np.int64, format="csr"), phi.matrix, format="csr")
            maps[n] = ModHom(C1.module(n), C2.module(n), mat, check=False)
    return ChainMap(C1, C2, maps, check=False)


class Pairing:
    """Equivariant bilinear map ``M x N -> P`` given on generators.

    ``table[a, b]`` is the coordinate vector of ``pair(e_a, f_b)`` in ``P``.
    """

    def __init__(self, M: GModule, N: GModule, P: GModule, table, *, check: bool = True):
        self.M, self.N, self.P = M, N, P
        self.table = np.asarray(table, dtype=np.int64).reshape(M.base.ngens, N.base.ngens, P.base.ngens)
        if check:
            self._check()

    def __call__(self, x: Sequence[int], y: Sequence[int]) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return self.P.base.reduce(np.einsum("a,b,abc->c", x, y, self.table))

    def _check(self):
        Mb, Nb = self.M.base, self.N.base
        for a, ea in enumerate(Mb.exps):
            for b, eb in enumerate(Nb.exps):
                x = np.zeros(Mb.ngens, dtype=np.int64)
                y = np.zeros(Nb.ngens, dtype=np.int64)
                x[a], y[b] = 1 << ea, 1
                x2 = np.zeros(Mb.ngens, dtype=np.int64)
                y2 = np.zeros(Nb.ngens, dtype=np.int64)
                x2[a], y2[b] = 1, 1 << eb
                if self(x, y).any() or self(x2, y2).any():
                    raise CochainError("pairing is not well defined on the presentations")
        G = self.M.G
        for g in range(G.order):
            A, B, C = self.M.matrix(g), self.N.matrix(g), self.P.matrix(g)
            for a in range(Mb.ngens):
                for b in range(Nb.ngens):
                    lhs = self(A[:, a], B[:, b])
                    rhs = self.P.base.reduce(C @ self.table[a, b])
                    if (lhs != rhs).any():
                        raise CochainError(f"pairing is not equivariant at {G.names[g]}")


def cup_product(CM: CochainComplex, f: Vector, p: int, CN: CochainComplex, g: Vector, q: int, pairing: Pairing, CP: CochainComplex) -> Vector:
    """``(f u g)(g_1..g_{p+q}) = pair(f(g_1..g_p), (g_1...g_p) g(g_{p+1}..g_{p+q}))``."""
    for C, x, n in ((CM, f, p), (CN, g, q)):
        if C.cohomology_group(n).classify(x) is None:
            raise CochainError(f"degree-{n} input is not a cocycle")
    G = CM.G
    rP = CP.M.base.ngens
    out: Vector = {}
    for t, elems in enumerate(CP.tuples(p + q)):
        left = CM.value(f, elems[:p])
        if not any(left):
            continue
        right = CN.value(g, elems[p:])
        if not any(right):
            continue
        s = G.prod(elems[:p])
        right = CN.M.base.reduce(CN.M.matrix(s) @ np.asarray(right, dtype=np.int64))
        val = pairing(left, right)
        for c in range(rP):
            if val[c]:
                out[t * rP + c] = int(val[c])
    return out
