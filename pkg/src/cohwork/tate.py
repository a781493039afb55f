"""Archimedean places: complete 2-periodic complexes and Tate duality.

An archimedean place is modeled by a subgroup of order 2 (real) or 1
(complex).  Its complete complex has ``M`` in every degree of ``[-D, D]``
with differentials ``sigma - 1`` (even degrees) and the norm ``N`` (odd
degrees).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraError, FinMod, ModHom
from .cochains import DEFAULT_DEGREE, CochainComplex, normalized_cochain_complex
from .complexes import ChainMap, Complex
from .gmodules import Character, GModule, kummer_dual
from .groups import FinGroup, Subgroup
from .linalg import Elimination
from .report import Verification


class PlaceError(AlgebraError):
    pass


@dataclass
class ArchPlace:
    kind: str  # "real" or "complex"
    subgroup: Subgroup
    label: str = ""

    def __post_init__(self):
        if self.kind == "real":
            if self.subgroup.order != 2:
                raise PlaceError(f"real place {self.label!r} needs a subgroup of order 2")
        elif self.kind == "complex":
            if self.subgroup.order != 1:
                raise PlaceError(f"complex place {self.label!r} needs the trivial subgroup")
        else:
            raise PlaceError(f"archimedean place kind must be real or complex, got {self.kind!r}")

    @classmethod
    def real(cls, G: FinGroup, sigma: int, label: str = "") -> "ArchPlace":
        if sigma == G.identity or G.mul(sigma, sigma) != G.identity:
            raise PlaceError(f"element {G.names[sigma]} is not an involution")
        return cls("real", G.subgroup([G.identity, sigma]), label)

    @classmethod
    def complex(cls, G: FinGroup, label: str = "") -> "ArchPlace":
        return cls("complex", G.trivial_subgroup(), label)

    @property
    def sigma(self) -> int | None:
        """Ambient index of the involution (None for complex places)."""
        return self.subgroup.elements[1] if self.kind == "real" else None

    @property
    def group(self) -> FinGroup:
        return self.subgroup.group


def _local_sigma(Mv: GModule) -> ModHom:
    return Mv.action[1] if Mv.G.order == 2 else Mv.base.identity()


class CompleteComplex(Complex):
    def __init__(self, Mv: GModule, D: int = DEFAULT_DEGREE):
        if Mv.G.order not in (1, 2):
            raise PlaceError("complete complexes are only built for groups of order 1 or 2")
        if D < 2:
            raise PlaceError("complete complexes need D >= 2")
        self.Mv = Mv
        self.D = D
        base = Mv.base
        sigma = _local_sigma(Mv)
        ident = base.identity()
        self.sigma_minus_one = sigma - ident
        self.norm = Mv.norm()
        mods = {n: base for n in range(-D, D + 1)}
        diffs = {n: (self.sigma_minus_one if n % 2 == 0 else self.norm) for n in range(-D, D)}
        super().__init__(mods, diffs, base.k, window=(-D + 1, D - 1), check=True, name="Chat")


def complete_complex(place: ArchPlace, M: GModule, D: int = DEFAULT_DEGREE) -> CompleteComplex:
    """Complete complex of ``M`` restricted to the place's subgroup."""
    if M.G.order != place.subgroup.ambient.order:
        raise PlaceError("module and place belong to different groups")
    return CompleteComplex(M.restrict(place.subgroup), D)


def tate_cohomology(place: ArchPlace, M: GModule, n: int, D: int = DEFAULT_DEGREE) -> FinMod:
    if abs(n) > D - 1:
        raise PlaceError(f"Tate degree {n} outside the window [-{D - 1}, {D - 1}]")
    return complete_complex(place, M, D).cohomology(n)


def tau_map(place: ArchPlace, M: GModule, D: int = DEFAULT_DEGREE) -> ChainMap:
    Mv = M.restrict(place.subgroup)
    return tau_chain_map(normalized_cochain_complex(place.group, Mv, D), CompleteComplex(Mv, D))


def tau_chain_map(Cv: CochainComplex, X: CompleteComplex) -> ChainMap:
    """Evaluation of a normalized cochain at ``(sigma, ..., sigma)``.

    For order 2 the normalized complex has exactly that one tuple per degree,
    so every component is the identity of ``M``; for a complex place only
    degree 0 survives.
    """
    if Cv.G.order != X.Mv.G.order:
        raise PlaceError("cochain complex and complete complex use different groups")
    maps = {}
    for n in range(0, min(Cv.D, X.D) + 1):
        if n in Cv._mods:
            maps[n] = Cv.module(n).identity()
    return ChainMap(Cv, X, maps, check=True, name="tau")


def tate_cup(X: CompleteComplex, Y: CompleteComplex, P: CompleteComplex, pairing, p: int, q: int, a, b) -> np.ndarray:
    """Cup product of degree-``p`` and degree-``q`` cochains into degree ``p + q``.

    ``a . b`` unless both degrees are odd, then ``a . sigma b``.
    """
    b = np.asarray(b, dtype=np.int64)
    if p % 2 and q % 2:
        b = Y.Mv.base.reduce(_local_sigma(Y.Mv).dense() @ b)
    return pairing(a, b)


class EvaluationPairing:
    """``M x Hom(M, Z/2^k(chi)) -> Z/2^k(chi)``, ``(m, phi) -> phi(m)``."""

    def __init__(self, M: FinMod):
        self.M = M
        self.k = M.k

    def __call__(self, m, phi) -> np.ndarray:
        k = self.k
        total = sum(int(x) * int(y) << (k - a) for x, y, a in zip(m, phi, self.M.exps))
        return np.array([total % (1 << k)], dtype=np.int64)


def mu_module(G: FinGroup, chi: Character) -> GModule:
    return GModule.from_character(G, FinMod.cyclic(chi.k, chi.k), chi, 1)


def _f2_rank(mat: np.ndarray) -> int:
    if mat.size == 0:
        return 0
    return Elimination.of(np.asarray(mat, dtype=np.int64) % 2, 1).rank


def sign_character(H: FinGroup, k: int) -> Character:
    """Character of a group of order 2 sending the involution to -1."""
    return Character(H, [1] + [-1] * (H.order - 1), k)


def arch_duality_check(
    place: ArchPlace, M: GModule, n: int, chi: Character | None = None, D: int = DEFAULT_DEGREE
) -> Verification:
    """Tate cup pairing ``H^n(M) x H^(2-n)(M*) -> H^2(Z/2^k(1)) = Z/2`` is perfect.

    ``chi`` defaults to the sign at the place, the only value a cyclotomic
    character can take on complex conjugation; other values are rejected.
    """
    if place.kind != "real":
        raise PlaceError("the duality pairing is only meaningful at real places")
    H = place.subgroup
    Mv = M.restrict(H)
    chiv = sign_character(H.group, M.k) if chi is None else chi.restrict(H)
    if chiv(1) != (-1) % (1 << M.k):
        raise PlaceError("the cyclotomic character must send the involution to -1")
    Mstar = kummer_dual(Mv, chiv)
    X = CompleteComplex(Mv, D)
    Y = CompleteComplex(Mstar, D)
    P = CompleteComplex(mu_module(H.group, chiv), D)
    pairing = EvaluationPairing(Mv.base)
    HX, HY, HP = X.cohomology_group(n), Y.cohomology_group(2 - n), P.cohomology_group(2)
    rep = Verification(f"arch duality n={n}")
    rep.add("target is Z/2", HP.module.invariant_factors() == [2], target=HP.module.invariant_factors())
    mat = np.zeros((HX.module.ngens, HY.module.ngens), dtype=np.int64)
    for i in range(HX.module.ngens):
        a = HX.representative(i)
        av = [a.get(t, 0) for t in range(Mv.base.ngens)]
        for j in range(HY.module.ngens):
            b = HY.representative(j)
            bv = [b.get(t, 0) for t in range(Mstar.base.ngens)]
            c = tate_cup(X, Y, P, pairing, n, 2 - n, av, bv)
            cls = HP.classify({0: int(c[0])} if c[0] else {})
            if cls is None:
                rep.add("cup of cocycles is a cocycle", False, i=i, j=j)
                return rep
            mat[i, j] = cls[0] if cls else 0
    sizes_ok = HX.module.invariant_factors() == HY.module.invariant_factors()
    two_torsion = all(o == 2 for o in HX.module.orders)
    rank = _f2_rank(mat)
    perfect = sizes_ok and two_torsion and rank == HX.module.ngens == HY.module.ngens
    rep.add(
        "pairing is perfect",
        perfect,
        left=HX.module.invariant_factors(),
        right=HY.module.invariant_factors(),
        matrix=mat.tolist(),
    )
    rep.pairing_matrix = mat  # type: ignore[attr-defined]
    return rep
