"""Finite modules with a group action, characters, twists and induction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .algebra import (
    AlgebraError,
    FinMod,
    ModHom,
    Submodule,
    block_hom,
    direct_sum,
    dual_hom,
    pontryagin_dual,
)
from .groups import FinGroup, Subgroup


class GModuleError(AlgebraError):
    pass


class Character:
    """Homomorphism ``G -> (Z/2^k)^x``, stored as one odd residue per element."""

    def __init__(self, G: FinGroup, values: Sequence[int], k: int, *, check: bool = True):
        self.G = G
        self.k = k
        mod = 1 << k
        self.values = [int(v) % mod for v in values]
        if len(self.values) != G.order:
            raise GModuleError("character needs one value per group element")
        if check:
            for g, x in enumerate(self.values):
                if x % 2 == 0:
                    raise GModuleError(f"character value at {G.names[g]} is not a unit")
            for a in range(G.order):
                for b in range(G.order):
                    if self.values[G.mul(a, b)] != (self.values[a] * self.values[b]) % mod:
                        raise GModuleError(
                            f"character is not multiplicative at ({G.names[a]}, {G.names[b]})"
                        )

    @classmethod
    def trivial(cls, G: FinGroup, k: int) -> "Character":
        return cls(G, [1] * G.order, k, check=False)

    @classmethod
    def from_generators(cls, G: FinGroup, images: Mapping[int, int], k: int) -> "Character":
        """Extend generator images along words; raises if the relations fail."""
        mod = 1 << k
        vals = [1] * G.order
        for g, word in G.words().items():
            x = 1
            for s in word:
                x = x * images[s] % mod
            vals[g] = x
        return cls(G, vals, k)

    def __call__(self, g: int) -> int:
        return self.values[g]

    def power(self, g: int, i: int) -> int:
        return pow(self.values[g], i, 1 << self.k) if i >= 0 else pow(pow(self.values[g], -1, 1 << self.k), -i, 1 << self.k)

    def restrict(self, H: Subgroup) -> "Character":
        return Character(H.group, [self.values[g] for g in H.elements], self.k, check=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, Character) and self.k == other.k and self.values == other.values

    __hash__ = None

    def __repr__(self) -> str:
        return "Character(" + ", ".join(f"{n}->{v}" for n, v in zip(self.G.names, self.values)) + ")"


class GModule:
    """``base`` with a left action ``g -> action[g]`` of ``G``."""

    def __init__(self, G: FinGroup, base: FinMod, action: Sequence[ModHom], *, check: bool = True, name: str = ""):
        self.G = G
        self.base = base
        self.action = list(action)
        self.name = name
        if len(self.action) != G.order:
            raise GModuleError("action needs one matrix per group element")
        for g, A in enumerate(self.action):
            if A.domain != base or A.codomain != base:
                raise GModuleError(f"action matrix of {G.names[g]} has the wrong shape")
        if check:
            self._check()

    def _check(self):
        G = self.G
        if not self.action[G.identity] == self.base.identity():
            raise GModuleError("identity does not act trivially")
        for a in range(G.order):
            for b in range(G.order):
                if not self.action[G.mul(a, b)] == self.action[a] @ self.action[b]:
                    raise GModuleError(f"action is not multiplicative at ({G.names[a]}, {G.names[b]})")

    @classmethod
    def trivial(cls, G: FinGroup, base: FinMod) -> "GModule":
        ident = base.identity()
        return cls(G, base, [ident] * G.order, check=False)

    @classmethod
    def from_generators(cls, G: FinGroup, base: FinMod, images: Mapping[int, ModHom | np.ndarray], **kw) -> "GModule":
        """Action determined by generator images; the group relations are checked."""
        mats = {}
        for s, A in images.items():
            mats[s] = A if isinstance(A, ModHom) else ModHom(base, base, A)
        action: list[ModHom | None] = [None] * G.order
        for g, word in G.words().items():
            A = base.identity()
            for s in word:
                A = A @ mats[s]
            action[g] = A
        return cls(G, base, action, **kw)  # type: ignore[arg-type]

    @classmethod
    def from_character(cls, G: FinGroup, base: FinMod, chi: Character, i: int = 1) -> "GModule":
        """``base`` with ``g`` acting by ``chi(g)^i``."""
        return twist(cls.trivial(G, base), chi, i)

    @property
    def k(self) -> int:
        return self.base.k

    def act(self, g: int) -> ModHom:
        return self.action[g]

    def matrix(self, g: int) -> np.ndarray:
        return self.action[g].dense()

    def restrict(self, H: Subgroup) -> "GModule":
        if H.ambient is not self.G and H.ambient.table.shape != self.G.table.shape:
            raise GModuleError("subgroup of a different group")
        return GModule(H.group, self.base, [self.action[g] for g in H.elements], check=False)

    @cached_property
    def invariants(self) -> Submodule:
        """``M^G`` as the kernel of ``m -> (g m - m)_g`` over the generators."""
        gens = self.G.generators
        if not gens:
            return Submodule(self.base, [{j: 1} for j in range(self.base.ngens)])
        ident = self.base.identity()
        rows = [self.base] * len(gens)
        h = block_hom(rows, [self.base], {(t, 0): self.action[g] - ident for t, g in enumerate(gens)}, self.k)
        return h.kernel()

    def norm(self, H: Subgroup | None = None) -> ModHom:
        """``sum_{h in H} h`` (all of ``G`` by default)."""
        els = range(self.G.order) if H is None else H.elements
        out = ModHom.zero(self.base, self.base)
        for g in els:
            out = out + self.action[g]
        return out

    def is_trivial_action(self) -> bool:
        ident = self.base.identity()
        return all(A == ident for A in self.action)

    def is_equivariant(self, other: "GModule", f: ModHom) -> bool:
        return all(other.action[g] @ f == f @ self.action[g] for g in range(self.G.order))

    def same_action(self, other: "GModule") -> bool:
        return self.base == other.base and all(a == b for a, b in zip(self.action, other.action))

    def __repr__(self) -> str:
        return f"GModule({self.name or self.base}, over {self.G.name})"


def direct_sum_gmodule(mods: Sequence[GModule]) -> GModule:
    G = mods[0].G
    base = direct_sum([m.base for m in mods], mods[0].k)
    action = []
    for g in range(G.order):
        action.append(block_hom([m.base for m in mods], [m.base for m in mods], {(t, t): m.action[g] for t, m in enumerate(mods)}))
    return GModule(G, base, action, check=False)


def twist(M: GModule, chi: Character, i: int) -> GModule:
    """``M(i)``: the action of ``g`` multiplied by ``chi(g)^i``."""
    if i == 0:
        return M
    action = [M.action[g] * chi.power(g, i) for g in range(M.G.order)]
    return GModule(M.G, M.base, action, check=False, name=f"{M.name}({i})" if M.name else "")


def kummer_dual(M: GModule, chi: Character) -> GModule:
    """``Hom(M, Z/2^k(1))`` with ``(g phi)(m) = chi(g) phi(g^-1 m)``."""
    G = M.G
    base = pontryagin_dual(M.base)
    action = [dual_hom(M.action[G.inv(g)]) * chi(g) for g in range(G.order)]
    return GModule(G, base, action, check=False, name=f"{M.name}*" if M.name else "")


def contragredient(M: GModule) -> GModule:
    """Pontryagin dual with ``(g phi)(m) = phi(g^-1 m)``."""
    return kummer_dual(M, Character.trivial(M.G, M.k))


@dataclass
class Induced:
    """``Ind_H^G M`` realized on the values at right coset representatives.

    Block ``j`` of an element is the value ``phi(t_j)``; ``t_0`` is the identity.
    """

    H: Subgroup
    M: GModule  # module over H.group
    module: GModule  # module over H.ambient
    reps: list[int]
    decomp: list[tuple[int, int]]

    def block(self, j: int) -> slice:
        r = self.M.base.ngens
        return slice(j * r, (j + 1) * r)

    def evaluation_at_identity(self) -> ModHom:
        """``phi -> phi(1)``, an ``H``-map ``Ind -> M``."""
        r = self.M.base.ngens
        n = len(self.reps)
        return block_hom([self.M.base], [self.M.base] * n, {(0, 0): self.M.base.identity()}, self.M.k)


def induced_module(G: FinGroup, H: Subgroup, M: GModule) -> Induced:
    """``Ind_H^G M`` as ``H``-equivariant maps ``G -> M`` with ``(g phi)(x) = phi(x g)``."""
    if M.G.order != H.order:
        raise GModuleError("module must be over the subgroup")
    reps, decomp = H.right_cosets()
    n = len(reps)
    base = FinMod(M.base.exps * n, M.k)
    rows = [M.base] * n
    action = []
    for g in range(G.order):
        blocks = {}
        for j, t in enumerate(reps):
            h, j2 = decomp[G.mul(t, g)]
            blocks[(j, j2)] = M.action[h]
        action.append(block_hom(rows, rows, blocks, M.k))
    module = GModule(G, base, action, check=False, name=f"Ind({M.name or 'M'})")
    return Induced(H, M, module, reps, decomp)


def induction_unit(M: GModule, H: Subgroup) -> tuple[Induced, ModHom]:
    """``Ind_H^G (M|_H)`` and the unit ``m -> (x -> x m)``, whose block ``j`` is ``t_j``."""
    ind = induced_module(M.G, H, M.restrict(H))
    n = len(ind.reps)
    unit = block_hom([M.base] * n, [M.base], {(j, 0): M.action[t] for j, t in enumerate(ind.reps)}, M.k)
    return ind, unit
