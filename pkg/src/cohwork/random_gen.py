"""Random finite modules, complexes, chain maps and diagrams for property runs.

All generators take an explicit ``random.Random`` so runs are reproducible.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .algebra import FinMod, ModHom, block_hom, direct_sum
from .complexes import (
    ChainMap,
    Complex,
    Cube,
    cone,
    direct_sum_complex,
    image_complex,
    product_map_from,
    quotient_complex,
    shift,
)


@dataclass(frozen=True)
class ComplexBounds:
    k: int = 3
    max_gens: int = 2
    max_pieces: int = 3
    lo: int = -1
    hi: int = 2
    cone_prob: float = 0.3


def random_finmod(rng: random.Random, k: int, max_gens: int = 2, min_gens: int = 0) -> FinMod:
    n = rng.randint(min_gens, max_gens)
    return FinMod(tuple(sorted((rng.randint(1, k) for _ in range(n)), reverse=True)), k)


def random_hom(rng: random.Random, A: FinMod, B: FinMod, density: float = 0.7) -> ModHom:
    mat = np.zeros((B.ngens, A.ngens), dtype=np.int64)
    for i, b in enumerate(B.exps):
        for j, a in enumerate(A.exps):
            if rng.random() < density:
                s = max(0, b - a)
                mat[i, j] = rng.randrange(1 << (b - s)) << s
    return ModHom(A, B, mat)


def random_unit(rng: random.Random, k: int) -> int:
    return rng.randrange(1, 1 << k, 2)


def elementary_complex(rng: random.Random, b: ComplexBounds) -> Complex:
    """A one- or two-term complex placed in a random degree."""
    k = b.k
    n = rng.randint(b.lo, b.hi - 1)
    M = random_finmod(rng, k, b.max_gens, min_gens=1)
    kind = rng.choice(("point", "identity", "scalar", "hom"))
    if kind == "point":
        return Complex.concentrated(M, n)
    if kind == "identity":
        return Complex({n: M, n + 1: M}, {n: M.identity()}, k)
    if kind == "scalar":
        c = (random_unit(rng, k) << rng.randint(0, k)) % (1 << k)
        return Complex({n: M, n + 1: M}, {n: ModHom.scalar(M, c)}, k)
    N = random_finmod(rng, k, b.max_gens, min_gens=1)
    return Complex({n: M, n + 1: N}, {n: random_hom(rng, M, N)}, k)


def random_complex(rng: random.Random, b: ComplexBounds = ComplexBounds()) -> Complex:
    pieces = [elementary_complex(rng, b) for _ in range(rng.randint(1, b.max_pieces))]
    X = direct_sum_complex(pieces, b.k)
    if rng.random() < b.cone_prob:
        Y = direct_sum_complex([elementary_complex(rng, b) for _ in range(rng.randint(1, 2))], b.k)
        C = cone(random_chain_map(rng, Y, X))
        X = Complex({n: C.module(n) for n in C.degrees()}, {n: C.d(n) for n in C.degrees()}, b.k, check=False)
    return X


def hom_parameters(X: Complex, Y: Complex):
    """Coordinates of the module of degreewise maps ``X -> Y``.

    ``Hom(Z/2^a, Z/2^b)`` is cyclic of order ``2^min(a, b)``, generated by
    ``e -> 2^max(0, b - a) e``.  Returns ``[(n, i, j, exp, scale)]``.
    """
    params = []
    for n in range(min(X.lo, Y.lo), max(X.hi, Y.hi) + 1):
        for i, bexp in enumerate(Y.module(n).exps):
            for j, aexp in enumerate(X.module(n).exps):
                params.append((n, i, j, min(aexp, bexp), max(0, bexp - aexp)))
    return params


def chain_map_module(X: Complex, Y: Complex):
    """Kernel of ``F -> d_Y F - F d_X`` on degreewise maps, as parameters plus generators."""
    k = X.k
    params = hom_parameters(X, Y)
    out_index = {}
    out_exps = []
    out_scale = []
    for n in range(min(X.lo, Y.lo) - 1, max(X.hi, Y.hi) + 1):
        for i, bexp in enumerate(Y.module(n + 1).exps):
            for j, aexp in enumerate(X.module(n).exps):
                out_index[(n, i, j)] = len(out_exps)
                out_exps.append(min(aexp, bexp))
                out_scale.append(max(0, bexp - aexp))
    dY = {n: Y.d(n).dense() for n in range(Y.lo - 1, Y.hi + 1)}
    dX = {n: X.d(n).dense() for n in range(X.lo - 1, X.hi + 1)}
    mat = np.zeros((len(out_exps), len(params)), dtype=np.int64)
    for t, (n, i, j, _, s) in enumerate(params):
        # d_Y^n o F^n
        D = dY.get(n)
        if D is not None:
            for i2 in range(D.shape[0]):
                x = int(D[i2, i]) << s
                if x:
                    o = out_index[(n, i2, j)]
                    mat[o, t] += x >> out_scale[o]
        # - F^n o d_X^(n-1)
        D = dX.get(n - 1)
        if D is not None:
            for j2 in range(D.shape[1]):
                x = int(D[j, j2]) << s
                if x:
                    o = out_index[(n - 1, i, j2)]
                    mat[o, t] -= x >> out_scale[o]
    src = FinMod(tuple(p[3] for p in params), k)
    tgt = FinMod(tuple(out_exps), k)
    h = ModHom(src, tgt, mat, check=False)
    return params, h.kernel()


def chain_map_from_params(X: Complex, Y: Complex, params, coeffs) -> ChainMap:
    mats = {}
    for (n, i, j, e, s), c in zip(params, coeffs):
        c %= 1 << e
        if c:
            m = mats.setdefault(n, np.zeros((Y.module(n).ngens, X.module(n).ngens), dtype=np.int64))
            m[i, j] = (m[i, j] + (c << s)) % (1 << Y.module(n).exps[i])
    maps = {n: ModHom(X.module(n), Y.module(n), m) for n, m in mats.items()}
    return ChainMap(X, Y, maps, check=True)


def random_chain_map(rng: random.Random, X: Complex, Y: Complex) -> ChainMap:
    params, K = chain_map_module(X, Y)
    coeffs = np.zeros(len(params), dtype=object)
    for g in K.gens:
        c = rng.randrange(1 << X.k)
        for t, x in g.items():
            coeffs[t] += c * x
    return chain_map_from_params(X, Y, params, [int(c) for c in coeffs])


def random_map_pair(rng: random.Random, b: ComplexBounds = ComplexBounds()):
    X, Y, Z = random_complex(rng, b), random_complex(rng, b), random_complex(rng, b)
    return random_chain_map(rng, X, Y), random_chain_map(rng, Y, Z)


def random_ses(rng: random.Random, b: ComplexBounds = ComplexBounds()) -> tuple[ChainMap, ChainMap]:
    """``0 -> X -u-> Y -v-> Z -> 0`` with ``X`` the image of a random map into ``Y``."""
    Y = random_complex(rng, b)
    W = random_complex(rng, b)
    if rng.random() < 0.3:
        # a split piece keeps X nonzero often enough
        W = direct_sum_complex([W, Y], b.k)
    w = random_chain_map(rng, W, Y)
    X, u = image_complex(w)
    Z, v = quotient_complex(u)
    return u, v


def pushout(u: ChainMap, v: ChainMap) -> tuple[Complex, ChainMap, ChainMap]:
    """Pushout of ``Y <-u- X -v-> X1``: ``(Y + X1) / {(u x, -v x)}``."""
    Y, X1 = u.target, v.target
    S = direct_sum_complex([Y, X1], Y.k)
    embed = product_map_from([u, -v], u.source)
    embed = ChainMap(u.source, S, {n: embed[n] for n in u.source.degrees()}, check=True)
    P, proj = quotient_complex(embed)
    k = Y.k
    into_Y = ChainMap(
        Y,
        P,
        {n: proj[n] @ block_hom([Y.module(n), X1.module(n)], [Y.module(n)], {(0, 0): Y.module(n).identity()}, k) for n in Y.degrees()},
        check=True,
    )
    into_X1 = ChainMap(
        X1,
        P,
        {n: proj[n] @ block_hom([Y.module(n), X1.module(n)], [X1.module(n)], {(1, 0): X1.module(n).identity()}, k) for n in X1.degrees()},
        check=True,
    )
    return P, into_Y, into_X1


def random_cube(rng: random.Random, b: ComplexBounds = ComplexBounds()) -> Cube:
    C = random_complex(rng, b)
    X = random_complex(rng, b)
    Y = random_complex(rng, b)
    X1 = random_complex(rng, b)
    f = random_chain_map(rng, C, X)
    u = random_chain_map(rng, X, Y)
    v = random_chain_map(rng, X, X1)
    P, vhat, u1 = pushout(u, v)
    if rng.random() < 0.5:
        Y1 = random_complex(rng, b)
        w = random_chain_map(rng, P, Y1)
        vhat, u1 = w @ vhat, w @ u1
    else:
        Y1 = P
    return Cube(C, X, Y, X1, Y1, f, u, v, u1, vhat)


# -- group modules and global setups ------------------------------------------


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SetupBounds:
    k: int = 4
    groups: tuple[str, ...] = ("C1", "C2", "C3", "C4", "C2xC2", "C6", "S3", "C8", "D4", "Q8")
    max_rank: int = 2
    max_places: int = 4
    twist_range: tuple[int, int] = (-2, 3)
    D: int = 4
    retries: int = 50

    def __post_init__(self):
        from .groups import catalog_group

        if not 1 <= self.k <= 8:
            raise ValueError("k must be between 1 and 8")
        if not 1 <= self.max_places <= 5:
            raise ValueError("max_places must be between 1 and 5")
        if self.max_rank < 1:
            raise ValueError("max_rank must be positive")
        for g in self.groups:
            if catalog_group(g).order > 16:
                raise ValueError(f"group {g} exceeds order 16")
            if len(catalog_group(g).generators) > 3:
                raise ValueError(f"group {g} needs more than 3 generators")


_CHARACTERS: dict[tuple[str, int, int], list] = {}


def all_characters(G, k: int):
    """Every character ``G -> (Z/2^k)^x``, by search over generator images."""
    from .gmodules import Character, GModuleError

    key = (G.name, G.order, k)
    if key not in _CHARACTERS:
        mod = 1 << k
        units = list(range(1, mod, 2))
        gens = G.generators
        choices = [[u for u in units if pow(u, G.element_order(g), mod) == 1] for g in gens]
        out = []
        for imgs in itertools.product(*choices):
            try:
                out.append(Character.from_generators(G, dict(zip(gens, imgs)), k))
            except GModuleError:
                continue
        _CHARACTERS[key] = out
    return _CHARACTERS[key]


def random_character(rng: random.Random, G, k: int):
    return rng.choice(all_characters(G, k))


def random_automorphism(rng: random.Random, A: FinMod, retries: int = 50) -> ModHom:
    for _ in range(retries):
        P = random_hom(rng, A, A, density=0.5)
        if P.is_isomorphism():
            return P
    return A.identity()


def _permutation_piece(G, H, a: int, k: int):
    """``Z/2^a[H \\ G]``: the induced module of the trivial ``H``-module."""
    from .gmodules import GModule, induced_module

    return induced_module(G, H, GModule.trivial(H.group, FinMod((a,), k))).module


def random_gmodule(rng: random.Random, G, k: int, max_rank: int = 2, retries: int = 50):
    """Direct sum of twisted cyclic and permutation pieces, conjugated by a
    random automorphism; generator images are checked against the relations."""
    from .gmodules import GModule, GModuleError, direct_sum_gmodule, twist

    pieces = []
    rank = 0
    target = rng.randint(1, max_rank)
    subgroups = [H for H in G.subgroups if H.index <= max_rank and H.index > 1]
    while rank < target:
        a = rng.randint(1, k)
        room = target - rank
        choices = [H for H in subgroups if H.index <= room]
        if choices and rng.random() < 0.4:
            P = _permutation_piece(G, rng.choice(choices), a, k)
        else:
            P = GModule.trivial(G, FinMod((a,), k))
        P = twist(P, random_character(rng, G, k), 1)
        pieces.append(P)
        rank += P.base.ngens
    S = direct_sum_gmodule(pieces)
    gens = G.generators
    for _ in range(retries):
        U = random_automorphism(rng, S.base)
        Uinv = U.inverse()
        images = {g: U @ S.action[g] @ Uinv for g in gens}
        try:
            return GModule.from_generators(G, S.base, images)
        except GModuleError:
            continue
    raise GenerationError(f"no valid action found on {S.base} after {retries} attempts")


def random_real_module(rng: random.Random, k: int, max_rank: int = 3):
    """Random module over ``C2`` for archimedean duality runs."""
    from .groups import catalog_group

    return random_gmodule(rng, catalog_group("C2"), k, max_rank)


def random_setup(rng: random.Random, b: SetupBounds = SetupBounds()):
    """Random global setup with at least one archimedean place."""
    from .groups import catalog_group
    from .positive import GlobalSetup, Place

    G = catalog_group(rng.choice(b.groups))
    k = b.k
    chi = random_character(rng, G, k)
    M = random_gmodule(rng, G, k, b.max_rank, b.retries)
    i = rng.randrange(*b.twist_range)
    nplaces = rng.randint(1, b.max_places)
    places = []
    counts = {"finite": 0, "real": 0, "complex": 0}
    for t in range(nplaces):
        kinds = ["finite", "complex"] + (["real"] if G.involutions else [])
        if t == 0:
            kinds = ["complex"] + (["real", "real"] if G.involutions else [])
        kind = rng.choice(kinds)
        if kind == "finite":
            H = rng.choice(G.subgroups)
        elif kind == "real":
            H = G.subgroup([G.identity, rng.choice(G.involutions)])
        else:
            H = G.trivial_subgroup()
        counts[kind] += 1
        places.append(Place(f"{kind[0]}{counts[kind]}", kind, H))
    rng.shuffle(places)
    return GlobalSetup(G, chi, M, i, places, b.D)
