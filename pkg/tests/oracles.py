"""Brute-force reference computations, independent of the elimination code.

Everything here enumerates elements, so it only runs on tiny inputs.  Groups
of classes are identified by counting elements killed by powers of two.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def elements(orders):
    """All coordinate tuples of ``prod Z/orders[i]``."""
    return [np.array(t, dtype=np.int64) for t in itertools.product(*[range(q) for q in orders])]


def factors_from_torsion(counts: list[int]) -> list[int]:
    """Invariant factors (descending) from ``counts[j] = |H[2^j]|``, ``counts[0] = 1``."""
    ranks = [round(math.log2(counts[j] / counts[j - 1])) for j in range(1, len(counts))]
    # ranks[j-1] = number of cyclic factors of order >= 2^j
    out = []
    for j in range(len(ranks), 0, -1):
        above = ranks[j] if j < len(ranks) else 0
        out += [1 << j] * (ranks[j - 1] - above)
    return out


def quotient_factors(numerator: set, denominator: set, orders, k: int) -> list[int]:
    """Invariant factors of ``numerator / denominator`` (sets of coordinate tuples)."""
    orders = np.asarray(orders, dtype=np.int64)
    counts = [1]
    for j in range(1, k + 1):
        killed = {x for x in numerator if tuple((np.array(x, dtype=np.int64) << j) % orders) in denominator}
        counts.append(len(killed) // len(denominator) if denominator else 0)
    return factors_from_torsion(counts)


def span(gens, orders) -> set:
    """Subgroup generated by ``gens`` by closure under addition."""
    orders = np.asarray(orders, dtype=np.int64)
    zero = tuple(np.zeros(len(orders), dtype=np.int64))
    out = {zero}
    frontier = [zero]
    gens = [np.asarray(g, dtype=np.int64) % orders for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((np.array(x) + g) % orders)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return out


# -- group cohomology with full inhomogeneous cochains -------------------------


def cochain_differential(G, act, orders, n: int):
    """Function ``f -> d f`` on full inhomogeneous cochains stored as arrays
    of shape ``(|G|,) * n + (r,)``; ``act[g]`` is the integer action matrix."""
    orders = np.asarray(orders, dtype=np.int64)
    order = G.order
    tuples = list(itertools.product(range(order), repeat=n + 1))

    def d(f):
        out = np.zeros((order,) * (n + 1) + (len(orders),), dtype=np.int64)
        for t in tuples:
            g = t
            val = act[g[0]] @ f[g[1:]] if n > 0 else act[g[0]] @ f - f
            if n > 0:
                for i in range(n):
                    merged = g[:i] + (G.mul(g[i], g[i + 1]),) + g[i + 2:]
                    val = val + (-1) ** (i + 1) * f[merged]
                val = val + (-1) ** (n + 1) * f[g[:n]]
            out[t] = val % orders
        return out

    return d


def brute_group_cohomology(G, act, orders, n: int, k: int) -> list[int]:
    """Invariant factors of ``H^n(G, M)`` from all cocycles and coboundaries."""
    orders = tuple(int(q) for q in orders)
    r = len(orders)
    shape = (G.order,) * n + (r,)
    ncells = G.order ** n
    vals = elements(orders)

    def all_cochains(m):
        for combo in itertools.product(range(len(vals)), repeat=G.order ** m):
            yield np.stack([vals[c] for c in combo]).reshape((G.order,) * m + (r,))

    d_n = cochain_differential(G, act, orders, n)
    cocycles = set()
    for f in all_cochains(n):
        if not d_n(f).any():
            cocycles.add(tuple(f.ravel()))
    if n == 0:
        boundaries = {tuple(np.zeros(r, dtype=np.int64))}
    else:
        d_prev = cochain_differential(G, act, orders, n - 1)
        boundaries = {tuple(d_prev(g).ravel()) for g in all_cochains(n - 1)}
    flat_orders = list(orders) * ncells
    return quotient_factors(cocycles, boundaries, flat_orders, k)


def brute_tate(sigma, orders, k: int, degree: int) -> list[int]:
    """``H^0 = M^s / N M`` (even degree) or ``H^1 = ker N / (s - 1) M`` for an involution ``s``."""
    orders = np.asarray(orders, dtype=np.int64)
    sigma = np.asarray(sigma, dtype=np.int64)
    one = np.eye(len(orders), dtype=np.int64)
    N = one + sigma
    els = elements(orders)
    if degree % 2 == 0:
        num = {tuple(x) for x in els if not ((sigma @ x - x) % orders).any()}
        den = {tuple((N @ x) % orders) for x in els}
    else:
        num = {tuple(x) for x in els if not ((N @ x) % orders).any()}
        den = {tuple(((sigma - one) @ x) % orders) for x in els}
    return quotient_factors(num, den, orders, k)


def crossed_homs(G, act, orders):
    """All 1-cocycles ``f: G -> M`` with ``f(gh) = f(g) + g f(h)``, as arrays ``(|G|, r)``."""
    orders = np.asarray(orders, dtype=np.int64)
    vals = elements(orders)
    gens = G.generators
    out = []
    words = G.words()
    for combo in itertools.product(range(len(vals)), repeat=len(gens)):
        img = {g: vals[c] for g, c in zip(gens, combo)}
        f = np.zeros((G.order, len(orders)), dtype=np.int64)
        for x, word in words.items():
            acc = np.zeros(len(orders), dtype=np.int64)
            cur = G.identity
            for s in word:
                acc = (acc + act[cur] @ img[s]) % orders
                cur = G.mul(cur, s)
            f[x] = acc
        ok = all(
            not ((f[G.mul(a, b)] - f[a] - act[a] @ f[b]) % orders).any()
            for a in range(G.order)
            for b in range(G.order)
        )
        if ok:
            out.append(f)
    return out


def brute_sha1(G, act, orders, finite_subgroups, k: int) -> list[int]:
    """Classes in ``H^1(G, M)`` that become coboundaries on every listed subgroup."""
    orders = np.asarray(orders, dtype=np.int64)
    els = elements(orders)
    principal = {tuple(np.stack([(act[g] @ m - m) % orders for g in range(G.order)]).ravel()) for m in els}

    def principal_on(H):
        return {tuple(np.stack([(act[h] @ m - m) % orders for h in H]).ravel()) for m in els}

    local = [principal_on(H) for H in finite_subgroups]
    keep = set()
    for f in crossed_homs(G, act, orders):
        if all(tuple(f[list(H)].ravel()) in P for H, P in zip(finite_subgroups, local)):
            keep.add(tuple(f.ravel()))
    return quotient_factors(keep, principal, list(orders) * G.order, k)


def brute_mplus_invariants(G, act, orders, subgroups, k: int) -> list[int]:
    """``H^0(G, M_+)`` from functions ``G -> M`` that are equivariant on each subgroup.

    ``Ind_H M`` is modeled as ``{phi: G -> M, phi(h x) = h phi(x)}`` with
    ``(g phi)(x) = phi(x g)``; the unit sends ``m`` to ``x -> x m``.
    """
    orders = np.asarray(orders, dtype=np.int64)
    r = len(orders)
    els = elements(orders)
    cosets_all = []
    for H in subgroups:
        reps = []
        seen = set()
        for x in range(G.order):
            if x in seen:
                continue
            reps.append(x)
            seen |= {G.mul(h, x) for h in H}
        cosets_all.append(reps)

    def functions(H, reps):
        for combo in itertools.product(range(len(els)), repeat=len(reps)):
            phi = np.zeros((G.order, r), dtype=np.int64)
            for rep, c in zip(reps, combo):
                for h in H:
                    phi[G.mul(h, rep)] = (act[h] @ els[c]) % orders
            yield phi

    pieces = [list(functions(H, reps)) for H, reps in zip(subgroups, cosets_all)]
    total = []
    for combo in itertools.product(*pieces):
        total.append(np.concatenate(combo))  # shape (len(subgroups) * |G|, r)

    def translate(Phi, g):
        blocks = Phi.reshape(len(subgroups), G.order, r)
        out = np.empty_like(blocks)
        for x in range(G.order):
            out[:, x] = blocks[:, G.mul(x, g)]
        return out.reshape(-1, r)

    unit_image = set()
    for m in els:
        block = np.stack([(act[x] @ m) % orders for x in range(G.order)])
        unit_image.add(tuple(np.concatenate([block] * len(subgroups)).ravel()))
    allkeys = {tuple(P.ravel()) for P in total}
    invariant = set()
    for P in total:
        if all(tuple(((translate(P, g) - P) % np.tile(orders, (P.shape[0], 1))).ravel()) in unit_image for g in G.generators):
            invariant.add(tuple(P.ravel()))
    flat_orders = list(orders) * (len(subgroups) * G.order)
    assert unit_image <= allkeys
    return quotient_factors(invariant, unit_image, flat_orders, k)


def brute_complex_cohomology(modules: dict, diffs: dict, n: int, k: int) -> list[int]:
    """``ker d^n / im d^(n-1)`` by enumeration; ``modules[i]`` are order lists and
    ``diffs[i]`` integer matrices ``X^i -> X^(i+1)`` (missing means zero)."""
    orders = modules.get(n, [])
    if not orders:
        return []
    o = np.asarray(orders, dtype=np.int64)
    nxt = np.asarray(modules.get(n + 1, []), dtype=np.int64)
    dn = diffs.get(n)
    cycles = set()
    for x in elements(orders):
        if dn is None or len(nxt) == 0 or not ((np.asarray(dn) @ x) % nxt).any():
            cycles.add(tuple(int(v) for v in x))
    prev = modules.get(n - 1, [])
    dp = diffs.get(n - 1)
    if dp is None or not prev:
        bounds = {(0,) * len(orders)}
    else:
        bounds = {tuple(int(v) for v in (np.asarray(dp) @ y) % o) for y in elements(prev)}
    return quotient_factors(cycles, bounds, orders, k)


def brute_arch_pairing_perfect(sigma, orders, k: int, n: int) -> bool:
    """Whether ``Ĥ^n(M) x Ĥ^(2-n)(M*) -> Z/2`` is perfect, by enumeration.

    ``M*`` is modeled as value tuples ``phi(e_j)`` with ``(s phi)(m) = -phi(s m)``,
    and two odd-degree classes pair through ``(s phi)(m)``.
    """
    q = 1 << k
    orders = np.asarray(orders, dtype=np.int64)
    sigma = np.asarray(sigma, dtype=np.int64)
    r = len(orders)
    one = np.eye(r, dtype=np.int64)
    els = elements(orders)
    # functionals: phi(e_j) killed by orders[j]
    phis = [np.array(t, dtype=np.int64) for t in itertools.product(*[range(0, q, q // int(o)) for o in orders])]

    def act_dual(phi):
        return (-(sigma.T @ phi)) % q

    def value(m, phi):
        return int(m @ phi) % q

    def classes(vals, act, degree, mod):
        if degree % 2 == 0:
            cyc = [x for x in vals if not ((act(x) - x) % mod).any()]
            bnd = {tuple((x + act(x)) % mod) for x in vals}
        else:
            cyc = [x for x in vals if not ((x + act(x)) % mod).any()]
            bnd = {tuple((act(x) - x) % mod) for x in vals}
        return cyc, bnd

    actM = lambda x: (sigma @ x) % orders
    cycM, bndM = classes(els, actM, n, orders)
    qvec = np.full(r, q, dtype=np.int64)
    cycD, bndD = classes(phis, act_dual, 2 - n, qvec)
    odd = n % 2 == 1

    def pair(m, phi):
        return value(m, act_dual(phi) if odd else phi)

    half = q // 2
    if any(pair(m, phi) % half for m in cycM for phi in cycD):
        return False  # lands outside the 2-torsion of the target
    left = {tuple(m) for m in cycM if all(pair(m, phi) == 0 for phi in cycD)}
    right = {tuple(phi) for phi in cycD if all(pair(m, phi) == 0 for m in cycM)}
    return left == bndM and right == bndD
