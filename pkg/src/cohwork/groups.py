"""Finite groups given by multiplication tables, and a small catalog."""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np


class GroupError(ValueError):
    pass


class FinGroup:
    """Group on ``range(n)`` with ``table[a, b] = a * b``."""

    def __init__(self, names: Sequence[str], table, identity: int | None = None, *, name: str = "", check: bool = True):
        self.names = [str(x) for x in names]
        self.table = np.asarray(table, dtype=np.int64)
        n = len(self.names)
        if self.table.shape != (n, n):
            raise GroupError(f"multiplication table must be {n}x{n}")
        if len(set(self.names)) != n:
            raise GroupError("element names must be distinct")
        self.name = name
        if identity is None:
            ids = [e for e in range(n) if (self.table[e] == np.arange(n)).all() and (self.table[:, e] == np.arange(n)).all()]
            if not ids:
                raise GroupError("table has no identity element")
            identity = ids[0]
        self.identity = int(identity)
        if check:
            self._check()
        self._inv = [int(np.nonzero(self.table[a] == self.identity)[0][0]) for a in range(n)]
        self._index = {x: i for i, x in enumerate(self.names)}

    def _check(self):
        n = self.order
        T = self.table
        if T.min() < 0 or T.max() >= n:
            raise GroupError("table entries out of range")
        e = self.identity
        if not ((T[e] == np.arange(n)).all() and (T[:, e] == np.arange(n)).all()):
            raise GroupError("identity element does not act as identity")
        for a in range(n):
            if sorted(T[a].tolist()) != list(range(n)):
                raise GroupError(f"row of {self.names[a]} is not a permutation (no inverse)")
        # associativity: (a b) c == a (b c)
        left = T[T[:, :, None], np.arange(n)[None, None, :]]
        right = T[np.arange(n)[:, None, None], T[None, :, :]]
        if not (left == right).all():
            raise GroupError("multiplication table is not associative")

    @property
    def order(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return self._inv[a]

    def prod(self, elems: Iterable[int]) -> int:
        out = self.identity
        for g in elems:
            out = int(self.table[out, g])
        return out

    def power(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        out = self.identity
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def element_order(self, a: int) -> int:
        x, n = a, 1
        while x != self.identity:
            x = self.mul(x, a)
            n += 1
        return n

    def index(self, name: str) -> int:
        try:
            return self._index[str(name)]
        except KeyError:
            raise GroupError(f"unknown element {name!r} of group {self.name or '?'}") from None

    @cached_property
    def nonidentity(self) -> list[int]:
        return [g for g in range(self.order) if g != self.identity]

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def closure(self, gens: Iterable[int]) -> list[int]:
        elems = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(elems)

    @cached_property
    def generators(self) -> list[int]:
        """A small generating set, chosen greedily by element index."""
        gens: list[int] = []
        span = {self.identity}
        for g in range(self.order):
            if g not in span:
                gens.append(g)
                span = set(self.closure(gens))
        return gens

    def words(self) -> dict[int, list[int]]:
        """Each element as a word in :attr:`generators` (breadth-first)."""
        out = {self.identity: []}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = self.mul(x, g)
                    if y not in out:
                        out[y] = out[x] + [g]
                        nxt.append(y)
            frontier = nxt
        return out

    def subgroup(self, elements: Iterable[int], name: str = "") -> "Subgroup":
        return Subgroup(self, elements, name=name)

    def subgroup_by_names(self, names: Iterable[str], name: str = "") -> "Subgroup":
        return Subgroup(self, [self.index(x) for x in names], name=name)

    def generated(self, gens: Iterable[int], name: str = "") -> "Subgroup":
        return Subgroup(self, self.closure(gens), name=name)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, [self.identity], name="1")

    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order), name=self.name)

    @cached_property
    def subgroups(self) -> list["Subgroup"]:
        """All subgroups generated by at most two elements.

        Every subgroup of a catalog group is of this kind.
        """
        seen = set()
        for a in range(self.order):
            for b in range(a, self.order):
                seen.add(tuple(self.closure([a, b])))
        return [Subgroup(self, els) for els in sorted(seen, key=lambda s: (len(s), s))]

    @cached_property
    def involutions(self) -> list[int]:
        return [g for g in range(self.order) if g != self.identity and self.mul(g, g) == self.identity]

    def __repr__(self) -> str:
        return f"FinGroup({self.name or '?'}, order {self.order})"


class Subgroup:
    """Subgroup of ``ambient`` with its own group structure on ``range(|H|)``.

    ``elements[i]`` is the ambient index of the subgroup's element ``i``; the
    identity always comes first.
    """

    def __init__(self, ambient: FinGroup, elements: Iterable[int], name: str = ""):
        els = sorted(set(int(x) for x in elements))
        if not els:
            raise GroupError("empty subgroup")
        e = ambient.identity
        if e not in els:
            raise GroupError("subgroup must contain the identity")
        s = set(els)
        for a in els:
            if ambient.inv(a) not in s:
                raise GroupError(f"subset not closed under inverses ({ambient.names[a]})")
            for b in els:
                if ambient.mul(a, b) not in s:
                    raise GroupError(
                        f"subset not closed under multiplication ({ambient.names[a]}*{ambient.names[b]})"
                    )
        els.remove(e)
        self.ambient = ambient
        self.elements = [e] + els
        self.local = {g: i for i, g in enumerate(self.elements)}
        n = len(self.elements)
        table = np.empty((n, n), dtype=np.int64)
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                table[i, j] = self.local[ambient.mul(a, b)]
        self.name = name or "<" + ",".join(ambient.names[g] for g in self.elements) + ">"
        self.group = FinGroup([ambient.names[g] for g in self.elements], table, 0, name=self.name, check=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.ambient.order // self.order

    def contains(self, g: int) -> bool:
        return g in self.local

    def right_cosets(self) -> tuple[list[int], list[tuple[int, int]]]:
        """Right coset representatives ``t_0 = 1, t_1, ...`` and, per ambient
        element ``x``, the pair ``(h, j)`` with ``x = h t_j`` (``h`` local)."""
        G = self.ambient
        reps: list[int] = []
        decomp: list[tuple[int, int] | None] = [None] * G.order
        for x in [G.identity] + [g for g in range(G.order) if g != G.identity]:
            if decomp[x] is not None:
                continue
            j = len(reps)
            reps.append(x)
            for i, h in enumerate(self.elements):
                decomp[G.mul(h, x)] = (i, j)
        return reps, decomp  # type: ignore[return-value]

    def __repr__(self) -> str:
        return f"Subgroup({self.name} <= {self.ambient.name})"


def group_from_function(name: str, elements: Sequence[Hashable], mul: Callable, names: Sequence[str] | None = None) -> FinGroup:
    elements = list(elements)
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[mul(a, b)]
    return FinGroup(names or [str(x) for x in elements], table, name=name)


def cyclic_group(n: int) -> FinGroup:
    names = ["1", "a"] + [f"a{i}" for i in range(2, n)]
    return group_from_function(f"C{n}", range(n), lambda a, b: (a + b) % n, names[:n])


def klein_four() -> FinGroup:
    els = [(0, 0), (1, 0), (0, 1), (1, 1)]
    return group_from_function("C2xC2", els, lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2), ["1", "a", "b", "ab"])


def dihedral_group(n: int) -> FinGroup:
    """Order ``2n``: ``r^i s^j`` with ``s r s = r^-1``."""
    els = [(i, j) for j in range(2) for i in range(n)]

    def mul(x, y):
        i1, j1 = x
        i2, j2 = y
        return ((i1 + (-1) ** j1 * i2) % n, (j1 + j2) % 2)

    names = []
    for i, j in els:
        r = "" if i == 0 else ("r" if i == 1 else f"r{i}")
        s = "s" if j else ""
        names.append((r + s) or "1")
    return group_from_function("S3" if n == 3 else f"D{n}", els, mul, names)


def quaternion_group() -> FinGroup:
    # unit quaternions (sign, axis) with axis in 1, i, j, k
    basis = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    els = [(s, a) for s in (1, -1) for a in ("1", "i", "j", "k")]

    def mul(x, y):
        sign, axis = basis[(x[1], y[1])]
        return (x[0] * y[0] * sign, axis)

    names = [("" if s == 1 else "-") + a for s, a in els]
    return group_from_function("Q8", els, mul, names)


def _catalog() -> dict[str, Callable[[], FinGroup]]:
    return {
        "C1": lambda: cyclic_group(1),
        "C2": lambda: cyclic_group(2),
        "C3": lambda: cyclic_group(3),
        "C4": lambda: cyclic_group(4),
        "C2xC2": klein_four,
        "C6": lambda: cyclic_group(6),
        "C8": lambda: cyclic_group(8),
        "S3": lambda: dihedral_group(3),
        "D4": lambda: dihedral_group(4),
        "Q8": quaternion_group,
    }


CATALOG_NAMES = list(_catalog())
_CACHE: dict[str, FinGroup] = {}


def catalog_group(name: str) -> FinGroup:
    aliases = {"C2×C2": "C2xC2", "V4": "C2xC2", "D8": "D4", "Klein": "C2xC2"}
    name = aliases.get(name, name)
    if name not in _CACHE:
        makers = _catalog()
        if name not in makers:
            raise GroupError(f"unknown catalog group {name!r}; choose from {', '.join(CATALOG_NAMES)}")
        _CACHE[name] = makers[name]()
    return _CACHE[name]


def catalog() -> list[FinGroup]:
    return [catalog_group(n) for n in CATALOG_NAMES]
