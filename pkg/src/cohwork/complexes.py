"""Bounded cochain complexes of finite modules, chain maps and mapping cones.

Sign conventions:

* shift: ``X[n]^i = X^(i+n)`` with differential ``(-1)^n d_X``;
* cone of ``u: X -> Y``: ``Cone(u)^i = Y^i + X^(i+1)`` with differential
  ``[[d_Y, u], [0, -d_X]]``;
* the canonical triangle is ``X -u-> Y -j-> Cone(u) -(-p)-> X[1]``.

Complexes built from truncated cochain complexes only compute the correct
cohomology in a range of degrees; that range is carried as ``window`` and
propagated through shifts, sums and cones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .algebra import (
    AlgebraError,
    FinMod,
    ModHom,
    Quotient,
    Submodule,
    Subquotient,
    block_hom,
    describe,
    direct_sum,
    is_exact_at,
)
from .linalg import Vector, vectors_to_csr
from .report import Verification

Window = tuple  # (low or None, high or None), inclusive


class ComplexError(AlgebraError):
    pass


def _wmax(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _wmin(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def meet(*windows: Window) -> Window:
    lo, hi = None, None
    for w in windows:
        lo = _wmax(lo, w[0])
        hi = _wmin(hi, w[1])
    return lo, hi


class CohomologyGroup:
    """``H^n`` of a complex together with cocycle representatives."""

    def __init__(self, X: "Complex", n: int):
        self.complex = X
        self.degree = n
        self._sq = Subquotient(X.module(n), denominator=X.d(n - 1).raw, kernel_of=X.d(n))
        self.module = self._sq.module

    def representative(self, j: int) -> Vector:
        return self._sq.representative(j)

    def lift(self, coords: Sequence[int]) -> Vector:
        return self._sq.lift(coords)

    def classify(self, vec: Vector) -> list[int] | None:
        """Class of a cocycle, or None when ``vec`` is not a cocycle."""
        return self._sq.classify(vec)

    def __repr__(self) -> str:
        return f"H^{self.degree} = {describe(self.module)}"


class Complex:
    def __init__(
        self,
        modules: Mapping[int, FinMod],
        diffs: Mapping[int, ModHom],
        k: int,
        *,
        window: Window = (None, None),
        check: bool = True,
        name: str = "",
    ):
        self.k = k
        self._mods = {n: M for n, M in modules.items() if not M.is_zero}
        self._diffs = {n: d for n, d in diffs.items() if not d.is_zero()}
        self.window = tuple(window)
        self.name = name
        self._zero = FinMod.zero(k)
        self._coh: dict[int, CohomologyGroup] = {}
        degs = sorted(self._mods)
        self.lo = degs[0] if degs else 0
        self.hi = degs[-1] if degs else -1
        if check:
            self._check()

    @classmethod
    def from_list(cls, lo: int, modules: Sequence[FinMod], diffs: Sequence, k: int | None = None, **kw) -> "Complex":
        """Complex with ``X^(lo+i) = modules[i]`` and ``d^(lo+i) = diffs[i]``.

        ``diffs`` entries may be ModHoms or plain integer matrices.
        """
        if k is None:
            k = modules[0].k
        mods = {lo + i: M for i, M in enumerate(modules)}
        ds = {}
        for i, d in enumerate(diffs):
            if not isinstance(d, ModHom):
                d = ModHom(modules[i], modules[i + 1], d)
            ds[lo + i] = d
        return cls(mods, ds, k, **kw)

    @classmethod
    def concentrated(cls, M: FinMod, n: int = 0) -> "Complex":
        return cls({n: M}, {}, M.k)

    @classmethod
    def zero(cls, k: int) -> "Complex":
        return cls({}, {}, k)

    def _check(self):
        for n, d in self._diffs.items():
            if d.domain != self.module(n) or d.codomain != self.module(n + 1):
                raise ComplexError(f"differential d^{n} has the wrong shape")
        for n in self._diffs:
            if n + 1 in self._diffs and not (self._diffs[n + 1] @ self._diffs[n]).is_zero():
                raise ComplexError(f"d^{n + 1} o d^{n} is not zero")

    def module(self, n: int) -> FinMod:
        return self._mods.get(n, self._zero)

    def d(self, n: int) -> ModHom:
        d = self._diffs.get(n)
        if d is None:
            return ModHom.zero(self.module(n), self.module(n + 1))
        return d

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def is_zero(self) -> bool:
        return not self._mods

    def trusted(self, n: int) -> bool:
        lo, hi = self.window
        return (lo is None or n >= lo) and (hi is None or n <= hi)

    def check_range(self) -> range:
        """Degrees in which cohomology is meaningful and possibly nonzero."""
        lo, hi = self.window
        a = self.lo if lo is None else max(lo, self.lo)
        b = self.hi if hi is None else min(hi, self.hi)
        return range(a, b + 1)

    def cohomology_group(self, n: int) -> CohomologyGroup:
        if n not in self._coh:
            self._coh[n] = CohomologyGroup(self, n)
        return self._coh[n]

    def cohomology(self, n: int) -> FinMod:
        return self.cohomology_group(n).module

    def is_acyclic(self, degrees: Iterable[int] | None = None) -> bool:
        degrees = self.check_range() if degrees is None else degrees
        return all(self.cohomology(n).is_zero for n in degrees)

    def identity(self) -> "ChainMap":
        return ChainMap(self, self, {n: self.module(n).identity() for n in self._mods}, check=False)

    def shift(self, n: int) -> "Complex":
        return shift(self, n)

    def __repr__(self) -> str:
        terms = ", ".join(f"{n}: {describe(self.module(n))}" for n in self.degrees())
        return f"Complex({self.name + ' ' if self.name else ''}[{terms}])"


class ChainMap:
    def __init__(self, source: Complex, target: Complex, maps: Mapping[int, ModHom], *, check: bool = True, name: str = ""):
        if source.k != target.k:
            raise ComplexError("chain map between complexes over different rings")
        self.source = source
        self.target = target
        self.name = name
        self._maps = {}
        for n, f in maps.items():
            if f.domain != source.module(n) or f.codomain != target.module(n):
                raise ComplexError(f"component {n} of chain map {name!r} has the wrong shape")
            if not f.is_zero():
                self._maps[n] = f
        if check:
            bad = self.first_noncommuting_degree()
            if bad is not None:
                raise ComplexError(f"chain map {name!r} does not commute with differentials in degree {bad}")

    def __getitem__(self, n: int) -> ModHom:
        f = self._maps.get(n)
        if f is None:
            return ModHom.zero(self.source.module(n), self.target.module(n))
        return f

    def first_noncommuting_degree(self) -> int | None:
        lo = min(self.source.lo, self.target.lo) - 1
        hi = max(self.source.hi, self.target.hi)
        for n in range(lo, hi + 1):
            if not (self.target.d(n) @ self[n] == self[n + 1] @ self.source.d(n)):
                return n
        return None

    @classmethod
    def identity(cls, X: Complex) -> "ChainMap":
        return X.identity()

    @classmethod
    def zero(cls, X: Complex, Y: Complex) -> "ChainMap":
        return cls(X, Y, {}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        if other.target is not self.source and not _same_shape(other.target, self.source):
            raise ComplexError("composition of non-composable chain maps")
        degs = set(self._maps) & set(other._maps)
        return ChainMap(other.source, self.target, {n: self[n] @ other[n] for n in degs}, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        degs = set(self._maps) | set(other._maps)
        return ChainMap(self.source, self.target, {n: self[n] + other[n] for n in degs}, check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: -f for n, f in self._maps.items()}, check=False)

    def __mul__(self, c: int) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: f * c for n, f in self._maps.items()}, check=False)

    __rmul__ = __mul__

    def equals(self, other: "ChainMap") -> bool:
        degs = set(self._maps) | set(other._maps)
        return all(self[n] == other[n] for n in degs)

    def shift(self, n: int) -> "ChainMap":
        return ChainMap(
            shift(self.source, n), shift(self.target, n), {i - n: f for i, f in self._maps.items()}, check=False
        )

    def induced(self, n: int) -> ModHom:
        return induced_map(self[n], self.source.cohomology_group(n), self.target.cohomology_group(n))

    def cone(self) -> "Cone":
        return cone(self)


def _same_shape(X: Complex, Y: Complex) -> bool:
    if X.lo != Y.lo or X.hi != Y.hi:
        return False
    return all(X.module(n) == Y.module(n) and X.d(n) == Y.d(n) for n in X.degrees())


def induced_map(f: ModHom, H1: CohomologyGroup, H2: CohomologyGroup) -> ModHom:
    """Map on cohomology induced by a degreewise map sending cocycles to cocycles."""
    cols = []
    for j in range(H1.module.ngens):
        c = H2.classify(f.apply(H1.representative(j)))
        if c is None:
            raise ComplexError("map does not send cocycles to cocycles")
        cols.append(c)
    mat = np.zeros((H2.module.ngens, len(cols)), dtype=np.int64)
    for j, c in enumerate(cols):
        mat[:, j] = c
    return ModHom(H1.module, H2.module, mat)


def shift(X: Complex, n: int) -> Complex:
    sign = -1 if n % 2 else 1
    lo, hi = X.window
    return Complex(
        {i - n: X.module(i) for i in X.degrees()},
        {i - n: X.d(i) * sign for i in X.degrees()},
        X.k,
        window=(None if lo is None else lo - n, None if hi is None else hi - n),
        check=False,
        name=f"{X.name}[{n}]" if X.name else "",
    )


class Cone(Complex):
    """``Cone(u)`` for ``u: X -> Y``; degree ``i`` is ``Y^i + X^(i+1)``."""

    def __init__(self, u: ChainMap, name: str = ""):
        X, Y = u.source, u.target
        self.u = u
        self.X = X
        self.Y = Y
        k = X.k
        lo = min(Y.lo, X.lo - 1)
        hi = max(Y.hi, X.hi - 1)
        mods, diffs = {}, {}
        for i in range(lo, hi + 1):
            mods[i] = direct_sum([Y.module(i), X.module(i + 1)], k)
        for i in range(lo, hi):
            rows = [Y.module(i + 1), X.module(i + 2)]
            cols = [Y.module(i), X.module(i + 1)]
            diffs[i] = block_hom(rows, cols, {(0, 0): Y.d(i), (0, 1): u[i + 1], (1, 1): -X.d(i + 1)}, k)
        wx, wy = X.window
        window = meet(Y.window, (None if wx is None else wx - 1, None if X.window[1] is None else X.window[1] - 1))
        super().__init__(mods, diffs, k, window=window, check=True, name=name)

    def split(self, n: int, vec: Vector) -> tuple[Vector, Vector]:
        """Split a degree-``n`` element into its ``Y^n`` and ``X^(n+1)`` parts."""
        m = self.Y.module(n).ngens
        y = {i: x for i, x in vec.items() if i < m}
        x = {i - m: v for i, v in vec.items() if i >= m}
        return y, x

    def join(self, n: int, y: Vector, x: Vector) -> Vector:
        m = self.Y.module(n).ngens
        out = dict(y)
        out.update({i + m: v for i, v in x.items()})
        return out

    def inclusion(self) -> ChainMap:
        """``j: Y -> Cone(u)``."""
        k = self.k
        maps = {}
        for i in self.Y.degrees():
            maps[i] = block_hom(
                [self.Y.module(i), self.X.module(i + 1)], [self.Y.module(i)], {(0, 0): self.Y.module(i).identity()}, k
            )
        return ChainMap(self.Y, self, maps, check=False)

    def projection(self, n: int) -> ModHom:
        """``p^n: Cone(u)^n -> X^(n+1)``."""
        return block_hom(
            [self.X.module(n + 1)],
            [self.Y.module(n), self.X.module(n + 1)],
            {(0, 1): self.X.module(n + 1).identity()},
            self.k,
        )

    def connecting(self) -> ChainMap:
        """``-p: Cone(u) -> X[1]``, the third map of the canonical triangle."""
        X1 = shift(self.X, 1)
        maps = {n: -self.projection(n) for n in self.degrees()}
        return ChainMap(self, X1, maps, check=False)


def cone(u: ChainMap) -> Cone:
    return Cone(u)


def cone_functorial(g: ChainMap, f: ChainMap, u: ChainMap, v: ChainMap, *, Cu: Cone | None = None, Cv: Cone | None = None) -> ChainMap:
    """``(g, f[1]): Cone(u) -> Cone(v)`` for a commuting square ``g u = v f``."""
    for n in range(min(u.source.lo, u.target.lo) - 1, max(u.source.hi, u.target.hi) + 2):
        if not (g[n] @ u[n] == v[n] @ f[n]):
            raise ComplexError(f"square g u = v f fails in degree {n}")
    Cu = Cu or cone(u)
    Cv = Cv or cone(v)
    k = Cu.k
    maps = {}
    for n in range(min(Cu.lo, Cv.lo), max(Cu.hi, Cv.hi) + 1):
        rows = [v.target.module(n), v.source.module(n + 1)]
        cols = [u.target.module(n), u.source.module(n + 1)]
        maps[n] = block_hom(rows, cols, {(0, 0): g[n], (1, 1): f[n + 1]}, k)
    return ChainMap(Cu, Cv, maps, check=True, name="(g,f[1])")


def direct_sum_complex(Xs: Sequence[Complex], k: int | None = None) -> Complex:
    if k is None:
        k = Xs[0].k
    if not Xs:
        return Complex.zero(k)
    lo = min(X.lo for X in Xs)
    hi = max(X.hi for X in Xs)
    mods, diffs = {}, {}
    for n in range(lo, hi + 1):
        mods[n] = direct_sum([X.module(n) for X in Xs], k)
    for n in range(lo, hi):
        rows = [X.module(n + 1) for X in Xs]
        cols = [X.module(n) for X in Xs]
        diffs[n] = block_hom(rows, cols, {(t, t): X.d(n) for t, X in enumerate(Xs)}, k)
    return Complex(mods, diffs, k, window=meet(*(X.window for X in Xs)), check=False)


def direct_sum_map(fs: Sequence[ChainMap], source: Complex, target: Complex) -> ChainMap:
    """Block-diagonal sum of chain maps between the matching direct sums."""
    maps = {}
    for n in range(min(source.lo, target.lo), max(source.hi, target.hi) + 1):
        rows = [f.target.module(n) for f in fs]
        cols = [f.source.module(n) for f in fs]
        maps[n] = block_hom(rows, cols, {(t, t): f[n] for t, f in enumerate(fs)}, source.k)
    return ChainMap(source, target, maps, check=False)


def sum_map_into(fs: Sequence[ChainMap], target: Complex) -> ChainMap:
    """``(x_1, ..., x_r) -> sum f_t(x_t)`` from the direct sum of the sources."""
    source = direct_sum_complex([f.source for f in fs], target.k)
    maps = {}
    for n in source.degrees():
        cols = [f.source.module(n) for f in fs]
        maps[n] = block_hom([target.module(n)], cols, {(0, t): f[n] for t, f in enumerate(fs)}, target.k)
    return ChainMap(source, target, maps, check=False)


def product_map_from(fs: Sequence[ChainMap], source: Complex) -> ChainMap:
    """``x -> (f_1(x), ..., f_r(x))`` into the direct sum of the targets."""
    target = direct_sum_complex([f.target for f in fs], source.k)
    maps = {}
    for n in source.degrees():
        rows = [f.target.module(n) for f in fs]
        maps[n] = block_hom(rows, [source.module(n)], {(t, 0): f[n] for t, f in enumerate(fs)}, source.k)
    return ChainMap(source, target, maps, check=False)


def image_complex(f: ChainMap) -> tuple[Complex, ChainMap]:
    """Image subcomplex of ``f`` with its inclusion into the target."""
    Y = f.target
    subs = {n: f[n].image() for n in Y.degrees()}
    mods = {n: S.module for n, S in subs.items()}
    diffs = {}
    for n in Y.degrees():
        if n + 1 in subs:
            diffs[n] = Y.d(n).restrict(subs[n], subs[n + 1])
    X = Complex(mods, diffs, Y.k, window=meet(Y.window, f.source.window), check=True)
    incl = ChainMap(X, Y, {n: S.inclusion() for n, S in subs.items()}, check=True)
    return X, incl


def quotient_complex(u: ChainMap) -> tuple[Complex, ChainMap]:
    """Degreewise cokernel of ``u`` with its projection from the target."""
    Y = u.target
    qs = {n: Quotient(Y.module(n), u[n].raw) for n in Y.degrees()}
    mods = {n: q.module for n, q in qs.items()}
    diffs = {}
    for n in Y.degrees():
        if n + 1 not in qs:
            continue
        q0, q1 = qs[n], qs[n + 1]
        cols = [q1.projection.apply(Y.d(n).apply(q0.lift(np.eye(q0.module.ngens, dtype=np.int64)[j]))) for j in range(q0.module.ngens)]
        diffs[n] = ModHom(q0.module, q1.module, vectors_to_csr(cols, q1.module.ngens))
    Z = Complex(mods, diffs, Y.k, window=meet(Y.window, u.source.window), check=True)
    proj = ChainMap(Y, Z, {n: q.projection for n, q in qs.items()}, check=True)
    return Z, proj


def is_quasi_iso(u: ChainMap, *, C: Cone | None = None) -> bool:
    """Cone criterion over the degrees where the cone's cohomology is trusted."""
    C = C or cone(u)
    return C.is_acyclic()


def induces_isomorphisms(u: ChainMap, degrees: Iterable[int] | None = None) -> bool:
    if degrees is None:
        w = meet(u.source.window, u.target.window)
        lo = min(u.source.lo, u.target.lo)
        hi = max(u.source.hi, u.target.hi)
        lo = lo if w[0] is None else max(lo, w[0])
        hi = hi if w[1] is None else min(hi, w[1])
        degrees = range(lo, hi + 1)
    return all(u.induced(n).is_isomorphism() for n in degrees)


def exact_sequence_check(
    name: str, groups: Sequence[tuple[str, FinMod]], maps: Sequence[ModHom]
) -> Verification:
    """Exactness at every interior term of ``G_0 -> G_1 -> ... -> G_m``."""
    rep = Verification(name)
    for t in range(1, len(groups) - 1):
        f, g = maps[t - 1], maps[t]
        ok = is_exact_at(f, g)
        detail = {}
        if not ok:
            detail = {
                "term": groups[t][0],
                "image": describe(f.image().module),
                "kernel": describe(g.kernel().module),
                "composite_zero": (g @ f).is_zero(),
            }
        rep.add(f"exact at {groups[t][0]}", ok, **detail)
    return rep


def triangle_les(
    name: str,
    A: Complex,
    B: Complex,
    C: Complex,
    a: ChainMap,
    b: ChainMap,
    c: Callable[[int], ModHom],
    degrees: range | None = None,
) -> Verification:
    """Exactness of ``H^r(A) -> H^r(B) -> H^r(C) -> H^(r+1)(A) -> ...``.

    ``c(r)`` is the degree-``r`` component ``C^r -> A^(r+1)`` of the third map.
    """
    if degrees is None:
        w = meet(A.window, B.window, C.window)
        lo = min(A.lo, B.lo, C.lo) - 1
        hi = max(A.hi, B.hi, C.hi) + 1
        lo = lo if w[0] is None else max(lo, w[0])
        hi = hi if w[1] is None else min(hi, w[1])
        degrees = range(lo, hi + 1)
    groups: list[tuple[str, FinMod]] = []
    maps: list[ModHom] = []
    for r in degrees:
        HA, HB, HC = A.cohomology_group(r), B.cohomology_group(r), C.cohomology_group(r)
        if groups:
            maps.append(induced_map(c(r - 1), C.cohomology_group(r - 1), HA))
        groups += [(f"H^{r}(A)", HA.module), (f"H^{r}(B)", HB.module), (f"H^{r}(C)", HC.module)]
        maps += [induced_map(a[r], HA, HB), induced_map(b[r], HB, HC)]
    if degrees and A.trusted(degrees[-1] + 1):
        r = degrees[-1] + 1
        HA = A.cohomology_group(r)
        maps.append(induced_map(c(r - 1), C.cohomology_group(r - 1), HA))
        groups.append((f"H^{r}(A)", HA.module))
    return exact_sequence_check(name, groups, maps)


def triangle_les_verify(u: ChainMap, *, C: Cone | None = None) -> Verification:
    """Long exact sequence of ``X -> Y -> Cone(u) -> X[1]``."""
    C = C or cone(u)
    j = C.inclusion()
    return triangle_les("triangle LES", u.source, u.target, C, u, j, lambda r: -C.projection(r))


@dataclass
class CompositeTriangle:
    Cu: Cone
    Cvu: Cone
    Cv: Cone
    a: ChainMap  # (v, id_X[1]): Cone(u) -> Cone(vu)
    b: ChainMap  # (id_Z, u[1]): Cone(vu) -> Cone(v)
    third: Callable[[int], ModHom]  # Cone(v)^r -> Cone(u)^(r+1), (z, y) -> (y, 0)


def composite_triangle_maps(u: ChainMap, v: ChainMap, *, Cu=None, Cvu=None, Cv=None) -> CompositeTriangle:
    X, Y, Z = u.source, u.target, v.target
    vu = v @ u
    Cu = Cu or cone(u)
    Cvu = Cvu or cone(vu)
    Cv = Cv or cone(v)
    a = cone_functorial(v, X.identity(), u, vu, Cu=Cu, Cv=Cvu)
    b = cone_functorial(Z.identity(), u, vu, v, Cu=Cvu, Cv=Cv)
    k = X.k

    def third(r: int) -> ModHom:
        rows = [Y.module(r + 1), X.module(r + 2)]
        cols = [Z.module(r), Y.module(r + 1)]
        return block_hom(rows, cols, {(0, 1): Y.module(r + 1).identity()}, k)

    return CompositeTriangle(Cu, Cvu, Cv, a, b, third)


def third_map_is_chain(T: CompositeTriangle) -> bool:
    """``Cone(v) -> Cone(u)[1]`` commutes with the differentials (the target carries ``-d``)."""
    Cv, Cu = T.Cv, T.Cu
    for r in range(Cv.lo - 1, Cv.hi + 1):
        lhs = -Cu.d(r + 1) @ T.third(r)
        rhs = T.third(r + 1) @ Cv.d(r)
        if not lhs == rhs:
            return False
    return True


def composite_cone_triangle(u: ChainMap, v: ChainMap) -> Verification:
    """Triangle ``Cone(u) -> Cone(vu) -> Cone(v) -> Cone(u)[1]`` and its exact sequence."""
    T = composite_triangle_maps(u, v)
    rep = Verification("composite cone triangle")
    rep.add("third map is a chain map", third_map_is_chain(T))
    rep.extend(triangle_les("LES", T.Cu, T.Cvu, T.Cv, T.a, T.b, T.third))
    return rep


@dataclass
class ConeSESMaps:
    q: ChainMap  # Cone(u) -> Z
    ell: ChainMap  # X -> Cone(v)[-1]
    Cu: Cone
    Cv1: Complex


def check_degreewise_exact(u: ChainMap, v: ChainMap) -> int | None:
    """First degree where ``0 -> X -> Y -> Z -> 0`` fails to be exact, else None."""
    X, Y, Z = u.source, u.target, v.target
    for n in range(min(X.lo, Y.lo, Z.lo), max(X.hi, Y.hi, Z.hi) + 1):
        if not (u[n].is_injective() and v[n].is_surjective() and is_exact_at(u[n], v[n])):
            return n
    return None


def ses_cone_maps(u: ChainMap, v: ChainMap) -> ConeSESMaps:
    """``q(y, x) = v(y)`` and ``l(x) = (0, u(x))`` for a short exact sequence."""
    bad = check_degreewise_exact(u, v)
    if bad is not None:
        raise ComplexError(f"sequence is not exact in degree {bad}")
    X, Y, Z = u.source, u.target, v.target
    k = X.k
    Cu = cone(u)
    Cv = cone(v)
    Cv1 = shift(Cv, -1)
    qmaps = {}
    for n in Cu.degrees():
        qmaps[n] = block_hom([Z.module(n)], [Y.module(n), X.module(n + 1)], {(0, 0): v[n]}, k)
    q = ChainMap(Cu, Z, qmaps, check=True, name="q")
    lmaps = {}
    for n in X.degrees():
        lmaps[n] = block_hom([Z.module(n - 1), Y.module(n)], [X.module(n)], {(1, 0): u[n]}, k)
    ell = ChainMap(X, Cv1, lmaps, check=True, name="l")
    return ConeSESMaps(q, ell, Cu, Cv1)


@dataclass
class Cube:
    """Commutative cube on ``C -f-> X -u-> Y`` over ``C -f1-> X1 -u1-> Y1``.

    Vertical maps are ``id_C``, ``v: X -> X1`` and ``vhat: Y -> Y1``; the
    other edges are the composites ``g = u f``, ``f1 = v f``, ``g1 = u1 f1``.
    """

    C: Complex
    X: Complex
    Y: Complex
    X1: Complex
    Y1: Complex
    f: ChainMap
    u: ChainMap
    v: ChainMap
    u1: ChainMap
    vhat: ChainMap
    f1: ChainMap | None = None

    def __post_init__(self):
        if self.f1 is None:
            self.f1 = self.v @ self.f

    def faces(self) -> dict[str, bool]:
        g = self.u @ self.f
        return {
            "left face v f = f1": (self.v @ self.f).equals(self.f1),
            "right face vhat u = u1 v": (self.vhat @ self.u).equals(self.u1 @ self.v),
        }


def cube_verify(cube: Cube) -> Verification:
    """Commutativity of the grid of cones built from a cube, plus exactness of its triangles."""
    rep = Verification("cube")
    for face, ok in cube.faces().items():
        if not ok:
            raise ComplexError(f"cube does not commute: {face}")
    C, X, Y, X1, Y1 = cube.C, cube.X, cube.Y, cube.X1, cube.Y1
    f, u, v, u1, vhat, f1 = cube.f, cube.u, cube.v, cube.u1, cube.vhat, cube.f1
    g = u @ f
    g1 = u1 @ f1
    idC = C.identity()

    Cf, Cg, Cu = cone(f), cone(g), cone(u)
    Cf1, Cg1, Cu1 = cone(f1), cone(g1), cone(u1)
    Cv, Cvh = cone(v), cone(vhat)

    row1 = composite_triangle_maps(f, u, Cu=Cf, Cvu=Cg, Cv=Cu)
    row2 = composite_triangle_maps(f1, u1, Cu=Cf1, Cvu=Cg1, Cv=Cu1)
    col1 = composite_triangle_maps(f, v, Cu=Cf, Cvu=Cf1, Cv=Cv)
    col2 = composite_triangle_maps(g, vhat, Cu=Cg, Cvu=Cg1, Cv=Cvh)

    down_f = cone_functorial(v, idC, f, f1, Cu=Cf, Cv=Cf1)
    down_g = cone_functorial(vhat, idC, g, g1, Cu=Cg, Cv=Cg1)
    down_u = cone_functorial(vhat, v, u, u1, Cu=Cu, Cv=Cu1)
    across_f1 = cone_functorial(u1, idC, f1, g1, Cu=Cf1, Cv=Cg1)
    across_v = cone_functorial(u1, u, v, vhat, Cu=Cv, Cv=Cvh)

    def commutes(name, P, Q, R, S, lo, hi):
        """``Q o P == S o R`` for degree maps ``P, Q, R, S`` (callables of n)."""
        for n in range(lo, hi + 1):
            if not (Q(n) @ P(n) == S(n) @ R(n)):
                rep.add(name, False, degree=n)
                return
        rep.add(name, True)

    lo = min(Z.lo for Z in (Cf, Cg, Cu, Cf1, Cg1, Cu1, Cv, Cvh)) - 1
    hi = max(Z.hi for Z in (Cf, Cg, Cu, Cf1, Cg1, Cu1, Cv, Cvh)) + 1
    at = lambda m: (lambda n: m[n])

    # rows 1 -> 2
    commutes("row square Cone(f)->Cone(g)", at(row1.a), at(down_g), at(down_f), at(row2.a), lo, hi)
    commutes("row square Cone(g)->Cone(u)", at(row1.b), at(down_u), at(down_g), at(row2.b), lo, hi)
    commutes(
        "row square Cone(u)->Cone(f)[1]", row1.third, lambda n: down_f[n + 1], at(down_u), row2.third, lo, hi
    )
    # columns 1 -> 2
    commutes("column square Cone(f)->Cone(f1)", at(col1.a), at(across_f1), at(row1.a), at(col2.a), lo, hi)
    commutes("column square Cone(f1)->Cone(v)", at(col1.b), at(across_v), at(across_f1), at(col2.b), lo, hi)
    commutes(
        "column square Cone(v)->Cone(f)[1]", col1.third, lambda n: row1.a[n + 1], at(across_v), col2.third, lo, hi
    )

    for label, T in (("row 1", row1), ("row 2", row2), ("column 1", col1), ("column 2", col2)):
        rep.add(f"{label} third map is a chain map", third_map_is_chain(T))
        rep.extend(triangle_les("LES", T.Cu, T.Cvu, T.Cv, T.a, T.b, T.third), prefix=label)
    return rep
