"""Finite modules over Z/2^k and their homomorphisms.

Every module is kept in diagonal form ``Z/2^a1 + ... + Z/2^an``; a general
presentation is reduced to this form by :meth:`FinMod.from_relations`.
Elements are integer vectors whose coordinate ``j`` is read mod ``2^aj``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp

from .linalg import Elimination, Vector, csr_cols, csr_rows, vectors_to_csr

MAX_K = 20


class AlgebraError(ValueError):
    pass


class NotWellDefined(AlgebraError):
    pass


@dataclass(frozen=True)
class DyadicRing:
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= MAX_K:
            raise AlgebraError(f"exponent k must lie in [1, {MAX_K}], got {self.k}")

    @property
    def modulus(self) -> int:
        return 1 << self.k

    def reduce(self, x: int) -> int:
        return x % self.modulus

    def valuation(self, x: int) -> int:
        x %= self.modulus
        return self.k if x == 0 else (x & -x).bit_length() - 1

    def is_unit(self, x: int) -> bool:
        return x % 2 == 1

    def inverse(self, x: int) -> int:
        return pow(x % self.modulus, -1, self.modulus)

    def power(self, x: int, n: int) -> int:
        if n < 0:
            return pow(self.inverse(x), -n, self.modulus)
        return pow(x, n, self.modulus)


def reduce_rows(mat, exps: Sequence[int]) -> sp.csr_array:
    """Reduce row ``i`` of ``mat`` modulo ``2^exps[i]``."""
    mat = sp.csr_array(mat, dtype=np.int64)
    if mat.nnz:
        mods = np.left_shift(1, np.asarray(exps, dtype=np.int64))
        row_of = np.repeat(np.arange(mat.shape[0]), np.diff(mat.indptr))
        mat.data %= mods[row_of]
        mat.eliminate_zeros()
    return mat


def reduce_vector(vec: Vector, exps: Sequence[int]) -> Vector:
    out = {}
    for i, x in vec.items():
        x %= 1 << exps[i]
        if x:
            out[i] = x
    return out


@dataclass(frozen=True)
class FinMod:
    """``Z/2^a1 + ... + Z/2^an`` over Z/2^k."""

    exps: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "exps", tuple(int(a) for a in self.exps))
        if not 1 <= self.k <= MAX_K:
            raise AlgebraError(f"exponent k must lie in [1, {MAX_K}], got {self.k}")
        for a in self.exps:
            if not 1 <= a <= self.k:
                raise AlgebraError(f"generator exponent {a} outside [1, {self.k}]")

    @classmethod
    def zero(cls, k: int) -> "FinMod":
        return cls((), k)

    @classmethod
    def cyclic(cls, a: int, k: int) -> "FinMod":
        return cls((a,), k) if a else cls((), k)

    @classmethod
    def free(cls, n: int, k: int) -> "FinMod":
        return cls((k,) * n, k)

    @classmethod
    def from_orders(cls, orders: Iterable[int], k: int) -> "FinMod":
        exps = []
        for o in orders:
            o = int(o)
            if o < 1 or o & (o - 1):
                raise AlgebraError(f"order {o} is not a power of two")
            if o > 1:
                exps.append(o.bit_length() - 1)
        return cls(tuple(exps), k)

    @classmethod
    def from_relations(cls, ngens: int, relations, k: int) -> "Presentation":
        """Canonical form of ``Z^ngens / (relation columns + 2^k)``."""
        free = cls.free(ngens, k)
        rel = sp.csr_array(np.asarray(relations, dtype=np.int64).reshape(ngens, -1))
        sq = Subquotient(free, denominator=rel)
        proj = ModHom(free, sq.module, sq.projection_matrix())
        lift = [sq.representative(j) for j in range(sq.module.ngens)]
        return Presentation(sq.module, proj, lift)

    @property
    def ngens(self) -> int:
        return len(self.exps)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(1 << a for a in self.exps)

    @property
    def log2_size(self) -> int:
        return sum(self.exps)

    @property
    def size(self) -> int:
        return 1 << self.log2_size

    @property
    def is_zero(self) -> bool:
        return not self.exps

    @property
    def exponent(self) -> int:
        return max(self.exps, default=0)

    @property
    def relations(self) -> np.ndarray:
        return np.diag([1 << a for a in self.exps]).astype(np.int64) % (1 << self.k)

    def invariant_factors(self) -> list[int]:
        return sorted(self.orders, reverse=True)

    def is_isomorphic(self, other: "FinMod") -> bool:
        return self.k == other.k and self.invariant_factors() == other.invariant_factors()

    def __add__(self, other: "FinMod") -> "FinMod":
        return direct_sum([self, other])

    def __pow__(self, n: int) -> "FinMod":
        return FinMod(self.exps * n, self.k)

    def reduce(self, vec) -> np.ndarray:
        return np.asarray(vec, dtype=np.int64) % np.asarray(self.orders, dtype=np.int64)

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(o) for o in self.orders))

    def random_element(self, rng) -> list[int]:
        return [rng.randrange(o) for o in self.orders]

    def identity(self) -> "ModHom":
        return ModHom(self, self, sp.identity(self.ngens, dtype=np.int64, format="csr"), check=False)

    def __repr__(self) -> str:
        return f"FinMod({describe(self)}, k={self.k})"


def describe(M: FinMod) -> str:
    if M.is_zero:
        return "0"
    return " + ".join(f"Z/{o}" for o in M.invariant_factors())


def direct_sum(mods: Sequence[FinMod], k: int | None = None) -> FinMod:
    if not mods:
        if k is None:
            raise AlgebraError("empty direct sum needs k")
        return FinMod.zero(k)
    ks = {m.k for m in mods}
    if len(ks) != 1:
        raise AlgebraError("direct sum of modules over different rings")
    return FinMod(tuple(a for m in mods for a in m.exps), ks.pop())


class Presentation(NamedTuple):
    module: FinMod
    projection: "ModHom"
    lift: list[Vector]


DENSE_LIMIT = 40_000  # matrices with at most this many entries are kept dense


def _as_int_matrix(matrix, shape: tuple[int, int]):
    if sp.issparse(matrix):
        mat = sp.csr_array(matrix, dtype=np.int64)
        if mat.shape != shape:
            raise AlgebraError(f"matrix shape {mat.shape} does not match {shape[0]}x{shape[1]}")
        if shape[0] * shape[1] <= DENSE_LIMIT:
            return mat.toarray()
        return mat
    mat = np.asarray(matrix, dtype=np.int64)
    if mat.size != shape[0] * shape[1]:
        raise AlgebraError(f"matrix shape {mat.shape} does not match {shape[0]}x{shape[1]}")
    mat = mat.reshape(shape)
    if shape[0] * shape[1] > DENSE_LIMIT:
        return sp.csr_array(mat)
    return mat


def _reduce(mat, exps: Sequence[int]):
    if isinstance(mat, np.ndarray):
        mods = np.left_shift(1, np.asarray(exps, dtype=np.int64))
        return mat % mods[:, None] if mat.size else mat
    return reduce_rows(mat, exps)


class ModHom:
    """Homomorphism between diagonal modules.

    The matrix is dense for small shapes and CSR otherwise; ``raw`` gives
    whichever is stored, ``matrix`` always a CSR array.
    """

    __slots__ = ("domain", "codomain", "raw", "__dict__")

    def __init__(self, domain: FinMod, codomain: FinMod, matrix, *, check: bool = True):
        if domain.k != codomain.k:
            raise AlgebraError("hom between modules over different rings")
        self.domain = domain
        self.codomain = codomain
        self.raw = _reduce(_as_int_matrix(matrix, (codomain.ngens, domain.ngens)), codomain.exps)
        if check:
            self._check_well_defined()

    @property
    def is_dense(self) -> bool:
        return isinstance(self.raw, np.ndarray)

    @cached_property
    def matrix(self) -> sp.csr_array:
        if self.is_dense:
            return sp.csr_array(self.raw)
        return self.raw

    def _check_well_defined(self):
        if self.is_zero() or not self.domain.ngens:
            return
        scale = np.left_shift(1, np.asarray(self.domain.exps, dtype=np.int64))
        if self.is_dense:
            test = _reduce(self.raw * scale[None, :], self.codomain.exps)
            bad = np.argwhere(test)
        else:
            test = reduce_rows(self.raw.multiply(scale[None, :]), self.codomain.exps)
            bad = np.transpose(test.nonzero())
        if len(bad):
            r, c = bad[0]
            raise NotWellDefined(
                f"generator {c} of order 2^{self.domain.exps[c]} maps to an element "
                f"not killed by that order (coordinate {r})"
            )

    @classmethod
    def zero(cls, domain: FinMod, codomain: FinMod) -> "ModHom":
        shape = (codomain.ngens, domain.ngens)
        if shape[0] * shape[1] > DENSE_LIMIT:
            return cls(domain, codomain, sp.csr_array(shape, dtype=np.int64), check=False)
        return cls(domain, codomain, np.zeros(shape, dtype=np.int64), check=False)

    @classmethod
    def identity(cls, M: FinMod) -> "ModHom":
        return M.identity()

    @classmethod
    def scalar(cls, M: FinMod, c: int) -> "ModHom":
        return cls(M, M, sp.identity(M.ngens, dtype=np.int64, format="csr") * int(c), check=False)

    def dense(self) -> np.ndarray:
        return self.raw.copy() if self.is_dense else self.raw.toarray()

    def __call__(self, vec) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64)
        return self.codomain.reduce(self.raw @ v)

    @cached_property
    def _columns(self) -> dict[int, list[tuple[int, int]]]:
        if self.is_dense:
            r, c = np.nonzero(self.raw)
            vals = self.raw[r, c].tolist()
            cols: dict[int, list[tuple[int, int]]] = {}
            for i, j, x in zip(r.tolist(), c.tolist(), vals):
                cols.setdefault(j, []).append((i, x))
            return cols
        mat = self.raw.tocsc()
        cols = {}
        for j in range(mat.shape[1]):
            lo, hi = mat.indptr[j], mat.indptr[j + 1]
            if lo < hi:
                cols[j] = list(zip(mat.indices[lo:hi].tolist(), mat.data[lo:hi].tolist()))
        return cols

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        cols = self._columns
        for j, x in vec.items():
            for i, y in cols.get(j, ()):
                out[i] = out.get(i, 0) + y * x
        return reduce_vector(out, self.codomain.exps)

    def _wrap(self, mat, domain=None, codomain=None) -> "ModHom":
        return ModHom(
            self.domain if domain is None else domain,
            self.codomain if codomain is None else codomain,
            mat,
            check=False,
        )

    def _pair(self, other: "ModHom"):
        if self.is_dense and other.is_dense:
            return self.raw, other.raw
        return self.matrix, other.matrix

    def __matmul__(self, other: "ModHom") -> "ModHom":
        if other.codomain != self.domain:
            raise AlgebraError("composition of non-composable homs")
        a, b = self._pair(other)
        return self._wrap(a @ b, other.domain, self.codomain)

    def __add__(self, other: "ModHom") -> "ModHom":
        self._same_shape(other)
        a, b = self._pair(other)
        return self._wrap(a + b)

    def __sub__(self, other: "ModHom") -> "ModHom":
        self._same_shape(other)
        a, b = self._pair(other)
        return self._wrap(a - b)

    def __neg__(self) -> "ModHom":
        return self._wrap(-self.raw)

    def __mul__(self, c: int) -> "ModHom":
        return self._wrap(self.raw * int(c))

    __rmul__ = __mul__

    def _same_shape(self, other: "ModHom"):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise AlgebraError("homs have different domain or codomain")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModHom):
            return NotImplemented
        if self.domain != other.domain or self.codomain != other.codomain:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        if self.is_dense:
            return not self.raw.any()
        return self.raw.nnz == 0

    def scaled_rows(self, scale: np.ndarray):
        """``diag(scale) @ matrix`` without reduction (dense or CSR)."""
        if self.is_dense:
            return self.raw * scale[:, None]
        return sp.csr_array(self.raw.multiply(scale[:, None]))

    def __repr__(self) -> str:
        return f"ModHom({describe(self.domain)} -> {describe(self.codomain)})"

    @cached_property
    def _kernel_sq(self) -> "Subquotient":
        return Subquotient(self.domain, kernel_of=self)

    def kernel(self) -> "Submodule":
        sq = self._kernel_sq
        return Submodule(self.domain, [sq.representative(j) for j in range(sq.module.ngens)], _sq=sq)

    def image(self) -> "Submodule":
        cols = csr_cols(self.raw)
        return Submodule(self.codomain, [cols.get(j, {}) for j in range(self.domain.ngens)])

    def cokernel(self) -> "Quotient":
        return Quotient(self.codomain, self.raw)

    def is_injective(self) -> bool:
        return self._kernel_sq.module.is_zero

    def is_surjective(self) -> bool:
        return self.image().module.log2_size == self.codomain.log2_size

    def is_isomorphism(self) -> bool:
        return self.domain.log2_size == self.codomain.log2_size and self.is_injective()

    def inverse(self) -> "ModHom":
        if not self.is_isomorphism():
            raise AlgebraError("hom is not an isomorphism")
        img = self.image()
        cols = [img.preimage({i: 1}) for i in range(self.codomain.ngens)]
        return ModHom(self.codomain, self.domain, vectors_to_csr(cols, self.domain.ngens))

    def restrict(self, source: "Submodule", target: "Submodule") -> "ModHom":
        """Induced hom ``source -> target`` between canonical forms."""
        if source.ambient != self.domain or target.ambient != self.codomain:
            raise AlgebraError("submodules do not sit in the hom's domain/codomain")
        cols = []
        for j in range(source.module.ngens):
            img = self.apply(source.representative(j))
            c = target.coords(img)
            if c is None:
                raise AlgebraError("hom does not map the source submodule into the target")
            cols.append(c)
        return ModHom(source.module, target.module, _coords_matrix(cols, target.module.ngens))


def _coords_matrix(cols: list[list[int]], nrows: int) -> np.ndarray:
    dense = np.zeros((nrows, len(cols)), dtype=np.int64)
    for j, c in enumerate(cols):
        dense[:, j] = c
    return dense


def block_hom(rows: Sequence[FinMod], cols: Sequence[FinMod], blocks: dict, k: int | None = None) -> ModHom:
    """Hom ``sum(cols) -> sum(rows)`` from blocks ``{(r, c): ModHom}``."""
    if k is None:
        k = (list(rows) + list(cols))[0].k
    codomain = direct_sum(list(rows), k)
    domain = direct_sum(list(cols), k)
    roff = np.cumsum([0] + [m.ngens for m in rows])
    coff = np.cumsum([0] + [m.ngens for m in cols])
    shape = (codomain.ngens, domain.ngens)
    blocks = {rc: h for rc, h in blocks.items() if h is not None}
    for (r, c), h in blocks.items():
        if h.codomain != rows[r] or h.domain != cols[c]:
            raise AlgebraError(f"block ({r},{c}) has the wrong shape")
    if shape[0] * shape[1] <= DENSE_LIMIT:
        mat = np.zeros(shape, dtype=np.int64)
        for (r, c), h in blocks.items():
            mat[roff[r] : roff[r + 1], coff[c] : coff[c + 1]] = h.dense()
        return ModHom(domain, codomain, mat, check=False)
    rr, cc, vv = [], [], []
    for (r, c), h in blocks.items():
        m = h.matrix.tocoo()
        rr.append(m.row + roff[r])
        cc.append(m.col + coff[c])
        vv.append(m.data)
    if rr:
        mat = sp.csr_array((np.concatenate(vv), (np.concatenate(rr), np.concatenate(cc))), shape=shape)
    else:
        mat = sp.csr_array(shape, dtype=np.int64)
    return ModHom(domain, codomain, mat, check=False)


class Subquotient:
    """Canonical diagonal form of ``N / D`` for ``D <= N <= C``.

    ``D`` is spanned by the columns of ``denominator`` (plus the relations of
    ``C``).  ``N`` is either spanned by ``numerator`` columns, or is the
    kernel of the hom ``kernel_of`` out of ``C``, or is all of ``C``.
    """

    def __init__(self, ambient: FinMod, *, denominator=None, numerator=None, kernel_of: ModHom | None = None):
        self.ambient = ambient
        k = ambient.k
        out_exps = kernel_of.codomain.exps if kernel_of is not None else ()
        e = max(max(ambient.exps, default=0), max(out_exps, default=0))
        self.e = e
        if ambient.is_zero or e == 0:
            self._trivial()
            return
        c = ambient.ngens
        rows: dict[int, dict[int, int]] = {}
        m = 0
        if denominator is not None:
            den = denominator if isinstance(denominator, np.ndarray) else sp.csr_array(denominator, dtype=np.int64)
            if den.shape[0] != c:
                raise AlgebraError("denominator has the wrong number of rows")
            rows = csr_rows(den)
            m = den.shape[1]
        for j, a in enumerate(ambient.exps):
            if a < e:
                rows.setdefault(j, {})[m + j] = 1 << a
        self._el1 = el1 = Elimination(rows, m + c, e, nrows=c, track_cols=False)
        pivot_val = {p: v for p, _, v in el1.pivots}
        coords = []
        for i in range(c):
            v = pivot_val.get(i, e)
            if v > 0:
                coords.append((i, v))
        self._R = [i for i, _ in coords]
        self._w = [v for _, v in coords]
        self._pos = {i: r for r, i in enumerate(self._R)}

        if kernel_of is not None:
            if kernel_of.domain != ambient:
                raise AlgebraError("kernel_of must start at the ambient module")
            scale = np.left_shift(1, e - np.asarray(kernel_of.codomain.exps, dtype=np.int64))
            Bs = kernel_of.scaled_rows(scale)
            bcols = el1.right_inverse_transform(csr_cols(Bs))
            brows: dict[int, dict[int, int]] = {}
            for i, col in bcols.items():
                r = self._pos.get(i)
                if r is None:
                    if col:
                        raise AlgebraError("denominator is not contained in the kernel")
                    continue
                for o, x in col.items():
                    brows.setdefault(o, {})[r] = x
            el2 = Elimination(brows, len(self._R), e, track_cols=True)
            K = [self._reduce_q(g) for g in el2.kernel()]
        elif numerator is not None:
            num = numerator if isinstance(numerator, np.ndarray) else sp.csr_array(numerator, dtype=np.int64)
            K = []
            for col in (csr_cols(num).get(j, {}) for j in range(num.shape[1])):
                K.append(self._to_q(col))
        else:
            K = [{r: 1} for r in range(len(self._R))]
        K = [g for g in K if g]
        self._K = K
        wrows: dict[int, dict[int, int]] = {}
        for t, g in enumerate(K):
            for r, x in g.items():
                y = (x << (e - self._w[r])) & ((1 << e) - 1)
                if y:
                    wrows.setdefault(r, {})[t] = y
        self._el3 = el3 = Elimination(wrows, len(K), e, nrows=len(self._R), track_cols=True)
        self.module = FinMod(tuple(e - v for _, _, v in el3.pivots), k)
        self._reps: dict[int, Vector] = {}

    def _trivial(self):
        self.module = FinMod.zero(self.ambient.k)
        self._el1 = None

    def _reduce_q(self, g: Vector) -> Vector:
        return {r: x % (1 << self._w[r]) for r, x in g.items() if x % (1 << self._w[r])}

    def _to_q(self, vec: Vector) -> Vector:
        y = self._el1.apply_rows(vec)
        out = {}
        for i, x in y.items():
            r = self._pos.get(i)
            if r is not None:
                x %= 1 << self._w[r]
                if x:
                    out[r] = x
        return out

    def representative(self, j: int) -> Vector:
        """An element of ``N`` mapping to canonical generator ``j``."""
        if j not in self._reps:
            _, q, _ = self._el3.pivots[j]
            combo = self._el3.v_column(q)
            mask = (1 << self.e) - 1
            y: Vector = {}
            for t, c in combo.items():
                for r, x in self._K[t].items():
                    y[r] = (y.get(r, 0) + c * x) & mask
            full = {self._R[r]: x for r, x in y.items() if x}
            self._reps[j] = reduce_vector(self._el1.apply_rows_inverse(full), self.ambient.exps)
        return dict(self._reps[j])

    def lift(self, coords: Sequence[int]) -> Vector:
        out: Vector = {}
        for j, c in enumerate(coords):
            if c:
                for i, x in self.representative(j).items():
                    out[i] = out.get(i, 0) + c * x
        return reduce_vector(out, self.ambient.exps)

    def classify(self, vec: Vector) -> list[int] | None:
        """Canonical coordinates of the class of ``vec``, or None if ``vec`` is not in ``N``."""
        if self._el1 is None:
            return []
        e = self.e
        mask = (1 << e) - 1
        q = self._to_q(vec)
        w = {}
        for r, x in q.items():
            y = (x << (e - self._w[r])) & mask
            if y:
                w[r] = y
        w2 = self._el3.apply_rows(w)
        coords = []
        for p, _, v in self._el3.pivots:
            x = w2.pop(p, 0)
            if x & ((1 << v) - 1):
                return None
            coords.append((x >> v) % (1 << (e - v)))
        if w2:
            return None
        return coords

    def projection_matrix(self) -> np.ndarray:
        """Matrix of ``C -> N/D``; only meaningful when ``N = C``."""
        cols = []
        for j in range(self.ambient.ngens):
            c = self.classify({j: 1})
            if c is None:
                raise AlgebraError("ambient generator outside the numerator")
            cols.append(c)
        return _coords_matrix(cols, self.module.ngens)


class Submodule:
    """Submodule of ``ambient`` spanned by generator vectors."""

    def __init__(self, ambient: FinMod, gens, *, _sq: Subquotient | None = None):
        self.ambient = ambient
        if sp.issparse(gens):
            cols = csr_cols(gens)
            gens = [cols.get(j, {}) for j in range(gens.shape[1])]
        vecs = []
        for g in gens:
            if isinstance(g, dict):
                vecs.append(reduce_vector(g, ambient.exps))
            else:
                arr = ambient.reduce(g)
                vecs.append({i: int(x) for i, x in enumerate(arr) if x})
        self.gens = [g for g in vecs if g]
        self._sq = _sq

    @property
    def sq(self) -> Subquotient:
        if self._sq is None:
            self._sq = Subquotient(self.ambient, numerator=self.gen_matrix())
        return self._sq

    @property
    def module(self) -> FinMod:
        return self.sq.module

    def gen_matrix(self) -> sp.csr_array:
        return vectors_to_csr(self.gens, self.ambient.ngens)

    @property
    def size(self) -> int:
        return self.module.size

    def representative(self, j: int) -> Vector:
        return self.sq.representative(j)

    def coords(self, vec: Vector) -> list[int] | None:
        return self.sq.classify(vec)

    def contains(self, vec) -> bool:
        if not isinstance(vec, dict):
            vec = {i: int(x) for i, x in enumerate(vec) if x}
        return self.sq.classify(vec) is not None

    def __contains__(self, vec) -> bool:
        return self.contains(vec)

    def preimage(self, vec: Vector) -> Vector:
        """Coefficients on ``self.gens`` producing ``vec`` (for image submodules)."""
        coords = self.coords(vec)
        if coords is None:
            raise AlgebraError("element not in submodule")
        out: Vector = {}
        for j, c in enumerate(coords):
            if c:
                for i, x in self._gen_combo(j).items():
                    out[i] = out.get(i, 0) + c * x
        return out

    def _gen_combo(self, j: int) -> Vector:
        sq = self.sq
        _, q, _ = sq._el3.pivots[j]
        # numerator columns were kept in order with zero columns dropped
        alive = [t for t, g in enumerate(self.gens) if sq._to_q(g)]
        combo = sq._el3.v_column(q)
        return {alive[t]: c for t, c in combo.items()}

    def inclusion(self) -> ModHom:
        cols = [self.representative(j) for j in range(self.module.ngens)]
        return ModHom(self.module, self.ambient, vectors_to_csr(cols, self.ambient.ngens))

    def __le__(self, other: "Submodule") -> bool:
        _same_ambient(self, other)
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.ambient == other.ambient and self <= other and other <= self

    __hash__ = None

    def quotient(self, sub: "Submodule") -> "Subquotient":
        """Canonical form of ``self / sub`` (``sub`` must lie inside ``self``)."""
        _same_ambient(self, sub)
        if not sub <= self:
            raise AlgebraError("quotient by a submodule that is not contained")
        return Subquotient(self.ambient, numerator=self.gen_matrix(), denominator=sub.gen_matrix())

    def __repr__(self) -> str:
        return f"Submodule({describe(self.module)} in {describe(self.ambient)})"


def _same_ambient(a: Submodule, b: Submodule):
    if a.ambient != b.ambient:
        raise AlgebraError("submodules live in different modules")


class Quotient:
    """``ambient / span(columns)`` with its projection."""

    def __init__(self, ambient: FinMod, relations):
        self.ambient = ambient
        self.sq = Subquotient(ambient, denominator=relations)
        self.module = self.sq.module
        self.projection = ModHom(ambient, self.module, self.sq.projection_matrix())

    def lift(self, coords: Sequence[int]) -> Vector:
        return self.sq.lift(coords)


def hom_parts(h: ModHom) -> tuple[Submodule, Submodule, FinMod]:
    return h.kernel(), h.image(), h.cokernel().module


def invariant_factors(M: FinMod) -> list[int]:
    return M.invariant_factors()


def is_exact_at(f: ModHom, g: ModHom) -> bool:
    """Whether ``im f = ker g`` inside ``codomain(f) = domain(g)``."""
    if f.codomain != g.domain:
        raise AlgebraError("is_exact_at needs codomain(f) == domain(g)")
    if not (g @ f).is_zero():
        return False
    img = f.image()
    return all(img.contains(x) for x in g.kernel().gens)


def intersect(S1: Submodule, S2: Submodule) -> Submodule:
    _same_ambient(S1, S2)
    M = S1.ambient
    if not S1.gens or not S2.gens:
        return Submodule(M, [])
    e = M.exponent
    scale = np.left_shift(1, e - np.asarray(M.exps, dtype=np.int64))
    G1 = S1.gen_matrix()
    G2 = S2.gen_matrix()
    A = sp.hstack([G1, -G2]).tocsr()
    A = sp.csr_array(A.multiply(scale[:, None]))
    el = Elimination.of(A, e)
    gens = []
    t1 = G1.shape[1]
    for y in el.kernel():
        y1 = {j: x for j, x in y.items() if j < t1}
        vec: Vector = {}
        for j, c in y1.items():
            for i, x in S1.gens[j].items():
                vec[i] = vec.get(i, 0) + c * x
        gens.append(vec)
    return Submodule(M, gens)


def pontryagin_dual(M: FinMod) -> FinMod:
    """``Hom(M, Z/2^k)``; its generator ``j`` sends ``e_j`` to ``2^(k - a_j)``."""
    return FinMod(M.exps, M.k)


def dual_hom(h: ModHom) -> ModHom:
    """``h^v : B^v -> A^v``, ``phi -> phi o h``."""
    A, B = h.domain, h.codomain
    m = h.matrix.tocoo()
    a = np.asarray(A.exps, dtype=np.int64)[m.col] if m.nnz else np.zeros(0, dtype=np.int64)
    b = np.asarray(B.exps, dtype=np.int64)[m.row] if m.nnz else np.zeros(0, dtype=np.int64)
    shift = a - b
    data = m.data.copy()
    up = shift >= 0
    data[up] = data[up] << shift[up]
    down = ~up
    if np.any(data[down] % (np.left_shift(1, -shift[down]))):
        raise NotWellDefined("hom is not well defined; cannot dualize")
    data[down] = data[down] >> (-shift[down])
    mat = sp.csr_array((data, (m.col, m.row)), shape=(A.ngens, B.ngens))
    return ModHom(pontryagin_dual(B), pontryagin_dual(A), mat)


def evaluation_map(M: FinMod) -> ModHom:
    """``M -> M^vv``, ``m -> (phi -> phi(m))``, computed entrywise from the pairing."""
    k = M.k
    n = M.ngens
    dual = pontryagin_dual(M)
    mat = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        for l in range(n):
            # phi_l(e_j) in Z/2^k
            value = (1 << (k - M.exps[l])) if j == l else 0
            # coefficient of the double-dual generator psi_l (psi_l(phi_l) = 2^(k - a_l))
            mat[l, j] = value >> (k - dual.exps[l])
    return ModHom(M, pontryagin_dual(dual), mat)


def pairing_value(M: FinMod, phi: Sequence[int], m: Sequence[int]) -> int:
    """``phi(m)`` in Z/2^k for ``phi`` in ``M^v`` written in the dual basis."""
    k = M.k
    return sum(int(p) * int(x) << (k - a) for p, x, a in zip(phi, m, M.exps)) % (1 << k)
