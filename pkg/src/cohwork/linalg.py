"""Sparse elimination over the local ring Z/2^k.

Matrices are handled as dict-of-rows ``{i: {j: value}}`` with values kept in
``[0, 2^k)``.  Every entry of Z/2^k is ``2^v * unit``; a pivot of minimal
valuation divides everything in its row and column, which is what makes the
Smith normal form exist over this ring.

Pivots are taken in valuation phases (all units first, then entries of
valuation 1, ...).  Inside a phase, short rows are visited first and the
pivot column is the one with the fewest entries, which keeps fill-in low on
the bar-complex differentials this package produces.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np
import scipy.sparse as sp

Vector = dict  # sparse vector {index: value}


def csr_rows(mat) -> dict[int, dict[int, int]]:
    """Row dict of a dense or sparse matrix."""
    if isinstance(mat, np.ndarray):
        rows: dict[int, dict[int, int]] = {}
        r, c = np.nonzero(mat)
        for i, j, x in zip(r.tolist(), c.tolist(), mat[r, c].tolist()):
            rows.setdefault(i, {})[j] = x
        return rows
    mat = sp.csr_array(mat)
    rows: dict[int, dict[int, int]] = {}
    indptr, indices, data = mat.indptr, mat.indices, mat.data
    for i in range(mat.shape[0]):
        lo, hi = indptr[i], indptr[i + 1]
        if lo == hi:
            continue
        row = {int(j): int(x) for j, x in zip(indices[lo:hi], data[lo:hi]) if x}
        if row:
            rows[i] = row
    return rows


def csr_cols(mat) -> dict[int, dict[int, int]]:
    if isinstance(mat, np.ndarray):
        return csr_rows(mat.T)
    return csr_rows(sp.csr_array(mat).T)


def cols_to_csr(cols: dict[int, dict[int, int]], shape: tuple[int, int]) -> sp.csr_array:
    r, c, v = [], [], []
    for j, col in cols.items():
        for i, x in col.items():
            if x:
                r.append(i)
                c.append(j)
                v.append(x)
    return sp.csr_array(
        (np.asarray(v, dtype=np.int64), (np.asarray(r, dtype=np.int64), np.asarray(c, dtype=np.int64))),
        shape=shape,
    )


def vectors_to_csr(vectors: list[Vector], nrows: int) -> sp.csr_array:
    """Stack sparse vectors as the columns of a matrix."""
    return cols_to_csr(dict(enumerate(vectors)), (nrows, len(vectors)))


def valuation(x: int, k: int) -> int:
    x %= 1 << k
    if x == 0:
        return k
    return (x & -x).bit_length() - 1


class Elimination:
    """Two-sided reduction ``U A V = D`` of a sparse matrix mod 2^k.

    Only the operations are stored.  ``U`` is replayed on vectors with
    :meth:`apply_rows` / :meth:`apply_rows_inverse`; ``V`` is materialized
    column by column on demand.
    """

    def __init__(
        self,
        rows: dict[int, dict[int, int]],
        ncols: int,
        k: int,
        *,
        nrows: int | None = None,
        track_cols: bool = True,
    ):
        self.k = k
        self.ncols = ncols
        self.nrows = nrows
        modulus = 1 << k
        mask = modulus - 1
        work = {}
        for i, r in rows.items():
            r = {j: x & mask for j, x in r.items() if x & mask}
            if r:
                work[i] = r
        cols: dict[int, set[int]] = defaultdict(set)
        for i, r in work.items():
            for j in r:
                cols[j].add(i)

        pivots: list[tuple[int, int, int]] = []
        row_ops: list[tuple[int, int, list[tuple[int, int]]]] = []
        col_ops: list[tuple[int, list[tuple[int, int]]]] = []

        for v in range(k):
            if not work:
                break
            found = True
            while found and work:
                found = False
                order = sorted(work, key=lambda i: (len(work[i]), i))
                for p in order:
                    rp = work.get(p)
                    if rp is None:
                        continue
                    best = None
                    for j, x in rp.items():
                        if (x >> v) & 1:
                            key = (len(cols[j]), j)
                            if best is None or key < best[0]:
                                best = (key, j)
                    if best is None:
                        continue
                    found = True
                    q = best[1]
                    unit = rp[q] >> v
                    uinv = pow(unit, -1, modulus) if unit != 1 else 1
                    if uinv != 1:
                        for j in rp:
                            rp[j] = (rp[j] * uinv) & mask
                    ops = []
                    for i in sorted(cols[q]):
                        if i == p:
                            continue
                        ri = work[i]
                        c = ri[q] >> v
                        for j, x in rp.items():
                            y = (ri.get(j, 0) - c * x) & mask
                            if y:
                                if j not in ri:
                                    cols[j].add(i)
                                ri[j] = y
                            elif j in ri:
                                del ri[j]
                                cols[j].discard(i)
                        ops.append((i, c))
                        if not ri:
                            del work[i]
                    row_ops.append((p, uinv, ops))
                    del work[p]
                    for j in rp:
                        cols[j].discard(p)
                    if track_cols:
                        col_ops.append((q, [(j, x >> v) for j, x in rp.items() if j != q]))
                    pivots.append((p, q, v))
        assert not work, "elimination left nonzero entries"
        self.pivots = pivots
        self.row_ops = row_ops
        self.col_ops = col_ops
        self._track_cols = track_cols
        self._vcols: dict[int, dict[int, int]] | None = None

    @classmethod
    def of(cls, mat, k: int, **kw) -> "Elimination":
        mat = sp.csr_array(mat)
        return cls(csr_rows(mat), mat.shape[1], k, nrows=mat.shape[0], **kw)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def diagonal(self) -> list[int]:
        return [1 << v for _, _, v in self.pivots]

    def apply_rows(self, b: Vector) -> Vector:
        """Return ``U b``."""
        mask = (1 << self.k) - 1
        b = {i: x & mask for i, x in b.items() if x & mask}
        for p, s, ops in self.row_ops:
            x = b.get(p)
            if not x:
                continue
            if s != 1:
                x = (x * s) & mask
                b[p] = x
            for i, c in ops:
                y = (b.get(i, 0) - c * x) & mask
                if y:
                    b[i] = y
                else:
                    b.pop(i, None)
        return b

    def apply_rows_inverse(self, b: Vector) -> Vector:
        """Return ``U^-1 b``."""
        modulus = 1 << self.k
        mask = modulus - 1
        b = {i: x & mask for i, x in b.items() if x & mask}
        for p, s, ops in reversed(self.row_ops):
            x = b.get(p)
            if not x:
                continue
            for i, c in ops:
                y = (b.get(i, 0) + c * x) & mask
                if y:
                    b[i] = y
                else:
                    b.pop(i, None)
            if s != 1:
                b[p] = (x * pow(s, -1, modulus)) & mask
        return b

    def right_inverse_transform(self, cols: dict[int, dict[int, int]]) -> dict[int, dict[int, int]]:
        """Return ``B U^-1`` for ``B`` given column-wise (columns indexed like rows of A)."""
        modulus = 1 << self.k
        mask = modulus - 1
        cols = {j: dict(c) for j, c in cols.items() if c}
        for p, s, ops in self.row_ops:
            col = cols.get(p, {})
            if s != 1:
                sinv = pow(s, -1, modulus)
                col = {i: (x * sinv) & mask for i, x in col.items()}
            for i, c in ops:
                other = cols.get(i)
                if not other:
                    continue
                for r, x in other.items():
                    y = (col.get(r, 0) + c * x) & mask
                    if y:
                        col[r] = y
                    else:
                        col.pop(r, None)
            if col:
                cols[p] = col
            else:
                cols.pop(p, None)
        return cols

    def v_columns(self) -> dict[int, dict[int, int]]:
        """Columns of ``V`` that differ from the identity."""
        if not self._track_cols:
            raise RuntimeError("column operations were not tracked")
        if self._vcols is None:
            mask = (1 << self.k) - 1
            vcols: dict[int, dict[int, int]] = {}
            for q, ops in self.col_ops:
                colq = vcols.get(q, {q: 1})
                for j, e in ops:
                    colj = vcols.setdefault(j, {j: 1})
                    for r, x in colq.items():
                        y = (colj.get(r, 0) - e * x) & mask
                        if y:
                            colj[r] = y
                        else:
                            colj.pop(r, None)
            self._vcols = vcols
        return self._vcols

    def v_column(self, j: int) -> Vector:
        return dict(self.v_columns().get(j, {j: 1}))

    def apply_v(self, y: Vector) -> Vector:
        mask = (1 << self.k) - 1
        out: Vector = {}
        for q, c in y.items():
            if not c:
                continue
            for r, x in self.v_columns().get(q, {q: 1}).items():
                z = (out.get(r, 0) + c * x) & mask
                if z:
                    out[r] = z
                else:
                    out.pop(r, None)
        return out

    def kernel(self) -> list[Vector]:
        """Generators of ``{x : A x = 0}`` in ``(Z/2^k)^ncols``."""
        k = self.k
        gens = []
        pivot_cols = set()
        for _, q, v in self.pivots:
            pivot_cols.add(q)
            if v > 0:
                scale = 1 << (k - v)
                gens.append(self._scaled(self.v_column(q), scale))
        for j in range(self.ncols):
            if j not in pivot_cols:
                gens.append(self.v_column(j))
        return [g for g in gens if g]

    def _scaled(self, vec: Vector, c: int) -> Vector:
        mask = (1 << self.k) - 1
        return {i: (x * c) & mask for i, x in vec.items() if (x * c) & mask}

    def solve(self, b: Vector) -> Vector | None:
        """Some ``x`` with ``A x = b``, or ``None`` if there is none."""
        ub = self.apply_rows(b)
        y = {}
        for p, q, v in self.pivots:
            x = ub.pop(p, 0)
            if x & ((1 << v) - 1):
                return None
            if x:
                y[q] = x >> v
        if ub:
            return None
        return self.apply_v(y)


def smith_normal_form(A, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense Smith normal form ``U A V = D`` over Z/2^k.

    The diagonal of ``D`` holds powers of two in divisibility order, with
    zero standing for 2^k.  ``U`` and ``V`` are invertible mod 2^k.
    """
    A = np.asarray(A, dtype=np.int64) % (1 << k)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    m, n = A.shape
    el = Elimination.of(A, k)
    U0 = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for r, x in el.apply_rows({i: 1}).items():
            U0[r, i] = x
    V0 = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        for r, x in el.v_column(j).items():
            V0[r, j] = x
    prow = [p for p, _, _ in el.pivots]
    pcol = [q for _, q, _ in el.pivots]
    prow += [i for i in range(m) if i not in set(prow)]
    pcol += [j for j in range(n) if j not in set(pcol)]
    U = U0[prow, :]
    V = V0[:, pcol]
    D = np.zeros((m, n), dtype=np.int64)
    for t, (_, _, v) in enumerate(el.pivots):
        D[t, t] = (1 << v) % (1 << k)
    return D, U, V
