"""Sparse exact linear algebra over the rationals.

Coefficients are `fractions.Fraction` throughout: always reduced, positive
denominator, no floating point anywhere.  Matrices are immutable once built;
elimination works on throwaway dict-of-dicts copies.
"""

from __future__ import annotations

from fractions import Fraction


class SparseMatrix:
    """Immutable sparse matrix with rows of sorted (column, Fraction) pairs."""

    __slots__ = ("n_rows", "n_cols", "rows")

    def __init__(self, n_rows, n_cols, rows):
        if n_rows < 0 or n_cols < 0:
            raise ValueError("negative dimensions")
        if len(rows) != n_rows:
            raise ValueError("row count mismatch")
        clean = []
        for r in rows:
            entries = tuple(sorted((int(c), Fraction(v)) for c, v in r if v != 0))
            cols = [c for c, _ in entries]
            if cols and (cols[-1] >= n_cols or cols[0] < 0):
                raise ValueError("column index out of range")
            if len(set(cols)) != len(cols):
                raise ValueError("duplicate column in row")
            clean.append(entries)
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.rows = tuple(clean)

    @classmethod
    def from_dense(cls, dense):
        n_rows = len(dense)
        n_cols = len(dense[0]) if dense else 0
        return cls(n_rows, n_cols,
                   [[(j, v) for j, v in enumerate(row) if v != 0] for row in dense])

    @classmethod
    def from_columns(cls, columns, n_rows, n_cols=None):
        """Build from a list of columns, each a dict row_index -> value."""
        if n_cols is None:
            n_cols = len(columns)
        rows = [[] for _ in range(n_rows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                rows[i].append((j, v))
        return cls(n_rows, n_cols, rows)

    def to_dense(self):
        out = [[Fraction(0)] * self.n_cols for _ in range(self.n_rows)]
        for i, row in enumerate(self.rows):
            for j, v in row:
                out[i][j] = v
        return out

    def mul_vector(self, vec):
        """Multiply by a vector given as dict col -> Fraction; returns dict."""
        out = {}
        for i, row in enumerate(self.rows):
            s = sum((v * vec.get(j, 0) for j, v in row), Fraction(0))
            if s != 0:
                out[i] = s
        return out

    def transpose(self):
        rows = [[] for _ in range(self.n_cols)]
        for i, row in enumerate(self.rows):
            for j, v in row:
                rows[j].append((i, v))
        return SparseMatrix(self.n_cols, self.n_rows, rows)

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix)
                and (self.n_rows, self.n_cols, self.rows)
                == (other.n_rows, other.n_cols, other.rows))

    def __hash__(self):
        return hash((self.n_rows, self.n_cols, self.rows))

    def __repr__(self):
        nnz = sum(len(r) for r in self.rows)
        return f"SparseMatrix({self.n_rows}x{self.n_cols}, nnz={nnz})"

    # -- serialization -------------------------------------------------

    def dumps(self):
        """Line-oriented dump: header "rows cols", then "r c p/q" triples."""
        lines = [f"{self.n_rows} {self.n_cols}"]
        for i, row in enumerate(self.rows):
            for j, v in row:
                lines.append(f"{i} {j} {v.numerator}/{v.denominator}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        n_rows, n_cols = (int(t) for t in lines[0].split())
        rows = [[] for _ in range(n_rows)]
        for ln in lines[1:]:
            r, c, val = ln.split()
            rows[int(r)].append((int(c), Fraction(val)))
        return cls(n_rows, n_cols, rows)


def _eliminate(matrix, extra_cols=()):
    """Sparse Gaussian elimination with a Markowitz-style pivot choice.

    Returns (pivots, reduced_rows) where pivots is a list of (row_key,
    pivot_col) and reduced_rows maps an internal row key to a dict
    col -> Fraction.  `extra_cols` columns are never chosen as pivots
    (used for augmented solves).
    """
    work = {}
    col_rows = {}
    for i, row in enumerate(matrix.rows):
        if row:
            work[i] = dict(row)
            for j, _ in row:
                col_rows.setdefault(j, set()).add(i)
    banned = set(extra_cols)
    pivots = []
    done = {}
    while True:
        best = None
        for i, row in work.items():
            rc = sum(1 for j in row if j not in banned)
            if rc == 0:
                continue
            for j in row:
                if j in banned:
                    continue
                cost = (rc - 1) * (len(col_rows[j]) - 1)
                if best is None or cost < best[0]:
                    best = (cost, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pj = best
        prow = work.pop(pi)
        for j in prow:
            col_rows[j].discard(pi)
        pivots.append((pi, pj))
        banned.add(pj)
        pv = prow[pj]
        targets = [i for i in col_rows.get(pj, ()) if i in work]
        for i in targets:
            row = work[i]
            factor = row[pj] / pv
            for j, v in prow.items():
                nv = row.get(j, Fraction(0)) - factor * v
                if nv == 0:
                    if j in row:
                        del row[j]
                        col_rows[j].discard(i)
                else:
                    if j not in row:
                        col_rows.setdefault(j, set()).add(i)
                    row[j] = nv
            if not row:
                del work[i]
        done[pi] = prow  # keep pivot row for back-substitution
    return pivots, done


def rank(matrix):
    """Exact rank over the rationals."""
    pivots, _ = _eliminate(matrix)
    return len(pivots)


def kernel_basis(matrix):
    """Exact basis of the right kernel, as a list of dicts col -> Fraction.

    Size is n_cols - rank; every vector v satisfies M.v = 0 exactly.
    """
    pivots, rows = _eliminate(matrix)
    pivot_cols = {pj: pi for pi, pj in pivots}
    free_cols = [j for j in range(matrix.n_cols) if j not in pivot_cols]
    # Back-substitute in reverse pivot order: the eliminated system is
    # triangular with respect to that order.
    basis = []
    for f in free_cols:
        vec = {f: Fraction(1)}
        for pi, pj in reversed(pivots):
            row = rows[pi]
            s = sum((v * vec.get(j, 0) for j, v in row.items() if j != pj),
                    Fraction(0))
            if s != 0:
                vec[pj] = -s / row[pj]
        basis.append({j: v for j, v in vec.items() if v != 0})
    return basis


def solve(matrix, b):
    """One exact solution x (dict col -> Fraction) of M.x = b, or None.

    b is a dict row -> Fraction.
    """
    for i in b:
        if not 0 <= i < matrix.n_rows:
            raise ValueError("vector index out of range")
    aug = matrix.n_cols
    rows = [list(r) for r in matrix.rows]
    for i, v in b.items():
        if v != 0:
            rows[i].append((aug, v))
    work = SparseMatrix(matrix.n_rows, matrix.n_cols + 1, rows)
    pivots, reduced = _eliminate(work, extra_cols=(aug,))
    # back-substitute; consistency is checked by verifying M.x = b at the
    # end (cheaper than tracking rows left over by the elimination)
    x = {}
    for pi, pj in reversed(pivots):
        row = reduced[pi]
        s = sum((v * x.get(j, 0) for j, v in row.items()
                 if j not in (pj, aug)), Fraction(0))
        x[pj] = (row.get(aug, Fraction(0)) - s) / row[pj]
    x = {j: v for j, v in x.items() if v != 0}
    if matrix.mul_vector(x) != {i: v for i, v in b.items() if v != 0}:
        return None
    return x


def in_image(matrix, b):
    """Decide exactly whether b (dict row -> Fraction) is in the column span."""
    for i in b:
        if not 0 <= i < matrix.n_rows:
            raise ValueError("vector index out of range")
    if all(v == 0 for v in b.values()):
        return True
    aug_col = matrix.n_cols
    rows = [list(r) for r in matrix.rows]
    for i, v in b.items():
        if v != 0:
            rows[i].append((aug_col, v))
    aug = SparseMatrix(matrix.n_rows, matrix.n_cols + 1, rows)
    return rank(aug) == rank(matrix)


class PresolvedSolver:
    """Eliminate a matrix once, then solve M.x = b for many b.

    The elimination is run on [M | I]; the identity block records the
    row transform, so each solve is a back-substitution plus a
    verification product instead of a fresh elimination.
    """

    __slots__ = ("matrix", "_aug0", "_pivots", "_rows")

    def __init__(self, matrix):
        self.matrix = matrix
        self._aug0 = matrix.n_cols
        rows = [list(r) + [(self._aug0 + i, Fraction(1))]
                for i, r in enumerate(matrix.rows)]
        work = SparseMatrix(matrix.n_rows, self._aug0 + matrix.n_rows, rows)
        extra = tuple(range(self._aug0, self._aug0 + matrix.n_rows))
        self._pivots, self._rows = _eliminate(work, extra_cols=extra)

    def solve(self, b):
        """One exact solution x of M.x = b, or None when inconsistent."""
        for i in b:
            if not 0 <= i < self.matrix.n_rows:
                raise ValueError("vector index out of range")
        a0 = self._aug0
        x = {}
        for pi, pj in reversed(self._pivots):
            row = self._rows[pi]
            rhs = sum((v * b.get(j - a0, Fraction(0))
                       for j, v in row.items() if j >= a0), Fraction(0))
            s = sum((v * x.get(j, 0) for j, v in row.items()
                     if j < a0 and j != pj), Fraction(0))
            val = (rhs - s) / row[pj]
            if val != 0:
                x[pj] = val
        if self.matrix.mul_vector(x) != {i: v for i, v in b.items()
                                         if v != 0}:
            return None
        return x
