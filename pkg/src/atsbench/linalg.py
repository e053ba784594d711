"""Exact dense linear algebra over a cyclotomic field.

Vectors are lists/tuples of Scalar, matrices are lists of rows.  All
routines are plain fraction-exact Gaussian elimination; dimensions in
this workbench stay far below anything that would need pivoting
strategies or sparsity tricks.
"""

from __future__ import annotations

from .scalars import CycloField, Scalar


def zeros(field: CycloField, n: int) -> list[Scalar]:
    return [field.zero for _ in range(n)]


def unit_vector(field: CycloField, n: int, i: int) -> list[Scalar]:
    v = zeros(field, n)
    v[i] = field.one
    return v


def identity_matrix(field: CycloField, n: int) -> list[list[Scalar]]:
    return [unit_vector(field, n, i) for i in range(n)]


def mat_vec(field: CycloField, m: list[list[Scalar]], v: list[Scalar]) -> list[Scalar]:
    out = []
    for row in m:
        acc = field.zero
        for a, b in zip(row, v):
            if not (a.is_zero() or b.is_zero()):
                acc = acc + a * b
        out.append(acc)
    return out


def mat_mul(a: list[list[Scalar]], b: list[list[Scalar]]) -> list[list[Scalar]]:
    n, k, m = len(a), len(b), len(b[0])
    zero = a[0][0] - a[0][0]
    out = [[zero for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for t in range(k):
            c = a[i][t]
            if c.is_zero():
                continue
            row_b = b[t]
            row_o = out[i]
            for j in range(m):
                if not row_b[j].is_zero():
                    row_o[j] = row_o[j] + c * row_b[j]
    return out


class RowSpace:
    """Incrementally maintained reduced row echelon basis.

    Optionally tracks, for every stored basis row, its expression as a
    combination of the vectors that were fed in (needed when a caller
    later wants images of basis rows under a map defined on the
    generators).
    """

    def __init__(self, field: CycloField, width: int, track: bool = False):
        self.field = field
        self.width = width
        self.rows: list[list[Scalar]] = []
        self.pivots: list[int] = []
        self.track = track
        self.combos: list[list[Scalar]] = []   # over the inserted generators
        self.n_inserted = 0

    def reduce(self, vec) -> tuple[list[Scalar], list[Scalar]]:
        """Return vec reduced against the basis, plus the combination used."""
        v = list(vec)
        combo = [self.field.zero] * len(self.rows)
        for idx, (row, p) in enumerate(zip(self.rows, self.pivots)):
            c = v[p]
            if c.is_zero():
                continue
            combo[idx] = c
            for j in range(p, self.width):
                if not row[j].is_zero():
                    v[j] = v[j] - c * row[j]
        return v, combo

    def insert(self, vec) -> bool:
        """Add vec to the span; returns True if the rank grew."""
        v, combo = self.reduce(vec)
        gen_index = self.n_inserted
        self.n_inserted += 1
        pivot = next((j for j in range(self.width) if not v[j].is_zero()), None)
        if pivot is None:
            return False
        inv = v[pivot].inverse()
        v = [x * inv for x in v]
        if self.track:
            expr = [self.field.zero] * self.n_inserted
            expr[gen_index] = inv
            for idx, c in enumerate(combo):
                if not c.is_zero():
                    prev = self.combos[idx]
                    for j, pc in enumerate(prev):
                        expr[j] = expr[j] - inv * c * pc
            self.combos.append(expr)
        # back-substitute to keep the basis fully reduced
        for idx, row in enumerate(self.rows):
            c = row[pivot]
            if c.is_zero():
                continue
            for j in range(self.width):
                if not v[j].is_zero():
                    row[j] = row[j] - c * v[j]
            if self.track:
                expr = self.combos[idx]
                while len(expr) < self.n_inserted:
                    expr.append(self.field.zero)
                new = self.combos[-1]
                for j, nc in enumerate(new):
                    if not nc.is_zero():
                        expr[j] = expr[j] - c * nc
        self.rows.append(v)
        self.pivots.append(pivot)
        order = sorted(range(len(self.rows)), key=lambda k: self.pivots[k])
        self.rows = [self.rows[k] for k in order]
        self.pivots = [self.pivots[k] for k in order]
        if self.track:
            self.combos = [self.combos[k] for k in order]
            for expr in self.combos:
                while len(expr) < self.n_inserted:
                    expr.append(self.field.zero)
        return True

    def contains(self, vec) -> bool:
        v, _ = self.reduce(vec)
        return all(x.is_zero() for x in v)

    def coordinates(self, vec):
        """Coefficients of vec over the stored rows, or None if outside."""
        v, combo = self.reduce(vec)
        if any(not x.is_zero() for x in v):
            return None
        return combo

    @property
    def rank(self) -> int:
        return len(self.rows)


def rref(field: CycloField, vectors) -> list[list[Scalar]]:
    space = RowSpace(field, len(vectors[0]) if vectors else 0)
    for v in vectors:
        space.insert(v)
    return space.rows


def solve(field: CycloField, columns: list[list[Scalar]], target: list[Scalar]):
    """Solve sum_j x_j * columns[j] = target; None when inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    height = len(target)
    n = len(columns)
    rows = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(height)]
    piv_cols = []
    r = 0
    for c in range(n):
        pr = next((k for k in range(r, height) if not rows[k][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for k in range(height):
            if k != r and not rows[k][c].is_zero():
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == height:
            break
    for k in range(r, height):
        if not rows[k][n].is_zero():
            return None
    x = [field.zero] * n
    for k, c in enumerate(piv_cols):
        x[c] = rows[k][n]
    return x


def invert_matrix(field: CycloField, m: list[list[Scalar]]):
    """Inverse of a square matrix, or None if singular."""
    n = len(m)
    aug = [list(row) + unit_vector(field, n, i) for i, row in enumerate(m)]
    r = 0
    for c in range(n):
        pr = next((k for k in range(r, n) if not aug[k][c].is_zero()), None)
        if pr is None:
            return None
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = aug[r][c].inverse()
        aug[r] = [x * inv for x in aug[r]]
        for k in range(n):
            if k != r and not aug[k][c].is_zero():
                f = aug[k][c]
                aug[k] = [a - f * b for a, b in zip(aug[k], aug[r])]
        r += 1
    return [row[n:] for row in aug]


def kernel(field: CycloField, rows: list[list[Scalar]], width: int):
    """Basis of the right kernel of the matrix with the given rows."""
    space = RowSpace(field, width)
    for v in rows:
        space.insert(v)
    pivots = set(space.pivots)
    free = [j for j in range(width) if j not in pivots]
    basis = []
    for f in free:
        v = zeros(field, width)
        v[f] = field.one
        for row, p in zip(space.rows, space.pivots):
            if not row[f].is_zero():
                v[p] = -row[f]
        basis.append(v)
    return basis
