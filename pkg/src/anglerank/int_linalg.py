"""Exact integer and rational linear algebra.

Smith normal form with unimodular transformations, Hermite normal form,
integer kernel bases for rational matrices, lattice saturation, the column
weight functional w, and the explicit generator-weight bounds.  Everything
here is arbitrary-precision and exact; no floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


# ---------------------------------------------------------------------------
# basic helpers


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    """Product of two matrices given as lists of rows (int or Fraction)."""
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    oi[j] += c * bt[j]
    return out


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def det_unimodular(a) -> int:
    """Determinant of a small integer matrix by fraction-free expansion."""
    n = len(a)
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SNFResult:
    """A = P @ S @ Q with P, Q unimodular and S in Smith normal form.

    Qinv is carried along because kernel extraction needs columns of Q^{-1}.
    """

    P: list[list[int]]
    S: list[list[int]]
    Q: list[list[int]]
    Qinv: list[list[int]]
    rank: int

    @property
    def invariants(self) -> list[int]:
        return [self.S[i][i] for i in range(self.rank)]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def smith_normal_form(mat) -> SNFResult:
    """Exact Smith normal form of a nonzero integer matrix.

    Maintains A = P @ S @ Q throughout.  Each elimination step is a single
    xgcd-based 2x2 unimodular update (no repeated-subtraction Euclid), which
    keeps entry growth in the transformations moderate.  Pivoting picks the
    smallest-magnitude nonzero entry first.
    """
    M = len(mat)
    N = len(mat[0])
    A = [[int(x) for x in row] for row in mat]
    S = [row[:] for row in A]
    P = identity(M)
    Q = identity(N)
    Qinv = identity(N)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        for row in P:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        Q[i], Q[j] = Q[j], Q[i]
        for row in Qinv:
            row[i], row[j] = row[j], row[i]

    def negate_row(i):
        S[i] = [-x for x in S[i]]
        for row in P:
            row[i] = -row[i]

    def row_gcd_step(t, i):
        # replace (row_t, row_i) so that S[i][t] becomes 0, S[t][t] the gcd
        a, b = S[t][t], S[i][t]
        if b == 0:
            return
        if a and b % a == 0:
            q = b // a
            S[i] = [x - q * y for x, y in zip(S[i], S[t])]
            for row in P:
                row[t] += q * row[i]
            return
        g, u, v = _xgcd(a, b)
        a1, b1 = a // g, b // g
        rt, ri = S[t], S[i]
        S[t] = [u * x + v * y for x, y in zip(rt, ri)]
        S[i] = [-b1 * x + a1 * y for x, y in zip(rt, ri)]
        for row in P:
            pt, pi = row[t], row[i]
            row[t] = a1 * pt + b1 * pi
            row[i] = -v * pt + u * pi

    def col_gcd_step(t, j):
        a, b = S[t][t], S[t][j]
        if b == 0:
            return
        if a and b % a == 0:
            q = b // a
            for row in S:
                row[j] -= q * row[t]
            for row in Qinv:
                row[j] -= q * row[t]
            Q[t] = [x + q * y for x, y in zip(Q[t], Q[j])]
            return
        g, u, v = _xgcd(a, b)
        a1, b1 = a // g, b // g
        for row in S:
            ct, cj = row[t], row[j]
            row[t] = u * ct + v * cj
            row[j] = -b1 * ct + a1 * cj
        for row in Qinv:
            ct, cj = row[t], row[j]
            row[t] = u * ct + v * cj
            row[j] = -b1 * ct + a1 * cj
        qt, qj = Q[t], Q[j]
        Q[t] = [a1 * x + b1 * y for x, y in zip(qt, qj)]
        Q[j] = [-v * x + u * y for x, y in zip(qt, qj)]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, M):
            for j in range(t, N):
                v = abs(S[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            for i in range(t + 1, M):
                row_gcd_step(t, i)
            if all(S[t][j] == 0 for j in range(t + 1, N)):
                break
            for j in range(t + 1, N):
                col_gcd_step(t, j)
            if all(S[i][t] == 0 for i in range(t + 1, M)):
                break
        t += 1

    # enforce the divisibility chain
    r = t
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            if S[i + 1][i + 1] % S[i][i]:
                # col_i += col_{i+1}, then gcd-merge the 2x2 block
                for row in S:
                    row[i] += row[i + 1]
                for row in Qinv:
                    row[i] += row[i + 1]
                Q[i + 1] = [x - y for x, y in zip(Q[i + 1], Q[i])]
                row_gcd_step(i, i + 1)
                col_gcd_step(i, i + 1)
                changed = True
    for i in range(r):
        if S[i][i] < 0:
            negate_row(i)

    assert mat_mul(mat_mul(P, S), Q) == A
    return SNFResult(P=P, S=S, Q=Q, Qinv=Qinv, rank=r)


def invert_unimodular(U) -> list[list[int]]:
    """Inverse of a unimodular integer matrix, exactly."""
    n = len(U)
    aug = [row[:] + identity(n)[i] for i, row in enumerate(U)]
    # fraction-free Gauss-Jordan specialised to det +-1
    work = [[Fraction(x) for x in row] for row in aug]
    for col in range(n):
        piv = next(i for i in range(col, n) if work[i][col])
        work[col], work[piv] = work[piv], work[col]
        inv = Fraction(1) / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for i in range(n):
            if i != col and work[i][col]:
                c = work[i][col]
                work[i] = [x - c * y for x, y in zip(work[i], work[col])]
    out = []
    for row in work:
        vals = row[n:]
        assert all(v.denominator == 1 for v in vals)
        out.append([int(v) for v in vals])
    return out


# ---------------------------------------------------------------------------
# Hermite normal form and lattice utilities (row lattices)


def hnf(rows) -> list[list[int]]:
    """Row-style Hermite normal form with positive pivots.

    Returns the nonzero rows; the row span over Z is unchanged.
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    result = []
    col = 0
    while work and col < ncols:
        work.sort(key=lambda r: (r[col] == 0, abs(r[col])))
        if work[0][col] == 0:
            col += 1
            continue
        while True:
            piv = work[0]
            done = True
            for r in work[1:]:
                if r[col]:
                    q = r[col] // piv[col]
                    for j in range(ncols):
                        r[j] -= q * piv[j]
                    if r[col]:
                        done = False
            work.sort(key=lambda r: (r[col] == 0, abs(r[col])))
            if done and all(r[col] == 0 for r in work[1:]):
                break
        piv = work.pop(0)
        if piv[col] < 0:
            piv = [-x for x in piv]
        result.append(piv)
        work = [r for r in work if any(r)]
        col += 1
    # reduce above-pivot entries
    for i in reversed(range(len(result))):
        pcol = next(j for j in range(ncols) if result[i][j])
        for k in range(i):
            q = result[k][pcol] // result[i][pcol]
            if q:
                result[k] = [a - q * b for a, b in zip(result[k], result[i])]
    return result


def lattice_equal(rows_a, rows_b) -> bool:
    """Whether two row-generating sets span the same integer lattice."""
    return hnf(rows_a) == hnf(rows_b)


def saturate_rows(rows) -> list[list[int]]:
    """Saturation of the row lattice: (span_Q rows) intersect Z^n, in HNF."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    snf = smith_normal_form(rows)
    r = snf.rank
    # A = P S Q; row span of A saturates to the span of the first r rows of Q.
    return hnf(snf.Q[:r])


def in_row_lattice(vec, hnf_rows) -> bool:
    """Membership of an integer vector in the row lattice given by its HNF."""
    v = list(map(int, vec))
    for row in hnf_rows:
        pcol = next(j for j, x in enumerate(row) if x)
        if v[pcol] % row[pcol] == 0:
            q = v[pcol] // row[pcol]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


# ---------------------------------------------------------------------------
# rational elimination: rank, nullspace, orthogonal complement


def rank_rational(rows) -> int:
    work = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(work)):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = Fraction(1) / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col]:
                c = work[i][col]
                work[i] = [x - c * y for x, y in zip(work[i], work[rank])]
        rank += 1
    return rank


def row_space_basis(rows) -> list[list[Fraction]]:
    """Reduced row echelon basis of the row space."""
    work = [[Fraction(x) for x in row] for row in rows]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(work)):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = Fraction(1) / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col]:
                c = work[i][col]
                work[i] = [x - c * y for x, y in zip(work[i], work[rank])]
        rank += 1
    return [r for r in work[:rank]]


def nullspace_rational(rows) -> list[list[Fraction]]:
    """Basis of the right nullspace {x : A x = 0} over Q."""
    if not rows:
        return []
    ncols = len(rows[0])
    work = row_space_basis(rows)
    pivots = []
    for r in work:
        pivots.append(next(j for j, x in enumerate(r) if x))
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, p in zip(work, pivots):
            vec[p] = -r[f]
        basis.append(vec)
    return basis


def orthogonal_complement(rows) -> list[list[Fraction]]:
    """Basis of {x : <r, x> = 0 for all rows r}; same as the nullspace."""
    return nullspace_rational(rows)


def integer_kernel_rows(rows) -> list[list[int]]:
    """HNF basis of the integer kernel {e in Z^n : A e = 0} of rational rows."""
    null = nullspace_rational(rows)
    if not null:
        return []
    # clear denominators per basis vector, then saturate
    cleared = []
    for v in null:
        den = math.lcm(*[f.denominator for f in v]) if v else 1
        cleared.append([int(f * den) for f in v])
    return saturate_rows(cleared)


# ---------------------------------------------------------------------------
# kernel basis with the weight bound (columns)


@dataclass
class KernelBasis:
    """Integer column generators of ker(A) with their weight w = max ||col||_1."""

    B: list[list[int]]  # N x R, columns generate the kernel lattice
    w: int

    @property
    def rank(self) -> int:
        return len(self.B[0]) if self.B and self.B[0] else 0


def column_weight_w(B) -> int:
    """Maximum column 1-norm, w(B) = max_j sum_i |B[i][j]|."""
    if not B or not B[0]:
        return 0
    return max(sum(abs(row[j]) for row in B) for j in range(len(B[0])))


def _columns(mat):
    return [list(col) for col in zip(*mat)]


def _from_columns(cols):
    return [list(row) for row in zip(*cols)]


def size_reduce_columns(cols) -> list[list[int]]:
    """Pairwise integer Gram-Schmidt sweeps shrinking column 1-norms."""
    cols = [c[:] for c in cols]

    def n1(c):
        return sum(abs(x) for x in c)

    changed = True
    while changed:
        changed = False
        for i in range(len(cols)):
            for j in range(len(cols)):
                if i == j:
                    continue
                dot = sum(a * b for a, b in zip(cols[i], cols[j]))
                nj = sum(b * b for b in cols[j])
                if nj == 0:
                    continue
                q = (2 * dot + nj) // (2 * nj)
                if q:
                    cand = [a - q * b for a, b in zip(cols[i], cols[j])]
                    if n1(cand) < n1(cols[i]):
                        cols[i] = cand
                        changed = True
    return cols


def kernel_basis(A, d: int) -> KernelBasis:
    """Integer generators of {x : A x = 0} for a rational matrix A.

    All denominators of A must divide d.  Follows the Smith-normal-form
    construction on dA (the kernel is spanned by the last N - r columns of
    Q^{-1}), followed by size reduction of the columns.
    """
    M = len(A)
    N = len(A[0])
    Ad = []
    for row in A:
        r = []
        for x in row:
            f = Fraction(x) * d
            if f.denominator != 1:
                raise ValueError("denominator of entry does not divide d")
            r.append(int(f))
        Ad.append(r)
    if not any(any(row) for row in Ad):
        B = identity(N)
        return KernelBasis(B=B, w=1)
    snf = smith_normal_form(Ad)
    r = snf.rank
    if r == N:
        return KernelBasis(B=[[] for _ in range(N)], w=0)
    cols = _columns(snf.Qinv)[r:]
    cols = size_reduce_columns(cols)
    B = _from_columns(cols)
    for row_a in A:
        for col in cols:
            assert sum(Fraction(x) * c for x, c in zip(row_a, col)) == 0
    return KernelBasis(B=B, w=column_weight_w(B))


# ---------------------------------------------------------------------------
# exact bound values a * sqrt(n)


@dataclass(frozen=True)
class RootBound:
    """Exact value coeff * sqrt(radicand) with coeff rational, radicand int >= 0.

    Supports exact comparison against rationals by squaring, which is all the
    bound checks need.
    """

    coeff: Fraction
    radicand: int = 1

    def __post_init__(self):
        assert self.radicand >= 0 and self.coeff >= 0

    def is_integer(self) -> bool:
        r = math.isqrt(self.radicand)
        return r * r == self.radicand and (self.coeff * r).denominator == 1

    def exact_int(self) -> int | None:
        r = math.isqrt(self.radicand)
        if r * r == self.radicand:
            v = self.coeff * r
            if v.denominator == 1:
                return int(v)
        return None

    def ge_rational(self, x) -> bool:
        """Whether self >= x, exactly."""
        x = Fraction(x)
        if x <= 0:
            return True
        # coeff * sqrt(rad) >= x  <=>  coeff^2 * rad >= x^2
        return self.coeff * self.coeff * self.radicand >= x * x

    def approx(self) -> float:
        return float(self.coeff) * math.sqrt(self.radicand)

    def ceil(self) -> int:
        sq = self.coeff * self.coeff * self.radicand
        n = math.isqrt(sq.numerator // sq.denominator)
        while n * n < sq:
            n += 1
        while n >= 1 and (n - 1) * (n - 1) >= sq:
            n -= 1
        return n

    def to_json(self) -> dict:
        return {
            "coeff": f"{self.coeff.numerator}/{self.coeff.denominator}",
            "radicand": self.radicand,
            "integer": self.exact_int(),
            "approx": round(self.approx(), 6),
        }


def bounds(N: int, r: int, d: int, maxA, g: int, delta: int) -> tuple[RootBound, RootBound]:
    """(lemma_bound, zarhin_H) as exact values.

    lemma_bound = N r^3 (sqrt(r) d ||A||)^r   (0 when r = 0)
    zarhin_H    = g delta^3 (sqrt(g) delta)^delta   (0 when delta = 0)
    """
    maxA = Fraction(maxA)
    if r >= 1:
        coeff = Fraction(N) * r**3 * (d * maxA) ** r
        if r % 2 == 0:
            lemma = RootBound(coeff * r ** (r // 2), 1)
        else:
            lemma = RootBound(coeff * r ** ((r - 1) // 2), r)
    else:
        lemma = RootBound(Fraction(0), 1)
    if delta >= 1:
        coeff = Fraction(g) * delta**3 * delta**delta
        if delta % 2 == 0:
            zarhin = RootBound(coeff * g ** (delta // 2), 1)
        else:
            zarhin = RootBound(coeff * g ** ((delta - 1) // 2), g)
    else:
        zarhin = RootBound(Fraction(0), 1)
    return lemma, zarhin


# ---------------------------------------------------------------------------
# F_2 rank (used by the audit module's slope-theorem checks)


def f2_rank(mat) -> int:
    rows = [sum((x & 1) << j for j, x in enumerate(row)) for row in mat]
    rank = 0
    for col in range(len(mat[0]) if mat else 0):
        bit = 1 << col
        piv = next((i for i in range(rank, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & bit:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def all_ones_minus_identity_f2_rank(g: int) -> int:
    """F_2-rank of the g x g matrix with 0 on the diagonal and 1 elsewhere."""
    return f2_rank([[0 if i == j else 1 for j in range(g)] for i in range(g)])
