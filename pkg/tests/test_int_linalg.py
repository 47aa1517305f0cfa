import math
import random
from fractions import Fraction

import pytest

from anglerank.int_linalg import (
    KernelBasis,
    RootBound,
    all_ones_minus_identity_f2_rank,
    bounds,
    column_weight_w,
    hnf,
    identity,
    in_row_lattice,
    integer_kernel_rows,
    invert_unimodular,
    kernel_basis,
    lattice_equal,
    mat_mul,
    nullspace_rational,
    orthogonal_complement,
    rank_rational,
    saturate_rows,
    smith_normal_form,
)


def test_snf_examples():
    snf = smith_normal_form([[2, 4], [6, 8]])
    assert snf.invariants == [2, 4]
    snf = smith_normal_form(identity(4))
    assert snf.S == identity(4)
    snf = smith_normal_form([[1, 1], [1, 1]])
    assert snf.rank == 1
    assert snf.invariants == [1]
    assert snf.S[1][1] == 0


def test_snf_round_trip_random():
    rng = random.Random(20240601)
    for _ in range(200):
        m = rng.randint(1, 12)
        n = rng.randint(1, 8)
        A = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)]
        if not any(any(row) for row in A):
            A[0][0] = 1
        snf = smith_normal_form(A)
        assert mat_mul(mat_mul(snf.P, snf.S), snf.Q) == A
        assert abs(det_int(snf.P)) == 1
        assert abs(det_int(snf.Q)) == 1
        diag = snf.invariants
        assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1))
        assert all(d > 0 for d in diag)


def det_int(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    work = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if work[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = -det
        det *= work[col][col]
        inv = Fraction(1) / work[col][col]
        for i in range(col + 1, n):
            c = work[i][col] * inv
            if c:
                work[i] = [x - c * y for x, y in zip(work[i], work[col])]
    assert det.denominator == 1
    return int(det)


def test_invert_unimodular():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 6)
        U = identity(n)
        for _ in range(10):
            i, j = rng.randrange(n), rng.randrange(n)
            if i != j:
                c = rng.randint(-3, 3)
                U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        V = invert_unimodular(U)
        assert mat_mul(U, V) == identity(n)


def test_kernel_basis_examples():
    kb = kernel_basis([[1, 1], [1, 1]], 1)
    assert kb.rank == 1
    col = [kb.B[0][0], kb.B[1][0]]
    assert sorted(col) == [-1, 1]
    assert kb.w == 2

    kb = kernel_basis([[1, 0], [0, 1]], 1)
    assert kb.rank == 0 and kb.w == 0

    kb = kernel_basis([[0, 0], [0, 0]], 1)
    assert kb.rank == 2 and kb.w == 1


def test_kernel_vs_brute_force_oracle():
    """Lattice generated by B equals the brute-force integer kernel box."""
    import numpy as np

    rng = random.Random(424242)
    grid = np.stack(
        np.meshgrid(*[np.arange(-10, 11)] * 4, indexing="ij"), axis=-1
    ).reshape(-1, 4)
    for _ in range(200):
        A = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(6)]
        if not any(any(row) for row in A):
            continue
        kb = kernel_basis(A, 1)
        cols = list(zip(*kb.B)) if kb.rank else []
        basis_hnf = hnf([list(c) for c in cols])
        mask = (grid @ np.array(A, dtype=np.int64).T == 0).all(axis=1)
        brute = [list(map(int, v)) for v in grid[mask] if any(v)]
        for v in brute:
            assert in_row_lattice(v, basis_hnf)
        if brute:
            assert lattice_equal(basis_hnf, saturate_rows(brute))
        else:
            assert kb.rank == 0


def test_column_weight_examples():
    assert column_weight_w([[1, -2], [3, 0]]) == 4
    assert column_weight_w(identity(5)) == 1
    assert column_weight_w([[0, 0], [0, 0]]) == 0


def _random_supported(rng, n, m, lo=-4, hi=4):
    """Random integer matrix with every row and column containing a nonzero."""
    while True:
        A = [[rng.randint(lo, hi) for _ in range(m)] for _ in range(n)]
        if all(any(row) for row in A) and all(any(col) for col in zip(*A)):
            return A


def test_weight_functional_properties():
    """The four elementary inequalities for w, fuzzed."""
    rng = random.Random(99)
    for _ in range(200):
        N = rng.randint(1, 5)
        R = rng.randint(1, 4)
        # B has N rows and M <= N columns; with M > N the inequality fails
        # even with full support (B = [[1,1]], A = [[2]] gives 4 > 2).
        M = rng.randint(1, N)
        A = _random_supported(rng, N, R)
        Bt = _random_supported(rng, M, N)
        # (1) w(B^t A) <= N w(A) w(B), both supported on every row and column
        BtA = mat_mul(Bt, A)
        B = [list(r) for r in zip(*Bt)]
        assert column_weight_w(BtA) <= N * column_weight_w(A) * column_weight_w(B)
        # (2) additivity
        A2 = [[rng.randint(-4, 4) for _ in range(R)] for _ in range(N)]
        S = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(A, A2)]
        assert column_weight_w(S) <= column_weight_w(A) + column_weight_w(A2)
        # (3) scaling
        c = rng.randint(-5, 5)
        assert column_weight_w([[c * x for x in row] for row in A]) == abs(
            c
        ) * column_weight_w(A)
        # (4) square case: w(A) <= operator 1-norm (max column 1-norm)
        n = rng.randint(1, 5)
        Asq = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        op1 = max(sum(abs(row[j]) for row in Asq) for j in range(n))
        assert column_weight_w(Asq) <= op1


def test_weight_bound_on_fuzz_corpus():
    """w(B) after size reduction stays below the lemma-form bound."""
    rng = random.Random(1234)
    for _ in range(200):
        m = rng.randint(2, 7)
        n = rng.randint(2, 5)
        d = rng.choice([1, 2, 3, 6])
        A = [
            [Fraction(rng.randint(-2 * d, 2 * d), d) for _ in range(n)]
            for _ in range(m)
        ]
        if not any(any(row) for row in A):
            continue
        maxA = max(abs(x) for row in A for x in row)
        if maxA == 0:
            continue
        kb = kernel_basis(A, d)
        if kb.rank == 0:
            continue
        r = rank_rational(A)
        lemma, _ = bounds(n, r, d, maxA, g=n, delta=r)
        assert lemma.ge_rational(kb.w), (A, kb.B, kb.w, lemma.approx())


def test_bounds_examples():
    lemma, zarhin = bounds(N=3, r=2, d=6, maxA=1, g=3, delta=2)
    assert zarhin.exact_int() == 288
    assert lemma.exact_int() == 3 * 8 * 72  # 3 * 2^3 * (sqrt(2)*6)^2 = 1728
    lemma, _ = bounds(N=2, r=1, d=1, maxA=1, g=1, delta=1)
    assert lemma.coeff == 2 and lemma.radicand == 1
    assert lemma.exact_int() == 2
    _, zarhin = bounds(N=1, r=1, d=1, maxA=1, g=1, delta=1)
    assert zarhin.exact_int() == 1
    _, zarhin = bounds(N=3, r=0, d=1, maxA=1, g=3, delta=0)
    assert zarhin.exact_int() == 0


def test_root_bound_comparisons():
    b = RootBound(Fraction(24), 3)  # 24 sqrt(3) ~ 41.57
    assert b.ge_rational(41)
    assert not b.ge_rational(42)
    assert b.ceil() == 42
    assert b.exact_int() is None
    assert RootBound(Fraction(7), 4).exact_int() == 14


def test_hnf_and_saturation():
    assert hnf([[2, 0], [0, 2], [1, 1]]) == [[1, 1], [0, 2]]
    assert saturate_rows([[2, 2]]) == [[1, 1]]
    assert saturate_rows([[2, 0], [0, 3]]) == [[1, 0], [0, 1]]
    assert lattice_equal([[1, -1, 0], [0, 1, -1]], [[1, 0, -1], [0, 1, -1]])
    # saturation idempotence
    sat = saturate_rows([[4, 6], [2, 8]])
    assert saturate_rows(sat) == sat


def test_nullspace_and_complement():
    ns = nullspace_rational([[1, 1, 1]])
    assert len(ns) == 2
    for v in ns:
        assert sum(v) == 0
    comp = orthogonal_complement([[1, -1, 0], [0, 1, -1]])
    assert len(comp) == 1
    v = comp[0]
    assert v[0] == v[1] == v[2] != 0
    ik = integer_kernel_rows([[Fraction(1, 2), Fraction(1, 2), 0]])
    assert ik == [[1, -1, 0], [0, 0, 1]]


def test_f2_rank_fact_up_to_12():
    """All-ones-minus-identity has F_2 rank g (g even) or g-1 (g odd)."""
    for g in range(2, 13):
        r = all_ones_minus_identity_f2_rank(g)
        assert r == (g if g % 2 == 0 else g - 1)
