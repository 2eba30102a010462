import random
from fractions import Fraction

from hodgecorr.rational import (
    rank, rref, kernel_basis, solve, mat_mul, is_zero, homology_dimension,
)


def naive_rank(mat):
    # independent Gaussian elimination over Fraction
    a = [[Fraction(x) for x in row] for row in mat]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            f = a[i][col] / a[r][col]
            a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def test_rank_simple():
    assert rank([[1, 0], [0, 1]]) == 2
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[0, 0], [0, 0]]) == 0
    assert rank([]) == 0
    assert rank([[Fraction(1, 2), Fraction(1, 3)]]) == 1


def test_rank_matches_naive_on_random():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 6)
        m = rng.randint(1, 6)
        mat = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                for _ in range(m)] for _ in range(n)]
        assert rank(mat) == naive_rank(mat)


def test_kernel_basis_is_kernel():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 5)
        m = rng.randint(1, 5)
        mat = [[Fraction(rng.randint(-3, 3)) for _ in range(m)] for _ in range(n)]
        basis = kernel_basis(mat, m)
        assert len(basis) == m - rank(mat)
        for v in basis:
            image = [sum(row[j] * v[j] for j in range(m)) for row in mat]
            assert all(x == 0 for x in image)


def test_kernel_of_empty_map():
    basis = kernel_basis([], 3)
    assert len(basis) == 3


def test_solve_consistent_and_inconsistent():
    mat = [[1, 2], [3, 4]]
    x = solve(mat, [Fraction(5), Fraction(11)])
    assert x == [Fraction(1), Fraction(2)]
    assert solve([[1, 1], [1, 1]], [Fraction(0), Fraction(1)]) is None


def test_mat_mul_and_zero():
    a = [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(1)]]
    b = [[Fraction(1), Fraction(0)], [Fraction(-1), Fraction(1)]]
    assert mat_mul(a, b) == [[Fraction(-1), Fraction(2)], [Fraction(-1), Fraction(1)]]
    assert is_zero([[0, 0]])
    assert not is_zero([[0, 1]])


def test_homology_dimension():
    # 0 -> Q^2 --[1 0]--> Q -> 0 at the middle space Q^2
    d_out = [[1, 0]]
    assert homology_dimension(d_out, None, 2) == 1
