import random
from fractions import Fraction

from subalg.linalg import Echelon, kernel_basis, rank, rref, solve

F = Fraction


def test_rref_small():
    rows, pivots = rref([[1, 2, 3], [2, 4, 7], [0, 0, 1]])
    assert pivots == [0, 2]
    assert rows[0] == [F(1), F(2), F(0)]
    assert rows[1] == [F(0), F(0), F(1)]


def test_rank():
    assert rank([[1, 2], [2, 4], [3, 6]]) == 1
    assert rank([[1, 0], [0, 1]]) == 2
    assert rank([]) == 0


def test_kernel_basis():
    # x + 2y + 3z = 0 has a 2-dimensional kernel
    basis = kernel_basis([[1, 2, 3]], 3)
    assert len(basis) == 2
    for vec in basis:
        assert vec[0] + 2 * vec[1] + 3 * vec[2] == 0


def test_solve_consistent_and_not():
    assert solve([[2, 0], [0, 4]], [6, 8]) == [F(3), F(2)]
    assert solve([[1, 1], [2, 2]], [1, 3]) is None
    # underdetermined: free variable pinned to zero
    assert solve([[1, 1]], [5]) == [F(5), F(0)]


def test_echelon_matches_dense_rank():
    rng = random.Random(11)
    for _ in range(200):
        nrows = rng.randint(0, 5)
        ncols = rng.randint(1, 5)
        matrix = [
            [F(rng.randint(-4, 4)) for _ in range(ncols)] for _ in range(nrows)
        ]
        ech = Echelon()
        for row in matrix:
            ech.add({i: v for i, v in enumerate(row) if v})
        assert ech.rank == rank(matrix)
        # every original row reduces to zero against the echelon
        for row in matrix:
            assert ech.contains({i: v for i, v in enumerate(row) if v})


def test_kernel_vectors_annihilate():
    rng = random.Random(12)
    for _ in range(100):
        nrows = rng.randint(1, 4)
        ncols = rng.randint(1, 5)
        matrix = [
            [F(rng.randint(-3, 3)) for _ in range(ncols)] for _ in range(nrows)
        ]
        vectors = kernel_basis(matrix, ncols)
        assert rank(matrix) + len(vectors) == ncols
        for vec in vectors:
            for row in matrix:
                assert sum(r * v for r, v in zip(row, vec)) == 0


def test_solve_random_consistent_systems():
    rng = random.Random(13)
    for _ in range(100):
        nrows = rng.randint(1, 4)
        ncols = rng.randint(1, 4)
        matrix = [
            [F(rng.randint(-3, 3)) for _ in range(ncols)] for _ in range(nrows)
        ]
        hidden = [F(rng.randint(-3, 3)) for _ in range(ncols)]
        rhs = [sum(r * v for r, v in zip(row, hidden)) for row in matrix]
        found = solve(matrix, rhs)
        assert found is not None
        for row, b in zip(matrix, rhs):
            assert sum(r * v for r, v in zip(row, found)) == b
