import pytest
from sympy import Matrix

from criticalideals.abelian import (
    POINT_OUTDEGREE,
    POINT_ZERO,
    GroupSummary,
    adjacency_matrix,
    critical_group,
    evaluation_bridge,
    gcd_minors,
    laplacian_matrix,
    matmul,
    read_matrix,
    smith_group,
    smith_normal_form,
)
from criticalideals.critical import algebraic_corank
from criticalideals.digraph import (
    complete_digraph,
    directed_cycle,
    directed_path,
    trivial_digraph,
)
from criticalideals.exceptions import MatrixError
from criticalideals.zpoly import determinant


def _random_matrix(rng):
    rows, cols = rng.randint(1, 5), rng.randint(1, 5)
    return [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)]


def test_known_forms():
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).factors == (2, 6, 12)
    assert smith_normal_form([[0, 0], [0, 0]]).factors == ()
    result = smith_normal_form([[6, 0], [0, 4]])
    assert result.factors == (2, 12)
    assert result.diagonal == (2, 12)
    zero_padded = smith_normal_form([[1, 2, 3], [2, 4, 6]])
    assert zero_padded.rank == 1
    assert zero_padded.zero_count == 1
    assert zero_padded.diagonal_matrix() == [[1, 0, 0], [0, 0, 0]]


def test_transforms_are_unimodular(rng):
    for _ in range(100):
        matrix = _random_matrix(rng)
        result = smith_normal_form(matrix, transforms=True)
        U = [list(row) for row in result.U]
        V = [list(row) for row in result.V]
        assert abs(determinant(U)) == 1
        assert abs(determinant(V)) == 1
        assert matmul(matmul(U, matrix), V) == result.diagonal_matrix()


def test_divisibility_chain_and_minor_oracle(rng):
    for _ in range(500):
        matrix = _random_matrix(rng)
        result = smith_normal_form(matrix)
        factors = result.factors
        assert all(f > 0 for f in factors)
        assert all(b % a == 0 for a, b in zip(factors, factors[1:]))
        product = 1
        for i in range(1, min(len(matrix), len(matrix[0])) + 1):
            delta = gcd_minors(matrix, i)
            if i <= result.rank:
                product *= factors[i - 1]
                assert delta == product
            else:
                assert delta == 0


def test_integer_determinant_agrees_with_sympy(rng):
    for _ in range(50):
        size = rng.randint(1, 5)
        matrix = [[rng.randint(-3, 3) for _ in range(size)] for _ in range(size)]
        assert determinant(matrix) == int(Matrix(matrix).det())
        if size > 1:
            assert gcd_minors(matrix, size) == abs(int(Matrix(matrix).det()))


def test_matrix_validation():
    with pytest.raises(MatrixError):
        smith_normal_form([[1, 2], [3]])
    with pytest.raises(MatrixError):
        smith_normal_form([[1, 2.5]])
    with pytest.raises(MatrixError):
        gcd_minors([[1, 2], [3, 4]], 3)


def test_read_matrix():
    assert read_matrix("[[1, 2], [3, 4]]") == [[1, 2], [3, 4]]
    assert read_matrix("1 2\n\n3 4\n") == [[1, 2], [3, 4]]
    with pytest.raises(MatrixError):
        read_matrix("1 x")
    with pytest.raises(MatrixError):
        read_matrix("[1, 2]")


def test_laplacian_and_adjacency():
    d = directed_path(3)
    assert adjacency_matrix(d) == [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    assert laplacian_matrix(d) == [[1, -1, 0], [0, 1, -1], [0, 0, 0]]


@pytest.mark.parametrize(
    "digraph, critical, smith",
    [
        (directed_cycle(2), GroupSummary((1,), 1, 1, 1), GroupSummary((1, 1), 2, 0, 2)),
        (complete_digraph(3), GroupSummary((1, 3), 1, 1, 2), GroupSummary((1, 1, 2), 2, 0, 3)),
        (directed_cycle(3), GroupSummary((1, 1), 2, 1, 2), GroupSummary((1, 1, 1), 3, 0, 3)),
        (trivial_digraph(2), GroupSummary((), 0, 2, 0), GroupSummary((), 0, 2, 0)),
    ],
)
def test_groups(digraph, critical, smith):
    assert critical_group(digraph) == critical
    assert smith_group(digraph) == smith


def test_group_render():
    assert critical_group(complete_digraph(3)).render() == "factors=[1,3] free_rank=1 unit_count=1"
    assert critical_group(complete_digraph(3)).to_dict() == {
        "factors": [1, 3],
        "free_rank": 1,
        "unit_count": 1,
        "rank": 2,
    }


def test_gamma_bounded_by_unit_counts(classes_up_to_4):
    for d in classes_up_to_4:
        gamma = algebraic_corank(d)
        assert gamma <= critical_group(d).unit_count
        assert gamma <= smith_group(d).unit_count


def test_evaluation_bridge(classes_up_to_4):
    for d in classes_up_to_4:
        for i in range(1, d.n):
            assert evaluation_bridge(d, i, POINT_OUTDEGREE) == gcd_minors(laplacian_matrix(d), i)
            assert evaluation_bridge(d, i, POINT_ZERO) == gcd_minors(adjacency_matrix(d), i)


def test_evaluation_bridge_arguments():
    with pytest.raises(MatrixError):
        evaluation_bridge(directed_path(2), 2, POINT_ZERO)
    with pytest.raises(MatrixError):
        evaluation_bridge(directed_path(2), 1, "origin")


def test_small_examples():
    assert smith_normal_form([[2, 0], [0, 3]]).factors == (1, 6)
    result = smith_normal_form(laplacian_matrix(complete_digraph(3)))
    assert result.factors == (1, 3)
    assert result.zero_count == 1
    assert smith_group(directed_cycle(2)).unit_count == 2
    assert smith_group(directed_path(2)).unit_count == 1
