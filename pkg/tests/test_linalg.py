from fractions import Fraction

from lndkernel.linalg import Echelon, bareiss_det, nullspace, primitive_vector, rank, solve


def test_nullspace_of_dependent_columns():
    cols = [{0: 1}, {0: 2}, {1: 1}]
    ns = nullspace(cols)
    assert ns == [[-2, 1, 0]]


def test_solve_and_unsolvable():
    cols = [{0: 1, 1: 1}, {1: 2}]
    c = solve(cols, {0: 3, 1: 5})
    assert c == [3, 1]
    assert solve([{0: 1}], {1: 1}) is None


def test_rank():
    assert rank([{0: 1}, {0: 2}, {1: 3}, {0: 1, 1: 1}]) == 2
    assert rank([]) == 0


def test_echelon_express_and_canonical():
    e = Echelon()
    assert e.add({2: 1, 0: 1}, "a") is None
    assert e.add({1: 1}, "b") is None
    assert e.express({2: 2, 1: 3, 0: 2}) == {"a": 2, "b": 3}
    assert e.canonical({2: 1}) == {0: -1}
    assert e.contains({2: 5, 0: 5})
    assert e.add({2: 3, 0: 3, 1: 1}, "c") == {"a": -3, "b": -1, "c": 1}


def test_primitive_vector():
    assert primitive_vector([Fraction(-1, 2), Fraction(1, 3), 0]) == [3, -2, 0]
    assert primitive_vector([0, 0]) == [0, 0]


def test_bareiss():
    assert bareiss_det([[1, 1], [0, 2]]) == 2
    assert bareiss_det([[2, 1, 0], [1, 2, 1], [0, 1, 2]]) == 4
    assert bareiss_det([[1, 2], [2, 4]]) == 0
    assert bareiss_det([[0, 1], [1, 0]]) == -1
