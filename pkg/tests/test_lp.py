import random
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from plconvex.lp import seidel_lp


def test_simple_triangle():
    # max x + y subject to x + 2y <= 1, 2x + y <= 1 within the unit box
    sol = seidel_lp([((1, 2), 1), ((2, 1), 1)], (1, 1))
    assert sol == [Fraction(1, 3), Fraction(1, 3)]


def test_infeasible():
    assert seidel_lp([((1,), -2)], (1,)) is None
    assert seidel_lp([((1, 0), 0), ((-1, 0), -1)], (0, 1)) is None


def test_matches_scipy_on_random_problems():
    rng = random.Random(4)
    for _ in range(200):
        d = rng.randint(1, 4)
        m = rng.randint(1, 12)
        A = [[rng.randint(-5, 5) for _ in range(d)] for _ in range(m)]
        b = [rng.randint(-3, 5) for _ in range(m)]
        c = [rng.randint(-3, 3) for _ in range(d)]
        sol = seidel_lp(list(zip(A, b)), c, rng=random.Random(1))
        ref = linprog(-np.array(c, float), A_ub=np.array(A, float), b_ub=np.array(b, float),
                      bounds=[(-1, 1)] * d, method="highs")
        if ref.status == 2:
            assert sol is None
            continue
        assert sol is not None
        for row, rhs in zip(A, b):
            assert sum(Fraction(x) * y for x, y in zip(row, sol)) <= rhs
        assert all(abs(x) <= 1 for x in sol)
        value = float(sum(x * y for x, y in zip(c, sol)))
        assert abs(value - (-ref.fun)) < 1e-7
