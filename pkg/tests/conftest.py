import numpy as np
import pytest

from splitvi.hilbert import scaled_identity
from splitvi.operators import (
    make_diagonal_ism,
    make_scaled_identity_monotone,
    make_scaled_strongly_monotone,
)
from splitvi.problems import SviProblem, build_example1, build_example2


@pytest.fixture(scope="session")
def ex1():
    return build_example1(200)


@pytest.fixture(scope="session")
def ex2():
    return build_example2()


def scalar_problem(b1=3.0, b2=7.0, fc1=2.0, fc2=1.0, a=1.0, fF=4.0):
    """Dim-1 problem with every map linear: B1=b1, B2=b2, f1=fc1, f2=fc2, A=a, F=fF."""
    return SviProblem(
        B1=make_scaled_identity_monotone(b1, 1),
        B2=make_scaled_identity_monotone(b2, 1),
        f1=make_diagonal_ism([fc1]),
        f2=make_diagonal_ism([fc2]),
        A=scaled_identity(a, 1),
        F=make_scaled_strongly_monotone(fF, 1),
    )


@pytest.fixture
def one_d():
    return scalar_problem()


def example1_matrix(dim):
    """Dense truncation of x -> (x1, x1, x2/2, x3/3, ...), written out entry by entry."""
    M = np.zeros((dim, dim))
    M[0, 0] = 1.0
    M[1, 0] = 1.0
    for k in range(2, dim):  # row k (0-based) is x_k / k with x 1-based
        M[k, k - 1] = 1.0 / k
    return M
