import numpy as np
import pytest
from gmpy2 import mpq

from gl2aba import SpinChainModel, TwistMatrix
from gl2aba.scalars import Mode

XI5 = (mpq(0), mpq(1, 7), mpq(-2, 5), mpq(3, 11), mpq(-4, 13))


def chain(L, mode=Mode.EXACT):
    m = SpinChainModel(XI5[:L], 1)
    return m if mode is Mode.EXACT else m.as_float()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def model3():
    return chain(3)


@pytest.fixture
def kappa():
    return TwistMatrix.from_rows([[1, 1], [1, 2]])


@pytest.fixture
def homogeneous2():
    return SpinChainModel.homogeneous(2, 1)
