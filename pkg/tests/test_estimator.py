import doctest

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import matwaring.estimator
from matwaring import WaringDecomposer
from matwaring.exceptions import DimensionMismatch, Singular
from matwaring.linalg import mat_pow, matmul, max_abs, to_approx_matrix

from conftest import mat


def test_params_roundtrip():
    est = WaringDecomposer(k=3, precision_bits=128, seed=7, retries=5)
    assert est.get_params() == {"k": 3, "precision_bits": 128, "seed": 7, "retries": 5}
    other = clone(est).set_params(k=4)
    assert other.k == 4 and est.k == 3


def test_fit_attributes():
    est = WaringDecomposer(k=3).fit([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    assert est.n_ == 3 and est.r0_ == 2
    assert est.verdict_.tag == "not_surjective"


def test_decompose_predict_transform():
    A1, A2 = mat([[2, 0], [0, 1]]), mat([[0, 1], [0, 0]])
    est = WaringDecomposer(k=2).fit(A1, A2)
    Cs = [mat([[1, 2], [3, 4]]), mat([[0, 0], [0, 0]])]
    assert est.predict(Cs) == ["solved", "solved"]
    for C, (X1, X2) in zip(Cs, est.transform(Cs)):
        lhs = matmul(to_approx_matrix(A1), mat_pow(X1, 2)) + matmul(to_approx_matrix(A2), mat_pow(X2, 2))
        assert max_abs(lhs - to_approx_matrix(C)) <= 2.0 ** -128


def test_transform_none_when_not_in_image():
    est = WaringDecomposer(k=3).fit(mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), mat([[0, 1, 0], [0, 0, 0], [0, 0, 0]]))
    C = mat([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    assert est.predict([C]) == ["not_in_image"]
    assert est.transform([C]) == [None]


def test_not_fitted():
    with pytest.raises(NotFittedError):
        WaringDecomposer().decompose([[1]])


@pytest.mark.parametrize("params", [{"k": 1}, {"k": 2.5}, {"precision_bits": 32}])
def test_bad_params(params):
    with pytest.raises(ValueError):
        WaringDecomposer(**params).fit([[1]], [[0]])


def test_bad_shapes():
    with pytest.raises(DimensionMismatch):
        WaringDecomposer().fit([[1]], [[1, 0], [0, 1]])
    est = WaringDecomposer().fit([[1]], [[0]])
    with pytest.raises(DimensionMismatch):
        est.decompose([[1, 0], [0, 1]])


def test_singular_a1():
    with pytest.raises(Singular):
        WaringDecomposer().fit([[0]], [[1]])


def test_docstring_example():
    failures, _ = doctest.testmod(matwaring.estimator)
    assert failures == 0
