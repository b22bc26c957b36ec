"""Deterministic example systems shared across the test modules."""

import math

import numpy as np

from pontsys.colligation import Colligation, SystemKind, classify
from pontsys.indefinite import SignatureSpace
from pontsys.products import cascade

ROOT3 = math.sqrt(3.0)


def blaschke_system(alpha):
    """Conservative one-state realization of (z - alpha)/(1 - conj(alpha) z),
    up to the conventional sign: the transfer value at 0 is -alpha."""
    alpha = complex(alpha)
    r = math.sqrt(1.0 - abs(alpha) ** 2)
    return Colligation(SignatureSpace(1, 0), 1, 1,
                       [[np.conj(alpha)]], [[r]], [[r]], [[-alpha]])


def inverse_blaschke_system(alpha):
    """Conservative negative-state realization of the reciprocal function."""
    alpha = complex(alpha)
    r = math.sqrt(1.0 - abs(alpha) ** 2)
    return Colligation(SignatureSpace(0, 1), 1, 1,
                       [[1.0 / alpha]], [[-r / alpha]], [[r / alpha]],
                       [[-1.0 / alpha]])


def identity_feedthrough(dim):
    return Colligation(SignatureSpace(0, 0), dim, dim,
                       np.zeros((0, 0)), np.zeros((0, dim)),
                       np.zeros((dim, 0)), np.eye(dim))


def shift_system():
    """One-state realization of the function z itself."""
    return Colligation(SignatureSpace(1, 0), 1, 1,
                       [[0.0]], [[1.0]], [[1.0]], [[0.0]])


def half_shift_system():
    """Strictly passive realization of z/2."""
    return Colligation(SignatureSpace(1, 0), 1, 1,
                       [[0.0]], [[1.0]], [[0.5]], [[0.0]])


def isometric_column_system():
    """Controllable isometric system with a one-dimensional negative state.

    The transfer function is the column [(1 - z/2)/(1 - 2z), sqrt(3)/2],
    which has unit norm on the circle and one negative square.
    """
    return Colligation(SignatureSpace(0, 1), 1, 2,
                       [[2.0]], [[ROOT3 / 2.0]],
                       [[ROOT3], [0.0]], [[1.0], [ROOT3 / 2.0]])


def row_schur_left_system(alpha_a=1.0 / 3.0, alpha_b=0.5):
    """Hilbert-state realization of the row (a(z) b(z), 1)/sqrt(2)
    with scalar Blaschke factors a and b at the two zero locations."""
    ab = cascade(blaschke_system(alpha_a), blaschke_system(alpha_b))
    return Colligation(
        SignatureSpace(2, 0), 2, 1,
        ab.A, np.hstack([ab.B, np.zeros((2, 1))]),
        ab.C / math.sqrt(2.0),
        np.array([[ab.D[0, 0] / math.sqrt(2.0), 1.0 / math.sqrt(2.0)]]))


def counterexample_observable_system(alpha_a=1.0 / 3.0, alpha_b=0.5):
    """Coisometric observable realization of 2^(-1/2) (a, 1/b).

    Assembled as a cascade of the conservative realization of diag(1, 1/b)
    with a coisometric realization of the row (a, 1)/sqrt(2); the pair has
    no common zero, so the cascade stays observable.
    """
    ra = math.sqrt(1.0 - alpha_a ** 2)
    rb = math.sqrt(1.0 - alpha_b ** 2)
    inv_diag = Colligation(
        SignatureSpace(0, 1), 2, 2,
        [[1.0 / alpha_b]],
        [[0.0, -rb / alpha_b]],
        [[0.0], [rb / alpha_b]],
        [[1.0, 0.0], [0.0, -1.0 / alpha_b]])
    row = Colligation(
        SignatureSpace(1, 0), 2, 1,
        [[alpha_a]], [[ra, 0.0]],
        [[ra / math.sqrt(2.0)]],
        [[-alpha_a / math.sqrt(2.0), 1.0 / math.sqrt(2.0)]])
    assert classify(row, with_krylov=False).kind == SystemKind.COISOMETRIC
    sys1 = cascade(inv_diag, row)
    cls = classify(sys1)
    assert cls.kind == SystemKind.COISOMETRIC and cls.observable
    return sys1


def shift_numerator_counterexample(alpha_b=0.5):
    """Coisometric observable realization of (z, 1/b)/sqrt(2).

    This is the worked counterexample with the inner factor taken to be
    the plain shift: a block-diagonal realization of diag(z, 1/b)
    composed with the constant co-isometric row (1, 1)/sqrt(2).
    """
    rb = math.sqrt(1.0 - alpha_b ** 2)
    diag_sys = Colligation(
        SignatureSpace.from_signs([1.0, -1.0]), 2, 2,
        np.diag([0.0, 1.0 / alpha_b]),
        np.diag([1.0, -rb / alpha_b]),
        np.diag([1.0, rb / alpha_b]),
        np.diag([0.0, -1.0 / alpha_b]))
    row = Colligation(
        SignatureSpace(0, 0), 2, 1,
        np.zeros((0, 0)), np.zeros((0, 2)), np.zeros((1, 0)),
        np.array([[1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)]]))
    sys1 = cascade(diag_sys, row)
    cls = classify(sys1)
    assert cls.kind == SystemKind.COISOMETRIC and cls.observable
    return sys1
