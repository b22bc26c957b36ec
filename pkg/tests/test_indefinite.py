"""Tests for the signature-metric linear algebra core."""

import numpy as np
import pytest

from pontsys.exceptions import (
    AmbiguousSpectrumError,
    IndefiniteDefectError,
    InputError,
    NonRegularSubspaceError,
)
from pontsys.indefinite import (
    DEFAULT_TOL,
    IndefiniteSubspace,
    MetricClass,
    SignatureSpace,
    SpectralRegion,
    SubspaceKind,
    Tolerances,
    canonical_basis,
    column_space,
    eig_general,
    eig_hermitian,
    inertia,
    intersect_spans,
    j_adjoint,
    j_complement,
    j_inner,
    j_projection,
    metric_classify,
    metric_defects,
    nullspace,
    orthocomplement_basis,
    principal_angles,
    psd_factor,
    same_span,
    spectral_subspace,
    subspace_classify,
)


def random_invertible(rng, n, cond_bound=50.0):
    # conditioning guard keeps congruence numerically faithful
    while True:
        S = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        sv = np.linalg.svd(S, compute_uv=False)
        if sv[0] / sv[-1] < cond_bound:
            return S


def random_j_unitary(rng, signs, steps=6):
    """Product of plane rotations: unitary on equal signs, hyperbolic across."""
    n = len(signs)
    U = np.eye(n, dtype=complex)
    for _ in range(steps):
        i, j = rng.integers(0, n, size=2)
        if i == j:
            continue
        G = np.eye(n, dtype=complex)
        phase = np.exp(2j * np.pi * rng.random())
        if signs[i] == signs[j]:
            t = rng.random() * 2 * np.pi
            G[i, i] = np.cos(t)
            G[j, j] = np.cos(t)
            G[i, j] = -np.sin(t) * phase
            G[j, i] = np.sin(t) * np.conj(phase)
        else:
            t = rng.random() * 0.7
            G[i, i] = np.cosh(t)
            G[j, j] = np.cosh(t)
            G[i, j] = np.sinh(t) * phase
            G[j, i] = np.sinh(t) * np.conj(phase)
        U = G @ U
    return U


class TestSignatureSpace:
    def test_metric_matrix(self):
        sp = SignatureSpace(2, 1)
        assert np.allclose(sp.J, np.diag([1, 1, -1]))
        assert sp.J.shape == (3, 3)
        assert np.allclose(sp.J @ sp.J, np.eye(3))

    def test_pattern_roundtrip(self):
        sp = SignatureSpace.from_signs([1, -1, 1])
        assert (sp.pos, sp.neg) == (2, 1)
        assert np.allclose(sp.J, np.diag([1, -1, 1]))
        perm = sp.canonical_permutation()
        assert np.allclose(sp.signs[perm], [1, 1, -1])

    def test_canonical_signs_need_no_pattern(self):
        assert SignatureSpace.from_signs([1, 1, -1]).pattern is None

    def test_invalid_pattern_rejected(self):
        with pytest.raises(InputError):
            SignatureSpace(1, 1, pattern=(1, 2))
        with pytest.raises(InputError):
            SignatureSpace(2, 0, pattern=(1, -1))

    def test_tolerances_validated(self):
        with pytest.raises(InputError):
            Tolerances(rank_tol=0.0)
        with pytest.raises(InputError):
            Tolerances(disc_samples=0)


class TestInnerAndAdjoint:
    def test_negative_direction(self):
        sp = SignatureSpace(1, 1)
        e2 = np.array([0.0, 1.0])
        assert j_inner(e2, e2, sp) == pytest.approx(-1.0)

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(11)
        sp = SignatureSpace(2, 2)
        for _ in range(25):
            x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            assert j_inner(x, y, sp) == pytest.approx(np.conj(j_inner(y, x, sp)))

    def test_adjoint_example(self):
        sp = SignatureSpace(1, 1)
        M = np.array([[0.0, 1.0], [0.0, 0.0]])
        expected = np.array([[0.0, 0.0], [-1.0, 0.0]])
        assert np.allclose(j_adjoint(M, sp, sp), expected)

    def test_adjoint_involutive_and_pairing(self):
        rng = np.random.default_rng(3)
        dom = SignatureSpace(2, 1)
        cod = SignatureSpace(1, 2)
        for _ in range(20):
            M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            Ms = j_adjoint(M, dom, cod)
            assert np.allclose(j_adjoint(Ms, cod, dom), M)
            x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            assert j_inner(M @ x, y, cod) == pytest.approx(j_inner(x, Ms @ y, dom))

    def test_adjoint_reverses_products(self):
        rng = np.random.default_rng(7)
        a = SignatureSpace(2, 1)
        b = SignatureSpace(1, 1)
        c = SignatureSpace(2, 2)
        M = rng.standard_normal((b.dim, a.dim)) + 0j
        N = rng.standard_normal((c.dim, b.dim)) + 0j
        assert np.allclose(j_adjoint(N @ M, a, c),
                           j_adjoint(M, a, b) @ j_adjoint(N, b, c))


class TestInertia:
    def test_diagonal_example(self):
        assert tuple(inertia(np.diag([2.0, -3.0, 0.0]))) == (1, 1, 1)

    def test_empty(self):
        assert tuple(inertia(np.zeros((0, 0)))) == (0, 0, 0)

    def test_congruence_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            n = rng.integers(1, 13)
            d = rng.choice([-1.0, 1.0, 2.5, -0.5], size=n)
            H = np.diag(d)
            S = random_invertible(rng, n)
            got = inertia(S.conj().T @ H @ S)
            want = inertia(H)
            assert tuple(got) == tuple(want)


class TestMetricClassify:
    def test_scaled_identity_contraction(self):
        sp = SignatureSpace(2, 0)
        assert metric_classify(0.5 * np.eye(2), sp, sp) == MetricClass.CONTRACTION

    def test_identity_unitary(self):
        sp = SignatureSpace(1, 1)
        assert metric_classify(np.eye(2), sp, sp) == MetricClass.UNITARY

    def test_hyperbolic_rotation_unitary(self):
        sp = SignatureSpace(1, 1)
        t = 0.83
        M = np.array([[np.cosh(t), np.sinh(t)], [np.sinh(t), np.cosh(t)]])
        assert metric_classify(M, sp, sp) == MetricClass.UNITARY

    def test_isometry_into_larger_space(self):
        dom = SignatureSpace(1, 0)
        cod = SignatureSpace(2, 0)
        M = np.array([[1.0], [0.0]])
        assert metric_classify(M, dom, cod) == MetricClass.ISOMETRY
        assert metric_classify(M.T, cod, dom) == MetricClass.COISOMETRY

    def test_expansion_is_none(self):
        sp = SignatureSpace(2, 0)
        assert metric_classify(2.0 * np.eye(2), sp, sp) == MetricClass.NONE

    def test_unitary_closed_under_adjoint(self):
        rng = np.random.default_rng(19)
        sp = SignatureSpace(2, 2)
        signs = sp.signs
        for _ in range(15):
            U = random_j_unitary(rng, signs)
            assert metric_classify(U, sp, sp) == MetricClass.UNITARY
            assert metric_classify(j_adjoint(U, sp, sp), sp, sp) == MetricClass.UNITARY

    def test_unitary_defects_vanish(self):
        sp = SignatureSpace(1, 1)
        t = 0.4
        M = np.array([[np.cosh(t), np.sinh(t)], [np.sinh(t), np.cosh(t)]])
        primal, dual = metric_defects(M, sp, sp)
        assert np.linalg.norm(primal) < 1e-12
        assert np.linalg.norm(dual) < 1e-12


class TestSubspaces:
    def test_neutral_vector_degenerate(self):
        sp = SignatureSpace(1, 1)
        S = IndefiniteSubspace(sp, np.array([[1.0], [1.0]]))
        assert subspace_classify(S) == SubspaceKind.DEGENERATE

    def test_kinds(self):
        sp = SignatureSpace(1, 1)
        e1 = IndefiniteSubspace(sp, np.array([[1.0], [0.0]]))
        e2 = IndefiniteSubspace(sp, np.array([[0.0], [1.0]]))
        both = IndefiniteSubspace(sp, np.eye(2))
        assert subspace_classify(e1) == SubspaceKind.HILBERT
        assert subspace_classify(e2) == SubspaceKind.ANTIHILBERT
        assert subspace_classify(both) == SubspaceKind.REGULAR

    def test_zero_subspace_is_hilbert(self):
        sp = SignatureSpace(1, 1)
        S = IndefiniteSubspace(sp, np.zeros((2, 0)))
        assert subspace_classify(S) == SubspaceKind.HILBERT

    def test_rank_deficient_basis_rejected(self):
        sp = SignatureSpace(2, 0)
        with pytest.raises(InputError):
            IndefiniteSubspace(sp, np.array([[1.0, 1.0], [0.0, 0.0]]))

    def test_projection_properties(self):
        rng = np.random.default_rng(23)
        sp = SignatureSpace(2, 2)
        for _ in range(20):
            V = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
            S = IndefiniteSubspace(sp, V)
            if subspace_classify(S) == SubspaceKind.DEGENERATE:
                continue
            P = j_projection(S)
            assert np.allclose(P @ P, P, atol=1e-8)
            assert np.allclose(j_adjoint(P, sp, sp), P, atol=1e-8)
            assert np.allclose(P @ V, V, atol=1e-8)

    def test_projection_of_degenerate_raises(self):
        sp = SignatureSpace(1, 1)
        S = IndefiniteSubspace(sp, np.array([[1.0], [1.0]]))
        with pytest.raises(NonRegularSubspaceError):
            j_projection(S)

    def test_complement_dimensions_add(self):
        sp = SignatureSpace(2, 1)
        S = IndefiniteSubspace(sp, np.array([[1.0, 0], [0, 1.0], [0, 0]]))
        C = j_complement(S)
        assert S.dim + C.dim == sp.dim
        # complement vectors are metric-orthogonal to the subspace
        cross = S.basis.conj().T @ (sp.signs[:, None] * C.basis)
        assert np.linalg.norm(cross) < 1e-10

    def test_annihilator_of_degenerate_exists(self):
        sp = SignatureSpace(1, 1)
        S = IndefiniteSubspace(sp, np.array([[1.0], [1.0]]))
        N = orthocomplement_basis(S)
        assert N.shape[1] == 1
        # for a neutral line the annihilator contains the line itself
        assert same_span(N, S.basis)

    def test_canonical_basis_gram(self):
        rng = np.random.default_rng(2)
        sp = SignatureSpace(2, 2)
        for _ in range(10):
            V = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
            S = IndefiniteSubspace(sp, V)
            if subspace_classify(S) != SubspaceKind.REGULAR:
                continue
            W, signs = canonical_basis(S)
            G = W.conj().T @ (sp.signs[:, None] * W)
            assert np.allclose(G, np.diag(signs), atol=1e-9)
            assert same_span(W, V)
            # positive columns come first
            assert list(signs) == sorted(signs, reverse=True)


class TestFactorizations:
    def test_psd_factor_reconstructs(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            n = rng.integers(1, 9)
            r = rng.integers(0, n + 1)
            E0 = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
            M = E0 @ E0.conj().T
            E = psd_factor(M)
            assert np.allclose(E @ E.conj().T, M, atol=1e-8 * max(1, np.linalg.norm(M)))
            assert E.shape[1] == np.linalg.matrix_rank(M, tol=1e-9 * max(1, np.linalg.norm(M, 2)))

    def test_psd_factor_rejects_indefinite(self):
        with pytest.raises(IndefiniteDefectError):
            psd_factor(np.diag([1.0, -1.0]))

    def test_psd_factor_clamps_noise(self):
        M = np.diag([1.0, -1e-12])
        E = psd_factor(M)
        assert E.shape[1] == 1

    def test_eig_hermitian_reconstructs(self):
        rng = np.random.default_rng(41)
        A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        H = (A + A.conj().T) / 2
        w, V = eig_hermitian(H)
        assert np.allclose(V @ np.diag(w) @ V.conj().T, H, atol=1e-10)

    def test_eig_general_schur(self):
        rng = np.random.default_rng(43)
        A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        vals, T, Z = eig_general(A)
        assert np.allclose(Z @ T @ Z.conj().T, A, atol=1e-10)
        assert np.allclose(np.sort_complex(vals), np.sort_complex(np.linalg.eigvals(A)), atol=1e-8)


class TestSpectralSubspace:
    def test_jordan_block_outside(self):
        sp = SignatureSpace(2, 0)
        A = np.array([[2.0, 1.0], [0.0, 2.0]])
        S = spectral_subspace(A, sp, SpectralRegion.OUTSIDE_CLOSED_DISC)
        assert S.dim == 2

    def test_split_mixed_spectrum(self):
        sp = SignatureSpace(1, 1)
        A = np.diag([0.5, 2.0])
        inside = spectral_subspace(A, sp, SpectralRegion.INSIDE_OPEN_DISC)
        outside = spectral_subspace(A, sp, SpectralRegion.OUTSIDE_CLOSED_DISC)
        assert same_span(inside.basis, np.array([[1.0], [0.0]]))
        assert same_span(outside.basis, np.array([[0.0], [1.0]]))

    def test_invariance(self):
        rng = np.random.default_rng(4)
        sp = SignatureSpace(3, 1)
        for _ in range(10):
            A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            if np.min(np.abs(np.abs(np.linalg.eigvals(A)) - 1)) < 1e-3:
                continue
            S = spectral_subspace(A, sp, SpectralRegion.INSIDE_OPEN_DISC)
            if S.dim == 0:
                continue
            # invariant: A maps the subspace into itself
            resid = A @ S.basis - S.basis @ np.linalg.lstsq(S.basis, A @ S.basis, rcond=None)[0]
            assert np.linalg.norm(resid) < 1e-8

    def test_near_circle_raises(self):
        sp = SignatureSpace(2, 0)
        A = np.diag([1.0 + 1e-12, 0.3])
        with pytest.raises(AmbiguousSpectrumError):
            spectral_subspace(A, sp, SpectralRegion.INSIDE_OPEN_DISC)

    def test_exclude_mode_drops_band(self):
        sp = SignatureSpace(3, 0)
        A = np.diag([1.0, 0.3, 2.0])
        S = spectral_subspace(A, sp, SpectralRegion.OUTSIDE_CLOSED_DISC,
                              on_boundary="exclude")
        assert S.dim == 1
        band = spectral_subspace(A, sp, SpectralRegion.MODULUS_ONE_BAND)
        assert band.dim == 1


class TestSpanHelpers:
    def test_nullspace_and_column_space(self):
        M = np.array([[1.0, 2.0], [2.0, 4.0]])
        N = nullspace(M)
        assert N.shape[1] == 1
        assert np.linalg.norm(M @ N) < 1e-10
        C = column_space(M)
        assert C.shape[1] == 1

    def test_principal_angles_orthogonal_planes(self):
        A = np.array([[1.0, 0], [0, 1.0], [0, 0]])
        B = np.array([[0.0], [0.0], [1.0]])
        ang = principal_angles(A, B)
        assert ang.size == 1
        assert ang[0] == pytest.approx(np.pi / 2)

    def test_intersection(self):
        A = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        B = np.array([[0.0, 1.0], [0.0, 0.0], [1.0, 0.0]])
        I = intersect_spans(A, B)
        assert I.shape[1] == 1
        assert same_span(I, np.array([[1.0], [0.0], [0.0]]))
