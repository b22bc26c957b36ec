import math

import numpy as np
import pytest

from pontsys.colligation import (
    BareRealization,
    Colligation,
    SystemKind,
    adjoint_system,
    classify,
    controllability_matrix,
    direct_sum,
    is_dilation_of,
    krylov_report,
    markov,
    observability_matrix,
    realize_from_taylor,
    restriction,
    simp_kar_check,
    state_change,
    system_operator,
    to_canonical,
    transfer_eval,
    unitary_similarity,
    weak_similarity,
)
from pontsys.exceptions import (
    DimensionMismatchError,
    InputError,
    OrderAmbiguityError,
    PoleProximityError,
    PreconditionError,
)
from pontsys.indefinite import (
    IndefiniteSubspace,
    MetricClass,
    SignatureSpace,
    SubspaceKind,
    metric_classify,
    same_span,
)
from pontsys.sampling import (
    random_conservative_colligation,
    random_j_unitary,
    random_passive_colligation,
)

ROOT3 = math.sqrt(3.0)


def blaschke_system(alpha):
    """Conservative scalar system for (z - alpha) / (1 - conj(alpha) z)."""
    alpha = complex(alpha)
    r = math.sqrt(1.0 - abs(alpha) ** 2)
    return Colligation(SignatureSpace(1, 0), 1, 1,
                       [[np.conj(alpha)]], [[r]], [[r]], [[-alpha]])


def inverse_blaschke_system(alpha):
    """Its inverse: one negative state square, transfer 1/b_alpha."""
    alpha = complex(alpha)
    r = math.sqrt(1.0 - abs(alpha) ** 2)
    return Colligation(SignatureSpace(0, 1), 1, 1,
                       [[1.0 / alpha]], [[-r / alpha]], [[r / alpha]],
                       [[-1.0 / alpha]])


def blaschke(alpha, z):
    return (z - alpha) / (1.0 - np.conj(alpha) * z)


class TestConstruction:
    def test_block_shapes_enforced(self):
        with pytest.raises(DimensionMismatchError):
            Colligation(SignatureSpace(1, 0), 1, 1,
                        [[0.5]], [[1.0], [2.0]], [[1.0]], [[0.0]])
        with pytest.raises(DimensionMismatchError):
            BareRealization(np.eye(2), np.ones((2, 1)), np.ones((1, 1)), np.ones((1, 1)))

    def test_system_operator_signs(self):
        sys1 = inverse_blaschke_system(0.5)
        T, dom, cod = system_operator(sys1)
        assert T.shape == (2, 2)
        assert np.allclose(dom.signs, [-1.0, 1.0])
        assert np.allclose(cod.signs, [-1.0, 1.0])
        assert (dom.pos, dom.neg) == (1, 1)
        assert sys1.kappa == 1

    def test_half_disc_oracle_operator(self):
        # alpha = 1/2 gives the explicit symmetric system operator
        T, _, _ = system_operator(blaschke_system(0.5))
        expect = np.array([[0.5, ROOT3 / 2], [ROOT3 / 2, -0.5]])
        assert np.allclose(T, expect)


class TestClassify:
    def test_blaschke_is_conservative(self):
        cls = classify(blaschke_system(0.3 + 0.4j))
        assert cls.kind == SystemKind.CONSERVATIVE
        assert cls.controllable and cls.observable and cls.simple and cls.minimal

    def test_inverse_blaschke_is_conservative(self):
        cls = classify(inverse_blaschke_system(0.5))
        assert cls.kind == SystemKind.CONSERVATIVE
        assert cls.minimal

    def test_random_ensembles(self):
        rng = np.random.default_rng(11)
        for neg in (0, 1, 2):
            sp = SignatureSpace(3, neg)
            con = random_conservative_colligation(rng, sp, 2)
            assert classify(con, with_krylov=False).kind == SystemKind.CONSERVATIVE
            pas = random_passive_colligation(rng, sp, 2, 2, strict=0.2)
            assert classify(pas, with_krylov=False).is_passive

    def test_expansion_is_unclassified(self):
        sys1 = Colligation(SignatureSpace(1, 0), 1, 1,
                           [[1.0]], [[1.0]], [[1.0]], [[1.0]])
        assert classify(sys1, with_krylov=False).kind == SystemKind.NONE


class TestTransfer:
    def test_blaschke_values(self):
        sys1 = blaschke_system(0.5)
        for z in (0.0, 0.3, -0.7, 0.2 + 0.4j):
            assert abs(transfer_eval(sys1, z)[0, 0] - blaschke(0.5, z)) < 1e-12
        # boundary point z = 1 is still a regular point here
        assert abs(transfer_eval(sys1, 1.0)[0, 0] - 1.0) < 1e-12

    def test_inverse_blaschke_values(self):
        sys1 = inverse_blaschke_system(0.5)
        assert abs(sys1.A[0, 0] - 2.0) < 1e-12
        assert abs(sys1.D[0, 0] + 2.0) < 1e-12
        for z in (0.1, -0.3, 0.2 - 0.1j):
            assert abs(transfer_eval(sys1, z)[0, 0] - 1.0 / blaschke(0.5, z)) < 1e-10

    def test_pole_rejection(self):
        sys1 = inverse_blaschke_system(0.5)  # pole of the transfer at z = 1/2
        with pytest.raises(PoleProximityError) as info:
            transfer_eval(sys1, 0.5)
        assert abs(info.value.nearest_pole - 0.5) < 1e-12

    def test_empty_state(self):
        sys1 = Colligation(SignatureSpace(0, 0), 2, 2, np.zeros((0, 0)),
                           np.zeros((0, 2)), np.zeros((2, 0)), np.eye(2))
        assert np.allclose(transfer_eval(sys1, 0.9), np.eye(2))

    def test_markov_coefficients(self):
        sys1 = blaschke_system(0.5)
        assert abs(markov(sys1, 0)[0, 0] + 0.5) < 1e-12
        assert abs(markov(sys1, 1)[0, 0] - 0.75) < 1e-12
        alpha = 0.3 + 0.2j
        sys2 = blaschke_system(alpha)
        for k in range(1, 6):
            expect = (1 - abs(alpha) ** 2) * np.conj(alpha) ** (k - 1)
            assert abs(markov(sys2, k)[0, 0] - expect) < 1e-12
        with pytest.raises(InputError):
            markov(sys1, -1)

    def test_markov_matches_circle_quadrature(self):
        # independent route: Taylor coefficients via DFT on a safe radius.
        # Hilbert state keeps A a contraction, so every pole has modulus > 1
        # and the truncation error of the 64-node rule is negligible.
        rng = np.random.default_rng(19)
        sys1 = random_passive_colligation(rng, SignatureSpace(3, 0), 2, 2, strict=0.1)
        radius, nodes = 0.4, 64
        samples = []
        for j in range(nodes):
            z = radius * np.exp(2j * np.pi * j / nodes)
            samples.append(transfer_eval(sys1, z))
        stack = np.array(samples)
        for k in range(7):
            phases = np.exp(-2j * np.pi * k * np.arange(nodes) / nodes)
            coeff = (phases[:, None, None] * stack).mean(axis=0) / radius ** k
            assert np.linalg.norm(coeff - markov(sys1, k), 2) < 1e-9

    def test_adjoint_transfer_relation(self):
        rng = np.random.default_rng(3)
        sys1 = random_passive_colligation(rng, SignatureSpace(2, 1), 2, 3, strict=0.1)
        adj = adjoint_system(sys1)
        for z in (0.2, 0.3 - 0.1j, -0.25j):
            lhs = transfer_eval(adj, z)
            rhs = transfer_eval(sys1, np.conj(z)).conj().T
            assert np.linalg.norm(lhs - rhs, 2) < 1e-10

    def test_adjoint_is_involution(self):
        rng = np.random.default_rng(4)
        sys1 = random_passive_colligation(rng, SignatureSpace(1, 2), 2, 2, strict=0.05)
        back = adjoint_system(adjoint_system(sys1))
        for blk in "ABCD":
            assert np.allclose(getattr(back, blk), getattr(sys1, blk))


class TestKrylov:
    def test_minimal_blaschke(self):
        rep = krylov_report(blaschke_system(0.4))
        assert rep.controllable and rep.observable and rep.simple
        assert all(v == SubspaceKind.HILBERT for v in rep.complement_kinds.values())

    def test_decoupled_block_breaks_everything(self):
        # second state coordinate neither reachable nor observable
        sys1 = Colligation(SignatureSpace(2, 0), 1, 1,
                           [[0.5, 0.0], [0.0, 0.3]], [[0.8], [0.0]],
                           [[0.8, 0.0]], [[0.1]])
        rep = krylov_report(sys1)
        assert not rep.controllable and not rep.observable and not rep.simple
        assert rep.simple_space.dim == 1
        assert rep.complement_kinds["simple"] == SubspaceKind.HILBERT

    def test_resolvent_samples_match_reachable_span(self):
        # dual route: columns of (I - zA)^(-1) B over samples span the same space
        rng = np.random.default_rng(8)
        sys1 = random_passive_colligation(rng, SignatureSpace(3, 1), 2, 2, strict=0.1)
        n = sys1.state_dim
        cols = []
        for k in range(n + 2):
            z = 0.35 * np.exp(2j * np.pi * k / (n + 2))
            cols.append(np.linalg.solve(np.eye(n) - z * sys1.A, sys1.B))
        resolvent_span = np.hstack(cols)
        assert same_span(resolvent_span, controllability_matrix(sys1))

    def test_observability_matrix_shape(self):
        sys1 = blaschke_system(0.2)
        assert observability_matrix(sys1, powers=4).shape == (4, 1)

    def test_combined_complement_is_intersection_of_complements(self):
        from pontsys.indefinite import intersect_spans, orthocomplement_basis

        # reachable span is e1, observable span is e2, third mode is dead
        sys1 = Colligation(SignatureSpace(3, 0), 1, 1,
                           np.diag([0.3, 0.4, 0.5]),
                           [[0.2], [0.0], [0.0]],
                           [[0.0, 0.2, 0.0]], [[0.0]])
        rep = krylov_report(sys1)
        comp_c = orthocomplement_basis(rep.controllable_space)
        comp_o = orthocomplement_basis(rep.observable_space)
        comp_s = orthocomplement_basis(rep.simple_space)
        both = intersect_spans(comp_c, comp_o)
        assert both.shape[1] == comp_s.shape[1] == 1
        assert same_span(both, comp_s)
        assert same_span(comp_s, np.eye(3)[:, 2:])


class TestSimpKar:
    def test_minimal_negative_state_preserves_index(self):
        rep = simp_kar_check(inverse_blaschke_system(0.5))
        assert rep.index_preserving
        assert rep.kappa == 1

    def test_hidden_negative_block_fails(self):
        base = inverse_blaschke_system(0.5)
        # append a decoupled negative state square that the transfer cannot see
        sys1 = Colligation(SignatureSpace(0, 2), 1, 1,
                           [[base.A[0, 0], 0.0], [0.0, 1.5]],
                           [[base.B[0, 0]], [0.0]],
                           [[base.C[0, 0], 0.0]], base.D)
        rep = simp_kar_check(sys1)
        assert not rep.index_preserving
        assert rep.complement_kinds["simple"] == SubspaceKind.ANTIHILBERT


class TestRestriction:
    def test_restrict_to_leading_summand(self):
        rng = np.random.default_rng(5)
        sys1 = random_conservative_colligation(rng, SignatureSpace(2, 1), 2)
        sys2 = random_conservative_colligation(rng, SignatureSpace(1, 1), 2)
        big = direct_sum(sys1, sys2)
        basis = np.zeros((big.state_dim, 3), dtype=complex)
        basis[:3, :3] = np.eye(3)
        sub = IndefiniteSubspace(big.state, basis)
        small = restriction(big, sub)
        assert small.state.signs.tolist() == sys1.state.signs.tolist()
        # compression to an invariant regular summand is a similarity, so the
        # spectrum survives and the transfer splits into static second block
        assert np.allclose(np.sort_complex(np.linalg.eigvals(small.A)),
                           np.sort_complex(np.linalg.eigvals(sys1.A)))
        for z in (0.2, -0.3j):
            val = transfer_eval(small, z)
            assert np.linalg.norm(val[:2, :2] - transfer_eval(sys1, z), 2) < 1e-10
            assert np.linalg.norm(val[2:, 2:] - sys2.D, 2) < 1e-10
            assert np.linalg.norm(val[:2, 2:], 2) + np.linalg.norm(val[2:, :2], 2) < 1e-10

    def test_state_change_preserves_transfer(self):
        rng = np.random.default_rng(6)
        sp = SignatureSpace(2, 1)
        sys1 = random_conservative_colligation(rng, sp, 2)
        Z = random_j_unitary(rng, sp)
        sys2 = state_change(sys1, Z, sp)
        for z in (0.2, -0.4j):
            assert np.linalg.norm(
                transfer_eval(sys1, z) - transfer_eval(sys2, z), 2) < 1e-10

    def test_to_canonical(self):
        sp = SignatureSpace(1, 1, pattern=(-1, 1))
        sys1 = Colligation(sp, 1, 1, [[1.5, 0.2], [0.1, 0.4]],
                           [[1.0], [0.5]], [[0.3, 0.7]], [[0.2]])
        canon = to_canonical(sys1)
        assert canon.state.is_canonical
        assert canon.state.pos == 1 and canon.state.neg == 1
        for z in (0.1, 0.2j):
            assert np.linalg.norm(
                transfer_eval(sys1, z) - transfer_eval(canon, z), 2) < 1e-12


class TestDilation:
    @staticmethod
    def build_dilation(small, extra):
        """Prepend an invariant, unobserved Hilbert block of size extra."""
        rng = np.random.default_rng(17)
        n = small.state_dim
        A_D = 0.3 * random_j_unitary(rng, SignatureSpace(extra, 0))
        Y = 0.2 * rng.standard_normal((extra, n))
        B_D = 0.1 * rng.standard_normal((extra, small.input_dim))
        A = np.block([[A_D, Y], [np.zeros((n, extra)), small.A]])
        B = np.vstack([B_D, small.B])
        C = np.hstack([np.zeros((small.output_dim, extra)), small.C])
        state = SignatureSpace.from_signs(
            np.concatenate([np.ones(extra), small.state.signs]))
        return Colligation(state, small.input_dim, small.output_dim, A, B, C, small.D)

    def test_search_finds_decomposition(self):
        small = blaschke_system(0.5)
        big = self.build_dilation(small, 2)
        report = is_dilation_of(big, small)
        assert report
        assert report.defects["transfer mismatch"] < 1e-10

    def test_explicit_decomposition(self):
        small = inverse_blaschke_system(0.4)
        big = self.build_dilation(small, 1)
        D_part = np.array([[1.0], [0.0]], dtype=complex)
        X_part = np.array([[0.0], [1.0]], dtype=complex)
        Dstar_part = np.zeros((2, 0), dtype=complex)
        report = is_dilation_of(big, small,
                                decomposition=(D_part, X_part, Dstar_part))
        assert report

    def test_wrong_small_system_rejected(self):
        small = blaschke_system(0.5)
        big = self.build_dilation(small, 2)
        other = blaschke_system(0.3)
        report = is_dilation_of(big, other)
        assert not report
        assert "transfer" in report.reason or "dimension" in report.reason


class TestSimilarity:
    def test_unitary_similarity_round_trip(self):
        rng = np.random.default_rng(7)
        sp = SignatureSpace(2, 1)
        sys1 = random_conservative_colligation(rng, sp, 2)
        Z = random_j_unitary(rng, sp)
        sys2 = state_change(sys1, Z, sp)
        sim = unitary_similarity(sys1, sys2)
        assert sim is not None
        assert metric_classify(sim.Z, sp, sp) == MetricClass.UNITARY
        assert max(sim.residuals.values()) < 1e-9

    def test_unitary_similarity_rejects_balanced_form(self):
        sys1 = blaschke_system(0.5)
        bare = realize_from_taylor([markov(sys1, k) for k in range(6)])
        sys2 = Colligation(SignatureSpace(1, 0), 1, 1, bare.A, bare.B, bare.C, bare.D)
        # same transfer function, but the balanced form is not conservative
        assert unitary_similarity(sys1, sys2) is None
        weak = weak_similarity(sys1, sys2)
        assert weak.residuals["A"] < 1e-10
        assert abs(np.linalg.det(weak.Z)) > 1e-6

    def test_weak_similarity_needs_minimal(self):
        sys1 = Colligation(SignatureSpace(2, 0), 1, 1,
                           [[0.5, 0.0], [0.0, 0.3]], [[0.8], [0.0]],
                           [[0.8, 0.0]], [[0.1]])
        with pytest.raises(PreconditionError):
            weak_similarity(sys1, blaschke_system(0.2))

    def test_weak_similarity_needs_matching_taylor(self):
        with pytest.raises(PreconditionError):
            weak_similarity(blaschke_system(0.5), blaschke_system(0.3))


class TestRealize:
    def test_scalar_blaschke_recovered(self):
        sys1 = blaschke_system(0.5)
        coeffs = [markov(sys1, k) for k in range(6)]
        bare = realize_from_taylor(coeffs)
        assert bare.state_dim == 1
        sys2 = Colligation(SignatureSpace(1, 0), 1, 1, bare.A, bare.B, bare.C, bare.D)
        for k in range(6):
            assert np.linalg.norm(markov(sys2, k) - coeffs[k], 2) < 1e-10

    def test_mimo_direct_sum_recovered(self):
        big = direct_sum(blaschke_system(0.5), blaschke_system(-0.3))
        coeffs = [markov(big, k) for k in range(8)]
        bare = realize_from_taylor(coeffs)
        assert bare.state_dim == 2
        sys2 = Colligation(SignatureSpace(2, 0), 2, 2, bare.A, bare.B, bare.C, bare.D)
        for z in (0.2, -0.1 + 0.3j):
            assert np.linalg.norm(
                transfer_eval(sys2, z) - transfer_eval(big, z), 2) < 1e-9

    def test_unstable_state_data(self):
        # Taylor data of a negative-index system realizes fine; metric comes later
        sys1 = inverse_blaschke_system(0.5)
        coeffs = [markov(sys1, k) for k in range(6)]
        bare = realize_from_taylor(coeffs)
        assert bare.state_dim == 1
        assert abs(np.linalg.eigvals(bare.A)[0] - 2.0) < 1e-8

    def test_order_bound_too_small(self):
        # scalar order-two data cannot hide inside one-block windows
        sys1 = Colligation(SignatureSpace(2, 0), 1, 1,
                           [[0.5, 0.0], [0.0, -0.3]], [[1.0], [1.0]],
                           [[0.25, 0.25]], [[0.0]])
        coeffs = [markov(sys1, k) for k in range(4)]
        with pytest.raises(OrderAmbiguityError):
            realize_from_taylor(coeffs, order_bound=1)

    def test_zero_function(self):
        coeffs = [np.zeros((1, 1)) for _ in range(6)]
        bare = realize_from_taylor(coeffs)
        assert bare.state_dim == 0

    def test_not_enough_coefficients(self):
        with pytest.raises(PreconditionError):
            realize_from_taylor([np.eye(1)] * 3, order_bound=1)
