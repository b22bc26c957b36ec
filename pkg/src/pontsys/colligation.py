"""Operator colligations and their transfer functions.

A colligation { A, B, C, D } couples a signature state space with a
Hilbert input and output.  The system operator acts block-wise:

    [ x_next ]   [ A  B ] [ x ]
    [ y      ] = [ C  D ] [ u ]

and the transfer function is D + z C (I - z A)^(-1) B, holomorphic at 0.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum as _Enum

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    InputError,
    InternalConsistencyError,
    OrderAmbiguityError,
    PoleProximityError,
    PreconditionError,
)
from .indefinite import (
    DEFAULT_TOL,
    IndefiniteSubspace,
    MetricClass,
    SignatureSpace,
    SubspaceKind,
    as_matrix,
    canonical_basis,
    column_space,
    is_psd,
    j_adjoint,
    metric_classify,
    metric_defects,
    nullspace,
    orthocomplement_basis,
    subspace_classify,
)

__all__ = [
    "BareRealization",
    "Colligation",
    "SystemKind",
    "SystemClass",
    "KrylovReport",
    "SimpKarReport",
    "DilationReport",
    "SimilarityResult",
    "system_operator",
    "classify",
    "adjoint_system",
    "transfer_eval",
    "markov",
    "controllability_matrix",
    "observability_matrix",
    "krylov_report",
    "simp_kar_check",
    "restriction",
    "state_change",
    "to_canonical",
    "direct_sum",
    "is_dilation_of",
    "unitary_similarity",
    "weak_similarity",
    "realize_from_taylor",
]


@dataclass(frozen=True)
class BareRealization:
    """State-space data A, B, C, D with no metric attached to the state."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A, name="A")
        n = A.shape[0]
        if A.shape[1] != n:
            raise DimensionMismatchError("A must be square")
        D = as_matrix(self.D, name="D")
        B = as_matrix(self.B, rows=n, cols=D.shape[1], name="B")
        C = as_matrix(self.C, rows=D.shape[0], cols=n, name="C")
        for name, val in (("A", A), ("B", B), ("C", C), ("D", D)):
            object.__setattr__(self, name, val)

    @property
    def state_dim(self):
        return self.A.shape[0]

    @property
    def input_dim(self):
        return self.D.shape[1]

    @property
    def output_dim(self):
        return self.D.shape[0]


@dataclass(frozen=True)
class Colligation:
    """System node with a signature state space and Hilbert input/output."""

    state: SignatureSpace
    input_dim: int
    output_dim: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        if self.input_dim < 0 or self.output_dim < 0:
            raise InputError("input_dim and output_dim must be nonnegative")
        n = self.state.dim
        A = as_matrix(self.A, rows=n, cols=n, name="A")
        B = as_matrix(self.B, rows=n, cols=self.input_dim, name="B")
        C = as_matrix(self.C, rows=self.output_dim, cols=n, name="C")
        D = as_matrix(self.D, rows=self.output_dim, cols=self.input_dim, name="D")
        for name, val in (("A", A), ("B", B), ("C", C), ("D", D)):
            object.__setattr__(self, name, val)

    @property
    def state_dim(self):
        return self.state.dim

    @property
    def kappa(self):
        return self.state.neg


def system_operator(system):
    """Block matrix [[A, B], [C, D]] with its domain and codomain spaces.

    Domain is the state space extended by the Hilbert input coordinates,
    codomain the state space extended by the output coordinates; the sign
    patterns keep the state block in place.
    """
    T = np.block([[system.A, system.B], [system.C, system.D]])
    state_signs = system.state.signs
    dom = SignatureSpace.from_signs(
        np.concatenate([state_signs, np.ones(system.input_dim)]))
    cod = SignatureSpace.from_signs(
        np.concatenate([state_signs, np.ones(system.output_dim)]))
    return T, dom, cod


class SystemKind(str, _Enum):
    """Metric class of the system operator."""

    NONE = "none"
    PASSIVE = "passive"
    ISOMETRIC = "isometric"
    COISOMETRIC = "coisometric"
    CONSERVATIVE = "conservative"


_METRIC_TO_KIND = {
    MetricClass.NONE: SystemKind.NONE,
    MetricClass.CONTRACTION: SystemKind.PASSIVE,
    MetricClass.ISOMETRY: SystemKind.ISOMETRIC,
    MetricClass.COISOMETRY: SystemKind.COISOMETRIC,
    MetricClass.UNITARY: SystemKind.CONSERVATIVE,
}


@dataclass(frozen=True)
class SystemClass:
    """Metric kind plus Krylov flags (None when not computed)."""

    kind: SystemKind
    controllable: bool | None = None
    observable: bool | None = None
    simple: bool | None = None
    minimal: bool | None = None

    @property
    def is_passive(self):
        return self.kind != SystemKind.NONE


def classify(system, tol=DEFAULT_TOL, with_krylov=True):
    """Metric classification of the system operator, with Krylov flags.

    Passive systems additionally satisfy the two-sided contraction checks
    on A, [A; C] and [A, B]; a failure there is an internal inconsistency.
    """
    T, dom, cod = system_operator(system)
    kind = _METRIC_TO_KIND[metric_classify(T, dom, cod, tol)]
    if kind != SystemKind.NONE:
        _check_bicontraction_corners(system, tol)
    if not with_krylov:
        return SystemClass(kind)
    rep = krylov_report(system, tol)
    return SystemClass(kind, rep.controllable, rep.observable, rep.simple,
                       rep.controllable and rep.observable)


def _relaxed(tol, factor=10.0):
    return replace(tol, psd_tol=min(0.5, factor * tol.psd_tol))


def _check_bicontraction_corners(system, tol):
    state_signs = system.state.signs
    loose = _relaxed(tol)
    corners = [
        (system.A, state_signs, state_signs),
        (np.vstack([system.A, system.C]), state_signs,
         np.concatenate([state_signs, np.ones(system.output_dim)])),
        (np.hstack([system.A, system.B]),
         np.concatenate([state_signs, np.ones(system.input_dim)]), state_signs),
    ]
    for M, dom, cod in corners:
        primal, dual = metric_defects(M, dom, cod)
        if not (is_psd(primal, loose) and is_psd(dual, loose)):
            raise InternalConsistencyError(
                "passive system operator with a non-bicontractive corner block")


def adjoint_system(system):
    """Adjoint system: metric adjoints of the blocks, input and output swapped.

    Its transfer function is z -> transfer(conj(z))* of the original.
    """
    sp = system.state
    return Colligation(
        sp, system.output_dim, system.input_dim,
        j_adjoint(system.A, sp, sp),
        j_adjoint(system.C, sp, system.output_dim),
        j_adjoint(system.B, system.input_dim, sp),
        system.D.conj().T,
    )


def _poles_from_state(A):
    if A.size == 0:
        return np.zeros(0, dtype=complex)
    lam = np.linalg.eigvals(A)
    lam = lam[np.abs(lam) > 1e-14]
    return 1.0 / lam


def transfer_eval(system, z, tol=DEFAULT_TOL):
    """Value D + z C (I - z A)^(-1) B of the transfer function at z.

    Rejects points where I - z A is numerically singular, reporting the
    nearest reciprocal eigenvalue of A as the offending pole.
    """
    z = complex(z)
    n = system.A.shape[0]
    if n == 0:
        return system.D.copy()
    M = np.eye(n) - z * system.A
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] <= tol.rank_tol * max(1.0, s[0]):
        poles = _poles_from_state(system.A)
        nearest = poles[np.argmin(np.abs(poles - z))] if poles.size else None
        raise PoleProximityError(z, nearest)
    return system.D + z * (system.C @ np.linalg.solve(M, system.B))


def markov(system, k):
    """Taylor coefficient of the transfer function: D at k=0, C A^(k-1) B after."""
    if k < 0:
        raise InputError("coefficient index must be nonnegative")
    if k == 0:
        return system.D.copy()
    return system.C @ np.linalg.matrix_power(system.A, k - 1) @ system.B


def controllability_matrix(system, powers=None):
    """Block matrix [B, AB, ..., A^(k-1)B]; k defaults to the state dimension."""
    n = system.state_dim
    powers = n if powers is None else powers
    blocks = []
    X = system.B.copy()
    for _ in range(powers):
        blocks.append(X)
        X = system.A @ X
    if not blocks:
        return np.zeros((n, 0), dtype=complex)
    return np.hstack(blocks)


def observability_matrix(system, powers=None):
    """Stacked [C; CA; ...; C A^(k-1)]; k defaults to the state dimension."""
    n = system.state_dim
    powers = n if powers is None else powers
    blocks = []
    X = system.C.copy()
    for _ in range(powers):
        blocks.append(X)
        X = X @ system.A
    if not blocks:
        return np.zeros((0, n), dtype=complex)
    return np.vstack(blocks)


@dataclass(frozen=True)
class KrylovReport:
    """Reachable, observable and combined state subspaces with their flags."""

    controllable_space: IndefiniteSubspace
    observable_space: IndefiniteSubspace
    simple_space: IndefiniteSubspace
    controllable: bool
    observable: bool
    simple: bool
    complement_kinds: dict


def krylov_report(system, tol=DEFAULT_TOL):
    """Spans of the iterated B and adjoint-C columns and their complements.

    Powers stop at the state dimension; higher powers add nothing at finite
    dimension.  The complement of the combined space is the intersection of
    the two individual complements.
    """
    sp = system.state
    n = sp.dim
    adj = adjoint_system(system)
    Kc = controllability_matrix(system)
    Ko = controllability_matrix(adj)  # columns span the observable subspace
    Xc = IndefiniteSubspace(sp, column_space(Kc, tol))
    Xo = IndefiniteSubspace(sp, column_space(Ko, tol))
    Xs = IndefiniteSubspace(sp, column_space(np.hstack([Kc, Ko]), tol))
    kinds = {
        "controllable": subspace_classify(
            IndefiniteSubspace(sp, orthocomplement_basis(Xc, tol)), tol),
        "observable": subspace_classify(
            IndefiniteSubspace(sp, orthocomplement_basis(Xo, tol)), tol),
        "simple": subspace_classify(
            IndefiniteSubspace(sp, orthocomplement_basis(Xs, tol)), tol),
    }
    return KrylovReport(Xc, Xo, Xs, Xc.dim == n, Xo.dim == n, Xs.dim == n, kinds)


@dataclass(frozen=True)
class SimpKarReport:
    """Index-preservation verdict from the Krylov complement classifications."""

    index_preserving: bool
    complement_kinds: dict
    kappa: int
    kappa_estimate: int | None = None
    cross_validated: bool | None = None


def simp_kar_check(system, tol=DEFAULT_TOL, cross_validate=False):
    """Whether the transfer function keeps the full negative index.

    Holds exactly when the complements of the Krylov subspaces are Hilbert
    (positive) subspaces.  With cross_validate the kernel-based negative
    squares estimate of the transfer function is compared against the
    state negative index.
    """
    rep = krylov_report(system, tol)
    kinds = rep.complement_kinds
    verdict = all(k == SubspaceKind.HILBERT for k in kinds.values())
    estimate = None
    agrees = None
    if cross_validate:
        from .schur import TransferFunction, negative_squares_estimate

        cert = negative_squares_estimate(TransferFunction(system), tol)
        estimate = cert.estimate
        agrees = bool(estimate == system.kappa) if verdict else None
    return SimpKarReport(verdict, kinds, system.kappa, estimate, agrees)


def state_change(system, Z, new_state):
    """Rewrite the system in new state coordinates x_new = Z x."""
    Zi = np.linalg.inv(Z)
    return Colligation(new_state, system.input_dim, system.output_dim,
                       Z @ system.A @ Zi, Z @ system.B, system.C @ Zi, system.D)


def to_canonical(system):
    """Permute state coordinates so the metric is diag(I_pos, -I_neg)."""
    if system.state.is_canonical:
        return system
    perm = system.state.canonical_permutation()
    P = np.eye(system.state_dim, dtype=complex)[perm, :]
    return state_change(system, P, system.state.canonical())


def direct_sum(first, second):
    """Block-diagonal juxtaposition of two systems (inputs and outputs stacked)."""
    state = SignatureSpace.from_signs(
        np.concatenate([first.state.signs, second.state.signs]))
    n1, n2 = first.state_dim, second.state_dim
    A = np.block([
        [first.A, np.zeros((n1, n2))],
        [np.zeros((n2, n1)), second.A]])
    B = np.block([
        [first.B, np.zeros((n1, second.input_dim))],
        [np.zeros((n2, first.input_dim)), second.B]])
    C = np.block([
        [first.C, np.zeros((first.output_dim, n2))],
        [np.zeros((second.output_dim, n1)), second.C]])
    D = np.block([
        [first.D, np.zeros((first.output_dim, second.input_dim))],
        [np.zeros((second.output_dim, first.input_dim)), second.D]])
    return Colligation(state, first.input_dim + second.input_dim,
                       first.output_dim + second.output_dim, A, B, C, D)


def restriction(big, subspace, tol=DEFAULT_TOL):
    """Compress a system to a regular subspace of its state space.

    The compressed main operator is P A restricted to the subspace; the
    output map restricts, the input map compresses, D is unchanged.
    """
    if subspace.ambient != big.state:
        raise DimensionMismatchError("subspace does not live in the state space")
    W, signs = canonical_basis(subspace, tol)
    state = SignatureSpace.from_signs(signs)
    ambient_signs = big.state.signs
    # coordinates of the metric projection: c = diag(signs) W* J x
    proj = signs[:, None] * (W.conj().T * ambient_signs[None, :])
    return Colligation(state, big.input_dim, big.output_dim,
                       proj @ big.A @ W, proj @ big.B, big.C @ W, big.D)


@dataclass(frozen=True)
class DilationReport:
    """Outcome of a dilation check with the residuals of each condition."""

    ok: bool
    defects: dict
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_dilation_of(big, small, tol=DEFAULT_TOL, decomposition=None):
    """Check that big dilates small across a three-part state decomposition.

    The decomposition (D, X, D_star) must be mutually metric-orthogonal and
    spanning, with A-invariant D annihilated by C, and adjoint-invariant
    D_star annihilated by the adjoint input map.  When no decomposition is
    supplied, D is taken as the annihilator of the observability matrix and
    D_star as that of the adjoint one, which realizes the canonical search.
    Transfer functions must agree on the disc sample plan.
    """
    from .sampling import disc_grid

    sp = big.state
    n = sp.dim
    defects = {}
    if decomposition is None:
        D_basis = nullspace(observability_matrix(big), tol)
        Dstar_basis = nullspace(observability_matrix(adjoint_system(big)), tol)
        overlap = min(D_basis.shape[1], Dstar_basis.shape[1])
        if overlap and intersect_dim(D_basis, Dstar_basis, tol) > 0:
            return DilationReport(False, defects,
                                  "search failed: candidate parts overlap; "
                                  "supply a decomposition")
        rest = IndefiniteSubspace(sp, np.hstack([D_basis, Dstar_basis]))
        if subspace_classify(rest, tol) == SubspaceKind.DEGENERATE:
            return DilationReport(False, defects,
                                  "search failed: degenerate candidate sum; "
                                  "supply a decomposition")
        X_basis = orthocomplement_basis(rest, tol)
    else:
        D_basis, X_basis, Dstar_basis = (
            part.basis if isinstance(part, IndefiniteSubspace)
            else as_matrix(part, rows=n) for part in decomposition)

    if D_basis.shape[1] + X_basis.shape[1] + Dstar_basis.shape[1] != n:
        return DilationReport(False, defects, "decomposition does not span the state")
    if X_basis.shape[1] != small.state_dim:
        return DilationReport(False, defects, "middle part has the wrong dimension")

    signs = sp.signs
    for (na, va), (nb, vb) in [(("D", D_basis), ("X", X_basis)),
                               (("D", D_basis), ("Dstar", Dstar_basis)),
                               (("X", X_basis), ("Dstar", Dstar_basis))]:
        if va.shape[1] and vb.shape[1]:
            cross = float(np.linalg.norm(va.conj().T @ (signs[:, None] * vb), 2))
            defects[f"orthogonality[{na},{nb}]"] = cross
            if cross > tol.metric_tol * 10:
                return DilationReport(False, defects,
                                      f"parts {na} and {nb} are not metric-orthogonal")

    adj = adjoint_system(big)
    checks = {
        "A-invariance of D": _invariance_defect(big.A, D_basis),
        "C annihilates D": float(np.linalg.norm(big.C @ D_basis, 2)) if D_basis.size else 0.0,
        "adjoint invariance of Dstar": _invariance_defect(adj.A, Dstar_basis),
        "adjoint input annihilates Dstar": float(
            np.linalg.norm(adj.C @ Dstar_basis, 2)) if Dstar_basis.size else 0.0,
    }
    defects.update(checks)
    for name, value in checks.items():
        if value > tol.metric_tol * 10:
            return DilationReport(False, defects, f"failed condition: {name}")

    mid = IndefiniteSubspace(sp, X_basis)
    if subspace_classify(mid, tol) == SubspaceKind.DEGENERATE:
        return DilationReport(False, defects, "middle part is degenerate")
    compressed = restriction(big, mid, tol)
    worst = 0.0
    for z in disc_grid(seed=tol.seed):
        try:
            worst = max(worst, float(np.linalg.norm(
                transfer_eval(big, z, tol) - transfer_eval(small, z, tol), 2)))
        except PoleProximityError:
            continue
    defects["transfer mismatch"] = worst
    if worst > 1e-9 * max(1.0, np.linalg.norm(small.D, 2)):
        return DilationReport(False, defects, "transfer functions differ on samples")
    if compressed.kappa != small.kappa:
        return DilationReport(False, defects, "compressed negative index differs")
    return DilationReport(True, defects)


def intersect_dim(A, B, tol=DEFAULT_TOL):
    from .indefinite import intersect_spans

    return intersect_spans(A, B, tol).shape[1]


def _invariance_defect(A, V):
    if V.shape[1] == 0:
        return 0.0
    coeff = np.linalg.lstsq(V, A @ V, rcond=None)[0]
    return float(np.linalg.norm(A @ V - V @ coeff, 2))


@dataclass(frozen=True)
class SimilarityResult:
    """State-space similarity between two systems: x2 = Z x1."""

    kind: str  # "unitary" or "weak"
    Z: np.ndarray
    residuals: dict


def _intertwining_residuals(s1, s2, Z):
    return {
        "A": float(np.linalg.norm(Z @ s1.A - s2.A @ Z, 2)),
        "B": float(np.linalg.norm(Z @ s1.B - s2.B, 2)),
        "C": float(np.linalg.norm(s1.C - s2.C @ Z, 2)),
        "D": float(np.linalg.norm(s1.D - s2.D, 2)),
    }


def unitary_similarity(s1, s2, tol=DEFAULT_TOL):
    """Metric-unitary state similarity, or None when none exists.

    Solves the intertwining relations in least squares and certifies that
    the solution is a metric unitary between the state spaces.
    """
    if (s1.state_dim != s2.state_dim or s1.kappa != s2.kappa
            or s1.input_dim != s2.input_dim or s1.output_dim != s2.output_dim):
        return None
    n = s1.state_dim
    if np.linalg.norm(s1.D - s2.D, 2) > tol.metric_tol * max(1.0, np.linalg.norm(s1.D, 2)):
        return None
    if n == 0:
        return SimilarityResult("unitary", np.zeros((0, 0), dtype=complex),
                                _intertwining_residuals(s1, s2, np.zeros((0, 0))))
    I = np.eye(n)
    rows = [np.kron(I, s2.A) - np.kron(s1.A.T, I)]
    rhs = [np.zeros(n * n, dtype=complex)]
    rows.append(np.kron(s1.B.T, I))
    rhs.append(s2.B.reshape(-1, order="F"))
    rows.append(np.kron(I, s2.C))
    rhs.append(s1.C.reshape(-1, order="F"))
    M = np.vstack(rows)
    v = np.concatenate(rhs)
    sol = np.linalg.lstsq(M, v, rcond=None)[0]
    candidates = [sol.reshape(n, n, order="F")]
    # the least-squares solution is unique for minimal systems; otherwise the
    # Krylov-matched map is a second candidate worth testing
    K1 = controllability_matrix(s1)
    if np.linalg.matrix_rank(K1, tol=tol.rank_tol * max(1.0, np.linalg.norm(K1, 2))) == n:
        candidates.append(controllability_matrix(s2) @ np.linalg.pinv(K1, rcond=tol.rank_tol))
    for Z in candidates:
        residuals = _intertwining_residuals(s1, s2, Z)
        scale = max(1.0, np.linalg.norm(Z, 2))
        if max(residuals.values()) > tol.metric_tol * 100 * scale:
            continue
        if metric_classify(Z, s1.state, s2.state, tol) != MetricClass.UNITARY:
            continue
        return SimilarityResult("unitary", Z, residuals)
    return None


def weak_similarity(s1, s2, tol=DEFAULT_TOL):
    """Similarity defined on the reachable vectors, certified invertible.

    Requires minimal systems whose Taylor coefficients agree through twice
    the larger state dimension; Z maps iterated input vectors of the first
    system to those of the second and is invertible at finite dimension.
    """
    for s in (s1, s2):
        rep = krylov_report(s, tol)
        if not (rep.controllable and rep.observable):
            raise PreconditionError("weak similarity requires minimal systems")
    if s1.input_dim != s2.input_dim or s1.output_dim != s2.output_dim:
        raise PreconditionError("weak similarity requires matching input/output")
    N = 2 * max(s1.state_dim, s2.state_dim)
    scale = max(1.0, np.linalg.norm(s1.D, 2))
    growth = 1.0
    for k in range(N + 1):
        growth = max(growth, np.linalg.norm(markov(s1, k), 2))
        if np.linalg.norm(markov(s1, k) - markov(s2, k), 2) > tol.metric_tol * max(scale, growth):
            raise PreconditionError(
                f"Taylor coefficients differ at order {k}; no weak similarity")
    K1 = controllability_matrix(s1, powers=max(s1.state_dim, s2.state_dim))
    K2 = controllability_matrix(s2, powers=max(s1.state_dim, s2.state_dim))
    Z = K2 @ np.linalg.pinv(K1, rcond=tol.rank_tol)
    residuals = _intertwining_residuals(s1, s2, Z)
    zscale = max(1.0, np.linalg.norm(Z, 2))
    if max(residuals.values()) > 1e-8 * zscale * max(1.0, np.linalg.norm(s1.A, 2)):
        raise InternalConsistencyError(
            "matched Taylor data but the Krylov map fails to intertwine")
    sv = np.linalg.svd(Z, compute_uv=False)
    residuals["inverse_condition"] = float(sv[-1] / sv[0]) if sv.size else 1.0
    if sv.size and sv[-1] <= tol.rank_tol * max(1.0, sv[0]):
        raise InternalConsistencyError("weak similarity matrix is numerically singular")
    return SimilarityResult("weak", Z, residuals)


def realize_from_taylor(coeffs, tol=DEFAULT_TOL, order_bound=None):
    """State-space realization from Taylor coefficients via block Hankel factorization.

    Needs at least 2 n + 2 coefficients for the order bound n.  The Hankel
    rank must agree across window sizes; otherwise the order is ambiguous.
    Returns a BareRealization whose coefficients reproduce the data.
    """
    coeffs = [as_matrix(c, name=f"coefficient {i}") for i, c in enumerate(coeffs)]
    if not coeffs:
        raise InputError("need at least one Taylor coefficient")
    p, m = coeffs[0].shape
    for c in coeffs:
        if c.shape != (p, m):
            raise DimensionMismatchError("all coefficients must share one shape")
    if order_bound is None:
        order_bound = (len(coeffs) - 2) // 2
    n = int(order_bound)
    if n < 0 or len(coeffs) < 2 * n + 2:
        raise PreconditionError(
            f"need at least {2 * n + 2} coefficients for order bound {n}")
    if n == 0:
        return BareRealization(np.zeros((0, 0)), np.zeros((0, m)),
                               np.zeros((p, 0)), coeffs[0])

    def hankel(start, rows, cols):
        return np.block([[coeffs[start + i + j] for j in range(cols)]
                         for i in range(rows)])

    H = hankel(1, n + 1, n)
    Hup = hankel(2, n + 1, n)

    def window_rank(rows, cols):
        s = np.linalg.svd(hankel(1, rows, cols), compute_uv=False)
        cut = tol.rank_tol * max(1.0, s[0]) if s.size else 0.0
        return int(np.sum(s > cut))

    ranks = {window_rank(n, n), window_rank(n + 1, n),
             window_rank(n, n + 1), window_rank(n + 1, n + 1)}
    if len(ranks) != 1:
        raise OrderAmbiguityError(
            f"Hankel rank keeps growing past the order bound {n}: {sorted(ranks)}")
    r = ranks.pop()
    if r == 0:
        return BareRealization(np.zeros((0, 0)), np.zeros((0, m)),
                               np.zeros((p, 0)), coeffs[0])
    U, s, Vh = np.linalg.svd(H, full_matrices=False)
    U, s, Vh = U[:, :r], s[:r], Vh[:r]
    sqrt_s = np.sqrt(s)
    obs = U * sqrt_s[None, :]           # (n+1)p x r observability factor
    con = sqrt_s[:, None] * Vh          # r x n m controllability factor
    A = (U.conj().T @ Hup @ Vh.conj().T) / np.outer(sqrt_s, sqrt_s)
    B = con[:, :m]
    C = obs[:p, :]
    return BareRealization(A, B, C, coeffs[0])
