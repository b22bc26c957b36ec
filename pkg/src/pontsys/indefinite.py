"""Linear algebra over finite-dimensional spaces with an indefinite metric.

A space is described by a signature: a pattern of +1/-1 weights on the
coordinates.  The metric matrix J is the diagonal of that pattern, so
J = J* = J^(-1).  All adjoints, projections and classifications in this
module are taken with respect to such metrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg as sla

from .exceptions import (
    AmbiguousSpectrumError,
    DimensionMismatchError,
    IndefiniteDefectError,
    InputError,
    NonRegularSubspaceError,
    NotHermitianError,
)

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "SignatureSpace",
    "IndefiniteSubspace",
    "Inertia",
    "MetricClass",
    "SubspaceKind",
    "SpectralRegion",
    "as_matrix",
    "metric_signs",
    "metric_matrix",
    "j_inner",
    "j_adjoint",
    "metric_defects",
    "metric_classify",
    "inertia",
    "subspace_classify",
    "j_projection",
    "j_complement",
    "psd_factor",
    "eig_hermitian",
    "eig_general",
    "spectral_subspace",
    "canonical_basis",
    "nullspace",
    "column_space",
    "principal_angles",
    "same_span",
    "intersect_spans",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances and sampling controls threaded through every call.

    rank_tol governs rank decisions, psd_tol semidefiniteness slack,
    metric_tol metric identities (isometry, unitarity, similarity).
    boundary_samples and disc_samples size the default sample plans on the
    unit circle and the open disc; seed fixes every randomized choice.
    """

    rank_tol: float = 1e-10
    psd_tol: float = 1e-9
    metric_tol: float = 1e-8
    boundary_samples: int = 256
    disc_samples: int = 64
    seed: int = 0

    def __post_init__(self):
        for name in ("rank_tol", "psd_tol", "metric_tol"):
            if not (0 < getattr(self, name) < 1):
                raise InputError(f"{name} must lie in (0, 1)")
        for name in ("boundary_samples", "disc_samples"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be positive")
        if self.seed < 0:
            raise InputError("seed must be nonnegative")


DEFAULT_TOL = Tolerances()


def as_matrix(a, rows=None, cols=None, name="matrix"):
    """Validate input as a complex matrix with finite entries.

    Returns a read-only complex128 array.  1-D input becomes a column.
    """
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InputError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries")
    if rows is not None and arr.shape[0] != rows:
        raise DimensionMismatchError(
            f"{name} must have {rows} rows, got {arr.shape[0]}")
    if cols is not None and arr.shape[1] != cols:
        raise DimensionMismatchError(
            f"{name} must have {cols} columns, got {arr.shape[1]}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SignatureSpace:
    """Finite-dimensional space with pos positive and neg negative directions.

    In the canonical coordinate order the metric is diag(I_pos, -I_neg).
    A non-canonical coordinate order (as produced by direct sums) is carried
    by the optional pattern field; pos/neg always count the +1/-1 entries.
    """

    pos: int
    neg: int
    pattern: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.pos < 0 or self.neg < 0:
            raise InputError("signature counts must be nonnegative")
        if self.pattern is not None:
            pat = tuple(int(s) for s in self.pattern)
            if any(s not in (-1, 1) for s in pat):
                raise InputError("signature pattern entries must be +1 or -1")
            if sum(1 for s in pat if s > 0) != self.pos or len(pat) != self.dim:
                raise InputError("signature pattern does not match pos/neg")
            object.__setattr__(self, "pattern", pat)

    @classmethod
    def from_signs(cls, signs):
        signs = [int(s) for s in signs]
        pos = sum(1 for s in signs if s > 0)
        space = cls(pos, len(signs) - pos)
        if not space.is_canonical_pattern(signs):
            space = cls(pos, len(signs) - pos, tuple(signs))
        return space

    @staticmethod
    def hilbert(dim):
        return SignatureSpace(dim, 0)

    def is_canonical_pattern(self, signs):
        return list(signs) == [1] * self.pos + [-1] * (len(signs) - self.pos)

    @property
    def dim(self):
        return self.pos + self.neg

    @property
    def is_canonical(self):
        return self.pattern is None

    @property
    def signs(self):
        if self.pattern is not None:
            return np.array(self.pattern, dtype=np.float64)
        return np.concatenate([np.ones(self.pos), -np.ones(self.neg)])

    @property
    def J(self):
        return np.diag(self.signs).astype(np.complex128)

    def canonical(self):
        return SignatureSpace(self.pos, self.neg)

    def canonical_permutation(self):
        """Index order that sorts coordinates to the canonical +/- layout."""
        return np.argsort(-self.signs, kind="stable")


def metric_signs(space):
    """Signature vector of a space description.

    Accepts a SignatureSpace, an integer (a Hilbert space of that
    dimension), or an explicit vector of +1/-1 weights.
    """
    if isinstance(space, SignatureSpace):
        return space.signs
    if isinstance(space, (int, np.integer)):
        if space < 0:
            raise InputError("dimension must be nonnegative")
        return np.ones(int(space))
    signs = np.asarray(space, dtype=np.float64).reshape(-1)
    if signs.size and not np.all(np.abs(signs) == 1.0):
        raise InputError("signature vector entries must be +1 or -1")
    return signs


def metric_matrix(space):
    return np.diag(metric_signs(space)).astype(np.complex128)


def j_inner(x, y, space):
    """Indefinite inner product <x, y> = y* J x."""
    signs = metric_signs(space)
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    y = np.asarray(y, dtype=np.complex128).reshape(-1)
    if x.shape != y.shape or x.size != signs.size:
        raise DimensionMismatchError("vectors do not match the space dimension")
    return complex(np.sum(np.conj(y) * signs * x))


def j_adjoint(M, dom, cod):
    """Metric adjoint J_dom M* J_cod of an operator M mapping dom to cod."""
    dom_s = metric_signs(dom)
    cod_s = metric_signs(cod)
    M = as_matrix(M, rows=cod_s.size, cols=dom_s.size, name="operator")
    return dom_s[:, None] * M.conj().T * cod_s[None, :]


class Inertia(tuple):
    """Eigenvalue sign counts (n_plus, n_zero, n_minus) of a Hermitian matrix."""

    def __new__(cls, n_plus, n_zero, n_minus):
        return super().__new__(cls, (int(n_plus), int(n_zero), int(n_minus)))

    @property
    def n_plus(self):
        return self[0]

    @property
    def n_zero(self):
        return self[1]

    @property
    def n_minus(self):
        return self[2]


def _require_hermitian(H, name="matrix", rel=1e-12):
    H = as_matrix(H, name=name)
    if H.shape[0] != H.shape[1]:
        raise DimensionMismatchError(f"{name} must be square")
    if H.size:
        scale = max(1.0, float(np.linalg.norm(H, 2)))
        if np.linalg.norm(H - H.conj().T, 2) > rel * scale:
            raise NotHermitianError(f"{name} is not Hermitian within {rel:g} relative")
    return (H + H.conj().T) / 2.0


def inertia(H, tol=DEFAULT_TOL):
    """Counts of positive, numerically zero and negative eigenvalues of H.

    The zero threshold is psd_tol scaled by max(1, ||H||).  Congruence
    transformations with well-conditioned factors preserve the result.
    """
    H = _require_hermitian(H, name="inertia input")
    if H.size == 0:
        return Inertia(0, 0, 0)
    w = np.linalg.eigvalsh(H)
    cut = tol.psd_tol * max(1.0, float(np.max(np.abs(w))))
    return Inertia(np.sum(w > cut), np.sum(np.abs(w) <= cut), np.sum(w < -cut))


class MetricClass(str, Enum):
    """Cumulative metric classification of an operator between spaces."""

    NONE = "none"
    CONTRACTION = "contraction"
    ISOMETRY = "isometry"
    COISOMETRY = "coisometry"
    UNITARY = "unitary"


def metric_defects(M, dom, cod):
    """Primal and dual metric defects (J_dom - M* J_cod M, J_cod - M J_dom M*)."""
    dom_s = metric_signs(dom)
    cod_s = metric_signs(cod)
    M = as_matrix(M, rows=cod_s.size, cols=dom_s.size, name="operator")
    primal = np.diag(dom_s) - M.conj().T @ (cod_s[:, None] * M)
    dual = np.diag(cod_s) - M @ (dom_s[:, None] * M.conj().T)
    return primal.astype(np.complex128), dual.astype(np.complex128)


def metric_classify(M, dom, cod, tol=DEFAULT_TOL):
    """Classify M as a metric contraction, (co)isometry, unitary, or none.

    Unitary means isometry and coisometry together; an isometry or a unitary
    is in particular a contraction.  Contractivity is the ordinary positive
    semidefiniteness of the primal defect.
    """
    primal, dual = metric_defects(M, dom, cod)
    scale = max(1.0, float(np.linalg.norm(M, 2)) ** 2) if M.size else 1.0
    iso = np.linalg.norm(primal, 2) <= tol.metric_tol * scale if primal.size else True
    coiso = np.linalg.norm(dual, 2) <= tol.metric_tol * scale if dual.size else True
    if iso and coiso:
        return MetricClass.UNITARY
    if iso:
        return MetricClass.ISOMETRY
    if coiso:
        return MetricClass.COISOMETRY
    if is_psd(primal, tol):
        return MetricClass.CONTRACTION
    return MetricClass.NONE


def is_psd(H, tol=DEFAULT_TOL):
    """Positive semidefiniteness with slack psd_tol * max(1, ||H||)."""
    H = _require_hermitian(H, name="psd input", rel=1e-10)
    if H.size == 0:
        return True
    w = np.linalg.eigvalsh(H)
    return bool(w[0] >= -tol.psd_tol * max(1.0, float(np.max(np.abs(w)))))


@dataclass(frozen=True)
class IndefiniteSubspace:
    """Subspace of a signature space, held as a full-column-rank basis matrix."""

    ambient: SignatureSpace
    basis: np.ndarray

    def __post_init__(self):
        basis = as_matrix(self.basis, rows=self.ambient.dim, name="basis")
        object.__setattr__(self, "basis", basis)
        if basis.shape[1]:
            s = np.linalg.svd(basis, compute_uv=False)
            if s[-1] <= DEFAULT_TOL.rank_tol * max(1.0, s[0]):
                raise InputError("basis columns are numerically dependent")

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def gram(self):
        signs = self.ambient.signs
        g = self.basis.conj().T @ (signs[:, None] * self.basis)
        return (g + g.conj().T) / 2.0


class SubspaceKind(str, Enum):
    """Metric type of a subspace, from the inertia of its Gram matrix."""

    HILBERT = "hilbert"
    ANTIHILBERT = "antihilbert"
    REGULAR = "regular"
    DEGENERATE = "degenerate"


def subspace_classify(space, tol=DEFAULT_TOL):
    """Classify a subspace by the inertia of its Gram matrix.

    The zero subspace counts as hilbert.  Regular means invertible Gram of
    mixed sign; degenerate means a numerically singular Gram.
    """
    n_plus, n_zero, n_minus = inertia(space.gram, tol)
    if n_zero > 0:
        return SubspaceKind.DEGENERATE
    if n_minus == 0:
        return SubspaceKind.HILBERT
    if n_plus == 0:
        return SubspaceKind.ANTIHILBERT
    return SubspaceKind.REGULAR


def j_projection(space, tol=DEFAULT_TOL):
    """Metric-orthogonal projection onto a regular subspace.

    P = V (V* J V)^(-1) V* J; P is idempotent and J-selfadjoint.
    """
    V = space.basis
    n = space.ambient.dim
    if V.shape[1] == 0:
        return np.zeros((n, n), dtype=np.complex128)
    G = space.gram
    s = np.linalg.svd(G, compute_uv=False)
    if s[-1] <= tol.rank_tol * max(1.0, s[0]):
        raise NonRegularSubspaceError("subspace Gram matrix is numerically singular")
    signs = space.ambient.signs
    return V @ np.linalg.solve(G, V.conj().T * signs[None, :])


def j_complement(space, tol=DEFAULT_TOL):
    """Metric-orthogonal complement of a regular subspace.

    The ambient space splits as a direct sum with the complement; the
    dimensions add up to the ambient dimension.
    """
    kind = subspace_classify(space, tol)
    if kind == SubspaceKind.DEGENERATE:
        raise NonRegularSubspaceError("complement of a degenerate subspace is not direct")
    basis = orthocomplement_basis(space, tol)
    return IndefiniteSubspace(space.ambient, basis)


def orthocomplement_basis(space, tol=DEFAULT_TOL):
    """Basis of the metric-orthogonal annihilator {x : V* J x = 0}.

    Defined for every subspace; for a degenerate one it meets the subspace.
    """
    V = space.basis
    signs = space.ambient.signs
    if V.shape[1] == 0:
        return np.eye(space.ambient.dim, dtype=np.complex128)
    return nullspace(V.conj().T * signs[None, :], tol)


def psd_factor(M, tol=DEFAULT_TOL):
    """Full-column-rank E with E E* = M for positive semidefinite M.

    Eigenvalues in [-psd_tol * scale, 0) are clamped to zero; anything
    below that raises, since the input was not semidefinite.
    """
    M = _require_hermitian(M, name="psd_factor input", rel=1e-10)
    if M.size == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    w, V = np.linalg.eigh(M)
    cut = tol.psd_tol * max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    if w[0] < -cut:
        raise IndefiniteDefectError(
            f"matrix has a negative eigenvalue {w[0]:.3e} beyond psd slack")
    keep = w > cut
    return V[:, keep] * np.sqrt(w[keep])[None, :]


def eig_hermitian(H):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    H = _require_hermitian(H, name="eig_hermitian input", rel=1e-10)
    return np.linalg.eigh(H)


def eig_general(A):
    """Eigenvalues and a unitary Schur decomposition A = Z T Z* (complex)."""
    A = as_matrix(A, name="eig_general input")
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatchError("eig_general input must be square")
    if A.size == 0:
        e = np.zeros(0, dtype=np.complex128)
        return e, A.copy(), A.copy()
    T, Z = sla.schur(A, output="complex")
    return np.diag(T).copy(), T, Z


class SpectralRegion(str, Enum):
    INSIDE_OPEN_DISC = "inside_open_disc"
    OUTSIDE_CLOSED_DISC = "outside_closed_disc"
    MODULUS_ONE_BAND = "modulus_one_band"


def spectral_subspace(A, space, region, tol=DEFAULT_TOL, on_boundary="error"):
    """Invariant subspace for the eigenvalues of A in a disc region.

    Generalized eigenvectors are included, so the dimension is the total
    algebraic multiplicity.  Eigenvalues within metric_tol of the unit
    circle are ambiguous for the disc regions: with on_boundary="error"
    they raise, with "exclude" they are assigned to neither side.
    """
    signs = metric_signs(space)
    A = as_matrix(A, rows=signs.size, cols=signs.size, name="operator")
    region = SpectralRegion(region)
    band = tol.metric_tol

    if A.size == 0:
        return IndefiniteSubspace(_as_space(space), np.zeros((0, 0), np.complex128))

    eigvals = np.linalg.eigvals(A)
    near = [lam for lam in eigvals if abs(abs(lam) - 1.0) <= band]
    if region != SpectralRegion.MODULUS_ONE_BAND and near:
        if on_boundary == "error":
            raise AmbiguousSpectrumError(
                f"eigenvalue {near[0]} lies within {band:g} of the unit circle")
        if on_boundary != "exclude":
            raise InputError("on_boundary must be 'error' or 'exclude'")

    if region == SpectralRegion.INSIDE_OPEN_DISC:
        select = lambda lam: abs(lam) < 1.0 - band
    elif region == SpectralRegion.OUTSIDE_CLOSED_DISC:
        select = lambda lam: abs(lam) > 1.0 + band
    else:
        select = lambda lam: abs(abs(lam) - 1.0) <= band

    T, Z, sdim = sla.schur(A, output="complex", sort=select)
    return IndefiniteSubspace(_as_space(space), Z[:, :sdim])


def _as_space(space):
    if isinstance(space, SignatureSpace):
        return space
    return SignatureSpace.from_signs(metric_signs(space))


def canonical_basis(space, tol=DEFAULT_TOL):
    """Metric-orthonormal basis of a regular subspace, positive columns first.

    Returns (W, signs) where W* J W = diag(signs) and signs is sorted with
    the +1 entries first.
    """
    V = space.basis
    if V.shape[1] == 0:
        return V.copy(), np.zeros(0)
    w, U = np.linalg.eigh(space.gram)
    if np.min(np.abs(w)) <= tol.rank_tol * max(1.0, float(np.max(np.abs(w)))):
        raise NonRegularSubspaceError("subspace is not regular; no metric basis")
    order = np.argsort(-np.sign(w), kind="stable")
    w = w[order]
    U = U[:, order]
    W = V @ (U / np.sqrt(np.abs(w))[None, :])
    return W, np.sign(w)


def nullspace(M, tol=DEFAULT_TOL):
    """Orthonormal basis of the numerical null space, rank cut at rank_tol."""
    M = as_matrix(M, name="nullspace input")
    if M.shape[0] == 0 or M.shape[1] == 0:
        return np.eye(M.shape[1], dtype=np.complex128)
    u, s, vh = np.linalg.svd(M)
    r = int(np.sum(s > tol.rank_tol * max(1.0, s[0])))
    return vh[r:].conj().T


def column_space(M, tol=DEFAULT_TOL):
    """Orthonormal basis of the numerical column space, rank cut at rank_tol."""
    M = as_matrix(M, name="column_space input")
    if M.shape[1] == 0 or M.shape[0] == 0:
        return np.zeros((M.shape[0], 0), dtype=np.complex128)
    u, s, vh = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > tol.rank_tol * max(1.0, s[0]))) if s.size else 0
    return u[:, :r]


def principal_angles(A, B, tol=DEFAULT_TOL):
    """Principal angles between the column spans of A and B (radians)."""
    QA = column_space(A, tol)
    QB = column_space(B, tol)
    if QA.shape[1] == 0 or QB.shape[1] == 0:
        return np.zeros(0)
    return sla.subspace_angles(QA, QB)


def same_span(A, B, tol=DEFAULT_TOL, angle_tol=1e-8):
    """Whether two matrices span the same column space within angle_tol."""
    QA = column_space(A, tol)
    QB = column_space(B, tol)
    if QA.shape[1] != QB.shape[1]:
        return False
    if QA.shape[1] == 0:
        return True
    return float(np.max(sla.subspace_angles(QA, QB))) <= angle_tol


def intersect_spans(A, B, tol=DEFAULT_TOL):
    """Orthonormal basis of the intersection of two column spans."""
    QA = column_space(A, tol)
    QB = column_space(B, tol)
    if QA.shape[1] == 0 or QB.shape[1] == 0:
        return np.zeros((QA.shape[0], 0), dtype=np.complex128)
    ker = nullspace(np.hstack([QA, -QB]), tol)
    if ker.shape[1] == 0:
        return np.zeros((QA.shape[0], 0), dtype=np.complex128)
    return column_space(QA @ ker[: QA.shape[1]], tol)
