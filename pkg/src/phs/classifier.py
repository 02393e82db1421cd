"""Matrix tests deciding what kind of semigroup the boundary problem generates.

Three nested verdicts are computed from finite matrix data:

  * contraction semigroup (energy non-increasing):
        Re P0 <= 0,  wb Sigma wb* >= 0,  rank(wb_tilde) = n,
    where wb = wb_tilde @ inv([[P1, -P1], [I, I]]) and Sigma = [[0, I], [I, 0]];
  * unitary group (energy conserved):  as above with equalities,
        Re P0 = 0,  wb Sigma wb* = 0,  rank(wb_tilde) = n;
  * C0-semigroup (well-posed at all):  with wb_tilde = [W1 W0] split in
    half and Z+(z) / Z-(z) the spans of eigenvectors of P1 H(z) for
    positive / negative eigenvalues,
        W1 H(1) Z+(1)  (+)  W0 H(0) Z-(0)  =  C^n,
    checked as invertibility of K = [W1 H(1) B+ | W0 H(0) B-] for
    orthonormal bases B+ of Z+(1) and B- of Z-(0).

The eigen-splitting runs through the Hermitian similarity
H^(1/2) P1 H^(1/2), so inertia is inherited from P1 and the numerics stay
in symmetric eigensolvers throughout.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ContinuityWarning,
    DomainError,
    PreconditionError,
    ShapeError,
    SingularityError,
    ValidationError,
)
from .model import PHSystem, eval_h, hermitian_part

# Frontier tolerance for semidefiniteness tests, relative to max(1, ||M||).
TOL_PSD = 1e-9
# Numerical rank: singular values below TOL_RANK * sigma_max count as zero.
TOL_RANK = 1e-10
# Zero band for eigenvalue sign counting, relative to max(1, max |eig|).
TOL_EIG = 1e-9


def _sigma(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [eye, zero]])


def _scaled(tol: float, m: np.ndarray) -> float:
    return tol * max(1.0, float(np.linalg.norm(m, 2))) if m.size else tol


def compute_wb(system: PHSystem) -> np.ndarray:
    """Map the boundary matrix to trace-sum/difference coordinates:
    wb = wb_tilde @ inv([[P1, -P1], [I, I]])."""
    n = system.n
    eye = np.eye(n)
    block = np.block([[system.p1, -system.p1], [eye, eye]])
    svals = np.linalg.svd(block, compute_uv=False)
    if svals[0] == 0.0 or svals[-1] < TOL_RANK * svals[0]:
        # cannot happen for a validated system (P1 invertible)
        raise SingularityError("[[P1, -P1], [I, I]] is numerically singular")
    return np.linalg.solve(block.T, system.wb_tilde.T).T


def rank_of(m: np.ndarray, tol_rank: float = TOL_RANK) -> int:
    """Numerical rank: number of singular values >= tol_rank * sigma_max."""
    m = np.atleast_2d(np.asarray(m))
    if m.size == 0:
        return 0
    svals = np.linalg.svd(m, compute_uv=False)
    if svals[0] == 0.0:
        return 0
    return int(np.count_nonzero(svals >= tol_rank * svals[0]))


def inertia(m: np.ndarray, tol_eig: float = TOL_EIG) -> tuple[int, int, int]:
    """Counts of positive / negative / zero eigenvalues of a Hermitian matrix."""
    m = np.atleast_2d(np.asarray(m))
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"inertia needs a square matrix, got {m.shape}")
    scale = np.linalg.norm(m)
    if scale > 0 and np.linalg.norm(m - m.conj().T) > 1e-10 * scale:
        raise ShapeError("inertia needs a Hermitian matrix")
    w = np.linalg.eigvalsh(hermitian_part(m))
    band = tol_eig * max(1.0, float(np.abs(w).max(initial=0.0)))
    n_plus = int(np.count_nonzero(w > band))
    n_minus = int(np.count_nonzero(w < -band))
    return n_plus, n_minus, w.size - n_plus - n_minus


@dataclass(frozen=True, eq=False)
class ContractionCheck:
    """Outcome and witnesses of the contraction test."""

    ok: bool
    re_p0_max_eigenvalue: float
    sigma_form: np.ndarray
    sigma_form_min_eigenvalue: float
    rank_wb_tilde: int


@dataclass(frozen=True, eq=False)
class UnitaryCheck:
    """Outcome and witnesses of the unitary-group test."""

    ok: bool
    re_p0_norm: float
    sigma_form_norm: float
    rank_wb_tilde: int


def check_contraction(
    system: PHSystem, tol_psd: float = TOL_PSD, tol_rank: float = TOL_RANK
) -> ContractionCheck:
    """Re P0 negative semidefinite, wb Sigma wb* positive semidefinite,
    and wb_tilde of full rank n.  Independent of the coefficient field H."""
    re_p0 = hermitian_part(system.p0)
    p0_eigs = np.linalg.eigvalsh(re_p0)
    wb = compute_wb(system)
    form = hermitian_part(wb @ _sigma(system.n) @ wb.conj().T)
    form_eigs = np.linalg.eigvalsh(form)
    rank = rank_of(system.wb_tilde, tol_rank)
    ok = (
        p0_eigs[-1] <= _scaled(tol_psd, re_p0)
        and form_eigs[0] >= -_scaled(tol_psd, form)
        and rank == system.n
    )
    return ContractionCheck(
        ok=bool(ok),
        re_p0_max_eigenvalue=float(p0_eigs[-1]),
        sigma_form=form,
        sigma_form_min_eigenvalue=float(form_eigs[0]),
        rank_wb_tilde=rank,
    )


def check_unitary(
    system: PHSystem, tol_psd: float = TOL_PSD, tol_rank: float = TOL_RANK
) -> UnitaryCheck:
    """Re P0 = 0, wb Sigma wb* = 0, and wb_tilde of full rank n."""
    re_p0 = hermitian_part(system.p0)
    wb = compute_wb(system)
    form = hermitian_part(wb @ _sigma(system.n) @ wb.conj().T)
    re_p0_norm = float(np.linalg.norm(re_p0, 2)) if re_p0.size else 0.0
    form_norm = float(np.linalg.norm(form, 2))
    rank = rank_of(system.wb_tilde, tol_rank)
    ok = (
        re_p0_norm <= _scaled(tol_psd, re_p0)
        and form_norm <= _scaled(tol_psd, form)
        and rank == system.n
    )
    return UnitaryCheck(
        ok=bool(ok),
        re_p0_norm=re_p0_norm,
        sigma_form_norm=form_norm,
        rank_wb_tilde=rank,
    )


@dataclass(frozen=True, eq=False)
class EigenSplit:
    """Eigen-structure of P1 H(zeta) at one point.

    lam holds the n1 positive eigenvalues in descending order, theta the
    n2 negative ones by descending magnitude (most negative first).  The
    columns of s_inv are the matching unit-norm eigenvectors, positive
    block first, so that P1 H(zeta) s_inv = s_inv diag(lam, theta).
    z_plus / z_minus are orthonormal bases of the two eigenspaces.
    """

    zeta: float
    n1: int
    n2: int
    lam: np.ndarray
    theta: np.ndarray
    s_inv: np.ndarray
    z_plus: np.ndarray
    z_minus: np.ndarray

    @property
    def speeds(self) -> np.ndarray:
        """Diagonal of the transport matrix: lam followed by theta."""
        return np.concatenate([self.lam, self.theta])


def _phase_fix_columns(m: np.ndarray) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real positive."""
    m = np.array(m)
    for j in range(m.shape[1]):
        col = m[:, j]
        mags = np.abs(col)
        top = mags.max()
        if top == 0.0:
            continue
        i = int(np.argmax(mags > 1e-12 * top))
        m[:, j] = col * (np.conj(col[i]) / mags[i])
    return m


def _orthonormal_basis(cols: np.ndarray) -> np.ndarray:
    if cols.shape[1] == 0:
        return cols.copy()
    q, _ = np.linalg.qr(cols)
    return _phase_fix_columns(q)


def eigensplit(system: PHSystem, zeta: float, tol_eig: float = TOL_EIG) -> EigenSplit:
    """Diagonalize P1 H(zeta) through the Hermitian similarity
    H^(1/2) P1 H^(1/2) and split eigenvectors by eigenvalue sign.

    Raises ValidationError if an eigenvalue sits in the zero band, which
    violates the standing assumptions (P1 invertible, H positive definite).
    """
    h = hermitian_part(eval_h(system, zeta))
    w_h, q_h = np.linalg.eigh(h)
    if w_h[0] <= 0.0:
        raise ValidationError(f"H(zeta={zeta:.6g}) is not positive definite")
    sq = np.sqrt(w_h)
    h_sqrt = (q_h * sq) @ q_h.conj().T
    h_isqrt = (q_h / sq) @ q_h.conj().T
    sym = hermitian_part(h_sqrt @ system.p1 @ h_sqrt)
    w, q = np.linalg.eigh(sym)
    band = tol_eig * max(1.0, float(np.abs(w).max()))
    if np.any(np.abs(w) <= band):
        raise ValidationError(
            f"P1 H(zeta={zeta:.6g}) has an eigenvalue within {band:.3e} of zero"
        )
    pos_idx = np.flatnonzero(w > 0.0)
    neg_idx = np.flatnonzero(w < 0.0)
    order = np.concatenate([pos_idx[np.argsort(-w[pos_idx])], neg_idx[np.argsort(w[neg_idx])]])
    n1 = pos_idx.size
    vecs = h_isqrt @ q[:, order]
    vecs = _phase_fix_columns(vecs / np.linalg.norm(vecs, axis=0))
    return EigenSplit(
        zeta=float(zeta),
        n1=int(n1),
        n2=int(system.n - n1),
        lam=w[order[:n1]].copy(),
        theta=w[order[n1:]].copy(),
        s_inv=vecs,
        z_plus=_orthonormal_basis(vecs[:, :n1]),
        z_minus=_orthonormal_basis(vecs[:, n1:]),
    )


@dataclass(frozen=True, eq=False)
class DiagonalizedField:
    """Per-grid-point eigen-splits with phase continuity along the grid.

    Behaves as a sequence of EigenSplit.  ``crossings`` lists grid indices
    where the eigenvector matching between neighbouring points is not the
    identity (eigenvalue curves reorder); ``max_column_jump`` is the largest
    Euclidean change of any eigenvector column between neighbours.
    """

    splits: tuple
    crossings: tuple
    max_column_jump: float

    def __len__(self):
        return len(self.splits)

    def __iter__(self):
        return iter(self.splits)

    def __getitem__(self, i):
        return self.splits[i]


def diagonalize_field(system: PHSystem, grid, tol_eig: float = TOL_EIG) -> DiagonalizedField:
    """Eigensplit at every grid point, with each eigenvector column phase
    aligned against its predecessor (maximal real inner product).

    Grid points are independent up to the sequential alignment pass, so the
    splits may be computed in parallel before aligning.  A ContinuityWarning
    is emitted when columns reorder between neighbouring points: the smooth
    diagonalizability assumed by the generation test is then in doubt.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise DomainError("grid must be a non-empty 1-D array")
    if np.any(grid < 0.0) or np.any(grid > 1.0):
        raise DomainError("grid points must lie in [0, 1]")
    if np.any(np.diff(grid) <= 0.0):
        raise DomainError("grid must be strictly increasing")

    splits = [eigensplit(system, z, tol_eig) for z in grid]
    crossings: list[int] = []
    max_jump = 0.0
    aligned = [splits[0]]
    for k in range(1, len(splits)):
        prev = aligned[k - 1].s_inv
        cur = np.array(splits[k].s_inv)
        overlap = np.abs(prev.conj().T @ cur)  # columns are unit norm
        if np.any(np.argmax(overlap, axis=0) != np.arange(cur.shape[1])):
            crossings.append(k)
        inner = np.sum(prev.conj() * cur, axis=0)
        nz = np.abs(inner) > 0.0
        cur[:, nz] *= np.conj(inner[nz]) / np.abs(inner[nz])
        max_jump = max(max_jump, float(np.linalg.norm(cur - prev, axis=0).max()))
        aligned.append(replace(splits[k], s_inv=cur))
    if crossings:
        warnings.warn(
            f"eigenvalue ordering changes along the grid at indices {crossings}; "
            "the diagonalizing transform may fail to be continuously differentiable",
            ContinuityWarning,
            stacklevel=2,
        )
    return DiagonalizedField(
        splits=tuple(aligned), crossings=tuple(crossings), max_column_jump=max_jump
    )


@dataclass(frozen=True, eq=False)
class BoundaryClosure:
    """Endpoint blocks of the boundary condition in Riemann coordinates.

    With wb_tilde = [w1 w0] split in half and S^-1 from the endpoint
    eigen-splits, W1 H(1) S^-1(1) = [v1 v2] and W0 H(0) S^-1(0) = [u1 u2]
    are split at column n1.  The closure matrix k = [v1 u2] multiplies the
    incoming traces (g+ at z = 1, g- at z = 0); its complement [u1 v2]
    multiplies the outgoing ones.
    """

    w1: np.ndarray
    w0: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    k: np.ndarray

    @property
    def q(self) -> np.ndarray:
        """The outgoing-trace block [u1 v2]."""
        return np.hstack([self.u1, self.v2])


def boundary_closure_matrix(
    system: PHSystem, split1: EigenSplit | None = None, split0: EigenSplit | None = None
) -> BoundaryClosure:
    """Assemble the boundary closure blocks from the endpoint eigen-splits
    (computed on demand when not supplied)."""
    n = system.n
    if split1 is None:
        split1 = eigensplit(system, 1.0)
    if split0 is None:
        split0 = eigensplit(system, 0.0)
    n1 = split1.n1
    w1 = system.wb_tilde[:, :n]
    w0 = system.wb_tilde[:, n:]
    v_blocks = w1 @ eval_h(system, 1.0) @ split1.s_inv
    u_blocks = w0 @ eval_h(system, 0.0) @ split0.s_inv
    return BoundaryClosure(
        w1=w1,
        w0=w0,
        v1=v_blocks[:, :n1],
        v2=v_blocks[:, n1:],
        u1=u_blocks[:, :n1],
        u2=u_blocks[:, n1:],
        k=np.hstack([v_blocks[:, :n1], u_blocks[:, n1:]]),
    )


def direct_sum_check(
    system: PHSystem, tol_rank: float = TOL_RANK
) -> tuple[bool, float, np.ndarray]:
    """C0-generation test: do W1 H(1) Z+(1) and W0 H(0) Z-(0) together span C^n?

    Returns (verdict, smallest singular value of K, K) where
    K = [W1 H(1) B+ | W0 H(0) B-].  Raises PreconditionError when
    rank(wb_tilde) < n, in which case the test does not apply.
    """
    n = system.n
    rank = rank_of(system.wb_tilde, tol_rank)
    if rank != n:
        raise PreconditionError(
            f"rank(wb_tilde) = {rank} != n = {n}: generation test inapplicable"
        )
    split1 = eigensplit(system, 1.0)
    split0 = eigensplit(system, 0.0)
    w1 = system.wb_tilde[:, :n]
    w0 = system.wb_tilde[:, n:]
    k = np.hstack([w1 @ eval_h(system, 1.0) @ split1.z_plus,
                   w0 @ eval_h(system, 0.0) @ split0.z_minus])
    svals = np.linalg.svd(k, compute_uv=False)
    smin = float(svals[-1])
    ok = bool(svals[0] > 0.0 and smin >= tol_rank * float(svals[0]))
    return ok, smin, k


@dataclass(frozen=True, eq=False)
class Verdict:
    """Classification record with numeric witnesses.

    c0_semigroup is None when rank(wb_tilde) < n, where the generation test
    has nothing to say (the contraction test still decides: rank < n means
    no contraction).
    """

    n: int
    rank_wb_tilde: int
    re_p0_nsd: bool
    re_p0_zero: bool
    re_p0_max_eigenvalue: float
    re_p0_norm: float
    sigma_form: np.ndarray
    sigma_form_min_eigenvalue: float
    sigma_form_norm: float
    contraction: bool
    unitary_group: bool
    c0_semigroup: bool | None
    direct_sum_min_singular_value: float | None
    notes: tuple

    def as_dict(self, include_matrices: bool = True) -> dict:
        from .model import matrix_to_pairs

        out = {
            "n": self.n,
            "rank_wb_tilde": self.rank_wb_tilde,
            "re_p0": {
                "nsd": self.re_p0_nsd,
                "zero": self.re_p0_zero,
                "max_eigenvalue": self.re_p0_max_eigenvalue,
                "norm": self.re_p0_norm,
            },
            "sigma_form": {
                "min_eigenvalue": self.sigma_form_min_eigenvalue,
                "norm": self.sigma_form_norm,
            },
            "contraction": self.contraction,
            "unitary_group": self.unitary_group,
            "c0_semigroup": self.c0_semigroup,
            "direct_sum_min_singular_value": self.direct_sum_min_singular_value,
            "notes": list(self.notes),
        }
        if include_matrices:
            out["sigma_form"]["matrix"] = matrix_to_pairs(self.sigma_form)
        return out


def classify(
    system: PHSystem,
    tol_psd: float = TOL_PSD,
    tol_rank: float = TOL_RANK,
    diagnostic_grid: int | None = None,
) -> Verdict:
    """Run all three tests and assemble a Verdict.

    The verdicts are nested (unitary implies contraction implies
    C0-semigroup); a numerically inconsistent triple is coerced to the
    stronger verdict and flagged in notes.  ``diagnostic_grid``, when set,
    additionally diagonalizes the field on that many points and records an
    eigenvalue-crossing note.
    """
    con = check_contraction(system, tol_psd, tol_rank)
    uni = check_unitary(system, tol_psd, tol_rank)
    notes: list[str] = []
    contraction = con.ok
    unitary = uni.ok

    c0: bool | None
    smin: float | None
    try:
        c0, smin, _ = direct_sum_check(system, tol_rank)
    except PreconditionError as exc:
        c0, smin = None, None
        notes.append(f"inconclusive-C0: {exc}")

    if unitary and not contraction:
        notes.append(
            "InternalInconsistency: unitary test passed while contraction failed; "
            "coerced contraction to True"
        )
        contraction = True
    if contraction and c0 is False:
        notes.append(
            "InternalInconsistency: contraction holds but direct-sum test failed; "
            "coerced c0_semigroup to True"
        )
        c0 = True

    if system.h.kind == "grid":
        notes.append(
            "coefficient field is sampled: smoothness assumption of the generation "
            "test is not verifiable; its verdict uses endpoint data only"
        )
    if diagnostic_grid:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ContinuityWarning)
            dfield = diagonalize_field(system, np.linspace(0.0, 1.0, diagnostic_grid))
        if dfield.crossings:
            notes.append(
                f"eigenvalue crossing on diagnostic grid at indices {list(dfield.crossings)} "
                f"(max column jump {dfield.max_column_jump:.3e})"
            )

    re_p0 = hermitian_part(system.p0)
    scale = _scaled(tol_psd, re_p0)
    return Verdict(
        n=system.n,
        rank_wb_tilde=con.rank_wb_tilde,
        re_p0_nsd=bool(con.re_p0_max_eigenvalue <= scale),
        re_p0_zero=bool(uni.re_p0_norm <= scale),
        re_p0_max_eigenvalue=con.re_p0_max_eigenvalue,
        re_p0_norm=uni.re_p0_norm,
        sigma_form=con.sigma_form,
        sigma_form_min_eigenvalue=con.sigma_form_min_eigenvalue,
        sigma_form_norm=uni.sigma_form_norm,
        contraction=contraction,
        unitary_group=unitary,
        c0_semigroup=c0,
        direct_sum_min_singular_value=smin,
        notes=tuple(notes),
    )
