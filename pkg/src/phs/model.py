"""System descriptions for first-order port-Hamiltonian boundary problems.

A system on the unit interval is

    d/dt x(z,t) = (P1 d/dz + P0)(H(z) x(z,t)),      z in [0,1],

with P1 an invertible Hermitian n x n matrix, P0 an arbitrary n x n
matrix, H(z) a Hermitian and uniformly positive definite coefficient
field, and n homogeneous boundary conditions

    wb_tilde @ [ (H x)(1) ; (H x)(0) ] = 0

imposed through an n x 2n matrix ``wb_tilde``.

This module owns the data model: coefficient-field evaluation, validation
of the structural invariants above, and (de)serialization of the JSON
document format (every complex scalar is a ``[re, im]`` pair; see README).
Everything is immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, SchemaError, ShapeError, ValidationError

# Validation tolerances.  tol values are relative to the matrix scale,
# eps_pd is the absolute floor for the smallest eigenvalue of H.
TOL_HERM = 1e-10
EPS_PD = 1e-8
EPS_INV = 1e-10
VALIDATION_POINTS = 257

FIELD_KINDS = ("constant", "polynomial", "grid")


def hermitian_part(m: np.ndarray) -> np.ndarray:
    """Return (m + m*)/2.  The result is conjugate-symmetric entry by entry.

    Raises ShapeError if ``m`` is not square.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"hermitian_part needs a square matrix, got shape {m.shape}")
    return (m + m.conj().T) / 2.0


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


def _herm_defect(m: np.ndarray) -> float:
    """Relative deviation of m from its Hermitian part."""
    scale = np.linalg.norm(m)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(m - m.conj().T) / scale)


@dataclass(frozen=True, eq=False)
class CoefficientField:
    """Matrix-valued Hamiltonian density H(z) on [0,1].

    kind is one of:
      * "constant":   data = (value,),             value (n,n)
      * "polynomial": data = (coeffs,),            coeffs (n,n,deg+1), entry
                      (i,j) holds coefficients in ascending powers of z
      * "grid":       data = (zetas, values),      zetas strictly increasing
                      including 0 and 1; values (m,n,n); evaluation is linear
                      interpolation followed by Hermitian symmetrization
    """

    n: int
    kind: str
    data: tuple
    sample_budget: int = VALIDATION_POINTS

    @classmethod
    def constant(cls, value, sample_budget: int = VALIDATION_POINTS) -> "CoefficientField":
        value = np.atleast_2d(np.asarray(value, dtype=complex))
        if value.shape[0] != value.shape[1]:
            raise ShapeError(f"constant field value must be square, got {value.shape}")
        return cls(value.shape[0], "constant", (_freeze(value),), sample_budget)

    @classmethod
    def polynomial(cls, coeffs, sample_budget: int = VALIDATION_POINTS) -> "CoefficientField":
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.ndim != 3 or coeffs.shape[0] != coeffs.shape[1]:
            raise ShapeError(
                f"polynomial coefficients must have shape (n, n, deg+1), got {coeffs.shape}"
            )
        return cls(coeffs.shape[0], "polynomial", (_freeze(coeffs),), sample_budget)

    @classmethod
    def grid(cls, zetas, values, sample_budget: int = VALIDATION_POINTS) -> "CoefficientField":
        zetas = np.asarray(zetas, dtype=float)
        values = np.asarray(values, dtype=complex)
        if zetas.ndim != 1 or zetas.size < 2:
            raise ShapeError("grid field needs at least two sample points")
        if np.any(np.diff(zetas) <= 0):
            raise ValidationError("grid zetas must be strictly increasing")
        if zetas[0] != 0.0 or zetas[-1] != 1.0:
            raise ValidationError("grid zetas must include 0 and 1")
        if values.ndim != 3 or values.shape[0] != zetas.size or values.shape[1] != values.shape[2]:
            raise ShapeError(
                f"grid values must have shape (m, n, n) with m = len(zetas), got {values.shape}"
            )
        z = np.array(zetas)
        z.flags.writeable = False
        return cls(values.shape[1], "grid", (z, _freeze(values)), sample_budget)

    def eval_many(self, zetas) -> np.ndarray:
        """Evaluate H at an array of points; returns shape (len(zetas), n, n)."""
        zetas = np.atleast_1d(np.asarray(zetas, dtype=float))
        if self.kind == "constant":
            (value,) = self.data
            return np.broadcast_to(value, (zetas.size,) + value.shape).copy()
        if self.kind == "polynomial":
            (coeffs,) = self.data
            # polyval wants coefficients along the first axis
            vals = np.polynomial.polynomial.polyval(zetas, np.moveaxis(coeffs, 2, 0))
            return np.moveaxis(vals, 2, 0)
        zs, values = self.data
        idx = np.clip(np.searchsorted(zs, zetas, side="right") - 1, 0, zs.size - 2)
        w = (zetas - zs[idx]) / (zs[idx + 1] - zs[idx])
        out = (1.0 - w)[:, None, None] * values[idx] + w[:, None, None] * values[idx + 1]
        return (out + np.conj(np.swapaxes(out, 1, 2))) / 2.0

    def eval(self, zeta: float) -> np.ndarray:
        return self.eval_many([zeta])[0]


def _as_field(h) -> CoefficientField:
    if isinstance(h, CoefficientField):
        return h
    return CoefficientField.constant(np.atleast_2d(np.asarray(h, dtype=complex)))


@dataclass(frozen=True, eq=False)
class PHSystem:
    """The tuple (n, P1, P0, H, wb_tilde) describing the boundary problem.

    Instances produced by :func:`make_system` / :func:`load_system` have had
    all structural invariants checked.  Direct dataclass construction skips
    validation (used by tests to probe error paths).
    """

    n: int
    p1: np.ndarray
    p0: np.ndarray
    h: CoefficientField
    wb_tilde: np.ndarray


def validate_system(system: PHSystem) -> None:
    """Check all structural invariants; raise ValidationError naming the
    first violated one.

    H is checked at ``h.sample_budget`` uniformly spaced points of [0,1]:
    Hermitian within TOL_HERM (relative) and smallest eigenvalue >= EPS_PD.
    """
    n = system.n
    for name, m in (("p1", system.p1), ("p0", system.p0)):
        if m.shape != (n, n):
            raise ValidationError(f"{name} must be {n}x{n}, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValidationError(f"{name} contains non-finite entries")
    if not np.all(np.isfinite(system.wb_tilde)):
        raise ValidationError("wb_tilde contains non-finite entries")
    if system.wb_tilde.shape != (n, 2 * n):
        raise ValidationError(
            f"wb_tilde must be {n}x{2 * n}, got {system.wb_tilde.shape}"
        )
    if _herm_defect(system.p1) > TOL_HERM:
        raise ValidationError("p1 is not Hermitian")
    svals = np.linalg.svd(system.p1, compute_uv=False)
    if svals[-1] < EPS_INV * svals[0] or svals[0] == 0.0:
        raise ValidationError(
            f"p1 is numerically singular (smallest singular value {svals[-1]:.3e})"
        )
    if system.h.n != n:
        raise ValidationError(f"H has dimension {system.h.n}, system has n = {n}")

    m = max(2, system.h.sample_budget)
    zetas = np.linspace(0.0, 1.0, m)
    values = system.h.eval_many(zetas)
    if not np.all(np.isfinite(values)):
        raise ValidationError("H evaluates to non-finite entries")
    herm = np.conj(np.swapaxes(values, 1, 2))
    scale = np.maximum(np.linalg.norm(values, axis=(1, 2)), 1e-300)
    defect = np.linalg.norm(values - herm, axis=(1, 2)) / scale
    bad = np.flatnonzero(defect > TOL_HERM)
    if bad.size:
        raise ValidationError(
            f"H(zeta={zetas[bad[0]]:.6g}) is not Hermitian (relative defect {defect[bad[0]]:.3e})"
        )
    eigmin = np.linalg.eigvalsh((values + herm) / 2.0)[:, 0]
    bad = np.flatnonzero(eigmin < EPS_PD)
    if bad.size:
        raise ValidationError(
            f"H(zeta={zetas[bad[0]]:.6g}) is not positive definite "
            f"(min eigenvalue {eigmin[bad[0]]:.3e} < {EPS_PD:g})"
        )


def make_system(p1, p0, h, wb_tilde, sample_budget: int | None = None) -> PHSystem:
    """Build and validate a PHSystem from raw matrices and a field.

    ``h`` may be a CoefficientField, a matrix, or a scalar (constant field).
    """
    p1 = np.atleast_2d(np.asarray(p1, dtype=complex))
    n = p1.shape[0]
    field = _as_field(h)
    if sample_budget is not None:
        field = CoefficientField(field.n, field.kind, field.data, sample_budget)
    system = PHSystem(
        n=n,
        p1=_freeze(p1),
        p0=_freeze(np.atleast_2d(np.asarray(p0, dtype=complex))),
        h=field,
        wb_tilde=_freeze(np.atleast_2d(np.asarray(wb_tilde, dtype=complex))),
    )
    validate_system(system)
    return system


def eval_h(system: PHSystem, zeta: float) -> np.ndarray:
    """Evaluate the Hamiltonian density H at a point of [0,1].

    Grid fields are linearly interpolated and symmetrized; constant and
    polynomial fields are evaluated as stored.
    """
    if not 0.0 <= zeta <= 1.0:
        raise DomainError(f"zeta = {zeta!r} outside [0, 1]")
    return system.h.eval(float(zeta))


# ---------------------------------------------------------------------------
# JSON document format
# ---------------------------------------------------------------------------

def _scalar_from_pair(obj, where: str) -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)
    ):
        raise SchemaError(f"{where}: complex scalars must be [re, im] pairs, got {obj!r}")
    return complex(obj[0], obj[1])


def _matrix_from_doc(obj, where: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SchemaError(f"{where}: expected a list of rows")
    ncols = len(obj[0])
    if ncols == 0 or any(len(r) != ncols for r in obj):
        raise SchemaError(f"{where}: rows must be non-empty and of equal length")
    out = np.empty((len(obj), ncols), dtype=complex)
    for i, row in enumerate(obj):
        for j, entry in enumerate(row):
            out[i, j] = _scalar_from_pair(entry, f"{where}[{i}][{j}]")
    return out


def matrix_to_pairs(m) -> list:
    """Inverse of the document matrix encoding: nested lists of [re, im]."""
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def _field_from_doc(obj) -> CoefficientField:
    if not isinstance(obj, dict):
        raise SchemaError("'h' must be an object")
    kind = obj.get("kind")
    if kind not in FIELD_KINDS:
        raise SchemaError(f"'h.kind' must be one of {FIELD_KINDS}, got {kind!r}")
    keys = {"constant": {"kind", "value"},
            "polynomial": {"kind", "coeffs"},
            "grid": {"kind", "zetas", "values"}}[kind]
    extra = set(obj) - keys
    if extra:
        raise SchemaError(f"'h' has unknown keys {sorted(extra)}")
    missing = keys - set(obj)
    if missing:
        raise SchemaError(f"'h' is missing keys {sorted(missing)}")
    if kind == "constant":
        return CoefficientField.constant(_matrix_from_doc(obj["value"], "h.value"))
    if kind == "polynomial":
        rows = obj["coeffs"]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise SchemaError("'h.coeffs' must be a nested list")
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise SchemaError("'h.coeffs' must be an n x n table of coefficient lists")
        deg = 0
        for r in rows:
            for entry in r:
                if not isinstance(entry, list) or not entry:
                    raise SchemaError("each 'h.coeffs' entry must be a non-empty list of pairs")
                deg = max(deg, len(entry) - 1)
        coeffs = np.zeros((n, n, deg + 1), dtype=complex)
        for i in range(n):
            for j in range(n):
                for k, pair in enumerate(rows[i][j]):
                    coeffs[i, j, k] = _scalar_from_pair(pair, f"h.coeffs[{i}][{j}][{k}]")
        return CoefficientField.polynomial(coeffs)
    zetas = obj["zetas"]
    vals = obj["values"]
    if not isinstance(zetas, list) or not isinstance(vals, list) or len(zetas) != len(vals):
        raise SchemaError("'h.zetas' and 'h.values' must be lists of equal length")
    matrices = [_matrix_from_doc(v, f"h.values[{k}]") for k, v in enumerate(vals)]
    return CoefficientField.grid(np.asarray(zetas, dtype=float), np.array(matrices))


def load_system(document) -> PHSystem:
    """Load and validate a system from a model document.

    ``document`` may be a dict (already-parsed JSON), a JSON string, or a
    path to a JSON file.  Raises SchemaError for malformed documents and
    ValidationError for well-formed documents violating an invariant.
    """
    if isinstance(document, (str, Path)):
        text = str(document)
        if isinstance(document, str) and text.lstrip().startswith("{"):
            try:
                document = json.loads(text)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc}") from None
        else:
            try:
                document = json.loads(Path(document).read_text())
            except OSError as exc:
                raise SchemaError(f"cannot read model document: {exc}") from None
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise SchemaError("model document must be a JSON object")
    required = {"n", "p1", "p0", "h", "wb_tilde"}
    extra = set(document) - required
    if extra:
        raise SchemaError(f"unknown document keys {sorted(extra)}")
    missing = required - set(document)
    if missing:
        raise SchemaError(f"missing document keys {sorted(missing)}")
    n = document["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError(f"'n' must be a positive integer, got {n!r}")
    p1 = _matrix_from_doc(document["p1"], "p1")
    p0 = _matrix_from_doc(document["p0"], "p0")
    wb = _matrix_from_doc(document["wb_tilde"], "wb_tilde")
    field = _field_from_doc(document["h"])
    if p1.shape != (n, n):
        raise ValidationError(f"p1 must be {n}x{n}, got {p1.shape}")
    system = PHSystem(n=n, p1=_freeze(p1), p0=_freeze(p0), h=field, wb_tilde=_freeze(wb))
    validate_system(system)
    return system
