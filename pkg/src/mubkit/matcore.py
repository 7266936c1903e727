"""Dense complex linear-algebra primitives shared by the rest of the package.

Matrices are plain numpy complex128 arrays. All dimensions in this package
are tiny (d <= 32 or so), so everything is ordinary dense arithmetic. The
one numerical rule enforced globally: roots of unity are always computed
from cos/sin of the reduced angle, never by repeated multiplication, so
w**p is exact to 1 ulp for any power.

The module also carries the on-disk matrix format (see matrix_to_json) and
the small CheckResult/VerificationReport containers used by every
verification routine in the package.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_TOL = 1e-10

__all__ = [
    "DEFAULT_TOL",
    "CheckResult",
    "VerificationReport",
    "adjoint",
    "as_matrix",
    "commutator",
    "frobenius_distance",
    "hs_inner",
    "identity",
    "is_hermitian",
    "is_unitary",
    "matrix_from_json",
    "matrix_to_json",
    "max_abs",
    "multiply",
    "read_matrix",
    "root_of_unity",
    "trace",
    "validate_tolerance",
    "write_matrix",
]


def validate_tolerance(tol: float) -> float:
    """Check 0 < tol < 1 and return it."""
    tol = float(tol)
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {tol!r}")
    return tol


def root_of_unity(d: int, power: int = 1) -> complex:
    """exp(2 pi i power / d), from cos/sin of the reduced angle."""
    if d < 1:
        raise ValueError(f"order must be a positive integer, got {d!r}")
    angle = 2.0 * math.pi * (power % d) / d
    return complex(math.cos(angle), math.sin(angle))


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return arr


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.complex128)


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T.copy()


def multiply(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product Tr(a^dag b), antilinear in a."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"hs_inner needs equal square shapes, got {a.shape} and {b.shape}")
    # vdot conjugate-flattens its first argument: sum conj(a_ij) b_ij = Tr(a^dag b)
    return complex(np.vdot(a, b))


def commutator(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def trace(m) -> complex:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"trace needs a square matrix, got {m.shape}")
    return complex(np.trace(m))


def max_abs(m) -> float:
    """Largest entry magnitude; 0.0 for an empty array."""
    arr = np.asarray(m)
    return float(np.abs(arr).max()) if arr.size else 0.0


def frobenius_distance(a, b) -> float:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return max_abs(m - m.conj().T) <= validate_tolerance(tol)


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    gram = m.conj().T @ m
    return max_abs(gram - np.eye(m.shape[0])) <= validate_tolerance(tol)


# ---------------------------------------------------------------------------
# verification reports

@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check: worst deviation seen and pass/fail."""

    check: str
    worst_deviation: float
    passed: bool

    def to_dict(self) -> dict:
        return {"check": self.check, "worst_deviation": self.worst_deviation, "pass": self.passed}


@dataclass(frozen=True)
class VerificationReport:
    """Ordered collection of CheckResults with an aggregate verdict."""

    results: tuple[CheckResult, ...]

    def __iter__(self):
        return iter(self.results)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, check: str) -> CheckResult:
        for r in self.results:
            if r.check == check:
                return r
        raise KeyError(check)

    def to_dicts(self) -> list[dict]:
        return [r.to_dict() for r in self.results]


# ---------------------------------------------------------------------------
# JSON matrix format
#
# {"rows": r, "cols": c, "data": [[{"re": x, "im": y}, ...], ...]}
#
# json serializes floats via repr (shortest round-trip form), so a write/read
# cycle reproduces every entry bit for bit.

def matrix_to_json(m) -> dict:
    m = as_matrix(m)
    rows, cols = m.shape
    data = [[{"re": float(m[i, j].real), "im": float(m[i, j].imag)} for j in range(cols)]
            for i in range(rows)]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ValueError("matrix JSON must be an object")
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if rows < 1 or cols < 1 or not isinstance(data, list) or len(data) != rows:
        raise ValueError("matrix JSON shape fields do not match data")
    out = np.empty((rows, cols), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise ValueError(f"matrix JSON row {i} has wrong length")
        for j, cell in enumerate(row):
            try:
                out[i, j] = complex(float(cell["re"]), float(cell["im"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed matrix JSON entry ({i},{j}): {exc}") from exc
    return as_matrix(out)


def write_matrix(path, m) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(m), indent=1) + "\n")


def read_matrix(path) -> np.ndarray:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    return matrix_from_json(obj)
