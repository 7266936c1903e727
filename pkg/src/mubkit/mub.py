"""Construction and verification of complete mutually unbiased basis (MUB)
families.

Two orthonormal bases are mutually unbiased when every cross overlap has
|<a_i|b_j>|^2 = 1/d; a complete family in dimension d holds d+1 such bases.
Families come from two sources here:

* built-in tables for d in {2, 3, 4, 5} (the canonical basis, Fourier-type
  bases, and their twisted companions, exactly as published for those
  spins), and
* a generated quadratic-phase construction for any odd prime d, with basis
  b = 0..d-1, vector j, component k equal to w^(b k^2 + j k)/sqrt(d).

Whether a complete family exists at all is open beyond prime powers; d = 6
is the first unknown case and is conjectured to top out at three bases, so
constructors refuse it (UnsupportedDimensionError) rather than guess.

Basis convention: columns are the basis vectors; row index is m-descending
(row 0 is m = +j). Labels B1..B{d+1} with B1 the canonical basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import (
    DEFAULT_TOL,
    CheckResult,
    VerificationReport,
    as_matrix,
    root_of_unity,
    validate_tolerance,
)

__all__ = [
    "Basis",
    "BasisTransform",
    "MubFamily",
    "UnsupportedDimensionError",
    "builtin_family",
    "canonical_basis",
    "check_family",
    "check_unbiased",
    "fourier_basis",
    "odd_prime_family",
    "one_axis_twist",
    "unitary_between",
]

BUILTIN_DIMS = (2, 3, 4, 5)


class UnsupportedDimensionError(ValueError):
    """Requested construction does not exist (or is not known) at this dimension."""

    def __init__(self, dim: int, message: str):
        super().__init__(message)
        self.dim = dim


def _refuse(dim: int, context: str) -> UnsupportedDimensionError:
    if dim == 6:
        msg = ("no complete MUB family known for dimension 6 (at most three"
               f" mutually unbiased bases are conjectured to exist); {context}")
    else:
        msg = f"{context}: dimension {dim} is not supported"
    return UnsupportedDimensionError(dim, msg)


def _is_odd_prime(n: int) -> bool:
    if n < 3 or n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True, eq=False)
class Basis:
    """Orthonormal basis stored as the d x d matrix of column vectors.

    Orthonormality is the maintained invariant of every constructor in this
    module; it is not re-checked on plain construction so that data read
    back from disk can be run through check_family and fail there instead
    of at load time.
    """

    dim: int
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.dim, self.dim):
            raise ValueError(f"basis matrix must be {self.dim}x{self.dim}, got {m.shape}")
        m = np.ascontiguousarray(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def vector(self, i: int) -> np.ndarray:
        return self.matrix[:, i]

    def projector(self, i: int) -> np.ndarray:
        v = self.matrix[:, i]
        return np.outer(v, v.conj())


@dataclass(frozen=True, eq=False)
class MubFamily:
    """d+1 bases intended to be pairwise unbiased (certified by check_family)."""

    dim: int
    bases: tuple[Basis, ...]

    def __post_init__(self):
        if len(self.bases) != self.dim + 1:
            raise ValueError(f"a complete family in dimension {self.dim} needs "
                             f"{self.dim + 1} bases, got {len(self.bases)}")
        for b in self.bases:
            if b.dim != self.dim:
                raise ValueError(f"basis {b.label!r} has dimension {b.dim}, expected {self.dim}")
        object.__setattr__(self, "bases", tuple(self.bases))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(b.label for b in self.bases)


@dataclass(frozen=True, eq=False)
class BasisTransform:
    """Unitary u carrying the source basis columnwise onto the target basis."""

    dim: int
    matrix: np.ndarray
    source_label: str = ""
    target_label: str = ""

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.dim, self.dim):
            raise ValueError(f"transform must be {self.dim}x{self.dim}, got {m.shape}")
        m = np.ascontiguousarray(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


# ---------------------------------------------------------------------------
# constructors

def canonical_basis(d: int, label: str = "B1") -> Basis:
    """Columns of the identity (the |j m> basis, m-descending)."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return Basis(d, np.eye(d, dtype=np.complex128), label)


def fourier_basis(d: int, label: str = "B2") -> Basis:
    """Discrete Fourier basis: column j has components w^(jk)/sqrt(d)."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    m = np.empty((d, d), dtype=np.complex128)
    for k in range(d):
        for j in range(d):
            m[k, j] = root_of_unity(d, j * k)
    return Basis(d, m / np.sqrt(d), label)


def _quadratic_basis(d: int, b: int, label: str) -> Basis:
    # component k of vector j: w^(b k^2 + j k)/sqrt(d); b = 0 is the Fourier basis
    m = np.empty((d, d), dtype=np.complex128)
    for k in range(d):
        for j in range(d):
            m[k, j] = root_of_unity(d, b * k * k + j * k)
    return Basis(d, m / np.sqrt(d), label)


def one_axis_twist(d: int, t: float) -> BasisTransform:
    """One-axis twisting unitary exp(-i Jz^2 t): diagonal phases exp(-i m^2 t)
    in the canonical basis, m = j..-j with j = (d-1)/2.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    tj = d - 1
    m = (tj - 2.0 * np.arange(d)) / 2.0
    phases = np.exp(-1j * (m * m) * float(t))
    return BasisTransform(d, np.diag(phases).astype(np.complex128))


def odd_prime_family(d: int) -> MubFamily:
    """Complete family for odd prime d: canonical basis plus the d
    quadratic-phase bases b = 0..d-1.
    """
    if not _is_odd_prime(d):
        raise _refuse(d, "quadratic-phase construction requires an odd prime dimension")
    bases = [canonical_basis(d, "B1")]
    bases += [_quadratic_basis(d, b, f"B{b + 2}") for b in range(d)]
    return MubFamily(d, tuple(bases))


def _builtin_2() -> tuple[np.ndarray, ...]:
    s = 1.0 / np.sqrt(2.0)
    b2 = np.array([[1, 1], [1, -1]], dtype=np.complex128) * s
    b3 = np.array([[1, 1], [1j, -1j]], dtype=np.complex128) * s
    return np.eye(2, dtype=np.complex128), b2, b3


def _builtin_3() -> tuple[np.ndarray, ...]:
    # row-major exponent grids over w = exp(2 pi i/3)
    grids = (
        ((0, 0, 0), (0, 2, 1), (0, 1, 2)),
        ((0, 0, 0), (1, 0, 2), (0, 1, 2)),
        ((0, 0, 0), (2, 1, 0), (0, 1, 2)),
    )
    out = [np.eye(3, dtype=np.complex128)]
    for g in grids:
        m = np.array([[root_of_unity(3, p) for p in row] for row in g])
        out.append(m / np.sqrt(3.0))
    return tuple(out)


def _builtin_4() -> tuple[np.ndarray, ...]:
    i = 1j
    tables = (
        ((1, 1, 1, 1), (1, -1, 1, -1), (1, 1, -1, -1), (1, -1, -1, 1)),
        ((1, 1, 1, 1), (i, -i, i, -i), (i, i, -i, -i), (-1, 1, 1, -1)),
        ((1, 1, 1, 1), (i, -i, i, -i), (1, 1, -1, -1), (-i, i, i, -i)),
        ((1, 1, 1, 1), (1, -1, 1, -1), (i, i, -i, -i), (-i, i, i, -i)),
    )
    out = [np.eye(4, dtype=np.complex128)]
    out += [np.array(t, dtype=np.complex128) / 2.0 for t in tables]
    return tuple(out)


def _builtin_5() -> tuple[np.ndarray, ...]:
    # the published dim-5 tables coincide exactly with the quadratic-phase
    # construction, so they are generated rather than typed out; some
    # tabulations print the first basis with a spurious 1/sqrt(5) prefactor
    # on the identity, which cannot be right for unit vectors, so B1 is the
    # exact canonical basis here
    return tuple([np.eye(5, dtype=np.complex128)]
                 + [_quadratic_basis(5, b, "").matrix for b in range(5)])


def builtin_family(d: int) -> MubFamily:
    """Complete family from the built-in tables, d in {2, 3, 4, 5}."""
    builders = {2: _builtin_2, 3: _builtin_3, 4: _builtin_4, 5: _builtin_5}
    if d not in builders:
        raise _refuse(d, f"built-in tables cover dimensions {BUILTIN_DIMS}")
    mats = builders[d]()
    bases = tuple(Basis(d, m, f"B{i + 1}") for i, m in enumerate(mats))
    return MubFamily(d, bases)


# ---------------------------------------------------------------------------
# checks and transforms

def check_unbiased(a: Basis, b: Basis, tol: float = DEFAULT_TOL) -> CheckResult:
    """Worst deviation of | |<a_i|b_j>|^2 - 1/d | over all vector pairs."""
    tol = validate_tolerance(tol)
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    overlaps = np.abs(a.matrix.conj().T @ b.matrix) ** 2
    dev = float(np.abs(overlaps - 1.0 / a.dim).max())
    name = f"unbiased({a.label or '?'},{b.label or '?'})"
    return CheckResult(name, dev, dev <= tol)


def check_family(f: MubFamily, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Certify a family: member count, per-basis orthonormality, pairwise
    unbiasedness. Failures are report entries, never exceptions.
    """
    tol = validate_tolerance(tol)
    results = [CheckResult("member_count", float(abs(len(f.bases) - (f.dim + 1))),
                           len(f.bases) == f.dim + 1)]
    eye = np.eye(f.dim)
    worst_orth = 0.0
    for b in f.bases:
        gram = b.matrix.conj().T @ b.matrix
        worst_orth = max(worst_orth, float(np.abs(gram - eye).max()))
    results.append(CheckResult("orthonormality", worst_orth, worst_orth <= tol))
    worst_unb = 0.0
    for i in range(len(f.bases)):
        for j in range(i + 1, len(f.bases)):
            worst_unb = max(worst_unb, check_unbiased(f.bases[i], f.bases[j], tol).worst_deviation)
    results.append(CheckResult("unbiasedness", worst_unb, worst_unb <= tol))
    return VerificationReport(tuple(results))


def unitary_between(a: Basis, b: Basis) -> BasisTransform:
    """The unitary u = sum_i |b_i><a_i| mapping a's columns onto b's, in order.

    Columnwise exact (no phase freedom): u a_i = b_i.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    u = b.matrix @ a.matrix.conj().T
    return BasisTransform(a.dim, u, a.label, b.label)
