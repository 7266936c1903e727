"""Maximally commuting operator classes built from a MUB family.

Each basis of a complete family contributes one class of d-1 commuting
Hermitian traceless operators: weight the basis projectors P_i = |b_i><b_i|
with fixed coefficient vectors, the diagonals of the rank-k tensors T(k, 0)
for k = 1..d-1 (so the class built on the canonical basis consists of the
diagonal tensors themselves, and every operator's expectation value is a
k-th moment in its own basis). Across the whole family this yields d^2 - 1
operators that are pairwise Hilbert-Schmidt orthogonal with Tr(A^dag B) =
d delta, and together with the identity they span the full operator space.

verify_set re-derives every claimed property numerically; failures come
back as report entries, never exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import (
    DEFAULT_TOL,
    CheckResult,
    VerificationReport,
    validate_tolerance,
)
from .mub import Basis, BasisTransform, MubFamily, check_family
from .tensors import tensor_diagonal

__all__ = [
    "CoefficientVectors",
    "CommutingClass",
    "OperatorSet",
    "build_class",
    "build_set",
    "coefficient_vectors",
    "conjugate_class",
    "verify_set",
]

# The exact-rational Clebsch-Gordan kernel underneath tensor_diagonal is
# comfortable far beyond this, but 26 (= spin 25/2) is the stated support
# ceiling, so larger requests are refused rather than silently accepted.
MAX_DIM = 26

# cross-class pairs must contain at least one visibly non-commuting pair;
# in practice the witness is O(1), so the floor is generous
NONCOMMUTING_FLOOR = 1e-6


@dataclass(frozen=True, eq=False)
class CoefficientVectors:
    """The d-1 projector-weight vectors: row k-1 is the diagonal of T(k, 0)."""

    dim: int
    vectors: np.ndarray  # shape (d-1, d), real

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.float64)
        if v.shape != (self.dim - 1, self.dim):
            raise ValueError(f"expected shape {(self.dim - 1, self.dim)}, got {v.shape}")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)


@dataclass(frozen=True, eq=False)
class CommutingClass:
    """One basis's worth of operators: d-1 commuting Hermitian matrices."""

    basis_label: str
    operators: tuple[np.ndarray, ...]
    projectors: tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class OperatorSet:
    """All d+1 classes of a family, flat view class-major."""

    dim: int
    classes: tuple[CommutingClass, ...]
    family: MubFamily
    coefficients: CoefficientVectors

    @property
    def operators(self) -> tuple[np.ndarray, ...]:
        return tuple(op for cls in self.classes for op in cls.operators)

    def __len__(self) -> int:
        return sum(len(cls.operators) for cls in self.classes)


def coefficient_vectors(d: int) -> CoefficientVectors:
    """Diagonals of T(k, 0), k = 1..d-1, for spin j = (d-1)/2.

    Each vector sums to zero, they are pairwise orthogonal, and vector k has
    squared norm d.
    """
    if not 2 <= d <= MAX_DIM:
        raise ValueError(f"dimension must satisfy 2 <= d <= {MAX_DIM}, got {d}")
    j = (d - 1) / 2.0
    return CoefficientVectors(d, np.array([tensor_diagonal(j, k) for k in range(1, d)]))


def build_class(basis: Basis, coeffs: CoefficientVectors) -> CommutingClass:
    """Operators A_k = sum_i coeffs[k][i] |b_i><b_i|; Hermitian and traceless
    by construction, commuting because they share the basis eigenvectors.
    """
    if basis.dim != coeffs.dim:
        raise ValueError(f"dimension mismatch: basis {basis.dim} vs coefficients {coeffs.dim}")
    projectors = tuple(basis.projector(i) for i in range(basis.dim))
    operators = tuple(
        sum(coeffs.vectors[k, i] * projectors[i] for i in range(basis.dim))
        for k in range(basis.dim - 1)
    )
    return CommutingClass(basis.label, operators, projectors)


def build_set(family: MubFamily, tol: float = DEFAULT_TOL) -> OperatorSet:
    """One class per basis, all sharing coefficient_vectors(d); flat order is
    class-major with classes in family order. The family must certify first.
    """
    report = check_family(family, tol)
    if not report.passed:
        worst = max(r.worst_deviation for r in report)
        raise ValueError(f"family fails MUB verification (worst deviation {worst:.3e})")
    coeffs = coefficient_vectors(family.dim)
    classes = tuple(build_class(b, coeffs) for b in family.bases)
    return OperatorSet(family.dim, classes, family, coeffs)


def conjugate_class(cls: CommutingClass, transform: BasisTransform) -> CommutingClass:
    """Carry a class along a basis transform: A -> u A u^dag.

    Equals build_class on the transformed basis, because the projectors of
    u|b_i> are u P_i u^dag and per-column phases cancel in the projectors.
    """
    dim = transform.dim
    if cls.operators and cls.operators[0].shape != (dim, dim):
        raise ValueError(f"dimension mismatch: class {cls.operators[0].shape} vs transform {dim}")
    u = transform.matrix
    ud = u.conj().T
    return CommutingClass(
        transform.target_label or cls.basis_label,
        tuple(u @ op @ ud for op in cls.operators),
        tuple(u @ p @ ud for p in cls.projectors),
    )


def verify_set(s: OperatorSet, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Re-derive every claimed property of an operator set numerically.

    Checks: (a) Hermiticity, (b) tracelessness, (c) HS orthogonality
    Tr(A_i^dag A_j) = d delta_ij, (d) within-class commutation, (e) the
    eigen-relation A_k |b_i> = c[k][i] |b_i> against the family's bases,
    (f) a cross-class non-commutation witness per class pair (reported value
    is the smallest witness seen; pass means every class pair has some pair
    of operators that visibly fail to commute), (g) completeness: identity
    plus the set spans all of operator space (Gram matrix stays d*I).
    """
    tol = validate_tolerance(tol)
    d = s.dim
    ops = list(s.operators)
    results = []

    dev = max(float(np.abs(a - a.conj().T).max()) for a in ops)
    results.append(CheckResult("hermiticity", dev, dev <= tol))

    dev = max(abs(complex(np.trace(a))) for a in ops)
    results.append(CheckResult("tracelessness", dev, dev <= tol))

    stack = np.array([a.conj().ravel() for a in ops])
    gram = stack @ np.array([a.ravel() for a in ops]).T
    dev = float(np.abs(gram - d * np.eye(len(ops))).max())
    results.append(CheckResult("hs_orthogonality", dev, dev <= tol))

    dev = 0.0
    for cls in s.classes:
        for i in range(len(cls.operators)):
            for j in range(i + 1, len(cls.operators)):
                a, b = cls.operators[i], cls.operators[j]
                dev = max(dev, float(np.abs(a @ b - b @ a).max()))
    results.append(CheckResult("within_class_commutation", dev, dev <= tol))

    dev = 0.0
    for cls, basis in zip(s.classes, s.family.bases):
        for k, op in enumerate(cls.operators):
            want = s.coefficients.vectors[k][np.newaxis, :] * basis.matrix
            dev = max(dev, float(np.abs(op @ basis.matrix - want).max()))
    results.append(CheckResult("eigen_relation", dev, dev <= tol))

    witness = np.inf
    n = len(s.classes)
    for i in range(n):
        for j in range(i + 1, n):
            best = 0.0
            for a in s.classes[i].operators:
                for b in s.classes[j].operators:
                    best = max(best, float(np.abs(a @ b - b @ a).max()))
            witness = min(witness, best)
    if n < 2:
        witness = 0.0
    results.append(CheckResult("cross_class_witness", float(witness),
                               witness >= NONCOMMUTING_FLOOR))

    full = [np.eye(d, dtype=np.complex128)] + ops
    stack = np.array([a.conj().ravel() for a in full])
    gram = stack @ np.array([a.ravel() for a in full]).T
    dev = float(np.abs(gram - d * np.eye(len(full))).max())
    results.append(CheckResult("completeness", dev, dev <= tol))

    return VerificationReport(tuple(results))
