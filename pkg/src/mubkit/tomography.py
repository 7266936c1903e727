"""State determination with the MUB operator set: expansion coefficients,
measurement probabilities, shot sampling, and reconstruction.

The two reconstruction routes are kept deliberately separate so they can
check each other:

* coefficients(rho, set) reads a_i = Tr(rho A_i) directly off the state;
* probabilities(rho, family) -> coefficients_from_probabilities recovers
  the same numbers from the d+1 measured distributions, using only the
  coefficient vectors (a_k^(b) = sum_i c[k][i] p_i^(b)).

Either way, rho = (1/d)(I + sum_i a_i A_i). Sampling is multinomial with
one independent PCG64 stream per basis derived from (seed, basis index),
so records are reproducible regardless of evaluation order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classes import CoefficientVectors, OperatorSet
from .matcore import DEFAULT_TOL, as_matrix, validate_tolerance
from .mub import MubFamily

__all__ = [
    "MeasurementRecord",
    "ReconstructionReport",
    "coefficients",
    "coefficients_from_probabilities",
    "fidelity",
    "probabilities",
    "project_psd",
    "random_density",
    "read_record",
    "reconstruct",
    "reconstruct_from_record",
    "record_from_json",
    "record_to_json",
    "sample_shots",
    "trace_distance",
    "write_record",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """Per-basis outcome distributions; shots is None for exact records."""

    dim: int
    labels: tuple[str, ...]
    probs: np.ndarray  # shape (number of bases, d)
    shots: int | None = None

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 2 or p.shape[1] != self.dim or p.shape[0] != len(self.labels):
            raise ValueError(f"probability array shape {p.shape} does not match "
                             f"{len(self.labels)} bases of dimension {self.dim}")
        if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
            raise ValueError("probabilities must lie in [0, 1]")
        if np.abs(p.sum(axis=1) - 1.0).max() > 1e-9:
            raise ValueError("each basis distribution must sum to 1")
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"shots must be a positive integer, got {self.shots}")
        p = np.ascontiguousarray(p)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)


@dataclass(frozen=True, eq=False)
class ReconstructionReport:
    """Reconstruction estimate plus scalar diagnostics."""

    estimate: np.ndarray
    trace_distance: float | None
    fidelity: float | None
    shots: int | None
    projected: bool

    def to_dict(self) -> dict:
        return {
            "trace_distance": self.trace_distance,
            "fidelity": self.fidelity,
            "shots": self.shots,
            "projected": self.projected,
        }


# ---------------------------------------------------------------------------
# expansion and reconstruction

def coefficients(rho, s: OperatorSet, tol: float = 1e-8) -> np.ndarray:
    """a_i = Tr(rho A_i) for the flat operator list; the imaginary parts must
    vanish (Hermitian rho against Hermitian A_i) and are checked then dropped.
    """
    rho = as_matrix(rho)
    if rho.shape != (s.dim, s.dim):
        raise ValueError(f"dimension mismatch: state {rho.shape} vs set dim {s.dim}")
    values = np.array([np.trace(rho @ op) for op in s.operators])
    worst = float(np.abs(values.imag).max())
    if worst > tol:
        raise ValueError(f"expansion coefficients have imaginary parts up to {worst:.3e}")
    return values.real.copy()


def reconstruct(coeffs, s: OperatorSet) -> np.ndarray:
    """rho = (1/d)(I + sum_i a_i A_i)."""
    a = np.asarray(coeffs, dtype=np.float64).ravel()
    ops = s.operators
    if a.size != len(ops):
        raise ValueError(f"expected {len(ops)} coefficients, got {a.size}")
    rho = np.eye(s.dim, dtype=np.complex128)
    for ai, op in zip(a, ops):
        rho = rho + ai * op
    return rho / s.dim


def probabilities(rho, family: MubFamily) -> MeasurementRecord:
    """Exact outcome distributions p_i^(b) = <b_i|rho|b_i> for every basis."""
    rho = as_matrix(rho)
    if rho.shape != (family.dim, family.dim):
        raise ValueError(f"dimension mismatch: state {rho.shape} vs family dim {family.dim}")
    rows = []
    for basis in family.bases:
        # diagonal of B^dag rho B in one pass
        p = np.einsum("id,ij,jd->d", basis.matrix.conj(), rho, basis.matrix).real
        rows.append(np.clip(p, 0.0, 1.0))
    return MeasurementRecord(family.dim, family.labels, np.array(rows), None)


def coefficients_from_probabilities(record: MeasurementRecord,
                                    coeffs: CoefficientVectors) -> np.ndarray:
    """Recover the flat coefficient vector from measured distributions:
    class b, operator k gets sum_i c[k][i] p_i^(b). Matches coefficients()
    exactly on exact records.
    """
    if record.dim != coeffs.dim:
        raise ValueError(f"dimension mismatch: record {record.dim} vs coefficients {coeffs.dim}")
    return (record.probs @ coeffs.vectors.T).ravel()


# ---------------------------------------------------------------------------
# sampling and metrics

def _stream(seed: int, index: int) -> np.random.Generator:
    # one independent, platform-stable stream per (seed, basis index)
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence([int(seed) & _MASK64, int(index)])))


def sample_shots(record: MeasurementRecord, n: int, seed: int) -> MeasurementRecord:
    """Replace each exact distribution by frequencies of n multinomial draws.

    Requires an exact record (shots is None) and n >= 1; deterministic in
    (seed, basis index), so bases may be sampled in any order.
    """
    if record.shots is not None:
        raise ValueError("record is already sampled; start from an exact record")
    n = int(n)
    if n < 1:
        raise ValueError(f"shot count must be >= 1, got {n}")
    rows = []
    for b, p in enumerate(record.probs):
        p = np.clip(p, 0.0, None)
        counts = _stream(seed, b).multinomial(n, p / p.sum())
        rows.append(counts / float(n))
    return MeasurementRecord(record.dim, record.labels, np.array(rows), n)


def random_density(d: int, seed: int) -> np.ndarray:
    """Ginibre-distributed density matrix G G^dag / Tr(G G^dag)."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    rng = _stream(seed, 0)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def trace_distance(a, b) -> float:
    """(1/2) sum of singular values of a - b."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return 0.5 * float(np.linalg.svd(a - b, compute_uv=False).sum())


def _purity(rho: np.ndarray) -> float:
    return float(np.trace(rho @ rho).real)


def fidelity(rho, reference) -> float:
    """F = <psi|rho|psi> against a pure reference (state vector or rank-1
    density matrix). Mixed references are refused; compare those by trace
    distance instead.
    """
    rho = as_matrix(rho)
    ref = np.asarray(reference, dtype=np.complex128)
    if ref.ndim == 1:
        if ref.shape[0] != rho.shape[0]:
            raise ValueError(f"dimension mismatch: {rho.shape} vs vector {ref.shape}")
        ref = np.outer(ref, ref.conj())
        ref = ref / np.trace(ref).real
    else:
        ref = as_matrix(ref)
        if ref.shape != rho.shape:
            raise ValueError(f"shape mismatch: {rho.shape} vs {ref.shape}")
        if abs(_purity(ref) - 1.0) > 1e-8:
            raise ValueError("reference is not pure; use trace_distance for mixed states")
    return float(np.trace(rho @ ref).real)


def project_psd(rho) -> np.ndarray:
    """Nearest physical state in the clip-and-renormalize sense: zero out
    negative eigenvalues, rescale to unit trace.
    """
    rho = as_matrix(rho)
    vals, vecs = np.linalg.eigh((rho + rho.conj().T) / 2.0)
    vals = np.clip(vals, 0.0, None)
    if vals.sum() <= 0.0:
        raise ValueError("projection collapsed to zero; input is not close to a state")
    vals = vals / vals.sum()
    return (vecs * vals) @ vecs.conj().T


def reconstruct_from_record(record: MeasurementRecord, s: OperatorSet,
                            project: bool = False,
                            reference=None) -> ReconstructionReport:
    """Full pipeline record -> coefficients -> state estimate.

    With project=True the linear estimate is clipped to the physical cone.
    If a reference state is supplied the report carries the trace distance
    to it, plus fidelity when the reference is pure.
    """
    if record.dim != s.dim:
        raise ValueError(f"dimension mismatch: record {record.dim} vs set {s.dim}")
    a = coefficients_from_probabilities(record, s.coefficients)
    estimate = reconstruct(a, s)
    if project:
        estimate = project_psd(estimate)
    td = fid = None
    if reference is not None:
        reference = np.asarray(reference, dtype=np.complex128)
        if reference.ndim == 1:
            # state vector: promote to its normalized projector
            norm = np.vdot(reference, reference).real
            if norm <= 0.0:
                raise ValueError("reference vector has zero norm")
            reference = np.outer(reference, reference.conj()) / norm
        reference = as_matrix(reference)
        td = trace_distance(estimate, reference)
        if abs(_purity(reference) - 1.0) <= 1e-8:
            fid = fidelity(estimate, reference)
    return ReconstructionReport(estimate, td, fid, record.shots, bool(project))


# ---------------------------------------------------------------------------
# record JSON format: {"dim", "shots": n|null, "bases": [{"label", "p": [..]}]}

def record_to_json(record: MeasurementRecord) -> dict:
    return {
        "dim": record.dim,
        "shots": record.shots,
        "bases": [{"label": lab, "p": [float(x) for x in row]}
                  for lab, row in zip(record.labels, record.probs)],
    }


def record_from_json(obj) -> MeasurementRecord:
    try:
        dim = int(obj["dim"])
        shots = obj["shots"]
        bases = obj["bases"]
        labels = tuple(str(b["label"]) for b in bases)
        probs = np.array([[float(x) for x in b["p"]] for b in bases])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed measurement record: {exc}") from exc
    return MeasurementRecord(dim, labels, probs, None if shots is None else int(shots))


def write_record(path, record: MeasurementRecord) -> None:
    Path(path).write_text(json.dumps(record_to_json(record), indent=1) + "\n")


def read_record(path) -> MeasurementRecord:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    return record_from_json(obj)
