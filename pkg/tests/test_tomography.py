"""Tests for state reconstruction from MUB measurement statistics."""

import numpy as np
import pytest

from mubkit.classes import build_set
from mubkit.matcore import max_abs
from mubkit.mub import builtin_family, odd_prime_family
from mubkit.tomography import (
    MeasurementRecord,
    coefficients,
    coefficients_from_probabilities,
    fidelity,
    probabilities,
    project_psd,
    random_density,
    read_record,
    reconstruct,
    reconstruct_from_record,
    record_from_json,
    record_to_json,
    sample_shots,
    trace_distance,
    write_record,
)

ALL_DIMS = (2, 3, 4, 5, 7)


def family_for(d):
    return builtin_family(d) if d <= 5 else odd_prime_family(d)


@pytest.mark.parametrize("d", ALL_DIMS)
def test_random_density_is_a_state(d):
    for seed in range(5):
        rho = random_density(d, seed)
        assert rho.shape == (d, d)
        assert abs(np.trace(rho) - 1.0) < 1e-12
        assert max_abs(rho - rho.conj().T) < 1e-12
        assert np.linalg.eigvalsh(rho).min() > -1e-12
    assert np.array_equal(random_density(d, 3), random_density(d, 3))
    assert not np.array_equal(random_density(d, 3), random_density(d, 4))


@pytest.mark.parametrize("d", ALL_DIMS)
def test_expansion_round_trip(d):
    opset = build_set(family_for(d))
    for seed in range(10):
        rho = random_density(d, seed)
        a = coefficients(rho, opset)
        assert a.shape == (d * d - 1,)
        back = reconstruct(a, opset)
        assert max_abs(back - rho) < 1e-12


@pytest.mark.parametrize("d", ALL_DIMS)
def test_probability_route_matches_trace_route(d):
    family = family_for(d)
    opset = build_set(family)
    for seed in range(5):
        rho = random_density(d, seed)
        record = probabilities(rho, family)
        assert record.shots is None
        assert record.probs.shape == (d + 1, d)
        assert max_abs(record.probs.sum(axis=1) - 1.0) < 1e-12
        assert record.probs.min() >= 0.0
        direct = coefficients(rho, opset)
        viaprobs = coefficients_from_probabilities(record, opset.coefficients)
        assert max_abs(direct - viaprobs) < 1e-12


def test_probabilities_of_basis_state_are_deterministic_and_flat():
    family = builtin_family(3)
    rho = np.zeros((3, 3), dtype=complex)
    rho[0, 0] = 1.0
    record = probabilities(rho, family)
    assert np.allclose(record.probs[0], [1, 0, 0], atol=1e-12)
    # unbiasedness: every other basis sees the flat distribution
    assert np.allclose(record.probs[1:], 1 / 3, atol=1e-12)


def test_sample_shots_deterministic_and_consistent():
    family = builtin_family(3)
    record = probabilities(random_density(3, 0), family)
    s1 = sample_shots(record, 4096, seed=5)
    s2 = sample_shots(record, 4096, seed=5)
    s3 = sample_shots(record, 4096, seed=6)
    assert np.array_equal(s1.probs, s2.probs)
    assert not np.array_equal(s1.probs, s3.probs)
    assert s1.shots == 4096
    assert max_abs(s1.probs.sum(axis=1) - 1.0) < 1e-12


def test_sample_shots_converges_to_exact():
    family = builtin_family(4)
    record = probabilities(random_density(4, 1), family)
    sampled = sample_shots(record, 1_000_000, seed=0)
    assert max_abs(sampled.probs - record.probs) < 5e-3


def test_sample_shots_requires_exact_record():
    family = builtin_family(2)
    record = probabilities(random_density(2, 0), family)
    sampled = sample_shots(record, 100, seed=0)
    with pytest.raises(ValueError):
        sample_shots(sampled, 100, seed=0)


def test_sample_shots_validates_count():
    family = builtin_family(2)
    record = probabilities(random_density(2, 0), family)
    with pytest.raises(ValueError):
        sample_shots(record, 0, seed=0)


def test_trace_distance_known_values():
    zero = np.diag([1.0, 0.0]).astype(complex)
    one = np.diag([0.0, 1.0]).astype(complex)
    maximally_mixed = np.eye(2, dtype=complex) / 2
    assert trace_distance(zero, zero) == pytest.approx(0.0, abs=1e-15)
    assert trace_distance(zero, one) == pytest.approx(1.0)
    assert trace_distance(zero, maximally_mixed) == pytest.approx(0.5)


def test_fidelity_pure_reference():
    rho = random_density(3, 2)
    psi = np.array([1.0, 0.0, 0.0], dtype=complex)
    want = rho[0, 0].real
    assert fidelity(rho, psi) == pytest.approx(want)
    # pure density-matrix reference is accepted too
    assert fidelity(rho, np.outer(psi, psi.conj())) == pytest.approx(want)


def test_fidelity_rejects_mixed_reference():
    rho = random_density(3, 2)
    with pytest.raises(ValueError, match="not pure"):
        fidelity(rho, np.eye(3, dtype=complex) / 3)


def test_project_psd_restores_state():
    rho = random_density(3, 7)
    # linear noise can push eigenvalues negative
    noisy = rho + 0.05 * np.diag([1.0, -1.0, 0.0])
    fixed = project_psd(noisy)
    assert abs(np.trace(fixed) - 1.0) < 1e-12
    assert np.linalg.eigvalsh(fixed).min() >= -1e-12
    # projection is idempotent on valid states
    assert max_abs(project_psd(rho) - rho) < 1e-12


@pytest.mark.parametrize("d", ALL_DIMS)
def test_reconstruct_from_exact_record(d):
    family = family_for(d)
    opset = build_set(family)
    rho = random_density(d, 9)
    record = probabilities(rho, family)
    report = reconstruct_from_record(record, opset, reference=rho)
    assert report.trace_distance < 1e-10
    assert report.shots is None
    assert not report.projected
    assert max_abs(report.estimate - rho) < 1e-10


def test_reconstruct_from_sampled_record_improves_with_shots():
    family = builtin_family(3)
    opset = build_set(family)
    rho = random_density(3, 4)
    record = probabilities(rho, family)
    coarse = reconstruct_from_record(
        sample_shots(record, 1_000, seed=1), opset, reference=rho)
    fine = reconstruct_from_record(
        sample_shots(record, 1_000_000, seed=1), opset, reference=rho)
    assert fine.trace_distance < coarse.trace_distance
    assert coarse.shots == 1_000 and fine.shots == 1_000_000


def test_reconstruct_with_projection_reports_flag():
    family = builtin_family(3)
    opset = build_set(family)
    rho = random_density(3, 4)
    record = sample_shots(probabilities(rho, family), 500, seed=2)
    raw = reconstruct_from_record(record, opset, reference=rho)
    proj = reconstruct_from_record(record, opset, project=True, reference=rho)
    assert proj.projected and not raw.projected
    assert np.linalg.eigvalsh(proj.estimate).min() >= -1e-12
    data = proj.to_dict()
    assert set(data) == {"trace_distance", "fidelity", "shots", "projected"}
    assert data["fidelity"] is None  # mixed reference has no fidelity entry


def test_reconstruction_report_fidelity_for_pure_reference():
    family = builtin_family(2)
    opset = build_set(family)
    psi = np.array([1.0, 1j]) / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    record = probabilities(rho, family)
    report = reconstruct_from_record(record, opset, reference=psi)
    assert report.fidelity == pytest.approx(1.0, abs=1e-10)


def test_measurement_record_validation():
    good = np.full((3, 2), 0.5)
    MeasurementRecord(2, ("B1", "B2", "B3"), good)
    with pytest.raises(ValueError):
        MeasurementRecord(2, ("B1", "B2"), good)  # label count mismatch
    with pytest.raises(ValueError):
        MeasurementRecord(2, ("B1", "B2", "B3"), np.full((3, 2), 0.4))
    bad = good.copy()
    bad[0] = [1.2, -0.2]
    with pytest.raises(ValueError):
        MeasurementRecord(2, ("B1", "B2", "B3"), bad)
    with pytest.raises(ValueError):
        MeasurementRecord(2, ("B1", "B2", "B3"), good, shots=0)


def test_record_json_round_trip(tmp_path):
    family = builtin_family(3)
    record = sample_shots(probabilities(random_density(3, 0), family), 1000, 3)
    data = record_to_json(record)
    assert data["dim"] == 3 and data["shots"] == 1000
    assert [b["label"] for b in data["bases"]] == list(record.labels)
    back = record_from_json(data)
    assert np.array_equal(back.probs, record.probs)
    exact = probabilities(random_density(3, 0), family)
    assert record_to_json(exact)["shots"] is None
    path = tmp_path / "record.json"
    write_record(path, record)
    again = read_record(path)
    assert np.array_equal(again.probs, record.probs)
    assert again.shots == 1000


def test_record_from_json_rejects_malformed():
    family = builtin_family(2)
    data = record_to_json(probabilities(random_density(2, 0), family))
    del data["bases"][0]["p"]
    with pytest.raises(ValueError):
        record_from_json(data)
