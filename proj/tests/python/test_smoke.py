import json
import math

import numpy as np
import pytest

import qkdcert as qc


def test_binary_entropy():
    assert qc.binary_entropy(0.0) == 0.0
    assert qc.binary_entropy(0.5) == 1.0
    assert abs(qc.binary_entropy(0.11) - 0.499915958164528) < 1e-12


def test_certify_ideal():
    stats = qc.EstimatedStats(q_x=1, q_z=1, q_ph=1, delta_x=0, delta_z=0)
    cert = qc.certify(stats, qc.ImperfectionParams(delta=0, eta_z=1))
    assert cert.rate == 1.0
    assert cert.positive
    assert cert.valid_region


def test_phase_error_solver():
    bound = qc.solve_delta_ph(qc.EstimatedStats(1, 1, 1, 0, 0), 0.05)
    assert abs(bound.delta_ph - 0.19) < 1e-8
    bumped = qc.apply_leakage(bound, q_ph=0.5, eta_z=0.8, epsilon_z=0.01)
    assert abs(bumped.delta_ph_tilde - (0.19 + 0.025)) < 1e-8
    assert abs(qc.closed_form_delta_ph(1.0, 0.0, 0.05) - 0.38) < 1e-12


def test_inconsistent_statistics_raises():
    with pytest.raises(qc.InconsistentStatistics):
        qc.solve_delta_ph(qc.EstimatedStats(1.0, 1.0, 0.3, 0.0, 0.0), 0.0)


def test_characterization_with_numpy_matrices():
    rho_z = np.array([[1, 0], [0, 0]], dtype=complex)
    rho_x = np.full((2, 2), 0.5, dtype=complex)
    assert abs(qc.fidelity(rho_z, rho_x) - 1 / math.sqrt(2)) < 1e-10
    assert abs(qc.basis_dependence(rho_z, rho_x) - (1 - 1 / math.sqrt(2)) / 2) < 1e-10
    assert abs(qc.trace_distance(rho_z, rho_x) - 1 / math.sqrt(2)) < 1e-10
    povm = np.diag([0.3, 0.7]).astype(complex)
    assert abs(qc.blinding_parameter(povm, np.eye(2, dtype=complex)) - 0.3) < 1e-12
    assert qc.factor_common_loss(0.5, 1.0) == (1.0, 0.5)


def test_rates():
    stats = qc.EstimatedStats(1, 1, 1, 0.05, 0.05)
    cert = qc.rate_detector_only(stats, eta_z=0.8)
    assert abs(cert.rate - 0.28448547719127897) < 1e-12
    assert abs(qc.rate_ideal(0.25, 0.25) + 0.62255624891826573) < 1e-12


def test_simulation_is_deterministic():
    config = json.dumps({"n": 20000, "seed": 7, "channel": {"depolarizing": 0.1}})
    first = qc.simulate_report_json(config, 1)
    second = qc.simulate_report_json(config, 4)
    assert first == second

    report = qc.simulate(config)
    assert abs(report.stats.delta_x - 0.05) < 0.01
    assert report.certificate.positive
    counts = report.counts
    cell = counts["xx"]
    assert cell["n0"] + cell["n1"] + cell["vacuum"] == cell["total"]


def test_blinding_attack_is_caught():
    config = json.dumps(
        {
            "n": 20000,
            "seed": 3,
            "detector": {"dark": 0.05},
            "eve": {"blind_fraction": 1.0},
        }
    )
    report = qc.simulate(config)
    assert report.derived_imperfections.eta_z == 0.0
    assert not report.certificate.positive
    assert report.certificate.rate <= 0.0


def test_boundary_tracing():
    sweep = json.dumps(
        {
            "axis_x": "delta_over_q",
            "axis_y": "delta",
            "ranges": {"x": [0, 0.2], "y": [0, 0.04]},
            "resolution": 3,
            "fixed": {"q": 1.0, "eta_z": 1.0},
            "symmetric": True,
        }
    )
    points = qc.trace_boundary(sweep)
    row0 = [x for (y, x) in points if y == 0.0]
    assert row0 and abs(row0[0] - 0.1464466) < 1e-5
    surface = qc.rate_surface(sweep)
    assert any(r == 1.0 for (_, _, r) in surface)
