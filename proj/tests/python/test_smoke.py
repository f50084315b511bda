import math

import numpy as np
import pytest

import sdeproj


def test_lambda_and_remainder_sets():
    assert sorted(sdeproj.lambda_set(1, 1)) == [[], [1]]
    rem = sdeproj.remainder_set(sdeproj.lambda_set(2, 1), 1)
    assert sorted(rem) == sorted([[0, 0], [1, 0], [0, 1], [0, 1, 1], [1, 1, 1]])


def test_circle_projection_matches_exact_angle_sde():
    sde = sdeproj.cross_diffusion_sde(1.0)
    circle = sdeproj.embeddings.circle()
    for theta in (0.1, 0.9):
        drift, diffusion = sdeproj.project_coefficients(
            sdeproj.ProjectionKind.ito_jet, sde, circle, np.array([theta]))
        exact_drift, exact_diffusion = sdeproj.exact_angular_coefficients(theta, 1.0)
        assert drift[0] == pytest.approx(exact_drift, abs=1e-12)
        assert diffusion[0, 0] == pytest.approx(exact_diffusion, abs=1e-12)


def test_python_callables_drive_euler():
    sde = sdeproj.AmbientSde(1, 1, lambda x, t: -x, lambda x, t: np.zeros((1, 1)))
    times, states = sdeproj.euler_maruyama(sde, np.array([1.0]), 0.0, 1e-3, 1000,
                                           sdeproj.NoiseSource(1, 0))
    assert len(times) == 1001
    assert states[-1, 0] == pytest.approx(math.exp(-1.0), abs=1e-3)


def test_numeric_filter_coefficients_match_closed_form():
    a = sdeproj.closed_form_coefficients("jet_hellinger", 0.3, 0.8, 0.05)
    b = sdeproj.numeric_projection_coefficients("hellinger", sdeproj.ProjectionKind.ito_jet,
                                                0.3, 0.8, 0.05)
    np.testing.assert_allclose(np.concatenate(a), np.concatenate(b), rtol=1e-9, atol=1e-12)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        sdeproj.closed_form_coefficients("ukf", 0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        sdeproj.validate_config("unknown_key = 1\n")


def test_run_config_writes_csv(tmp_path):
    code, files, message = sdeproj.run_config(
        "experiment = coefficient-table\ntable_theta1 = 0\ntable_theta2 = 1\n", str(tmp_path))
    assert code == 0, message
    assert any(f.endswith("coefficient_table.csv") for f in files)
    assert sdeproj.validate_config("dt_fd = 0.001\ndt_filter = 0.001\n")
