"""Experiment tables: reproducible CSV serialization and basic assertions."""
import numpy as np

from shapeapprox import ExpFunction
from shapeapprox.experiments import (
    run_bernstein_xeps,
    run_generator_report,
    run_lambda2_counterexample,
    run_mn_error_study,
)


def test_bernstein_xeps_small():
    table = run_bernstein_xeps(0.5, 0.0, [64, 256, 1024])
    assert table.assertions["midpoint_envelope_stable"]
    assert table.assertions["endpoint_envelope_stable"]
    csv = table.to_csv()
    assert "# sha256:" in csv and "err_mid" in csv
    # reruns are bit-identical
    assert csv == run_bernstein_xeps(0.5, 0.0, [64, 256, 1024]).to_csv()


def test_mn_error_study_small():
    table = run_mn_error_study(1, 0.0, ExpFunction(), [32, 64])
    assert table.ok, table.assertions
    errs = [row[2] for row in table.rows]
    assert errs[1] < errs[0]  # error shrinks with n


def test_lambda2_counterexample():
    table = run_lambda2_counterexample([1e-2, 1e-4, 1e-6])
    assert table.assertions["error_strictly_increasing"]
    assert table.assertions["error_ratio_gt_3"]
    # the lambda=2 modulus at t=1 genuinely grows ~ |ln eps|/2: at h=1 the
    # left node of the difference at x = sqrt(eps) reaches x^2 = eps, where
    # ln(x+eps) is unboundedly steep.  The experiment reports this honestly.
    oms = [row[1] for row in table.rows]
    assert all(b > a for a, b in zip(oms, oms[1:]))
    errs = [row[2] for row in table.rows]
    assert errs[-1] / errs[0] > 3


def test_generator_report():
    table = run_generator_report(1, [32, 64, 128])
    assert table.ok, table.assertions
    slopes = table.config["delta2_slope"]
    assert -2.4 <= slopes <= -1.6


def test_csv_assertion_lines():
    table = run_generator_report(2, [32, 64])
    text = table.to_csv()
    for key in table.assertions:
        assert f"# assert {key}:" in text
