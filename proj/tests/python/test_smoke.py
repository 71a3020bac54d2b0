import json
import math
import os

import pytest

import sblab


def test_bernstein_roundtrip():
    f = sblab.BernsteinFunction.make("stable", 1.0)
    assert f.phi(4.0) == pytest.approx(2.0)
    assert f.phi_prime(1.0) == pytest.approx(0.5)
    delta, sigma = sblab.fit_a3(f)
    assert delta == pytest.approx(0.5, abs=1e-3)
    assert sigma <= 1.001 * (1.0 + 1e-9)
    assert "stable" in sblab.family_names()


def test_certify_dict():
    f = sblab.BernsteinFunction.make("geometric", 1.0)
    w = sblab.certify(f, d=2)
    assert w["global_ok"]
    assert w["a3"] == "holds"
    assert w["a6_converges"]


def test_domain_and_boundary_limit():
    D = sblab.Domain.ball([0.0, 0.0], 1.0)
    assert D.contains([0.5, 0.0])
    assert not D.contains([1.5, 0.0])
    assert D.dist_to_boundary([0.5, 0.0]) == pytest.approx(0.5)

    f = sblab.ExteriorFunction.power(0.8, 1.0, [1.0, 0.0])
    bm = sblab.boundary_limit(D, f, [1.0, 0.0], gamma=0.3, k_max=10, n=4000)
    assert not bm["non_cauchy"]
    assert bm["limit"] < 0.05


def test_subordinator_laplace_identity():
    f = sblab.BernsteinFunction.make("stable", 1.0)
    dt, lam, n = 0.1, 2.0, 20000
    s = sblab.subordinator_increments(f, dt, n, seed=7)
    emp = sum(math.exp(-lam * v) for v in s) / n
    target = math.exp(-dt * f.phi(lam))
    assert emp == pytest.approx(target, abs=4.0 / math.sqrt(n))


def test_estimate_u_f_constant_data():
    D = sblab.Domain.ball([0.0, 0.0], 1.0)
    f = sblab.ExteriorFunction.constant(1.0)
    phi = sblab.BernsteinFunction.make("stable", 1.0)
    est = sblab.estimate_u_f(D, f, [0.0, 0.0], 2000, phi, seed=11)
    assert est["value"] == pytest.approx(1.0)
    assert est["censored"] == 0


def test_estimate_u_f_deterministic_across_workers():
    D = sblab.Domain.ball([0.0, 0.0], 1.0)
    f = sblab.ExteriorFunction.power(0.8, 1.0, [1.0, 0.0])
    phi = sblab.BernsteinFunction.make("stable", 1.0)
    a = sblab.estimate_u_f(D, f, [0.3, 0.0], 5000, phi, seed=3, workers=1)
    b = sblab.estimate_u_f(D, f, [0.3, 0.0], 5000, phi, seed=3, workers=3)
    assert a["value"] == b["value"]
    assert a["se"] == b["se"]


def test_tangential_curve_points_shrink():
    D = sblab.Domain.ball([0.0, 0.0], 1.0)
    phi = sblab.BernsteinFunction.make("stable", 1.0)
    radii = [2.0**-k for k in range(4, 8)]
    curve = sblab.tangential_curve(D, phi, [1.0, 0.0], 0.3, 1.0, 2.0, radii)
    assert len(curve) == 4
    deltas = [row["delta"] for row in curve]
    assert all(d > 0 for d in deltas)
    assert deltas == sorted(deltas, reverse=True)
    for row in curve:
        assert row["companion_delta"] < row["delta"]


def test_run_config_and_validation(tmp_path):
    cfg = {
        "experiment": "assumptions-report",
        "families": [{"name": "stable", "alpha": 1.0}],
    }
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    res = sblab.run_config(str(p), out_dir=str(tmp_path / "run"))
    assert res["overall"] == "consistent"
    assert res["exit_code"] == 0
    report = json.loads(res["report"])
    assert report["experiment"] == "assumptions-report"
    assert os.path.exists(os.path.join(res["out_dir"], "report.json"))
    assert os.path.exists(os.path.join(res["out_dir"], "assumptions.csv"))

    bad = tmp_path / "bad.json"
    bad.write_text('{"experiment": "nope"}')
    with pytest.raises(ValueError):
        sblab.validate_config(str(bad))
