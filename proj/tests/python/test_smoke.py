# Smoke checks of the Python bindings against values the C++ suite pins:
# closed-form error variances, the digamma rate bound, scenario sizing, exact
# region vertices, fading synthesis as numpy arrays, and the experiment
# runner round trip. Runs standalone (plain asserts) and under pytest.
import math
import os
import sys
import tempfile

if os.environ.get("PILOTNN_MODULE_DIR"):
    sys.path.insert(0, os.environ["PILOTNN_MODULE_DIR"])

try:
    import _core as pn
except ImportError:
    print("pilotnn _core extension not importable; skipping")
    sys.exit(77)

import numpy as np


def rect_model(lambda_d=0.125):
    return pn.PsdModel("rectangular", lambda_d)


def test_error_variance_closed_forms():
    m = rect_model()
    # L n_t / ((1/(2 lambda_d)) snr + L n_t) at L=4, snr=100
    assert abs(pn.error_variance_no_alias(m, 4, 1, 100.0) * 101.0 - 1.0) < 1e-12
    assert abs(pn.error_variance_no_alias(m, 4, 2, 100.0) * 51.0 - 1.0) < 1e-12
    # aliased sampling keeps a strictly positive floor
    assert pn.aliased_error_lower_bound(m, 5, 2, 1) > 0.0
    general = pn.error_variance_general(m, 4, 1, 1, 1, 100.0)
    assert abs(general - pn.error_variance_no_alias(m, 4, 1, 100.0)) < 1e-9


def test_interpolator_predicted_mse():
    s = pn.build_schedule(4, 1, 2, 3)
    assert (s.L, s.n_pilot, s.T, s.n) == (4, 1, 2, 3)
    w = pn.solve_weights(s, rect_model(), 100.0)
    assert abs(w.predicted_mse(1, 1) / 0.059804201666 - 1.0) < 1e-9
    assert w.residual() < 1e-10


def test_digamma_bound():
    # psi(1) = -gamma; the n_t = 1, eps2 = 0 closed form is psi(1) - 1
    assert abs(pn.digamma_closed_form(1, 0.0) + 1.5772156649015329) < 1e-12
    g = pn.gmi_lb_digamma(rect_model(), 4, 1, 1e4)
    assert g.variant == "digamma"
    assert g.se == 0.0
    mc = pn.gmi_lb_asymptotic(rect_model(), 4, 1, 1e4, mc=20000, seed=17)
    assert abs(mc.value - g.value) <= 4.0 * mc.se + 1e-9


def test_scenario_sizing():
    env = pn.Environment(
        delay_spread_s=1e-6, velocity_mps=pn.kmh_to_mps(5.0), carrier_hz=8e8
    )
    lam = pn.lambda_from_env(env)
    assert abs(lam / 1.8518518518518518e-05 - 1.0) < 1e-12
    assert pn.l_star_from_lambda(lam) in (26999, 27000)
    assert pn.l_star_from_lambda(0.2) == 2


def test_regions_and_verdict():
    jt = pn.jt_region(2, 1, 1, 8)
    assert jt.vertices_exact[2] == ("3/4", "3/4")
    assert all(abs(v - 0.75) < 1e-15 for v in jt.vertices[2])
    td = pn.tdma_region(2, 1, 1, 8, beta_steps=4)
    assert len(td.samples) == 5
    assert abs(td.samples[0][1] - 0.875) < 1e-15
    v = pn.corollary_verdict(4, 2, 2, 9)
    assert v["verdict"] == "JT_superior"
    assert v["jt_threshold"] == 8.0 and v["tdma_threshold"] == 6.0
    assert pn.corollary_verdict(1, 1, 1, 50)["jt_threshold"] is None


def test_synthesize_array():
    m = rect_model()
    a = pn.synthesize(m, 2, 1, 4096, seed=5)
    assert a.shape == (4096, 2, 1) and a.dtype == np.complex128
    power = float(np.mean(np.abs(a) ** 2))
    assert abs(power - 1.0) < 0.15
    b = pn.synthesize(m, 2, 1, 4096, seed=5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, pn.synthesize(m, 2, 1, 4096, seed=6))


def test_run_experiment_and_load_path():
    cfg = "\n".join(
        [
            "schema_version = 1",
            "experiment = dump-fading",
            "psd.shape = rectangular",
            "psd.lambda_d = 0.125",
            "path.n_r = 2",
            "path.n_t = 1",
            "path.length = 64",
            "seed = 21",
        ]
    )
    with tempfile.TemporaryDirectory() as d:
        files = pn.run_experiment(cfg, d, threads=1)
        assert len(files) == 1 and files[0].endswith("fading.bin")
        loaded = pn.load_path(files[0])
        direct = pn.synthesize(rect_model(), 2, 1, 64, seed=21)
        assert loaded.shape == direct.shape
        # the file stores float32 components
        assert np.max(np.abs(loaded - direct)) < 1e-5

    cfg_scn = "\n".join(
        [
            "schema_version = 1",
            "experiment = scenario",
            "env.delay_spread_s = 1e-6",
            "env.velocity_kmh = 5",
            "env.carrier_hz = 8e8",
        ]
    )
    with tempfile.TemporaryDirectory() as d:
        files = pn.run_experiment(cfg_scn, d)
        assert len(files) == 1 and files[0].endswith("scenario.json")
        text = open(files[0]).read()
        assert '"lambda_d"' in text and '"l_star"' in text


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"{t.__name__}: ok")
    print(f"{len(tests)} python smoke checks passed")


if __name__ == "__main__":
    main()
