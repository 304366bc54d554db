"""The compiled fast path and the numpy fallback must be interchangeable."""
import json
import os
import subprocess
import sys

import numpy as np
import pytest

import posdefkit as pk
from posdefkit import _accel

LAMS = np.array([0.0, 1e-9, 5e-5, 2e-3, 0.3, 4.0, 250.0, -0.7, -2.0])


def test_backend_is_reported():
    assert pk.backend_name() in ("numba", "numpy")
    assert pk.numba_enabled() == (pk.backend_name() == "numba")


@pytest.mark.parametrize("u", [-0.99, -0.1, 0.0, 0.3, 2.5])
def test_e_lambda_twins_agree(u):
    a = np.array([_accel._np_e_lambda(LAMS, u)]).ravel()
    b = np.array([_accel.e_lambda_vals(LAMS, u)]).ravel()
    np.testing.assert_allclose(b, a, rtol=1e-13, atol=0.0)


@pytest.mark.parametrize("t", [0.05, 0.9, 1.0, 1.1, 7.0])
def test_f_lambda_twins_agree(t):
    a = _accel._np_f_lambda(LAMS, t)
    b = _accel.f_lambda_vals(LAMS, t)
    np.testing.assert_allclose(b, a, rtol=1e-13, atol=0.0)


@pytest.mark.parametrize("u", [-0.99, 0.3, 2.5])
def test_damped_twins_agree(u):
    pos = LAMS[LAMS >= 0]
    a = _accel._np_e_lambda_damped(pos, u, 1.0)
    b = _accel.e_lambda_damped_vals(pos, u, 1.0)
    np.testing.assert_allclose(b, a, rtol=1e-13, atol=0.0)
    a = _accel._np_e_lambda_dt_damped(pos, u, 1.0)
    b = _accel.e_lambda_dt_damped_vals(pos, u, 1.0)
    np.testing.assert_allclose(b, a, rtol=1e-13, atol=0.0)


@pytest.mark.parametrize("k", [0, 1, 3])
def test_exp_weighted_sum_twins_agree(k):
    rng = np.random.default_rng(5)
    lam = rng.uniform(-2.0, 3.0, 12)
    w = rng.uniform(0.0, 2.0, 12)
    for t in (0.1, 1.0, 4.0):
        a = _accel._np_exp_weighted_sum(lam, w, t, k)
        b = _accel.exp_weighted_sum(lam, w, t, k)
        assert b == pytest.approx(a, rel=1e-13)


def test_exp_weighted_sum_log_space_survives_huge_terms():
    # individually overflowing factors must combine in log space
    lam = np.array([-800.0])
    w = np.array([1e-300])
    got = _accel.exp_weighted_sum(lam, w, 1.0, 0)
    assert got == pytest.approx(np.exp(np.log(1e-300) + 800.0), rel=1e-12)


def test_forced_numpy_backend_subprocess():
    env = dict(os.environ, POSDEFKIT_NO_NUMBA="1")
    src = (
        "import json, posdefkit as pk\n"
        "from posdefkit import levykhin as lk\n"
        "vals = [pk.backend_name(),\n"
        "        lk.e_lambda(5e-5, 3.0), lk.f_lambda(2.0, 3.0),\n"
        "        lk.synth_bernstein(pk.get('log1p').lk_data, 1.0)]\n"
        "print(json.dumps(vals))\n"
    )
    out = subprocess.run(
        [sys.executable, "-c", src], capture_output=True, text=True, env=env, timeout=120
    )
    assert out.returncode == 0, out.stderr
    name, e_val, f_val, synth_val = json.loads(out.stdout)
    assert name == "numpy"
    from posdefkit import levykhin as lk

    assert e_val == pytest.approx(lk.e_lambda(5e-5, 3.0), rel=1e-13)
    assert f_val == pytest.approx(lk.f_lambda(2.0, 3.0), rel=1e-13)
    assert synth_val == pytest.approx(lk.synth_bernstein(pk.get("log1p").lk_data, 1.0), rel=1e-12)
