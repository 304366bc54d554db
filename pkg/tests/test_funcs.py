import numpy as np
import pytest

import posdefkit as pk
from posdefkit import funcs as fns


def test_chebyshev_grid_interior():
    g = fns.chebyshev_grid(0.0, 2.0, 8)
    assert g.shape == (8,)
    assert np.all(np.diff(g) > 0)
    assert g[0] > 0.0 and g[-1] < 2.0
    # first-kind nodes: cos spacing, symmetric about midpoint
    np.testing.assert_allclose(g + g[::-1], 2.0, rtol=0, atol=1e-12)


def test_uniform_grid():
    # interior points, same open-interval convention as the chebyshev grid
    g = fns.uniform_grid(-1.0, 1.0, 5)
    np.testing.assert_allclose(g, np.linspace(-1.0, 1.0, 7)[1:-1])


def test_handle_calls_and_domain():
    f = fns.from_callable(np.exp, domain=(0.0, 4.0))
    assert f(1.0) == pytest.approx(np.e)
    out = f(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert out.shape == (2, 2)
    with pytest.raises(pk.DomainError):
        f(-0.5)
    with pytest.raises(pk.DomainError):
        f(np.array([1.0, 5.0]))


def test_handle_rejects_nonfinite_output():
    f = fns.from_callable(lambda t: np.full_like(np.asarray(t, dtype=np.float64), np.inf))
    with pytest.raises(pk.DomainError):
        f(0.5)


def test_evenize():
    f = fns.from_callable(lambda t: np.exp(-t), domain=(0.0, np.inf))
    g = fns.evenize(f)
    assert g(-2.0) == g(2.0) == pytest.approx(np.exp(-2.0))
    assert g.domain[0] == -np.inf


def test_deriv_zero_matches_eval():
    # deriv(0) must agree with plain evaluation
    entry = pk.get("exp_decay")
    f = entry.func
    assert f.deriv is not None
    t = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(f.deriv(t, 0), f(t), rtol=1e-15)
