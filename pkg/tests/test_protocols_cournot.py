import numpy as np
import pytest
from pydantic import ValidationError

from qgames.protocols import cournot as cn


def _cfg(gamma, a=12.0, c=0.0):
    return cn.CournotConfig(a=a, c=c, gamma=gamma)


def test_unentangled_equilibrium_is_classical():
    eq = cn.cournot_closed_form(_cfg(0.0))
    assert np.allclose(eq.y, [4, 4], atol=1e-12)
    assert np.allclose(eq.profit, [16, 16], atol=1e-12)


def test_strong_entanglement_approaches_collusion():
    eq = cn.cournot_closed_form(_cfg(10.0))
    assert abs(eq.profit[0] - 18) < 1e-3


@pytest.mark.parametrize("gamma", [0.0, 0.3, 1.0, 2.5])
def test_first_order_conditions_vanish(gamma):
    eq = cn.cournot_closed_form(_cfg(gamma))
    assert np.allclose(cn.first_order_conditions(_cfg(gamma), *eq.y), 0, atol=1e-9)


@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0, 2.0, 5.0, 10.0])
def test_grid_certificate(gamma):
    assert cn.certify_cournot(_cfg(gamma), points=2000) <= 1e-4


def test_first_order_conditions_against_finite_differences(rng):
    for _ in range(10):
        cfg = _cfg(rng.uniform(0, 2))
        y1, y2 = rng.uniform(0, 3, 2)
        h = 1e-6
        d1 = (cn.payoffs(cfg, y1 + h, y2)[0] - cn.payoffs(cfg, y1 - h, y2)[0]) / (2 * h)
        d2 = (cn.payoffs(cfg, y1, y2 + h)[1] - cn.payoffs(cfg, y1, y2 - h)[1]) / (2 * h)
        assert np.allclose(cn.first_order_conditions(cfg, y1, y2), [d1, d2], atol=1e-5)


def test_gaussian_profit_subtracts_variance(rng):
    for _ in range(10):
        cfg = cn.CournotConfig(a=12, gamma=rng.uniform(0, 2), h=rng.uniform(0.1, 2))
        y1, y2 = rng.uniform(0, 3, 2)
        g = cn.gaussian_payoffs(cfg, y1, y2)
        m = cn.payoffs(cfg, y1, y2)
        assert np.allclose(g, np.array(m) - cfg.h / 2, atol=1e-9)


def test_gaussian_profit_at_classical_equilibrium():
    assert np.allclose(cn.gaussian_payoffs(_cfg(0.0), 4, 4), [15.5, 15.5], atol=1e-9)


def test_stackelberg_classical():
    r = cn.stackelberg_solve(_cfg(0.0))
    assert abs(r.y1 - 6) < 1e-9 and abs(r.y2 - 3) < 1e-9


@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0, 2.0])
def test_stackelberg_matches_closed_form(gamma):
    r = cn.stackelberg_solve(_cfg(gamma))
    assert abs(r.y1 - r.y1_closed_form) < 1e-9
    assert r.profits[0] >= r.profits[1]


def test_stackelberg_leader_optimum_against_grid():
    cfg = _cfg(0.7)
    r = cn.stackelberg_solve(cfg)
    ys = np.linspace(0, cfg.margin, 20001)
    assert cn.leader_profit(cfg, ys).max() <= r.profits[0] + 1e-9


def test_stackelberg_gap_grows_with_entanglement():
    gaps = [cn.stackelberg_solve(_cfg(g)).gap for g in np.linspace(0, 2, 10)]
    assert all(b >= a - 1e-12 for a, b in zip(gaps, gaps[1:]))
    assert abs(gaps[0] - 9.0) < 1e-9


def test_config_rejects_unprofitable_market():
    with pytest.raises(ValidationError):
        cn.CournotConfig(a=1.0, c=1.0)
    with pytest.raises(ValidationError):
        cn.CournotConfig(a=1.0, c=2.0)
    with pytest.raises(ValidationError):
        cn.CournotConfig(a=1.0, h=0.0)
