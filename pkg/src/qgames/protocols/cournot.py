"""Continuous-variable duopoly with a hyperbolic entangler, on Gaussian means.

Firm ``j`` shifts its coordinate by ``y_j``; after disentangling the state is
a Gaussian centred at ``q = (y1 cosh g + y2 sinh g, y1 sinh g + y2 cosh g)``
with variance ``h/2`` per coordinate.  Profits use the linear price
``a - (x1 + x2)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..errors import PreconditionError


class CournotConfig(BaseModel):
    a: float
    c: float = Field(0.0, ge=0.0)
    gamma: float = Field(0.0, ge=0.0)
    h: float = Field(1.0, gt=0.0)

    @model_validator(mode="after")
    def _margin(self):
        if self.a <= self.c:
            raise ValueError("price intercept a must exceed unit cost c")
        return self

    @property
    def margin(self) -> float:
        return self.a - self.c


def quantities(cfg: CournotConfig, y1, y2) -> tuple:
    ch, sh = np.cosh(cfg.gamma), np.sinh(cfg.gamma)
    return y1 * ch + y2 * sh, y1 * sh + y2 * ch


def payoffs(cfg: CournotConfig, y1, y2) -> tuple:
    """Profits at the mean quantities."""
    q1, q2 = quantities(cfg, y1, y2)
    rest = cfg.margin - (q1 + q2)
    return q1 * rest, q2 * rest


def gaussian_payoffs(cfg: CournotConfig, y1: float, y2: float, order: int = 20) -> tuple[float, float]:
    """Exact expected profits under the final Gaussian density, by Gauss-Hermite quadrature."""
    q1, q2 = quantities(cfg, y1, y2)
    t, w = np.polynomial.hermite.hermgauss(order)
    # density exp(-(x-q)^2/h)/sqrt(pi h): substitute x = q + sqrt(h) t
    x1 = q1 + np.sqrt(cfg.h) * t[:, None]
    x2 = q2 + np.sqrt(cfg.h) * t[None, :]
    ww = np.outer(w, w) / np.pi
    rest = cfg.margin - (x1 + x2)
    return float(np.sum(ww * x1 * rest)), float(np.sum(ww * x2 * rest))


def first_order_conditions(cfg: CournotConfig, y1: float, y2: float) -> tuple[float, float]:
    """``(d u1 / d y1, d u2 / d y2)``."""
    ch, e = np.cosh(cfg.gamma), np.exp(cfg.gamma)
    q1, q2 = quantities(cfg, y1, y2)
    rest = cfg.margin - e * (y1 + y2)
    return ch * rest - e * q1, ch * rest - e * q2


@dataclass(frozen=True)
class CournotEquilibrium:
    y: tuple[float, float]
    profit: tuple[float, float]
    q: tuple[float, float]


def _check_price(cfg: CournotConfig, q1: float, q2: float) -> None:
    if q1 + q2 > cfg.a + 1e-12:
        raise PreconditionError("total quantity exceeds the price intercept")


def cournot_closed_form(cfg: CournotConfig) -> CournotEquilibrium:
    g = cfg.gamma
    y = cfg.margin * np.cosh(g) / (1 + 2 * np.exp(2 * g))
    profit = cfg.margin ** 2 * np.exp(g) * np.cosh(g) / (3 * np.cosh(g) + np.sinh(g)) ** 2
    q1, q2 = quantities(cfg, y, y)
    _check_price(cfg, q1, q2)
    return CournotEquilibrium((float(y), float(y)), (float(profit), float(profit)), (float(q1), float(q2)))


def certify_cournot(cfg: CournotConfig, points: int = 2000, span: float | None = None) -> float:
    """Largest gain from a unilateral move to any of ``points`` grid values in ``[0, span]``."""
    eq = cournot_closed_form(cfg)
    y1, y2 = eq.y
    span = cfg.margin if span is None else span
    grid = np.linspace(0.0, span, points)
    g1 = payoffs(cfg, grid, y2)[0].max() - eq.profit[0]
    g2 = payoffs(cfg, y1, grid)[1].max() - eq.profit[1]
    return float(max(g1, g2, 0.0))


@dataclass(frozen=True)
class StackelbergResult:
    y1: float
    y2: float
    profits: tuple[float, float]
    y1_closed_form: float

    @property
    def gap(self) -> float:
        return self.profits[0] - self.profits[1]


def follower_reaction(cfg: CournotConfig, y1):
    e2 = np.exp(2 * cfg.gamma)
    return (cfg.margin * np.cosh(cfg.gamma) - y1 * e2) / (1 + e2)


def leader_profit(cfg: CournotConfig, y1):
    return payoffs(cfg, y1, follower_reaction(cfg, y1))[0]


def stackelberg_solve(cfg: CournotConfig) -> StackelbergResult:
    """Leader optimum found numerically and compared with the closed form.

    The leader's profit along the follower's reaction is quadratic in ``y1``,
    so three samples fix it and the vertex is exact.
    """
    g = cfg.gamma
    xs = np.array([0.0, 0.5, 1.0]) * cfg.margin
    fx = np.array([leader_profit(cfg, x) for x in xs])
    c2, c1, _ = np.polyfit(xs, fx, 2)
    if c2 >= 0:
        raise PreconditionError("leader objective is not concave")
    y1 = -c1 / (2 * c2)
    y2 = float(follower_reaction(cfg, y1))
    closed = cfg.margin * (1 + np.cosh(2 * g)) / (2 * (np.cosh(g) + np.exp(g)))
    q1, q2 = quantities(cfg, y1, y2)
    _check_price(cfg, q1, q2)
    u1, u2 = payoffs(cfg, y1, y2)
    return StackelbergResult(float(y1), y2, (float(u1), float(u2)), float(closed))
