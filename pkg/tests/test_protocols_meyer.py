import numpy as np
import pytest

from qgames.errors import PreconditionError
from qgames.games import Mixture, Params, best_response, evaluate
from qgames.protocols import meyer

H = np.diag([1.0, 0.0])


@pytest.mark.parametrize("p", [0, 0.25, 0.5, 0.75, 1])
def test_hadamard_twice_always_returns_heads(p):
    h = meyer.hadamard_move()
    out = meyer.meyer_play(h, p, h)
    assert np.abs(out.final_state - H).max() <= 1e-12
    assert out.payoff_p == pytest.approx(-1)
    assert out.payoff_q == pytest.approx(1)


def test_classical_q_moves():
    i = np.eye(2)
    assert meyer.meyer_play(i, 1.0, i).payoff_p == pytest.approx(1)
    assert meyer.meyer_play(i, 0.5, i).payoff_p == pytest.approx(0)


def test_meyer_play_validates():
    with pytest.raises(PreconditionError):
        meyer.meyer_play(np.diag([1, 2]), 0.5, np.eye(2))
    with pytest.raises(PreconditionError):
        meyer.meyer_play(np.eye(2), 1.5, np.eye(2))
    with pytest.raises(PreconditionError):
        meyer.meyer_unitary(1, 1)


def test_midgame_value_examples():
    assert meyer.meyer_midgame_value(1, 0, 1) == pytest.approx(1)
    assert meyer.meyer_midgame_value(0, 1, 0) == pytest.approx(1)
    for u, v in [(1, 0), (0.6, 0.8j), (np.sqrt(0.5), -np.sqrt(0.5))]:
        assert meyer.meyer_midgame_value(u, v, 0.5) == pytest.approx(0)
    with pytest.raises(PreconditionError):
        meyer.meyer_midgame_value(1, 1, 0.5)


def test_midgame_value_matches_two_move_play():
    # stop after P's move: payoff = prob(T) - prob(H)
    rng = np.random.default_rng(1)
    for _ in range(20):
        z = rng.standard_normal(4)
        u, v = complex(z[0], z[1]), complex(z[2], z[3])
        n = np.hypot(abs(u), abs(v))
        u, v = u / n, v / n
        p = rng.uniform()
        two_move = meyer.meyer_play(meyer.meyer_unitary(u, v), p, np.eye(2))
        assert two_move.payoff_p == pytest.approx(meyer.meyer_midgame_value(u, v, p), abs=1e-12)


def test_midgame_saddle_certificate():
    cert = meyer.midgame_saddle_certificate(points=200)
    assert cert.value == pytest.approx(0, abs=1e-15)
    assert cert.p == 0.5
    assert abs(cert.u) ** 2 == pytest.approx(0.5) and abs(cert.v) ** 2 == pytest.approx(0.5)
    assert cert.p_gain <= 1e-12 and cert.q_gain <= 1e-12


def test_spec_gives_q_the_win_and_p_no_improvement():
    h = meyer.hadamard_move()
    spec = meyer.meyer_spec(h, h)
    prof = [Params(), Mixture((0.5, 0.5))]
    assert np.allclose(evaluate(spec, prof), [1, -1])
    assert best_response(spec, prof, 1).gain == 0


def test_spec_without_quantum_move_lets_p_win():
    i = np.eye(2)
    spec = meyer.meyer_spec(i, i)
    br = best_response(spec, [Params(), Mixture((1, 0))], 1)
    assert br.payoff == pytest.approx(1)
    assert br.strategy == Mixture((0.0, 1.0))
