import itertools

import numpy as np
import pytest
from pydantic import ValidationError

from qgames.protocols import bv


def test_single_bit():
    r = bv.bv_protocol(bv.BVInstance(n=1, a=1))
    assert r.guessed == 1 and r.oracle_calls == 1


def test_five_bits_one_query():
    r = bv.bv_protocol(bv.BVInstance(n=5, a=22))
    assert r.guessed == 22
    assert r.oracle_calls == 1
    assert abs(abs(r.amplitude) - 1) < 1e-12


@pytest.mark.parametrize("n", range(1, 9))
def test_every_secret_recovered(n):
    for a in range(2 ** n):
        r = bv.bv_protocol(bv.BVInstance(n=n, a=a))
        assert r.guessed == a and r.oracle_calls == 1
        assert abs(abs(r.amplitude) - 1) < 1e-12


@pytest.mark.parametrize("n", range(1, 7))
def test_walsh_hadamard_is_involution(n):
    w = bv.walsh_hadamard(n)
    assert np.allclose(w @ w, np.eye(2 ** n), atol=1e-12)


def test_uniform_stage():
    r = bv.bv_protocol(bv.BVInstance(n=4, a=9))
    assert np.allclose(r.uniform_stage, np.full(16, 0.25), atol=1e-12)


@pytest.mark.parametrize("n", range(1, 7))
def test_oracle_signs_by_enumeration(n):
    for a in range(2 ** n):
        oracle = bv.SignOracle(n, a)
        signs = oracle(np.ones(2 ** n, dtype=complex)).real
        for x in range(2 ** n):
            bits_a = [(a >> k) & 1 for k in range(n)]
            bits_x = [(x >> k) & 1 for k in range(n)]
            dot = sum(p * q for p, q in zip(bits_a, bits_x)) % 2
            assert signs[x] == (-1) ** dot


def test_oracle_counts_calls():
    o = bv.SignOracle(2, 3)
    for k in range(3):
        o(np.ones(4))
    assert o.calls == 3


def test_parity():
    for x, want in [(0, 0), (1, 1), (3, 0), (7, 1), (22, 1)]:
        assert bv.parity(x) == want
    assert all(bv.parity(x) == sum(b) % 2
               for x, b in enumerate(itertools.product([0, 1], repeat=5)))


def test_instance_validation():
    with pytest.raises(ValidationError):
        bv.BVInstance(n=3, a=8)
    with pytest.raises(ValidationError):
        bv.BVInstance(n=0, a=0)
    with pytest.raises(ValidationError):
        bv.BVInstance(n=3, a=-1)
