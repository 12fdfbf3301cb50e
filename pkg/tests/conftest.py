import pytest
import numpy as np

from fato.bangbang import BangSequence, params_from_theta, strong_pi_sequence, weak_pi_sequence
from fato.qmat import pauli


@pytest.fixture
def weak_params():
    """theta = pi/10 with omega0 = 1, the five-bang X configuration"""
    return params_from_theta(np.pi / 10)


@pytest.fixture
def boundary_params():
    """theta = pi/4, the edge of the weak regime"""
    return params_from_theta(np.pi / 4)


@pytest.fixture
def strong_params():
    """theta = pi/3 with omega0 = 1, so omega = 2"""
    return params_from_theta(np.pi / 3)


@pytest.fixture
def weak_x_sequence(weak_params):
    """Five alternating bangs of pi/omega realising sigma_x"""
    return weak_pi_sequence("X", 5, weak_params)


@pytest.fixture
def weak_y_sequence(boundary_params):
    """Two bangs of pi/sqrt(2) realising sigma_y"""
    return weak_pi_sequence("Y", 2, boundary_params)


@pytest.fixture
def strong_x_sequence(strong_params):
    return strong_pi_sequence("X", strong_params)


@pytest.fixture
def strong_y_sequence(strong_params):
    return strong_pi_sequence("Y", strong_params)


@pytest.fixture
def square_wave(boundary_params):
    """+1 on [0, 1), -1 on [1, 2)"""
    return BangSequence([(1, 1.0), (-1, 1.0)], boundary_params)


@pytest.fixture
def singular_sequence(weak_params):
    """A single drift-only bang, f = 0"""
    return BangSequence([(0, 2.0)], weak_params)


@pytest.fixture
def paulis():
    return {axis: pauli(axis) for axis in "xyz"}


def random_sequence(rng, params, max_bangs=6):
    """Random bang sequence with alternating levels drawn from {+1, 0, -1}."""
    n = int(rng.integers(1, max_bangs + 1))
    levels = [int(rng.choice([1, 0, -1]))]
    while len(levels) < n:
        levels.append(int(rng.choice([v for v in (1, 0, -1) if v != levels[-1]])))
    durations = rng.uniform(0.1, 3.0, size=n)
    return BangSequence(list(zip(levels, durations)), params)
