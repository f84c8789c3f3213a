import numpy as np
import pytest

from cwtinv.spectral import SampledSignal


def rel_l2(a, b):
    a = getattr(a, "samples", a)
    b = getattr(b, "samples", b)
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / np.linalg.norm(np.asarray(b)))


def window_signal(func, n=1024, lo=-20.0, hi=20.0):
    return SampledSignal.on_window(func, n, lo, hi)


@pytest.fixture
def gauss_deriv():
    return window_signal(lambda x: x * np.exp(-0.5 * x**2))


@pytest.fixture
def gauss():
    return window_signal(lambda x: np.exp(-0.5 * x**2))


@pytest.fixture
def rng():
    return np.random.default_rng(20141)
