import numpy as np
import pytest

from hardylab.extrapolate import richardson


def test_recovers_log_model():
    hs = np.array([1 / 64, 1 / 128, 1 / 256])
    y = 0.25 + 3.0 / (np.log(1 / hs) + 1.5) ** 2
    ex = richardson(hs, y)
    assert ex.method == "log"
    assert ex.value == pytest.approx(0.25, abs=1e-9)
    assert ex.params[1] == pytest.approx(1.5, abs=1e-6)


def test_order_independent():
    hs = [1 / 64, 1 / 128, 1 / 256]
    y = [0.5, 0.45, 0.42]
    assert richardson(hs, y) == richardson(hs[::-1], y[::-1])


def test_uses_three_finest_levels():
    hs = [1 / 32, 1 / 64, 1 / 128, 1 / 256]
    y = 0.25 + 3.0 / (np.log(1 / np.array(hs)) + 1.5) ** 2
    y[0] = 99.0
    assert richardson(hs, y).value == pytest.approx(0.25, abs=1e-9)


@pytest.mark.parametrize("y", [[1.0, 0.9, 0.95], [1.0, 0.99, 0.9], [1.0, 1.0, 1.0]])
def test_falls_back_to_finest(y):
    ex = richardson([0.1, 0.05, 0.025], y)
    assert ex.method == "finest" and ex.value == y[-1]


def test_too_few_levels():
    assert richardson([0.1, 0.05], [2.0, 1.5]).value == 1.5

