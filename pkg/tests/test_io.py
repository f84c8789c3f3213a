import numpy as np
import pytest

from cwtinv import io as cio
from cwtinv.cwt import ScaleGrid, cwt_forward
from cwtinv.errors import InputDomainError, StructuralError
from cwtinv.wavelets import Morlet

from .conftest import window_signal


def test_wrec1_round_trip(tmp_path, rng):
    values = rng.normal(size=(5, 16)) + 1j * rng.normal(size=(5, 16))
    path = tmp_path / "w.wrec1"
    cio.write_scalogram_binary(path, values)
    assert path.stat().st_size == 13 + 5 * 16 * 16
    assert path.read_bytes()[:5] == b"WREC1"
    np.testing.assert_array_equal(cio.read_scalogram_binary(path), values)


def test_wrec1_bad_magic(tmp_path):
    path = tmp_path / "w.wrec1"
    cio.write_scalogram_binary(path, np.zeros((2, 4)))
    data = bytearray(path.read_bytes())
    data[:5] = b"WREC2"
    path.write_bytes(bytes(data))
    with pytest.raises(StructuralError, match="magic"):
        cio.read_scalogram_binary(path)


def test_wrec1_truncated(tmp_path):
    path = tmp_path / "w.wrec1"
    cio.write_scalogram_binary(path, np.zeros((2, 4)))
    path.write_bytes(path.read_bytes()[:-3])
    with pytest.raises(StructuralError):
        cio.read_scalogram_binary(path)


def test_signal_csv_round_trip(tmp_path):
    s = window_signal(lambda x: np.exp(1j * x - x**2), 64, -4, 4)
    path = tmp_path / "s.csv"
    cio.write_signal_csv(path, s)
    back = cio.read_signal_csv(path)
    assert back.x0 == s.x0 and back.step == pytest.approx(s.step, rel=1e-15)
    np.testing.assert_array_equal(back.samples, s.samples)


def test_signal_csv_real_only(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("x,f\n0,1\n0.5,2\n1.0,3\n1.5,4\n")
    s = cio.read_signal_csv(path)
    assert s.step == 0.5
    np.testing.assert_array_equal(s.samples, [1, 2, 3, 4])


def test_signal_csv_uneven_spacing(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("x,f\n0,1\n0.5,2\n1.1,3\n1.5,4\n")
    with pytest.raises(InputDomainError, match="uniformly"):
        cio.read_signal_csv(path)


def test_signal_csv_header_required(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("0,1\n0.5,2\n1.0,3\n1.5,4\n2.0,5\n")
    with pytest.raises(StructuralError):
        cio.read_signal_csv(path)


def test_scalogram_csv_layout(tmp_path):
    s = window_signal(lambda x: np.exp(-(x**2)), 8, -2, 2)
    g = ScaleGrid.log_spaced(0.5, 1.0, 1 / 2)
    scal = cwt_forward(s, Morlet(1.0), g)
    path = tmp_path / "w.csv"
    cio.write_scalogram_csv(path, scal)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# x0=-2.0,step=0.5,n=8")
    assert lines[1].split(",")[:4] == ["a", "weight", "re_0", "im_0"]
    assert len(lines) == 2 + g.size
    first = [float(v) for v in lines[2].split(",")]
    assert first[0] == g.scales[0]
    assert complex(first[2], first[3]) == scal.values[0, 0]


def test_json_rejects_nan(tmp_path):
    with pytest.raises(ValueError):
        cio.write_json(tmp_path / "x.json", {"v": float("nan")})
