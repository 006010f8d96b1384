import numpy as np
import pytest

from platelab.gabor import MAX_STFT_ENTRIES, Window, stft, stft_rows, write_abs_csv
from platelab.lattice import Field, Lattice

from oracles import direct_stft_1d, gaussian_stft_abs


def test_matches_double_loop_oracle():
    lat = Lattice(1, 32, 8.0)
    f = Field.gaussian(lat, 0.8, shift=0.5, frequency=0.75) + Field.gaussian(lat, 1.3, amplitude=0.4j)
    g = Window.gaussian(lat, 1.2)
    ref = direct_stft_1d(f.samples, g.samples, lat.L)
    np.testing.assert_allclose(stft(f, g).values, ref, atol=1e-13)


def test_gaussian_closed_form_2d():
    lat = Lattice(2, 32, 4.0)
    g = Field.gaussian(lat)
    M = stft(g)
    x = M.position_coordinates()
    w = M.frequency_coordinates()
    inner = np.max(np.abs(x), axis=1) <= 1.0  # away from the seam of the periodized window
    r2 = np.sum(x[inner] ** 2, axis=1)[:, None] + np.sum(w**2, axis=1)[None, :]
    np.testing.assert_allclose(np.abs(M.values[inner]), 0.5 * np.exp(-np.pi * r2 / 2), atol=1e-5)


def test_gaussian_closed_form_1d():
    lat = Lattice(1, 128, 16.0)
    M = stft(Field.gaussian(lat))
    x = M.position_coordinates()[:, 0][:, None]
    w = M.frequency_coordinates()[:, 0][None, :]
    np.testing.assert_allclose(np.abs(M.values), gaussian_stft_abs(x, w), atol=1e-10)


def test_parseval_with_non_gaussian_window():
    lat = Lattice(1, 64, 8.0)
    rng = np.random.default_rng(3)
    f = Field(lat, rng.normal(size=64) + 1j * rng.normal(size=64))
    g = Window(Field(lat, rng.normal(size=64)))
    assert stft(f, g).energy() == pytest.approx(f.l2_norm() ** 2 * g.l2_norm**2, rel=1e-12)


def test_partial_rows_match_full():
    lat = Lattice(2, 8, 4.0)
    f = Field.gaussian(lat, 0.6, shift=(0.3, 0.0))
    full = stft(f)
    pos = np.array([0, 9, 63])
    part = stft(f, positions=pos)
    np.testing.assert_allclose(part.values, full.values[pos], atol=1e-15)
    assert not part.is_full and full.is_full


def test_window_lattice_mismatch():
    f = Field.gaussian(Lattice(1, 16, 4.0))
    g = Window.gaussian(Lattice(1, 32, 4.0))
    with pytest.raises(ValueError, match="N=16.*N=32"):
        stft(f, g)


def test_memory_cap():
    lat = Lattice(1, 2**13, 8.0)
    with pytest.raises(MemoryError):
        stft_rows(Field.zeros(lat), Window.gaussian(lat), np.arange(MAX_STFT_ENTRIES // lat.size + 1))


def test_zero_window_rejected():
    with pytest.raises(ValueError, match="non-zero"):
        Window(Field.zeros(Lattice(1, 8, 1.0)))


def test_csv_layout(tmp_path):
    lat = Lattice(1, 4, 2.0)
    M = stft(Field.gaussian(lat, 0.5))
    write_abs_csv(M, tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "x_index,omega_index,abs_value"
    assert len(lines) == 1 + 16
    x, k, v = lines[6].split(",")
    assert (int(x), int(k)) == (1, 1)
    assert float(v) == np.abs(M.values)[1, 1]
