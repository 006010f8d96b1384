import math

import numpy as np
import pytest

from platelab.experiments import (TestFamily, Verdict, centered_mass, loglog_slope, product_exponent,
                                  run_chirp_unboundedness, run_dilation_scaling, run_growth_study,
                                  run_multiplier_bound, run_product_inequality)
from platelab.lattice import Field, Lattice
from platelab.mixed_norms import MixedNormSpec
from platelab.multipliers import Symbol

LAT = Lattice(1, 128, 16.0)


def test_family_reproducible_and_centered():
    a = TestFamily.random(LAT, 8, seed=5)
    b = TestFamily.random(LAT, 8, seed=5)
    c = TestFamily.random(LAT, 8, seed=6)
    assert a.terms == b.terms and a.terms != c.terms
    assert a.centered() and a.centered(Lattice(1, 64, 16.0))
    for f in a.realize():
        assert f.sup_norm() > 0
        for term_coef in (t.coef for terms in a.terms for t in terms):
            assert abs(term_coef) <= 1


def test_family_rejects_small_torus_and_zero_member():
    with pytest.raises(ValueError, match="too small"):
        TestFamily.random(Lattice(1, 64, 4.0), 5)
    with pytest.raises(ValueError, match="vanishes"):
        TestFamily.from_fields([Field.zeros(LAT)])


def test_centered_mass():
    assert centered_mass(Field.gaussian(LAT, 1.0)) > 0.999999
    assert centered_mass(Field.gaussian(LAT, 1.0, shift=7.0)) < 0.01


def test_multiplier_single_mode_ratio():
    k = 3
    fam = TestFamily.from_fields([Field.plane_wave(LAT, k)])
    rep = run_multiplier_bound(2, 2, 0, 0, fam)
    ratios = rep.column("ratio")
    for r in ratios:
        assert r == pytest.approx(abs(math.cos((k / LAT.L) ** 2)), rel=1e-12)
    assert rep.verdict is Verdict.CONSISTENT


def test_multiplier_plancherel_bound():
    rep = run_multiplier_bound(2, 2, 0, 0, TestFamily.random(LAT, 6, seed=2))
    assert max(rep.column("ratio")) <= 1 + 1e-6


def test_multiplier_j1_consistent():
    rep = run_multiplier_bound(1, 1, 0, 1, TestFamily.random(LAT, 4, seed=2))
    assert rep.verdict is Verdict.CONSISTENT
    assert rep.parameters["refinement_threshold"] == 0.10


def test_dilation_of_constant_symbol_is_flat():
    rep = run_dilation_scaling(Symbol.constant(), MixedNormSpec.wiener(1, math.inf), [1, 2, 4, 8])
    assert abs(rep.parameters["slope"]) < 1e-3
    assert rep.verdict is Verdict.CONSISTENT


def test_dilation_of_gaussian_in_m2():
    g = Field.gaussian(Lattice(1, 1024, 8.0))
    rep = run_dilation_scaling(g, MixedNormSpec.wiener(2, 2), [2, 4, 8, 16, 32])
    assert rep.parameters["slope"] == pytest.approx(-0.5, abs=0.02)


def test_dilation_window_errors():
    g = Field.gaussian(Lattice(1, 256, 8.0))
    with pytest.raises(ValueError, match="Nyquist"):
        run_dilation_scaling(g, MixedNormSpec.wiener(2, 2), [8, 64])
    with pytest.raises(ValueError, match=">= 1"):
        run_dilation_scaling(g, MixedNormSpec.wiener(2, 2), [0.5, 2])
    with pytest.raises(ValueError, match="too fast"):
        run_dilation_scaling(Symbol.tilde_sigma0(), MixedNormSpec.wiener(1, math.inf), [8, 4096])


def test_loglog_slope_uses_top_decade():
    x = [1, 2, 10, 20, 100]
    y = [1, 1, 10, 20, 100]
    assert loglog_slope(x, y) == pytest.approx(1.0)
    assert loglog_slope(x, y, top_decade=False) != pytest.approx(1.0)


def test_growth_single_mode():
    k = 2
    fam = TestFamily.from_fields([Field.plane_wave(Lattice(1, 64, 8.0), k)])
    times = [0.1, 1.0, 3.0]
    rep = run_growth_study(2, 0, fam, times, matched=False)
    w = 4 * math.pi**2 * (k / 8.0) ** 2
    for t, r0 in zip(times, rep.column("sup_ratio_cos")):
        assert r0 == pytest.approx(abs(math.cos(w * t)), rel=1e-9)
        assert r0 <= (1 + t) ** 0.5


def test_growth_times_checked():
    with pytest.raises(ValueError):
        run_growth_study(1, 0, TestFamily.random(LAT, 2), [0.0, 1.0])


def test_product_exponent():
    assert product_exponent(3, 1.0) == 1.0
    assert product_exponent(1, 2.5) == pytest.approx(2.5)
    with pytest.raises(ValueError, match="1/r"):
        product_exponent(3, 2.0)


def test_product_single_factor_ratio_is_one():
    rep = run_product_inequality(1, 2, 1.5, 0, TestFamily.random(LAT, 4, seed=1), tuples=4)
    np.testing.assert_allclose(rep.column("ratio"), 1.0, rtol=1e-14)


def test_product_cubic_refinement_stable():
    rep = run_product_inequality(3, 2, 1, 0, TestFamily.random(LAT, 6, seed=1), tuples=6)
    assert rep.verdict is Verdict.CONSISTENT
    assert rep.parameters["r"] == 1.0


def test_chirp_control_arm_is_isometric():
    fam = TestFamily.random(Lattice(1, 256, 32.0), 6, seed=1)
    rep = run_chirp_unboundedness(2, 2, [0, 1, 4, 16], fam)
    for r in rep.column("ratio"):
        assert abs(r - 1) <= 1e-6
    assert rep.column("ratio")[0] == 1.0


def test_chirp_growth_arm_reports_growth_and_control():
    fam = TestFamily.random(Lattice(1, 256, 64.0), 6, seed=1)
    rep = run_chirp_unboundedness(math.inf, 1, [0, 1, 4, 16], fam)
    R = rep.column("ratio")
    assert R[0] == 1.0 and R[-1] > R[1] > 1
    assert "growth" in rep.parameters and "control_spread" in rep.parameters
    np.testing.assert_allclose(rep.column("control_ratio"), 1.0, atol=1e-6)


def test_report_files(tmp_path):
    rep = run_multiplier_bound(2, 2, 0, 0, TestFamily.random(LAT, 2, seed=1))
    csv_path, verdict_path = rep.write(tmp_path)
    assert csv_path.name == "multiplier.csv"
    text = verdict_path.read_text()
    assert text.startswith("verdict: Consistent\n")
    assert "refinement_threshold = 0.10000000000000001" in text
    assert csv_path.read_text().splitlines()[0] == "member,grid,ratio"
