import math

import numpy as np
import pytest

import nhlat


def test_fibonacci_and_lucas():
    pair = nhlat.lucas_pair(nhlat.lucas_params(1, -1), 9)
    assert pair.u_terms == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]
    assert pair.v_terms == [2, 1, 3, 4, 7, 11, 18, 29, 47, 76]
    assert abs(nhlat.closed_form_v(nhlat.lucas_params(1, -1), 5) - 11.0) < 1e-9


def test_lattice_and_spectrum():
    g = nhlat.build_preset(nhlat.PresetVariant.single_system_reservoir,
                           nhlat.PresetParams(), 1.02)
    h = g.to_matrix()
    assert h.shape == (19, 19)
    assert np.allclose(h, h.T)  # real couplings: complex symmetric

    modes = nhlat.eigendecompose(h)
    assert len(modes) == 19
    for m in modes[::5]:
        assert np.linalg.norm(h @ m.vector - m.energy * m.vector) < 1e-8 * np.linalg.norm(h)

    pairing = nhlat.check_nhph(modes, 1e-8)
    assert pairing.max_defect <= 1e-8


def test_zero_mode_and_diagnostics():
    fam = nhlat.preset_family(nhlat.PresetVariant.single_system_reservoir,
                              nhlat.PresetParams())
    res = nhlat.find_zero_mode(fam, 1.0, 1.1, 1e-8)
    assert 1.0 < res.t_star < 1.1
    assert abs(res.mode.energy) <= 1e-8

    lattice = fam(res.t_star)
    reservoir = lattice.sites_in(nhlat.Region.reservoir)
    assert nhlat.recurrence_residual(res.mode, reservoir, 1.0) <= 1e-6
    amps = np.abs(res.mode.vector)[9:19]
    slopes = np.diff(amps)
    assert np.allclose(slopes, slopes[0], atol=1e-9)  # linear tail


def test_constant_intensity_mode():
    fam = nhlat.preset_family(nhlat.PresetVariant.mirror_bridge, nhlat.PresetParams())
    res = nhlat.find_zero_mode(fam, 0.95, 1.05, 1e-8)
    lattice = fam(res.t_star)
    assert nhlat.classify_parity(res.mode, lattice) == nhlat.Parity.symmetric
    ci = nhlat.constant_intensity_metrics(res.mode, lattice.sites_in(nhlat.Region.reservoir))
    assert ci.intensity.relative_std <= 1e-6
    for d in ci.neighbor_phase_diffs:
        assert abs(d - math.pi / 2) <= 1e-6
    assert abs(nhlat.edge_amplitude_ratio(res.mode, lattice) - res.t_star) <= 1e-3


def test_validation_errors_map_to_python():
    with pytest.raises(ValueError):
        nhlat.build_ssh(8, 0.2, 1.0, 1.0)  # even chains are rejected
    with pytest.raises(ValueError):
        nhlat.alpha_from_gamma(2.0, 0.0)


def test_reproduce_scenario(tmp_path):
    result = nhlat.run_reproduce("fig4", tmp_path / "fig4")
    assert result.all_pass()
    assert (tmp_path / "fig4" / "mode_000.csv").exists()
    assert (tmp_path / "fig4" / "report_000.json").exists()
