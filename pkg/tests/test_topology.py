import numpy as np
import pytest

from picotdd import topology


def test_distance_examples():
    assert topology.distance((0, 0), (3, 4)) == 5.0
    assert topology.distance((7.5, -2.0), (7.5, -2.0)) == 0.0
    assert topology.distance((0, 0), (500, 0)) == 500.0


def test_distance_rejects_non_finite():
    with pytest.raises(ValueError):
        topology.distance((0, 0), (float("inf"), 0))


def test_paper_scale_counts():
    layout = topology.generate_layout(19, 4, 10, seed=7)
    assert layout.n_picos == 228
    assert layout.n_ues == 2280


def test_minimal_counts():
    layout = topology.generate_layout(1, 1, 1, seed=1)
    assert layout.n_picos == 3          # one per sector
    assert layout.n_ues == 3


def test_determinism():
    a = topology.generate_layout(1, 4, 10, seed=42)
    b = topology.generate_layout(1, 4, 10, seed=42)
    assert np.array_equal(a.pico_xy, b.pico_xy)
    assert np.array_equal(a.ue_xy, b.ue_xy)
    assert np.array_equal(a.serving, b.serving)
    c = topology.generate_layout(1, 4, 10, seed=43)
    assert not np.array_equal(a.pico_xy, c.pico_xy)


def test_drop_constraints():
    layout = topology.generate_layout(2, 4, 10, seed=5)
    # every UE inside its serving disc and outside the keep-out radii
    for j in range(layout.n_ues):
        d_serv = topology.distance(layout.ue_xy[j], layout.pico_xy[layout.serving[j]])
        assert d_serv <= layout.pico_radius_m + 1e-9
        d_all = np.linalg.norm(layout.pico_xy - layout.ue_xy[j], axis=1)
        assert d_all.min() >= 10.0 - 1e-9
    pp = np.linalg.norm(layout.pico_xy[:, None] - layout.pico_xy[None, :], axis=2)
    np.fill_diagonal(pp, np.inf)
    assert pp.min() >= 40.0 - 1e-9
    uu = np.linalg.norm(layout.ue_xy[:, None] - layout.ue_xy[None, :], axis=2)
    np.fill_diagonal(uu, np.inf)
    assert uu.min() >= 3.0 - 1e-9
    assert layout.n_ues == layout.n_picos * 10


def test_picos_inside_their_site_cell():
    layout = topology.generate_layout(3, 2, 1, seed=11)
    per_site = 6  # 3 sectors x 2 picos
    for i, p in enumerate(layout.pico_xy):
        site = layout.site_xy[i // per_site]
        d_own = topology.distance(p, site)
        d_others = [topology.distance(p, s) for s in layout.site_xy]
        assert d_own <= min(d_others) + 1e-6


def test_infeasible_placement_raises():
    with pytest.raises(topology.PlacementError):
        topology.generate_layout(1, 400, 1, seed=1, max_tries=50)


def test_dump_table_golden():
    layout = topology.generate_layout(1, 1, 1, seed=9)
    text = layout.dump_table()
    lines = text.strip().split("\n")
    assert lines[0] == "id\tkind\tx_m\ty_m\tserving"
    assert len(lines) == 1 + 3 + 3
    assert lines[1].startswith("0\tpico\t")
    ue_row = lines[4].split("\t")
    assert ue_row[1] == "ue"
    assert ue_row[4] in {"0", "1", "2"}
    # stable across calls
    assert layout.dump_table() == text
