import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from ddsb.anchors import band_anchors
from ddsb.config import Config
from ddsb.discriminator import (
    cumulative_curve,
    deltas_for_transition,
    detect_phases,
    detect_phases_from_masks,
    directions,
    expansion_rate,
    find_phase_pair,
    ray_distance,
    ray_distances,
)
from ddsb.phantom import PhantomSpec, generate
from oracles import brute_force_phase_pair, count_max_pairs, reference_ray_distance


def disk_mask(side, center, radius):
    """Ones background with a 0-disk (cavity) of the given radius."""
    yy, xx = np.mgrid[0:side, 0:side]
    inside = (yy - center[0]) ** 2 + (xx - center[1]) ** 2 <= radius**2
    return np.where(inside, 0, 1).astype(np.uint8)


def region_of(mask_side, rows, cols):
    region = np.zeros((mask_side, mask_side), dtype=bool)
    region[rows, cols] = True
    return region


def test_directions_cover_the_circle():
    th = directions(72)
    assert th.shape == (72,)
    assert th[0] == pytest.approx(2 * np.pi / 72)
    assert th[-1] == pytest.approx(2 * np.pi)
    with pytest.raises(ValueError):
        directions(3)


def test_ray_distance_disk():
    mask = disk_mask(41, (20, 20), 10)
    anchor = (20.0, 20.0)
    th = directions(72)
    d = ray_distances(mask, anchor, th)
    assert np.isfinite(d).all()
    # within the 0.5-pixel sampling bound of a near-continuous march
    for theta, got in zip(th, d):
        fine = reference_ray_distance(mask, anchor, theta, step=0.01)
        assert abs(got - fine) <= 0.5 + 0.01
    # rasterization keeps every hit near the nominal radius, mean much closer
    assert np.all(np.abs(d - 10.0) <= 1.5)
    assert abs(float(d.mean()) - 10.0) <= 0.5


def test_ray_distance_anchor_on_boundary_pixel():
    mask = np.zeros((9, 9), dtype=np.uint8)
    mask[4, 4] = 1
    assert ray_distance(mask, (4, 4), 1.234) == 0.0
    assert (ray_distances(mask, (4, 4), directions(8)) == 0.0).all()


def test_ray_distance_no_boundary_is_invalid():
    mask = np.zeros((9, 9), dtype=np.uint8)
    d = ray_distances(mask, (4, 4), directions(8))
    assert np.isnan(d).all()


def test_ray_distance_anchor_out_of_bounds():
    mask = np.zeros((9, 9), dtype=np.uint8)
    with pytest.raises(ValueError):
        ray_distance(mask, (9.2, 4), 0.0)
    with pytest.raises(ValueError):
        ray_distance(mask, (-0.6, 4), 0.0)


@settings(max_examples=60, deadline=None)
@given(
    hnp.arrays(np.uint8, st.tuples(st.integers(3, 12), st.integers(3, 12)),
               elements=st.integers(0, 1)),
    st.floats(0, 2 * math.pi),
    st.data(),
)
def test_ray_distances_match_scalar_reference(mask, theta, data):
    h, w = mask.shape
    ar = data.draw(st.floats(0, h - 1))
    ac = data.draw(st.floats(0, w - 1))
    got = ray_distance(mask, (ar, ac), theta)
    want = reference_ray_distance(mask, (ar, ac), theta)
    if want is None:
        assert math.isnan(got)
    else:
        assert got == want


def test_deltas_identical_masks_are_zero():
    mask = disk_mask(41, (20, 20), 10)
    aset = band_anchors(region_of(41, [20], [20]), t_a=1)
    deltas = deltas_for_transition(mask, mask, aset, k=36)
    assert deltas.shape == (36, 1)
    assert np.isfinite(deltas).all()
    assert (deltas == 0).all()


def test_deltas_growing_disk():
    m0 = disk_mask(61, (30, 30), 10)
    m1 = disk_mask(61, (30, 30), 12)
    aset = band_anchors(region_of(61, [30], [30]), t_a=1)
    deltas = deltas_for_transition(m0, m1, aset, k=72)
    assert np.isfinite(deltas).all()
    # each ray moves by ~+2 up to one step of discretization on each side
    assert np.all(np.abs(deltas - 2.0) <= 1.0)
    assert float(deltas.mean()) == pytest.approx(2.0, abs=0.3)


def test_deltas_invalid_propagates():
    m0 = disk_mask(41, (20, 20), 10)
    m1 = np.zeros((41, 41), dtype=np.uint8)  # cavity vanished: no boundary at all
    aset = band_anchors(region_of(41, [20], [20]), t_a=1)
    deltas = deltas_for_transition(m0, m1, aset, k=16)
    assert np.isnan(deltas).all()
    d2 = deltas_for_transition(m1, m1, aset, k=16)
    assert np.isnan(d2).all()


def test_deltas_shape_and_errors():
    m = disk_mask(41, (20, 20), 10)
    aset = band_anchors(region_of(41, [18, 20, 22], [20, 20, 20]), t_a=3)
    assert deltas_for_transition(m, m, aset, k=24).shape == (24, 3)
    with pytest.raises(ValueError):
        deltas_for_transition(m, m[:-1], aset, k=24)


def test_expansion_rate_unanimous():
    rate = expansion_rate(np.full(216, 2.0), alpha=5.0)
    assert rate == pytest.approx(216 / 216.000001)
    assert 0 < rate < 1


def test_expansion_rate_balanced_is_zero():
    deltas = np.array([1.0, -1.0, 2.0, -2.0, 0.5, -0.5])
    assert expansion_rate(deltas, alpha=5.0) == 0.0


def test_expansion_rate_all_anomalous_is_zero():
    deltas = np.array([7.0, -9.0, 5.0])  # |delta| >= alpha, strict filter
    assert expansion_rate(deltas, alpha=5.0) == 0.0


def test_expansion_rate_zeros_count_in_denominator():
    deltas = np.array([0.0, 0.0, 1.0])
    assert expansion_rate(deltas, alpha=5.0) == pytest.approx(1 / 3.000001)


def test_expansion_rate_invalid_entries_ignored():
    base = np.array([1.0, 1.0, -1.0, 0.0])
    padded = np.concatenate([base, [np.nan] * 7])
    assert expansion_rate(base, 5.0) == expansion_rate(padded, 5.0)


def test_expansion_rate_alpha_none_keeps_everything():
    deltas = np.array([100.0, -1.0])
    assert expansion_rate(deltas, alpha=None) == 0.0
    assert expansion_rate(deltas, alpha=5.0) == pytest.approx(-1 / 1.000001)


def test_expansion_rate_signed_mean_mode():
    deltas = np.array([2.0, 2.0, -1.0])
    assert expansion_rate(deltas, alpha=5.0, mode="signed-mean") == pytest.approx(3 / 3.000001)
    with pytest.raises(ValueError):
        expansion_rate(deltas, alpha=5.0, mode="median")


def test_cumulative_curve_examples():
    assert cumulative_curve([0, 0, 0]).cumulative.tolist() == [0, 0, 0, 0]
    assert cumulative_curve([1, 1, 1]).cumulative.tolist() == [0, 1, 2, 3]
    assert cumulative_curve([-1, -1, -1, 1, 1]).cumulative.tolist() == [0, -1, -2, -3, -2, -1]


def test_cumulative_curve_errors():
    with pytest.raises(ValueError):
        cumulative_curve([1.0])
    with pytest.raises(ValueError):
        cumulative_curve([1.0, 2.0], valid_counts=[3])


def test_phase_pair_contraction_then_expansion():
    curve = cumulative_curve([-1, -1, -1, 1, 1])
    res = find_phase_pair(curve)
    assert (res.i0, res.j0) == (1, 4)
    assert res.objective == pytest.approx(5.0)
    assert (res.t_ed, res.t_es) == (1, 4)
    assert not res.degenerate


def test_phase_pair_monotone_expansion_swaps():
    curve = cumulative_curve([1, 1, 1])  # A = [0, 1, 2, 3]
    res = find_phase_pair(curve)
    assert (res.i0, res.j0) == (1, 4)
    assert res.objective == pytest.approx(-3.0)
    assert (res.t_ed, res.t_es) == (4, 1)


def test_phase_pair_degenerate_zero_curve():
    res = find_phase_pair(cumulative_curve([0.0, 0.0, 0.0]))
    assert res.degenerate
    assert (res.t_ed, res.t_es) == (1, 2)
    assert res.objective == 0.0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=2, max_size=60))
def test_phase_pair_matches_brute_force(rates):
    curve = cumulative_curve(rates)
    res = find_phase_pair(curve)
    i, j, obj = brute_force_phase_pair(curve.cumulative)
    assert (res.i0, res.j0) == (i, j)
    assert res.objective == obj  # bitwise: same expression order on both sides


def test_detect_constant_masks_degenerate():
    mask = disk_mask(41, (20, 20), 10)
    res = detect_phases_from_masks([mask] * 6, Config(min_area=1))
    assert res.degenerate
    assert (res.curve.rates == 0).all()


def test_detect_constant_frames_degenerate():
    frame = np.full((32, 32), 128, dtype=np.uint8)
    res = detect_phases(
        [frame.copy() for _ in range(5)], Config(window=9, min_area=1)
    )
    assert res.degenerate


def test_detect_rates_bounded_and_zero_on_identical_neighbors():
    spec = PhantomSpec(frame_count=12, ed_frame=2, es_frame=8)
    seq = generate(spec)
    masks = list(seq.masks) + [seq.masks[-1]]  # identical final transition
    res = detect_phases_from_masks(masks, Config())
    assert np.all(np.abs(res.curve.rates) <= 1.0)
    assert res.curve.rates[-1] == 0.0
    assert res.curve.valid_counts is not None
    assert len(res.curve.valid_counts) == len(masks) - 1


def test_detect_reversal_swaps_roles():
    spec = PhantomSpec(frame_count=16, ed_frame=4, es_frame=11)
    seq = generate(spec)
    cfg = Config()
    fwd = detect_phases_from_masks(seq.masks, cfg)
    assert not fwd.degenerate
    assert count_max_pairs(fwd.curve.cumulative) == 1  # precondition: strict max
    rev = detect_phases_from_masks(seq.masks[::-1], cfg)
    T = len(seq.masks)
    assert rev.t_ed == T + 1 - fwd.t_ed
    assert rev.t_es == T + 1 - fwd.t_es
    assert np.sign(rev.phase.objective) == -np.sign(fwd.phase.objective)


def test_detect_appending_copy_keeps_pair():
    spec = PhantomSpec(frame_count=14, ed_frame=5, es_frame=12)
    seq = generate(spec)
    cfg = Config()
    base = detect_phases_from_masks(seq.masks, cfg)
    assert count_max_pairs(base.curve.cumulative) == 1
    extended = detect_phases_from_masks(list(seq.masks) + [seq.masks[-1]], cfg)
    assert (extended.phase.i0, extended.phase.j0) == (base.phase.i0, base.phase.j0)


def test_detect_equal_masks_give_equal_curves():
    spec = PhantomSpec(frame_count=10, ed_frame=2, es_frame=7)
    seq = generate(spec)
    a = detect_phases_from_masks([m.copy() for m in seq.masks], Config())
    b = detect_phases_from_masks([m.copy() for m in seq.masks], Config())
    assert np.array_equal(a.curve.cumulative, b.curve.cumulative)
    assert np.array_equal(a.curve.rates, b.curve.rates)
    assert (a.t_ed, a.t_es) == (b.t_ed, b.t_es)


def test_detect_needs_three_frames():
    mask = disk_mask(41, (20, 20), 10)
    with pytest.raises(ValueError):
        detect_phases_from_masks([mask, mask], Config())
    with pytest.raises(ValueError):
        detect_phases([np.full((32, 32), 9, dtype=np.uint8)] * 2, Config(window=9))
