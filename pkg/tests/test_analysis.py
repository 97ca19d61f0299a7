from fractions import Fraction

import numpy as np
import pytest

from analysis.density_analysis import (
    LEVEL_PROXY,
    annulus_vacancy,
    annulus_window,
    density_at_certificate,
    density_flag,
    density_ratio,
    required_resolution,
)
from analysis.length_analysis import arc_length, polyline_length
from analysis.oscillation_analysis import (
    OscillationAnalysis,
    certified_vertex_constant,
    dyadic_scales,
    generation_vertex_ratios,
    merge_scales,
    oscillation,
    root_corner_ratios,
    scaled_profile,
    vertex_constant_from_aspect,
)
from analysis.sampling import QuasiRandomSequence, ball_samples
from construction.build1d import ParamSeq, ZigzagProfile
from errors import ParameterError
from gallery.diagnostics import IdentityFunction
from gallery.sine_example import sine_g, sine_g_prime
from geometry.exactgeom import unit_cube


@pytest.fixture(scope="module")
def cert_third(fmd):
    _, cert = fmd.find_level_point(Fraction(1, 3), 5)
    return cert


@pytest.fixture(scope="module")
def cert_two_thirds(fmd):
    _, cert = fmd.find_level_point(Fraction(2, 3), 5)
    return cert


# 采样

def test_quasi_random_sequence_is_deterministic():
    first = QuasiRandomSequence(2, 0.5)(50)
    second = QuasiRandomSequence(2, 0.5)(50)
    assert first.shape == (50, 2)
    assert np.array_equal(first, second)
    assert ((first >= 0) & (first < 1)).all()
    assert np.allclose(QuasiRandomSequence(2, 0.5).get_vector(3), first[2])


def test_quasi_random_sequence_bad_dimension():
    with pytest.raises(ParameterError):
        QuasiRandomSequence(0)


def test_ball_samples_exact():
    center = (Fraction(1, 10), Fraction(1, 2))
    radius = Fraction(1, 5)
    points = ball_samples(center, radius, 200, unit_cube(2))
    assert points
    for p in points:
        assert all(isinstance(c, Fraction) for c in p)
        assert sum((a - b) ** 2 for a, b in zip(p, center)) <= radius * radius
        assert unit_cube(2).contains(p)


def test_ball_samples_float():
    points = ball_samples((0.5,), 0.25, 40, unit_cube(1), exact=False)
    assert len(points) == 40
    assert all(0.25 <= p[0] <= 0.75 for p in points)


# 振荡

def test_identity_ratio_is_one():
    f = IdentityFunction()
    r = Fraction(1, 8)
    estimate = oscillation(f, Fraction(1, 2), r, budget=16)
    assert estimate.certified == r
    assert estimate.sampled <= estimate.certified
    assert not estimate.partial


def test_oscillation_bad_input():
    f = IdentityFunction()
    with pytest.raises(ParameterError):
        oscillation(f, Fraction(1, 2), 0, budget=4)
    with pytest.raises(ParameterError):
        oscillation(f, Fraction(1, 2), Fraction(1, 4), budget=-1)


def test_profile_on_identity():
    profile = scaled_profile(IdentityFunction(), Fraction(1, 3), dyadic_scales(2, 6), budget=8)
    assert profile.scales == dyadic_scales(2, 6)
    assert profile.lower == 1
    assert profile.upper <= 1
    frame = profile.to_frame()
    assert list(frame.columns) == ["r", "sampled_ratio", "certified_ratio"]
    assert profile.to_dict()["lower"] == "1/1"


@pytest.mark.parametrize("scales", [[], [Fraction(1, 4), Fraction(1, 2)], [Fraction(1, 2), Fraction(0)]])
def test_profile_rejects_bad_scales(scales):
    with pytest.raises(ParameterError):
        scaled_profile(IdentityFunction(), Fraction(1, 3), scales)


def test_scale_helpers():
    assert dyadic_scales(1, 3) == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]
    assert merge_scales([Fraction(1, 2), Fraction(1, 8)], [Fraction(1, 8), Fraction(3, 16), 0]) == [
        Fraction(1, 2), Fraction(3, 16), Fraction(1, 8),
    ]
    with pytest.raises(ParameterError):
        dyadic_scales(4, 2)


def test_vertex_constants():
    assert vertex_constant_from_aspect(Fraction(4, 3)) == Fraction(8, 3)
    assert vertex_constant_from_aspect(Fraction(4, 3), zigzag=False) == Fraction(4, 3)
    with pytest.raises(ParameterError):
        vertex_constant_from_aspect(0)


def test_vertex_constant_from_child_configurations():
    seq = ParamSeq()
    # 根的右端点: 锯齿在 [7/8, 1] 上降到 0, 尺度 1/2
    assert root_corner_ratios(seq, ZigzagProfile()) == [Fraction(3, 2), Fraction(2)]
    assert root_corner_ratios(seq, ZigzagProfile(), zigzag=False) == [Fraction(3, 2), Fraction(1)]
    # 子矩形高长比 8/7: 右侧到子矩形高度的 3/4, 左侧是兄弟矩形的高度
    assert generation_vertex_ratios(seq, 0, 1) == [Fraction(12, 7)] * 4
    cstar = certified_vertex_constant(seq)
    assert cstar == 2
    assert cstar < 2 * seq.limit_aspect_bound()
    assert certified_vertex_constant(seq, zigzag=False) == Fraction(3, 2) * seq.limit_aspect_bound() / (1 - seq.a(8))


def test_vertex_constant_for_explicit_sequence():
    seq = ParamSeq(kind="explicit", values=(Fraction(1, 5), Fraction(1, 40)), depth_cap=2)
    cstar = certified_vertex_constant(seq)
    limit = seq.limit_aspect_bound()
    assert limit == Fraction(5, 4) * Fraction(40, 39)
    assert cstar == max(Fraction(2), Fraction(3, 2) * limit / (1 - Fraction(1, 40)))
    assert cstar <= 2 * limit


def test_survey_frame():
    analysis = OscillationAnalysis({"scales": {"k_min": 2, "k_max": 4}, "budget": 8, "cover_cells": 4})
    assert analysis.scales([Fraction(3, 16)]) == [Fraction(1, 4), Fraction(3, 16), Fraction(1, 8), Fraction(1, 16)]
    frame = analysis.survey(IdentityFunction(), [Fraction(1, 3), Fraction(1, 2)])
    assert len(frame) == 2
    assert list(frame["lower"]) == [1, 1]
    assert frame["point"][0] == ["1/3"]


def test_sampled_never_exceeds_certified_on_md(fmd, rational):
    for x in rational(3, n_dim=2, seed=0.3):
        estimate = oscillation(fmd, x, Fraction(1, 64), budget=8, cover_cells=3)
        assert estimate.sampled <= estimate.certified


# 环形空洞与密度

def test_annulus_window_contains_double_ball(cert_third):
    window = annulus_window(cert_third, 2)
    half = window.side / 2
    assert window.center == cert_third.point
    assert half * half >= 4 * cert_third.radius_sq(2)


def test_required_resolution_bounds(cert_third):
    n = 2
    grid_n = required_resolution(cert_third, n)
    assert annulus_window(cert_third, n).side / (grid_n - 1) <= cert_third.grids[n].gap
    with pytest.raises(ParameterError):
        required_resolution(cert_third, cert_third.depth)


@pytest.mark.parametrize("n", [0, 1, 5, 7])
def test_annulus_out_of_range_is_inconclusive(fmd, cert_third, n):
    verdict = annulus_vacancy(fmd, cert_third, n)
    assert verdict.inconclusive
    assert not verdict.vacant


def test_annulus_coarse_grid_is_inconclusive(fmd, cert_third):
    verdict = annulus_vacancy(fmd, cert_third, 2, grid_n=3)
    assert verdict.inconclusive
    assert verdict.resolution > verdict.gap
    assert verdict.checked == 0


def test_annulus_wide_tolerance_is_inconclusive(fmd, cert_third):
    verdict = annulus_vacancy(fmd, cert_third, 2, tol=cert_third.label_gap(2))
    assert verdict.inconclusive
    assert verdict.checked == 0


def test_annulus_exceptional_certificate(fmd):
    _, cert = fmd.find_level_point(Fraction(1, 2), 4)
    verdict = annulus_vacancy(fmd, cert, 2)
    assert verdict.inconclusive
    assert verdict.to_dict()["vacant"] is False


@pytest.mark.slow
@pytest.mark.parametrize("cert_name", ["cert_third", "cert_two_thirds"])
@pytest.mark.parametrize("n", [2, 3])
def test_annulus_is_vacant(fmd, request, cert_name, n):
    verdict = annulus_vacancy(fmd, request.getfixturevalue(cert_name), n)
    assert not verdict.inconclusive
    assert verdict.checked > 0
    assert verdict.vacant
    assert verdict.offending == []


@pytest.mark.slow
def test_annulus_detects_injected_level(fmd, cert_third):
    # 容差覆盖整个 [0,1], 环内每个点都会被报告
    verdict = annulus_vacancy(fmd, cert_third, 2, tol=1, proxy=LEVEL_PROXY)
    assert not verdict.inconclusive
    assert not verdict.vacant
    assert len(verdict.offending) == verdict.checked > 0


def test_density_at_first_generation(fmd, cert_third):
    report = density_at_certificate(fmd, cert_third, 0)
    assert report.defined
    assert report.count_outer == report.count_inner
    assert report.ratio == Fraction(1, 2)
    assert density_flag(report) == "not_density_one"
    assert report.to_dict()["ratio"] == "1/2"


@pytest.mark.slow
@pytest.mark.parametrize("cert_name, n", [
    ("cert_third", 2),
    ("cert_third", 3),
    ("cert_two_thirds", 0),
    ("cert_two_thirds", 2),
    ("cert_two_thirds", 3),
])
def test_density_is_one_half(fmd, request, cert_name, n):
    report = density_at_certificate(fmd, request.getfixturevalue(cert_name), n)
    assert report.defined
    assert report.ratio == Fraction(1, 2)
    assert density_flag(report) == "not_density_one"


def test_density_ratio_counts():
    points = [(Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(0)), (Fraction(1), Fraction(1))]
    report = density_ratio(points, (Fraction(0), Fraction(0)), r=Fraction(1, 4))
    assert (report.count_inner, report.count_outer) == (1, 2)
    assert report.ratio == 1
    assert density_flag(report) == "inconclusive"


def test_density_ratio_undefined():
    report = density_ratio([(Fraction(1), Fraction(1))], (Fraction(0), Fraction(0)), r=Fraction(1, 4))
    assert not report.defined
    assert report.ratio is None
    assert density_flag(report) == "undefined"
    with pytest.raises(ParameterError):
        density_ratio([], (Fraction(0), Fraction(0)), r=0)


def test_density_bad_generation(fmd, cert_third):
    with pytest.raises(ParameterError):
        density_at_certificate(fmd, cert_third, cert_third.depth)


# 长度

def test_polyline_length_of_line():
    assert polyline_length(lambda x: x, (0.0, 1.0), 10) == pytest.approx(2 ** 0.5)
    assert polyline_length(lambda x: 0 * x, (0.0, 1.0), 7, chunk=3) == pytest.approx(1.0)


def test_polyline_length_bad_input():
    with pytest.raises(ParameterError):
        polyline_length(sine_g, (0.0, 1.0), 0)
    with pytest.raises(ParameterError):
        polyline_length(sine_g, (1.0, 0.5), 10)


def test_polyline_refinement_is_monotone():
    lengths = [polyline_length(sine_g, (0.01, 1.0), 1000 * 2 ** k) for k in range(5)]
    assert lengths == sorted(lengths)


def test_sine_graph_length_grows():
    lengths = [polyline_length(sine_g, (delta, 1.0), 2_000_000) for delta in (1e-2, 1e-3, 1e-4)]
    assert lengths == sorted(lengths)
    assert lengths[-1] > 5


def test_arc_length_matches_polyline():
    numeric = arc_length(sine_g_prime, (0.01, 1.0))
    polyline = polyline_length(sine_g, (0.01, 1.0), 2_000_000)
    assert numeric == pytest.approx(polyline, rel=0.05)
