from fractions import Fraction

import pytest

from analysis.oscillation_analysis import certified_vertex_constant, oscillation
from construction.buildmd import (
    CuboidNode,
    MdFunction,
    MdParams,
    child_cuboid,
    core_interval,
    label_intervals,
    labeled_subcubes,
    root_cuboid,
)
from construction.label_grid import LabelGrid, choose_s, s_min
from construction.simplex import kuhn_interpolate, kuhn_weights
from errors import DimensionError, DomainError, ParameterError
from geometry.exactgeom import Cube, Interval
from geometry.whitney import iter_whitney_cubes

A0 = Fraction(1, 8)


def first_whitney_cube(fmd):
    root = root_cuboid(2)
    return root, next(iter_whitney_cubes(root.base, fmd.min_side(root)))


# 标记网格

def test_s_min_for_default_parameters():
    assert s_min(2, A0) == 14
    assert choose_s(2, A0) == 14
    assert choose_s(2, A0, {"kind": "fixed", "s": 16}) == 16


@pytest.mark.parametrize("s", [12, 15])
def test_fixed_s_rejected(s):
    with pytest.raises(ParameterError):
        choose_s(2, A0, {"kind": "fixed", "s": s})


def test_s_min_bad_input():
    with pytest.raises(DimensionError):
        s_min(0, A0)
    with pytest.raises(ParameterError):
        s_min(2, 1)


def test_grid_layout(fmd):
    root, wc = first_whitney_cube(fmd)
    assert wc.cube == Cube((Fraction(1, 4), Fraction(1, 4)), Fraction(1, 8))
    grid = fmd.grid(root, wc.cube)
    assert grid.N == 196
    assert grid.side == (1 - A0) * wc.cube.side / grid.N
    assert grid.gap > 0
    assert grid.label((3, 5)) == 3 + 5 * 14
    assert grid.digits(73) == (3, 5)
    assert all(grid.label(grid.digits(omega)) == omega for omega in range(grid.N))
    with pytest.raises(ParameterError):
        grid.digits(grid.N)


def test_grid_checks_on_largest_cubes(fmd):
    root = root_cuboid(2)
    cubes = iter_whitney_cubes(root.base, fmd.min_side(root))
    for _, wc in zip(range(10), cubes):
        grid = LabelGrid(wc.cube, A0, 14)
        assert grid.separation_ok()
        assert grid.fiber_coverage_ok()
        assert grid.ball_fits()
        assert 0 < grid.y_uncovered_fraction() < 1


def test_grid_locate(fmd):
    root, wc = first_whitney_cube(fmd)
    grid = fmd.grid(root, wc.cube)
    labeled = grid.cube((3, 5))
    assert grid.locate(labeled.center) == ((3, 5), True)
    assert grid.locate(grid.origin) == ((0, 0), False)
    assert grid.locate(wc.cube.corner) == (None, False)


def test_labeled_subcubes_count(fmd):
    _, wc = first_whitney_cube(fmd)
    cubes = labeled_subcubes(wc, A0, 14)
    assert len(cubes) == 196 * 196
    assert {label for _, label in cubes} == set(range(196))


# Kuhn 剖分

def test_kuhn_weights_are_barycentric():
    lambdas = (Fraction(1, 3), Fraction(3, 4), Fraction(1, 2))
    weights = kuhn_weights(lambdas)
    assert len(weights) == 4
    assert all(w >= 0 for _, w in weights)
    assert sum(w for _, w in weights) == 1
    for axis in range(3):
        assert sum(w * v[axis] for v, w in weights) == lambdas[axis]


def test_kuhn_interpolation_reproduces_affine():
    def affine(v):
        return 2 * v[0] - 3 * v[1] + Fraction(1, 7)

    lo = (Fraction(1, 5), Fraction(1, 3))
    hi = (Fraction(2, 5), Fraction(1, 2))
    for point in [(Fraction(1, 4), Fraction(2, 5)), (Fraction(3, 10), Fraction(49, 100)), lo, hi]:
        assert kuhn_interpolate(lo, hi, point, affine) == affine(point)


def test_kuhn_bad_input():
    with pytest.raises(DomainError):
        kuhn_weights((Fraction(3, 2),))
    with pytest.raises(DomainError):
        kuhn_interpolate((0, 0), (0, 1), (0, 0), lambda v: 0)
    with pytest.raises(DimensionError):
        kuhn_interpolate((0,), (1, 1), (0, 0), lambda v: 0)


# 参数与长方体

def test_params_validation():
    with pytest.raises(DimensionError):
        MdParams(m=1)
    with pytest.raises(ParameterError):
        MdParams(whitney_depth=2)


def test_params_config_round_trip():
    params = MdParams()
    assert MdParams.from_config(params.to_config()) == params
    assert params.s(0) == 14


def test_child_cuboid_heights(fmd):
    root, wc = first_whitney_cube(fmd)
    rj = child_cuboid(root, wc)
    assert rj.z0 == Fraction(1, 4)
    assert rj.h == Fraction(1, 8)
    assert rj.alpha == root.alpha
    parts = label_intervals(rj, 196)
    assert parts[0].lo == rj.z0 and parts[195].hi == rj.z0 + rj.h
    eta = rj.h / 196
    core = core_interval(parts[73].lo, eta, A0)
    assert core.length == (1 - A0) * eta
    assert parts[73].contains_interval(core)
    with pytest.raises(ParameterError):
        label_intervals(rj, 0)


# 求值

@pytest.mark.parametrize("point, value", [
    ((Fraction(0), Fraction(1, 3)), Fraction(0)),
    ((Fraction(1, 2), Fraction(0)), Fraction(1, 2)),
    ((Fraction(1), Fraction(1, 5)), Fraction(1)),
    ((Fraction(1, 4), Fraction(1, 3)), Fraction(1, 4)),
    ((Fraction(1, 128), Fraction(1, 2)), Fraction(1, 128)),
])
def test_exact_values(fmd, point, value):
    result = fmd.evaluate(point, eps=Fraction(1, 10 ** 6))
    assert result.lo == result.hi == value
    assert not result.partial


def test_exact_value_regions(fmd):
    root = root_cuboid(2)
    assert fmd.cell_eval(root, (Fraction(0), Fraction(1, 3))).region == "boundary"
    assert fmd.cell_eval(root, (Fraction(1, 4), Fraction(1, 3))).region == "whitney_boundary"
    # 截断深度之下的立方体的角点
    assert fmd.cell_eval(root, (Fraction(1, 128), Fraction(1, 2))).region == "whitney_boundary"
    deep = fmd.cell_eval(root, (Fraction(3, 1024), Fraction(1, 3)))
    assert deep.region != "residual"
    assert deep.lo <= deep.hi


def test_core_child(fmd):
    root, wc = first_whitney_cube(fmd)
    grid = fmd.grid(root, wc.cube)
    labeled = grid.cube((3, 5))
    result = fmd.cell_eval(root, labeled.center)
    assert result.region == "core"
    child = result.child
    assert isinstance(child, CuboidNode)
    assert child.generation == 1 and child.role == "core"
    assert child.base == labeled.concentric(1 - A0)
    rj = child_cuboid(root, wc.cube)
    eta = rj.h / grid.N
    assert child.box.height == core_interval(rj.z0 + 73 * eta, eta, A0)
    assert child.alpha == fmd.params.seq.aspect_bound(1)


def test_strip_value_is_continuous_at_labeled_face(fmd):
    root, wc = first_whitney_cube(fmd)
    grid = fmd.grid(root, wc.cube)
    labeled = grid.cube((3, 5))
    face_point = (labeled.corner[0], labeled.center[1])
    from_strip = (labeled.corner[0] - grid.gap / 4, labeled.center[1])
    on_face = fmd.cell_eval(root, face_point)
    assert on_face.region == "outer_ramp"
    assert fmd.cell_eval(root, from_strip).region == "strip"
    rj = child_cuboid(root, wc.cube)
    eta = rj.h / grid.N
    # 外斜坡在立方体面上等于标签平面
    assert on_face.lo == rj.z0 + 73 * eta


def test_evaluate_bad_input(fmd):
    with pytest.raises(DomainError):
        fmd.evaluate((Fraction(3, 2), Fraction(0)), eps=Fraction(1, 8))
    with pytest.raises(DimensionError):
        fmd.evaluate((Fraction(1, 2),), eps=Fraction(1, 8))
    with pytest.raises(ParameterError):
        fmd.evaluate((Fraction(1, 2), Fraction(1, 2)), eps=0)


def test_evaluate_accepts_text_point(fmd):
    result = fmd.evaluate("0,1/3", eps=Fraction(1, 100))
    assert result.lo == result.hi == 0


def test_depth_cap_gives_partial():
    f = MdFunction(MdParams.from_config({"depth_cap": 1}))
    cert_f = MdFunction()
    _, cert = cert_f.find_level_point(Fraction(1, 3), 3)
    result = f.evaluate(cert.point, eps=Fraction(1, 2 ** 60))
    assert result.partial
    assert result.cause == "depth_cap"
    assert result.lo <= Fraction(1, 3) <= result.hi


def _nested_brackets(fmd, points):
    for x in points:
        previous = None
        for k in range(1, 12, 2):
            eps = Fraction(1, 2 ** k)
            result = fmd.evaluate(x, eps)
            assert result.partial or result.width <= eps
            if previous is not None:
                assert previous.lo <= result.lo and result.hi <= previous.hi
            previous = result


def test_nested_brackets_small(fmd, rational):
    _nested_brackets(fmd, rational(30, n_dim=2))


@pytest.mark.slow
def test_nested_brackets(fmd, rational):
    _nested_brackets(fmd, rational(1000, n_dim=2, seed=0.25))


def test_range_bracket_soundness(fmd, rational):
    eps = Fraction(1, 2 ** 12)
    for x in rational(20, n_dim=2, seed=0.75):
        side = Fraction(1, 500)
        region = Cube(x, side)
        bracket = fmd.range_bracket(region, eps)
        for vertex in list(region.vertices()) + [region.center]:
            if not fmd.domain.contains(vertex):
                continue
            value = fmd.evaluate(vertex, eps)
            assert bracket.intersects(Interval(value.lo, value.hi))


def test_range_bracket_inside_core(fmd):
    root, wc = first_whitney_cube(fmd)
    grid = fmd.grid(root, wc.cube)
    core = grid.cube((3, 5)).concentric(Fraction(1, 2))
    bracket = fmd.range_bracket(core, Fraction(1, 2 ** 20))
    rj = child_cuboid(root, wc.cube)
    eta = rj.h / grid.N
    assert Interval(rj.z0 + 73 * eta, rj.z0 + 74 * eta).contains_interval(bracket)


def test_range_bracket_outside_domain(fmd):
    with pytest.raises(DomainError):
        fmd.range_bracket(Cube((Fraction(2), Fraction(2)), Fraction(1, 4)), Fraction(1, 8))


# 水平集的点

@pytest.mark.parametrize("z", [Fraction(1, 3), Fraction(2, 5), Fraction(2, 3)])
def test_find_level_point(fmd, z):
    base, cert = fmd.find_level_point(z, 5)
    assert cert.depth == 5
    assert cert.ok
    assert cert.verified == [True] * 5
    assert base == cert.nodes[-1].base
    for outer, inner in zip(cert.nodes, cert.nodes[1:]):
        assert outer.base.contains_cube(inner.base)
        assert outer.box.height.contains_interval(inner.box.height)
        assert inner.box.height.contains(z)
    for node in cert.nodes:
        assert node.alpha == fmd.params.seq.aspect_bound(node.generation)
        assert node.alpha <= fmd.params.seq.limit_aspect_bound()
    result = fmd.evaluate(cert.point, eps=cert.nodes[-1].h)
    assert result.lo <= z <= result.hi
    assert all(cert.label_gap(n) > 0 for n in range(cert.depth))


def test_certificate_dict(fmd):
    _, cert = fmd.find_level_point(Fraction(1, 3), 3)
    payload = cert.to_dict()
    assert payload["level"] == "1/3"
    assert len(payload["chain"]) == 4
    assert len(payload["radii_sq"]) == 3
    assert payload["verified"] == [True, True, True]
    assert payload["flags"] == []


def _assert_full_chain(fmd, z, depth):
    _, cert = fmd.find_level_point(z, depth)
    assert cert.ok, cert.notes
    assert cert.depth == depth
    assert not {"exceptional", "truncated", "ambiguous"} & set(cert.flags)
    result = fmd.evaluate(cert.point, eps=cert.nodes[-1].h)
    assert result.lo <= z <= result.hi
    return cert


@pytest.mark.parametrize("z, depth", [
    (Fraction(1, 100), 3),
    (Fraction(99, 100), 3),
    (Fraction(1, 40), 3),
    (Fraction(50, 1009), 5),
    (Fraction(420, 1009), 5),
    (Fraction(457, 1009), 5),
    (Fraction(642, 1009), 5),
])
def test_levels_below_enumeration_depth(fmd, z, depth):
    # 这些水平在某一代只被边长小于 l(C)·2^-whitney_depth 的立方体命中
    _assert_full_chain(fmd, z, depth)


def test_random_levels_reach_full_depth(fmd):
    for k in range(17, 1009, 33):
        _assert_full_chain(fmd, Fraction(k, 1009), 5)


def test_level_near_face_needs_deep_cubes(fmd):
    z = Fraction(1, 1000)
    # 包含 x_1 = 1/1000 且满足 Whitney 条件的立方体至少在第 11 层
    _assert_full_chain(fmd, z, 1)
    shallow = MdFunction(MdParams(search_levels=1))
    _, cert = shallow.find_level_point(z, 1)
    assert "truncated" in cert.flags
    assert "exceptional" not in cert.flags
    assert not cert.ok
    assert cert.depth == 0


@pytest.mark.slow
def test_aspect_along_random_chains(fmd, rational):
    limit = fmd.params.seq.limit_aspect_bound()
    for z in rational(20, denominator=1009, seed=0.2):
        cert = _assert_full_chain(fmd, z, 8)
        for node in cert.nodes:
            assert node.alpha == fmd.params.seq.aspect_bound(node.generation)
            assert node.alpha <= limit


@pytest.mark.parametrize("z", [Fraction(1, 3), Fraction(2, 3), Fraction(457, 1009)])
def test_oscillation_at_certificate_point(fmd, z):
    cstar = certified_vertex_constant(fmd.params)
    _, cert = fmd.find_level_point(z, 4)
    deepest = cert.nodes[-1]
    # 球留在最深的核心长方体的底面内, 取值在它的高度区间里
    r = deepest.base.side / 4
    estimate = oscillation(fmd, cert.point, r, budget=8, cover_cells=4)
    assert estimate.sampled <= estimate.certified
    assert estimate.certified <= deepest.h
    assert estimate.certified / r <= 4 * deepest.alpha <= 3 * cstar


@pytest.mark.parametrize("z", [Fraction(0), Fraction(1, 2), Fraction(1)])
def test_exceptional_levels(fmd, z):
    _, cert = fmd.find_level_point(z, 5)
    assert "exceptional" in cert.flags
    assert not cert.ok
    assert cert.notes


def test_find_level_point_bad_input(fmd):
    with pytest.raises(DomainError):
        fmd.find_level_point(Fraction(3, 2), 3)
    with pytest.raises(ParameterError):
        fmd.find_level_point(Fraction(1, 3), 0)


def test_plateau_patch(fmd):
    root, wc = first_whitney_cube(fmd)
    grid = fmd.grid(root, wc.cube)
    labeled = grid.cube((3, 5))
    rj = child_cuboid(root, wc.cube)
    eta = rj.h / grid.N
    w = rj.z0 + grid.label((3, 5)) * eta
    c = labeled.side
    band = A0 * c / 6
    window = Cube((labeled.corner[0] + Fraction(2, 5) * c, labeled.corner[1] + band), band)
    points = fmd.level_set_sample(w, 12, 0, window=window)
    assert len(points) == 144
    for x in points[::11]:
        result = fmd.evaluate(x, Fraction(1, 2 ** 20))
        assert result.lo == result.hi == w


def test_level_set_sample_bad_input(fmd):
    with pytest.raises(ParameterError):
        fmd.level_set_sample(Fraction(1, 3), 1, 0)
    with pytest.raises(ParameterError):
        fmd.level_set_sample(Fraction(1, 3), 4, Fraction(-1))


def test_level_set_sample_on_boundary_level(fmd):
    # 全局网格上 x_1 = 0 的一列都在边界上, 值为 0
    points = fmd.level_set_sample(0, 5, 0)
    assert {x for x in points if x[0] == 0} == {(Fraction(0), Fraction(i, 4)) for i in range(5)}
