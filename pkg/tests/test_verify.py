import pytest
from hypothesis import given, settings, strategies as st

from crossfractal.errors import DimensionMismatch
from crossfractal.fractal import build_xinf_box, build_xk, build_xplus_box
from crossfractal.gf2 import neighbor_parity_series
from crossfractal.lattice import Box, PointSet
from crossfractal.verify import (
    Predicate,
    cross_violations,
    harmonic2_violations,
    harmonic_violations,
    supportive_violations,
    violations,
)

from oracles import predicate_witnesses

KINDS = [p.value for p in Predicate]


def small_sets(d, max_size=60, span=6):
    return st.sets(st.tuples(*[st.integers(-span, span)] * d), max_size=max_size)


def test_harmonic_examples():
    assert harmonic_violations(build_xk(2, 3).points, Box.cube(2, 32)).witnesses == PointSet(
        [(8, 0), (-8, 0), (0, 8), (0, -8)]
    )
    assert harmonic_violations(build_xinf_box(2, 64), Box.cube(2, 32)).ok
    single = harmonic_violations(PointSet([(0, 0)]), Box.cube(2, 3))
    assert set(single.witnesses) == {(1, 0), (-1, 0), (0, 1), (0, -1)}


def test_cross_examples():
    assert cross_violations(build_xplus_box(2, 32), Box.cube(2, 16)).ok
    assert not cross_violations(build_xinf_box(2, 32), Box.cube(2, 16)).ok
    w = cross_violations(PointSet([(0, 0)]), Box.cube(2, 3)).witnesses
    assert set(w) == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}


def test_supportive_examples():
    assert supportive_violations(build_xinf_box(2, 32), Box.cube(2, 16)).ok
    # a lone point is its own cross' only hit, which is allowed for supportiveness
    w = supportive_violations(PointSet([(1, 0)]), Box.cube(2, 3)).witnesses
    assert (0, 0) in w and (1, 0) not in w
    assert set(w) == {(0, 0), (2, 0), (1, 1), (1, -1)}


def test_harmonic2_examples():
    assert harmonic2_violations(build_xinf_box(2, 32), Box.cube(2, 16)).ok
    # witnesses need their whole step-2 cross inside the region, hence radius 4
    w = harmonic2_violations(PointSet([(0, 0)]), Box.cube(2, 4)).witnesses
    assert set(w) == {(2, 0), (-2, 0), (0, 2), (0, -2)}
    assert harmonic2_violations(PointSet([(0, 0)]), Box.cube(2, 3)).ok


def test_empty_set_has_no_witnesses():
    for kind in KINDS:
        assert violations(PointSet.empty(2), Box.cube(2, 5), kind).ok


def test_errors():
    with pytest.raises(DimensionMismatch):
        harmonic_violations(PointSet([(0,)]), Box.cube(2, 3))
    with pytest.raises(ValueError):
        harmonic2_violations(PointSet([(0,)]), Box.cube(1, 1))
    with pytest.raises(ValueError):
        violations(PointSet([(0,)]), Box.cube(1, 3), "harmonic", strategy="nope")
    with pytest.raises(ValueError):
        violations(PointSet([(0,)]), Box.cube(1, 3), "bogus")


@settings(max_examples=60)
@given(
    st.integers(1, 3).flatmap(lambda d: st.tuples(st.just(d), small_sets(d))),
    st.sampled_from(KINDS),
    st.integers(2, 6),
)
def test_strategies_agree_with_oracle(args, kind, radius):
    d, s = args
    if d == 3:
        radius = min(radius, 4)
    x = PointSet(s, d)
    region = Box.cube(d, radius)
    dense = violations(x, region, kind, "dense")
    sparse = violations(x, region, kind, "sparse")
    assert dense.witnesses == sparse.witnesses
    assert list(dense.witnesses) == predicate_witnesses(s, (0,) * d, radius, kind)


@given(small_sets(2, max_size=40), st.tuples(st.integers(-50, 50), st.integers(-50, 50)), st.sampled_from(KINDS))
def test_translation_equivariance(s, t, kind):
    x = PointSet(s, 2)
    base = violations(x, Box.cube(2, 5), kind).witnesses
    moved = violations(x.translate(t), Box(t, 5), kind).witnesses
    assert moved == base.translate(t)


@given(small_sets(2, max_size=50))
def test_harmonic_matches_parity_series(s):
    x = PointSet(s, 2)
    region = Box.cube(2, 6)
    series = neighbor_parity_series(x).support
    assert harmonic_violations(x, region).witnesses == series.clip(region.interior())


@given(small_sets(2, max_size=50))
def test_cross_clean_implies_supportive_clean(s):
    x = PointSet(s, 2)
    region = Box.cube(2, 6)
    cross = set(cross_violations(x, region).witnesses)
    assert set(supportive_violations(x, region).witnesses) <= cross


@given(small_sets(2, max_size=50, span=3))
def test_harmonic_on_larger_box_implies_harmonic2(s):
    # the dilated set 2X is harmonic2-clean wherever X is harmonic-clean
    x = PointSet(s, 2)
    r = 4
    if harmonic_violations(x, Box.cube(2, r + 1)).ok:
        dil = PointSet([(2 * a, 2 * b) for a, b in s], 2)
        assert harmonic2_violations(dil, Box.cube(2, 2 * r + 2)).ok


@pytest.mark.parametrize("d", [1, 2, 3])
def test_xinf_harmonic_on_inner_boxes(d):
    r = 16 if d == 3 else 40
    x = build_xinf_box(d, 2 * r)
    assert harmonic_violations(x, Box.cube(d, r)).ok
    assert harmonic2_violations(x, Box.cube(d, r)).ok
    assert supportive_violations(x, Box.cube(d, r)).ok


@pytest.mark.parametrize("d", [2, 3])
def test_xplus_is_cross_set(d):
    r = 8 if d == 3 else 24
    assert cross_violations(build_xplus_box(d, 2 * r), Box.cube(d, r)).ok


def test_diagonal_set_is_supportive():
    diag = PointSet([(i, i) for i in range(-20, 21)] + [(i + 1, i) for i in range(-20, 21)])
    assert supportive_violations(diag, Box.cube(2, 10)).ok


def test_off_center_region():
    x = build_xinf_box(2, 64)
    assert harmonic_violations(x, Box((20, -13), 30)).ok


def test_report_serialization():
    rep = harmonic_violations(PointSet([(0, 0)]), Box.cube(2, 3))
    text = rep.serialize()
    lines = text.splitlines()
    assert lines[0] == "# predicate=harmonic region_center=0,0 region_radius=3 violations=4"
    assert lines[1:] == ["-1,0", "0,-1", "0,1", "1,0"]
    assert len(rep) == 4 and not rep.ok
