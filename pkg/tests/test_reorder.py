import random
from fractions import Fraction

import pytest

from arcgallai import pathsolver
from arcgallai.chains import Chain, cover_trace, support, validate_chain
from arcgallai.errors import PreconditionViolated, SwapIllegal
from arcgallai.family import ArcFamily, build_graph, minimal_cover, parse_instance
from arcgallai.geometry import Arc, Circle, region_subtract, sweep_point
from arcgallai.reorder import (
    PointAssignment,
    assign_points,
    assign_points_unanchored,
    can_swap,
    canonicalize,
    check_properties,
    keil_reorder,
    phase1_sets,
    swap,
    validate_assignment,
)
from instance_gen import proper_trace_instance, random_valid_chain
from oracle_utils import oracle_keil_match

F = Fraction

# transcription of the four-interval swap picture onto 20 ticks, plus the
# middle arc (0,7) that carries the points between the swapped pair
FIGURE_TEXT = """\
circle 20
arc 1 4
arc 2 8
arc 0 7
arc 3 10
arc 5 11
"""
FIGURE_POINTS = (F(5, 2), F(7, 2), F(9, 2), F(13, 2), F(15, 2), F(17, 2))


@pytest.fixture
def figure():
    family, _ = parse_instance(FIGURE_TEXT)
    chain = validate_chain((0, 1, 2, 3, 4), family)
    pa = PointAssignment(FIGURE_POINTS, F(14))
    validate_assignment(chain, family, pa)
    return family, chain, pa


def test_figure_can_swap(figure):
    family, chain, pa = figure
    assert can_swap(chain, family, pa, 2, 4)
    # the earlier pair fails: [x1, x2] leaves (1,4) n (3,10) = (3,4)
    assert not can_swap(chain, family, pa, 1, 4)
    with pytest.raises(ValueError):
        can_swap(chain, family, pa, 4, 2)
    with pytest.raises(ValueError):
        can_swap(chain, family, pa, 3, 3)


def test_figure_swap_and_involution(figure):
    family, chain, pa = figure
    swapped = swap(chain, family, pa, 2, 4)
    assert swapped.arcs == (0, 3, 2, 1, 4)
    assert swap(swapped, family, pa, 2, 4) == chain
    with pytest.raises(SwapIllegal):
        swap(chain, family, pa, 1, 4)


def test_figure_keil_reorder_reversed_input(figure):
    family, chain, pa = figure
    reversed_chain = Chain(tuple(reversed(chain.arcs)))
    reversed_pa = PointAssignment(tuple(reversed(pa.points)), pa.cut)
    validate_assignment(reversed_chain, family, reversed_pa)
    out, out_pa = keil_reorder(reversed_chain, family, reversed_pa)
    assert out_pa.points == FIGURE_POINTS
    assert out.arcs == (0, 2, 1, 3, 4)
    assert sorted(out.arcs) == sorted(chain.arcs)
    for k in range(out.t):
        arc = family.arcs[out.arcs[k]]
        assert arc.contains(out_pa.points[k]) and arc.contains(out_pa.points[k + 1])


def test_keil_identity_on_sorted(figure):
    family, chain, pa = figure
    out, out_pa = keil_reorder(chain, family, pa)
    assert out_pa.points == pa.points
    for k in range(out.t):
        arc = family.arcs[out.arcs[k]]
        assert arc.contains(out_pa.points[k]) and arc.contains(out_pa.points[k + 1])


def test_assign_points_rejects_full_trace(fam3):
    cover = minimal_cover(fam3)
    chain = validate_chain((0, 1, 2), fam3)
    with pytest.raises(PreconditionViolated):
        assign_points(chain, fam3, cover, cover_trace(chain, cover))


def test_assign_points_ghost_scenario(fam4):
    # chain (0,3,1) misses cover arc 2; both boundary arcs equal K_2
    cover = minimal_cover(fam4)
    chain = validate_chain((0, 3, 1), fam4)
    trace = cover_trace(chain, cover)
    assert (trace.a, trace.b) == (2, 2)
    pa = assign_points(chain, fam4, cover, trace)
    assert pa.points == (F(3, 2), F(7, 2), F(9, 2), F(11, 2))
    assert pa.cut == F(21, 2)
    forbidden = cover.arc(2)
    assert all(not forbidden.contains(x) for x in pa.points)


def test_assign_points_t1():
    family, _ = parse_instance("circle 12\narc 0 7\narc 6 1\n")
    cover = minimal_cover(family)
    chain = validate_chain((0,), family)
    trace = cover_trace(chain, cover)
    assert trace.proper and (trace.a, trace.b) == (1, 1)
    pa = assign_points(chain, family, cover, trace)
    assert pa.points == (F(3, 2), F(5, 2))
    assert pa.cut == F(19, 2)


def test_phase1_sets_empty_on_broom(broom):
    cover = minimal_cover(broom)
    chain = validate_chain((3, 4, 0, 5, 6), broom)
    trace = cover_trace(chain, cover)
    pa = assign_points(chain, broom, cover, trace)
    state = phase1_sets(chain, broom, pa, cover, trace.a, trace.b)
    assert state.L == frozenset() and state.R == frozenset() and state.f == 0


def test_phase1_sets_successor_violator():
    family, _ = parse_instance(
        "circle 40\narc 0 15\narc 14 27\narc 26 1\narc 2 5\narc 4 7\n"
        "arc 8 11\narc 10 13\narc 38 3\n"
    )
    cover = minimal_cover(family)
    assert cover.indices == (0, 1, 2)
    chain = validate_chain((3, 0, 7), family)
    trace = cover_trace(chain, cover)
    pa = assign_points(chain, family, cover, trace)
    state = phase1_sets(chain, family, pa, cover, trace.a, trace.b)
    assert state.gamma == 2
    assert state.L == frozenset({3}) and state.R == frozenset()
    assert state.f == 1


def test_phase1_sets_n2_disconnect_violator():
    family, _ = parse_instance("circle 12\narc 0 7\narc 6 1\narc 5 9\n")
    cover = minimal_cover(family)
    assert cover.n == 2
    chain = validate_chain((2, 0), family)
    trace = cover_trace(chain, cover)
    pa = assign_points(chain, family, cover, trace)
    state = phase1_sets(chain, family, pa, cover, trace.a, trace.b)
    assert state.gamma == 2
    assert state.R == frozenset({1}) and state.L == frozenset()


def test_check_properties_single_pivot_vacuous(drill):
    family, idx = drill
    cover = minimal_cover(family)
    chain = validate_chain((idx["A"], idx["K0"]), family)
    report = check_properties(chain, family, cover, 2, 1)
    assert report.flags == {k: True for k in "abcde"}


def test_check_properties_b_violation_with_witness(drill):
    family, idx = drill
    cover = minimal_cover(family)
    chain = validate_chain((idx["B"], idx["K0"]), family)
    report = check_properties(chain, family, cover, 2, 1)
    assert not report.flags["b"]
    assert report.witnesses["b"] == (idx["B"], 1)


# --- swap-engine drills on the straddler family ---------------------------


def test_drill_claim3(drill):
    family, idx = drill
    cover = minimal_cover(family)
    chain = validate_chain((idx["A"], idx["K0"]), family)
    trace = cover_trace(chain, cover)
    assert trace.proper and (trace.a, trace.b) == (2, 1)
    out, report = canonicalize(chain, family, cover, trace, keil_preference="latest")
    assert [s.rule for s in report.steps] == ["claim3"]
    assert report.steps[0].f_before == 1 and report.steps[0].f_after == 0
    assert report.all_ok and sorted(out.arcs) == sorted(chain.arcs)


def test_drill_claim3_then_claim2(drill):
    family, idx = drill
    cover = minimal_cover(family)
    chain = validate_chain((idx["K0"], idx["B"], idx["A"]), family)
    trace = cover_trace(chain, cover)
    out, report = canonicalize(chain, family, cover, trace, keil_preference="latest")
    assert [s.rule for s in report.steps] == ["claim3", "claim2"]
    fs = [(s.f_before, s.f_after) for s in report.steps]
    assert fs == [(2, 1), (1, 0)]
    assert report.all_ok
    assert out.arcs == (idx["A"], idx["K0"], idx["B"])


def test_drill_claim1_pairing(drill):
    family, idx = drill
    cover = minimal_cover(family)
    chain = validate_chain((idx["A"], idx["B"], idx["K0"], idx["A2"]), family)
    pa = PointAssignment((F(5, 2), F(7, 2), F(9, 2), F(11, 2), F(23, 4)), F(21))
    validate_assignment(chain, family, pa)
    state = phase1_sets(chain, family, pa, cover, 2, 1)
    assert state.gamma == 3 and state.L == {4} and state.R == {2} and state.f == 2
    p, q = min(state.R), max(state.L)
    assert can_swap(chain, family, pa, p, q)
    swapped = swap(chain, family, pa, p, q)
    after = phase1_sets(swapped, family, pa, cover, 2, 1)
    # the pairing swap removes exactly q from L and p from R
    assert after.L == state.L - {q}
    assert after.R == state.R - {p}
    assert after.f <= state.f


def test_drill_same_outcome_under_all_preferences(drill):
    family, idx = drill
    cover = minimal_cover(family)
    for seq in ((idx["A"], idx["K0"]), (idx["K0"], idx["B"], idx["A"])):
        chain = validate_chain(seq, family)
        trace = cover_trace(chain, cover)
        for pref in ("earliest", "latest", "defer-cover"):
            out, report = canonicalize(chain, family, cover, trace, keil_preference=pref)
            assert report.all_ok, (seq, pref, report.flags, report.aborted)
            assert sorted(out.arcs) == sorted(seq)


# --- randomized properties -------------------------------------------------


@pytest.fixture(scope="module")
def proper_pool():
    return [proper_trace_instance(s) for s in range(40)]


def _dense_family(rng):
    from arcgallai.errors import GenerationExhausted
    from arcgallai.family import generate

    while True:
        m = rng.randint(4, 8)
        try:
            return generate(
                m, 2 * m, seed=rng.getrandbits(30), require_connected=True, max_attempts=50
            )
        except GenerationExhausted:
            continue


def _anchored_assignment(family, chain):
    outside = region_subtract(Arc.full(family.circle).region(), support(chain, family))
    if outside.is_empty:
        return None
    pa = assign_points_unanchored(chain, family)
    return PointAssignment(pa.points, sweep_point(outside))


def test_keil_matches_exhaustive_oracle(proper_pool):
    rng = random.Random(12)
    checked = 0
    while checked < 80:
        fam, _ = proper_pool[rng.randrange(len(proper_pool))]
        graph = build_graph(fam)
        chain = random_valid_chain(rng, fam, graph, max_len=7)
        pa = _anchored_assignment(fam, chain)
        if pa is None:
            continue
        pts = tuple(sorted(pa.points, key=lambda p: fam.circle.offset(pa.cut, p)))
        circle = fam.circle
        far = Fraction(circle.ticks + 1)

        def key(j):
            arc = fam.arcs[chain.arcs[j]]
            held = [k for k in range(len(pts)) if arc.contains(pts[k])]
            reach = max(held) if held else -1
            tail = far if arc.is_full else circle.offset(pa.cut, arc.right)
            return (reach, tail, j + 1)

        expected = oracle_keil_match(chain, fam, pts, key)
        if expected is None:
            # arbitrary chains need not satisfy the reorder hypothesis at all
            with pytest.raises(Exception):
                keil_reorder(chain, fam, pa)
            continue
        out, out_pa = keil_reorder(chain, fam, pa)
        assert out_pa.points == pts
        assert out.arcs == expected
        for k in range(out.t):
            arc = fam.arcs[out.arcs[k]]
            assert arc.contains(pts[k]) and arc.contains(pts[k + 1])
        checked += 1


def test_swap_probes_preserve_validity():
    rng = random.Random(77)
    probes = 0
    while probes < 400:
        fam = _dense_family(rng)
        graph = build_graph(fam)
        chain = random_valid_chain(rng, fam, graph)
        if chain.t < 2:
            continue
        pa = assign_points_unanchored(chain, fam)
        for p in range(1, chain.t):
            for q in range(p + 1, chain.t + 1):
                if can_swap(chain, fam, pa, p, q):
                    out = swap(chain, fam, pa, p, q)
                    assert out.t == chain.t
                    assert sorted(out.arcs) == sorted(chain.arcs)
                    assert swap(out, fam, pa, p, q) == chain
                    probes += 1


def test_canonicalize_randomized_all_flags(proper_pool):
    for s, (fam, _) in enumerate(proper_pool):
        graph = build_graph(fam)
        cover = minimal_cover(fam)
        traced = pathsolver.enumerate_with_traces(graph, cover)
        selected, trace = pathsolver.select_min_cover_longest(traced.result, cover)
        assert trace.proper
        for pref in ("earliest", "latest", "defer-cover"):
            out, report = canonicalize(
                selected, fam, cover, trace, keil_preference=pref, compare_phase2=True
            )
            assert report.all_ok, (s, pref, report.flags, report.aborted)
            assert sorted(out.arcs) == sorted(selected.arcs)
            assert out.t == selected.t
            assert report.phase2_divergence in (None, ())
