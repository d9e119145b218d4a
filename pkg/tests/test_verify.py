import io
import random

import pytest

from arcgallai import chains, pathsolver, reorder
from arcgallai.errors import PreconditionViolated
from arcgallai.family import (
    ArcFamily,
    build_graph,
    format_instance,
    minimal_cover,
    parse_instance,
)
from arcgallai.geometry import Arc, Circle
from arcgallai.verify import (
    Failure,
    build_surgery,
    hunt,
    verify_instance,
)

BROOM_BRIDGE_TEXT = """\
circle 40
arc 0 15
arc 14 27
arc 26 1
arc 2 5
arc 4 7
arc 8 11
arc 10 13
arc 12 16
"""


def test_verify_fam3_full_trace(fam3):
    report = verify_instance(fam3)
    assert report.branch == "full-trace"
    assert report.gallai_ok and report.lemma1_ok and report.membership_ok and report.kb1_ok
    assert report.lemma3_ok is None
    assert report.common_vertices == frozenset({0, 1, 2})
    assert report.trace_size == 3 and report.n == 3
    assert report.ok


def test_verify_interval_branch(p3):
    report = verify_instance(p3)
    assert report.branch == "interval"
    assert report.covering is False
    assert report.gallai_ok
    assert report.lemma1_ok is None and report.lemma3_ok is None
    assert report.ok


def test_verify_disconnected_is_skipped():
    c = Circle(12)
    fam = ArcFamily(c, (Arc.proper(c, 0, 2), Arc.proper(c, 5, 7)))
    report = verify_instance(fam)
    assert report.skipped and report.branch == "disconnected"
    assert report.gallai_ok is None
    assert report.ok


def test_verify_cover1_branch():
    c = Circle(12)
    fam = ArcFamily(c, (Arc.full(c), Arc.proper(c, 0, 5)))
    report = verify_instance(fam)
    assert report.branch == "cover1"
    assert report.n == 1
    assert report.kb1_ok and report.gallai_ok
    assert report.witness_cover_pos == 0


def test_verify_broom_proper_trace(fam3, broom):
    report = verify_instance(broom, paranoid=True)
    assert report.branch == "proper-trace"
    assert report.trace_size == 1
    assert report.witness_cover_pos == 0
    assert report.gallai_ok and report.lemma1_ok and report.membership_ok
    assert report.lemma3_ok and report.kb1_ok
    assert report.common_vertices == frozenset({0})
    assert report.ok


def test_report_formats(broom):
    report = verify_instance(broom)
    machine = report.to_machine_lines()
    assert "branch=proper-trace" in machine
    assert "kb1_ok=true" in machine
    assert any(line.startswith("common_vertices=") for line in machine)
    text = "\n".join(report.to_text_lines())
    assert "gallai: ok" in text


# --- surgery ----------------------------------------------------------------


def _canonical_pair(family, seq):
    cover = minimal_cover(family)
    chain = chains.validate_chain(seq, family)
    trace = chains.cover_trace(chain, cover)
    star, report = reorder.canonicalize(chain, family, cover, trace)
    assert report.all_ok
    return cover, star, trace


def test_surgery_empty_connector(broom):
    cover, p_star, trace_p = _canonical_pair(broom, (3, 4, 0, 5, 6))
    q = chains.validate_chain((1, 2), broom)
    trace_q = chains.cover_trace(q, cover)
    res = build_surgery(p_star, q, cover, trace_p, trace_q, broom)
    assert res.c1_is_chain and res.c2_is_chain
    assert res.len_c1 == 4 and res.len_c2 == 5
    assert res.slack == 0
    # the contradiction engine: had Q been longest, one of C1/C2 would beat it
    longest = pathsolver.longest_path_length(build_graph(broom))
    assert q.t < longest  # the forced Q is not longest, so no contradiction arises
    assert max(res.len_c1, res.len_c2) >= longest


def test_surgery_nonempty_connector(broom):
    cover, p_star, trace_p = _canonical_pair(broom, (3, 4, 0, 5, 6))
    q = chains.validate_chain((2,), broom)
    trace_q = chains.cover_trace(q, cover)
    res = build_surgery(p_star, q, cover, trace_p, trace_q, broom)
    assert res.c1 == (3, 4, 0, 1, 2)
    assert res.c2 == (6, 5, 0, 1, 2)
    assert res.c1_is_chain and res.c2_is_chain
    assert res.slack == 2


def test_surgery_duplicate_arc_flagged():
    family, _ = parse_instance(BROOM_BRIDGE_TEXT)
    cover = minimal_cover(family)
    p = chains.validate_chain((7, 0, 3, 4), family)
    q = chains.validate_chain((7, 1, 2), family)
    res = build_surgery(
        p, q, cover, chains.cover_trace(p, cover), chains.cover_trace(q, cover), family
    )
    assert res.c1 == (7, 0, 1, 7)
    assert not res.c1_is_chain and "duplicate" in res.c1_error
    assert res.c2 == (4, 3, 0, 1, 2) and res.c2_is_chain


def test_surgery_preconditions(broom):
    cover, p_star, trace_p = _canonical_pair(broom, (3, 4, 0, 5, 6))
    q_with_kb1 = chains.validate_chain((1, 0), broom)
    with pytest.raises(PreconditionViolated):
        build_surgery(
            p_star, q_with_kb1, cover, trace_p, chains.cover_trace(q_with_kb1, cover), broom
        )
    # full-trace Q is not admissible either
    q_full = chains.validate_chain((0, 1, 2), broom)
    with pytest.raises(PreconditionViolated):
        build_surgery(
            p_star, q_full, cover, trace_p, chains.cover_trace(q_full, cover), broom
        )


def test_surgery_never_contradicts_on_valid_instances():
    # for every verified instance the proof's bad configuration must be
    # unsatisfiable: no longest Q missing K_{b-1} exists at all
    rng = random.Random(2)
    for s in range(20):
        from instance_gen import proper_trace_instance

        fam, _ = proper_trace_instance(s)
        graph = build_graph(fam)
        cover = minimal_cover(fam)
        traced = pathsolver.enumerate_with_traces(graph, cover)
        selected, trace = pathsolver.select_min_cover_longest(traced.result, cover)
        kb1 = cover.indices[(trace.b - 1) % cover.n]
        assert all(kb1 in path for path in traced.result.paths)


# --- hunt -------------------------------------------------------------------


def test_hunt_smoke_and_determinism(tmp_path):
    a = hunt(trials=40, max_m=7, seed=11, out_dir=str(tmp_path / "a"))
    b = hunt(trials=40, max_m=7, seed=11, out_dir=str(tmp_path / "b"))
    assert a.to_machine_lines() == b.to_machine_lines()
    assert a.failures == 0
    assert sum(a.flag_pass.values()) > 0
    assert not list((tmp_path / "a").iterdir())


def test_hunt_zero_trials():
    summary = hunt(trials=0, seed=3)
    assert summary.failures == 0
    assert summary.to_machine_lines()[0] == "trials=0"


def test_hunt_mixed_instances_counts():
    summary = hunt(trials=60, max_m=6, seed=5, require_cover=False)
    assert sum(summary.counts.values()) == 60
    assert summary.counts.get("full-trace", 0) + summary.counts.get("interval", 0) > 0


# --- mutation: a broken build must surface as report data, not a crash ------


def test_mutation_lemma3_failure_is_captured(broom, monkeypatch):
    real = reorder._phase_sets

    def confused(chain, family, cover, pivot_slot, mode):
        state = real(chain, family, cover, pivot_slot, mode)
        if mode == "phase1" and state.gamma < chain.t:
            return reorder.PhaseState(
                state.gamma, state.L | {chain.t}, state.R, max(state.f, chain.t - state.gamma)
            )
        return state

    monkeypatch.setattr(reorder, "_phase_sets", confused)
    report = verify_instance(broom)
    assert report.lemma3_ok is False
    assert any(f.flag == "lemma3_ok" for f in report.failures)
    assert not report.ok


def test_mutation_hunt_writes_replayable_payloads(tmp_path, monkeypatch):
    monkeypatch.setattr(
        "arcgallai.chains.membership_violations", lambda chain, family: [(0, True)]
    )
    out = tmp_path / "payloads"
    summary = hunt(trials=25, max_m=6, seed=9, out_dir=str(out))
    assert summary.failures > 0
    files = sorted(out.iterdir())
    assert files and summary.payload_files == tuple(f.name for f in files)
    # payloads parse and replay deterministically
    family, _ = parse_instance(files[0].read_text())
    monkeypatch.undo()
    replayed = verify_instance(family)
    assert replayed.membership_ok  # the failure was the mutation, not the instance
    again = hunt(trials=25, max_m=6, seed=9)
    assert again.failures == 0
