"""End-to-end verification pipeline, the two-chain surgery, and the hunt harness.

Property violations are data, never exceptions: `verify_instance` always
completes and returns a report whose false flags carry replayable
counterexample payloads.  `hunt` drives seeded random instances through the
pipeline and writes every failure to disk.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from . import chains as chains_mod
from . import pathsolver, reorder
from .errors import ArcGallaiError, InternalError, PreconditionViolated
from .family import (
    ArcFamily,
    Cover,
    build_graph,
    covers_circle,
    format_instance,
    generate,
    is_connected,
    minimal_cover,
)

__all__ = [
    "Failure",
    "VerificationReport",
    "SurgeryResult",
    "HuntSummary",
    "verify_instance",
    "build_surgery",
    "hunt",
]

FLAG_NAMES = ("gallai_ok", "lemma1_ok", "membership_ok", "lemma3_ok", "kb1_ok")


@dataclass(frozen=True)
class Failure:
    flag: str
    detail: str
    chain: tuple[int, ...] | None = None


@dataclass
class VerificationReport:
    m: int
    ticks: int
    connected: bool
    covering: bool | None = None
    n: int | None = None
    branch: str = ""
    skipped: str | None = None
    gallai_ok: bool | None = None
    lemma1_ok: bool | None = None
    membership_ok: bool | None = None
    lemma3_ok: bool | None = None
    kb1_ok: bool | None = None
    common_vertices: frozenset = frozenset()
    witness_cover_pos: int | None = None
    longest_length: int | None = None
    longest_count: int | None = None
    cap_exceeded: bool = False
    trace_size: int | None = None
    swap_steps: int = 0
    phase2_divergences: int = 0
    paranoid: bool = False
    failures: tuple[Failure, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def flag_values(self):
        return {name: getattr(self, name) for name in FLAG_NAMES}

    def to_machine_lines(self):
        def fmt(value):
            if value is None:
                return "none"
            if isinstance(value, bool):
                return "true" if value else "false"
            if isinstance(value, frozenset):
                return ",".join(str(v) for v in sorted(value)) or "-"
            return str(value)

        keys = (
            "m",
            "ticks",
            "connected",
            "covering",
            "n",
            "branch",
            "skipped",
            "longest_length",
            "longest_count",
            "cap_exceeded",
            "trace_size",
            "witness_cover_pos",
            "common_vertices",
            "gallai_ok",
            "lemma1_ok",
            "membership_ok",
            "lemma3_ok",
            "kb1_ok",
            "swap_steps",
            "failures",
        )
        values = {k: getattr(self, k) for k in keys if k != "failures"}
        lines = [f"{k}={fmt(values[k])}" for k in keys if k != "failures"]
        lines.append(f"failures={len(self.failures)}")
        for f in self.failures:
            lines.append(f"failure {f.flag} {f.detail}")
        return lines

    def to_text_lines(self):
        lines = [
            f"instance: m={self.m} ticks={self.ticks} connected={self.connected} "
            f"covering={self.covering} n={self.n} branch={self.branch}"
        ]
        if self.skipped:
            lines.append(f"skipped: {self.skipped}")
            return lines
        lines.append(
            f"longest paths: length={self.longest_length} count={self.longest_count}"
            + (" (list truncated)" if self.cap_exceeded else "")
        )
        lines.append(
            "common vertices: {"
            + ", ".join(str(v) for v in sorted(self.common_vertices))
            + "}"
        )
        for name in FLAG_NAMES:
            value = getattr(self, name)
            shown = "skipped" if value is None else ("ok" if value else "FAIL")
            lines.append(f"{name[:-3]}: {shown}")
        if self.witness_cover_pos is not None:
            lines.append(f"witness: every longest chain holds cover arc #{self.witness_cover_pos}")
        for f in self.failures:
            lines.append(f"FAILURE [{f.flag}] {f.detail}")
        return lines


def _mask_contiguous(mask: int, n: int) -> bool:
    if mask == 0 or mask == (1 << n) - 1:
        return True
    breaks = sum(1 for i in range(n) if mask >> i & 1 and not mask >> ((i + 1) % n) & 1)
    return breaks == 1


def _mask_bounds(mask: int, n: int):
    """(a, b) with members = {a+1, ..., b-1} mod n, for proper contiguous masks."""
    end = next(i for i in range(n) if mask >> i & 1 and not mask >> ((i + 1) % n) & 1)
    start = next(i for i in range(n) if mask >> i & 1 and not mask >> ((i - 1) % n) & 1)
    return (start - 1) % n, (end + 1) % n


def verify_instance(
    family: ArcFamily,
    *,
    paranoid: bool = False,
    bound: int = pathsolver.DEFAULT_BOUND,
    cap: int = pathsolver.DEFAULT_CAP,
) -> VerificationReport:
    """Run the whole pipeline on one instance and report every check."""
    report = VerificationReport(m=family.m, ticks=family.circle.ticks, connected=False, paranoid=paranoid)
    graph = build_graph(family)
    report.connected = is_connected(graph)
    if not report.connected:
        report.branch = "disconnected"
        report.skipped = "graph is disconnected; the property presupposes connectivity"
        return report

    failures: list[Failure] = []
    dp_length = pathsolver.longest_path_length(graph, bound=bound)
    report.covering = covers_circle(family)

    if not report.covering:
        report.branch = "interval"
        result = pathsolver.enumerate_longest(graph, cap=cap, bound=bound)
        _cross_check_lengths(dp_length, result.length)
        _fill_common(report, result, failures)
        report.failures = tuple(failures)
        return report

    cover = minimal_cover(family)
    report.n = cover.n

    if cover.n == 1:
        report.branch = "cover1"
        result = pathsolver.enumerate_longest(graph, cap=cap, bound=bound)
        _cross_check_lengths(dp_length, result.length)
        _fill_common(report, result, failures)
        k0 = cover.indices[0]
        report.kb1_ok = k0 in result.common_vertices
        report.lemma1_ok = report.kb1_ok
        report.witness_cover_pos = 0
        if not report.kb1_ok:
            failures.append(Failure("kb1_ok", f"some longest chain misses the full-circle cover arc {k0}"))
            failures.append(Failure("lemma1_ok", "empty cover trace on a longest chain"))
        selected, _ = pathsolver.select_min_cover_longest(result, cover)
        _check_membership(report, selected, family, failures, paranoid, result)
        report.trace_size = 1
        report.failures = tuple(failures)
        return report

    traced = pathsolver.enumerate_with_traces(graph, cover, cap=cap, bound=bound)
    result = traced.result
    _cross_check_lengths(dp_length, result.length)
    _fill_common(report, result, failures)

    bad_traces = [
        t
        for t in sorted(traced.trace_masks)
        if t == 0 or not _mask_contiguous(t, cover.n)
    ]
    report.lemma1_ok = not bad_traces
    if bad_traces:
        witness = _trace_witness(result, graph, cover, bad_traces[0])
        failures.append(
            Failure(
                "lemma1_ok",
                f"cover trace mask {bad_traces[0]:#x} is empty or not contiguous",
                witness,
            )
        )

    selected, trace = pathsolver.select_min_cover_longest(result, cover)
    report.trace_size = len(trace.members)
    _check_membership(report, selected, family, failures, paranoid, result)

    if trace.is_full:
        report.branch = "full-trace"
        missing = [i for i in range(cover.n) if cover.indices[i] not in result.common_vertices]
        report.kb1_ok = not missing
        if missing:
            failures.append(
                Failure(
                    "kb1_ok",
                    f"minimal trace is all of the cover but cover arc #{missing[0]} "
                    f"(index {cover.indices[missing[0]]}) is not common to all longest chains",
                )
            )
        report.failures = tuple(failures)
        return report

    report.branch = "proper-trace"
    if not trace.proper:
        # lemma1 already failed; canonicalization preconditions are void
        report.lemma3_ok = False
        failures.append(Failure("lemma3_ok", "selected chain has a non-contiguous trace", selected.arcs))
        report.failures = tuple(failures)
        return report

    _check_lemma3_and_kb1(report, family, cover, traced, selected, trace, failures, paranoid)
    report.failures = tuple(failures)
    return report


def _cross_check_lengths(dp_length: int, enum_length: int):
    """The DP and the enumeration must agree on every instance."""
    if dp_length != enum_length:
        raise InternalError(
            f"longest-path routes disagree: DP={dp_length} enumeration={enum_length}"
        )


def _fill_common(report: VerificationReport, result, failures):
    report.longest_length = result.length
    report.longest_count = result.count
    report.cap_exceeded = result.cap_exceeded
    report.common_vertices = result.common_vertices
    report.gallai_ok = bool(result.common_vertices)
    if not report.gallai_ok:
        failures.append(Failure("gallai_ok", "longest paths have empty common intersection"))


PARANOID_MEMBERSHIP_SAMPLE = 32


def _check_membership(report, selected, family, failures, paranoid, result):
    bad = chains_mod.membership_violations(selected, family)
    if not bad and paranoid:
        # sampled widening: the support check costs m region ops per chain
        for path in result.paths[:PARANOID_MEMBERSHIP_SAMPLE]:
            chain = chains_mod.Chain(path)
            bad = chains_mod.membership_violations(chain, family)
            if bad:
                selected = chain
                break
    report.membership_ok = not bad
    if bad:
        arc, meets = bad[0]
        side = "meets the support but is off the chain" if meets else "is on the chain but misses the support"
        failures.append(Failure("membership_ok", f"arc {arc} {side}", selected.arcs))


def _trace_witness(result, graph, cover, mask):
    positions = [-1] * graph.n
    for slot, idx in enumerate(cover.indices):
        positions[idx] = slot
    for path in result.paths:
        if pathsolver.path_trace_mask(path, positions) == mask:
            return path
    return None


def _check_lemma3_and_kb1(report, family, cover, traced, selected, trace, failures, paranoid):
    chain_star, creport = reorder.canonicalize(
        selected, family, cover, trace, compare_phase2=paranoid
    )
    report.swap_steps = len(creport.steps)
    if creport.phase2_divergence:
        report.phase2_divergences = len(creport.phase2_divergence)
    lemma3 = creport.all_ok
    if sorted(chain_star.arcs) != sorted(selected.arcs) or chain_star.t != selected.t:
        lemma3 = False
        failures.append(Failure("lemma3_ok", "canonical chain is not a permutation of the input", selected.arcs))
    elif not lemma3:
        detail = creport.aborted or "flags " + ",".join(
            k for k, v in sorted(creport.flags.items()) if not v
        )
        failures.append(Failure("lemma3_ok", detail, selected.arcs))
    report.lemma3_ok = lemma3

    b_slot = (trace.b - 1) % cover.n
    report.witness_cover_pos = b_slot
    kb1 = cover.indices[b_slot] in report.common_vertices
    if not kb1:
        detail = f"cover arc #{b_slot} (index {cover.indices[b_slot]}) missing from some longest chain"
        offender = _kb1_offender(traced.result, cover.indices[b_slot])
        surgery_note = _surgery_on_failure(report, family, cover, chain_star, trace, offender)
        if surgery_note:
            detail += "; " + surgery_note
        failures.append(Failure("kb1_ok", detail, offender))
    report.kb1_ok = kb1

    if paranoid:
        _check_tied_traces(report, family, cover, traced, trace, failures)


def _check_tied_traces(report, family, cover, traced, trace, failures):
    """Every minimal-size trace must support the proof; check each tied choice."""
    best = len(trace.members)
    positions = [-1] * traced.result.graph.n
    for slot, idx in enumerate(cover.indices):
        positions[idx] = slot
    seen = set()
    for mask in sorted(traced.trace_masks):
        if mask.bit_count() != best or not _mask_contiguous(mask, cover.n) or mask == 0:
            continue
        if mask == traced.min_trace_mask or mask in seen:
            continue
        seen.add(mask)
        rep = _trace_witness(traced.result, traced.result.graph, cover, mask)
        if rep is None:
            continue  # representative truncated away; aggregates stay exact
        a, b = _mask_bounds(mask, cover.n)
        rep_chain = chains_mod.validate_chain(rep, family)
        rep_trace = chains_mod.cover_trace(rep_chain, cover)
        _, rep_report = reorder.canonicalize(rep_chain, family, cover, rep_trace)
        if not rep_report.all_ok:
            report.lemma3_ok = False
            failures.append(
                Failure("lemma3_ok", f"tied trace {mask:#x}: {rep_report.aborted or 'flags failed'}", rep)
            )
        kb1_idx = cover.indices[(b - 1) % cover.n]
        if kb1_idx not in report.common_vertices:
            report.kb1_ok = False
            failures.append(
                Failure("kb1_ok", f"tied trace {mask:#x}: cover arc index {kb1_idx} not common", rep)
            )


@dataclass(frozen=True)
class SurgeryResult:
    """The two concatenated chains of the contradiction step, with their checks."""

    c1: tuple[int, ...]
    c2: tuple[int, ...]
    c1_is_chain: bool
    c2_is_chain: bool
    c1_error: str | None
    c2_error: str | None
    len_c1: int
    len_c2: int
    slack: int  # len(C1)+len(C2) - (len(P)+len(Q)+2); nonnegative by construction


def build_surgery(
    p_star: chains_mod.Chain,
    q_star: chains_mod.Chain,
    cover: Cover,
    trace_p: chains_mod.CoverTrace,
    trace_q: chains_mod.CoverTrace,
    family: ArcFamily,
) -> SurgeryResult:
    """Concatenate P1 K_{b-1} R K_{l+1} Q1^r and P2^r K_{b-1} R K_{l+1} Q2.

    Preconditions mirror the proof's hypothesis set; the caller certifies
    canonicity and longest-ness, which this routine deliberately does not
    recheck (feeding it a forced non-longest chain demonstrates the
    contradiction).
    """
    if not (trace_p.proper and trace_q.proper):
        raise PreconditionViolated("both traces must be proper and contiguous")
    n = cover.n
    b = trace_p.b
    ell = trace_q.a  # Q's trace starts at ell+1
    kb1 = cover.indices[(b - 1) % n]
    kl1 = cover.indices[(ell + 1) % n]
    if kb1 in q_star.arcs:
        raise PreconditionViolated("K_{b-1} must avoid Q")
    if kb1 not in p_star.arcs:
        raise PreconditionViolated("K_{b-1} must lie on P")
    if kl1 in p_star.arcs:
        raise PreconditionViolated("K_{l+1} must avoid P")
    if kl1 not in q_star.arcs:
        raise PreconditionViolated("K_{l+1} must lie on Q")

    connector: list[int] = []
    if b % n != (ell + 1) % n:
        slot = b % n
        for _ in range(n):
            connector.append(cover.indices[slot])
            if slot == ell % n:
                break
            slot = (slot + 1) % n
        else:
            raise PreconditionViolated("connector walk failed to close")
    both = set(p_star.arcs) | set(q_star.arcs)
    for idx in connector:
        if idx in both:
            raise PreconditionViolated(f"connector cover arc {idx} lies on P or Q")

    pb = p_star.arcs.index(kb1)
    ql = q_star.arcs.index(kl1)
    p1, p2 = p_star.arcs[:pb], p_star.arcs[pb + 1 :]
    q1, q2 = q_star.arcs[:ql], q_star.arcs[ql + 1 :]

    c1 = p1 + (kb1,) + tuple(connector) + (kl1,) + tuple(reversed(q1))
    c2 = tuple(reversed(p2)) + (kb1,) + tuple(connector) + (kl1,) + q2
    e1 = chains_mod.chain_error(c1, family)
    e2 = chains_mod.chain_error(c2, family)
    slack = len(c1) + len(c2) - (p_star.t + q_star.t + 2)
    return SurgeryResult(c1, c2, e1 is None, e2 is None, e1, e2, len(c1), len(c2), slack)


@dataclass
class HuntSummary:
    trials: int
    seed: int
    min_m: int
    max_m: int
    t_factor: int
    paranoid: bool
    counts: dict = field(default_factory=dict)
    flag_pass: dict = field(default_factory=dict)
    flag_fail: dict = field(default_factory=dict)
    flag_skip: dict = field(default_factory=dict)
    failures: int = 0
    exceptions: int = 0
    paranoid_trials: int = 0
    swap_steps: int = 0
    phase2_divergences: int = 0
    payload_files: tuple[str, ...] = ()

    def to_machine_lines(self):
        lines = [
            f"trials={self.trials}",
            f"seed={self.seed}",
            f"min_m={self.min_m}",
            f"max_m={self.max_m}",
            f"t_factor={self.t_factor}",
            f"paranoid={'true' if self.paranoid else 'false'}",
            f"paranoid_trials={self.paranoid_trials}",
        ]
        for key in sorted(self.counts):
            lines.append(f"branch_{key}={self.counts[key]}")
        for name in FLAG_NAMES:
            lines.append(
                f"{name}={self.flag_pass.get(name, 0)}/"
                f"{self.flag_fail.get(name, 0)}/"
                f"{self.flag_skip.get(name, 0)}"
            )
        lines.append(f"swap_steps={self.swap_steps}")
        lines.append(f"phase2_divergences={self.phase2_divergences}")
        lines.append(f"exceptions={self.exceptions}")
        lines.append(f"failures={self.failures}")
        for name in self.payload_files:
            lines.append(f"payload={name}")
        return lines


def _payload_text(family, trial, seed, failures):
    lines = ["# counterexample payload", f"# trial {trial} seed {seed}"]
    for f in failures:
        lines.append(f"# flag {f.flag}: {f.detail}")
    body = format_instance(family, chains=[f.chain for f in failures if f.chain])
    return "\n".join(lines) + "\n" + body


def hunt(
    trials: int,
    max_m: int = 10,
    seed: int = 0,
    t_factor: int = 4,
    min_m: int = 3,
    paranoid: bool = False,
    out_dir: str | None = None,
    require_cover: bool = True,
    require_connected: bool = True,
    bound: int = pathsolver.DEFAULT_BOUND,
    cap: int = pathsolver.DEFAULT_CAP,
    paranoid_stride: int = 16,
) -> HuntSummary:
    """Seeded randomized sweep; deterministic given the seed.

    Failure payloads land in `out_dir` with the trial seed in the filename,
    so parallel sweeps with distinct seeds cannot collide.
    """
    summary = HuntSummary(trials, seed, min_m, max_m, t_factor, paranoid)
    master = random.Random(seed)
    out_path = Path(out_dir) if out_dir else None
    if out_path:
        out_path.mkdir(parents=True, exist_ok=True)
    payloads = []
    for trial in range(trials):
        trial_seed = master.getrandbits(48)
        m = master.randint(min_m, max_m)
        trial_paranoid = paranoid or trial % paranoid_stride == 0
        summary.paranoid_trials += trial_paranoid
        family = generate(
            m,
            t_factor * m,
            seed=trial_seed,
            require_cover=require_cover,
            require_connected=require_connected,
        )
        try:
            report = verify_instance(family, paranoid=trial_paranoid, bound=bound, cap=cap)
        except ArcGallaiError as exc:
            summary.exceptions += 1
            summary.failures += 1
            summary.counts["exception"] = summary.counts.get("exception", 0) + 1
            failures = (Failure("exception", f"{type(exc).__name__}: {exc}"),)
            if out_path:
                name = f"fail-{trial:06d}-s{trial_seed}-exception.txt"
                (out_path / name).write_text(_payload_text(family, trial, trial_seed, failures))
                payloads.append(name)
            continue
        summary.counts[report.branch] = summary.counts.get(report.branch, 0) + 1
        summary.swap_steps += report.swap_steps
        summary.phase2_divergences += report.phase2_divergences
        for name, value in report.flag_values().items():
            if value is None:
                summary.flag_skip[name] = summary.flag_skip.get(name, 0) + 1
            elif value:
                summary.flag_pass[name] = summary.flag_pass.get(name, 0) + 1
            else:
                summary.flag_fail[name] = summary.flag_fail.get(name, 0) + 1
        if report.failures:
            summary.failures += len(report.failures)
            if out_path:
                name = f"fail-{trial:06d}-s{trial_seed}-{report.failures[0].flag}.txt"
                (out_path / name).write_text(
                    _payload_text(family, trial, trial_seed, report.failures)
                )
                payloads.append(name)
    summary.payload_files = tuple(payloads)
    return summary


def _kb1_offender(result, kb1_index):
    for path in result.paths:
        if kb1_index not in path:
            return path
    return None


def _surgery_on_failure(report, family, cover, chain_star, trace_p, offender):
    """On a kb1 counterexample, run the proof's surgery against the offender."""
    if offender is None:
        return "offending chain truncated out of the path list"
    try:
        q_chain = chains_mod.validate_chain(offender, family)
        trace_q = chains_mod.cover_trace(q_chain, cover)
        if not trace_q.proper:
            return "offender trace not proper; surgery preconditions void"
        q_star, q_report = reorder.canonicalize(q_chain, family, cover, trace_q)
        res = build_surgery(chain_star, q_star, cover, trace_p, trace_q, family)
        return (
            f"surgery: c1_chain={res.c1_is_chain} c2_chain={res.c2_is_chain} "
            f"len_c1={res.len_c1} len_c2={res.len_c2} slack={res.slack}"
        )
    except ArcGallaiError as exc:
        return f"surgery aborted: {type(exc).__name__}: {exc}"
