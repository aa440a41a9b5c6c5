"""Test vectors from a postman walk, replay against the State Table, coverage."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .dcpw import PostmanWalk, check_walk
from .sicstg import Configuration, SccReport, SicGraph
from .state_table import StateTable, format_key


class VectorFormatError(ValueError):
    pass


@dataclass(frozen=True)
class TestVector:
    __test__ = False  # not a pytest class

    step: int
    stimulus: tuple[int, ...]
    expected: tuple[int, ...]


@dataclass(frozen=True)
class TestVectorSequence:
    __test__ = False

    cell_name: str
    input_names: tuple[str, ...]
    state_names: tuple[str, ...]
    initial: str
    vectors: tuple[TestVector, ...]

    def __len__(self):
        return len(self.vectors)


@dataclass(frozen=True)
class Mismatch:
    step: int
    state: str
    expected: int
    actual: int


@dataclass
class ReplayReport:
    steps: int
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


@dataclass
class CoverageReport:
    vertex_count: int
    edge_count: int
    walk_length: int
    repetitions: int
    histogram: list[int]
    untestable: list[str]
    dropped_edges: list[tuple[str, str]]
    policy: str
    notes: list[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return bool(self.histogram) and min(self.histogram) >= 1


def walk_to_vectors(walk: PostmanWalk, g: SicGraph, st: StateTable) -> TestVectorSequence:
    check_walk(g, walk)
    vecs = []
    for step, e in enumerate(walk.edges, start=1):
        dst = g.vertices[g.edges[e][1]]
        vecs.append(TestVector(step, dst.current_inputs, dst.current_states))
    return TestVectorSequence(
        st.cell_name, tuple(st.input_names), tuple(st.state_names),
        g.vertices[walk.start].label, tuple(vecs))


def replay(st: StateTable, seq: TestVectorSequence) -> ReplayReport:
    """Run the State Table as reference model over the stimuli.

    The simulated state always follows the table, not the vector's expected
    field, so a single wrong expectation yields a single mismatch.
    """
    n, m, k = st.n_level, st.n_edge, st.n_state
    if len(seq.input_names) != n + m or len(seq.state_names) != k:
        raise VectorFormatError("vector sequence pin counts do not match the State Table")
    try:
        init = Configuration.from_label(seq.initial, n, m, k)
    except ValueError as exc:
        raise VectorFormatError(str(exc)) from None
    table = st.lookup()
    prev_edges = init.current_edges
    state = init.current_states
    report = ReplayReport(len(seq))
    for vec in seq.vectors:
        level = vec.stimulus[:n]
        cur_edges = vec.stimulus[n:]
        key = (level, tuple(zip(prev_edges, cur_edges)), state)
        if key not in table:
            raise KeyError(f"step {vec.step}: key {format_key(key)} missing from State Table")
        nxt = table[key]
        for name, want, got in zip(seq.state_names, vec.expected, nxt):
            if want != got:
                report.mismatches.append(Mismatch(vec.step, name, want, got))
        prev_edges = cur_edges
        state = nxt
    return report


def coverage(walk: PostmanWalk, g: SicGraph, scc_report: SccReport, notes=()) -> CoverageReport:
    hist = walk.histogram(len(g.edges))
    return CoverageReport(
        vertex_count=g.n,
        edge_count=len(g.edges),
        walk_length=len(walk),
        repetitions=len(walk) - len(g.edges),
        histogram=hist,
        untestable=list(scc_report.pruned),
        dropped_edges=list(scc_report.dropped_edges),
        policy=scc_report.policy,
        notes=list(notes),
    )


def initial_configuration(seq: TestVectorSequence) -> Configuration:
    width = len(seq.initial.split(","))
    k = len(seq.state_names)
    m = width - len(seq.input_names) - 2 * k
    n = len(seq.input_names) - m
    if m < 0 or n < 0:
        raise VectorFormatError(f"initial configuration {seq.initial!r} does not fit the pin list")
    try:
        return Configuration.from_label(seq.initial, n, m, k)
    except ValueError as exc:
        raise VectorFormatError(str(exc)) from None


def hamming_steps(seq: TestVectorSequence) -> list[int]:
    """Input Hamming distance of each step from the one before (step 1 against the initial configuration)."""
    prev = initial_configuration(seq).current_inputs
    out = []
    for vec in seq.vectors:
        out.append(sum(a != b for a, b in zip(prev, vec.stimulus)))
        prev = vec.stimulus
    return out


def write_csv(seq: TestVectorSequence) -> str:
    buf = io.StringIO()
    buf.write(f"# cell {seq.cell_name}\n")
    buf.write(f"# initial {seq.initial}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", *seq.input_names, *(f"expect_{s}" for s in seq.state_names)])
    for v in seq.vectors:
        w.writerow([v.step, *v.stimulus, *v.expected])
    return buf.getvalue()


def read_csv(text: str) -> TestVectorSequence:
    meta = {}
    body = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#"):
            parts = line[1:].split(None, 1)
            if len(parts) == 2:
                meta[parts[0]] = parts[1].strip()
        elif line.strip():
            body.append((lineno, line))
    if "initial" not in meta:
        raise VectorFormatError("missing '# initial <label>' metadata line")
    if not body:
        raise VectorFormatError("missing header row")
    rows = list(csv.reader(line for _, line in body))
    header = rows[0]
    if not header or header[0] != "step":
        raise VectorFormatError(f"line {body[0][0]}: header must start with 'step'")
    states = [h[len("expect_"):] for h in header[1:] if h.startswith("expect_")]
    inputs = [h for h in header[1:] if not h.startswith("expect_")]
    if header[1:] != inputs + [f"expect_{s}" for s in states]:
        raise VectorFormatError(f"line {body[0][0]}: input columns must precede expect_ columns")
    vecs = []
    for (lineno, _), row in zip(body[1:], rows[1:]):
        if len(row) != len(header):
            raise VectorFormatError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            step = int(row[0])
            bits = [int(x) for x in row[1:]]
        except ValueError:
            raise VectorFormatError(f"line {lineno}: non-integer field") from None
        if set(bits) - {0, 1}:
            raise VectorFormatError(f"line {lineno}: values must be 0 or 1")
        vecs.append(TestVector(step, tuple(bits[:len(inputs)]), tuple(bits[len(inputs):])))
    seq = TestVectorSequence(meta.get("cell", ""), tuple(inputs), tuple(states), meta["initial"], tuple(vecs))
    initial_configuration(seq)
    return seq


def check_pins(st: StateTable, seq: TestVectorSequence) -> None:
    if list(seq.input_names) != st.input_names or list(seq.state_names) != st.state_names:
        raise VectorFormatError(
            f"vector pins {list(seq.input_names)}/{list(seq.state_names)} do not match "
            f"State Table pins {st.input_names}/{st.state_names}")


def format_replay(rep: ReplayReport) -> str:
    lines = [f"steps replayed: {rep.steps}", f"mismatches: {len(rep.mismatches)}"]
    for mm in rep.mismatches:
        lines.append(f"  step {mm.step}: {mm.state} expected {mm.expected}, model gives {mm.actual}")
    return "\n".join(lines) + "\n"


def format_report(cov: CoverageReport, seq: TestVectorSequence | None = None) -> str:
    hist = cov.histogram
    lines = ["[graph]",
             f"vertices: {cov.vertex_count}",
             f"edges: {cov.edge_count}",
             f"scc policy: {cov.policy}",
             "",
             "[walk]",
             f"length: {cov.walk_length}",
             f"repeated traversals: {cov.repetitions}"]
    if seq is not None:
        lines.append(f"initial configuration: {seq.initial}")
    lines += ["", "[histogram]",
              f"min: {min(hist) if hist else 0}",
              f"max: {max(hist) if hist else 0}",
              f"covered: {sum(1 for c in hist if c)}/{len(hist)}"]
    for times in sorted(set(hist)):
        lines.append(f"edges traversed {times}x: {hist.count(times)}")
    lines += ["", f"[untestable configurations] {len(cov.untestable)}"]
    lines += [f"  {lab}" for lab in cov.untestable]
    lines += [f"[dropped edges] {len(cov.dropped_edges)}"]
    lines += [f"  {s} -> {d}" for s, d in cov.dropped_edges]
    if cov.notes:
        lines += ["", "[notes]"] + [f"  {n}" for n in cov.notes]
    return "\n".join(lines) + "\n"
