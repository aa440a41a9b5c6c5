"""State Table parsing, validation and hold-expansion.

A State Table maps a key (level input bits, edge input (prev, cur) pairs,
previous state bits) to next state bits.  The text format looks like::

    cell DFF
    input level D
    input edge CLK
    state Q
    table
    0 R 0 : 0
    ...
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

LEVEL = "level"
EDGE = "edge"
STATE = "state"

MAX_WIDTH = 24

EDGE_SYMBOLS = {
    "R": (0, 1),
    "F": (1, 0),
    "00": (0, 0),
    "01": (0, 1),
    "10": (1, 0),
    "11": (1, 1),
}

Bits = tuple[int, ...]
Pairs = tuple[tuple[int, int], ...]
Key = tuple[Bits, Pairs, Bits]


class StateTableError(ValueError):
    """Raised for malformed or inconsistent State Tables."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" if column is None else f"line {line}, column {column}"
            message = f"{where}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class PinDeclaration:
    name: str
    kind: str  # LEVEL, EDGE or STATE


@dataclass(frozen=True)
class StateTableRow:
    level_inputs: Bits
    edge_inputs: Pairs
    prev_states: Bits
    next_states: Bits

    @property
    def key(self) -> Key:
        return (self.level_inputs, self.edge_inputs, self.prev_states)


@dataclass(frozen=True)
class StateTable:
    cell_name: str
    declarations: tuple[PinDeclaration, ...]
    rows: tuple[StateTableRow, ...]
    # keys inserted by expand(); empty for a table straight from the parser
    added_keys: tuple[Key, ...] = field(default=(), compare=False)

    def __post_init__(self):
        _check_declarations(self.declarations)
        n, m, k = self.n_level, self.n_edge, self.n_state
        seen = set()
        for row in self.rows:
            if (len(row.level_inputs), len(row.edge_inputs), len(row.prev_states), len(row.next_states)) != (n, m, k, k):
                raise StateTableError(f"row {row} does not match pin declarations")
            if row.key in seen:
                raise StateTableError(f"duplicate key {format_key(row.key)}")
            seen.add(row.key)

    def pins(self, kind: str) -> list[str]:
        return [d.name for d in self.declarations if d.kind == kind]

    @property
    def level_names(self) -> list[str]:
        return self.pins(LEVEL)

    @property
    def edge_names(self) -> list[str]:
        return self.pins(EDGE)

    @property
    def state_names(self) -> list[str]:
        return self.pins(STATE)

    @property
    def input_names(self) -> list[str]:
        """Stimulus pin order: level inputs then edge inputs."""
        return self.level_names + self.edge_names

    @property
    def n_level(self) -> int:
        return len(self.level_names)

    @property
    def n_edge(self) -> int:
        return len(self.edge_names)

    @property
    def n_state(self) -> int:
        return len(self.state_names)

    @property
    def key_width(self) -> int:
        return self.n_level + 2 * self.n_edge + self.n_state

    def lookup(self) -> dict[Key, Bits]:
        return {row.key: row.next_states for row in self.rows}


@dataclass(frozen=True)
class CompletenessReport:
    row_count: int
    expected_count: int
    missing_keys: tuple[Key, ...]
    duplicate_keys: tuple[Key, ...]

    @property
    def complete(self) -> bool:
        return not self.missing_keys and not self.duplicate_keys


def _check_declarations(decls: Sequence[PinDeclaration]) -> None:
    names = set()
    for d in decls:
        if d.kind not in (LEVEL, EDGE, STATE):
            raise StateTableError(f"unknown pin kind {d.kind!r} for {d.name}")
        if d.name in names:
            raise StateTableError(f"duplicate pin name {d.name!r}")
        names.add(d.name)
    if not any(d.kind == STATE for d in decls):
        raise StateTableError("no memory elements declared; combinational cells are not supported")
    width = sum(2 if d.kind == EDGE else 1 for d in decls)
    if width > MAX_WIDTH:
        raise StateTableError(f"key width N+2M+K = {width} exceeds the supported ceiling of {MAX_WIDTH}")


def format_key(key: Key) -> str:
    level, edges, prev = key
    parts = [str(b) for b in level]
    parts += [f"{p}{c}" for p, c in edges]
    parts += [str(b) for b in prev]
    return " ".join(parts)


def _is_identifier(s: str) -> bool:
    return s.replace("_", "a").replace("[", "a").replace("]", "a").isalnum() and not s[0].isdigit()


def _bit(token: str, line: int, col: int) -> int:
    if token not in ("0", "1"):
        raise StateTableError(f"expected 0 or 1, got {token!r}", line, col)
    return int(token)


def _tokens(text: str) -> Iterable[tuple[int, list[tuple[int, str]]]]:
    """Yield (line number, [(column, token), ...]) for non-empty lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = []
        col = 0
        for piece in line.split():
            col = line.index(piece, col)
            toks.append((col + 1, piece))
            col += len(piece)
        if toks:
            yield lineno, toks


def parse(text: str) -> StateTable:
    lines = list(_tokens(text))
    if not lines:
        raise StateTableError("empty input")

    lineno, toks = lines[0]
    if len(toks) != 2 or toks[0][1] != "cell":
        raise StateTableError("expected 'cell <identifier>'", lineno, toks[0][0])
    cell_name = toks[1][1]
    if not _is_identifier(cell_name):
        raise StateTableError(f"invalid cell name {cell_name!r}", lineno, toks[1][0])

    decls: list[PinDeclaration] = []
    i = 1
    while i < len(lines):
        lineno, toks = lines[i]
        words = [t for _, t in toks]
        i += 1
        if words == ["table"]:
            break
        if len(words) == 3 and words[0] == "input":
            if words[1] not in (LEVEL, EDGE):
                raise StateTableError(f"unknown pin kind {words[1]!r}", lineno, toks[1][0])
            kind, name, name_col = words[1], words[2], toks[2][0]
        elif len(words) == 2 and words[0] == STATE:
            kind, name, name_col = STATE, words[1], toks[1][0]
        else:
            raise StateTableError(
                "expected 'input level <name>', 'input edge <name>', 'state <name>' or 'table'",
                lineno, toks[0][0])
        if not _is_identifier(name):
            raise StateTableError(f"invalid pin name {name!r}", lineno, name_col)
        if any(d.name == name for d in decls):
            raise StateTableError(f"duplicate pin name {name!r}", lineno, name_col)
        decls.append(PinDeclaration(name, kind))
    else:
        raise StateTableError("missing 'table' line")

    try:
        _check_declarations(decls)
    except StateTableError as exc:
        raise StateTableError(str(exc), lineno) from None

    kinds = [d.kind for d in decls]
    n = kinds.count(LEVEL)
    m = kinds.count(EDGE)
    k = kinds.count(STATE)

    rows: dict[Key, StateTableRow] = {}
    origin: dict[Key, int] = {}
    for lineno, toks in lines[i:]:
        words = [t for _, t in toks]
        if words.count(":") != 1:
            raise StateTableError("row must contain exactly one ':'", lineno, toks[0][0])
        sep = words.index(":")
        lhs, rhs = toks[:sep], toks[sep + 1:]
        if len(lhs) != n + m + k or len(rhs) != k:
            raise StateTableError(
                f"width mismatch: expected {n + m + k} values before ':' and {k} after, "
                f"got {len(lhs)} and {len(rhs)}", lineno, toks[0][0])
        level = tuple(_bit(t, lineno, c) for c, t in lhs[:n])
        edges = []
        for c, t in lhs[n:n + m]:
            if t not in EDGE_SYMBOLS:
                raise StateTableError(f"expected edge value R, F, 00, 01, 10 or 11, got {t!r}", lineno, c)
            edges.append(EDGE_SYMBOLS[t])
        prev = tuple(_bit(t, lineno, c) for c, t in lhs[n + m:])
        nxt = tuple(_bit(t, lineno, c) for c, t in rhs)
        row = StateTableRow(level, tuple(edges), prev, nxt)
        if row.key in rows:
            if rows[row.key].next_states != nxt:
                raise StateTableError(
                    f"nondeterministic State Table: key {format_key(row.key)} "
                    f"also given on line {origin[row.key]} with different next states",
                    lineno, toks[0][0])
            log.warning("line %d: duplicate of line %d ignored", lineno, origin[row.key])
            continue
        rows[row.key] = row
        origin[row.key] = lineno

    if not rows:
        raise StateTableError("no rows")
    return StateTable(cell_name, tuple(decls), tuple(rows.values()))


def serialize(st: StateTable) -> str:
    out = [f"cell {st.cell_name}"]
    for d in st.declarations:
        out.append(f"state {d.name}" if d.kind == STATE else f"input {d.kind} {d.name}")
    out.append("table")
    for row in st.rows:
        vals = [str(b) for b in row.level_inputs]
        for pair in row.edge_inputs:
            vals.append({(0, 1): "R", (1, 0): "F"}.get(pair, f"{pair[0]}{pair[1]}"))
        vals += [str(b) for b in row.prev_states]
        vals.append(":")
        vals += [str(b) for b in row.next_states]
        out.append(" ".join(vals))
    return "\n".join(out) + "\n"


def all_keys(n: int, m: int, k: int) -> Iterable[Key]:
    """Every key in {0,1}^(N+2M+K), in lexicographic bit order."""
    for bits in itertools.product((0, 1), repeat=n + 2 * m + k):
        level = bits[:n]
        edges = tuple((bits[n + 2 * j], bits[n + 2 * j + 1]) for j in range(m))
        yield level, edges, bits[n + 2 * m:]


def expand(st: StateTable) -> StateTable:
    """Add a hold row (next = prev) for every key the table does not specify.

    Applies to every missing key, including level-only ones.
    """
    present = st.lookup()
    added = []
    rows = list(st.rows)
    for key in all_keys(st.n_level, st.n_edge, st.n_state):
        if key not in present:
            rows.append(StateTableRow(key[0], key[1], key[2], key[2]))
            added.append(key)
    if not added:
        return st
    return StateTable(st.cell_name, st.declarations, tuple(rows), st.added_keys + tuple(added))


def validate_complete(st: StateTable) -> CompletenessReport:
    counts: dict[Key, int] = {}
    for row in st.rows:
        counts[row.key] = counts.get(row.key, 0) + 1
    missing = tuple(key for key in all_keys(st.n_level, st.n_edge, st.n_state) if key not in counts)
    dupes = tuple(key for key, c in counts.items() if c > 1)
    return CompletenessReport(len(st.rows), 2 ** st.key_width, missing, dupes)
