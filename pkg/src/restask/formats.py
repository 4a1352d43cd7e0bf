"""Readers and writers for the benchmark instance formats.

Supported formats (case-insensitive aliases in brackets):

- ``gap`` [or-library-gap]: problem count, then ``m n``, the m x n cost
  matrix, the m x n demand matrix and m capacities; whitespace-free layout.
- ``bppc`` [bpp-conflict]: ``n C`` then one line per item ``i w c1 c2 ...``
  listing the item's conflicts.
- ``dimacs`` [dimacs-col]: ``c`` comments, ``p edge n m`` and ``e u v`` lines.
- ``taillard`` [taillard-jssp]: optional caption line, a line starting with
  ``jobs machines``, then a ``Times`` block and a ``Machines`` block of
  jobs x machines integers (machines 1-based).
- ``solomon`` [solomon-vrptw]: name line, ``VEHICLE`` block with number and
  capacity, ``CUSTOMER`` table of ``no x y demand ready due service``.
- ``json`` [native-json]: a model description (see ``restask.modelfile``).

Malformed input raises ``ParseError`` carrying the offending 1-based line.
"""

from __future__ import annotations

import math
from pathlib import Path

from restask.errors import InvalidInstance, ParseError, UnsupportedFormat
from restask.modelfile import dumps_model, loads_model
from restask.problems import BppcInstance, GapInstance, GcInstance, JsspInstance, VrptwInstance

FORMATS = ("gap", "bppc", "dimacs", "taillard", "solomon", "json")
_ALIASES = {
    "or-library-gap": "gap", "bpp-conflict": "bppc", "dimacs-col": "dimacs", "col": "dimacs",
    "taillard-jssp": "taillard", "solomon-vrptw": "solomon", "native-json": "json",
}
# default format for each problem kind
PROBLEM_FORMATS = {"gap": "gap", "bppc": "bppc", "gc": "dimacs", "jssp": "taillard", "vrptw": "solomon",
                   "model": "json"}


def normalize_format(fmt: str) -> str:
    f = fmt.strip().lower().replace("_", "-")
    f = _ALIASES.get(f, f)
    if f not in FORMATS:
        raise UnsupportedFormat(f"unknown instance format {fmt!r}")
    return f


def _number(tok: str, line: int, what: str) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(line, f"expected {what}, got {tok!r}") from None
    if not math.isfinite(v):
        raise ParseError(line, f"{what} must be finite")
    return v


def _integer(tok: str, line: int, what: str) -> int:
    v = _number(tok, line, what)
    if not v.is_integer():
        raise ParseError(line, f"expected integer {what}, got {tok!r}")
    return int(v)


def _lines(text: str) -> list[tuple[int, str]]:
    """Non-blank lines with their 1-based numbers."""
    return [(n, s.strip()) for n, s in enumerate(text.splitlines(), 1) if s.strip()]


def _eof_line(text: str) -> int:
    return len(text.splitlines()) + 1


class _Tokens:
    def __init__(self, text: str):
        self.items = [(tok, n) for n, s in enumerate(text.splitlines(), 1) for tok in s.split()]
        self.pos = 0
        self.eof = _eof_line(text)

    def next(self, what: str) -> tuple[str, int]:
        if self.pos >= len(self.items):
            raise ParseError(self.eof, f"unexpected end of file, expected {what}")
        item = self.items[self.pos]
        self.pos += 1
        return item

    def number(self, what: str) -> float:
        return _number(*self.next(what), what)

    def integer(self, what: str) -> int:
        return _integer(*self.next(what), what)

    def last_line(self) -> int:
        return self.items[self.pos - 1][1] if self.pos else 1


def _build(factory, line: int, *args):
    try:
        return factory(*args)
    except InvalidInstance as e:
        raise ParseError(line, str(e)) from None


# --------------------------------------------------------------------------
# GAP


def parse_gap_all(text: str, name: str = "gap") -> list[GapInstance]:
    tk = _Tokens(text)
    count = tk.integer("problem count")
    out = []
    for p in range(count):
        m, n = tk.integer("agent count m"), tk.integer("job count n")
        if m < 1 or n < 0:
            raise ParseError(tk.last_line(), f"bad dimensions m={m} n={n}")
        cost = tuple(tuple(tk.number(f"cost c[{i + 1}][{j + 1}]") for j in range(n)) for i in range(m))
        demand = tuple(tuple(tk.number(f"demand a[{i + 1}][{j + 1}]") for j in range(n)) for i in range(m))
        caps = tuple(tk.number(f"capacity b[{i + 1}]") for i in range(m))
        label = name if count == 1 else f"{name}-{p + 1}"
        out.append(_build(GapInstance, tk.last_line(), caps, demand, cost, label))
    if tk.pos < len(tk.items):
        raise ParseError(tk.items[tk.pos][1], "trailing data after the last problem")
    return out


def parse_gap(text: str, name: str = "gap", index: int = 0) -> GapInstance:
    problems = parse_gap_all(text, name)
    if not 0 <= index < len(problems):
        raise ParseError(1, f"file holds {len(problems)} problems, asked for #{index + 1}")
    return problems[index]


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def write_gap(inst: GapInstance) -> str:
    rows = ["1", f"{inst.m} {inst.n}"]
    rows += [" ".join(map(_fmt, r)) for r in inst.cost]
    rows += [" ".join(map(_fmt, r)) for r in inst.demand]
    rows.append(" ".join(map(_fmt, inst.capacities)))
    return "\n".join(rows) + "\n"


# --------------------------------------------------------------------------
# BPPC


def parse_bppc(text: str, name: str = "bppc") -> BppcInstance:
    lines = _lines(text)
    if not lines:
        raise ParseError(1, "empty file, expected 'n C' header")
    ln, head = lines[0]
    parts = head.split()
    if len(parts) != 2:
        raise ParseError(ln, "header must be 'n C'")
    n, cap = _integer(parts[0], ln, "item count"), _number(parts[1], ln, "bin capacity")
    body = lines[1:]
    if len(body) < n:
        raise ParseError(_eof_line(text), f"expected {n} item lines, found {len(body)}")
    if len(body) > n:
        raise ParseError(body[n][0], "more item lines than the header declares")
    sizes, conflicts = [], []
    for expect, (ln, s) in enumerate(body, 1):
        parts = s.split()
        if len(parts) < 2:
            raise ParseError(ln, "item line needs 'index size'")
        idx = _integer(parts[0], ln, "item index")
        if idx != expect:
            raise ParseError(ln, f"expected item {expect}, got {idx}")
        sizes.append(_number(parts[1], ln, "item size"))
        for tok in parts[2:]:
            other = _integer(tok, ln, "conflicting item")
            if not 1 <= other <= n or other == idx:
                raise ParseError(ln, f"bad conflict {idx}-{other}")
            conflicts.append((idx, other))
    return _build(BppcInstance, lines[0][0], cap, tuple(sizes), tuple(conflicts), name)


def write_bppc(inst: BppcInstance) -> str:
    partners: dict[int, list[int]] = {j: [] for j in range(1, inst.n + 1)}
    for a, b in inst.conflicts:
        partners[a].append(b)
    rows = [f"{inst.n} {_fmt(inst.capacity)}"]
    for j, s in enumerate(inst.sizes, 1):
        rows.append(" ".join([str(j), _fmt(s)] + [str(p) for p in partners[j]]))
    return "\n".join(rows) + "\n"


# --------------------------------------------------------------------------
# DIMACS


def parse_dimacs(text: str, name: str = "gc", n_colors: int | None = None) -> GcInstance:
    n = None
    header_line = 1
    edges = []
    for ln, s in _lines(text):
        parts = s.split()
        tag = parts[0]
        if tag == "c":
            continue
        if tag == "p":
            if n is not None:
                raise ParseError(ln, "duplicate problem line")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ParseError(ln, "problem line must be 'p edge <nodes> <edges>'")
            n = _integer(parts[2], ln, "node count")
            _integer(parts[3], ln, "edge count")
            header_line = ln
        elif tag == "e":
            if n is None:
                raise ParseError(ln, "edge before the problem line")
            if len(parts) != 3:
                raise ParseError(ln, "edge line must be 'e <u> <v>'")
            u, v = _integer(parts[1], ln, "node"), _integer(parts[2], ln, "node")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(ln, f"edge ({u}, {v}) outside 1..{n}")
            if u == v:
                raise ParseError(ln, f"self-loop on node {u}")
            edges.append((u, v))
        else:
            raise ParseError(ln, f"unknown line type {tag!r}")
    if n is None:
        raise ParseError(_eof_line(text), "missing 'p edge' problem line")
    return _build(GcInstance, header_line, n, tuple(edges), n_colors, name)


def write_dimacs(inst: GcInstance) -> str:
    rows = [f"p edge {inst.n_nodes} {len(inst.edges)}"] + [f"e {a} {b}" for a, b in inst.edges]
    return "\n".join(rows) + "\n"


# --------------------------------------------------------------------------
# Taillard


def _matrix(lines, pos, rows, cols, what, eof, integer):
    out = []
    for r in range(rows):
        if pos + r >= len(lines) or not lines[pos + r][1][0].isdigit():
            line = lines[pos + r][0] if pos + r < len(lines) else eof
            raise ParseError(line, f"{what}: expected {rows} rows, found {r}")
        ln, s = lines[pos + r]
        parts = s.split()
        if len(parts) != cols:
            raise ParseError(ln, f"{what}: row has {len(parts)} values, expected {cols}")
        conv = _integer if integer else _number
        out.append(tuple(conv(p, ln, what) for p in parts))
    return tuple(out), pos + rows


def parse_taillard(text: str, name: str = "jssp") -> JsspInstance:
    lines = _lines(text)
    eof = _eof_line(text)
    pos = 0
    while pos < len(lines) and not lines[pos][1][0].isdigit():
        pos += 1
    if pos >= len(lines):
        raise ParseError(eof, "missing 'jobs machines' header")
    ln, s = lines[pos]
    parts = s.split()
    if len(parts) < 2:
        raise ParseError(ln, "header needs job and machine counts")
    jobs, machines = _integer(parts[0], ln, "job count"), _integer(parts[1], ln, "machine count")
    if jobs < 1 or machines < 1:
        raise ParseError(ln, "job and machine counts must be positive")
    pos += 1

    def expect(label, pos):
        if pos >= len(lines):
            raise ParseError(eof, f"missing '{label}' block")
        ln, s = lines[pos]
        if s.lower() != label.lower():
            raise ParseError(ln, f"expected '{label}', got {s!r}")
        return pos + 1

    pos = expect("Times", pos)
    durations, pos = _matrix(lines, pos, jobs, machines, "Times", eof, integer=False)
    pos = expect("Machines", pos)
    route, pos = _matrix(lines, pos, jobs, machines, "Machines", eof, integer=True)
    if pos < len(lines):
        raise ParseError(lines[pos][0], "trailing data after the Machines block")
    for r, row in enumerate(route):
        if any(not 1 <= k <= machines for k in row):
            raise ParseError(lines[pos - jobs + r][0], f"machine id outside 1..{machines}")
    return _build(JsspInstance, ln, durations, route, name)


def write_taillard(inst: JsspInstance) -> str:
    rows = ["Nb of jobs, Nb of Machines", f"{inst.n_jobs} {inst.n_ops}", "Times"]
    rows += [" ".join(map(_fmt, r)) for r in inst.durations]
    rows.append("Machines")
    rows += [" ".join(map(str, r)) for r in inst.machines]
    return "\n".join(rows) + "\n"


# --------------------------------------------------------------------------
# Solomon


def parse_solomon(text: str, name: str | None = None) -> VrptwInstance:
    lines = _lines(text)
    eof = _eof_line(text)
    if not lines:
        raise ParseError(1, "empty file")
    label = name or lines[0][1]
    pos = next((p for p, (_, s) in enumerate(lines) if s.upper().startswith("VEHICLE")), None)
    if pos is None:
        raise ParseError(eof, "missing VEHICLE block")
    pos += 1
    while pos < len(lines) and not lines[pos][1][0].isdigit():
        pos += 1
    if pos >= len(lines):
        raise ParseError(eof, "missing vehicle number and capacity")
    ln, s = lines[pos]
    parts = s.split()
    if len(parts) != 2:
        raise ParseError(ln, "vehicle line must be 'number capacity'")
    vehicles, capacity = _integer(parts[0], ln, "vehicle count"), _number(parts[1], ln, "capacity")
    pos = next((p for p in range(pos + 1, len(lines)) if lines[p][1].upper().startswith("CUSTOMER")), None)
    if pos is None:
        raise ParseError(eof, "missing CUSTOMER block")
    pos += 1
    while pos < len(lines) and not lines[pos][1][0].isdigit():
        pos += 1
    cols: list[list[float]] = [[] for _ in range(6)]
    first = pos
    for ln, s in lines[pos:]:
        parts = s.split()
        if len(parts) != 7:
            raise ParseError(ln, f"customer row has {len(parts)} fields, expected 7")
        no = _integer(parts[0], ln, "customer number")
        if no != len(cols[0]):
            raise ParseError(ln, f"expected customer {len(cols[0])}, got {no}")
        for c, tok in zip(cols, parts[1:]):
            c.append(_number(tok, ln, "customer field"))
    if not cols[0]:
        raise ParseError(eof, "customer table is empty")
    x, y, demand, ready, due, service = cols
    return _build(VrptwInstance, lines[first][0], tuple(zip(x, y)), tuple(demand), tuple(ready), tuple(due),
                  tuple(service), vehicles, capacity, label)


def write_solomon(inst: VrptwInstance) -> str:
    rows = [inst.name, "", "VEHICLE", "NUMBER     CAPACITY", f"  {inst.n_vehicles}   {_fmt(inst.capacity)}", "",
            "CUSTOMER",
            "CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE   TIME", ""]
    for j in range(inst.n + 1):
        vals = (*inst.coords[j], inst.demand[j], inst.ready[j], inst.due[j], inst.service[j])
        rows.append(f"{j:5d} " + " ".join(f"{_fmt(v):>10}" for v in vals))
    return "\n".join(rows) + "\n"


# --------------------------------------------------------------------------
# dispatch

_PARSERS = {"gap": parse_gap, "bppc": parse_bppc, "dimacs": parse_dimacs, "taillard": parse_taillard,
            "solomon": parse_solomon}
_WRITERS = {GapInstance: ("gap", write_gap), BppcInstance: ("bppc", write_bppc), GcInstance: ("dimacs", write_dimacs),
            JsspInstance: ("taillard", write_taillard), VrptwInstance: ("solomon", write_solomon)}


def parse_text(text: str, fmt: str, name: str | None = None, path: str | None = None):
    """Instance (or, for ``json``, a ready model) parsed from ``text``."""
    f = normalize_format(fmt)
    try:
        if f == "json":
            return loads_model(text, path)
        kw = {"name": name} if name else {}
        return _PARSERS[f](text, **kw)
    except ParseError as e:
        if path and e.path is None:
            raise ParseError(e.line, e.reason, path) from None
        raise


def parse_instance(path: str | Path, fmt: str):
    p = Path(path)
    f = normalize_format(fmt)
    name = None if f == "solomon" else p.stem
    return parse_text(p.read_text(), f, name, str(p))


def write_text(instance) -> tuple[str, str]:
    """``(format, text)`` for an instance or a representable model."""
    for cls, (fmt, writer) in _WRITERS.items():
        if isinstance(instance, cls):
            return fmt, writer(instance)
    return "json", dumps_model(instance)


def write_instance(instance, path: str | Path) -> str:
    fmt, text = write_text(instance)
    Path(path).write_text(text)
    return fmt
