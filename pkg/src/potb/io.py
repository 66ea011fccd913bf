"""Plan and orthogonal-array files.

The canonical plan format is line oriented::

    potb-plan 1
    group cyclic 5
    factors 3
    blocks 30
    size 2
    factor F0 levels inf 0 1 2 3 4
    ...
    classes 1 2 3 1 2 3            (optional)
    block 1 inf 0 4 | 0 1 1
    ...

Each ``block`` line lists its k plots separated by ``|``; a plot lists one
level per factor. Levels are decimal residues, comma-joined base-p digits for
field elements, or ``inf``. ``group`` is ``cyclic <n>``, ``field <p> <e>
modulus <digits> alpha <digits>`` or ``none`` (plain integer levels).

The flat format has a tab-separated header ``block F1 .. Fm`` and one plot
per line; it carries no group or level-set declarations.
"""

from __future__ import annotations

import re

from .algebra import CyclicGroup, GaloisField, _is_irreducible, _is_primitive, is_prime
from .constructions import OrthogonalArray
from .errors import PlanFormatError
from .plan import INF, Plan

FORMAT_TAG = "potb-plan"
OA_TAG = "potb-oa"
FORMAT_VERSION = 1


def format_level(level) -> str:
    if level is INF:
        return "inf"
    if isinstance(level, tuple):
        return ",".join(str(d) for d in level)
    return str(level)


def format_group(group) -> str:
    if group is None:
        return "none"
    if isinstance(group, CyclicGroup):
        return f"cyclic {group.n}"
    if isinstance(group, GaloisField):
        return (
            f"field {group.p} {group.e} modulus {format_level(group.modulus)} "
            f"alpha {format_level(group.alpha)}"
        )
    raise TypeError(f"cannot serialize group {group!r}")


def dumps_plan(plan: Plan) -> str:
    lines = [
        f"{FORMAT_TAG} {FORMAT_VERSION}",
        f"group {format_group(plan.group)}",
        f"factors {plan.m}",
        f"blocks {plan.b}",
        f"size {plan.k}",
    ]
    for name, levels in zip(plan.factor_names, plan.level_sets):
        lines.append(f"factor {name} levels " + " ".join(format_level(x) for x in levels))
    if plan.classes is not None:
        lines.append("classes " + " ".join(str(c) for c in plan.classes))
    for b in range(plan.b):
        plots = [" ".join(format_level(x) for x in plot) for plot in plan.plots(b)]
        lines.append(f"block {b + 1} " + " | ".join(plots))
    return "\n".join(lines) + "\n"


def dumps_flat(plan: Plan) -> str:
    lines = ["\t".join(["block", *plan.factor_names])]
    for b in range(plan.b):
        for plot in plan.plots(b):
            lines.append("\t".join([str(b + 1), *(format_level(x) for x in plot)]))
    return "\n".join(lines) + "\n"


def write_plan(plan: Plan, path, flat: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_flat(plan) if flat else dumps_plan(plan))


class _Lines:
    """Iterator over significant lines that remembers positions for error messages."""

    def __init__(self, text: str):
        self.items = []
        for no, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if stripped and not stripped.startswith("#"):
                self.items.append((no, raw))
        self.pos = 0

    def next(self, what: str):
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else 1
            raise PlanFormatError(f"unexpected end of file, expected {what}", last + 1, 1)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def peek_keyword(self):
        if self.pos >= len(self.items):
            return None
        return self.items[self.pos][1].split(None, 1)[0]


def _tokens(raw: str):
    """Whitespace tokens with 1-based start columns."""
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", raw)]


def _int(token: str, line: int, col: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise PlanFormatError(f"expected integer {what}, got {token!r}", line, col) from None


def _digits(token: str, line: int, col: int) -> tuple[int, ...]:
    try:
        return tuple(int(d) for d in token.split(","))
    except ValueError:
        raise PlanFormatError(f"expected comma-joined digits, got {token!r}", line, col) from None


def _keyword(toks, expected: str, line: int):
    if not toks or toks[0][0] != expected:
        got = toks[0][0] if toks else ""
        raise PlanFormatError(f"expected {expected!r}, got {got!r}", line, toks[0][1] if toks else 1)


def _parse_group(toks, line: int):
    kind = toks[1][0] if len(toks) > 1 else None
    if kind == "none" and len(toks) == 2:
        return None
    if kind == "cyclic" and len(toks) == 3:
        n = _int(toks[2][0], line, toks[2][1], "group order")
        if n < 1:
            raise PlanFormatError("group order must be positive", line, toks[2][1])
        return CyclicGroup(n)
    if kind == "field" and len(toks) == 8 and toks[4][0] == "modulus" and toks[6][0] == "alpha":
        p = _int(toks[2][0], line, toks[2][1], "characteristic")
        e = _int(toks[3][0], line, toks[3][1], "degree")
        modulus = _digits(toks[5][0], line, toks[5][1])
        alpha = _digits(toks[7][0], line, toks[7][1])
        if not is_prime(p) or e < 1:
            raise PlanFormatError(f"GF({p}^{e}) is not a valid field", line, toks[2][1])
        if len(modulus) != e + 1 or modulus[-1] != 1 or not _is_irreducible(modulus, p):
            raise PlanFormatError("modulus is not a monic irreducible polynomial of degree e", line, toks[5][1])
        field = GaloisField(p, e, modulus, alpha)
        if not field.contains(alpha) or not _is_primitive(alpha, field):
            raise PlanFormatError("alpha is not a primitive element", line, toks[7][1])
        return field
    col = toks[1][1] if len(toks) > 1 else 1
    raise PlanFormatError("group must be 'none', 'cyclic <n>' or 'field <p> <e> modulus <..> alpha <..>'", line, col)


def _level_parser(group):
    if isinstance(group, GaloisField):

        def parse(token, line, col):
            if token == "inf":
                return INF
            x = _digits(token, line, col)
            if not group.contains(x):
                raise PlanFormatError(f"{token!r} is not an element of {group.describe()}", line, col)
            return x

    else:

        def parse(token, line, col):
            if token == "inf":
                return INF
            x = _int(token, line, col, "level")
            if group is not None and not group.contains(x):
                raise PlanFormatError(f"{token!r} is not an element of {group.describe()}", line, col)
            return x

    return parse


def loads_plan(text: str) -> Plan:
    src = _Lines(text)
    line, raw = src.next("header")
    toks = _tokens(raw)
    if len(toks) != 2 or toks[0][0] != FORMAT_TAG:
        raise PlanFormatError(f"first line must be '{FORMAT_TAG} {FORMAT_VERSION}'", line, 1)
    if _int(toks[1][0], line, toks[1][1], "version") != FORMAT_VERSION:
        raise PlanFormatError(f"unsupported format version {toks[1][0]}", line, toks[1][1])

    line, raw = src.next("group")
    toks = _tokens(raw)
    _keyword(toks, "group", line)
    group = _parse_group(toks, line)
    parse_level = _level_parser(group)

    header = {}
    for key in ("factors", "blocks", "size"):
        line, raw = src.next(key)
        toks = _tokens(raw)
        _keyword(toks, key, line)
        if len(toks) != 2:
            raise PlanFormatError(f"'{key}' takes exactly one integer", line, toks[0][1])
        header[key] = _int(toks[1][0], line, toks[1][1], key)
        if header[key] < 1:
            raise PlanFormatError(f"'{key}' must be positive", line, toks[1][1])
    m, nblocks, k = header["factors"], header["blocks"], header["size"]

    names, level_sets, allowed = [], [], []
    for _ in range(m):
        line, raw = src.next("factor declaration")
        toks = _tokens(raw)
        _keyword(toks, "factor", line)
        if len(toks) < 4 or toks[2][0] != "levels":
            raise PlanFormatError("expected 'factor <name> levels <level> ...'", line, toks[0][1])
        levels = []
        for tok, col in toks[3:]:
            x = parse_level(tok, line, col)
            if x in levels:
                raise PlanFormatError(f"level {tok!r} declared twice", line, col)
            levels.append(x)
        names.append(toks[1][0])
        level_sets.append(tuple(levels))
        allowed.append(set(levels))

    classes = None
    if src.peek_keyword() == "classes":
        line, raw = src.next("classes")
        toks = _tokens(raw)
        if len(toks) != m + 1:
            raise PlanFormatError(f"'classes' needs one entry per factor ({m})", line, toks[0][1])
        classes = tuple(_int(t, line, c, "class") for t, c in toks[1:])

    blocks = []
    for b in range(nblocks):
        line, raw = src.next(f"block {b + 1}")
        toks = _tokens(raw)
        _keyword(toks, "block", line)
        if len(toks) < 2 or _int(toks[1][0], line, toks[1][1], "block id") != b + 1:
            raise PlanFormatError(f"expected block id {b + 1}", line, toks[1][1] if len(toks) > 1 else 1)
        plots, current = [], []
        for tok, col in toks[2:] + [("|", None)]:
            if tok == "|":
                if len(current) != m:
                    raise PlanFormatError(
                        f"plot {len(plots) + 1} has {len(current)} levels, expected {m}", line, col or len(raw) + 1
                    )
                plots.append(tuple(current))
                current = []
                continue
            i = len(current)
            if i >= m:
                raise PlanFormatError(f"plot {len(plots) + 1} has more than {m} levels", line, col)
            x = parse_level(tok, line, col)
            if x not in allowed[i]:
                raise PlanFormatError(f"level {tok!r} is not declared for factor {names[i]}", line, col)
            current.append(x)
        if len(plots) != k:
            raise PlanFormatError(f"block {b + 1} has {len(plots)} plots, expected {k}", line, 1)
        blocks.append(tuple(zip(*plots)))
    if src.pos < len(src.items):
        line, raw = src.items[src.pos]
        raise PlanFormatError(f"unexpected content after {nblocks} blocks", line, 1)
    return Plan(tuple(level_sets), tuple(blocks), tuple(names), group=group, classes=classes)


def _guess_level(token: str, line: int, col: int):
    if token == "inf":
        return INF
    if "," in token:
        return _digits(token, line, col)
    return _int(token, line, col, "level")


def _level_key(x):
    return (0, ()) if x is INF else (1, x if isinstance(x, tuple) else (x,))


def loads_flat(text: str) -> Plan:
    """Read the flat plot-per-line format; level sets are the levels that occur."""
    src = _Lines(text)
    line, raw = src.next("header")
    head = raw.split("\t")
    if head[0].strip() != "block" or len(head) < 2:
        raise PlanFormatError("header must be 'block<TAB>F1<TAB>...'", line, 1)
    names = [h.strip() for h in head[1:]]
    m = len(names)
    order, plots = [], {}
    while src.pos < len(src.items):
        line, raw = src.next("plot")
        cells = raw.split("\t")
        if len(cells) != m + 1:
            raise PlanFormatError(f"expected {m + 1} tab-separated cells, got {len(cells)}", line, 1)
        col = 1
        cols = []
        for cell in cells:
            cols.append(col)
            col += len(cell) + 1
        bid = cells[0].strip()
        if bid not in plots:
            order.append(bid)
            plots[bid] = []
        plots[bid].append(tuple(_guess_level(c.strip(), line, cc) for c, cc in zip(cells[1:], cols[1:])))
    if not order:
        raise PlanFormatError("no plots", line, 1)
    sizes = {len(plots[b]) for b in order}
    if len(sizes) != 1:
        raise PlanFormatError(f"blocks have different sizes {sorted(sizes)}", line, 1)
    level_sets = tuple(
        tuple(sorted({p[i] for b in order for p in plots[b]}, key=_level_key)) for i in range(m)
    )
    blocks = tuple(tuple(zip(*plots[b])) for b in order)
    return Plan(level_sets, blocks, tuple(names))


def read_plan(path, flat: bool | None = None) -> Plan:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if flat is None:
        flat = not text.lstrip().startswith(FORMAT_TAG)
    return loads_flat(text) if flat else loads_plan(text)


def dumps_oa(oa: OrthogonalArray) -> str:
    lines = [
        f"{OA_TAG} {FORMAT_VERSION}",
        f"# runs={oa.n_runs} rows={oa.n_rows} symbols={oa.k} strength={oa.strength}",
        "symbols " + " ".join(format_level(s) for s in oa.symbols),
    ]
    for row in oa.rows:
        lines.append("row " + " ".join(format_level(s) for s in row))
    return "\n".join(lines) + "\n"


def loads_oa(text: str) -> OrthogonalArray:
    """Symbols are kept as their string tokens; only their declared order matters."""
    src = _Lines(text)
    line, raw = src.next("header")
    toks = _tokens(raw)
    if len(toks) != 2 or toks[0][0] != OA_TAG:
        raise PlanFormatError(f"first line must be '{OA_TAG} {FORMAT_VERSION}'", line, 1)
    line, raw = src.next("symbols")
    toks = _tokens(raw)
    _keyword(toks, "symbols", line)
    symbols = tuple(t for t, _ in toks[1:])
    if not symbols or len(set(symbols)) != len(symbols):
        raise PlanFormatError("symbols must be nonempty and distinct", line, 1)
    known = set(symbols)
    rows = []
    width = None
    while src.pos < len(src.items):
        line, raw = src.next("row")
        toks = _tokens(raw)
        _keyword(toks, "row", line)
        row = []
        for tok, col in toks[1:]:
            if tok not in known:
                raise PlanFormatError(f"undeclared symbol {tok!r}", line, col)
            row.append(tok)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise PlanFormatError(f"row has {len(row)} entries, expected {width}", line, 1)
        rows.append(tuple(row))
    if not rows:
        raise PlanFormatError("array has no rows", line, 1)
    return OrthogonalArray(tuple(rows), symbols)


def read_oa(path) -> OrthogonalArray:
    with open(path, encoding="utf-8") as fh:
        return loads_oa(fh.read())


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
