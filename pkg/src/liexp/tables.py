"""Text, CSV, LaTeX and JSON renderings of the exponent tables."""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import asdict, dataclass

from .arith import OddPrime
from .bounds import su_lower, su_upper_closed, su_upper_recursive
from .exceptional import TableRow

FORMATS = ("text", "csv", "latex", "json")

EXC_COLUMNS = ("group", "p", "exponent", "lower", "upper", "factor", "reference", "mode")
SU_COLUMNS = ("n", "lower", "upper_recursive", "upper_closed", "exact")


@dataclass(frozen=True)
class DisplayRow:
    group: str
    p: str
    exponent: str
    lower: int
    upper: int | None
    factor: str
    reference: str
    mode: str


def _exponent(lo: int, hi) -> str:
    if hi is None or hi == float("inf"):
        return f">={lo}"
    return ",".join(str(v) for v in range(lo, int(hi) + 1))


def display_rows(rows: list[TableRow], symbolic: bool = True) -> list[DisplayRow]:
    """Flatten table rows, printing identical F4 and E6 rows once as "F4,E6"."""
    out: list[DisplayRow] = []
    for r in rows:
        iv = r.interval
        d = DisplayRow(
            group=r.group,
            p=r.prime_label(symbolic),
            exponent=_exponent(iv.lower, iv.upper),
            lower=iv.lower,
            upper=int(iv.upper) if iv.bounded else None,
            factor=r.factor_label(symbolic),
            reference=", ".join(r.references),
            mode=r.mode,
        )
        if r.group == "E6":
            twin = next((i for i, o in enumerate(out) if o.group == "F4" and
                         (o.p, o.exponent, o.factor, o.reference) == (d.p, d.exponent, d.factor, d.reference)),
                        None)
            if twin is not None:
                out[twin] = DisplayRow(**{**asdict(out[twin]), "group": "F4,E6"})
                continue
        out.append(d)
    return out


def _aligned(header: tuple[str, ...], body: list[tuple[str, ...]], breaks: set[int] = frozenset()) -> str:
    widths = [max(len(h), *(len(row[i]) for row in body)) if body else len(h) for i, h in enumerate(header)]

    def line(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()

    out = [line(header), "-" * len(line(["-" * w for w in widths]))]
    for i, row in enumerate(body):
        if i in breaks:
            out.append("")
        out.append(line(row))
    return "\n".join(out) + "\n"


def _group_breaks(rows: list[DisplayRow]) -> set[int]:
    return {i for i in range(1, len(rows)) if rows[i].group != rows[i - 1].group}


def _csv(header, body) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(body)
    return buf.getvalue()


_TEX_GROUP = re.compile(r"([GFE])(\d)")


def _tex_space(s: str) -> str:
    s = re.sub(r"S\^(\d+)", r"S^{\1}", s)
    s = s.replace("B2(", "B_2(")
    s = re.sub(r"\bK(\d)", r"K_\1", s)
    s = s.replace(" x ", r"\times ")
    return f"${s}$"


def _tex_rows(rows: list[DisplayRow]) -> str:
    lines = [
        r"\begin{tabular}{cc|ccc}",
        r"$X$&$p$&$\exp_p(X)$&Factor&Reference\\",
    ]
    for i, r in enumerate(rows):
        if i == 0 or r.group != rows[i - 1].group:
            lines.append(r"\hline")
        group = _TEX_GROUP.sub(r"\1_\2", r.group)
        ref = r.reference.replace("SU(18)", r"$\mathrm{SU}(18)$")
        lines.append(f"${group}$&${r.p}$&${r.exponent}$&{_tex_space(r.factor)}&{ref}\\\\")
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"


def format_exceptional(rows: list[TableRow], fmt: str = "text", symbolic: bool = True) -> str:
    drows = display_rows(rows, symbolic)
    if fmt == "json":
        return json.dumps([asdict(r) for r in drows], indent=2) + "\n"
    if fmt == "latex":
        return _tex_rows(drows)
    if fmt == "csv":
        return _csv(EXC_COLUMNS, [(r.group, r.p, r.exponent, r.lower, "" if r.upper is None else r.upper,
                                   r.factor, r.reference, r.mode) for r in drows])
    if fmt == "text":
        header = ("X", "p", "exp_p(X)", "Factor", "Reference")
        return _aligned(header, [(r.group, r.p, r.exponent, r.factor, r.reference) for r in drows],
                        _group_breaks(drows))
    raise ValueError(f"unknown format {fmt!r}")


def parse_exceptional_csv(text: str) -> list[DisplayRow]:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(DisplayRow(
            group=rec["group"], p=rec["p"], exponent=rec["exponent"], lower=int(rec["lower"]),
            upper=int(rec["upper"]) if rec["upper"] else None, factor=rec["factor"],
            reference=rec["reference"], mode=rec["mode"],
        ))
    return rows


def parse_exceptional_json(text: str) -> list[DisplayRow]:
    return [DisplayRow(**d) for d in json.loads(text)]


# ---------------------------------------------------------------- SU(n) table

@dataclass(frozen=True)
class SURow:
    n: int
    lower: int
    upper_recursive: int
    upper_closed: int

    @property
    def exact(self) -> bool:
        return self.lower == min(self.upper_recursive, self.upper_closed)


def su_rows(p: OddPrime | int, max_n: int) -> list[SURow]:
    if max_n < 2:
        raise ValueError(f"max_n must be at least 2, got {max_n}")
    p = OddPrime.of(p)
    return [SURow(n, su_lower(p, n), su_upper_recursive(p, n), su_upper_closed(p, n))
            for n in range(2, max_n + 1)]


def format_su(rows: list[SURow], p: int, fmt: str = "text") -> str:
    body = [(r.n, r.lower, r.upper_recursive, r.upper_closed, "exact" if r.exact else "") for r in rows]
    if fmt == "json":
        return json.dumps([{**asdict(r), "exact": r.exact} for r in rows], indent=2) + "\n"
    if fmt == "csv":
        return _csv(SU_COLUMNS, body)
    if fmt == "latex":
        lines = [r"\begin{tabular}{r|ccc|c}",
                 rf"$n$&lower&recursive&closed&\\ \hline % p = {p}"]
        lines += [f"{n}&{lo}&{rec}&{cl}&{ex}\\\\" for n, lo, rec, cl, ex in body]
        lines.append(r"\end{tabular}")
        return "\n".join(lines) + "\n"
    if fmt == "text":
        header = ("n", "lower", "recursive", "closed", "")
        return _aligned(header, [tuple(map(str, row)) for row in body])
    raise ValueError(f"unknown format {fmt!r}")


def parse_su_csv(text: str) -> list[SURow]:
    return [SURow(int(r["n"]), int(r["lower"]), int(r["upper_recursive"]), int(r["upper_closed"]))
            for r in csv.DictReader(io.StringIO(text))]
