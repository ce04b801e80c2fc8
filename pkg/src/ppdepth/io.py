"""Line-delimited realization files and CSV writers.

A realization file holds one JSON object per line with exactly the fields
``id``, ``t1``, ``t2`` and ``events``; every record shares one ``(t1, t2)``.
Numbers in CSV output carry 12 significant digits.
"""
from __future__ import annotations

import io
import json
from typing import Iterable, Sequence, TextIO

from .depth import DepthReport
from .geometry import PointProcess, TimeDomain

FIELDS = ("id", "t1", "t2", "events")
DEPTH_HEADER = ("id", "k", "d1", "w", "d_cond", "d_overall", "rank")
CONTOUR_HEADER = ("u1", "u2", "u3", "ilr_x", "ilr_y", "depth")
CONVERGENCE_HEADER = ("n", "M", "sup_error")


class DataError(ValueError):
    """Malformed input data (exit code 2 at the command line)."""


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return f"{float(x):.12g}"


def write_realizations(records: Iterable[tuple[str, PointProcess]], out: TextIO) -> None:
    for rid, p in records:
        rec = {"id": str(rid), "t1": p.domain.t1, "t2": p.domain.t2,
               "events": [float(s) for s in p.events]}
        out.write(json.dumps(rec) + "\n")


def realizations_to_string(records: Iterable[tuple[str, PointProcess]]) -> str:
    buf = io.StringIO()
    write_realizations(records, buf)
    return buf.getvalue()


def read_realizations(lines: Iterable[str]) -> tuple[list[str], list[PointProcess]]:
    ids: list[str] = []
    sample: list[PointProcess] = []
    domain = None
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(rec, dict) or set(rec) != set(FIELDS):
            raise DataError(f"line {lineno}: record must have exactly the fields {FIELDS}")
        try:
            d = TimeDomain(rec["t1"], rec["t2"])
            p = PointProcess(d, rec["events"])
        except (TypeError, ValueError) as exc:
            raise DataError(f"line {lineno}: {exc}") from None
        if domain is None:
            domain = d
        elif d != domain:
            raise DataError(f"line {lineno}: domain [{d.t1}, {d.t2}] differs from "
                            f"[{domain.t1}, {domain.t2}]")
        ids.append(str(rec["id"]))
        sample.append(p)
    return ids, sample


def load_realizations(path: str) -> tuple[list[str], list[PointProcess]]:
    with open(path, encoding="utf-8") as fh:
        return read_realizations(fh)


def write_csv(header: Sequence[str], rows: Iterable[Sequence], out: TextIO) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(x) for x in row) + "\n")


def depth_csv(reports: Sequence[DepthReport]) -> str:
    buf = io.StringIO()
    rows = ((r.id, r.k, r.d1, r.w, r.d_cond, r.d_overall, r.rank)
            for r in sorted(reports, key=lambda r: r.rank))
    write_csv(DEPTH_HEADER, rows, buf)
    return buf.getvalue()


def read_depth_csv(text: str) -> list[dict]:
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    out = []
    for line in lines[1:]:
        row = dict(zip(header, line.split(",")))
        for key in ("k", "rank"):
            row[key] = int(row[key])
        for key in ("d1", "w", "d_cond", "d_overall"):
            row[key] = float(row[key])
        out.append(row)
    return out


def table_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    write_csv(header, rows, buf)
    return buf.getvalue()
