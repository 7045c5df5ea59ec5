"""TSV rendering of score records with deterministic row order."""

from __future__ import annotations

import io
import math
from typing import IO, Iterable, NamedTuple

from .kernel import KernelRecords
from .scoring import CLASS_NAMES, MAXIMAL_REPEAT, MINIMAL_RARE
from .text_index import Text

HEADER = ("class", "string", "length", "count", "expectation", "variance", "zscore", "fstar")


class Row(NamedTuple):
    cls: int
    word: bytes  # codes, so byte order equals rendered-string order
    m: int
    f: int
    E: float
    V: float
    z: float
    fstar: int


def rows_from(records) -> list[Row]:
    """Scored rows from either engine's output; unscored records are dropped."""
    if isinstance(records, KernelRecords):
        out = []
        codes = records.codes
        for i in range(len(records)):
            if math.isnan(records.z[i]):
                continue
            o = int(records.off[i])
            m = int(records.length[i])
            out.append(Row(int(records.cls[i]), codes[o:o + m].tobytes(), m, int(records.f[i]),
                           float(records.E[i]), float(records.V[i]), float(records.z[i]), int(records.fstar[i])))
        return out
    return [Row(r.cls, bytes(r.codes), r.m, r.f, r.E, r.V, r.z, r.fstar)
            for r in records if r.scored]


def order_rows(rows: Iterable[Row], mode: str) -> list[Row]:
    rows = list(rows)
    if mode == "all":
        return sorted(rows, key=lambda r: (r.m, r.word, r.cls))
    over = [r for r in rows if r.cls == MAXIMAL_REPEAT]
    under = [r for r in rows if r.cls != MAXIMAL_REPEAT]
    over.sort(key=lambda r: (-r.z, r.m, r.word))
    under.sort(key=lambda r: (r.z, r.m, r.word, r.cls))
    if mode == "over":
        return over
    if mode == "under":
        return under
    return over + under


def class_label(row: Row) -> str:
    if row.cls == MINIMAL_RARE and row.f == 1:
        return "minimalUnique"
    return CLASS_NAMES[row.cls]


def write_tsv(out: IO[str], rows: Iterable[Row], text: Text, precision: int = 6) -> int:
    fmt = f".{precision}g"
    out.write("\t".join(HEADER) + "\n")
    n = 0
    for r in rows:
        out.write(f"{class_label(r)}\t{text.render(r.word)}\t{r.m}\t{r.f}\t"
                  f"{r.E:{fmt}}\t{r.V:{fmt}}\t{r.z:{fmt}}\t{r.fstar}\n")
        n += 1
    return n


def render_report(records, mode: str, text: Text, precision: int = 6) -> str:
    buf = io.StringIO()
    write_tsv(buf, order_rows(rows_from(records), mode), text, precision)
    return buf.getvalue()
