"""Text documents exchanged through the command line.

Two formats live here: the table document (a dense rank table plus its
declared interval shape and optional cosmetic rank labels) and the report
document (verdicts, decomposition, and a replayable witness).  Both have a
plain-text form and a JSON mirror with identical content; printing a
parsed canonical document reproduces it byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .chains import DiscreteTable
from .classify import Witness
from .domain import IntervalSpec, PLBijection


class TableFormatError(ValueError):
    """Malformed table document; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class TableDocument:
    interval: IntervalSpec
    table: DiscreteTable
    labels: Optional[tuple[str, ...]] = None


def format_table(doc: TableDocument) -> str:
    lines = [
        f"arity {doc.table.arity}",
        "input_sizes " + " ".join(str(s) for s in doc.table.input_sizes),
        f"output_size {doc.table.output_size}",
        f"interval {doc.interval.name}",
    ]
    if doc.labels:
        lines.append("labels " + " ".join(doc.labels))
    for cell in doc.table.cells():
        lines.append(" ".join(str(r) for r in cell) + " -> " + str(doc.table[cell]))
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> TableDocument:
    header: dict = {}
    cells: dict = {}
    labels = None
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "->" in line:
            left, _, right = line.partition("->")
            try:
                cell = tuple(int(t) for t in left.split())
                value = int(right.strip())
            except ValueError:
                raise TableFormatError("malformed cell line", lineno) from None
            if cell in cells:
                raise TableFormatError(f"duplicate cell {cell}", lineno)
            cells[cell] = (value, lineno)
            continue
        key, _, rest = line.partition(" ")
        if key == "arity":
            header["arity"] = _int_field(rest, lineno)
        elif key == "input_sizes":
            try:
                header["input_sizes"] = tuple(int(t) for t in rest.split())
            except ValueError:
                raise TableFormatError("malformed input_sizes", lineno) from None
        elif key == "output_size":
            header["output_size"] = _int_field(rest, lineno)
        elif key == "interval":
            try:
                header["interval"] = IntervalSpec.from_name(rest.strip())
            except ValueError as exc:
                raise TableFormatError(str(exc), lineno) from None
        elif key == "labels":
            labels = tuple(rest.split())
        else:
            raise TableFormatError(f"unknown header {key!r}", lineno)
    for name in ("arity", "input_sizes", "output_size", "interval"):
        if name not in header:
            raise TableFormatError(f"missing header {name!r}", lineno or 1)
    sizes = header["input_sizes"]
    if len(sizes) != header["arity"]:
        raise TableFormatError("arity does not match input_sizes", 1)
    entries = []
    import itertools

    for cell in itertools.product(*(range(s) for s in sizes)):
        if cell not in cells:
            raise TableFormatError(f"missing cell {' '.join(map(str, cell))}", lineno or 1)
        entries.append(cells[cell][0])
    if len(cells) != len(entries):
        extra = next(iter(set(cells) - set(itertools.product(*(range(s) for s in sizes)))))
        raise TableFormatError(f"cell {extra} outside the declared chains", cells[extra][1])
    try:
        table = DiscreteTable(sizes, header["output_size"], tuple(entries))
    except ValueError as exc:
        raise TableFormatError(str(exc), 1) from None
    return TableDocument(header["interval"], table, labels)


def _int_field(text: str, lineno: int) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise TableFormatError("expected an integer", lineno) from None


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def _scalar_str(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


def _scalar_parse(token: str):
    if "/" in token:
        num, den = token.split("/")
        return Fraction(int(num), int(den))
    return int(token)


def _tuple_str(t) -> str:
    return " ".join(_scalar_str(v) for v in t)


def _tuples_str(ts) -> str:
    return " | ".join(_tuple_str(t) for t in ts)


def _tuples_parse(text: str):
    text = text.strip()
    if not text:
        return ()
    return tuple(
        tuple(_scalar_parse(tok) for tok in part.split()) for part in text.split("|")
    )


def _transform_str(phi: PLBijection) -> str:
    return " ".join(f"{_scalar_str(x)}:{_scalar_str(y)}" for x, y in phi.breakpoints)


def _transforms_str(ts) -> str:
    return " ; ".join(_transform_str(t) for t in ts)


def _transforms_parse(text: str):
    text = text.strip()
    if not text:
        return ()
    out = []
    for part in text.split(";"):
        pts = []
        for pair in part.split():
            xs, ys = pair.split(":")
            pts.append((_scalar_parse(xs), _scalar_parse(ys)))
        out.append(PLBijection(tuple(pts)))
    return tuple(out)


def witness_to_dict(w: Witness) -> dict:
    return {
        "kind": w.kind,
        "interval": w.interval.name,
        "inputs": _tuples_str(w.inputs),
        "images": _tuples_str(w.images),
        "outputs": _tuple_str(w.outputs),
        "transforms": _transforms_str(w.transforms),
        "sizes": _tuple_str(w.sizes),
        "detail": w.detail,
    }


def witness_from_dict(d: dict) -> Witness:
    return Witness(
        kind=d["kind"],
        interval=IntervalSpec.from_name(d["interval"]),
        inputs=_tuples_parse(d.get("inputs", "")),
        images=_tuples_parse(d.get("images", "")),
        outputs=tuple(
            _scalar_parse(tok) for tok in d.get("outputs", "").split()
        ),
        transforms=_transforms_parse(d.get("transforms", "")),
        sizes=tuple(int(tok) for tok in d.get("sizes", "").split()),
        detail=d.get("detail", ""),
    )


@dataclass(frozen=True)
class ReportDocument:
    """Deterministic classification or falsification report."""

    tool: str
    source: str  # "table <path>" or "function <name>"
    interval: str
    seed: Optional[int]
    verdicts: tuple[tuple[str, str], ...] = ()
    decomposition: tuple[str, ...] = ()
    witness: Optional[Witness] = None
    notes: tuple[str, ...] = ()

    def to_text(self) -> str:
        lines = [f"tool: {self.tool}", f"source: {self.source}", f"interval: {self.interval}"]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        if self.verdicts:
            lines.append("verdicts:")
            lines.extend(f"  {name}: {value}" for name, value in self.verdicts)
        if self.decomposition:
            lines.append("decomposition:")
            lines.extend(f"  {entry}" for entry in self.decomposition)
        if self.witness is not None:
            lines.append("witness:")
            for key, value in witness_to_dict(self.witness).items():
                lines.append(f"  {key}: {value}")
        if self.notes:
            lines.append("notes:")
            lines.extend(f"  {note}" for note in self.notes)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "tool": self.tool,
            "source": self.source,
            "interval": self.interval,
            "seed": self.seed,
            "verdicts": [list(v) for v in self.verdicts],
            "decomposition": list(self.decomposition),
            "witness": witness_to_dict(self.witness) if self.witness else None,
            "notes": list(self.notes),
        }
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def parse_report(text: str) -> ReportDocument:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        payload = json.loads(text)
        witness = witness_from_dict(payload["witness"]) if payload.get("witness") else None
        return ReportDocument(
            tool=payload.get("tool", ""),
            source=payload.get("source", ""),
            interval=payload.get("interval", ""),
            seed=payload.get("seed"),
            verdicts=tuple((a, b) for a, b in payload.get("verdicts", [])),
            decomposition=tuple(payload.get("decomposition", [])),
            witness=witness,
            notes=tuple(payload.get("notes", [])),
        )
    header: dict = {}
    verdicts: list = []
    decomposition: list = []
    notes: list = []
    witness_fields: dict = {}
    section = None
    for raw in text.splitlines():
        if not raw.strip():
            continue
        if not raw.startswith("  "):
            key, _, value = raw.partition(":")
            key = key.strip()
            value = value.strip()
            if key in ("verdicts", "decomposition", "witness", "notes"):
                section = key
            else:
                header[key] = value
                section = None
            continue
        line = raw.strip()
        if section == "verdicts":
            name, _, value = line.partition(":")
            verdicts.append((name.strip(), value.strip()))
        elif section == "decomposition":
            decomposition.append(line)
        elif section == "witness":
            name, _, value = line.partition(":")
            witness_fields[name.strip()] = value.strip()
        elif section == "notes":
            notes.append(line)
    witness = witness_from_dict(witness_fields) if witness_fields else None
    seed = int(header["seed"]) if "seed" in header else None
    return ReportDocument(
        tool=header.get("tool", ""),
        source=header.get("source", ""),
        interval=header.get("interval", ""),
        seed=seed,
        verdicts=tuple(verdicts),
        decomposition=tuple(decomposition),
        witness=witness,
        notes=tuple(notes),
    )
