"""Fact files in and relation files out.

Input relations live in ``<facts_dir>/<relation>.facts`` (tab-separated,
no header). Outputs go to ``<out_dir>/<relation>.csv`` sorted so that runs
are byte-for-byte reproducible.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .engine.collection import COUNT, PRESENCE, Collection, Monoid
from .errors import IoError, MalformedRow
from .frontend.ast import Program, RelationDecl

FACT_SUFFIXES = (".facts", ".csv", ".tsv")


@dataclass
class Dictionary:
    """String interning in first-seen order."""

    codes: dict[str, int] = field(default_factory=dict)
    strings: list[str] = field(default_factory=list)
    # (relation, column) pairs that carried encoded strings when loaded
    encoded_columns: set[tuple[str, int]] = field(default_factory=set)

    def encode(self, s: str) -> int:
        code = self.codes.get(s)
        if code is None:
            code = len(self.strings)
            self.codes[s] = code
            self.strings.append(s)
        return code

    def decode(self, code: int) -> str:
        return self.strings[code]


def _parse_int(field_text: str) -> int | None:
    try:
        return int(field_text)
    except ValueError:
        return None


def load_relation(
    path: str | Path,
    arity: int,
    dictionary: Dictionary,
    delimiter: str = "\t",
    has_header: bool = False,
    decl: RelationDecl | None = None,
    monoid: Monoid = PRESENCE,
) -> Collection:
    """Parse one fact file.

    A column is interned when it is declared ``symbol`` or when any of its
    fields is not an integer; the whole column is then encoded in first-seen
    order, so integers and strings never share codes. Duplicates collapse
    under Presence and accumulate under Count.
    """
    path = Path(path)
    symbolic = set(decl.symbol_columns()) if decl is not None else set()
    name = decl.name if decl is not None else path.stem
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror}") from exc
    records: list[tuple[int, list[str]]] = []
    with handle:
        reader = csv.reader(handle, delimiter=delimiter, quoting=csv.QUOTE_NONE)
        for lineno, fields in enumerate(reader, start=1):
            if has_header and lineno == 1:
                continue
            if not fields or fields == [""]:
                continue
            if len(fields) != arity:
                raise MalformedRow(f"expected {arity} fields, found {len(fields)}", str(path), lineno)
            records.append((lineno, fields))
    encoded = set(symbolic)
    for _, fields in records:
        encoded |= {c for c, text in enumerate(fields) if c not in encoded and _parse_int(text.strip()) is None}
    dictionary.encoded_columns |= {(name, c) for c in encoded}
    out = Collection(monoid)
    for _, fields in records:
        row = tuple(dictionary.encode(t) if c in encoded else int(t.strip()) for c, t in enumerate(fields))
        out.add(row, monoid.one)
    return out


def propagate_encoding(program: Program, dictionary: Dictionary) -> None:
    """Mark derived columns that carry dictionary codes.

    A head column is encoded when its variable is bound by an encoded column
    of a positive body atom. COUNT and SUM results are plain numbers.
    """
    marked = dictionary.encoded_columns
    for decl in program.relations.values():
        marked |= {(decl.name, c) for c in decl.symbol_columns()}
    changed = True
    while changed:
        changed = False
        for rule in program.rules:
            coded = set()
            for atom in rule.positive:
                for c, t in enumerate(atom.terms):
                    if (atom.relation, c) in marked and hasattr(t, "name"):
                        coded.add(t.name)
            agg = rule.aggregate
            for c, t in enumerate(rule.head.terms):
                if agg is not None and c == agg.position:
                    if agg.function in ("COUNT", "SUM") or len(agg.over) != 1:
                        continue
                    t = agg.over[0]
                key = (rule.head.relation, c)
                if key not in marked and getattr(t, "name", None) in coded:
                    marked.add(key)
                    changed = True


def resolve_fact_file(facts_dir: str | Path, relation: str) -> Path:
    candidates = [Path(facts_dir) / f"{relation}{suffix}" for suffix in FACT_SUFFIXES]
    found = [p for p in candidates if p.is_file()]
    if not found:
        raise IoError(f"no fact file for input relation {relation!r} in {facts_dir}")
    if len(found) > 1:
        raise IoError(f"ambiguous fact files for {relation!r}: {', '.join(p.name for p in found)}")
    return found[0]


def load_inputs(
    program: Program,
    facts_dir: str | Path | None,
    dictionary: Dictionary,
    delimiter: str = "\t",
    has_header: bool = False,
    count_diffs: bool = False,
) -> dict[str, Collection]:
    """Every ``.input`` relation must resolve to exactly one file."""
    monoid = COUNT if count_diffs else PRESENCE
    inputs: dict[str, Collection] = {}
    if not program.inputs:
        return inputs
    if facts_dir is None:
        raise IoError("the program declares inputs but no facts directory was given")
    for rel in program.inputs:
        decl = program.relations[rel]
        path = resolve_fact_file(facts_dir, rel)
        inputs[rel] = load_relation(path, decl.arity, dictionary, delimiter, has_header, decl, monoid)
    return inputs


def _sort_key(row: tuple) -> tuple:
    return tuple((0, v, "") if isinstance(v, int) else (1, 0, v) for v in row)


def format_rows(
    rows: set[tuple],
    decl: RelationDecl | None,
    dictionary: Dictionary | None,
    delimiter: str = "\t",
) -> str:
    name = decl.name if decl is not None else ""
    decode_cols: set[int] = set()
    if decl is not None and dictionary is not None:
        decode_cols = set(decl.symbol_columns())
        decode_cols |= {c for r, c in dictionary.encoded_columns if r == name}
    decoded = []
    for row in rows:
        decoded.append(
            tuple(dictionary.decode(v) if i in decode_cols and dictionary else v for i, v in enumerate(row))
        )
    decoded.sort(key=_sort_key)
    return "".join(delimiter.join(str(v) for v in row) + "\n" for row in decoded)


def write_relation(
    rows: set[tuple] | Collection,
    path: str | Path,
    decl: RelationDecl | None = None,
    dictionary: Dictionary | None = None,
    delimiter: str = "\t",
) -> None:
    """Write one sorted row per tuple; an empty relation gives an empty file."""
    if isinstance(rows, Collection):
        if rows.monoid.lattice:
            rows = {g + (v,) for g, v in rows}
        else:
            rows = rows.tuples()
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(format_rows(rows, decl, dictionary, delimiter), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from exc


def write_outputs(
    outputs: dict[str, set[tuple]],
    out_dir: str | Path,
    program: Program,
    dictionary: Dictionary | None,
    delimiter: str = "\t",
) -> list[Path]:
    if dictionary is not None:
        propagate_encoding(program, dictionary)
    written = []
    for rel in sorted(outputs):
        path = Path(out_dir) / f"{rel}.csv"
        write_relation(outputs[rel], path, program.relations.get(rel), dictionary, delimiter)
        written.append(path)
    return written
