"""Readers and writers for the plain-text formats used by the CLI.

* matrix CSV: one row per line, comma separated; complex entries as ``a+bi``
* points CSV: ``x,y,z`` per line (an optional ``x,y,z`` header is skipped)
* roll-call CSV: header ``legislator_id,party,bill_id,vote``
* tensor text: ``n1 n2 n3`` then one entry per line, last index fastest
* grain population JSON: ``[{"birth_step": t, "points": [[x, y, z], ...]}, ...]``
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import IoError, ParseError
from .grains import Grain
from .rollcall import Vote, VoteRecord

ROLLCALL_HEADER = ["legislator_id", "party", "bill_id", "vote"]


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc


def parse_scalar(token: str) -> complex | float:
    tok = token.strip()
    if not tok:
        raise ParseError("empty matrix entry")
    try:
        if tok.endswith(("i", "j", "I", "J")):
            return complex(tok[:-1].replace("i", "j") + "j")
        return float(tok)
    except ValueError:
        raise ParseError(f"cannot parse matrix entry {token!r}") from None


def format_scalar(x) -> str:
    if isinstance(x, (complex, np.complexfloating)):
        re, im = float(x.real), float(x.imag)
        sign = "-" if math.copysign(1.0, im) < 0 else "+"
        return f"{re!r}{sign}{abs(im)!r}i"
    return repr(float(x))


def parse_matrix_csv(text: str) -> np.ndarray:
    rows = [line for line in text.splitlines() if line.strip()]
    if not rows:
        raise ParseError("matrix file is empty")
    values = [[parse_scalar(tok) for tok in line.split(",")] for line in rows]
    widths = {len(r) for r in values}
    if len(widths) != 1:
        raise ParseError(f"ragged matrix: row lengths {sorted(widths)}")
    if any(isinstance(v, complex) for r in values for v in r):
        return np.array(values, dtype=np.complex128)
    return np.array(values, dtype=np.float64)


def format_matrix_csv(A) -> str:
    A = np.asarray(A)
    return "".join(",".join(format_scalar(v) for v in row) + "\n" for row in A)


def read_matrix_csv(path) -> np.ndarray:
    return parse_matrix_csv(read_text(path))


def parse_points_csv(text: str) -> np.ndarray:
    lines = [line for line in text.splitlines() if line.strip()]
    if lines and lines[0].replace(" ", "").lower() == "x,y,z":
        lines = lines[1:]
    try:
        pts = np.array([[float(t) for t in line.split(",")] for line in lines], dtype=float)
    except ValueError as exc:
        raise ParseError(f"bad point coordinate: {exc}") from None
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ParseError("points file must have exactly three columns x,y,z")
    return pts


def parse_rollcall_csv(text: str) -> list[VoteRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("roll-call file is empty") from None
    if [h.strip().lower() for h in header] != ROLLCALL_HEADER:
        raise ParseError(f"roll-call header must be {','.join(ROLLCALL_HEADER)}, got {','.join(header)}")
    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) != 4:
            raise ParseError(f"line {lineno}: expected 4 fields, got {len(row)}")
        leg, party, bill, vote = (cell.strip() for cell in row)
        try:
            records.append(VoteRecord(leg, party, bill, Vote.parse(vote)))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return records


def format_rollcall_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ROLLCALL_HEADER)
    for r in records:
        w.writerow([r.legislator_id, r.party, r.bill_id, r.vote.name.lower()])
    return buf.getvalue()


def parse_tensor(text: str) -> np.ndarray:
    tokens = text.split()
    if len(tokens) < 3:
        raise ParseError("tensor file needs a 'n1 n2 n3' header")
    try:
        dims = tuple(int(t) for t in tokens[:3])
        values = np.array([float(t) for t in tokens[3:]])
    except ValueError as exc:
        raise ParseError(f"bad tensor file: {exc}") from None
    if min(dims) < 1:
        raise ParseError(f"tensor dimensions must be positive, got {dims}")
    if values.size != math.prod(dims):
        raise ParseError(f"expected {math.prod(dims)} entries for dims {dims}, got {values.size}")
    return values.reshape(dims)


def format_tensor(T) -> str:
    T = np.asarray(T, dtype=float)
    lines = [" ".join(str(n) for n in T.shape)]
    lines += [repr(float(v)) for v in T.ravel(order="C")]
    return "\n".join(lines) + "\n"


def parse_population(text: str) -> list[Grain]:
    try:
        data = json.loads(text)
        return [Grain(np.asarray(g["points"], dtype=float), int(g["birth_step"])) for g in data]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"bad grain population file: {exc}") from None


def population_to_json(grains) -> list[dict]:
    return [{"birth_step": g.birth_step, "points": g.points.tolist()} for g in grains]


def to_jsonable(obj):
    """Convert numpy containers to JSON types; NaN becomes ``null``."""
    if isinstance(obj, Mapping):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return format_scalar(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=False) + "\n"


def write_files_atomic(directory, files: Mapping[str, str]) -> None:
    """Write every file under ``directory`` or none of them.

    Contents go to temporary files in the same directory first and are
    renamed into place only after all writes succeeded.
    """
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create output directory {directory}: {exc.strerror or exc}") from exc
    blocked = [name for name in files if (directory / name).is_dir()]
    if blocked:
        raise IoError(f"cannot write {blocked[0]} in {directory}: a directory is in the way")
    staged = []
    placed = []
    try:
        for name, content in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=directory)
            staged.append((tmp, directory / name))
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(content)
        for tmp, final in staged:
            os.replace(tmp, final)
            placed.append(final)
    except OSError as exc:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        for final in placed:
            final.unlink(missing_ok=True)
        raise IoError(f"cannot write to {directory}: {exc.strerror or exc}") from exc
