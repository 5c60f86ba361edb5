"""Flat-file formats: PointSet JSON and TSV, tree JSON, recursion-trace JSON."""

from __future__ import annotations

import json
from pathlib import Path

from .geometry import PointSet
from .partition import PartitionTree

FORMAT = "minsat-v1"


def pointset_to_json(P: PointSet) -> dict:
    d = {"format": FORMAT, "kind": P.kind, "points": [[p.x, p.y] for p in P]}
    gen = (P.meta or {}).get("gen")
    if gen:
        d["gen"] = gen
    return d


def pointset_from_json(d: dict) -> PointSet:
    if d.get("format") != FORMAT:
        raise ValueError(f"expected format {FORMAT!r}, got {d.get('format')!r}")
    kind = d.get("kind", "instance")
    if kind not in ("instance", "solution", "union"):
        raise ValueError(f"unknown kind {kind!r}")
    meta = {"gen": d["gen"]} if "gen" in d else None
    return PointSet([tuple(p) for p in d["points"]], kind=kind, meta=meta)


def dumps_tsv(P: PointSet, header: bool = False) -> str:
    lines = []
    if header:
        lines.append(f"# {FORMAT} kind={P.kind}")
        gen = (P.meta or {}).get("gen")
        if gen:
            lines.append("# gen " + json.dumps(gen, sort_keys=True))
    lines += [f"{p.x}\t{p.y}" for p in P]
    return "\n".join(lines) + "\n"


def loads_tsv(text: str, kind: str | None = None) -> PointSet:
    pts, meta, found_kind = [], None, None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith(FORMAT) and "kind=" in body:
                found_kind = body.split("kind=", 1)[1].split()[0]
            elif body.startswith("gen "):
                meta = {"gen": json.loads(body[4:])}
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        if len(parts) != 2:
            raise ValueError(f"bad TSV line: {raw!r}")
        pts.append((int(parts[0]), int(parts[1])))
    return PointSet(pts, kind=kind or found_kind or "instance", meta=meta)


def dumps(P: PointSet, fmt: str = "json", header: bool = False) -> str:
    if fmt == "tsv":
        return dumps_tsv(P, header)
    return json.dumps(pointset_to_json(P), sort_keys=True) + "\n"


def loads(text: str, kind: str | None = None) -> PointSet:
    """Parse JSON or TSV, detected by the first non-blank character."""
    if text.lstrip().startswith("{"):
        P = pointset_from_json(json.loads(text))
        return P.with_kind(kind) if kind else P
    return loads_tsv(text, kind)


def guess_format(path: str | Path) -> str:
    return "tsv" if str(path).endswith((".tsv", ".txt")) else "json"


def read_pointset(path: str | Path, kind: str | None = None) -> PointSet:
    return loads(Path(path).read_text(), kind)


def write_pointset(P: PointSet, path: str | Path, fmt: str | None = None, header: bool = False) -> None:
    Path(path).write_text(dumps(P, fmt or guess_format(path), header))


def tree_to_json(T: PartitionTree) -> str:
    return json.dumps(T.to_json(), sort_keys=True)


def tree_from_json(text: str, c: int | None = None) -> PartitionTree:
    return PartitionTree.from_json(json.loads(text), c)


def trace_to_json(trace) -> str:
    return json.dumps(trace.to_json(), sort_keys=True)
