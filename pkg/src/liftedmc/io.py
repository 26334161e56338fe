"""Line-oriented text formats for problems, labelings, attributions and paths.

Problem file (``lmp 1``)::

    lmp 1
    n <node_count>
    c <node> <z> <y> <x>      # optional, one per node
    e <u> <v> <weight>        # local edge
    l <u> <v> <weight>        # lifted edge

Blank lines and lines starting with ``#`` are ignored. Weights are written
with 9 significant digits, so ``serialize(parse(serialize(p)))`` is
byte-identical to ``serialize(p)``.
"""
from __future__ import annotations

import os
import tempfile
from typing import Mapping, Sequence

from .graph import Graph
from .lifting import PathEvidence
from .objective import LiftedProblem, ProblemError, normalize_labels

FORMAT_VERSION = "1"


class FormatError(ValueError):
    """Malformed file content; ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


def fmt_float(x: float) -> str:
    return format(float(x), ".9g")


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line.split()


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def _float(token, lineno):
    try:
        return float(token)
    except ValueError:
        raise FormatError(f"expected a number, got {token!r}", lineno) from None


def serialize_problem(problem: LiftedProblem) -> str:
    out = [f"lmp {FORMAT_VERSION}", f"n {problem.node_count}"]
    if problem.coordinates is not None:
        out.extend(f"c {v} {z} {y} {x}" for v, (z, y, x) in enumerate(problem.coordinates))
    out.extend(
        f"e {u} {v} {fmt_float(w)}" for (u, v), w in zip(problem.graph.edges, problem.local_weights)
    )
    out.extend(
        f"l {u} {v} {fmt_float(w)}" for (u, v), w in zip(problem.lifted_edges, problem.lifted_weights)
    )
    return "\n".join(out) + "\n"


def parse_problem(text: str) -> LiftedProblem:
    node_count = None
    header_seen = False
    coords: dict[int, tuple[int, int, int]] = {}
    local: dict[tuple[int, int], tuple[float, int]] = {}
    lifted: dict[tuple[int, int], tuple[float, int]] = {}
    for lineno, tok in _lines(text):
        key = tok[0]
        if not header_seen:
            if key != "lmp" or len(tok) != 2:
                raise FormatError("expected header 'lmp <version>'", lineno)
            if tok[1] != FORMAT_VERSION:
                raise FormatError(f"unknown format version {tok[1]!r}", lineno)
            header_seen = True
            continue
        if key == "n":
            if node_count is not None or len(tok) != 2:
                raise FormatError("malformed or repeated node count line", lineno)
            (node_count,) = _ints(tok[1:], lineno)
            if node_count < 1:
                raise FormatError("node count must be >= 1", lineno)
            continue
        if node_count is None:
            raise FormatError(f"{key!r} line before node count", lineno)
        if key == "c":
            if len(tok) != 5:
                raise FormatError("coordinate line needs 'c <node> <z> <y> <x>'", lineno)
            v, z, y, x = _ints(tok[1:], lineno)
            if not 0 <= v < node_count or v in coords:
                raise FormatError(f"bad or repeated coordinate node {v}", lineno)
            coords[v] = (z, y, x)
        elif key in ("e", "l"):
            if len(tok) != 4:
                raise FormatError(f"edge line needs '{key} <u> <v> <weight>'", lineno)
            u, v = _ints(tok[1:3], lineno)
            w = _float(tok[3], lineno)
            if u == v:
                raise FormatError(f"self-loop ({u}, {v})", lineno)
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise FormatError(f"endpoint out of range ({u}, {v})", lineno)
            pair = (min(u, v), max(u, v))
            table = local if key == "e" else lifted
            if pair in table:
                raise FormatError(f"duplicate edge {pair} (first on line {table[pair][1]})", lineno)
            table[pair] = (w, lineno)
        else:
            raise FormatError(f"unknown line type {key!r}", lineno)
    if not header_seen:
        raise FormatError("missing 'lmp' header")
    if node_count is None:
        raise FormatError("missing node count line")
    for pair, (_, lineno) in lifted.items():
        if pair in local:
            raise FormatError(
                f"lifted edge {pair} duplicates local edge on line {local[pair][1]}", lineno
            )
    if coords and len(coords) != node_count:
        raise FormatError(f"coordinates given for {len(coords)} of {node_count} nodes")
    try:
        return LiftedProblem(
            Graph(node_count, list(local)),
            tuple(local[p][0] for p in sorted(local)),
            tuple(lifted),
            tuple(w for w, _ in lifted.values()),
            tuple(coords[v] for v in range(node_count)) if coords else None,
        )
    except (ProblemError, ValueError) as exc:
        raise FormatError(str(exc)) from exc


def serialize_labeling(labeling: Sequence[int]) -> str:
    labels = normalize_labels(labeling)
    return "".join(f"{v} {c}\n" for v, c in enumerate(labels))


def parse_labeling(text: str) -> tuple[int, ...]:
    found: dict[int, int] = {}
    for lineno, tok in _lines(text):
        if len(tok) != 2:
            raise FormatError("labeling line needs '<node> <label>'", lineno)
        v, c = _ints(tok, lineno)
        if v in found:
            raise FormatError(f"node {v} labeled twice", lineno)
        found[v] = c
    if not found:
        raise FormatError("empty labeling")
    if sorted(found) != list(range(len(found))):
        raise FormatError("labeling must cover nodes 0..n-1 exactly once")
    return normalize_labels(found[v] for v in range(len(found)))


def serialize_attribution(attribution: Mapping[int, int]) -> str:
    return "".join(f"{v} {attribution[v]}\n" for v in sorted(attribution))


def parse_attribution(text: str) -> dict[int, int]:
    out: dict[int, int] = {}
    for lineno, tok in _lines(text):
        if len(tok) != 2:
            raise FormatError("attribution line needs '<node> <class>'", lineno)
        v, c = _ints(tok, lineno)
        if v in out:
            raise FormatError(f"node {v} attributed twice", lineno)
        if v < 0 or c < 0:
            raise FormatError("node and class ids must be non-negative", lineno)
        out[v] = c
    return dict(sorted(out.items()))


def serialize_paths(evidence: Sequence[PathEvidence]) -> str:
    return "".join(
        f"{fmt_float(ev.merge_probability)} {' '.join(map(str, ev.path))}\n" for ev in evidence
    )


def parse_paths(text: str) -> list[PathEvidence]:
    out = []
    for lineno, tok in _lines(text):
        if len(tok) < 3:
            raise FormatError("path line needs '<probability> <node> <node> ...'", lineno)
        p = _float(tok[0], lineno)
        nodes = _ints(tok[1:], lineno)
        try:
            out.append(PathEvidence(tuple(nodes), p))
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from exc
    return out


def read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
