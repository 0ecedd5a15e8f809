"""Self-describing text format for problem instances.

A header of key=value lines is followed by numeric blocks (17
significant digits, space separated), one block per section. The format
round-trips byte-identically: load followed by save reproduces the file.
"""

import numpy as np

from .problem import MatrixProblem, VectorProblem

FORMAT_TAG = "robustreg-instance-v1"

_RESERVED = ("format", "kind", "n", "d", "d1", "d2", "truth")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_row(row) -> str:
    return " ".join(_fmt(v) for v in row)


def _parse_row(line, path, lineno, expected):
    parts = line.split()
    if len(parts) != expected:
        raise ValueError(f"{path}:{lineno}: expected {expected} values, "
                         f"got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"{path}:{lineno}: {exc}") from None


def save_instance(path, problem, meta=None) -> None:
    """Write a VectorProblem or MatrixProblem with optional metadata.

    Metadata values are free-form strings (no newlines); reserved keys
    are derived from the problem and cannot be overridden.
    """
    meta = dict(meta or {})
    for key in _RESERVED:
        if key in meta:
            raise ValueError(f"metadata key {key!r} is reserved")
    lines = [f"format={FORMAT_TAG}"]
    if isinstance(problem, VectorProblem):
        lines += [f"kind=sparse", f"n={problem.n}", f"d={problem.d}"]
    elif isinstance(problem, MatrixProblem):
        d1, d2 = problem.shape
        lines += [f"kind=lowrank", f"n={problem.n}", f"d1={d1}", f"d2={d2}"]
    else:
        raise TypeError(f"cannot serialize {type(problem).__name__}")
    lines.append(f"truth={int(problem.truth is not None)}")
    for key in sorted(meta):
        value = str(meta[key])
        if "\n" in value or "=" in key:
            raise ValueError(f"bad metadata entry {key!r}")
        lines.append(f"{key}={value}")

    if isinstance(problem, VectorProblem):
        lines.append("[design]")
        lines += [_fmt_row(row) for row in problem.design]
    else:
        lines.append("[measurements]")
        lines += [_fmt_row(row) for row in problem.design_2d]
    lines.append("[responses]")
    lines += [_fmt(v) for v in problem.responses]
    if problem.truth is not None:
        lines.append("[truth]")
        if isinstance(problem, VectorProblem):
            lines.append(_fmt_row(problem.truth))
        else:
            lines += [_fmt_row(row) for row in problem.truth]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_instance(path):
    """Read an instance file; returns (problem, meta)."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()

    header = {}
    meta = {}
    pos = 0
    for pos, line in enumerate(lines):
        if line.startswith("["):
            break
        if "=" not in line:
            raise ValueError(f"{path}:{pos + 1}: expected key=value, "
                             f"got {line!r}")
        key, value = line.split("=", 1)
        (header if key in _RESERVED else meta)[key] = value
    if header.get("format") != FORMAT_TAG:
        raise ValueError(f"{path}: not a {FORMAT_TAG} file")
    kind = header.get("kind")
    n = int(header["n"])

    def read_block(tag, rows, cols):
        nonlocal pos
        if pos >= len(lines) or lines[pos] != f"[{tag}]":
            raise ValueError(f"{path}:{pos + 1}: expected [{tag}]")
        pos += 1
        block = np.empty((rows, cols))
        for i in range(rows):
            block[i] = _parse_row(lines[pos], path, pos + 1, cols)
            pos += 1
        return block

    if kind == "sparse":
        d = int(header["d"])
        design = read_block("design", n, d)
        responses = read_block("responses", n, 1).ravel()
        truth = None
        if header.get("truth") == "1":
            truth = read_block("truth", 1, d).ravel()
        return VectorProblem(design, responses, truth), meta
    if kind == "lowrank":
        d1, d2 = int(header["d1"]), int(header["d2"])
        design = read_block("measurements", n, d1 * d2).reshape(n, d1, d2)
        responses = read_block("responses", n, 1).ravel()
        truth = None
        if header.get("truth") == "1":
            truth = read_block("truth", d1, d2)
        return MatrixProblem(design, responses, truth), meta
    raise ValueError(f"{path}: unknown kind {kind!r}")
