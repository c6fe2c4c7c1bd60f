"""Deterministic CSV/JSON artifact writers shared by the CLI."""

import json
from pathlib import Path


def fmt(x):
    """Fixed 17-significant-digit scientific notation for lossless round-trip."""
    return f"{float(x):.17e}"


def write_csv(path, header, rows):
    """Write rows of (str | number) cells; numbers are formatted losslessly."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(c if isinstance(c, str) else fmt(c) for c in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json(path, doc):
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path
