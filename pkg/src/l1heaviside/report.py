"""Output formatting: deterministic JSON, CSV sample tables, and figures.

JSON floats are written with 17 significant digits so identical runs give
byte-identical files.  CSV uses a header row, comma separators, '.' decimals
and LF line endings.  Figures are rendered headlessly to PNG files next to
the data so results can be inspected without any plotting tool.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def format_float(value: float) -> str:
    """Fixed 17-significant-digit representation (round-trips doubles)."""
    return format(float(value), ".17g")


def dump_json(obj) -> str:
    """Serialize with deterministic float formatting and stable key order."""
    pieces = []
    _write_json(obj, pieces, indent=0)
    return "".join(pieces) + "\n"


def _write_json(obj, out: list, indent: int) -> None:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(f"{inner}{json.dumps(str(key))}: ")
            _write_json(value, out, indent + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)) or isinstance(obj, np.ndarray):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(items):
            out.append(inner)
            _write_json(value, out, indent + 1)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        value = float(obj)
        out.append(format_float(value) if np.isfinite(value) else "null")
    else:
        out.append(json.dumps(str(obj)))


def write_json(obj, path: str | None) -> str:
    text = dump_json(obj)
    if path:
        Path(path).write_text(text, encoding="utf-8")
    return text


def sample_table(problem, approximant, resolution: int) -> np.ndarray:
    """Rows (x, f, g, f-g) at uniform points plus canonical points and knots."""
    xs = set(np.linspace(-1.0, 1.0, int(resolution)))
    xs.update(approximant.canonical_points.full_points)
    xs.update(b for b in approximant.breakpoints if -1.0 <= b <= 1.0)
    grid = np.asarray(sorted(xs), dtype=float)
    f_vals = np.asarray(problem.function(grid), dtype=float)
    g_vals = np.asarray(approximant(grid), dtype=float)
    return np.column_stack([grid, f_vals, g_vals, f_vals - g_vals])


def write_csv(rows: np.ndarray, path: str) -> str:
    lines = ["x,f,gstar,residual"]
    for row in np.asarray(rows, dtype=float):
        lines.append(",".join(format_float(v) for v in row))
    text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    return path


def render_figures(problem, approximant, directory: str) -> list[str]:
    """Render approximation and residual overview PNGs into ``directory``."""
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    fn = problem.function
    points = np.asarray(approximant.canonical_points.full_points, dtype=float)

    left_x = np.linspace(-1.0, 0.0, 400)
    right_x = np.linspace(0.0, 1.0, 400)
    dense = np.linspace(-1.0, 1.0, 801)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(left_x, fn.left_branch(left_x), color="C0", lw=1.6, label="target")
    ax.plot(right_x, fn.right_branch(right_x), color="C0", lw=1.6)
    ax.plot(dense, approximant(dense), color="C1", lw=1.6, label="best L1 approximant")
    ax.plot(points, approximant(points), "k.", ms=7, label="canonical points")
    ax.axvline(0.0, color="0.75", lw=0.8, ls=":")
    ax.set_xlabel("x")
    ax.legend(loc="best", fontsize=9)
    ax.set_title("Best L1 approximation")
    fig.tight_layout()
    approx_path = out_dir / "approximation.png"
    fig.savefig(approx_path, dpi=150)
    plt.close(fig)

    residual = np.asarray(fn(dense), dtype=float) - np.asarray(approximant(dense), dtype=float)
    fig, ax = plt.subplots(figsize=(6.4, 3.4))
    ax.plot(dense, residual, color="C2", lw=1.4)
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.plot(points, np.zeros_like(points), "k.", ms=7)
    for knot in approximant.breakpoints:
        ax.axvline(knot, color="0.85", lw=0.8, ls="--")
    ax.set_xlabel("x")
    ax.set_title("Residual and canonical sign changes")
    fig.tight_layout()
    resid_path = out_dir / "residual.png"
    fig.savefig(resid_path, dpi=150)
    plt.close(fig)

    return [str(approx_path), str(resid_path)]
