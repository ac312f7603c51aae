"""Dependency-free image output: SVG/PPM heatmaps and SVG line plots."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from ..errors import UsageError
from ..lattice import Field

# viridis-like anchors, linearly interpolated
_ANCHORS = np.array([
    [68, 1, 84],
    [59, 82, 139],
    [33, 145, 140],
    [94, 201, 98],
    [253, 231, 37],
], dtype=np.float64)


def colormap(t: np.ndarray) -> np.ndarray:
    t = np.clip(np.asarray(t, dtype=np.float64), 0.0, 1.0) * (len(_ANCHORS) - 1)
    lo = np.minimum(np.floor(t).astype(int), len(_ANCHORS) - 2)
    w = (t - lo)[..., None]
    return np.rint(_ANCHORS[lo] * (1 - w) + _ANCHORS[lo + 1] * w).astype(np.uint8)


def field_plane(f: Field | np.ndarray, slice_index: int | None = None, part: str = "real") -> np.ndarray:
    """2-D array to draw: the field itself for d == 2, the plane ``x_3 = slice`` for d == 3."""
    if isinstance(f, Field):
        arr = f.as_array()
    else:
        arr = np.asarray(f)
    arr = {"real": np.real, "abs": np.abs, "imag": np.imag}[part](arr)
    if arr.ndim == 2:
        return arr
    if arr.ndim == 3:
        if slice_index is None:
            raise UsageError("3-D field needs a slice index")
        if not 0 <= slice_index < arr.shape[2]:
            raise UsageError(f"slice {slice_index} outside [0, {arr.shape[2]})")
        return arr[:, :, slice_index]
    raise UsageError(f"cannot render a {arr.ndim}-D field")


def _rgb(plane: np.ndarray) -> tuple[np.ndarray, float, float]:
    lo, hi = float(plane.min()), float(plane.max())
    span = hi - lo
    t = (plane - lo) / span if span > 0 else np.zeros_like(plane)
    # rows of the image run along x_2 upward, columns along x_1
    return colormap(t.T[::-1]), lo, hi


def write_ppm(plane: np.ndarray, path: str | Path, scale: int = 4) -> tuple[float, float]:
    rgb, lo, hi = _rgb(plane)
    rgb = np.repeat(np.repeat(rgb, scale, axis=0), scale, axis=1)
    h, w = rgb.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n# min={lo!r} max={hi!r}\n{w} {h}\n255\n".encode())
        fh.write(rgb.tobytes())
    return lo, hi


def write_svg(plane: np.ndarray, path: str | Path, title: str = "", cell: int = 6) -> tuple[float, float]:
    rgb, lo, hi = _rgb(plane)
    h, w = rgb.shape[:2]
    top = 24
    W, H = w * cell, h * cell + top + 22
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" shape-rendering="crispEdges">',
           f'<text x="2" y="16" font-family="monospace" font-size="12">{title}</text>']
    for r in range(h):
        for c in range(w):
            R, G, B = rgb[r, c]
            out.append(f'<rect x="{c * cell}" y="{top + r * cell}" width="{cell}" height="{cell}" '
                       f'fill="#{R:02x}{G:02x}{B:02x}"/>')
    out.append(f'<text x="2" y="{H - 6}" font-family="monospace" font-size="12">min={lo:.6g} max={hi:.6g}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
    return lo, hi


def emit_heatmap(f: Field | np.ndarray, path: str | Path, slice_index: int | None = None,
                 part: str = "real", title: str = "") -> tuple[float, float]:
    """Write an SVG or PPM (by suffix) heatmap; returns the (min, max) of the linear color scale."""
    plane = field_plane(f, slice_index, part)
    path = Path(path)
    if path.suffix.lower() == ".ppm":
        return write_ppm(plane, path)
    if path.suffix.lower() == ".svg":
        return write_svg(plane, path, title)
    raise UsageError(f"unsupported image type {path.suffix!r}; use .svg or .ppm")


def energy_trace(energies, e_inf: float, floor: float = 1e-14) -> list[tuple[int, float]]:
    """(step, log10(E - E_inf)) for steps whose gap exceeds ``floor``."""
    return [(k, math.log10(e - e_inf)) for k, e in enumerate(energies) if e - e_inf > floor]


def _polyline_svg(series: dict[str, list[tuple[int, float]]], path: Path, title: str, notice: str = "") -> None:
    W, H, pad = 640, 400, 50
    pts = [p for s in series.values() for p in s]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">',
           f'<text x="{pad}" y="20" font-family="monospace" font-size="13">{title}</text>',
           f'<rect x="{pad}" y="{pad}" width="{W - 2 * pad}" height="{H - 2 * pad}" fill="none" stroke="black"/>']
    if not pts:
        out.append(f'<text x="{W // 2 - 120}" y="{H // 2}" font-family="monospace" font-size="13">'
                   f'{notice or "no points above the floor"}</text>')
    else:
        x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
        y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
        xs = (W - 2 * pad) / max(x1 - x0, 1)
        ys = (H - 2 * pad) / max(y1 - y0, 1e-12)
        colors = ["#1f5fa8", "#d2651b", "#2a9d4a", "#a02c8c"]
        for k, (name, s) in enumerate(series.items()):
            coords = " ".join(f"{pad + (x - x0) * xs:.2f},{H - pad - (y - y0) * ys:.2f}" for x, y in s)
            dash = ' stroke-dasharray="6 4"' if k else ""
            out.append(f'<polyline fill="none" stroke="{colors[k % 4]}" stroke-width="1.5"{dash} points="{coords}"/>')
            out.append(f'<text x="{W - pad - 150}" y="{pad + 16 + 16 * k}" font-family="monospace" '
                       f'font-size="12" fill="{colors[k % 4]}">{name}</text>')
        out.append(f'<text x="{pad}" y="{H - 20}" font-family="monospace" font-size="11">step {x0}..{x1}</text>')
        out.append(f'<text x="4" y="{pad - 6}" font-family="monospace" font-size="11">'
                   f'log10(E-E_inf) in [{y0:.3g}, {y1:.3g}]</text>')
    out.append("</svg>")
    path.write_text("\n".join(out) + "\n")


def emit_energy_trace(energies, e_inf: float, path: str | Path, overlay=None,
                      title: str = "log10(E(u_t) - E_inf)") -> list[tuple[int, float]]:
    """CSV of (step, log10 gap) at ``path`` plus an SVG plot next to it.

    ``overlay`` is a second energy sequence (e.g. the quantum run) drawn dashed."""
    path = Path(path)
    pts = energy_trace(energies, e_inf)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "log10_gap"])
        for k, v in pts:
            w.writerow([k, repr(v)])
    series = {"classical": pts}
    if overlay is not None:
        series["quantum"] = energy_trace(overlay, e_inf)
    notice = "trajectory sits at the steady state" if not pts else ""
    _polyline_svg(series, path.with_suffix(".svg"), title, notice)
    return pts
