"""Convergence and diversity charts written as plain SVG.

The SVG is generated by hand so that identical traces always give identical
bytes (no timestamps or random ids, unlike most plotting back ends).
"""

from pathlib import Path

import numpy as np

from .rng import ALGORITHM_IDS, FUNCTION_IDS

COLORS = {"cnea": "#d62728", "sea": "#1f77b4", "socea": "#2ca02c", "cea": "#9467bd",
          "dgea": "#ff7f0e"}
PANEL_W, PANEL_H, MARGIN = 340, 240, 45


def _median_curve(records, column):
    length = min(len(r.trace) for r in records)
    stack = np.stack([r.trace[:length, column] for r in records])
    return np.median(stack, axis=0)


def _panel(x0, title, curves, log_scale):
    """SVG fragment for one chart; ``curves`` maps algorithm id -> y values."""
    parts = [f'<g transform="translate({x0},0)">',
             f'<text x="{PANEL_W / 2:.1f}" y="18" text-anchor="middle" font-size="13">{title}</text>',
             f'<rect x="{MARGIN}" y="{MARGIN}" width="{PANEL_W - MARGIN - 10}" '
             f'height="{PANEL_H - 2 * MARGIN}" fill="none" stroke="#444"/>']
    ys = {a: (np.log10(v) if log_scale else np.asarray(v, float)) for a, v in curves.items()}
    lo = min(float(np.min(v)) for v in ys.values())
    hi = max(float(np.max(v)) for v in ys.values())
    if not hi > lo:
        lo, hi = lo - 0.5, hi + 0.5
    n_max = max(len(v) for v in ys.values())
    w, h = PANEL_W - MARGIN - 10, PANEL_H - 2 * MARGIN
    for algo, v in ys.items():
        xs = MARGIN + w * np.arange(len(v)) / max(n_max - 1, 1)
        yy = MARGIN + h * (1.0 - (v - lo) / (hi - lo))
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, yy))
        parts.append(f'<polyline fill="none" stroke="{COLORS[algo]}" stroke-width="1.5" '
                     f'points="{pts}"/>')
    axis = "log10 " if log_scale else ""
    parts.append(f'<text x="{MARGIN}" y="{MARGIN - 6}" font-size="10">{axis}max {hi:.3g}</text>')
    parts.append(f'<text x="{MARGIN}" y="{PANEL_H - MARGIN + 14}" font-size="10">'
                 f'{axis}min {lo:.3g} | generations 0..{n_max - 1}</text>')
    parts.append("</g>")
    return "\n".join(parts)


def render_svg(function, dim, by_algorithm):
    """One chart pair: median best error and median diversity per generation."""
    errors = {a: _median_curve(r, 1) for a, r in by_algorithm.items()}
    divs = {a: _median_curve(r, 3) for a, r in by_algorithm.items()}
    log_scale = all(np.all(v > 0) for v in errors.values())
    width = 2 * PANEL_W + 20
    height = PANEL_H + 20 * (len(by_algorithm) + 1)
    body = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
            _panel(0, f"{function} {dim}D best error", errors, log_scale),
            _panel(PANEL_W + 20, f"{function} {dim}D diversity", divs, False)]
    for i, algo in enumerate(by_algorithm):
        y = PANEL_H + 15 + 20 * i
        body.append(f'<line x1="{MARGIN}" y1="{y - 4}" x2="{MARGIN + 25}" y2="{y - 4}" '
                    f'stroke="{COLORS[algo]}" stroke-width="2"/>')
        body.append(f'<text x="{MARGIN + 32}" y="{y}" font-size="11">{algo} '
                    f'({len(by_algorithm[algo])} runs)</text>')
    body.append("</svg>\n")
    return "\n".join(body)


def emit_svg_plots(groups, out_dir):
    """Write ``{function}_{dim}d.svg`` for every function x dim in ``groups``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells = sorted({(f, d) for _, f, d in groups}, key=lambda c: (FUNCTION_IDS.index(c[0]), c[1]))
    paths = []
    for fid, dim in cells:
        by_algo = {a: groups[(a, fid, dim)] for a in ALGORITHM_IDS if (a, fid, dim) in groups}
        path = out_dir / f"{fid}_{dim}d.svg"
        path.write_text(render_svg(fid, dim, by_algo))
        paths.append(path)
    return paths
