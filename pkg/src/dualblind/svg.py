"""Minimal SVG writers for line plots and heatmaps (no plotting dependency)."""

from html import escape

import numpy as np

_PALETTE = ("#1f77b4", "#ff7f0e", "#d62728", "#2ca02c", "#9467bd")
_W, _H, _M = 640, 400, 50


def _fmt(v):
    return f"{v:.2f}"


def line_plot(path, x, series, title="", xlabel="", ylabel="", markers=()):
    """Write one polyline per ``(label, y)`` in `series`; `markers` adds vertical lines."""
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(y, dtype=float) for _, y in series]
    finite = np.concatenate([y[np.isfinite(y)] for y in ys]) if ys else np.zeros(1)
    lo, hi = float(finite.min()), float(finite.max())
    if hi == lo:
        hi = lo + 1.0
    x0, x1 = float(x.min()), float(x.max())

    def px(v):
        return _M + (v - x0) / (x1 - x0) * (_W - 2 * _M)

    def py(v):
        return _H - _M - (np.clip(v, lo, hi) - lo) / (hi - lo) * (_H - 2 * _M)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}">',
             f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
             f'<rect x="{_M}" y="{_M}" width="{_W - 2 * _M}" height="{_H - 2 * _M}" fill="none" stroke="black"/>',
             f'<text x="{_W / 2}" y="{_M / 2}" text-anchor="middle" font-size="14">{escape(title)}</text>',
             f'<text x="{_W / 2}" y="{_H - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
             f'<text x="12" y="{_H / 2}" font-size="12" transform="rotate(-90 12 {_H / 2})" '
             f'text-anchor="middle">{escape(ylabel)}</text>',
             f'<text x="{_M}" y="{_H - _M + 15}" font-size="10">{x0:g}</text>',
             f'<text x="{_W - _M}" y="{_H - _M + 15}" font-size="10" text-anchor="end">{x1:g}</text>',
             f'<text x="{_M - 4}" y="{_H - _M}" font-size="10" text-anchor="end">{lo:.3g}</text>',
             f'<text x="{_M - 4}" y="{_M + 8}" font-size="10" text-anchor="end">{hi:.3g}</text>']
    for xm in markers:
        parts.append(f'<line x1="{_fmt(px(xm))}" x2="{_fmt(px(xm))}" y1="{_M}" y2="{_H - _M}" '
                     'stroke="gray" stroke-dasharray="4 3"/>')
    for i, ((label, _), y) in enumerate(zip(series, ys)):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x, y) if np.isfinite(b))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        parts.append(f'<text x="{_W - _M - 4}" y="{_M + 16 + 14 * i}" font-size="11" '
                     f'text-anchor="end" fill="{color}">{escape(label)}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")


def heatmap(path, rows, cols, values, title="", xlabel="", ylabel=""):
    """Grayscale heatmap of `values` (shape ``len(rows) x len(cols)``, in [0, 1])."""
    values = np.asarray(values, dtype=float)
    cw = (_W - 2 * _M) / len(cols)
    ch = (_H - 2 * _M) / len(rows)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}">',
             f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
             f'<text x="{_W / 2}" y="{_M / 2}" text-anchor="middle" font-size="14">{escape(title)}</text>',
             f'<text x="{_W / 2}" y="{_H - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
             f'<text x="12" y="{_H / 2}" font-size="12" transform="rotate(-90 12 {_H / 2})" '
             f'text-anchor="middle">{escape(ylabel)}</text>']
    for i, r in enumerate(rows):
        for j, c in enumerate(cols):
            v = float(np.clip(values[i, j], 0.0, 1.0))
            level = int(round(255 * v))
            x, y = _M + j * cw, _H - _M - (i + 1) * ch
            parts.append(f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(cw)}" height="{_fmt(ch)}" '
                         f'fill="rgb({level},{level},{level})" stroke="#888"/>')
            ink = "black" if v > 0.5 else "white"
            parts.append(f'<text x="{_fmt(x + cw / 2)}" y="{_fmt(y + ch / 2 + 4)}" font-size="11" '
                         f'text-anchor="middle" fill="{ink}">{v:.2f}</text>')
        parts.append(f'<text x="{_M - 6}" y="{_fmt(_H - _M - (i + 0.5) * ch + 4)}" font-size="11" '
                     f'text-anchor="end">{r}</text>')
    for j, c in enumerate(cols):
        parts.append(f'<text x="{_fmt(_M + (j + 0.5) * cw)}" y="{_H - _M + 15}" font-size="11" '
                     f'text-anchor="middle">{c}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
