"""SVG frames from trace files.

Each frame shows the workspace, ground-truth obstacles (dashed outline for
obstacles the robot has not been told about, solid fill for those in its
map), forest edges coloured per tree, the planned path, the robot and the
goal. Rendering needs ``forest`` records in the trace to draw edges.
"""

from __future__ import annotations

from pathlib import Path
from typing import List

from .trace import iter_trace

SCALE = 40.0


def tree_color(label: int) -> str:
    hue = (label * 137.508) % 360.0
    return f"hsl({hue:.1f},65%,45%)"


def _bounds(ev: dict):
    if ev.get("workspace"):
        return ev["workspace"]
    pts = [ev["robot"]] + ([ev["goal"]] if ev.get("goal") else [])
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return [min(xs) - 1, min(ys) - 1, max(xs) + 1, max(ys) + 1]


def render_frame(ev: dict) -> str:
    x0, y0, x1, y1 = _bounds(ev)
    w, h = (x1 - x0) * SCALE, (y1 - y0) * SCALE

    def X(x):
        return f"{(x - x0) * SCALE:.2f}"

    def Y(y):
        return f"{(y1 - y) * SCALE:.2f}"

    def R(r):
        return f"{r * SCALE:.2f}"

    out: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
        f'viewBox="0 0 {w:.2f} {h:.2f}">',
        f'<title>{ev["kind"]} step {ev["step"]} t={ev["time"]:.2f}</title>',
        f'<rect class="workspace" x="0" y="0" width="{w:.2f}" height="{h:.2f}" '
        'fill="white" stroke="black" stroke-width="2"/>',
    ]
    for cx, cy, r, known in ev.get("true_obstacles") or []:
        style = ('fill="#bbbbbb" stroke="#555555"' if known
                 else 'fill="none" stroke="#999999" stroke-dasharray="6,4"')
        out.append(f'<circle class="obstacle-true" cx="{X(cx)}" cy="{Y(cy)}" r="{R(r)}" {style}/>')
    for cx, cy, r in ev.get("known_obstacles") or []:
        out.append(f'<circle class="obstacle-known" cx="{X(cx)}" cy="{Y(cy)}" r="{R(r)}" '
                   'fill="#d9534f" fill-opacity="0.45" stroke="#a94442"/>')
    forest = ev.get("forest")
    if forest:
        pos = {n: (x, y, t) for n, x, y, t in forest["nodes"]}
        for p, c in forest["edges"]:
            px, py, _ = pos[p]
            cx, cy, t = pos[c]
            out.append(f'<line class="edge" x1="{X(px)}" y1="{Y(py)}" x2="{X(cx)}" y2="{Y(cy)}" '
                       f'stroke="{tree_color(t)}" stroke-width="1.2"/>')
        for n, (x, y, t) in pos.items():
            out.append(f'<circle class="node" cx="{X(x)}" cy="{Y(y)}" r="1.8" fill="{tree_color(t)}"/>')
    if ev.get("path"):
        pts = " ".join(f"{X(x)},{Y(y)}" for x, y in ev["path"])
        out.append(f'<polyline class="path" points="{pts}" fill="none" stroke="#f0ad4e" stroke-width="3.5"/>')
    if ev.get("goal"):
        gx, gy = ev["goal"]
        out.append(f'<rect class="goal" x="{float(X(gx)) - 6:.2f}" y="{float(Y(gy)) - 6:.2f}" '
                   'width="12" height="12" fill="#5cb85c" stroke="black"/>')
    rx, ry = ev["robot"]
    out.append(f'<circle class="robot" cx="{X(rx)}" cy="{Y(ry)}" r="6" fill="#337ab7" stroke="black"/>')
    out.append(f'<text x="6" y="16" font-family="monospace" font-size="13">'
               f'{ev["kind"]} step={ev["step"]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_trace(trace_path, out_dir, every: int = 1) -> List[Path]:
    """Write one SVG per ``every`` records; returns the written paths."""
    if every < 1:
        raise ValueError("every must be at least 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i, ev in enumerate(iter_trace(trace_path)):
        if i % every:
            continue
        path = out_dir / f"frame_{ev['step']:06d}.svg"
        path.write_text(render_frame(ev), encoding="utf-8")
        written.append(path)
    return written


def count_edges(svg_text: str) -> int:
    return svg_text.count('<line class="edge"')
