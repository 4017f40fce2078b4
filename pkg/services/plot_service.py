"""Slice figure generation service"""

from __future__ import annotations

import logging
import os
import re
from typing import Dict, Optional

import numpy as np
import plotly.graph_objects as go

from dirichlet import DirichletSlice
from packing import BOUND_PARAMS

logger = logging.getLogger(__name__)

SIZE_PX = 512
PX_PER_UNIT = 100.0
HALF_RANGE = SIZE_PX / PX_PER_UNIT / 2.0
CIRCLE_POINTS = 361
FIXED_UID = "cylpack"

_CLIP_UID = re.compile(r"id=\"clip([0-9a-f]+)")

EVENT_COLORS = {
    "type1": "rgba(214, 39, 40, 1.0)",
    "type2": "rgba(44, 160, 44, 1.0)",
    "type3": "rgba(148, 103, 189, 1.0)",
}


def canonical_svg(svg: str) -> str:
    """Replace the random figure uid plotly.js puts in clip-path ids and their url(#...) references."""
    runs = _CLIP_UID.findall(svg)
    if not runs:
        return svg
    # the xy subplot id follows the uid directly, so the shortest run is the uid
    uid = min(runs, key=len)
    return svg.replace("clip" + uid, "clip" + FIXED_UID)


def _circle(radius: float) -> Dict[str, list]:
    theta = np.linspace(0.0, 2.0 * np.pi, CIRCLE_POINTS)
    return {"x": (radius * np.cos(theta)).tolist(), "y": (radius * np.sin(theta)).tolist()}


class PlotService:
    """Produces slice figures: S_x(1), S_x(2/sqrt(3)), the boundary and its events"""

    def build_figure(self, s: DirichletSlice, reproducible: bool = False) -> go.Figure:
        fig = go.Figure()

        fig.add_trace(
            go.Scatter(
                **_circle(1.0),
                mode="lines",
                name="S_x(1)",
                line={"color": "rgba(120, 120, 120, 0.8)", "dash": "dot", "width": 1},
                showlegend=False,
            )
        )
        fig.add_trace(
            go.Scatter(
                **_circle(BOUND_PARAMS.r_hex),
                mode="lines",
                name="S_x(2/sqrt(3))",
                line={"color": "rgba(0, 150, 255, 0.6)", "dash": "dash", "width": 1},
                showlegend=False,
            )
        )

        pts = s.boundary_points()
        closed = np.vstack([pts, pts[:1]])
        fig.add_trace(
            go.Scatter(
                x=closed[:, 0].tolist(),
                y=closed[:, 1].tolist(),
                mode="lines",
                name="boundary",
                line={"color": "black", "width": 2},
                showlegend=False,
            )
        )

        for kind, color in EVENT_COLORS.items():
            chosen = [e for e in s.events if e.kind == kind]
            if not chosen:
                continue
            th = np.array([e.theta for e in chosen])
            r = np.array([e.radius for e in chosen])
            fig.add_trace(
                go.Scatter(
                    x=(r * np.cos(th)).tolist(),
                    y=(r * np.sin(th)).tolist(),
                    mode="markers",
                    name=kind,
                    marker={"color": color, "size": 6},
                    showlegend=False,
                )
            )

        fig.update_layout(
            width=SIZE_PX,
            height=SIZE_PX,
            margin={"l": 0, "r": 0, "t": 0, "b": 0},
            template="plotly_white",
            showlegend=False,
        )
        if not reproducible and s.area is not None:
            fig.update_layout(
                annotations=[{
                    "text": f"cylinder {s.owner}, area {s.area:.6f}",
                    "x": 0.01, "y": 0.99, "xref": "paper", "yref": "paper",
                    "showarrow": False, "xanchor": "left", "yanchor": "top",
                }]
            )
        axis = {"range": [-HALF_RANGE, HALF_RANGE], "visible": False, "fixedrange": True}
        fig.update_xaxes(**axis)
        fig.update_yaxes(**axis, scaleanchor="x", scaleratio=1)
        return fig

    def build_plot(self, s: DirichletSlice, reproducible: bool = False) -> Dict:
        fig = self.build_figure(s, reproducible)
        return {
            "success": True,
            "plot_data": fig.to_dict(),
            "slice_info": {
                "owner": s.owner,
                "area": s.area,
                "events": len(s.events),
                "samples": int(len(s.theta)),
            },
        }

    def write_svg(self, s: DirichletSlice, path: str, reproducible: bool = False) -> Optional[str]:
        """Render the slice to an SVG file through kaleido; returns the path or None."""
        folder = os.path.dirname(path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        fig = self.build_figure(s, reproducible)
        try:
            image = fig.to_image(format="svg", width=SIZE_PX, height=SIZE_PX)
        except Exception as exc:
            logger.warning("SVG export failed for %s: %s", path, exc)
            return None
        svg = image.decode("utf-8") if isinstance(image, bytes) else image
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(canonical_svg(svg))
        return path
