# standard libraries
import logging
from pathlib import Path
from typing import Union

# third party libraries
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# harmonicbound libraries
from harmonicbound.geometry.base import Configuration  # noqa: E402

logger = logging.getLogger(__name__)

SVG_RC = {"svg.hashsalt": "harmonicbound", "svg.fonttype": "none", "path.simplify": False}
CIRCLE_POINTS = 721
ARC_POINTS = 181


def render_configuration(cfg: Configuration, path: Union[str, Path]) -> Path:
    """
    Draw the unit circle, the continuum E and the marked points a_k to a standalone SVG.

    The output bytes depend only on the configuration: the hash salt is fixed and the date stamp is dropped.

    Args:
        cfg (Configuration): Configuration to draw
        path (Union[str, Path]): Output file

    Returns:
        Path: The written file
    """
    path = Path(path)
    with plt.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(5, 5))
        t = np.linspace(0.0, 2.0 * np.pi, CIRCLE_POINTS)
        ax.plot(np.cos(t), np.sin(t), color="black", linewidth=1.0)

        for segment in cfg.continuum.segments:
            ax.plot([segment.p0.re, segment.p1.re], [segment.p0.im, segment.p1.im], color="tab:red", linewidth=2.0)
        for arc in cfg.continuum.arcs:
            s = np.linspace(arc.angle0, arc.angle1, ARC_POINTS)
            z = arc.center.z + arc.radius * np.exp(1j * s)
            ax.plot(z.real, z.imag, color="tab:red", linewidth=2.0)

        ax.scatter(cfg.marked.real, cfg.marked.imag, color="tab:blue", s=18, zorder=3)
        for k, a in enumerate(cfg.marked, start=1):
            ax.annotate(f"$a_{{{k}}}$", (a.real, a.imag), textcoords="offset points", xytext=(4, 4), fontsize=9)

        ax.set_aspect("equal")
        ax.set_xlim(-1.1, 1.1)
        ax.set_ylim(-1.1, 1.1)
        ax.axis("off")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)

    logger.info("Wrote %s", path)
    return path
