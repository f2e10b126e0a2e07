"""Round-trip extraction of plotted points from a rendered figure."""
from __future__ import annotations

import numpy as np


def extract_points(fig) -> dict[str, np.ndarray]:
    """Map each tagged artist gid to its (n, 2) array of plotted data points.

    Covers Line2D artists (gids like 'points:measured', 'series:...') and
    scatter collections (gids like 'class:ergodic', 'points:scar').
    """
    points = {}
    for ax in fig.axes:
        for line in ax.lines:
            gid = line.get_gid()
            if gid:
                points[gid] = np.asarray(line.get_xydata())
        for coll in ax.collections:
            gid = coll.get_gid()
            if gid:
                points[gid] = np.asarray(coll.get_offsets())
    return points
