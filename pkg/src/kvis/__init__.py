"""k-crossing visibility on arrangements of lines, rays, and segments,
on simple polygons, and (small scenes) on arrangements of planes.

A point w on an obstacle is k-visible from the query point q when the
open segment qw meets at most k obstacles.  The library reports the
visible portions exactly, using rational arithmetic throughout, by
reducing sight lines from q to vertical depth order under the self-inverse
map (x, y) -> (x/y, 1/y) and reading portions off (<=k)-levels.
"""

from .geom import (Line2, Piece, Plane3, Point2, Point3, Portion, rat)
from .levels import lower_level_portions, upper_level_portions
from .oracle import oracle_level2d, oracle_vis2d, oracle_vis3d_point
from .vis2d import (SceneValidationError, endpoint_count, kvis_generic,
                    kvis_lines, kvis_many, kvis_polygon, kvis_scene,
                    portion_count, validate_pieces, validate_polygon)
from .vis3d import (Face, face_complexity, point_visibility_pair, vis_planes,
                    validate_planes)

__all__ = [
    "Line2", "Piece", "Plane3", "Point2", "Point3", "Portion", "rat",
    "upper_level_portions", "lower_level_portions",
    "oracle_vis2d", "oracle_level2d", "oracle_vis3d_point",
    "SceneValidationError", "kvis_lines", "kvis_generic", "kvis_scene",
    "kvis_many", "kvis_polygon", "validate_pieces", "validate_polygon",
    "portion_count", "endpoint_count",
    "Face", "vis_planes", "face_complexity", "point_visibility_pair",
    "validate_planes",
]

__version__ = "0.1.0"
