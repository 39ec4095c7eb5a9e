"""Common fixed points of uniformly Lipschitz group actions, computed exactly.

Two space models carry the geometry: ``(R^d, max norm)`` where every
admissible set is a box (:mod:`hyperfix.box_space`), and the circle with its
geodesic metric where admissible sets are unions of arcs
(:mod:`hyperfix.circle_space`).  On top of these sit finite group actions,
the center-set iterations that converge to a common fixed point, and the
limit retraction onto the fixed-point set.
"""
from . import box_space, circle_space, fixpoint, group_action, retraction
from .box_space import Box, ball, box_hausdorff, chebyshev, intersect, linf_dist, set_hausdorff, shrink_hull
from .fixpoint import IterationConfig, IterationTrace, center_C, center_CC, iterate, residual
from .group_action import Action, FiniteGroup, cyclic, orbit_stats, verify_action, verify_group
from .retraction import holder_alpha, retract_R, selection_f

__version__ = "0.1.0"

__all__ = [
    "Action", "Box", "FiniteGroup", "IterationConfig", "IterationTrace",
    "ball", "box_hausdorff", "box_space", "center_C", "center_CC", "chebyshev",
    "circle_space", "cyclic", "fixpoint", "group_action", "holder_alpha",
    "intersect", "iterate", "linf_dist", "orbit_stats", "residual", "retract_R",
    "retraction", "selection_f", "set_hausdorff", "shrink_hull", "verify_action",
    "verify_group",
]
