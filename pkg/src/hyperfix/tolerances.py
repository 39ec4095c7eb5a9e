"""Numerical tolerances shared by the geometry and iteration code.

Every value here can be overridden per call through the ``tol=`` style
keyword arguments of the functions that use it.
"""

# absolute slack for geometry predicates (emptiness, membership, merging)
GEOM_TOL = 1e-12

# default step of the brute-force grid oracles
GRID_STEP = 1e-3

# angular step of the circle grid oracle
CIRCLE_GRID_STEP = 1e-4

# allowed deviation of T_a T_b x from T_{ab} x
HOMOMORPHISM_TOL = 1e-9

# slack granted to audited inequalities (contraction ratios, lemmas)
AUDIT_SLACK = 1e-9

# default stopping threshold on the orbit diameter, and iteration cap
ITER_TOL = 1e-10
MAX_ITER = 200

# orbit points closer than this are treated as one point
DEDUP_TOL = 1e-12
