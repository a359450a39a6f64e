"""Build truncated Brownian paths and showcase their structural guarantees.

Run:  python demos/01_path_construction.py
"""

import numpy as np

from brownian_modulus import (
    TruncatedPath,
    evaluate_truncated,
    evaluate_truncated_many,
    path_from_json,
    path_to_json,
    sample_node_values_prefix,
)

LEVEL = 6
SEED = 42

path = TruncatedPath.sample(LEVEL, SEED)
print(f"level-{LEVEL} path, seed {SEED}")
print(f"  nodes: {path.num_cells + 1} (width {path.width})")
print(f"  node value range: [{path.node_values.min():+.6f}, {path.node_values.max():+.6f}]")
print(f"  endpoint W(1) = {path.node_values[-1]:+.6f}")

# piecewise linearity: a cell midpoint carries the average of its endpoints
mid = 0.5 * (path.node_values[:-1] + path.node_values[1:])
series = evaluate_truncated_many(path, (np.arange(path.num_cells) + 0.5) * path.width)
print(f"  midpoint identity max error: {np.max(np.abs(series - mid)):.2e}")

# refining the truncation level preserves every shared node bit-exactly
deeper = path.extended(LEVEL + 3)
stride = 2 ** (deeper.level_n - path.level_n)
shared_exact = np.array_equal(deeper.node_values[::stride], path.node_values)
print(f"extended to level {deeper.level_n}: shared nodes bit-exact: {shared_exact}")

# prefix sampling reproduces the leading nodes of the full path without
# paying for the rest -- useful for statistics supported near the origin
prefix = sample_node_values_prefix(LEVEL, SEED, 8 * path.width)
agree = np.array_equal(prefix, path.node_values[:9])
print(f"prefix of 8 cells matches the full path exactly: {agree}")

# serialization round-trips bit-exactly
clone = path_from_json(path_to_json(path))
print(f"JSON round trip bit-exact: {np.array_equal(clone.node_values, path.node_values)}")

t = 0.0491
print(f"W({t}) by interpolation {path.interpolate(t):+.9f} "
      f"vs tent series {evaluate_truncated(path, t):+.9f}")
