"""
Graph 3-coloring as lattice equations
=====================================

A graph is 3-colorable exactly when a certain system of lattice-term
equations has a solution. This script encodes a few graphs, solves the
systems by exhaustive search and reads colorings back off the
solutions.
"""

# %%
# Encoding
# --------
#
# Each vertex v gets three unknowns r_v, w_v, g_v. The first equation
# says every vertex has some color, the others say no edge joins two
# vertices of the same color.

from boolgen.reduction import (
    complete_graph,
    cycle_graph,
    decode_coloring,
    encode_3coloring,
    is_3colorable_oracle,
    nonisomorphic_graphs,
    solve_system,
    wheel_graph,
)

system = encode_3coloring(complete_graph(3), n=1)
print(system.to_text())

# %%
# Solving
# -------

for name, g in [("K3", complete_graph(3)), ("K4", complete_graph(4)), ("C5", cycle_graph(5)), ("W5", wheel_graph(5))]:
    system = encode_3coloring(g, 1)
    x = solve_system(system)
    if x is None:
        print(f"{name}: no solution")
    else:
        coloring = decode_coloring(system, x, g)
        print(f"{name}: {[''.join(sorted(c)) for c in coloring]}")

# %%
# Agreement with a direct search
# ------------------------------
#
# Over every graph on at most four vertices the equation solver and a
# plain search over color maps give the same verdict.

count = 0
for t in range(1, 5):
    for g in nonisomorphic_graphs(t):
        assert (solve_system(encode_3coloring(g, 1)) is not None) == is_3colorable_oracle(g)[0]
        count += 1
print(count, "graphs checked")
