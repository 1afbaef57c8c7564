"""
Minimum generating sets of Boolean lattices
===========================================

How few elements does it take to generate every subset of an n-element
set using only intersections and unions? The answer is the least k with
n <= C(k, floor(k/2)). This script computes it, builds a generating set
of that size and confirms minimality by exhaustive search for small n.
"""

# %%
# The counting function
# ---------------------
#
# ``sp(k)`` is the middle binomial coefficient and ``lasp(n)`` inverts it.

from boolgen import construct_genset, is_generating, lasp, min_genset_size_bruteforce, sp

for k in range(1, 11):
    print(f"sp({k:2d}) = {sp(k)}")

for n in (6, 100, 1000, 10**6, 10**9):
    print(f"lasp({n}) = {lasp(n)}")

# %%
# A generating set of minimum size
# --------------------------------
#
# For B_6 four elements suffice. Each atom of B_6 is picked out by a
# different 2-subset of the four generators, and the meet of that pair is
# exactly the atom.

h = construct_genset(6)
for i, x in enumerate(h, 1):
    print(f"h{i} = {x.to_bitstring()}  atoms {x.atom_indices()}")
print("generates B_6:", is_generating(h.components, 6))

# %%
# Nothing smaller works
# ---------------------
#
# For n up to 6 an exhaustive sweep over every k-subset of B_n confirms
# that lasp(n) is the true minimum. (n = 7 also works but takes a few
# seconds.)

for n in range(2, 7):
    print(f"n={n}: exhaustive minimum {min_genset_size_bruteforce(n)}, lasp {lasp(n)}")

# %%
# Large widths
# ------------
#
# The construction scales: B_1000 is generated by 13 elements.

big = construct_genset(1000)
print(big.k, big.is_generating())
