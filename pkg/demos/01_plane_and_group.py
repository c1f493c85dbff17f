# %% [markdown]
# # The plane PG(2,4) and its det-1 collineations and correlations
#
# Run with `python3 demos/01_plane_and_group.py`.

# %%
import numpy as np

from octalab import pg24, perm

plane = pg24.enumerate_plane()
print(len(plane.points), "points,", len(plane.lines), "lines,", len(plane.flags), "flags")
print("first point", plane.points[0], "lies on lines", plane.lines_on_point[0])

# %% [markdown]
# Hyperovals: six points, no three collinear.

# %%
H = pg24.enumerate_hyperovals()
print(len(H), "hyperovals; the first is", H[0])

# %% [markdown]
# A semilinear map becomes a permutation of the 42 points and lines.
# Transvections generate the matrix part; Frobenius and the standard duality
# add the outer part.

# %%
t = perm.semilinear_to_perm(perm.SemilinearDatum(pg24.transvection(0, 1, pg24.W)))
fixed = np.flatnonzero(t[:21] == np.arange(21))
print("a transvection fixes points", fixed.tolist())

L = perm.build_group_L34()
G = perm.build_group_G()
print("|L3(4)| =", L.order, " |G| =", G.order)

# %%
invs = G.central_involutions()
print(len(invs), "central involutions; centralizer order", len(G.centralizer(invs[0])))
