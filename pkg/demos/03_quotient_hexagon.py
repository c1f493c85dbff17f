# %% [markdown]
# # Quads, the spread and the quotient hexagon

# %%
from octalab import family, geometry as geo, octagon

o = octagon.build_matrix_model()
qd = octagon.quads_and_spread(o)
print(len(qd.quads), "quads of", len(qd.quads[0]), "points;", len(qd.spread), "spread lines")

# %% [markdown]
# The three involutions on a spread line share center and axis, so each
# spread line names a flag of the plane.

# %%
fm = octagon.flag_map(o, qd.spread)
print("spread line -> flag, first five:", fm[:5])
print(octagon.verify_quotient(o, qd).to_text())

# %% [markdown]
# The four local properties hold at every point with t' = 2.

# %%
r = family.check_family(o.geometry, qd.spread, 2, quads=qd.quads)
print(r.to_text())
for cls, row in r.data["multiplicities"].items():
    print(f"{cls:>4}", row)

# %% [markdown]
# With t' = 1 the only examples are products of a hexagon with a line.

# %%
g, S = family.build_product(family.fano_flag_geometry(), 3)
print(g, "order", geo.order_of(g), "passes:", family.check_family(g, S, 1).passed)
dec = family.recognize_product(g, S)
print("recovered copies of sizes", [len(f) for f in dec.fibers])
