# %% [markdown]
# # A near octagon on 315 involutions
#
# Lines are the commuting triples {x, y, xy} in the two smallest conjugation
# orbits.

# %%
from octalab import geometry as geo, octagon

o = octagon.build_matrix_model()
print("triple orbit sizes", o.observed_sizes, "-> admissible", o.admissible)
print(o.geometry)

# %%
print("diameter", geo.verify_near_polygon(o.geometry))
print("order", geo.order_of(o.geometry))
print("points at distance 0..4:", octagon.distance_distribution(o.geometry))

# %% [markdown]
# Orbits of a point stabilizer, and how the lines run between them.

# %%
d, report = octagon.suborbit_report(o)
for name, orb in zip(d.names, d.orbits):
    print(f"{name:>4} {len(orb):>4}  lines to", {d.names[j]: c for j, c in d.lines_from(d.names.index(name)).items()})
print(report.to_text())

# %%
with open("suborbits.dot", "w") as fh:
    fh.write(d.to_dot())
print("wrote suborbits.dot")
