# %% [markdown]
# # The Gewirtz graph and its special 8-sets

# %%
from octalab import gewirtz, graphs, octagon

gw = gewirtz.build_gewirtz()
print("srg parameters", graphs.srg_params(gw.graph), gw.metadata())

# %%
data, r = gewirtz.special_eight_sets(gw.graph)
print(r.to_text())
print("first special set", data.sets[0].vertices)

# %% [markdown]
# The central involutions of Aut(Gewirtz) give the same near octagon.

# %%
o_matrix = octagon.build_matrix_model()
o, link = gewirtz.link_suite(o_matrix, data)
print(link.to_text())
print(gewirtz.table_text(link.data["table"]))
