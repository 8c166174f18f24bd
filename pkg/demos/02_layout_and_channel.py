"""Drop a desk-scale network and inspect its coupling structure.

Generates one macro site with four picos per sector and ten UEs per
pico, builds the pathloss/gain matrices, and plots the drop to
layout.svg.
"""

import numpy as np

from picotdd import channel, topology

layout = topology.generate_layout(n_sites=1, picos_per_sector=4,
                                  ues_per_pico=10, seed=7)
print(f"{layout.n_picos} picos, {layout.n_ues} UEs")

model = channel.default_pathloss_model()
cm = channel.build_coupling_matrix(layout, model)

pp = cm.pathloss_db[:layout.n_picos, :layout.n_picos]
off_diag = pp[~np.isinf(pp)]
print(f"pico-pico pathloss: min {off_diag.min():.1f} dB, "
      f"median {np.median(off_diag):.1f} dB")

serving_pl = cm.pathloss_db[np.arange(layout.n_ues) + layout.n_picos,
                            layout.serving]
print(f"serving-link pathloss: {serving_pl.min():.1f} .. {serving_pl.max():.1f} dB")

# neighbors inside the 130 dB threshold are the candidate strong aggressors
within = (pp <= 130.0).sum(axis=1)
print(f"strong-interferer candidates per pico: {within.tolist()}")

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, ax = plt.subplots(figsize=(6, 6))
ax.scatter(layout.ue_xy[:, 0], layout.ue_xy[:, 1], s=8, alpha=0.6, label="UE")
ax.scatter(layout.pico_xy[:, 0], layout.pico_xy[:, 1], marker="^", s=60,
           color="crimson", label="pico eNB")
ax.scatter(layout.site_xy[:, 0], layout.site_xy[:, 1], marker="s", s=80,
           color="black", label="macro site (geometry only)")
for p in layout.pico_xy:
    ax.add_patch(plt.Circle(p, 40.0, fill=False, alpha=0.3))
ax.set_aspect("equal")
ax.legend()
ax.set_xlabel("x [m]")
ax.set_ylabel("y [m]")
fig.tight_layout()
fig.savefig("layout.svg")
print("wrote layout.svg")
