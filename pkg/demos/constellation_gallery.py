"""Gallery of the built-in modulation formats inside the admissible cone.

Prints the power metrics of every format and draws the two-dimensional ones
as unit-diameter circles (nonoverlapping iff the minimum distance is one)
together with the cone boundary.
"""

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from imdd import (
    average_optical_coeff,
    get_format,
    format_names,
    mean_squared_norm,
    min_distance,
    peak_optical_coeff,
)

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT_DIR, exist_ok=True)

# ---------------------------------------------------------------------------
# metric table
# ---------------------------------------------------------------------------

print(f"{'format':10s} {'M':>2s} {'dim':>3s} {'d_min':>7s} {'Ebar':>8s} {'Phat':>8s} {'E|s|^2':>8s}")
for name in format_names():
    c = get_format(name)
    print(
        f"{name:10s} {c.size:2d} {c.dim:3d} {min_distance(c):7.4f} "
        f"{average_optical_coeff(c):8.4f} {peak_optical_coeff(c):8.4f} "
        f"{mean_squared_norm(c):8.4f}"
    )

# ---------------------------------------------------------------------------
# scatter the 2-D formats inside the cone
# ---------------------------------------------------------------------------

two_dim = ["t-avg-3", "t-peak-3", "t-4", "t-avg-8", "t-peak-8"]
fig, axes = plt.subplots(1, len(two_dim), figsize=(3.0 * len(two_dim), 3.6), sharey=True)

for ax, name in zip(axes, two_dim):
    pts = get_format(name).points
    top = pts[:, 0].max() + 0.8
    edge = top / math.sqrt(2.0)
    ax.fill_between([-edge, 0, edge], [top, 0, top], top, color="0.92", zorder=0)
    ax.plot([-edge, 0, edge], [top, 0, top], color="0.4", lw=1)
    for s2, s1 in pts[:, ::-1]:
        ax.add_patch(plt.Circle((s2, s1), 0.5, fill=False, color="tab:blue", lw=0.8))
    ax.plot(pts[:, 1], pts[:, 0], "k.", ms=6)
    ax.set_title(name)
    ax.set_xlabel("subcarrier coordinate")
    ax.set_aspect("equal")
    ax.set_xlim(-2.6, 2.6)
    ax.set_ylim(-0.7, 4.2)
axes[0].set_ylabel("DC coordinate")

fig.tight_layout()
path = os.path.join(OUT_DIR, "constellation_gallery.png")
fig.savefig(path, dpi=150)
print(f"\nwrote {path}")
