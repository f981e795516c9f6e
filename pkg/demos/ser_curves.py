"""Monte Carlo symbol error rates against the union bound.

Vector-channel and waveform-level simulations of the same formats coincide
(the correlator bank reduces the sampled waveform to the vector channel), and
both hug the union bound at high SNR.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from imdd import ChannelConfig, get_format, predicted_ser, run_vector, run_waveform

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT_DIR, exist_ok=True)

sigmas = np.linspace(0.12, 0.35, 10)
fig, ax = plt.subplots(figsize=(6.5, 4.5))

for name, color in [("ook", "tab:gray"), ("t-4", "tab:blue"), ("t-peak-8", "tab:green")]:
    c = get_format(name)
    bound = [predicted_ser(c, s) for s in sigmas]
    mc_vec, mc_wave = [], []
    for i, s in enumerate(sigmas):
        ch = ChannelConfig(noise_sigma=float(s), n_symbols=200_000, seed=40 + i)
        mc_vec.append(run_vector(c, ch).ser)
        mc_wave.append(run_waveform(c, ch).ser)
    ax.semilogy(sigmas, bound, "-", color=color, lw=1.1, label=f"{name} union bound")
    ax.semilogy(sigmas, mc_vec, "o", color=color, ms=4, label=f"{name} vector MC")
    ax.semilogy(sigmas, mc_wave, "x", color=color, ms=5, label=f"{name} waveform MC")

ax.set_xlabel("noise std per dimension")
ax.set_ylabel("symbol error rate")
ax.set_ylim(1e-6, 1)
ax.grid(alpha=0.3, which="both")
ax.legend(fontsize=8)

fig.tight_layout()
path = os.path.join(OUT_DIR, "ser_curves.png")
fig.savefig(path, dpi=150)
print(f"wrote {path}")
