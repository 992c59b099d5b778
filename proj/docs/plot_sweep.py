"""Plot a sweep: minimizers for each eps (dashed) over the reference (solid).

    python docs/plot_sweep.py out/fig1

Scalar runs only. Not used by the build or the tests.
"""
import pathlib
import sys

import matplotlib.pyplot as plt
import pandas as pd

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "out/fig1")
ref = pd.read_csv(out / "reference.csv")
plt.plot(ref["t"], ref["u"], "k-", label="limit")
summary = pd.read_csv(out / "sweep_summary.csv")
for eps in summary["eps"]:
    traj = pd.read_csv(out / f"trajectory_eps{eps:g}.csv")
    plt.plot(traj["t"], traj["u"], "--", label=f"eps = {eps:g}")
plt.xlabel("t")
plt.ylabel("u")
plt.legend()
plt.savefig(out / "sweep.png", dpi=150)
