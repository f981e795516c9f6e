"""Run the constellation design solver across sizes and both power objectives.

For each size the solver packs unit-spaced points into the admissible cone.
The average-power optima fall on the lattice spanned by the two cone boundary
rays; the peak-power optima generally do not.
"""

import numpy as np

from imdd import DesignProblem, SolverSettings, is_cone_lattice_subset, solve

settings = SolverSettings(restarts=24, seed=0)

for objective in ("avg", "peak"):
    print(f"\n=== objective: {objective} ===")
    previous = None
    for m in range(2, 9):
        report = solve(DesignProblem(m, objective), settings)
        lattice = is_cone_lattice_subset(report.best, tol=1e-6)
        step = "" if previous is None else f" (+{report.objective_value - previous:.4f})"
        print(
            f"M={m}: objective={report.objective_value:.6f}{step} "
            f"lattice={'yes' if lattice else 'no':3s} "
            f"starts_at_optimum={report.restarts_hitting_best}/{settings.restarts + 1}"
        )
        previous = report.objective_value

    report = solve(DesignProblem(8, objective), settings)
    print("M=8 coordinates (canonical order):")
    print(np.array_str(report.best.points, precision=6, suppress_small=True))
