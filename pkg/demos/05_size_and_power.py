"""Size and power of the single-margin and dual schemes on synthetic panels.

Each replication draws a fresh 2x2 panel with normal noise and, when the
effect size is positive, a shift added to the treated-post cell.  At zero
effect the rejection rate estimates the size of the test (it should sit
near the nominal 5%); at a large effect it estimates power.  Replication
counts are kept small here so the demo runs in seconds; the acceptance
suite runs the full-scale calibration.
"""

from didperm import run_power_study

print("size at the null (no effect), 200 replications:")
study = run_power_study(
    cell_n=20, delta=0.0, noise_sd=1.0, replications=200, iterations=499, master_seed=1
)
print(study.render())

print("\npower at a one-standard-deviation effect, 200 replications:")
study = run_power_study(
    cell_n=20, delta=1.0, noise_sd=1.0, replications=200, iterations=499, master_seed=2
)
print(study.render())

print("\npower at a large (three sd) effect, 100 replications:")
study = run_power_study(
    cell_n=20, delta=3.0, noise_sd=1.0, replications=100, iterations=499, master_seed=3
)
print(study.render())
