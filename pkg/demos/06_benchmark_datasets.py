"""Reproduce the bundled benchmark results from cell means alone.

Six classic 2x2 outcomes ship with the package as cell-mean summaries
plus reference null intervals.  Fixtures matching the cell means exactly
reproduce every point estimate; the reference intervals (which depend on
the original unpublished samples) reproduce every decision through the
open-interval rule.
"""

import didperm as dp

print(f"{'dataset':18s} {'DiD':>8s} {'reference interval':>22s} {'decision':>14s}")
for dataset in dp.ALL_DATASETS:
    sample = dp.make_fixture(dataset)
    value = dp.did_value(sample)
    ref = dataset.reference["dual"]
    decision = "rejected" if dp.decide(dataset.observed, ref.lower, ref.upper) else "not rejected"
    print(
        f"{dataset.dataset_id:18s} {value:>8.4f} "
        f"({ref.lower:>8.4f}, {ref.upper:>8.4f}) {decision:>14s}"
    )

print("\nfull simulated run on the refugee-arrivals fixture (dual scheme):")
sample = dp.make_fixture(dp.REFUGEE_ARRIVALS, per_cell=24)
null = dp.simulate_null(
    sample,
    dp.RandomizationScheme(dp.Margins.DUAL, dp.Mode.FIXED_MARGINS),
    iterations=15_000,
    master_seed=7,
)
result = dp.test_significance(dp.did_value(sample), null)
print(
    f"observed {result.observed:.4f}, simulated interval "
    f"({result.lower:.4f}, {result.upper:.4f}), "
    f"{'rejected' if result.reject else 'not rejected'}, p={result.p_value:.4f}"
)
