"""Do per-class maps beat one shared map?  A small controlled study.

Builds an unbalanced multi-class dataset (some classes have only a
handful of rows), then cross-validates three feature pipelines with the
same nearest-neighbor classifier and the same total unit budget:

  raw           classify the input features directly
  som-replace   one pooled map trained on all classes together
  csom-replace  one small map per class

Small classes tend to be swallowed by a pooled map, so the per-class
variant usually wins on exactly the folds where those classes appear.
"""

import numpy as np

from csomtex import Dataset, ExperimentConfig, run_experiment

SAMPLE_SIZES = (30, 10, 7, 8, 5, 7, 4)
DIM = 10


def make_sample(seed: int) -> Dataset:
    rng = np.random.default_rng(seed)
    means = rng.normal(0.0, 1.6, size=(len(SAMPLE_SIZES), DIM))
    X, labels = [], []
    for cls, n in enumerate(SAMPLE_SIZES):
        X.append(rng.normal(means[cls], 1.0, size=(n, DIM)))
        labels.extend([cls] * n)
    return Dataset(np.vstack(X), np.array(labels))


def main() -> None:
    n_classes = len(SAMPLE_SIZES)
    print(f"{n_classes} classes, sizes {SAMPLE_SIZES}, {DIM}-dim features")
    # equal budget: 7 maps of 2x2 = 28 units = one pooled 4x7 map
    grid = [
        ("raw", dict(pipeline="raw")),
        ("som-replace", dict(pipeline="som-replace", map_rows=4, map_cols=7)),
        ("csom-replace", dict(pipeline="csom-replace", map_rows=2, map_cols=2)),
    ]

    seeds = range(5)
    print("\n" + "  ".join(["seed".rjust(4)] + [name.rjust(14) for name, _ in grid]))
    totals = {name: [] for name, _ in grid}
    for seed in seeds:
        data = make_sample(seed)
        row = [f"{seed:>4}"]
        for name, overrides in grid:
            cfg = ExperimentConfig(
                classifier="knn", knn_k=1, folds=10, seed=seed, **overrides
            )
            report = run_experiment(data, cfg)
            totals[name].append(report.mean_accuracy)
            row.append(f"{report.mean_accuracy:>14.3f}")
        print("  ".join(row))

    print("\n" + "  ".join(
        ["mean".rjust(4)] + [f"{np.mean(totals[name]):>14.3f}" for name, _ in grid]
    ))

    wins = sum(
        csom > som for csom, som in zip(totals["csom-replace"], totals["som-replace"])
    )
    print(f"\nper-class maps beat the pooled map on {wins}/{len(totals['raw'])} seeds")

    # one confusion matrix, to see where the remaining errors live
    report = run_experiment(
        make_sample(0),
        ExperimentConfig(pipeline="csom-replace", map_rows=2, map_cols=2,
                         classifier="knn", knn_k=1, folds=10, seed=0),
    )
    print("\nconfusion for seed 0, csom-replace (rows: true, cols: predicted)")
    for cls, counts in zip(report.class_ids, report.confusion):
        print(f"  class {cls}: " + " ".join(f"{c:>3}" for c in counts))


if __name__ == "__main__":
    main()
