"""Concurrent self-organizing maps: one small map per class.

A CSOM classifier trains an independent SOM on each class's rows and
labels a new vector with the class whose map quantizes it best (the
smallest best-matching-unit distance wins).  This script trains a
three-class model, inspects the per-class error matrix, measures
held-out accuracy, and shows the two prototype transforms.
"""

import numpy as np

from csomtex import (
    Dataset,
    TrainingSchedule,
    classify,
    classify_dataset,
    train_csom,
    transform_append,
    transform_replace,
)


def make_blobs(n_per_class, dim, separation, seed):
    rng = np.random.default_rng(seed)
    X, labels = [], []
    for cls, n in enumerate(n_per_class):
        mean = np.zeros(dim)
        mean[cls % dim] = separation
        X.append(rng.normal(mean, 1.0, size=(n, dim)))
        labels.extend([cls] * n)
    return Dataset(np.vstack(X), np.array(labels))


def main() -> None:
    train_set = make_blobs([40, 40, 40], dim=4, separation=8.0, seed=0)
    test_set = make_blobs([25, 25, 25], dim=4, separation=8.0, seed=99)

    sched = TrainingSchedule(
        iterations=3000,
        alpha0=0.5,
        alpha_final=0.01,
        sigma0=1.0,
        sigma_final=0.5,
        seed=0,
    )
    model = train_csom(train_set, 2, 2, sched)
    print(f"trained {model.n_classes} maps of 2x2 units, dim {model.dim}")
    for cls, som in model.entries:
        print(f"  class {cls}: {len(som.weights)} prototypes")

    # Single-vector decision with the raw per-class distances.
    x = test_set.X[0]
    winner, errors = classify(model, x)
    print(f"\nfirst test vector -> class {winner} (true {test_set.labels[0]})")
    for cls, err in zip(model.class_ids, errors):
        marker = " <- winner" if cls == winner else ""
        print(f"  distance to map {cls}: {err:.3f}{marker}")

    preds, _ = classify_dataset(model, test_set.without_labels())
    accuracy = float(np.mean(preds == test_set.labels))
    print(f"\nheld-out accuracy: {accuracy:.3f} on {len(preds)} vectors")

    # Prototype transforms reuse the winning units as feature encoders.
    replaced = transform_replace(model, test_set)
    appended = transform_append(model, test_set)
    print(f"\nreplace: {test_set.dim} -> {replaced.dim} columns (nearest prototype)")
    print(f"append:  {test_set.dim} -> {appended.dim} columns (input ++ prototype)")
    distinct = {tuple(row) for row in replaced.X}
    print(f"replace output uses {len(distinct)} distinct prototype vectors")


if __name__ == "__main__":
    main()
