"""Project labeled features onto the directions that separate the classes.

The projection is PCA followed by LDA: PCA drops directions with no
variance (texture vectors are often partly redundant), then LDA rotates
what is left to maximize between-class over within-class scatter.  With c
classes at most c - 1 useful directions exist.
"""

import numpy as np

from csomtex import Dataset, fisher_criteria, fit_fisher, project_dataset

rng = np.random.default_rng(3)

# Three overlapping 5-D Gaussian classes with a shared anisotropic shape.
means = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0, 1.0, 0.0, -1.0, 0.5],
        [1.0, 4.0, -2.0, 0.0, 1.0],
    ]
)
mix = rng.normal(size=(5, 5)) * 0.3 + np.eye(5)
rows, labels = [], []
for cid, mu in enumerate(means):
    rows.append(rng.normal(size=(40, 5)) @ mix.T + mu)
    labels.extend([cid] * 40)
data = Dataset(np.vstack(rows), np.array(labels))

proj = fit_fisher(data)  # defaults to c - 1 = 2 output dimensions
z = project_dataset(proj, data)

print(f"projected {data.dim}-D features to {z.dim}-D")
print("fisher criterion per output axis (between/within scatter ratio):")
print("  " + " ".join(f"{v:.2f}" for v in fisher_criteria(proj, data)))
print()
print("class means in the projected plane:")
for cid in z.class_ids:
    mean = z.X[z.labels == cid].mean(axis=0)
    print(f"  class {cid}: ({mean[0]:7.3f}, {mean[1]:7.3f})")

# Distances tell the story: classes far apart, members near their mean.
spread = np.mean([np.linalg.norm(z.X[i] - z.X[z.labels == z.labels[i]].mean(axis=0))
                  for i in range(z.n)])
gaps = [np.linalg.norm(z.X[z.labels == a].mean(axis=0) - z.X[z.labels == b].mean(axis=0))
        for a in z.class_ids for b in z.class_ids if a < b]
print(f"\nmean within-class spread {spread:.2f} vs mean class gap {np.mean(gaps):.2f}")
