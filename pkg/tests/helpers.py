"""Shared synthetic-data builders for the test suite."""

from __future__ import annotations

import numpy as np

from csomtex import Dataset, Image


def gaussian_blobs(
    n_per_class,
    dim: int = 6,
    separation: float = 10.0,
    std: float = 1.0,
    seed: int = 0,
) -> Dataset:
    """Labeled draws from one isotropic Gaussian per class.

    Class means sit at separation * e_k along distinct axes (wrapping with an
    offset when classes outnumber dimensions), so consecutive means are at
    least ``separation`` apart while cluster std stays ``std``.
    """
    rng = np.random.default_rng(seed)
    rows = []
    labels = []
    for cls, n in enumerate(n_per_class):
        mean = np.zeros(dim)
        mean[cls % dim] = separation * (1 + cls // dim)
        if cls // dim:
            mean[(cls + 1) % dim] = separation
        rows.append(rng.normal(mean, std, size=(n, dim)))
        labels.extend([cls] * n)
    return Dataset(np.vstack(rows), np.array(labels, dtype=np.int64))


def image_from(rows, max_value: int = 255) -> Image:
    return Image(np.array(rows, dtype=np.int64), max_value)


def random_image(rng: np.random.Generator, h: int, w: int, levels: int) -> Image:
    return Image(rng.integers(0, levels, size=(h, w)), levels - 1)
