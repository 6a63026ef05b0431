"""Region-of-interest selection: pixelwise intensity segments and fixed blocks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FormatError
from .imaging import Image

KMEANS_MAX_ITER = 100

PIXELWISE = "pixelwise"
BLOCKWISE = "blockwise"


@dataclass(eq=False)
class RegionMask:
    """Boolean membership grid with the same dimensions as the source image."""

    member: np.ndarray  # (height, width) bool

    def __post_init__(self) -> None:
        self.member = np.asarray(self.member, dtype=bool)
        if self.member.ndim != 2 or self.member.size == 0:
            raise ValueError("mask must be a non-empty 2-D grid")
        if not self.member.any():
            raise ValueError("empty masks are never emitted")

    @property
    def height(self) -> int:
        return self.member.shape[0]

    @property
    def width(self) -> int:
        return self.member.shape[1]

    @property
    def size(self) -> int:
        return int(self.member.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegionMask):
            return NotImplemented
        return np.array_equal(self.member, other.member)


@dataclass
class RoiConfig:
    """Selection mode plus its knobs: segment count (pixelwise) or block side."""

    mode: str = PIXELWISE
    sn: int = 6
    block_size: int = 8
    min_region_pixels: int = 4

    def __post_init__(self) -> None:
        if self.mode not in (PIXELWISE, BLOCKWISE):
            raise ValueError(f"unknown roi mode {self.mode!r}")
        if self.sn < 1:
            raise ValueError("sn must be >= 1")
        if self.block_size < 2:
            raise ValueError("block_size must be >= 2")
        if self.min_region_pixels < 1:
            raise ValueError("min_region_pixels must be >= 1")


def pixelwise_segments(
    img: Image, sn: int, seed: int = 0, min_region_pixels: int = 1
) -> list[RegionMask]:
    """Cluster pixel intensities into at most ``sn`` segments.

    Runs 1-D k-means with centroids initialized at evenly spaced quantiles of
    the distinct intensity values, iterated to an assignment fixpoint (or 100
    iterations).  Masks come back ordered by ascending cluster centroid;
    segments smaller than ``min_region_pixels`` are dropped.  Fewer than
    ``sn`` distinct intensities yield correspondingly fewer masks.

    ``seed`` is accepted for interface uniformity; the quantile start makes
    the result independent of it.
    """
    del seed
    if sn < 1:
        raise ValueError("sn must be >= 1")
    values = img.pixels.ravel().astype(np.float64)
    distinct = np.unique(values)
    k = min(sn, distinct.size)
    centroids = np.quantile(distinct, (np.arange(k) + 0.5) / k)

    # Initial centroids are strictly increasing and 1-D k-means keeps them
    # that way, so nearest-centroid assignment (equidistant pixels going to
    # the lower cluster index) reduces to a sorted boundary search.
    assign = np.full(values.shape, -1, dtype=np.int64)
    for _ in range(KMEANS_MAX_ITER):
        bounds = (centroids[:-1] + centroids[1:]) / 2.0
        new_assign = np.searchsorted(bounds, values, side="left")
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(k):
            members = values[assign == j]
            if members.size:
                centroids[j] = members.mean()

    masks = []
    for j in range(k):  # centroid order is ascending by construction
        grid = (assign == j).reshape(img.pixels.shape)
        if grid.sum() >= min_region_pixels:
            masks.append(RegionMask(grid))
    return masks


def blockwise_partition(img: Image, block_size: int) -> list[RegionMask]:
    """Tile the image with non-overlapping square blocks, one mask per block.

    Blocks are laid out from the top-left in row-major order; partial blocks
    at the right and bottom edges are discarded.
    """
    if block_size < 2:
        raise ValueError("block_size must be >= 2")
    if img.height < block_size or img.width < block_size:
        raise ValueError(
            f"image {img.width}x{img.height} smaller than one "
            f"{block_size}x{block_size} block"
        )
    masks = []
    for br in range(img.height // block_size):
        for bc in range(img.width // block_size):
            grid = np.zeros((img.height, img.width), dtype=bool)
            grid[
                br * block_size : (br + 1) * block_size,
                bc * block_size : (bc + 1) * block_size,
            ] = True
            masks.append(RegionMask(grid))
    return masks


def select_regions(img: Image, cfg: RoiConfig, seed: int = 0) -> list[RegionMask]:
    """Dispatch to the configured selection mode."""
    if cfg.mode == PIXELWISE:
        return pixelwise_segments(
            img, cfg.sn, seed=seed, min_region_pixels=cfg.min_region_pixels
        )
    return blockwise_partition(img, cfg.block_size)


def mask_to_rle(mask: RegionMask) -> str:
    """Run-length encode a mask as one text line: ``width height run0 run1 ...``.

    Runs alternate starting with the non-member count (possibly 0) over the
    row-major flattening.
    """
    flat = mask.member.ravel()
    changes = np.flatnonzero(np.diff(flat)) + 1
    edges = np.concatenate(([0], changes, [flat.size]))
    runs = np.diff(edges).tolist()
    if flat[0]:
        runs = [0] + runs
    return " ".join([str(mask.width), str(mask.height)] + [str(r) for r in runs])


def mask_from_rle(line: str) -> RegionMask:
    """Inverse of mask_to_rle."""
    parts = line.split()
    if len(parts) < 3:
        raise FormatError(f"RLE mask line needs width, height and runs: {line!r}")
    try:
        width, height = int(parts[0]), int(parts[1])
        runs = [int(p) for p in parts[2:]]
    except ValueError:
        raise FormatError(f"non-integer token in RLE mask line: {line!r}") from None
    if sum(runs) != width * height or any(r < 0 for r in runs):
        raise FormatError("RLE runs do not cover the declared mask size")
    flat = np.zeros(width * height, dtype=bool)
    pos = 0
    inside = False
    for run in runs:
        if inside:
            flat[pos : pos + run] = True
        pos += run
        inside = not inside
    return RegionMask(flat.reshape(height, width))
