"""Co-occurrence matrices, Haralick features, and feature assembly."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csomtex import (
    DataError,
    Glcm,
    Image,
    RegionMask,
    RoiConfig,
    ShapeError,
    TextureConfig,
    cooccurrence,
    extract_features,
    feature_length,
    haralick4,
)
from helpers import image_from, random_image

FULL = lambda img: RegionMask(np.ones(img.pixels.shape, dtype=bool))  # noqa: E731


def glcm_oracle(img: Image, mask: RegionMask, offset, symmetric: bool):
    """Independent pair enumerator: walk every pixel, count neighbors."""
    levels = img.max_value + 1
    dr, dc = offset
    counts = np.zeros((levels, levels), dtype=np.int64)
    h, w = img.pixels.shape
    for r in range(h):
        for c in range(w):
            r2, c2 = r + dr, c + dc
            if not (0 <= r2 < h and 0 <= c2 < w):
                continue
            if not (mask.member[r, c] and mask.member[r2, c2]):
                continue
            counts[img.pixels[r, c], img.pixels[r2, c2]] += 1
            if symmetric:
                counts[img.pixels[r2, c2], img.pixels[r, c]] += 1
    total = counts.sum()
    p = counts / total if total else counts.astype(np.float64)
    return counts, p, int(total)


class TestCooccurrence:
    def test_horizontal_pairs_hand_case(self):
        img = image_from([[0, 0], [1, 1]], max_value=1)
        g = cooccurrence(img, FULL(img), (0, 1))
        assert g.pair_count == 2
        assert g.p.tolist() == [[0.5, 0.0], [0.0, 0.5]]

    def test_vertical_columns_hand_case(self):
        img = image_from([[0, 1], [0, 1]], max_value=1)
        g = cooccurrence(img, FULL(img), (0, 1))
        assert g.pair_count == 2
        assert g.p.tolist() == [[0.0, 1.0], [0.0, 0.0]]

    def test_single_pixel_has_no_pairs(self):
        img = image_from([[0]], max_value=1)
        g = cooccurrence(img, FULL(img), (1, 1))
        assert g.pair_count == 0
        assert not g.p.any()

    def test_mask_restricts_both_endpoints(self):
        img = image_from([[0, 1, 0]], max_value=1)
        mask = RegionMask(np.array([[True, True, False]]))
        g = cooccurrence(img, mask, (0, 1))
        assert g.pair_count == 1
        assert g.p[0, 1] == 1.0

    def test_symmetric_doubles_pair_count(self):
        img = image_from([[0, 1], [1, 0]], max_value=1)
        plain = cooccurrence(img, FULL(img), (1, 0))
        sym = cooccurrence(img, FULL(img), (1, 0), symmetric=True)
        assert sym.pair_count == 2 * plain.pair_count
        np.testing.assert_allclose(sym.p, (plain.p + plain.p.T) / 2.0, atol=1e-15)

    def test_negative_column_offset(self):
        img = image_from([[0, 1, 2]], max_value=2)
        g = cooccurrence(img, FULL(img), (0, -1))
        fwd = cooccurrence(img, FULL(img), (0, 1))
        assert g.pair_count == fwd.pair_count
        np.testing.assert_array_equal(g.p, fwd.p.T)

    def test_mask_shape_mismatch(self):
        img = image_from([[0, 1]], max_value=1)
        with pytest.raises(ShapeError):
            cooccurrence(img, RegionMask(np.ones((2, 2), dtype=bool)), (0, 1))

    def test_zero_offset_rejected(self):
        img = image_from([[0, 1]], max_value=1)
        with pytest.raises(ValueError):
            cooccurrence(img, FULL(img), (0, 0))

    def test_offset_larger_than_image(self):
        img = image_from([[0, 1]], max_value=1)
        g = cooccurrence(img, FULL(img), (5, 0))
        assert g.pair_count == 0

    @settings(max_examples=60, deadline=None)
    @given(
        seed=st.integers(0, 100_000),
        levels=st.sampled_from([2, 3, 4]),
        offset=st.sampled_from([(0, 1), (1, 0), (1, 1), (1, -1)]),
        symmetric=st.booleans(),
    )
    def test_matches_bruteforce_oracle(self, seed, levels, offset, symmetric):
        rng = np.random.default_rng(seed)
        img = random_image(rng, 8, 8, levels)
        mask = RegionMask(rng.random((8, 8)) < 0.7) if seed % 2 else FULL(img)
        if not mask.member.any():
            mask = FULL(img)
        g = cooccurrence(img, mask, offset, symmetric=symmetric)
        counts, p, total = glcm_oracle(img, mask, offset, symmetric)
        assert g.pair_count == total
        np.testing.assert_allclose(g.p, p, atol=1e-12)


class TestHaralick:
    def test_diagonal_glcm(self):
        g = Glcm(2, np.array([[0.5, 0.0], [0.0, 0.5]]), 2)
        energy, contrast, entropy, homogeneity = haralick4(g)
        assert abs(energy - 0.5) < 1e-12
        assert contrast == 0.0
        assert abs(entropy - math.log(2)) < 1e-12
        assert abs(homogeneity - 1.0) < 1e-12

    def test_single_cell_glcm(self):
        g = Glcm(2, np.array([[0.0, 1.0], [0.0, 0.0]]), 2)
        assert haralick4(g) == (1.0, 1.0, 0.0, 0.5)

    def test_empty_glcm_is_all_zero(self):
        g = Glcm(2, np.zeros((2, 2)), 0)
        assert haralick4(g) == (0.0, 0.0, 0.0, 0.0)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 100_000), levels=st.sampled_from([2, 3, 4]))
    def test_ranges_when_nonempty(self, seed, levels):
        rng = np.random.default_rng(seed)
        img = random_image(rng, 8, 8, levels)
        g = cooccurrence(img, FULL(img), (0, 1))
        energy, contrast, entropy, homogeneity = haralick4(g)
        assert 0.0 < energy <= 1.0
        assert 0.0 < homogeneity <= 1.0
        assert contrast >= 0.0
        assert 0.0 <= entropy <= 2.0 * math.log(levels)


class TestExtractFeatures:
    def test_blockwise_single_block_is_its_features(self):
        rng = np.random.default_rng(1)
        img = random_image(rng, 4, 4, 3)
        roi = RoiConfig(mode="blockwise", block_size=4)
        tex = TextureConfig(levels=3, offsets=((0, 1),))
        vec = extract_features(img, roi, tex)
        g = cooccurrence(img, FULL(img), (0, 1))
        np.testing.assert_allclose(vec, haralick4(g), atol=1e-15)

    def test_blockwise_identical_blocks_average_to_one_block(self):
        tile = np.array([[0, 1], [2, 0]])
        img = Image(np.tile(tile, (1, 2)), 2)
        roi = RoiConfig(mode="blockwise", block_size=2)
        tex = TextureConfig(levels=3, offsets=((1, 0),))
        two = extract_features(img, roi, tex)
        one = extract_features(Image(tile, 2), roi, tex)
        np.testing.assert_allclose(two, one, atol=1e-15)

    def test_pixelwise_pads_missing_segments(self):
        img = image_from([[1, 1], [1, 1]], max_value=2)
        roi = RoiConfig(mode="pixelwise", sn=2, min_region_pixels=1)
        tex = TextureConfig(levels=3, offsets=((0, 1),))
        vec = extract_features(img, roi, tex)
        assert vec.shape == (8,)
        assert vec[4:].tolist() == [0.0, 0.0, 0.0, 0.0]
        assert vec[:4].tolist() == list(haralick4(cooccurrence(img, FULL(img), (0, 1))))

    def test_lengths_fixed_by_config(self):
        pix = RoiConfig(mode="pixelwise", sn=6)
        blk = RoiConfig(mode="blockwise", block_size=8)
        tex = TextureConfig(levels=3)  # four default offsets
        assert feature_length(pix, tex) == 6 * 4 * 4
        assert feature_length(blk, tex) == 4 * 4
        rng = np.random.default_rng(7)
        img = random_image(rng, 16, 16, 3)
        assert extract_features(img, pix, tex).shape == (96,)
        assert extract_features(img, blk, tex).shape == (16,)

    def test_unquantized_input_rejected(self):
        img = image_from([[0, 128], [255, 3]], max_value=255)
        with pytest.raises(ShapeError):
            extract_features(img, RoiConfig(), TextureConfig(levels=3))

    def test_no_masks_error_names_image(self):
        img = image_from([[0, 1], [2, 0]], max_value=2)
        roi = RoiConfig(mode="pixelwise", sn=3, min_region_pixels=99)
        with pytest.raises(DataError, match="probe.pgm"):
            extract_features(img, roi, TextureConfig(levels=3), name="probe.pgm")

    def test_config_validation(self):
        with pytest.raises(ValueError):
            TextureConfig(levels=1)
        with pytest.raises(ValueError):
            TextureConfig(offsets=())
        with pytest.raises(ValueError):
            TextureConfig(offsets=((0, 0),))
