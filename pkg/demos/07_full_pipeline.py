"""The whole pipeline through the command line, start to finish.

Builds a small corpus of synthetic PGM textures in a temporary
directory, then drives the same entry point the `csomtex` console
script uses: extract texture features from the images, train a
per-class map model, classify the corpus against it, and run a
cross-validated comparison of feature pipelines.
"""

import json
import sys
import tempfile
from pathlib import Path

import numpy as np

from csomtex import Image, save_pgm
from csomtex.cli import main

CLASSES = 3
PER_CLASS = 6


def texture(cls: int, idx: int) -> Image:
    """16x16 image with class-specific structure and per-image jitter."""
    rng = np.random.default_rng(1000 * cls + idx)
    if cls == 0:
        px = rng.integers(1, 256, size=(16, 16))
    elif cls == 1:
        rows = np.where(np.arange(16) % 2 == 0, 20, 235)
        px = rows[:, None] + rng.integers(0, 21, size=(16, 16))
    else:
        cols = np.where(np.arange(16) % 2 == 0, 20, 235)
        px = cols[None, :] + rng.integers(0, 21, size=(16, 16))
    return Image(np.clip(px, 1, 255), 255)


def build_corpus(root: Path) -> None:
    (root / "imgs").mkdir()
    lines = []
    for cls in range(CLASSES):
        for idx in range(PER_CLASS):
            name = f"imgs/c{cls}_{idx}.pgm"
            (root / name).write_bytes(save_pgm(texture(cls, idx)))
            lines.append(f"{name},{cls}")
    (root / "manifest.txt").write_text("\n".join(lines) + "\n")
    (root / "config.json").write_text(
        json.dumps(
            {
                "roi": {"mode": "blockwise", "block_size": 8},
                "texture": {"levels": 3},
                "map": {"rows": 2, "cols": 2},
                "folds": 3,
                "evaluate": {
                    "pipelines": ["raw", "csom-replace"],
                    "classifiers": ["knn"],
                    "seeds": [0],
                },
            },
            indent=2,
        )
    )


def run(argv: list[str]) -> None:
    print(f"\n$ csomtex {' '.join(argv)}")
    code = main(argv)
    if code != 0:
        raise SystemExit(f"command failed with exit code {code}")


def main_demo() -> None:
    # keep stdout and the CLI's stderr notes interleaved when piped
    sys.stdout.reconfigure(line_buffering=True)
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        build_corpus(root)
        print(f"corpus: {CLASSES * PER_CLASS} PGM textures in {CLASSES} classes")

        cfg = str(root / "config.json")
        features = str(root / "features.csv")
        model = str(root / "model.txt")

        run(["extract", str(root / "manifest.txt"), "-o", features, "--config", cfg])
        lines = Path(features).read_text().splitlines()
        print(f"-> {features}: {len(lines) - 1} rows, header {lines[0]}")

        run(["train", features, "-o", model, "--config", cfg])
        text = Path(model).read_text()
        print(f"-> {model}: {len(text.splitlines())} lines, checksummed")
        print("   " + "\n   ".join(text.splitlines()[:6]))

        run(["classify", model, features])

        run(["evaluate", features, "--config", cfg])


if __name__ == "__main__":
    main_demo()
