"""Shared fixtures: synthetic face photographs written as PGM files.

The corpus mimics portrait geometry (92x112, bright head oval on a dark
background with eye/mouth features and per-image jitter) so the pipeline
tests exercise realistic inputs without shipping a photo dataset.
"""
import numpy as np
import pytest

FACE_W, FACE_H = 92, 112


def write_pgm(path, pixels, maxval=255, ascii_format=False):
    """Write [0,1] pixels as P5 (default) or P2."""
    pixels = np.asarray(pixels, dtype=float)
    raw = np.clip(np.rint(pixels * maxval), 0, maxval).astype(np.int64)
    h, w = raw.shape
    if ascii_format:
        body = "\n".join(" ".join(str(v) for v in row) for row in raw)
        path.write_text(f"P2\n{w} {h}\n{maxval}\n{body}\n")
    else:
        header = f"P5\n{w} {h}\n{maxval}\n".encode()
        if maxval > 255:
            payload = raw.astype(">u2").tobytes()
        else:
            payload = raw.astype(np.uint8).tobytes()
        path.write_bytes(header + payload)


def synth_face_pixels(rng):
    """One synthetic portrait: head oval, eyes, mouth, camera noise.

    Feature sizes are chosen so eyes and mouth survive an 8x8 downscale,
    which keeps portraits distinguishable from blob-like imagery.
    """
    h, w = FACE_H, FACE_W
    y, x = np.mgrid[0:h, 0:w].astype(float)
    cx = w / 2 + rng.normal(0.0, 1.5)
    cy = h / 2 + 6 + rng.normal(0.0, 2.0)
    rx = 0.38 * w + rng.normal(0.0, 1.5)
    ry = 0.44 * h + rng.normal(0.0, 2.0)
    skin = 0.62 + rng.normal(0.0, 0.035)
    bg = 0.22 + rng.normal(0.0, 0.025)

    px = np.full((h, w), bg)
    head = ((x - cx) / rx) ** 2 + ((y - cy) / ry) ** 2 <= 1.0
    px[head] = skin
    # gentle top-lit shading across the head
    px[head] -= 0.10 * ((y[head] - cy) / ry)

    for side in (-1.0, 1.0):
        ex, ey = cx + side * 0.40 * rx, cy - 0.28 * ry
        eye = ((x - ex) / 8.0) ** 2 + ((y - ey) / 6.0) ** 2 <= 1.0
        px[eye] = 0.18 + rng.normal(0.0, 0.02)
    mouth = ((x - cx) / 20.0) ** 2 + ((y - (cy + 0.45 * ry)) / 5.0) ** 2 <= 1.0
    px[mouth] = 0.25 + rng.normal(0.0, 0.02)

    px += rng.normal(0.0, 0.025, size=(h, w))
    return np.clip(px, 0.0, 1.0)


def write_face_corpus(directory, count, seed):
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for i in range(count):
        write_pgm(directory / f"subject_{i:04d}.pgm", synth_face_pixels(rng))
    return directory


@pytest.fixture(scope="session")
def face_corpus_dir(tmp_path_factory):
    """200 portraits; the pipeline-level dataset."""
    return write_face_corpus(tmp_path_factory.mktemp("faces"), 200, seed=20250809)


@pytest.fixture(scope="session")
def small_face_dir(tmp_path_factory):
    """12 portraits for fast split-level unit tests."""
    return write_face_corpus(tmp_path_factory.mktemp("faces_small"), 12, seed=7)
