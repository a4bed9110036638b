"""Image ingestion, preprocessing, synthetic non-faces, and dataset splits.

Only PGM (P2/P5) is parsed, keeping the ingestion surface auditable and
dependency-free; convert other formats externally. Preprocessing is
resize (box-filter area average) -> flatten -> normalize, so every vector
a split stores is unit norm and ready for amplitude encoding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .encoding import normalize
from .exceptions import DataError, PgmParseError
from .validation import FACE, NONFACE, check_power_of_two

NONFACE_KINDS = ("noise", "gradient", "checker", "blobs")
TRAIN = "train"
TEST = "test"

_WS = frozenset(b" \t\n\r\x0b\x0c")
_HASH = ord("#")


@dataclass(frozen=True)
class GrayImage:
    """Grayscale raster; pixels is a (height, width) array of [0,1] floats."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("pixels must be a 2-D array with positive dims")
        if not np.all(np.isfinite(px)):
            raise ValueError("pixels contain non-finite values")
        if px.min() < 0.0 or px.max() > 1.0:
            raise ValueError("pixel intensities must lie in [0, 1]")
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


# ---------------------------------------------------------------------------
# PGM parsing
# ---------------------------------------------------------------------------

def _skip_space(data: bytes, pos: int) -> int:
    while pos < len(data):
        byte = data[pos]
        if byte in _WS:
            pos += 1
        elif byte == _HASH:
            while pos < len(data) and data[pos] not in (10, 13):
                pos += 1
        else:
            break
    return pos


def _read_token(data: bytes, pos: int, what: str):
    pos = _skip_space(data, pos)
    if pos >= len(data):
        raise PgmParseError(f"file ends before {what}", pos)
    start = pos
    while pos < len(data) and data[pos] not in _WS and data[pos] != _HASH:
        pos += 1
    return data[start:pos], start, pos


def _read_header_int(data: bytes, pos: int, what: str, lo: int, hi: int):
    token, start, pos = _read_token(data, pos, what)
    try:
        value = int(token)
    except ValueError:
        raise PgmParseError(
            f"cannot parse {what} from {token!r}", start
        ) from None
    if not lo <= value <= hi:
        raise PgmParseError(
            f"{what} {value} outside [{lo}, {hi}]", start
        )
    return value, pos


def load_pgm(path) -> GrayImage:
    """Parse a P2 (ASCII) or P5 (binary) PGM file.

    Intensities are scaled to [0,1] by the header maxval. Parse errors carry
    the byte offset of the offending content.
    """
    path = Path(path)
    data = path.read_bytes()
    magic, start, pos = _read_token(data, 0, "magic number")
    if magic not in (b"P2", b"P5"):
        raise PgmParseError(f"bad magic {magic!r}, expected P2 or P5", start)
    width, pos = _read_header_int(data, pos, "width", 1, 10**6)
    height, pos = _read_header_int(data, pos, "height", 1, 10**6)
    maxval, pos = _read_header_int(data, pos, "maxval", 1, 65535)
    count = width * height

    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        if pos >= len(data) or data[pos] not in _WS:
            raise PgmParseError("missing whitespace before raster", pos)
        pos += 1
        bytes_per = 2 if maxval > 255 else 1
        need = count * bytes_per
        if len(data) - pos < need:
            raise PgmParseError(
                f"truncated raster: need {need} bytes, have {len(data) - pos}",
                len(data),
            )
        dtype = ">u2" if bytes_per == 2 else np.uint8
        raw = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
        raw = raw.astype(np.int64)
        if raw.max() > maxval:
            bad = int(np.argmax(raw > maxval))
            raise PgmParseError(
                f"sample {raw[bad]} exceeds maxval {maxval}",
                pos + bad * bytes_per,
            )
    else:
        values = np.empty(count, dtype=np.int64)
        for i in range(count):
            token, start, pos = _read_token(data, pos, f"sample {i}")
            try:
                value = int(token)
            except ValueError:
                raise PgmParseError(
                    f"cannot parse sample {i} from {token!r}", start
                ) from None
            if not 0 <= value <= maxval:
                raise PgmParseError(
                    f"sample {value} outside [0, maxval={maxval}]", start
                )
            values[i] = value
        raw = values

    pixels = raw.reshape(height, width) / float(maxval)
    return GrayImage(pixels=pixels)


# ---------------------------------------------------------------------------
# preprocessing
# ---------------------------------------------------------------------------

def _overlap_weights(n_in: int, n_out: int) -> np.ndarray:
    """W[o, i] = fraction of output cell o covered by input cell i."""
    ratio = n_in / n_out
    weights = np.zeros((n_out, n_in))
    for o in range(n_out):
        lo = o * ratio
        hi = (o + 1) * ratio
        first = int(math.floor(lo))
        last = min(int(math.ceil(hi)), n_in)
        for i in range(first, last):
            cover = min(hi, i + 1.0) - max(lo, float(i))
            if cover > 0.0:
                weights[o, i] = cover / ratio
    return weights


def resize_area_average(img: GrayImage, out_w: int, out_h: int) -> GrayImage:
    """Box-filter downscale/upscale with correct fractional coverage."""
    if out_w < 1 or out_h < 1:
        raise ValueError(f"output dims must be >= 1, got {out_w}x{out_h}")
    w_rows = _overlap_weights(img.height, out_h)
    w_cols = _overlap_weights(img.width, out_w)
    out = w_rows @ img.pixels @ w_cols.T
    # weighted means stay in [0,1] up to rounding dust
    return GrayImage(pixels=np.clip(out, 0.0, 1.0))


def flatten(img: GrayImage) -> np.ndarray:
    """Row-major copy; entry (r, c) lands at index width*r + c."""
    check_power_of_two(img.width * img.height, "pixel count")
    return img.pixels.reshape(-1).copy()


def center_crop_square(img: GrayImage) -> GrayImage:
    side = min(img.width, img.height)
    top = (img.height - side) // 2
    left = (img.width - side) // 2
    return GrayImage(pixels=img.pixels[top:top + side, left:left + side].copy())


def target_geometry(dim: int) -> tuple:
    """(height, width) for a dim-length vector; square when log2(dim) is even."""
    check_power_of_two(dim, "dim")
    k = dim.bit_length() - 1
    return 2 ** (k // 2), 2 ** (k - k // 2)


def preprocess_image(img: GrayImage, dim: int, square: str = "crop") -> np.ndarray:
    """Raw feature vector in [0,1]: square ->  resize -> flatten."""
    if square not in ("crop", "squash"):
        raise ValueError(f"square must be 'crop' or 'squash', got {square!r}")
    height, width = target_geometry(dim)
    if square == "crop":
        img = center_crop_square(img)
    return flatten(resize_area_average(img, width, height))


def preprocess_unit(img: GrayImage, dim: int, square: str = "crop") -> np.ndarray:
    """Unit feature vector ready for amplitude encoding."""
    return normalize(preprocess_image(img, dim, square))


# ---------------------------------------------------------------------------
# synthetic non-faces
# ---------------------------------------------------------------------------

def generate_nonface(kind: str, width: int, height: int, seed: int) -> GrayImage:
    """Deterministic synthetic image standing in for a non-face photo."""
    if kind not in NONFACE_KINDS:
        raise ValueError(f"kind must be one of {NONFACE_KINDS}, got {kind!r}")
    if width < 1 or height < 1:
        raise ValueError("dims must be >= 1")
    rng = np.random.default_rng([NONFACE_KINDS.index(kind), int(seed)])
    ygrid, xgrid = np.mgrid[0:height, 0:width].astype(float)

    if kind == "noise":
        px = rng.uniform(size=(height, width))
    elif kind == "gradient":
        theta = rng.uniform(0.0, 2.0 * np.pi)
        ramp = np.cos(theta) * xgrid + np.sin(theta) * ygrid
        span = ramp.max() - ramp.min()
        if span > 0.0:
            px = (ramp - ramp.min()) / span
        else:
            px = np.full((height, width), 0.5)
    elif kind == "checker":
        period = int(rng.integers(1, max(2, min(width, height) // 2 + 1)))
        phase = int(rng.integers(2))
        cells = ((xgrid // period + ygrid // period + phase) % 2)
        low = rng.uniform(0.0, 0.35)
        high = rng.uniform(0.65, 1.0)
        px = low + cells * (high - low)
    else:  # blobs
        px = np.full((height, width), rng.uniform(0.1, 0.9))
        for _ in range(int(rng.integers(1, 6))):
            cy = rng.uniform(0, height)
            cx = rng.uniform(0, width)
            ry = rng.uniform(max(1.0, height / 8), max(1.5, height / 2))
            rx = rng.uniform(max(1.0, width / 8), max(1.5, width / 2))
            value = rng.uniform(0.1, 0.9)
            mask = ((ygrid - cy) / ry) ** 2 + ((xgrid - cx) / rx) ** 2 <= 1.0
            px[mask] = value
    return GrayImage(pixels=np.clip(px, 0.0, 1.0))


def synthesize_nonfaces(count: int, width: int, height: int, seed: int):
    """count images cycling the kinds in equal proportion; returns (tag, image)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    out = []
    for i in range(count):
        kind = NONFACE_KINDS[i % len(NONFACE_KINDS)]
        sub = int(np.random.SeedSequence([int(seed), i]).generate_state(1)[0])
        out.append((f"synthetic:{kind}:{i}", generate_nonface(kind, width, height, sub)))
    return out


# ---------------------------------------------------------------------------
# splits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitEntry:
    id: str
    label: str
    role: str
    source: str
    vector: np.ndarray


@dataclass
class DatasetSplit:
    """Preprocessed dataset partition; every vector is unit norm."""

    train_faces: list
    test_faces: list
    test_nonfaces: list
    train_nonfaces: list = field(default_factory=list)
    seed: int = 0
    dim: int = 64

    def __post_init__(self):
        ids = [e.id for e in self.entries()]
        if len(ids) != len(set(ids)):
            raise ValueError("split entries carry duplicate ids")
        for e in self.entries():
            if e.vector.size != self.dim:
                raise ValueError(
                    f"entry {e.id} has dim {e.vector.size}, split dim is {self.dim}"
                )

    def entries(self):
        return (list(self.train_faces) + list(self.train_nonfaces)
                + list(self.test_faces) + list(self.test_nonfaces))


def load_image_dir(directory) -> list:
    """All *.pgm files sorted by name; per-file failures are collected."""
    directory = Path(directory)
    if not directory.is_dir():
        raise DataError(f"not a directory: {directory}")
    paths = sorted(p for p in directory.iterdir()
                   if p.suffix.lower() == ".pgm" and p.is_file())
    if not paths:
        raise DataError(f"no .pgm files in {directory}")
    images = []
    failures = []
    for p in paths:
        try:
            images.append((str(p), load_pgm(p)))
        except (PgmParseError, OSError) as exc:
            failures.append(f"{p}: {exc}")
    if failures:
        raise DataError("unreadable images:\n" + "\n".join(failures))
    return images


def _entry(eid, label, role, source, raw_vector):
    try:
        vec = normalize(raw_vector)
    except ValueError:
        raise DataError(f"{source}: preprocessed vector has zero norm") from None
    return SplitEntry(id=eid, label=label, role=role, source=source, vector=vec)


def make_split(
    face_dir,
    nonface_source=None,
    train_n: int = 300,
    dim: int = 64,
    seed: int = 0,
    square: str = "crop",
    nonface_train_n: int = 0,
) -> DatasetSplit:
    """Load, preprocess and partition the dataset deterministically.

    Faces come from face_dir; non-faces from a directory path, or synthesized
    when nonface_source is a count (None means one per face). Faces split
    train/test by a seeded shuffle; non-faces all go to test unless
    nonface_train_n asks for a train share (needed by the baseline trainers).
    """
    height, width = target_geometry(dim)
    faces = load_image_dir(face_dir)
    if train_n < 1:
        raise DataError(f"train_n must be >= 1, got {train_n}")
    if len(faces) < train_n + 1:
        raise DataError(
            f"need at least {train_n + 1} face images, found {len(faces)}"
        )

    if nonface_source is None:
        nonfaces = synthesize_nonfaces(len(faces), width, height, seed)
    elif isinstance(nonface_source, int):
        nonfaces = synthesize_nonfaces(nonface_source, width, height, seed)
    else:
        nonfaces = load_image_dir(nonface_source)
    if nonface_train_n < 0 or len(nonfaces) < nonface_train_n + 1:
        raise DataError(
            f"need at least {nonface_train_n + 1} non-face images, "
            f"found {len(nonfaces)}"
        )

    rng = np.random.default_rng(seed)
    face_order = rng.permutation(len(faces))
    nonface_order = rng.permutation(len(nonfaces))

    def build(records, order, label, prefix, n_train):
        train, test = [], []
        train_idx = set(order[:n_train].tolist())
        for i, (source, img) in enumerate(records):
            raw = preprocess_image(img, dim, square)
            role = TRAIN if i in train_idx else TEST
            entry = _entry(f"{prefix}_{i:04d}", label, role, source, raw)
            (train if role == TRAIN else test).append(entry)
        return train, test

    train_faces, test_faces = build(faces, face_order, FACE, "face", train_n)
    train_nonfaces, test_nonfaces = build(
        nonfaces, nonface_order, NONFACE, "nonface", nonface_train_n
    )
    return DatasetSplit(
        train_faces=train_faces,
        test_faces=test_faces,
        test_nonfaces=test_nonfaces,
        train_nonfaces=train_nonfaces,
        seed=seed,
        dim=dim,
    )


def manifest_text(split: DatasetSplit) -> str:
    """One line per sample: id<TAB>label<TAB>role<TAB>source-path."""
    lines = []
    for group in (split.train_faces, split.train_nonfaces,
                  split.test_faces, split.test_nonfaces):
        for e in sorted(group, key=lambda s: s.id):
            lines.append(f"{e.id}\t{e.label}\t{e.role}\t{e.source}")
    return "\n".join(lines) + "\n"


def write_manifest(split: DatasetSplit, path) -> None:
    Path(path).write_text(manifest_text(split))
