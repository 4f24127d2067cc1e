"""Binary PGM (P5) codec and grayscale error metrics.

PGM keeps the pipeline bit-exact with zero dependencies: header "P5", then
whitespace-separated width/height/maxval (maxval <= 255, '#' comments allowed
in the header), one whitespace byte, then width*height raw bytes row-major.
Intensities are normalized to [0, 1] on ingestion and re-quantized with
round-half-up on emission.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["GrayImage", "PgmError", "read_pgm", "write_pgm", "image_metrics"]


class PgmError(ValueError):
    """Malformed PGM input."""


@dataclass(frozen=True)
class GrayImage:
    """Grayscale image: (height, width) float64 intensities in [0, 1]."""

    width: int
    height: int
    pixels: np.ndarray
    maxval: int = 255

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=float)
        if px.shape != (self.height, self.width):
            raise ValueError(
                f"pixel array shape {px.shape} does not match {self.height}x{self.width}"
            )
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_array(cls, pixels: np.ndarray, maxval: int = 255) -> "GrayImage":
        px = np.asarray(pixels, dtype=float)
        if px.ndim != 2:
            raise ValueError("expected a 2D intensity array")
        if px.size and (px.min() < 0.0 or px.max() > 1.0):
            raise ValueError("intensities must lie in [0, 1]")
        return cls(width=px.shape[1], height=px.shape[0], pixels=px, maxval=maxval)

    @classmethod
    def constant(cls, width: int, height: int, value: float) -> "GrayImage":
        return cls.from_array(np.full((height, width), float(value)))


def _tokenize_header(data: bytes):
    """Yield (token, position-after) skipping whitespace and '#' comments."""
    i = 0
    n = len(data)
    while True:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i] == ord("#"):
            while i < n and data[i] not in (0x0A, 0x0D):
                i += 1
            continue
        if i >= n:
            raise PgmError("truncated PGM header")
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i] != ord("#"):
            i += 1
        yield data[start:i], i


def read_pgm(data: bytes) -> GrayImage:
    """Decode binary PGM bytes; intensities become byte/maxval."""
    if not data.startswith(b"P5"):
        raise PgmError("not a binary PGM (missing P5 magic)")
    tokens = _tokenize_header(data)
    magic, _ = next(tokens)
    if magic != b"P5":
        raise PgmError("not a binary PGM (missing P5 magic)")
    fields = []
    for _ in range(3):
        tok, pos = next(tokens)
        try:
            fields.append(int(tok))
        except ValueError:
            raise PgmError(f"non-numeric header field {tok!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PgmError(f"bad dimensions {width}x{height}")
    if maxval < 1 or maxval > 255:
        raise PgmError(f"maxval {maxval} outside [1, 255]")
    # exactly one whitespace byte separates the header from the payload
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise PgmError("missing whitespace after maxval")
    payload = data[pos + 1 : pos + 1 + width * height]
    if len(payload) < width * height:
        raise PgmError(
            f"truncated payload: expected {width * height} bytes, got {len(payload)}"
        )
    raw = np.frombuffer(payload, dtype=np.uint8).astype(float)
    pixels = (raw / maxval).reshape(height, width)
    return GrayImage(width=width, height=height, pixels=pixels, maxval=maxval)


def write_pgm(img: GrayImage) -> bytes:
    """Encode as maxval-255 binary PGM; round-half-up then clamp to [0, 255]."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    quantized = np.floor(img.pixels * 255.0 + 0.5)
    body = np.clip(quantized, 0, 255).astype(np.uint8).tobytes()
    return header + body


def image_metrics(a: GrayImage, b: GrayImage) -> dict:
    """max_abs, rmse, psnr between two equal-size images on [0, 1] intensities."""
    if (a.width, a.height) != (b.width, b.height):
        raise ValueError(
            f"dimension mismatch: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    diff = a.pixels - b.pixels
    max_abs = float(np.max(np.abs(diff))) if diff.size else 0.0
    rmse = float(np.sqrt(np.mean(diff * diff))) if diff.size else 0.0
    psnr = math.inf if rmse == 0.0 else 20.0 * math.log10(1.0 / rmse)
    return {"max_abs": max_abs, "rmse": rmse, "psnr": psnr}
