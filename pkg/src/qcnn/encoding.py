"""Qubit Lattice encoding: one wire per pixel, intensity as a rotation angle.

A pixel p in 0..255 becomes the angle pi*p/255, loaded with an RY rotation,
so p=0 keeps the wire at |0> and p=255 flips it to |1>.  Probabilities fed
back between layers use the same idea on the unit interval: p in [0, 1]
becomes pi*p.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gates import Angle, GateKind, GateOp

_PROB_SLACK = 1e-9


def pixel_to_angle(pixel) -> np.ndarray:
    """Map integer intensities 0..255 to angles [0, pi] linearly."""
    arr = np.asarray(pixel)
    if arr.dtype.kind not in "iu":
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError("pixel values must be integers")
        arr = arr.astype(np.int64)
    if arr.size and (arr.min() < 0 or arr.max() > 255):
        raise ValueError("pixel values must lie in 0..255")
    out = np.pi * arr / 255.0
    return float(out) if np.isscalar(pixel) or out.ndim == 0 else out


def prob_to_angle(p) -> np.ndarray:
    """Map probabilities [0, 1] to angles [0, pi] linearly."""
    arr = np.asarray(p, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("probability must be finite")
    if arr.size and (arr.min() < -_PROB_SLACK or arr.max() > 1.0 + _PROB_SLACK):
        raise ValueError("probability must lie in [0, 1]")
    out = np.pi * np.clip(arr, 0.0, 1.0)
    return float(out) if np.isscalar(p) or out.ndim == 0 else out


@dataclass(frozen=True)
class AngleImage:
    """A pixel grid converted to rotation angles, row-major."""

    side: int
    angles: np.ndarray

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=np.float64)
        object.__setattr__(self, "angles", angles)
        if angles.shape != (self.side * self.side,):
            raise ValueError(
                f"angle vector must have length {self.side * self.side}, got {angles.shape}"
            )


def image_angles(pixels) -> AngleImage:
    """Flatten a square pixel grid (or flat vector) into an AngleImage."""
    arr = np.asarray(pixels)
    flat = arr.reshape(-1)
    side = int(round(np.sqrt(flat.size)))
    if side * side != flat.size:
        raise ValueError(f"pixel count {flat.size} is not a square")
    return AngleImage(side, pixel_to_angle(flat))


def encode_image(pixels) -> tuple:
    """Gate prefix loading a pixel grid: one RY per wire, row-major."""
    ai = image_angles(pixels)
    return tuple(
        GateOp(GateKind.RY, (w,), Angle.const(a)) for w, a in enumerate(ai.angles)
    )
