"""Shared numeric primitives: signals, framing, overlap-add, squaring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Signal:
    """Mono time-domain signal with its sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError("signal samples must be one-dimensional")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("signal samples must be finite")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class FrameSpec:
    """Frame size and shift in samples; shift must not exceed size."""

    frame_size: int
    frame_shift: int

    def __post_init__(self):
        if self.frame_size < 1:
            raise ValueError("frame_size must be positive")
        if not 1 <= self.frame_shift <= self.frame_size:
            raise ValueError("frame_shift must be in [1, frame_size]")


def frame_count(n_samples: int, spec: FrameSpec) -> int:
    """Number of complete frames a signal of n_samples yields."""
    if n_samples < spec.frame_size:
        return 0
    return (n_samples - spec.frame_size) // spec.frame_shift + 1


def frame_signal(x: np.ndarray, spec: FrameSpec) -> np.ndarray:
    """Segment x into overlapped rectangular-window frames.

    Returns a (frame_size, n_frames) matrix whose column k holds
    x[k*shift : k*shift + frame_size].  Trailing samples that do not fill
    a complete frame are dropped.
    """
    x = np.asarray(x, dtype=np.float64)
    n = frame_count(len(x), spec)
    if n == 0:
        raise ValueError(
            f"signal too short for frame size ({len(x)} < {spec.frame_size})"
        )
    windows = np.lib.stride_tricks.sliding_window_view(x, spec.frame_size)
    return windows[:: spec.frame_shift][:n].T.copy()


def overlap_add(frames: np.ndarray, spec: FrameSpec, target_len: int) -> np.ndarray:
    """De-frame by overlap-add, averaging over the frames covering each sample.

    Output sample t is the mean of every frame entry mapped onto t; indices
    of target_len covered by no frame are zero.
    """
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 2 or frames.size == 0:
        raise ValueError("frame matrix must be a non-empty 2-D array")
    if frames.shape[0] != spec.frame_size:
        raise ValueError("frame matrix row count must equal frame_size")
    if target_len < 1:
        raise ValueError("target_len must be positive")

    n_frames = frames.shape[1]
    covered = (n_frames - 1) * spec.frame_shift + spec.frame_size
    acc = np.zeros(covered)
    counts = np.zeros(covered)
    for k in range(n_frames):
        start = k * spec.frame_shift
        acc[start : start + spec.frame_size] += frames[:, k]
        counts[start : start + spec.frame_size] += 1.0
    out = acc / np.maximum(counts, 1.0)

    if target_len <= covered:
        return out[:target_len]
    return np.concatenate([out, np.zeros(target_len - covered)])


def square_elementwise(frames: np.ndarray) -> np.ndarray:
    """Square every entry, producing a nonnegative matrix."""
    frames = np.asarray(frames, dtype=np.float64)
    if not np.all(np.isfinite(frames)):
        raise ValueError("frame matrix must be finite")
    return frames * frames


def check_nonneg_matrix(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Validate a 2-D array of finite nonnegative entries and return it as float64."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} must contain only finite values")
    if np.any(m < 0):
        raise ValueError(f"{name} must contain only nonnegative values")
    return m


def rms(x: np.ndarray) -> float:
    """Root mean square of a sequence; 0.0 for an empty one."""
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        return 0.0
    return float(np.sqrt(np.mean(x * x)))
