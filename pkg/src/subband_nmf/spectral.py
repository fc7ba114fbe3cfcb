"""STFT-domain supervised enhancement baseline.

Pipeline: windowed STFT, per-class dictionary training on power (or
magnitude) spectra, fixed-dictionary encoding of the noisy spectrogram,
ratio gain on the magnitudes with the phase carried through untouched,
weighted overlap-add resynthesis.
"""

from dataclasses import dataclass

import numpy as np

from .defaults import (
    DEFAULT_FEATURE_KIND,
    DEFAULT_WINDOW,
    ENCODE_ITERS,
    EPSILON,
    NOISE_RANK,
    SPEECH_RANK,
)
from .framing import FrameSpec, Signal, frame_signal, overlap_add
from .nmf import NmfParams, encode, factorize, split_reconstruction

__all__ = [
    "ComplexSpectrogram",
    "StftBasisModel",
    "enhance_stft",
    "istft",
    "stft",
    "train_stft_model",
    "wiener_gain",
]

FEATURE_KINDS = ("power", "magnitude")

# Synthesis denominator floor: keeps fully-uncovered samples at zero
# instead of dividing 0/0.
_OLA_FLOOR = 1e-8

_WINDOWS = {
    "hamming": np.hamming,
    "hann": np.hanning,
    "rectangular": np.ones,
}


def get_window(name: str, size: int) -> np.ndarray:
    if name not in _WINDOWS:
        raise ValueError(f"unknown window '{name}' (choose from {tuple(_WINDOWS)})")
    return _WINDOWS[name](size).astype(np.float64)


@dataclass
class ComplexSpectrogram:
    """Complex STFT values (bins x frames) plus the analysis geometry."""

    values: np.ndarray
    frame_spec: FrameSpec
    window_name: str = DEFAULT_WINDOW

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.ndim != 2:
            raise ValueError("spectrogram values must be 2-D")
        expected = self.frame_spec.frame_size // 2 + 1
        if self.values.shape[0] != expected:
            raise ValueError(
                f"expected {expected} bins for frame size "
                f"{self.frame_spec.frame_size}, got {self.values.shape[0]}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("spectrogram values must be finite")

    @property
    def bins(self) -> int:
        return self.values.shape[0]

    @property
    def frames(self) -> int:
        return self.values.shape[1]

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


def stft(x, spec: FrameSpec, window_name: str = DEFAULT_WINDOW) -> ComplexSpectrogram:
    """Windowed short-time transform of a real signal.

    Frames the signal, applies the named analysis window, and takes the
    real-input DFT of each column; bins = frame_size/2 + 1.
    """
    samples = x.samples if isinstance(x, Signal) else np.asarray(x, dtype=np.float64)
    window = get_window(window_name, spec.frame_size)
    frames = frame_signal(samples, spec) * window[:, None]
    return ComplexSpectrogram(
        values=np.fft.rfft(frames, axis=0), frame_spec=spec, window_name=window_name
    )


def istft(f: ComplexSpectrogram, target_len: int) -> np.ndarray:
    """Weighted overlap-add inverse of `stft`.

    Each inverse-transformed frame is weighted by the synthesis window
    (same as analysis) and accumulated; the sum is divided by the
    accumulated squared window, floored at 1e-8.  Covered samples come
    back exactly; samples past the coverage are zero.
    """
    if target_len < 0:
        raise ValueError("target_len must be nonnegative")
    size, shift = f.frame_spec.frame_size, f.frame_spec.frame_shift
    window = get_window(f.window_name, size)
    frames = np.fft.irfft(f.values, n=size, axis=0)
    span = (f.frames - 1) * shift + size
    num = np.zeros(span)
    den = np.zeros(span)
    for k in range(f.frames):
        start = k * shift
        num[start : start + size] += window * frames[:, k]
        den[start : start + size] += window * window
    out = num / np.maximum(den, _OLA_FLOOR)
    if target_len <= span:
        return out[:target_len]
    return np.concatenate([out, np.zeros(target_len - span)])


def _features(values: np.ndarray, kind: str) -> np.ndarray:
    if kind not in FEATURE_KINDS:
        raise ValueError(f"unknown feature kind '{kind}' (choose from {FEATURE_KINDS})")
    mag = np.abs(values)
    return mag * mag if kind == "power" else mag


@dataclass
class StftBasisModel:
    """Per-class spectral dictionaries plus the analysis settings."""

    w_speech: np.ndarray
    w_noise: np.ndarray
    frame_spec: FrameSpec
    window_name: str = DEFAULT_WINDOW
    feature_kind: str = DEFAULT_FEATURE_KIND
    sample_rate: int | None = None

    def __post_init__(self):
        self.w_speech = np.asarray(self.w_speech, dtype=np.float64)
        self.w_noise = np.asarray(self.w_noise, dtype=np.float64)
        bins = self.frame_spec.frame_size // 2 + 1
        for name, w in (("w_speech", self.w_speech), ("w_noise", self.w_noise)):
            if w.ndim != 2 or w.shape[0] != bins:
                raise ValueError(f"{name} must have {bins} rows")
            if np.any(w < 0) or not np.all(np.isfinite(w)):
                raise ValueError(f"{name} must be finite and nonnegative")
        if self.feature_kind not in FEATURE_KINDS:
            raise ValueError(
                f"unknown feature kind '{self.feature_kind}' (choose from {FEATURE_KINDS})"
            )


def _class_features(signals, spec, window_name, feature_kind, label):
    if not signals:
        raise ValueError(f"empty {label} training set")
    mats = [_features(stft(s, spec, window_name).values, feature_kind) for s in signals]
    return np.hstack(mats)


def common_rate(signals) -> int | None:
    """The single sample rate shared by all signals; error on a mix."""
    rates = {s.sample_rate for s in signals if isinstance(s, Signal)}
    if len(rates) > 1:
        raise ValueError(f"training signals have mixed sample rates: {sorted(rates)}")
    return rates.pop() if rates else None


def train_stft_model(
    clean,
    noise,
    spec: FrameSpec,
    window_name: str = DEFAULT_WINDOW,
    feature_kind: str = DEFAULT_FEATURE_KIND,
    speech_params: NmfParams | None = None,
    noise_params: NmfParams | None = None,
) -> StftBasisModel:
    """Learn one spectral dictionary per class from labeled signals.

    Feature matrices of all utterances in a class are concatenated
    column-wise and factorized; only the dictionary factor is kept.
    """
    if speech_params is None:
        speech_params = NmfParams(rank=SPEECH_RANK)
    if noise_params is None:
        noise_params = NmfParams(rank=NOISE_RANK)
    v_clean = _class_features(clean, spec, window_name, feature_kind, "clean")
    v_noise = _class_features(noise, spec, window_name, feature_kind, "noise")
    return StftBasisModel(
        w_speech=factorize(v_clean, speech_params).w,
        w_noise=factorize(v_noise, noise_params).w,
        frame_spec=spec,
        window_name=window_name,
        feature_kind=feature_kind,
        sample_rate=common_rate(list(clean) + list(noise)),
    )


def wiener_gain(
    speech_part: np.ndarray, noise_part: np.ndarray, epsilon: float = EPSILON
) -> np.ndarray:
    """Ratio gain speech/(speech+noise), floored denominator, clipped to [0,1]."""
    gain = speech_part / np.maximum(speech_part + noise_part, epsilon)
    return np.clip(gain, 0.0, 1.0)


def enhance_stft(
    noisy: Signal,
    model: StftBasisModel,
    params: NmfParams | None = None,
    gain_on_magnitude: str = "direct",
) -> Signal:
    """Suppress noise in a signal using a trained spectral model.

    The noisy feature matrix is encoded against the stacked dictionary
    [W_S W_N]; the ratio gain from the two partial reconstructions
    multiplies the magnitudes (optionally its square root does, via
    gain_on_magnitude="sqrt") while the phase rides along unchanged.
    """
    if gain_on_magnitude not in ("direct", "sqrt"):
        raise ValueError("gain_on_magnitude must be 'direct' or 'sqrt'")
    if model.sample_rate is not None and noisy.sample_rate != model.sample_rate:
        raise ValueError(
            f"model sample rate {model.sample_rate} != input rate {noisy.sample_rate}"
        )
    w_stack = np.hstack([model.w_speech, model.w_noise])
    if params is None:
        params = NmfParams(rank=w_stack.shape[1], max_iters=ENCODE_ITERS)
    spec = stft(noisy, model.frame_spec, model.window_name)
    v = _features(spec.values, model.feature_kind)
    h = encode(v, w_stack, params)
    speech_part, noise_part = split_reconstruction(model.w_speech, model.w_noise, h)
    gain = wiener_gain(speech_part, noise_part, params.epsilon)
    if gain_on_magnitude == "sqrt":
        gain = np.sqrt(gain)
    enhanced = ComplexSpectrogram(
        values=spec.values * gain,
        frame_spec=model.frame_spec,
        window_name=model.window_name,
    )
    return Signal(istft(enhanced, len(noisy.samples)), noisy.sample_rate)
