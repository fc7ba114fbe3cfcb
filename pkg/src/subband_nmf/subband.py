"""Subband-domain supervised enhancement.

The signal is split into 2^J time-domain subband sequences by a wavelet
packet tree.  Each band gets its own pair of dictionaries trained on
squared frame matrices, a square-root ratio gain de-framed back to one
value per sample, and a power renormalization towards the clean-training
rms before the inverse transform stitches the bands together.
"""

from dataclasses import dataclass, field

import numpy as np

from .defaults import ENCODE_ITERS, EPSILON, NOISE_RANK, SPEECH_RANK
from .framing import (
    FrameSpec,
    Signal,
    frame_count,
    frame_signal,
    overlap_add,
    rms,
    square_elementwise,
)
from .nmf import NmfParams, encode, factorize, split_reconstruction
from .spectral import common_rate, wiener_gain
from .wavelets import SubbandSet, WaveletFilters, dwpt, idwpt

__all__ = [
    "BandModel",
    "GainSequence",
    "SubbandBasisModel",
    "enhance_dwpt",
    "enhance_subbands",
    "subband_gain",
    "train_dwpt_model",
]


@dataclass
class GainSequence:
    """Per-sample suppression factors, each in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1:
            raise ValueError("gain sequence must be 1-D")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("gain values must be finite")
        if np.any(self.values < 0.0) or np.any(self.values > 1.0):
            raise ValueError("gain values must lie in [0, 1]")

    def __len__(self):
        return len(self.values)


@dataclass
class BandModel:
    """Dictionaries and clean-training rms for one subband."""

    w_speech: np.ndarray
    w_noise: np.ndarray
    sigma_clean: float

    def __post_init__(self):
        self.w_speech = np.asarray(self.w_speech, dtype=np.float64)
        self.w_noise = np.asarray(self.w_noise, dtype=np.float64)
        if not self.sigma_clean >= 0.0:
            raise ValueError("sigma_clean must be nonnegative")


@dataclass
class SubbandBasisModel:
    """Per-band models plus the decomposition and framing geometry."""

    level: int
    filter_name: str
    frame_spec: FrameSpec
    per_band: list[BandModel] = field(default_factory=list)
    sample_rate: int | None = None

    def __post_init__(self):
        if len(self.per_band) != 2**self.level:
            raise ValueError(
                f"expected {2**self.level} band models, got {len(self.per_band)}"
            )
        rows = self.frame_spec.frame_size
        for b, band in enumerate(self.per_band):
            for name, w in (("w_speech", band.w_speech), ("w_noise", band.w_noise)):
                if w.ndim != 2 or w.shape[0] != rows:
                    raise ValueError(f"band {b} {name} must have {rows} rows")
                if np.any(w < 0) or not np.all(np.isfinite(w)):
                    raise ValueError(f"band {b} {name} must be finite and nonnegative")

    @property
    def n_bands(self) -> int:
        return 2**self.level


def _subband_signals(signals, level, filters):
    # list of per-utterance SubbandSets; band b of utterance i is out[i][b]
    return [dwpt(s, level, filters) for s in signals]


def train_dwpt_model(
    clean,
    noise,
    level: int,
    filters: WaveletFilters,
    spec: FrameSpec,
    speech_params: NmfParams | None = None,
    noise_params: NmfParams | None = None,
) -> SubbandBasisModel:
    """Learn per-band dictionaries from labeled time-domain signals.

    For every band the squared frame matrices of all utterances in a
    class are concatenated column-wise and factorized.  sigma_clean is
    the rms over the band's concatenated clean samples; an all-zero
    clean set is rejected outright.
    """
    if not clean:
        raise ValueError("empty clean training set")
    if not noise:
        raise ValueError("empty noise training set")
    if speech_params is None:
        speech_params = NmfParams(rank=SPEECH_RANK)
    if noise_params is None:
        noise_params = NmfParams(rank=NOISE_RANK)

    clean_sets = _subband_signals(clean, level, filters)
    noise_sets = _subband_signals(noise, level, filters)
    for label, sets in (("clean", clean_sets), ("noise", noise_sets)):
        for i, s in enumerate(sets):
            if s.band_length < spec.frame_size:
                raise ValueError(
                    f"{label} utterance {i} too short: subband 0 has "
                    f"{s.band_length} samples, frame size is {spec.frame_size}"
                )
    if all(np.all(s.subbands[b] == 0.0) for s in clean_sets for b in range(2**level)):
        raise ValueError("degenerate clean set: all training samples are zero")

    bands = []
    for b in range(2**level):
        v_clean = np.hstack(
            [square_elementwise(frame_signal(s.subbands[b], spec)) for s in clean_sets]
        )
        v_noise = np.hstack(
            [square_elementwise(frame_signal(s.subbands[b], spec)) for s in noise_sets]
        )
        sigma = rms(np.concatenate([s.subbands[b] for s in clean_sets]))
        bands.append(
            BandModel(
                w_speech=factorize(v_clean, speech_params).w,
                w_noise=factorize(v_noise, noise_params).w,
                sigma_clean=sigma,
            )
        )
    return SubbandBasisModel(
        level=level,
        filter_name=filters.name,
        frame_spec=spec,
        per_band=bands,
        sample_rate=common_rate(list(clean) + list(noise)),
    )


def subband_gain(
    s_b: np.ndarray,
    w_s: np.ndarray,
    w_n: np.ndarray,
    spec: FrameSpec,
    params: NmfParams | None = None,
) -> GainSequence:
    """Per-sample suppression gain for one subband sequence.

    The squared frame matrix is encoded against the stacked dictionary,
    the square-root ratio gain is formed per entry, and the gain matrix
    is de-framed by averaging overlap-add.  Samples past the last full
    frame keep the final de-framed value.
    """
    s_b = np.asarray(s_b, dtype=np.float64)
    w_stack = np.hstack([w_s, w_n])
    if params is None:
        params = NmfParams(rank=w_stack.shape[1], max_iters=ENCODE_ITERS)
    v = square_elementwise(frame_signal(s_b, spec))
    h = encode(v, w_stack, params)
    speech_part, noise_part = split_reconstruction(w_s, w_n, h)
    gain_mat = np.sqrt(wiener_gain(speech_part, noise_part, params.epsilon))
    g = overlap_add(gain_mat, spec, len(s_b))
    covered = (frame_count(len(s_b), spec) - 1) * spec.frame_shift + spec.frame_size
    if covered < len(s_b):
        g[covered:] = g[covered - 1]
    return GainSequence(np.clip(g, 0.0, 1.0))


def enhance_subbands(
    s: SubbandSet,
    model: SubbandBasisModel,
    params: NmfParams | None = None,
    normalize: bool = True,
    force_unit_gain: bool = False,
) -> SubbandSet:
    """Apply per-band gain and power normalization to a decomposition.

    force_unit_gain skips the gain estimate (debug path: with
    normalize=False the result round-trips to the input).  When a band's
    clean-training rms is zero the band is silenced rather than scaled.
    """
    if len(s.subbands) != model.n_bands:
        raise ValueError(
            f"decomposition has {len(s.subbands)} bands, model expects {model.n_bands}"
        )
    eps = params.epsilon if params is not None else EPSILON
    out = []
    for band, bm in zip(s.subbands, model.per_band):
        if force_unit_gain:
            shat = band.copy()
        else:
            g = subband_gain(band, bm.w_speech, bm.w_noise, model.frame_spec, params)
            shat = band * g.values
        if normalize:
            if bm.sigma_clean == 0.0:
                shat = np.zeros_like(shat)
            else:
                shat = shat * (bm.sigma_clean / max(rms(shat), eps))
        out.append(shat)
    return SubbandSet(level=s.level, subbands=out, original_length=s.original_length)


def enhance_dwpt(
    noisy: Signal,
    model: SubbandBasisModel,
    filters: WaveletFilters,
    params: NmfParams | None = None,
    normalize: bool = True,
    force_unit_gain: bool = False,
) -> Signal:
    """Full subband enhancement: decompose, gain, normalize, resynthesize."""
    if filters.name != model.filter_name:
        raise ValueError(
            f"model was trained with filter '{model.filter_name}', got '{filters.name}'"
        )
    if model.sample_rate is not None and noisy.sample_rate != model.sample_rate:
        raise ValueError(
            f"model sample rate {model.sample_rate} != input rate {noisy.sample_rate}"
        )
    s = dwpt(noisy, model.level, filters)
    enhanced = enhance_subbands(
        s, model, params, normalize=normalize, force_unit_gain=force_unit_gain
    )
    out = idwpt(enhanced, filters)
    n = len(noisy.samples)
    if len(out) < n:
        out = np.concatenate([out, np.zeros(n - len(out))])
    return Signal(out[:n], noisy.sample_rate)
