"""Objective quality metrics: MSE, segmental SNR, distortion index."""

from dataclasses import dataclass

import numpy as np

from .framing import Signal

__all__ = ["MetricReport", "evaluate", "mse", "sdi", "ssnr"]

SSNR_SEG_MS = 32.0
SSNR_CLAMP_DB = (-10.0, 35.0)

# Reference segments at or below this energy are treated as silence and
# excluded from the segmental average.
_SILENCE_ENERGY = 1e-10


def _paired(reference: Signal, test: Signal):
    if reference.sample_rate != test.sample_rate:
        raise ValueError("sample rates differ")
    if len(reference.samples) != len(test.samples):
        raise ValueError(
            f"length mismatch: {len(reference.samples)} vs {len(test.samples)}"
        )
    return reference.samples, test.samples


def mse(reference: Signal, test: Signal) -> float:
    """Mean squared sample difference."""
    ref, tst = _paired(reference, test)
    d = ref - tst
    return float(np.mean(d * d))


def ssnr(
    reference: Signal,
    test: Signal,
    seg_ms: float = SSNR_SEG_MS,
    clamp_db: tuple = SSNR_CLAMP_DB,
) -> float:
    """Segmental SNR in dB.

    The signals are cut into consecutive full segments of seg_ms;
    segments whose reference energy is at silence level are skipped,
    the rest contribute 10*log10(sum(ref^2)/sum((ref-test)^2)) clamped
    into clamp_db, and the mean over segments is returned.
    """
    ref, tst = _paired(reference, test)
    seg_len = int(round(reference.sample_rate * seg_ms / 1000.0))
    if seg_len < 1:
        raise ValueError("segment length must be at least one sample")
    lo, hi = clamp_db
    vals = []
    for start in range(0, len(ref) - seg_len + 1, seg_len):
        r = ref[start : start + seg_len]
        t = tst[start : start + seg_len]
        e_ref = float(np.sum(r * r))
        if e_ref <= _SILENCE_ENERGY:
            continue
        e_err = float(np.sum((r - t) ** 2))
        if e_err == 0.0:
            vals.append(hi)
            continue
        vals.append(float(np.clip(10.0 * np.log10(e_ref / e_err), lo, hi)))
    if not vals:
        raise ValueError("no non-silent segments to evaluate")
    return float(np.mean(vals))


def sdi(reference: Signal, test: Signal) -> float:
    """Global residual-energy ratio sum((ref-test)^2)/sum(ref^2).

    This is an artifact convention for a distortion index: 0 for an
    exact match, 1 when the test signal is silence.
    """
    ref, tst = _paired(reference, test)
    e_ref = float(np.sum(ref * ref))
    if e_ref <= 0.0:
        raise ValueError("zero-energy reference")
    return float(np.sum((ref - tst) ** 2) / e_ref)


@dataclass
class MetricReport:
    mse: float
    ssnr_db: float
    sdi: float

    def as_dict(self) -> dict:
        return {"mse": self.mse, "ssnr_db": self.ssnr_db, "sdi": self.sdi}


def evaluate(reference: Signal, test: Signal, seg_ms: float = SSNR_SEG_MS) -> MetricReport:
    """All three metrics at once; signals are trimmed to the common length."""
    n = min(len(reference.samples), len(test.samples))
    ref = Signal(reference.samples[:n], reference.sample_rate)
    tst = Signal(test.samples[:n], test.sample_rate)
    return MetricReport(
        mse=mse(ref, tst), ssnr_db=ssnr(ref, tst, seg_ms=seg_ms), sdi=sdi(ref, tst)
    )
