"""Euclidean-distance NMF with multiplicative updates.

Two entry points: `factorize` learns both factors (offline dictionary
training), `encode` solves for activations against a frozen dictionary
(online decomposition).  Both run a fixed iteration count and record the
squared-error objective after every full sweep so callers can inspect
convergence.
"""

from dataclasses import dataclass, field

import numpy as np

from .defaults import DEFAULT_SEED, EPSILON, TRAIN_ITERS
from .framing import check_nonneg_matrix

__all__ = [
    "NmfParams",
    "NmfResult",
    "encode",
    "factorize",
    "split_reconstruction",
]


@dataclass(frozen=True)
class NmfParams:
    """Knobs for one NMF run.

    rank is the inner dimension r; max_iters the fixed sweep count
    (no early exit, so runs are reproducible); epsilon floors every
    denominator and every updated entry, keeping factors strictly
    positive; seed drives the uniform initialization.
    """

    rank: int
    max_iters: int = TRAIN_ITERS
    epsilon: float = EPSILON
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


@dataclass
class NmfResult:
    """Factor pair plus the per-iteration objective values."""

    w: np.ndarray
    h: np.ndarray
    objective_trace: list[float] = field(default_factory=list)


def _objective(v, w, h):
    r = v - w @ h
    return float(np.sum(r * r))


def _update_h(v, w, h, eps):
    # H <- H .* (W^T V) ./ (W^T W H), denominator floored, result clamped
    # up to eps so no activation collapses to an absorbing zero.
    num = w.T @ v
    den = (w.T @ w) @ h
    h = h * (num / np.maximum(den, eps))
    return np.maximum(h, eps)


def _update_w(v, w, h, eps):
    # W <- W .* (V H^T) ./ (W H H^T), same flooring policy.
    num = v @ h.T
    den = w @ (h @ h.T)
    w = w * (num / np.maximum(den, eps))
    return np.maximum(w, eps)


def factorize(v: np.ndarray, params: NmfParams) -> NmfResult:
    """Factor v ≈ W H with alternating multiplicative updates.

    Initialization draws W then H from uniform(epsilon, 1) with the
    seeded generator.  Each iteration updates H first, then W, then
    appends the objective d = sum((v - WH)^2) to the trace; d is
    non-increasing up to roundoff.
    """
    v = check_nonneg_matrix(v, "v")
    m, n = v.shape
    eps = params.epsilon
    rng = np.random.default_rng(params.seed)
    w = rng.uniform(eps, 1.0, size=(m, params.rank))
    h = rng.uniform(eps, 1.0, size=(params.rank, n))
    trace = []
    for _ in range(params.max_iters):
        h = _update_h(v, w, h, eps)
        w = _update_w(v, w, h, eps)
        trace.append(_objective(v, w, h))
    return NmfResult(w=w, h=h, objective_trace=trace)


def encode(
    v: np.ndarray,
    w_fixed: np.ndarray,
    params: NmfParams,
    objective_trace: list | None = None,
) -> np.ndarray:
    """Solve for H in v ≈ w_fixed H with the dictionary held frozen.

    Only the H update runs; w_fixed is never modified.  The rank comes
    from w_fixed's column count (params.rank is ignored here).  Pass a
    list as objective_trace to collect the per-iteration objective.
    """
    v = check_nonneg_matrix(v, "v")
    w_fixed = check_nonneg_matrix(w_fixed, "w_fixed")
    if v.shape[0] != w_fixed.shape[0]:
        raise ValueError(
            f"row mismatch: v has {v.shape[0]} rows, w_fixed has {w_fixed.shape[0]}"
        )
    eps = params.epsilon
    rng = np.random.default_rng(params.seed)
    h = rng.uniform(eps, 1.0, size=(w_fixed.shape[1], v.shape[1]))
    gram = w_fixed.T @ w_fixed
    wt_v = w_fixed.T @ v
    for _ in range(params.max_iters):
        h = h * (wt_v / np.maximum(gram @ h, eps))
        h = np.maximum(h, eps)
        if objective_trace is not None:
            objective_trace.append(_objective(v, w_fixed, h))
    return h


def split_reconstruction(
    w_s: np.ndarray, w_n: np.ndarray, h: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Split a stacked-dictionary encoding into class reconstructions.

    h's first cols(w_s) rows activate the speech dictionary, the rest
    the noise dictionary; returns (w_s @ h_s, w_n @ h_n).
    """
    w_s = check_nonneg_matrix(w_s, "w_s")
    w_n = check_nonneg_matrix(w_n, "w_n")
    h = check_nonneg_matrix(h, "h")
    r_s = w_s.shape[1]
    if h.shape[0] != r_s + w_n.shape[1]:
        raise ValueError(
            f"h has {h.shape[0]} rows but the dictionaries have "
            f"{r_s} + {w_n.shape[1]} columns"
        )
    return w_s @ h[:r_s], w_n @ h[r_s:]
