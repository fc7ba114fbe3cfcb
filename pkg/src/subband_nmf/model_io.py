"""Model file serialization.

One file per model: an ASCII header of "key: value" lines plus one
"matrix <name> <rows> <cols>" declaration per stored matrix, a blank
line, then the raw matrix payloads concatenated in declaration order as
little-endian float64, row-major.  Matrix values round-trip bit-exactly
and every structural invariant is re-checked on load.
"""

import numpy as np

from .framing import FrameSpec
from .spectral import StftBasisModel
from .subband import BandModel, SubbandBasisModel

__all__ = ["FORMAT_VERSION", "load_model", "save_model"]

FORMAT_VERSION = 1

_KIND_STFT = "stft"
_KIND_DWPT = "dwpt"


def _matrix_block(name, arr):
    arr = np.ascontiguousarray(arr, dtype="<f8")
    decl = f"matrix {name} {arr.shape[0]} {arr.shape[1]}\n"
    return decl, arr.tobytes()


def save_model(model, path) -> None:
    """Serialize a trained model; see the module docstring for layout."""
    lines = [f"format_version: {FORMAT_VERSION}\n"]
    blobs = []

    if isinstance(model, StftBasisModel):
        lines.append(f"model_kind: {_KIND_STFT}\n")
        lines.append(f"sample_rate: {_rate_field(model)}\n")
        lines.append(f"frame_size: {model.frame_spec.frame_size}\n")
        lines.append(f"frame_shift: {model.frame_spec.frame_shift}\n")
        lines.append(f"window_name: {model.window_name}\n")
        lines.append(f"feature_kind: {model.feature_kind}\n")
        for name, arr in (("w_speech", model.w_speech), ("w_noise", model.w_noise)):
            decl, blob = _matrix_block(name, arr)
            lines.append(decl)
            blobs.append(blob)
    elif isinstance(model, SubbandBasisModel):
        lines.append(f"model_kind: {_KIND_DWPT}\n")
        lines.append(f"sample_rate: {_rate_field(model)}\n")
        lines.append(f"frame_size: {model.frame_spec.frame_size}\n")
        lines.append(f"frame_shift: {model.frame_spec.frame_shift}\n")
        lines.append(f"level: {model.level}\n")
        lines.append(f"filter_name: {model.filter_name}\n")
        sigma = np.array([[b.sigma_clean for b in model.per_band]])
        for b, band in enumerate(model.per_band):
            for name, arr in (
                (f"w_speech_{b}", band.w_speech),
                (f"w_noise_{b}", band.w_noise),
            ):
                decl, blob = _matrix_block(name, arr)
                lines.append(decl)
                blobs.append(blob)
        decl, blob = _matrix_block("sigma_clean", sigma)
        lines.append(decl)
        blobs.append(blob)
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")

    with open(path, "wb") as f:
        f.write("".join(lines).encode("ascii"))
        f.write(b"\n")
        for blob in blobs:
            f.write(blob)


def _rate_field(model):
    if model.sample_rate is None:
        raise ValueError("model has no sample rate set; cannot serialize")
    return int(model.sample_rate)


def _parse_header(text, path):
    fields = {}
    matrices = []
    for line in text.split("\n"):
        if line.startswith("matrix "):
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"{path}: malformed matrix declaration '{line}'")
            try:
                rows, cols = int(parts[2]), int(parts[3])
            except ValueError:
                raise ValueError(f"{path}: malformed matrix declaration '{line}'")
            if rows < 1 or cols < 1:
                raise ValueError(f"{path}: matrix {parts[1]} has empty shape")
            matrices.append((parts[1], rows, cols))
        elif ": " in line:
            key, value = line.split(": ", 1)
            fields[key] = value
        else:
            raise ValueError(f"{path}: malformed header line '{line}'")
    return fields, matrices


def _require(fields, key, path, convert=str):
    if key not in fields:
        raise ValueError(f"{path}: missing header field '{key}'")
    try:
        return convert(fields[key])
    except ValueError:
        raise ValueError(f"{path}: bad value for '{key}': {fields[key]!r}")


def load_model(path):
    """Read a model file back into its in-memory form, validating throughout."""
    with open(path, "rb") as f:
        data = f.read()
    sep = data.find(b"\n\n")
    if sep < 0:
        raise ValueError(f"{path}: truncated model file (no header terminator)")
    try:
        header = data[:sep].decode("ascii")
    except UnicodeDecodeError:
        raise ValueError(f"{path}: header is not ASCII text")
    fields, matrices = _parse_header(header, path)

    version = _require(fields, "format_version", path, int)
    if version != FORMAT_VERSION:
        raise ValueError(
            f"{path}: format version {version} not supported (expected {FORMAT_VERSION})"
        )
    kind = _require(fields, "model_kind", path)
    rate = _require(fields, "sample_rate", path, int)
    spec = FrameSpec(
        _require(fields, "frame_size", path, int),
        _require(fields, "frame_shift", path, int),
    )

    payload = data[sep + 2 :]
    expected = sum(8 * r * c for _, r, c in matrices)
    if len(payload) < expected:
        raise ValueError(
            f"{path}: truncated model file ({len(payload)} payload bytes, "
            f"need {expected})"
        )
    if len(payload) > expected:
        raise ValueError(f"{path}: {len(payload) - expected} trailing bytes")
    arrays = {}
    offset = 0
    for name, rows, cols in matrices:
        count = rows * cols
        arrays[name] = np.frombuffer(
            payload, dtype="<f8", count=count, offset=offset
        ).reshape(rows, cols)
        offset += 8 * count

    if kind == _KIND_STFT:
        for name in ("w_speech", "w_noise"):
            if name not in arrays:
                raise ValueError(f"{path}: missing matrix '{name}'")
        return StftBasisModel(
            w_speech=arrays["w_speech"],
            w_noise=arrays["w_noise"],
            frame_spec=spec,
            window_name=_require(fields, "window_name", path),
            feature_kind=_require(fields, "feature_kind", path),
            sample_rate=rate,
        )
    if kind == _KIND_DWPT:
        level = _require(fields, "level", path, int)
        n_bands = 2**level
        band_count = sum(1 for name in arrays if name.startswith("w_speech_"))
        if band_count != n_bands or any(
            f"w_noise_{b}" not in arrays for b in range(n_bands)
        ):
            raise ValueError(
                f"{path}: expected {n_bands} subband blocks for level {level}, "
                f"found {band_count}"
            )
        if "sigma_clean" not in arrays:
            raise ValueError(f"{path}: missing matrix 'sigma_clean'")
        sigma = arrays["sigma_clean"]
        if sigma.shape != (1, n_bands):
            raise ValueError(
                f"{path}: sigma_clean must be 1 x {n_bands}, got "
                f"{sigma.shape[0]} x {sigma.shape[1]}"
            )
        bands = [
            BandModel(
                w_speech=arrays[f"w_speech_{b}"],
                w_noise=arrays[f"w_noise_{b}"],
                sigma_clean=float(sigma[0, b]),
            )
            for b in range(n_bands)
        ]
        return SubbandBasisModel(
            level=level,
            filter_name=_require(fields, "filter_name", path),
            frame_spec=spec,
            per_band=bands,
            sample_rate=rate,
        )
    raise ValueError(f"{path}: unknown model kind '{kind}'")
