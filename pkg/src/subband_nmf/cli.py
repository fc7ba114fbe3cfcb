"""Batch command-line front end.

Subcommands: train, enhance, mix, eval, roundtrip.  Every knob can also
come from a plain-text config file of `key = value` lines; explicit
flags win over the file, the file wins over built-in defaults.  The
seed falls back to the SUBBAND_NMF_SEED environment variable before the
built-in default, so whole experiment scripts can be re-seeded without
touching every call.
"""

import argparse
import csv
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import defaults
from .framing import FrameSpec, Signal
from .metrics import evaluate
from .mixing import MixSpec, mix_at_snr
from .model_io import load_model, save_model
from .nmf import NmfParams
from .spectral import StftBasisModel, enhance_stft, stft, train_stft_model
from .subband import enhance_dwpt, train_dwpt_model
from .wav_io import read_wav, write_wav
from .wavelets import FILTER_NAMES, dwpt, get_filters, idwpt

METHODS = ("stft-nmf", "dwpt-nmf")

_CONFIG_KEYS = {
    "method": str,
    "frame_size": int,
    "frame_shift": int,
    "level": int,
    "filter_name": str,
    "speech_rank": int,
    "noise_rank": int,
    "iters_train": int,
    "iters_encode": int,
    "epsilon": float,
    "seed": int,
    "normalize": bool,
    "gain_on_magnitude": str,
}

_BOOL_WORDS = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


@dataclass
class CliConfig:
    method: str
    frame_size: int
    frame_shift: int
    level: int
    filter_name: str
    speech_rank: int
    noise_rank: int
    iters_train: int
    iters_encode: int
    epsilon: float
    seed: int
    normalize: bool
    gain_on_magnitude: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got '{self.method}'")
        for name in ("frame_size", "frame_shift", "level", "speech_rank",
                     "noise_rank", "iters_train", "iters_encode", "seed"):
            if getattr(self, name) < (0 if name == "seed" else 1):
                raise ValueError(f"{name} must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.gain_on_magnitude not in ("direct", "sqrt"):
            raise ValueError("gain_on_magnitude must be 'direct' or 'sqrt'")


def parse_config_file(path) -> dict:
    """Read `key = value` lines; blank lines and #-comments are skipped."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got '{raw}'")
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown config key '{key}'")
        conv = _CONFIG_KEYS[key]
        if conv is bool:
            if val.lower() not in _BOOL_WORDS:
                raise ValueError(f"{path}:{lineno}: bad boolean '{val}'")
            values[key] = _BOOL_WORDS[val.lower()]
        else:
            try:
                values[key] = conv(val)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad value for '{key}': '{val}'")
    return values


def _env_seed() -> int | None:
    raw = os.environ.get(defaults.SEED_ENV_VAR)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{defaults.SEED_ENV_VAR} must be an integer, got '{raw}'")


def resolve_config(args) -> CliConfig:
    """Merge flags > config file > environment seed > defaults."""
    file_vals = parse_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(name, fallback):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in file_vals:
            return file_vals[name]
        return fallback

    method = pick("method", "dwpt-nmf")
    if method == "stft-nmf":
        size, shift = defaults.STFT_FRAME_SIZE, defaults.STFT_FRAME_SHIFT
    else:
        size, shift = defaults.DWPT_FRAME_SIZE, defaults.DWPT_FRAME_SHIFT
    seed_fallback = _env_seed()
    if seed_fallback is None:
        seed_fallback = defaults.DEFAULT_SEED
    return CliConfig(
        method=method,
        frame_size=pick("frame_size", size),
        frame_shift=pick("frame_shift", shift),
        level=pick("level", defaults.DWPT_LEVEL),
        filter_name=pick("filter_name", defaults.DEFAULT_FILTER),
        speech_rank=pick("speech_rank", defaults.SPEECH_RANK),
        noise_rank=pick("noise_rank", defaults.NOISE_RANK),
        iters_train=pick("iters_train", defaults.TRAIN_ITERS),
        iters_encode=pick("iters_encode", defaults.ENCODE_ITERS),
        epsilon=pick("epsilon", defaults.EPSILON),
        seed=pick("seed", seed_fallback),
        normalize=pick("normalize", True),
        gain_on_magnitude=pick("gain_on_magnitude", "direct"),
    )


def _expand_audio(paths) -> list:
    """Expand directories to their .wav members in lexicographic order."""
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            members = sorted(q for q in p.iterdir() if q.suffix.lower() == ".wav")
            if not members:
                raise ValueError(f"{p}: directory contains no .wav files")
            out.extend(members)
        elif p.exists():
            out.append(p)
        else:
            raise ValueError(f"{p}: no such file")
    return out


def _read_signals(paths) -> list:
    return [read_wav(p)[0] for p in paths]


def cmd_train(args) -> int:
    cfg = resolve_config(args)
    clean = _read_signals(_expand_audio(args.clean))
    noise = _read_signals(_expand_audio(args.noise))
    spec = FrameSpec(cfg.frame_size, cfg.frame_shift)
    speech_params = NmfParams(cfg.speech_rank, cfg.iters_train, cfg.epsilon, cfg.seed)
    noise_params = NmfParams(cfg.noise_rank, cfg.iters_train, cfg.epsilon, cfg.seed)
    if cfg.method == "stft-nmf":
        model = train_stft_model(
            clean, noise, spec, speech_params=speech_params, noise_params=noise_params
        )
    else:
        model = train_dwpt_model(
            clean, noise, cfg.level, get_filters(cfg.filter_name), spec,
            speech_params=speech_params, noise_params=noise_params,
        )
    save_model(model, args.out)
    print(f"wrote {args.out}")
    return 0


def _enhance_one(task):
    in_path, out_path, model, cfg, dump = task
    noisy, _ = read_wav(in_path)
    params = NmfParams(
        rank=model.w_speech.shape[1] + model.w_noise.shape[1]
        if isinstance(model, StftBasisModel)
        else model.per_band[0].w_speech.shape[1] + model.per_band[0].w_noise.shape[1],
        max_iters=cfg.iters_encode,
        epsilon=cfg.epsilon,
        seed=cfg.seed,
    )
    if isinstance(model, StftBasisModel):
        out = enhance_stft(noisy, model, params, gain_on_magnitude=cfg.gain_on_magnitude)
    else:
        out = enhance_dwpt(noisy, model, get_filters(model.filter_name), params,
                           normalize=cfg.normalize)
    write_wav(out_path, out)
    if dump:
        spec = model.frame_spec if isinstance(model, StftBasisModel) else FrameSpec(
            defaults.STFT_FRAME_SIZE, defaults.STFT_FRAME_SHIFT
        )
        mag = stft(out, spec).magnitude()
        with open(dump, "w", newline="") as f:
            w = csv.writer(f)
            for frame in mag.T:
                w.writerow([f"{v:.9g}" for v in frame])
    return str(out_path)


def cmd_enhance(args) -> int:
    cfg = resolve_config(args)
    model = load_model(args.model)
    inputs = _expand_audio(args.in_paths)
    out = Path(args.out)
    if len(inputs) > 1:
        out.mkdir(parents=True, exist_ok=True)
        pairs = [(p, out / p.name) for p in inputs]
    else:
        if out.is_dir():
            pairs = [(inputs[0], out / inputs[0].name)]
        else:
            pairs = [(inputs[0], out)]
    if args.dump_spectrogram and len(pairs) > 1:
        raise ValueError("--dump-spectrogram needs a single input file")
    tasks = [(p, q, model, cfg, args.dump_spectrogram) for p, q in pairs]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for done in pool.map(_enhance_one, tasks):
                print(f"wrote {done}")
    else:
        for task in tasks:
            print(f"wrote {_enhance_one(task)}")
    return 0


def cmd_mix(args) -> int:
    seed = args.seed
    if seed is None:
        seed = _env_seed()
    if seed is None:
        seed = defaults.DEFAULT_SEED
    clean, _ = read_wav(args.clean)
    noise, _ = read_wav(args.noise)
    mixed = mix_at_snr(clean, noise, MixSpec(args.snr, seed))
    write_wav(args.out, mixed)
    print(f"wrote {args.out}")
    return 0


def cmd_eval(args) -> int:
    refs = _expand_audio([args.reference])
    tests = _expand_audio([args.test])
    if len(refs) == 1 and len(tests) == 1:
        pairs = [(refs[0], tests[0])]
    else:
        by_name = {p.name: p for p in refs}
        pairs = [(by_name[t.name], t) for t in tests if t.name in by_name]
        if not pairs:
            raise ValueError("no reference/test filename matches")
    rows = []
    for ref_path, test_path in pairs:
        ref, _ = read_wav(ref_path)
        test, _ = read_wav(test_path)
        report = evaluate(ref, test)
        rows.append((str(test_path), report))
        print(f"file={test_path}")
        for key, val in report.as_dict().items():
            print(f"{key}={val:.6f}")
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["file", "mse", "ssnr_db", "sdi"])
            for name, report in rows:
                w.writerow([name, f"{report.mse:.12g}", f"{report.ssnr_db:.12g}",
                            f"{report.sdi:.12g}"])
        print(f"wrote {args.csv}")
    return 0


def cmd_roundtrip(args) -> int:
    signal, _ = read_wav(args.in_path)
    x = signal.samples
    if args.transform == "dwpt":
        filters = get_filters(args.filter_name or defaults.DEFAULT_FILTER)
        level = args.level if args.level is not None else defaults.DWPT_LEVEL
        y = idwpt(dwpt(signal, level, filters), filters)
        label = f"dwpt level={level} filter={filters.name}"
    else:
        size = args.frame_size or defaults.STFT_FRAME_SIZE
        shift = args.frame_shift or defaults.STFT_FRAME_SHIFT
        spec = FrameSpec(size, shift)
        from .spectral import istft

        y = istft(stft(signal, spec), len(x))
        label = f"stft frame={size} shift={shift}"
    err = float(np.mean((x - y) ** 2))
    print(f"transform={label}")
    print(f"mse={err:.6e}")
    return 0


def _add_common(p: argparse.ArgumentParser, training: bool):
    p.add_argument("--config", help="key = value config file; flags take precedence")
    p.add_argument("--seed", type=int, default=None,
                   help=f"RNG seed (default {defaults.DEFAULT_SEED}, or ${defaults.SEED_ENV_VAR})")
    p.add_argument("--epsilon", type=float, default=None,
                   help=f"numeric floor (default {defaults.EPSILON})")
    if training:
        p.add_argument("--method", choices=METHODS, default=None,
                       help="enhancement method (default dwpt-nmf)")
        p.add_argument("--frame-size", dest="frame_size", type=int, default=None,
                       help=f"analysis frame length (default {defaults.STFT_FRAME_SIZE} stft, "
                            f"{defaults.DWPT_FRAME_SIZE} dwpt)")
        p.add_argument("--frame-shift", dest="frame_shift", type=int, default=None,
                       help=f"frame hop (default {defaults.STFT_FRAME_SHIFT} stft, "
                            f"{defaults.DWPT_FRAME_SHIFT} dwpt)")
        p.add_argument("--level", type=int, default=None,
                       help=f"wavelet tree depth (default {defaults.DWPT_LEVEL})")
        p.add_argument("--filter", dest="filter_name", choices=FILTER_NAMES, default=None,
                       help=f"wavelet family (default {defaults.DEFAULT_FILTER})")
        p.add_argument("--speech-rank", dest="speech_rank", type=int, default=None,
                       help=f"speech dictionary columns (default {defaults.SPEECH_RANK})")
        p.add_argument("--noise-rank", dest="noise_rank", type=int, default=None,
                       help=f"noise dictionary columns (default {defaults.NOISE_RANK})")
        p.add_argument("--iters-train", dest="iters_train", type=int, default=None,
                       help=f"training update sweeps (default {defaults.TRAIN_ITERS})")
    else:
        p.add_argument("--iters-encode", dest="iters_encode", type=int, default=None,
                       help=f"encoding update sweeps (default {defaults.ENCODE_ITERS})")
        p.add_argument("--no-normalize", dest="normalize", action="store_false",
                       default=None, help="skip subband power normalization")
        p.add_argument("--gain-on-magnitude", dest="gain_on_magnitude",
                       choices=("direct", "sqrt"), default=None,
                       help="stft gain application (default direct)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subband-nmf",
        description="Supervised subband/spectral NMF speech enhancement toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="learn per-class dictionaries from WAV files")
    p.add_argument("--clean", nargs="+", required=True, help="clean WAV files or directories")
    p.add_argument("--noise", nargs="+", required=True, help="noise WAV files or directories")
    p.add_argument("--out", required=True, help="model file to write")
    _add_common(p, training=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("enhance", help="suppress noise in WAV files with a trained model")
    p.add_argument("--model", required=True, help="model file from `train`")
    p.add_argument("--in", dest="in_paths", nargs="+", required=True,
                   help="noisy WAV files or directories")
    p.add_argument("--out", required=True, help="output WAV file, or directory for batches")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")
    p.add_argument("--dump-spectrogram", dest="dump_spectrogram", default=None,
                   help="write the enhanced output's magnitude frames to this CSV")
    _add_common(p, training=False)
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("mix", help="add noise to a clean WAV at a target SNR")
    p.add_argument("--clean", required=True)
    p.add_argument("--noise", required=True)
    p.add_argument("--snr", type=float, required=True, help="target SNR in dB")
    p.add_argument("--seed", type=int, default=None,
                   help=f"noise offset seed (default {defaults.DEFAULT_SEED})")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("eval", help="objective metrics of test WAVs against references")
    p.add_argument("--reference", required=True, help="clean WAV file or directory")
    p.add_argument("--test", required=True, help="processed WAV file or directory")
    p.add_argument("--csv", default=None, help="also write rows to this CSV file")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("roundtrip", help="analysis/synthesis round-trip error of a WAV")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--transform", choices=("dwpt", "stft"), required=True)
    p.add_argument("--level", type=int, default=None,
                   help=f"dwpt tree depth (default {defaults.DWPT_LEVEL})")
    p.add_argument("--filter", dest="filter_name", choices=FILTER_NAMES, default=None,
                   help=f"dwpt family (default {defaults.DEFAULT_FILTER})")
    p.add_argument("--frame-size", dest="frame_size", type=int, default=None,
                   help=f"stft frame (default {defaults.STFT_FRAME_SIZE})")
    p.add_argument("--frame-shift", dest="frame_shift", type=int, default=None,
                   help=f"stft hop (default {defaults.STFT_FRAME_SHIFT})")
    p.set_defaults(func=cmd_roundtrip)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
