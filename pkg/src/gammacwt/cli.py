"""Command-line front end.

Subcommands:

* ``synth``        write a synthesized vowel as 16-bit PCM mono WAV
* ``analyze``      transform a WAV file; emit scalogram and level-spectra CSV
* ``compare``      run the three-family formant comparison; emit JSON + table
* ``kernel-info``  print energy, center frequency and admissibility of a kernel

Every command accepts ``--config FILE`` with a serialized RunConfig;
individual flags override config fields.  Exit codes: 0 success, 2
validation error, 3 I/O error, 4 computation error.

All numbers are serialized with ``repr``, which round-trips IEEE doubles
exactly, and nothing time- or environment-dependent is written, so the
outputs of repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import wave
from dataclasses import dataclass, field

import numpy as np

from .analysis import ComparisonReport, compare_families
from .cwt import Scalogram, Signal, cwt, level_log_spectrum
from .errors import ConfigurationError, ValidationError
from .kernels import (
    DEFAULT_GAMMACHIRP,
    Gammachirp,
    GammachirpParams,
    GaussianDerivative,
    MexicanHat,
    Morlet,
    MotherWavelet,
    check_admissibility,
    gammatone,
    normalize,
    sample_mother,
)
from .scalespace import ScaleLadder
from .synth import VowelSpec, builtin_vowel, synthesize_vowel

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_COMPUTE = 4

FAMILY_NAMES = ("gammachirp", "gammatone", "morlet", "mexican_hat", "gaussian_derivative")


# ----------------------------------------------------------------- WAV I/O

def write_wav(path: str, sig: Signal) -> None:
    """Write a signal as 16-bit PCM mono, clamping (with a warning) any
    samples outside [-1, 1]."""
    samples = sig.samples
    if np.max(np.abs(samples), initial=0.0) > 1.0:
        print(f"warning: clipping samples outside [-1, 1] in {path}", file=sys.stderr)
        samples = np.clip(samples, -1.0, 1.0)
    pcm = np.round(samples * 32767.0).astype("<i2")
    with wave.open(path, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(int(round(sig.sample_rate)))
        w.writeframes(pcm.tobytes())


def read_wav(path: str) -> Signal:
    """Read a 16-bit PCM mono WAV file into a float signal in [-1, 1]."""
    with wave.open(path, "rb") as w:
        if w.getnchannels() != 1:
            raise ValidationError(f"{path}: expected mono WAV, got {w.getnchannels()} channels")
        if w.getsampwidth() != 2:
            raise ValidationError(f"{path}: expected 16-bit PCM, got {8 * w.getsampwidth()} bits")
        rate = w.getframerate()
        frames = w.readframes(w.getnframes())
    samples = np.frombuffer(frames, dtype="<i2").astype(float) / 32767.0
    return Signal(samples=samples, sample_rate=float(rate))


# ------------------------------------------------------------- run config

@dataclass
class FamilyConfig:
    name: str = "gammachirp"
    n: int = DEFAULT_GAMMACHIRP.n
    b: float = DEFAULT_GAMMACHIRP.b
    c: float = DEFAULT_GAMMACHIRP.c
    f0: float = DEFAULT_GAMMACHIRP.f0
    phi: float = DEFAULT_GAMMACHIRP.phi
    w0: float = 5.0
    order: int = 1

    def build(self) -> MotherWavelet:
        if self.name in ("gammachirp", "gammatone"):
            params = GammachirpParams(n=self.n, b=self.b, c=self.c, f0=self.f0, phi=self.phi)
            params = normalize(params)
            if self.name == "gammatone":
                return gammatone(params)
            return Gammachirp(params)
        if self.name == "morlet":
            return Morlet(w0=self.w0)
        if self.name == "mexican_hat":
            return MexicanHat()
        if self.name == "gaussian_derivative":
            return GaussianDerivative(order=self.order)
        raise ValidationError(
            f"family.name: unknown family {self.name!r} (expected one of {FAMILY_NAMES})"
        )


@dataclass
class LadderConfig:
    a0: float = 1.13
    b0: float = 1.0
    num_levels: int = 30
    top_center_freq: float = 8000.0

    def build(self) -> ScaleLadder:
        return ScaleLadder(
            a0=self.a0, b0=self.b0, num_levels=self.num_levels,
            top_center_freq=self.top_center_freq,
        )


@dataclass
class SynthConfig:
    vowel: str = "a"
    pitch: float | None = None
    formants: list[float] | None = None
    bandwidths: list[float] | None = None
    duration: float = 0.5
    sample_rate: float = 16000.0

    def build(self) -> VowelSpec:
        overrides = {"duration": self.duration, "sample_rate": self.sample_rate}
        if self.pitch is not None:
            overrides["pitch"] = self.pitch
        if self.formants is not None:
            if len(self.formants) != 3:
                raise ValidationError("synth.formants: need exactly three frequencies")
            overrides["formants"] = tuple(self.formants)
        if self.bandwidths is not None:
            if len(self.bandwidths) != 3:
                raise ValidationError("synth.bandwidths: need exactly three bandwidths")
            overrides["bandwidths"] = tuple(self.bandwidths)
        return builtin_vowel(self.vowel, **overrides)


@dataclass
class IoConfig:
    input: str | None = None
    output: str | None = None
    scalogram_csv: str | None = None
    spectra_csv: str | None = None
    json: str | None = None
    table: str | None = None


@dataclass
class RenderConfig:
    plots: bool = False
    plot_dir: str = "plots"


@dataclass
class RunConfig:
    family: FamilyConfig = field(default_factory=FamilyConfig)
    ladder: LadderConfig = field(default_factory=LadderConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    io: IoConfig = field(default_factory=IoConfig)
    render: RenderConfig = field(default_factory=RenderConfig)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ValidationError("config: top level must be an object")
        sections = {
            "family": FamilyConfig, "ladder": LadderConfig, "synth": SynthConfig,
            "io": IoConfig, "render": RenderConfig,
        }
        kwargs = {}
        for key, value in data.items():
            if key not in sections:
                raise ValidationError(f"config.{key}: unknown section")
            section_cls = sections[key]
            if not isinstance(value, dict):
                raise ValidationError(f"config.{key}: must be an object")
            names = {f.name for f in dataclasses.fields(section_cls)}
            for sub in value:
                if sub not in names:
                    raise ValidationError(f"config.{key}.{sub}: unknown field")
            kwargs[key] = section_cls(**value)
        return cls(**kwargs)


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config: {path} is not valid JSON ({exc})") from exc
    return RunConfig.from_dict(data)


def save_config(cfg: RunConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


# ----------------------------------------------------------- serialization

def _fmt(x: float) -> str:
    return repr(float(x))


def write_scalogram_csv(path: str, scal: Scalogram) -> None:
    """Header ``time_s,level_0@<fc>Hz,...`` then per-sample coefficient
    magnitudes, one row per sample."""
    header = ["time_s"] + [
        f"level_{m}@{_fmt(fc)}Hz" for m, fc in enumerate(scal.level_center_freqs)
    ]
    mags = np.abs(scal.coefficients)
    dt = 1.0 / scal.sample_rate
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(scal.num_samples):
            row = [_fmt(i * dt)] + [_fmt(v) for v in mags[:, i]]
            fh.write(",".join(row) + "\n")


def read_scalogram_csv(path: str):
    """Parse a scalogram CSV back into (times, center_freqs, magnitudes)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if not header or header[0] != "time_s":
            raise ValidationError(f"{path}: not a scalogram CSV (missing time_s column)")
        freqs = []
        for name in header[1:]:
            try:
                freqs.append(float(name.split("@", 1)[1].removesuffix("Hz")))
            except (IndexError, ValueError) as exc:
                raise ValidationError(f"{path}: malformed level column {name!r}") from exc
        data = np.array([[float(tok) for tok in line.strip().split(",")] for line in fh if line.strip()])
    return data[:, 0], np.array(freqs), data[:, 1:].T


def write_spectra_csv(path: str, spectra) -> None:
    """Rows of ``level,freq_hz,log_mag_db`` for every level spectrum."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("level,freq_hz,log_mag_db\n")
        for spec in spectra:
            for f, db in zip(spec.freqs, spec.log_magnitude):
                fh.write(f"{spec.level},{_fmt(f)},{_fmt(db)}\n")


def comparison_to_dict(report: ComparisonReport) -> dict:
    return {
        "vowel": report.vowel,
        "families": [
            {
                "name": fr.family,
                "per_level": [
                    {
                        "limit_hz": reading.limit_hz,
                        "peaks": [[f, db] for f, db in reading.peaks],
                        "presence": list(fr.presence[m]),
                    }
                    for m, reading in enumerate(fr.per_level)
                ],
            }
            for fr in report.reports
        ],
        "agreement": [list(row) for row in report.agreement],
    }


def comparison_table(report: ComparisonReport, levels=None) -> str:
    """Plain-text table: one row per (level, formant) with the per-family
    classification.  ``levels`` selects a subset of ladder levels; by
    default five levels spread across the ladder are shown."""
    num_levels = len(report.agreement)
    if levels is None:
        levels = sorted({int(round(x)) for x in np.linspace(num_levels / 5.0, num_levels - 2, 5)})
    names = [fr.family for fr in report.reports]
    formants = report.reports[0].formants
    width = max(len(n) for n in names) + 2
    lines = [f"vowel /{report.vowel}/"]
    lines.append(
        "level  limit_Hz  formant_Hz  " + "".join(n.ljust(width) for n in names) + "agree"
    )
    for m in levels:
        limit = report.reports[0].per_level[m].limit_hz
        for k, formant in enumerate(formants):
            cells = "".join(fr.presence[m][k].ljust(width) for fr in report.reports)
            lines.append(
                f"{m:>5}  {limit:>8.1f}  {formant:>10.1f}  {cells}{report.agreement[m][k]}"
            )
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ plots

def _render_scalogram(scal: Scalogram, out_dir: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    mags = np.abs(scal.coefficients)
    fig, ax = plt.subplots(figsize=(8, 4))
    extent = [0, scal.num_samples / scal.sample_rate, scal.num_levels - 0.5, -0.5]
    im = ax.imshow(20 * np.log10(mags + 1e-9), aspect="auto", extent=extent, cmap="magma")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("level")
    fig.colorbar(im, ax=ax, label="|coefficient| (dB)")
    fig.savefig(out / "scalogram.png", dpi=120)
    plt.close(fig)
    for m in range(scal.num_levels):
        spec = level_log_spectrum(scal, m)
        fig, ax = plt.subplots(figsize=(6, 3))
        ax.plot(spec.freqs, spec.log_magnitude, lw=0.8)
        ax.set_xlabel("frequency (Hz)")
        ax.set_ylabel("magnitude (dB)")
        ax.set_title(f"level {m} @ {scal.level_center_freqs[m]:.0f} Hz")
        fig.tight_layout()
        fig.savefig(out / f"level_{m:02d}_spectrum.png", dpi=120)
        plt.close(fig)


# -------------------------------------------------------------- commands

def cmd_synth(cfg: RunConfig) -> int:
    spec = cfg.synth.build()
    if cfg.io.output is None:
        raise ValidationError("io.output: an output WAV path is required")
    sig = synthesize_vowel(spec)
    write_wav(cfg.io.output, sig)
    print(f"wrote {cfg.io.output}: /{spec.label}/ {sig.duration:.3f}s at {sig.sample_rate:.0f} Hz")
    return EXIT_OK


def cmd_analyze(cfg: RunConfig) -> int:
    if cfg.io.input is None:
        raise ValidationError("io.input: an input WAV path is required")
    sig = read_wav(cfg.io.input)
    fam = cfg.family.build()
    ladder = cfg.ladder.build()
    scal = cwt(sig, fam, ladder)
    if cfg.io.scalogram_csv:
        write_scalogram_csv(cfg.io.scalogram_csv, scal)
        print(f"wrote {cfg.io.scalogram_csv}")
    if cfg.io.spectra_csv:
        spectra = [level_log_spectrum(scal, m) for m in range(scal.num_levels)]
        write_spectra_csv(cfg.io.spectra_csv, spectra)
        print(f"wrote {cfg.io.spectra_csv}")
    if cfg.render.plots:
        _render_scalogram(scal, cfg.render.plot_dir)
        print(f"wrote plots to {cfg.render.plot_dir}")
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    spec = cfg.synth.build()
    ladder = cfg.ladder.build()
    report = compare_families(spec, ladder)
    text = comparison_table(report)
    if cfg.io.json:
        with open(cfg.io.json, "w", encoding="utf-8") as fh:
            json.dump(comparison_to_dict(report), fh, indent=2)
            fh.write("\n")
        print(f"wrote {cfg.io.json}")
    if cfg.io.table:
        with open(cfg.io.table, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {cfg.io.table}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_kernel_info(cfg: RunConfig, as_json: bool, sample_rate: float) -> int:
    fam = cfg.family.build()
    sampled = sample_mother(fam, sample_rate)
    report = check_admissibility(fam, sample_rate)
    info = {
        "family": fam.name,
        "energy": sampled.discrete_energy,
        "center_freq_hz": sampled.center_freq,
        "nominal_center_freq_hz": fam.nominal_center_freq,
        "support_s": sampled.duration,
        "c_g": report.c_g,
        "dc_leakage": report.dc_leakage,
        "is_admissible": report.is_admissible,
    }
    if as_json:
        print(json.dumps(info, indent=2))
    else:
        for key, value in info.items():
            print(f"{key}: {value}")
    return EXIT_OK


# ------------------------------------------------------------ arg parsing

def _add_family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--wavelet", "--family", dest="family", choices=FAMILY_NAMES)
    p.add_argument("--n", type=int, help="gammachirp order")
    p.add_argument("--b", type=float, help="gammachirp bandwidth factor")
    p.add_argument("--c", type=float, help="gammachirp chirp parameter")
    p.add_argument("--f0", type=float, help="gammachirp carrier frequency (Hz)")
    p.add_argument("--phi", type=float, help="gammachirp initial phase (rad)")
    p.add_argument("--w0", type=float, help="Morlet frequency parameter")
    p.add_argument("--order", type=int, help="Gaussian derivative order")


def _add_ladder_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a0", type=float, help="ladder dilation base")
    p.add_argument("--b0", type=float, help="ladder translation base")
    p.add_argument("--levels", type=int, help="number of ladder levels")
    p.add_argument("--top", type=float, help="level-0 center frequency (Hz)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gammacwt",
        description="Continuous wavelet analysis with the gammachirp auditory kernel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="synthesize a vowel to WAV")
    p_synth.add_argument("--config")
    p_synth.add_argument("--vowel")
    p_synth.add_argument("--pitch", type=float)
    p_synth.add_argument("--formants", type=float, nargs=3, metavar=("F1", "F2", "F3"))
    p_synth.add_argument("--bandwidths", type=float, nargs=3, metavar=("B1", "B2", "B3"))
    p_synth.add_argument("--dur", type=float)
    p_synth.add_argument("--rate", type=float)
    p_synth.add_argument("--out")

    p_an = sub.add_parser("analyze", help="CWT of a WAV file to CSV")
    p_an.add_argument("--config")
    p_an.add_argument("--in", dest="input")
    p_an.add_argument("--scalogram-csv")
    p_an.add_argument("--spectra-csv")
    p_an.add_argument("--plots", action="store_true")
    p_an.add_argument("--plot-dir")
    _add_family_args(p_an)
    _add_ladder_args(p_an)

    p_cmp = sub.add_parser("compare", help="three-family formant comparison")
    p_cmp.add_argument("--config")
    p_cmp.add_argument("--vowel")
    p_cmp.add_argument("--dur", type=float)
    p_cmp.add_argument("--rate", type=float)
    p_cmp.add_argument("--json", dest="json_path")
    p_cmp.add_argument("--table")
    _add_ladder_args(p_cmp)

    p_ki = sub.add_parser("kernel-info", help="kernel energy and admissibility")
    p_ki.add_argument("--config")
    p_ki.add_argument("--rate", type=float, default=16000.0)
    p_ki.add_argument("--json", action="store_true")
    _add_family_args(p_ki)

    return parser


def _apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    a = vars(args)

    def take(section, attr, key=None):
        value = a.get(key or attr)
        if value is not None and value is not False:
            setattr(section, attr, value)

    take(cfg.family, "name", "family")
    for attr in ("n", "b", "c", "f0", "phi", "w0", "order"):
        take(cfg.family, attr)
    take(cfg.ladder, "a0")
    take(cfg.ladder, "b0")
    take(cfg.ladder, "num_levels", "levels")
    take(cfg.ladder, "top_center_freq", "top")
    take(cfg.synth, "vowel")
    take(cfg.synth, "pitch")
    take(cfg.synth, "duration", "dur")
    take(cfg.synth, "sample_rate", "rate")
    if a.get("formants") is not None:
        cfg.synth.formants = list(a["formants"])
    if a.get("bandwidths") is not None:
        cfg.synth.bandwidths = list(a["bandwidths"])
    take(cfg.io, "input")
    take(cfg.io, "output", "out")
    take(cfg.io, "scalogram_csv")
    take(cfg.io, "spectra_csv")
    take(cfg.io, "json", "json_path")
    take(cfg.io, "table")
    if a.get("plots"):
        cfg.render.plots = True
    take(cfg.render, "plot_dir")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(getattr(args, "config", None)), args)
        if args.command == "synth":
            return cmd_synth(cfg)
        if args.command == "analyze":
            return cmd_analyze(cfg)
        if args.command == "compare":
            return cmd_compare(cfg)
        if args.command == "kernel-info":
            return cmd_kernel_info(cfg, as_json=args.json, sample_rate=args.rate)
        parser.error(f"unknown command {args.command}")
    except (ValidationError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except wave.Error as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
