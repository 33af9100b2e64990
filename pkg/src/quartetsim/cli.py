"""Command-line front end: config parsing, subcommands, deterministic serialization.

Subcommands compose the library pipeline and write CSV (default) or
NDJSON.  All interface quantities are ordinary frequencies in MHz and
durations in ns.  A run is fully determined by its configuration: there
is no randomness, numeric output is serialized to 12 significant digits,
files use UTF-8 with LF line endings, and output is written to a
temporary file and atomically renamed so no partial file is ever left
behind.

Configuration is flat ``key = value`` text with ``#`` comments.  Unknown
keys, duplicate keys, malformed values, negative durations and zero steps
are all rejected.  Every key is also available as a command-line flag
(``dgs_mhz`` -> ``--dgs-mhz``), which overrides the file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, fields

import numpy as np

from .bloch import trajectory
from .core import QuartetState, pair_label
from .hamiltonian import SpinParams
from .pulse import PulseParams, exact_pulse_propagator
from .ramsey import (
    RamseySettings,
    analytic_decomposition,
    hard_pulse_decomposition,
    pulse_unitary,
    ramsey_signal_trace,
)
from .spectral import (
    Spectrum,
    SpectrumOptions,
    assign_peaks,
    branch_lines,
    dft_magnitude,
    extract_peaks,
    fold_frequency,
    folded_branch_frequencies,
    sweep_map,
)
from .units import angular_to_mhz, mhz_to_angular, ns_to_us, us_to_ns


class ConfigError(ValueError):
    """Invalid configuration file or flag combination."""


def _parse_bool(text: str) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise ConfigError(f"expected 'true' or 'false', got {text!r}")


@dataclass
class RunConfig:
    """All run settings in interface units (MHz, ns); None means 'not set'."""

    dgs_mhz: float | None = None
    delta_mhz: float | None = None
    delta_min_mhz: float | None = None
    delta_max_mhz: float | None = None
    delta_step_mhz: float | None = None
    omega1_mhz: float | None = None
    pulse_ns: float | None = None
    pulse_phase_rad: float = 0.0
    pulse_model: str = "exact"
    tau_start_ns: float = 0.0
    dtau_ns: float | None = None
    n_samples: int = 512
    initial_state: str = "mixed_half"
    observable: str = "o2"
    t2star_us: float | None = None
    window: str = "hann"
    zero_pad: int = 4
    mean_subtract: bool = True
    peak_prominence: float = 0.05
    peak_min_sep_mhz: float = 0.0
    assign_tol_mhz: float | None = None

    def validate(self) -> None:
        def require(cond: bool, message: str) -> None:
            if not cond:
                raise ConfigError(message)

        require(self.pulse_ns is None or self.pulse_ns >= 0.0, "pulse_ns must be >= 0")
        require(self.tau_start_ns >= 0.0, "tau_start_ns must be >= 0")
        require(self.dtau_ns is None or self.dtau_ns > 0.0, "dtau_ns must be > 0")
        require(self.delta_step_mhz is None or self.delta_step_mhz > 0.0, "delta_step_mhz must be > 0")
        require(self.omega1_mhz is None or self.omega1_mhz >= 0.0, "omega1_mhz must be >= 0")
        require(self.n_samples >= 2, "n_samples must be >= 2")
        require(self.zero_pad >= 1, "zero_pad must be >= 1")
        require(self.pulse_model in ("exact", "hard"), "pulse_model must be 'exact' or 'hard'")
        require(
            self.initial_state in ("plus_half", "mixed_half"),
            "initial_state must be 'plus_half' or 'mixed_half'",
        )
        require(self.observable in ("o1", "o2"), "observable must be 'o1' or 'o2'")
        require(self.window in ("none", "hann"), "window must be 'none' or 'hann'")
        require(self.t2star_us is None or self.t2star_us > 0.0, "t2star_us must be > 0")
        require(self.peak_prominence >= 0.0, "peak_prominence must be >= 0")
        require(self.peak_min_sep_mhz >= 0.0, "peak_min_sep_mhz must be >= 0")
        require(self.assign_tol_mhz is None or self.assign_tol_mhz > 0.0, "assign_tol_mhz must be > 0")


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_OPTIONAL_FLOATS = {
    "dgs_mhz", "delta_mhz", "delta_min_mhz", "delta_max_mhz", "delta_step_mhz",
    "omega1_mhz", "pulse_ns", "dtau_ns", "t2star_us", "assign_tol_mhz",
}
_FLOATS = {"pulse_phase_rad", "tau_start_ns", "peak_prominence", "peak_min_sep_mhz"}
_INTS = {"n_samples", "zero_pad"}
_BOOLS = {"mean_subtract"}
_STRINGS = {"pulse_model", "initial_state", "observable", "window"}
CONFIG_KEYS = tuple(f.name for f in fields(RunConfig))


def _coerce(key: str, text: str):
    try:
        if key in _OPTIONAL_FLOATS or key in _FLOATS:
            return float(text)
        if key in _INTS:
            return int(text)
        if key in _BOOLS:
            return _parse_bool(text)
        return text
    except ValueError as exc:
        raise ConfigError(f"invalid value for {key}: {text!r} ({exc})") from None


def parse_config_text(text: str) -> RunConfig:
    """Parse flat key = value configuration text (strict)."""
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        values[key] = _coerce(key, value)
    config = RunConfig(**values)
    config.validate()
    return config


def serialize_config(config: RunConfig) -> str:
    """Canonical text form; parsing it reproduces the configuration exactly."""
    lines = []
    for f in fields(RunConfig):
        value = getattr(config, f.name)
        if value is None:
            continue
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"


def load_config(path: str | None, overrides: dict[str, object]) -> RunConfig:
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                config = parse_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    else:
        config = RunConfig()
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    config.validate()
    return config


# --- configuration -> library objects ----------------------------------------


def _require(config: RunConfig, *keys: str) -> None:
    missing = [k for k in keys if getattr(config, k) is None]
    if missing:
        raise ConfigError(f"missing required config key(s): {', '.join(missing)}")


def spin_params(config: RunConfig, delta_mhz: float | None = None) -> SpinParams:
    _require(config, "dgs_mhz", "omega1_mhz")
    if delta_mhz is None:
        _require(config, "delta_mhz")
        delta_mhz = config.delta_mhz
    return SpinParams.from_mhz(config.dgs_mhz, delta_mhz, config.omega1_mhz)


def ramsey_settings(config: RunConfig, delta_mhz: float | None = None) -> RamseySettings:
    _require(config, "pulse_ns", "dtau_ns")
    pulse = PulseParams.from_ns(
        spin_params(config, delta_mhz), config.pulse_ns, config.pulse_phase_rad
    )
    return RamseySettings(
        pulse=pulse,
        pulse_model=config.pulse_model,
        tau_start=ns_to_us(config.tau_start_ns),
        dtau=ns_to_us(config.dtau_ns),
        n_samples=config.n_samples,
        initial_state=config.initial_state,
        observable=config.observable,
        t2star=config.t2star_us,
    )


def spectrum_options(config: RunConfig) -> SpectrumOptions:
    return SpectrumOptions(
        mean_subtract=config.mean_subtract,
        window=config.window,
        zero_pad=config.zero_pad,
    )


def delta_grid_mhz(config: RunConfig) -> np.ndarray:
    """Detuning sweep grid in MHz; empty when min exceeds max."""
    _require(config, "delta_min_mhz", "delta_max_mhz", "delta_step_mhz")
    lo, hi, step = config.delta_min_mhz, config.delta_max_mhz, config.delta_step_mhz
    if lo > hi:
        return np.array([])
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


def acquisition_bin_mhz(config: RunConfig) -> float:
    """Frequency resolution 1/(n_samples * dtau) set by the acquisition window."""
    _require(config, "dtau_ns")
    return 1.0 / (config.n_samples * ns_to_us(config.dtau_ns))


# --- deterministic serialization ----------------------------------------------


def fmt(value) -> str:
    """12-significant-digit decimal form; empty string passes through."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".12g")


def _render_csv(header: list[str], rows: list[tuple]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _render_ndjson(header: list[str], rows: list[tuple]) -> str:
    lines = []
    for row in rows:
        parts = []
        for key, value in zip(header, row):
            if isinstance(value, str):
                encoded = "null" if value == "" else json.dumps(value)
            else:
                encoded = fmt(value)
            parts.append(f"{json.dumps(key)}: {encoded}")
        lines.append("{" + ", ".join(parts) + "}")
    return "\n".join(lines) + ("\n" if lines else "")


def write_output(path: str, header: list[str], rows: list[tuple], fmt_kind: str) -> None:
    """Render and atomically write one output file (temp file + rename)."""
    text = _render_csv(header, rows) if fmt_kind == "csv" else _render_ndjson(header, rows)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    except OSError as exc:
        raise RuntimeError(f"cannot write {path!r}: {exc}") from None
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp_path, path)
    except OSError as exc:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise RuntimeError(f"cannot write {path!r}: {exc}") from None


# --- subcommands ---------------------------------------------------------------

BRANCH_HEADER = [
    "delta_mhz", "branch_id", "pair", "slope", "intercept_mhz",
    "freq_unfolded_mhz", "freq_folded_mhz",
]


def cmd_branches(config: RunConfig, args) -> list[tuple[str, list, list]]:
    _require(config, "dgs_mhz", "dtau_ns")
    if config.delta_min_mhz is not None or config.delta_max_mhz is not None:
        deltas = delta_grid_mhz(config)
    else:
        _require(config, "delta_mhz")
        deltas = np.array([config.delta_mhz])
    f_s = 1.0 / ns_to_us(config.dtau_ns)
    lines = branch_lines(mhz_to_angular(config.dgs_mhz))
    rows = []
    for delta in deltas:
        for line in lines:
            unfolded = line.frequency_mhz(delta)
            rows.append(
                (
                    delta,
                    line.branch_id,
                    pair_label(line.pair),
                    line.slope,
                    angular_to_mhz(line.intercept),
                    unfolded,
                    fold_frequency(unfolded, f_s),
                )
            )
    return [(args.out, BRANCH_HEADER, rows)]


def cmd_simulate(config: RunConfig, args) -> list[tuple[str, list, list]]:
    settings = ramsey_settings(config)
    trace = ramsey_signal_trace(settings)
    rows = [(us_to_ns(t), s) for t, s in zip(trace.times, trace.samples)]
    outputs = [(args.out, ["tau_ns", "signal"], rows)]
    if args.spectrum_out:
        spec = dft_magnitude(trace, spectrum_options(config))
        outputs.append(
            (
                args.spectrum_out,
                ["freq_mhz", "magnitude"],
                [(f, m) for f, m in zip(spec.frequencies, spec.magnitudes)],
            )
        )
    return outputs


def cmd_sweep(config: RunConfig, args) -> list[tuple[str, list, list]]:
    deltas_mhz = delta_grid_mhz(config)
    if deltas_mhz.size == 0:
        header = (
            ["delta_mhz", "peak_freq_mhz", "magnitude", "branch_id", "residual_mhz"]
            if args.peaks_only
            else ["delta_mhz", "freq_mhz", "magnitude"]
        )
        return [(args.out, header, [])]

    template = ramsey_settings(config, delta_mhz=float(deltas_mhz[0]))
    deltas_angular = np.array([mhz_to_angular(d) for d in deltas_mhz])
    sweep = sweep_map(deltas_angular, template, spectrum_options(config), workers=args.workers)

    if not args.peaks_only:
        rows = []
        for i, delta in enumerate(deltas_mhz):
            for f, m in zip(sweep.freq_mhz, sweep.magnitudes[i]):
                rows.append((delta, f, m))
        return [(args.out, ["delta_mhz", "freq_mhz", "magnitude"], rows)]

    f_s = 1.0 / ns_to_us(config.dtau_ns)
    tolerance = config.assign_tol_mhz or acquisition_bin_mhz(config)
    rows = []
    for i, delta in enumerate(deltas_mhz):
        spectrum = Spectrum(
            df=float(sweep.freq_mhz[1] - sweep.freq_mhz[0]),
            magnitudes=sweep.magnitudes[i],
            options=spectrum_options(config),
        )
        peaks = extract_peaks(spectrum, config.peak_prominence, config.peak_min_sep_mhz)
        folded = folded_branch_frequencies(spin_params(config, float(delta)), f_s)
        for assignment in assign_peaks(peaks, folded, tolerance):
            peak = assignment.peak
            if assignment.matches:
                for match in assignment.matches:
                    rows.append((delta, peak.frequency, peak.magnitude, match.branch_id, match.residual))
            else:
                rows.append((delta, peak.frequency, peak.magnitude, "", ""))
    header = ["delta_mhz", "peak_freq_mhz", "magnitude", "branch_id", "residual_mhz"]
    return [(args.out, header, rows)]


COEFF_HEADER = ["pair", "omega_mhz", "abs_x", "arg_x_rad", "c0"]


def _decomposition_rows(decomposition, dgs):
    """Rows in branch-id order with branch-table pair labels."""
    by_pair = {frozenset(line.pair): line for line in branch_lines(dgs)}
    rows = []
    for term in decomposition.terms:
        line = by_pair[frozenset(term.pair)]
        rows.append(
            (
                line.branch_id,
                pair_label(line.pair),
                angular_to_mhz(term.omega),
                abs(term.x),
                float(np.angle(term.x)),
            )
        )
    rows.sort(key=lambda r: r[0])
    return rows


def cmd_coefficients(config: RunConfig, args) -> list[tuple[str, list, list]]:
    if config.initial_state != "plus_half":
        raise ConfigError(
            "coefficients requires a pure initial state (initial_state = plus_half); "
            "for a mixture, run each pure component separately and combine linearly"
        )
    _require(config, "pulse_ns")
    params = spin_params(config)
    pulse = PulseParams.from_ns(params, config.pulse_ns, config.pulse_phase_rad)
    psi0 = QuartetState.basis_level("+1/2")

    def decomposition_for(model: str):
        if model == "hard":
            return hard_pulse_decomposition(pulse, psi0, config.observable)
        return analytic_decomposition(exact_pulse_propagator(pulse), psi0, params, config.observable)

    models = ("exact", "hard") if args.both_models else (config.pulse_model,)
    decomps = {model: decomposition_for(model) for model in models}

    if args.check_reconstruction:
        taus = ns_to_us(config.dtau_ns or 60.0) * np.arange(10_000) / 16.0
        for model, decomposition in decomps.items():
            settings = RamseySettings(
                pulse=pulse, pulse_model=model, dtau=1.0, n_samples=2,
                initial_state="plus_half", observable=config.observable,
            )
            u_p = pulse_unitary(settings)
            direct = _direct_signal(u_p, psi0, params, config.observable, taus)
            error = float(np.max(np.abs(decomposition.reconstruct(taus) - direct)))
            print(f"reconstruction check ({model}): max pointwise error = {fmt(error)}")

    if args.both_models:
        header = [
            "pair", "omega_mhz",
            "abs_x_exact", "arg_x_rad_exact", "c0_exact",
            "abs_x_hard", "arg_x_rad_hard", "c0_hard",
        ]
        exact_rows = _decomposition_rows(decomps["exact"], params.dgs)
        hard_rows = _decomposition_rows(decomps["hard"], params.dgs)
        rows = [
            (e[1], e[2], e[3], e[4], decomps["exact"].c0, h[3], h[4], decomps["hard"].c0)
            for e, h in zip(exact_rows, hard_rows)
        ]
    else:
        model = config.pulse_model
        header = COEFF_HEADER
        rows = [
            (r[1], r[2], r[3], r[4], decomps[model].c0)
            for r in _decomposition_rows(decomps[model], params.dgs)
        ]
    return [(args.out, header, rows)]


def _direct_signal(u_p, psi0, params, observable, taus):
    from .hamiltonian import free_eigenvalues
    from .ramsey import _OBSERVABLE_SUPPORT, _signal_samples

    return _signal_samples(
        u_p, free_eigenvalues(params), psi0.density_matrix(),
        _OBSERVABLE_SUPPORT[observable], np.asarray(taus),
    )


def cmd_bloch(config: RunConfig, args) -> list[tuple[str, list, list]]:
    settings = ramsey_settings(config)
    pair = tuple(args.pair.split(":"))
    if len(pair) != 2:
        raise ConfigError(f"--pair must look like '+3/2:+1/2', got {args.pair!r}")
    intra_step = ns_to_us(args.intra_step_ns) if args.intra_step_ns is not None else None
    tau = ns_to_us(args.tau_ns) if args.tau_ns is not None else None
    points = trajectory(settings, pair, intra_step=intra_step, tau=tau)
    rows = [
        (us_to_ns(t), v.x, v.y, v.z, v.pair_population)
        for t, v in points
    ]
    return [(args.out, ["t_ns", "x", "y", "z", "pair_population"], rows)]


# --- argument parsing -----------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="path to a key = value configuration file")
    parser.add_argument("--out", required=True, help="output file path")
    parser.add_argument("--format", choices=("csv", "ndjson"), default="csv")
    for key in CONFIG_KEYS:
        flag = "--" + key.replace("_", "-")
        if key in _BOOLS:
            parser.add_argument(flag, type=_parse_bool, default=None, metavar="true|false", dest=key)
        elif key in _INTS:
            parser.add_argument(flag, type=int, default=None, dest=key)
        elif key in _STRINGS:
            parser.add_argument(flag, default=None, dest=key)
        else:
            parser.add_argument(flag, type=float, default=None, dest=key)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quartetsim",
        description="Ramsey simulator and spectral analyzer for a four-level spin-3/2 qudit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("branches", help="analytic branch table versus detuning")
    _add_common(p)

    p = sub.add_parser("simulate", help="time-domain Ramsey trace (optionally its spectrum)")
    _add_common(p)
    p.add_argument("--spectrum-out", help="also write the magnitude spectrum to this path")

    p = sub.add_parser("sweep", help="detuning sweep map (long format)")
    _add_common(p)
    p.add_argument("--peaks-only", action="store_true", help="emit extracted peaks with branch assignment")
    p.add_argument("--workers", type=int, default=1, help="parallel sweep evaluation threads")

    p = sub.add_parser("coefficients", help="signal decomposition weights per sublevel pair")
    _add_common(p)
    p.add_argument("--both-models", action="store_true", help="tabulate exact and hard-pulse models side by side")
    p.add_argument("--check-reconstruction", action="store_true",
                   help="print the max error of the cosine reconstruction against direct propagation")

    p = sub.add_parser("bloch", help="Bloch trajectory of one sublevel pair")
    _add_common(p)
    p.add_argument("--pair", required=True, help="sublevel pair, e.g. '+3/2:+1/2'")
    p.add_argument("--tau-ns", type=float, default=None, help="free-evolution interval (default: last grid point)")
    p.add_argument("--intra-step-ns", type=float, default=None, help="sub-step for trajectory sampling")
    return parser


_HANDLERS = {
    "branches": cmd_branches,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "coefficients": cmd_coefficients,
    "bloch": cmd_bloch,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {key: getattr(args, key) for key in CONFIG_KEYS}
    try:
        config = load_config(args.config, overrides)
        outputs = _HANDLERS[args.command](config, args)
        for path, header, rows in outputs:
            write_output(path, header, rows, args.format)
    except (ConfigError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
