"""Command line front end.

Verbs: spectrum | witness | dynamics | classical | verify.  A JSON config
file supplies the physical blocks; individual flags override it.  Exit
codes: 0 success, 1 configuration problem, 2 numerical failure, 3
verification failure.  All floating-point output is printed with 12
significant digits so repeated runs with the same config and seed produce
byte-identical files.  The POLARITON_NUM_THREADS environment variable caps
the sweep worker pool.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import svg
from .classical import (
    CavityParams,
    classical_quantum_agreement,
    matched_coupling,
    matched_model_params,
    peak_splitting,
    predicted_splitting,
    splitting_vs_n,
    transmission_spectrum,
)
from .dynamics import (
    flop_spectrum,
    rabi_flop_signal,
    semiclassical_trajectory,
    vacuum_correlation_spectrum,
)
from .errors import ConfigurationError, DomainError, NumericalError
from .holstein_primakoff import SpinRep, commutator_residual, hp_exactness_error
from .model import (
    HilbertSpec,
    ModelParams,
    build_bilinear_hamiltonian,
    build_dicke_hamiltonian,
    build_jc_rwa_hamiltonian,
)
from .series import TimeGrid
from .spectral import (
    DEFAULT_SEED,
    cutoff_convergence,
    eigendecompose,
    ground_state,
    jc_polariton_splitting,
    normal_modes,
)
from .witness import (
    gaussian_ground_state,
    gaussian_linear_entropy,
    linear_entropy,
    linear_entropy_predicted,
    reduced_density,
    separable_bound_scan,
    witness_evaluate,
)

QUANTUM_MODELS = ("bilinear", "dicke", "jc-rwa")
ALL_FORMATS = ("csv", "json", "svg")

VERIFY_TOLERANCES = {
    "hp_exactness": 1e-12,
    "cutoff_final_delta": 1e-10,
    "gap_vs_normal_modes": 1e-6,
    "cross_route_entropy": 1e-6,
    "classical_quantum": 0.05,
    "sqrt_n_slope": 0.02,
}


# ---------------------------------------------------------------- formatting


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _jsonify(obj):
    """Round floats to 12 significant digits and strip numpy types so the
    emitted JSON is reproducible byte for byte."""
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(_fmt(obj))
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    return obj


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(_jsonify(payload), indent=2, sort_keys=True) + "\n")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return _fmt(v)


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(c) for c in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


# ------------------------------------------------------------ configuration


@dataclass
class RunConfig:
    model: str
    params: ModelParams
    hilbert: HilbertSpec | None
    cavity: CavityParams | None
    grid: TimeGrid | None
    freq_grid: tuple | None
    n_eigenvalues: int
    initial_a: complex
    initial_b: complex
    seed: int
    sweep: tuple | None  # (name, values)
    out_dir: Path
    formats: tuple
    verify_tolerances: dict


def _take(block: dict, key, default=None):
    return block[key] if key in block else default


def _load_config(args) -> RunConfig:
    raw = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise ConfigurationError(f"config file not found: {path}")
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigurationError("config root must be a JSON object")

    known = {
        "model", "params", "hilbert", "cavity", "grid", "freq_grid",
        "spectrum", "initial", "seed", "sweep", "output", "verify",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")

    model = raw.get("model", "bilinear")
    if model not in QUANTUM_MODELS + ("classical", "semiclassical"):
        raise ConfigurationError(f"unknown model '{model}'")

    pblock = raw.get("params", {})
    params = ModelParams(
        omega_a=float(_take(pblock, "omega_a", 1.0)),
        omega_b=float(_take(pblock, "omega_b", 1.0)),
        g=float(_take(pblock, "g", 0.2)),
        n_atoms=int(_take(pblock, "n_atoms", 1)),
    )

    hilbert = None
    if "hilbert" in raw:
        hblock = raw["hilbert"]
        hilbert = HilbertSpec(
            photon_cutoff=int(_take(hblock, "photon_cutoff", 12)),
            matter_dim=int(_take(hblock, "matter_dim", 13)),
        )

    cavity = None
    if "cavity" in raw:
        cblock = dict(raw["cavity"])
        needed = {
            "length", "reflectivity", "area", "n_dipoles", "dipole_moment",
            "omega_b", "gamma",
        }
        missing = needed - set(cblock)
        if missing:
            raise ConfigurationError(f"cavity block missing keys: {sorted(missing)}")
        cavity = CavityParams(
            length=float(cblock["length"]),
            reflectivity=float(cblock["reflectivity"]),
            background_index=float(cblock.get("background_index", 1.0)),
            area=float(cblock["area"]),
            n_dipoles=int(cblock["n_dipoles"]),
            dipole_moment=float(cblock["dipole_moment"]),
            omega_b=float(cblock["omega_b"]),
            gamma=float(cblock["gamma"]),
        )

    grid = None
    if "grid" in raw:
        gblock = raw["grid"]
        grid = TimeGrid(
            n_samples=int(_take(gblock, "n_samples", 8192)),
            dt=float(_take(gblock, "dt", 0.02)),
        )

    freq_grid = None
    if "freq_grid" in raw:
        fblock = raw["freq_grid"]
        for key in ("min", "max", "n"):
            if key not in fblock:
                raise ConfigurationError(f"freq_grid block missing '{key}'")
        freq_grid = (float(fblock["min"]), float(fblock["max"]), int(fblock["n"]))
        if not (freq_grid[0] < freq_grid[1]) or freq_grid[2] < 2:
            raise ConfigurationError("freq_grid needs min < max and n >= 2")

    n_eigenvalues = int(_take(raw.get("spectrum", {}), "n_eigenvalues", 10))
    if n_eigenvalues < 1:
        raise ConfigurationError("spectrum.n_eigenvalues must be >= 1")

    iblock = raw.get("initial", {})
    initial_a = complex(float(_take(iblock, "a_re", 0.0)), float(_take(iblock, "a_im", 0.0)))
    initial_b = complex(float(_take(iblock, "b_re", 0.0)), float(_take(iblock, "b_im", 0.0)))

    seed = int(raw.get("seed", DEFAULT_SEED))
    if getattr(args, "seed", None) is not None:
        seed = int(args.seed)

    sweep = None
    if "sweep" in raw:
        sblock = raw["sweep"]
        if "name" not in sblock or "values" not in sblock or not sblock["values"]:
            raise ConfigurationError("sweep block needs 'name' and non-empty 'values'")
        sweep = (str(sblock["name"]), tuple(sblock["values"]))
    if getattr(args, "sweep", None):
        text = args.sweep
        if "=" not in text:
            raise ConfigurationError("--sweep expects NAME=v1,v2,...")
        name, _, values = text.partition("=")
        parts = [v for v in values.split(",") if v]
        if not parts:
            raise ConfigurationError("--sweep expects NAME=v1,v2,...")
        sweep = (name.strip(), tuple(float(v) for v in parts))

    oblock = raw.get("output", {})
    out_dir = Path(_take(oblock, "dir", "."))
    if getattr(args, "out", None):
        out_dir = Path(args.out)
    formats = tuple(_take(oblock, "formats", ["csv", "json"]))
    if getattr(args, "format", None):
        formats = tuple(f for f in args.format.split(",") if f)
    bad = set(formats) - set(ALL_FORMATS)
    if bad or not formats:
        raise ConfigurationError(
            f"formats must be a non-empty subset of {ALL_FORMATS}, got {formats}"
        )

    tolerances = dict(VERIFY_TOLERANCES)
    vblock = raw.get("verify", {})
    overrides = vblock.get("tolerances", {})
    bad = set(overrides) - set(tolerances)
    if bad:
        raise ConfigurationError(f"unknown verify tolerances: {sorted(bad)}")
    tolerances.update({k: float(v) for k, v in overrides.items()})

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigurationError(f"cannot create output directory {out_dir}: {exc}")
    if not os.access(out_dir, os.W_OK):
        raise ConfigurationError(f"output directory {out_dir} is not writable")

    return RunConfig(
        model=model,
        params=params,
        hilbert=hilbert,
        cavity=cavity,
        grid=grid,
        freq_grid=freq_grid,
        n_eigenvalues=n_eigenvalues,
        initial_a=initial_a,
        initial_b=initial_b,
        seed=seed,
        sweep=sweep,
        out_dir=out_dir,
        formats=formats,
        verify_tolerances=tolerances,
    )


def _default_hilbert(cfg: RunConfig, params: ModelParams) -> HilbertSpec:
    if cfg.hilbert is not None:
        if cfg.model in ("dicke", "jc-rwa") and cfg.hilbert.matter_dim != params.n_atoms + 1:
            return HilbertSpec(cfg.hilbert.photon_cutoff, params.n_atoms + 1)
        return cfg.hilbert
    if cfg.model in ("dicke", "jc-rwa"):
        return HilbertSpec(12, params.n_atoms + 1)
    return HilbertSpec(12, 13)


def _sweep_points(cfg: RunConfig, *, classical: bool):
    """Resolve the sweep axis against the right parameter block and return
    (label, [(value, params_or_cavity), ...])."""
    if cfg.sweep is None:
        target = cfg.cavity if classical else cfg.params
        return None, [(None, target)]
    name, values = cfg.sweep
    if classical:
        if cfg.cavity is None:
            raise ConfigurationError("classical sweep needs a cavity block")
        fields = {f.name for f in dataclasses.fields(CavityParams)}
        if name not in fields:
            raise ConfigurationError(
                f"sweep axis '{name}' is not a cavity parameter ({sorted(fields)})"
            )
        cast = int if name == "n_dipoles" else float
        return name, [
            (v, dataclasses.replace(cfg.cavity, **{name: cast(v)})) for v in values
        ]
    fields = {f.name for f in dataclasses.fields(ModelParams)}
    if name not in fields:
        raise ConfigurationError(
            f"sweep axis '{name}' is not a model parameter ({sorted(fields)})"
        )
    cast = int if name == "n_atoms" else float
    return name, [
        (v, dataclasses.replace(cfg.params, **{name: cast(v)})) for v in values
    ]


def _pool_size() -> int:
    raw = os.environ.get("POLARITON_NUM_THREADS", "")
    try:
        n = int(raw) if raw else 4
    except ValueError:
        raise ConfigurationError(f"POLARITON_NUM_THREADS must be an integer, got '{raw}'")
    return max(1, n)


def _run_points(worker, points):
    """Evaluate sweep points in a worker pool; collection order is the
    submission order, so output stays deterministic."""
    if len(points) == 1:
        return [worker(points[0])]
    with ThreadPoolExecutor(max_workers=_pool_size()) as pool:
        return list(pool.map(worker, points))


# ------------------------------------------------------------------- verbs


_BUILDERS = {
    "bilinear": build_bilinear_hamiltonian,
    "dicke": build_dicke_hamiltonian,
    "jc-rwa": build_jc_rwa_hamiltonian,
}


def _spectrum_point(cfg, params):
    spec = _default_hilbert(cfg, params)
    h = _BUILDERS[cfg.model](params, spec)
    k = min(cfg.n_eigenvalues, h.dim)
    dec = eigendecompose(h, seed=cfg.seed)
    values = dec.eigenvalues[:k]
    payload = {
        "model": cfg.model,
        "omega_a": params.omega_a,
        "omega_b": params.omega_b,
        "g": params.g,
        "n_atoms": params.n_atoms,
        "collective_coupling": params.collective_coupling,
        "photon_cutoff": spec.photon_cutoff,
        "matter_dim": spec.matter_dim,
        "ground_energy": float(values[0]),
        "first_gap": float(values[1] - values[0]) if k > 1 else None,
        "eigenvalues": [float(v) for v in values],
    }
    if cfg.model == "bilinear":
        modes = normal_modes(params)
        payload["omega_minus"] = modes.omega_minus
        payload["omega_plus"] = modes.omega_plus
    return payload


def cmd_spectrum(cfg: RunConfig, args) -> int:
    if cfg.model == "classical":
        return cmd_classical(cfg, args)
    if cfg.model == "semiclassical":
        raise ConfigurationError("spectrum needs a quantum model or 'classical'")
    name, points = _sweep_points(cfg, classical=False)
    results = _run_points(lambda p: _spectrum_point(cfg, p[1]), points)

    summary_rows = []
    for i, ((value, _), payload) in enumerate(zip(points, results)):
        stem = f"spectrum_{i:03d}" if name else "spectrum"
        if "csv" in cfg.formats:
            rows = [(j, e) for j, e in enumerate(payload["eigenvalues"])]
            _write_csv(
                cfg.out_dir / f"{stem}.csv",
                ["index", "energy [hbar=1 input frequency units]"],
                rows,
            )
        if "json" in cfg.formats:
            _write_json(cfg.out_dir / f"{stem}.json", payload)
        if "svg" in cfg.formats:
            chart = svg.line_chart(
                list(range(len(payload["eigenvalues"]))),
                payload["eigenvalues"],
                title=f"{cfg.model} spectrum",
                x_label="index",
                y_label="energy",
            )
            (cfg.out_dir / f"{stem}.svg").write_text(chart)
        summary_rows.append(
            (value, payload["ground_energy"], payload["first_gap"])
        )
    if name:
        _write_csv(
            cfg.out_dir / "spectrum_summary.csv",
            [name, "ground_energy [hbar=1 input frequency units]",
             "first_gap [hbar=1 input frequency units]"],
            summary_rows,
        )
    print(f"spectrum: wrote {len(results)} point(s) to {cfg.out_dir}")
    return 0


def _witness_point(cfg, params):
    spec = cfg.hilbert if cfg.hilbert is not None else HilbertSpec(16, 17)
    h = build_bilinear_hamiltonian(params, spec)
    energy, state = ground_state(h, seed=cfg.seed)
    verdict = witness_evaluate(h, state, params)
    rho = reduced_density(state, spec, "photon")
    fock = linear_entropy(rho)
    gauss = gaussian_linear_entropy(gaussian_ground_state(params), "photon")
    predicted = linear_entropy_predicted(params)
    scan = separable_bound_scan(params)
    return {
        "omega_a": params.omega_a,
        "omega_b": params.omega_b,
        "collective_coupling": params.collective_coupling,
        "ground_energy": energy,
        "witness_value": verdict.value,
        "separable_floor": verdict.separable_floor,
        "verdict": verdict.verdict,
        "coherent_scan_minimum": scan.minimum,
        "entropy_fock": fock,
        "entropy_gaussian": gauss,
        "entropy_predicted": predicted,
    }


def cmd_witness(cfg: RunConfig, args) -> int:
    name, points = _sweep_points(cfg, classical=False)
    try:
        results = _run_points(lambda p: _witness_point(cfg, p[1]), points)
    except DomainError as exc:
        refusal = {"status": "refused", "reason": str(exc)}
        if "json" in cfg.formats:
            _write_json(cfg.out_dir / "witness.json", refusal)
        print(f"witness: refused ({exc})", file=sys.stderr)
        return 1

    for i, payload in enumerate(results):
        stem = f"witness_{i:03d}" if name else "witness"
        if "json" in cfg.formats:
            _write_json(cfg.out_dir / f"{stem}.json", payload)
    if "csv" in cfg.formats:
        header = [
            name or "point",
            "witness_value [hbar=1 input frequency units]",
            "verdict",
            "entropy_fock [1]",
            "entropy_gaussian [1]",
            "entropy_predicted [1]",
        ]
        rows = [
            (
                value if name else i,
                r["witness_value"],
                r["verdict"],
                r["entropy_fock"],
                r["entropy_gaussian"],
                r["entropy_predicted"],
            )
            for i, ((value, _), r) in enumerate(zip(points, results))
        ]
        _write_csv(cfg.out_dir / "witness_summary.csv", header, rows)
    verdicts = ", ".join(r["verdict"] for r in results)
    print(f"witness: {verdicts} (files in {cfg.out_dir})")
    return 0


def cmd_dynamics(cfg: RunConfig, args) -> int:
    kind = args.kind
    if cfg.sweep is not None:
        raise ConfigurationError("dynamics does not support sweeps")
    params = cfg.params

    if kind == "rabi-flop":
        model = cfg.model if cfg.model in QUANTUM_MODELS else "bilinear"
        # dt must resolve the spectral radius of the default truncation
        grid = cfg.grid or TimeGrid(32768, 0.01)
        spec = _default_hilbert(cfg, params) if cfg.hilbert is not None else None
        traj = rabi_flop_signal(params, grid, model=model, spec=spec, seed=cfg.seed)
        spectrum = flop_spectrum(traj, channel="matter_excitation")
        peak = float(spectrum.frequencies[int(np.argmax(spectrum.intensities))])
        payload = {
            "model": model,
            "collective_coupling": params.collective_coupling,
            "dominant_frequency": peak,
        }
        if model == "bilinear":
            payload["normal_mode_splitting"] = normal_modes(params).splitting
        if model == "jc-rwa":
            payload["single_excitation_splitting"] = 2.0 * params.collective_coupling
        if "csv" in cfg.formats:
            _write_csv(
                cfg.out_dir / "rabi_flop.csv",
                ["time [1/input frequency]", "matter_excitation [1]"],
                zip(traj.times, traj.channels["matter_excitation"]),
            )
            _write_csv(
                cfg.out_dir / "rabi_flop_spectrum.csv",
                ["omega [input frequency units]", "power [arb]"],
                zip(spectrum.frequencies, spectrum.intensities),
            )
        if "json" in cfg.formats:
            _write_json(cfg.out_dir / "rabi_flop.json", payload)
        if "svg" in cfg.formats:
            (cfg.out_dir / "rabi_flop.svg").write_text(
                svg.line_chart(
                    traj.times, traj.channels["matter_excitation"],
                    title="matter excitation", x_label="time", y_label="<n_b>",
                )
            )
            (cfg.out_dir / "rabi_flop_spectrum.svg").write_text(
                svg.line_chart(
                    spectrum.frequencies, spectrum.intensities,
                    title="flopping spectrum", x_label="omega", y_label="power",
                )
            )
        print(f"dynamics rabi-flop: dominant frequency {_fmt(peak)}")
        return 0

    if kind == "semiclassical":
        grid = cfg.grid or TimeGrid(20000, 0.01)
        traj = semiclassical_trajectory(params, cfg.initial_a, cfg.initial_b, grid)
        amp_a = np.abs(traj.channels["a"])
        amp_b = np.abs(traj.channels["b"])
        energy = traj.channels["energy"]
        drift = float(np.max(np.abs(energy - energy[0])))
        payload = {
            "collective_coupling": params.collective_coupling,
            "initial_a": [cfg.initial_a.real, cfg.initial_a.imag],
            "initial_b": [cfg.initial_b.real, cfg.initial_b.imag],
            "max_abs_a": float(amp_a.max()),
            "max_abs_b": float(amp_b.max()),
            "energy_drift": drift,
        }
        if "csv" in cfg.formats:
            _write_csv(
                cfg.out_dir / "semiclassical.csv",
                ["time [1/input frequency]", "re_a [1]", "im_a [1]",
                 "re_b [1]", "im_b [1]", "energy [hbar=1 input frequency units]"],
                zip(
                    traj.times,
                    traj.channels["a"].real, traj.channels["a"].imag,
                    traj.channels["b"].real, traj.channels["b"].imag,
                    energy,
                ),
            )
        if "json" in cfg.formats:
            _write_json(cfg.out_dir / "semiclassical.json", payload)
        if "svg" in cfg.formats:
            (cfg.out_dir / "semiclassical.svg").write_text(
                svg.line_chart(
                    traj.times, traj.channels["a"].real,
                    title="mean field", x_label="time", y_label="Re <a>",
                )
            )
        print(
            "dynamics semiclassical: max |<a>| "
            f"{_fmt(payload['max_abs_a'])}, max |<b>| {_fmt(payload['max_abs_b'])}"
        )
        return 0

    if kind == "vacuum-correlation":
        grid = cfg.grid or TimeGrid(8192, 0.05)
        spec = cfg.hilbert
        spectrum = vacuum_correlation_spectrum(params, grid, spec=spec, seed=cfg.seed)
        modes = normal_modes(params)
        floor = 0.01 * float(spectrum.intensities.max())
        lines = [
            (float(f), float(v))
            for f, v in zip(spectrum.frequencies, spectrum.intensities)
            if v >= floor
        ]
        payload = {
            "collective_coupling": params.collective_coupling,
            "omega_minus": modes.omega_minus,
            "omega_plus": modes.omega_plus,
            "total_weight": float(spectrum.intensities.sum()),
            "peaks": [{"omega": f, "weight": v} for f, v in lines],
        }
        if "csv" in cfg.formats:
            _write_csv(
                cfg.out_dir / "vacuum_correlation.csv",
                ["omega [input frequency units]", "weight [1]"],
                zip(spectrum.frequencies, spectrum.intensities),
            )
        if "json" in cfg.formats:
            _write_json(cfg.out_dir / "vacuum_correlation.json", payload)
        if "svg" in cfg.formats:
            (cfg.out_dir / "vacuum_correlation.svg").write_text(
                svg.line_chart(
                    spectrum.frequencies, spectrum.intensities,
                    title="vacuum correlation spectrum",
                    x_label="omega", y_label="weight",
                )
            )
        print(f"dynamics vacuum-correlation: {len(lines)} line(s) above floor")
        return 0

    raise ConfigurationError(f"unknown dynamics kind '{kind}'")


def _classical_point(cfg, cavity):
    if cfg.freq_grid is not None:
        lo, hi, n = cfg.freq_grid
        omegas = np.linspace(lo, hi, n)
    else:
        pred = predicted_splitting(cavity)
        span = max(
            3.0 * pred,
            60.0 * cavity.gamma,
            20.0 * cavity.free_spectral_range / cavity.finesse,
        )
        omegas = np.linspace(cavity.omega_b - span, cavity.omega_b + span, 4001)
    spectrum = transmission_spectrum(cavity, omegas)
    report = peak_splitting(spectrum)
    payload = {
        "n_dipoles": cavity.n_dipoles,
        "predicted_splitting": predicted_splitting(cavity),
        "matched_lambda": matched_coupling(cavity),
        "flag": report.flag,
        "peak_frequencies": list(report.peak_frequencies),
        "splitting": report.splitting,
    }
    try:
        agreement = classical_quantum_agreement(cavity)
        payload["quantum_splitting"] = agreement.quantum_splitting
        payload["relative_deviation"] = agreement.relative_deviation
    except (ConfigurationError, DomainError):
        payload["quantum_splitting"] = None
        payload["relative_deviation"] = None
    return spectrum, payload


def cmd_classical(cfg: RunConfig, args) -> int:
    if cfg.cavity is None:
        raise ConfigurationError("classical runs need a cavity block in the config")
    name, points = _sweep_points(cfg, classical=True)
    results = _run_points(lambda p: _classical_point(cfg, p[1]), points)

    summary_rows = []
    for i, ((value, _), (spectrum, payload)) in enumerate(zip(points, results)):
        stem = f"classical_{i:03d}" if name else "classical"
        if "csv" in cfg.formats:
            _write_csv(
                cfg.out_dir / f"{stem}.csv",
                ["omega [rad/s]", "transmission [1]"],
                zip(spectrum.frequencies, spectrum.intensities),
            )
        if "json" in cfg.formats:
            _write_json(cfg.out_dir / f"{stem}.json", payload)
        if "svg" in cfg.formats:
            (cfg.out_dir / f"{stem}.svg").write_text(
                svg.line_chart(
                    spectrum.frequencies, spectrum.intensities,
                    title="cavity transmission",
                    x_label="omega [rad/s]", y_label="T",
                )
            )
        summary_rows.append(
            (value, payload["splitting"], payload["predicted_splitting"], payload["flag"])
        )
    if name:
        _write_csv(
            cfg.out_dir / "classical_summary.csv",
            [name, "splitting [rad/s]", "predicted_splitting [rad/s]", "flag"],
            summary_rows,
        )
    flags = ", ".join(p["flag"] for _, p in results)
    print(f"classical: {flags} (files in {cfg.out_dir})")
    return 0


# ------------------------------------------------------------------ verify


def reference_cavity(
    n_dipoles: int = 100,
    *,
    coupling_fraction: float = 0.1,
    finesse: float = 300.0,
    gamma_fraction: float = 0.0025,
    omega_b: float = 2.4e15,
    area: float = 1e-12,
) -> CavityParams:
    """SI cavity tuned to its first longitudinal mode with the dipole moment
    solved so the predicted peak separation is coupling_fraction * omega_b."""
    from scipy.constants import c, epsilon_0, hbar

    length = math.pi * c / omega_b
    target = coupling_fraction * omega_b
    dipole = target / math.sqrt(n_dipoles * omega_b / (hbar * epsilon_0 * area * length))
    # amplitude reflectivity from finesse = pi r / (1 - r^2)
    coef = math.pi / finesse
    r = (-coef + math.sqrt(coef * coef + 4.0)) / 2.0
    return CavityParams(
        length=length,
        reflectivity=r,
        background_index=1.0,
        area=area,
        n_dipoles=n_dipoles,
        dipole_moment=dipole,
        omega_b=omega_b,
        gamma=gamma_fraction * omega_b,
    )


def _log_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])


def run_verification(tolerances: dict, seed: int = DEFAULT_SEED) -> dict:
    """The five standing cross-checks with their measured values."""
    checks = []

    # 1. exact bosonization on the truncated ladder
    js = [0.5 * k for k in range(1, 101)]
    worst_exact = max(hp_exactness_error(SpinRep(j)) for j in js)
    worst_comm = max(commutator_residual(SpinRep(j)) for j in js)
    tol = tolerances["hp_exactness"]
    checks.append(
        {
            "name": "hp_exactness",
            "tolerance": tol,
            "measured": {"max_map_error": worst_exact, "max_commutator_residual": worst_comm},
            "passed": worst_exact <= tol and worst_comm <= tol,
        }
    )

    # 2. cutoff ladder and gap agreement with the normal modes
    params = ModelParams.from_collective(1.0, 1.0, 0.2)
    ladder = cutoff_convergence(
        "bilinear", params, (8, 10, 12), tol=tolerances["cutoff_final_delta"], seed=seed
    )
    h = build_bilinear_hamiltonian(params, HilbertSpec(12, 13))
    dec = eigendecompose(h, seed=seed)
    modes = normal_modes(params)
    gap_lo = abs(float(dec.eigenvalues[1] - dec.eigenvalues[0]) - modes.omega_minus)
    gap_hi = abs(float(dec.eigenvalues[2] - dec.eigenvalues[0]) - modes.omega_plus)
    gtol = tolerances["gap_vs_normal_modes"]
    checks.append(
        {
            "name": "cutoff_convergence",
            "tolerance": tolerances["cutoff_final_delta"],
            "measured": {
                "final_delta": ladder.final_delta,
                "gap_error_lower": gap_lo,
                "gap_error_upper": gap_hi,
            },
            "passed": bool(ladder.converged and gap_lo <= gtol and gap_hi <= gtol),
        }
    )

    # 3. entropy route agreement
    worst_gap = 0.0
    for lam in (0.05, 0.1, 0.2, 0.3):
        p = ModelParams.from_collective(1.0, 1.0, lam)
        spec = HilbertSpec(16, 17)
        _, state = ground_state(build_bilinear_hamiltonian(p, spec), seed=seed)
        fock = linear_entropy(reduced_density(state, spec, "photon"))
        gauss = gaussian_linear_entropy(gaussian_ground_state(p), "photon")
        worst_gap = max(worst_gap, abs(fock - gauss))
    tol = tolerances["cross_route_entropy"]
    checks.append(
        {
            "name": "cross_route_entropy",
            "tolerance": tol,
            "measured": {"max_route_gap": worst_gap},
            "passed": worst_gap <= tol,
        }
    )

    # 4. classical transmission versus quantum normal modes
    cavity = reference_cavity()
    agreement = classical_quantum_agreement(cavity)
    tol = tolerances["classical_quantum"]
    ok = agreement.flag == "split" and agreement.relative_deviation <= tol
    checks.append(
        {
            "name": "classical_quantum",
            "tolerance": tol,
            "measured": {
                "relative_deviation": agreement.relative_deviation,
                "classical_splitting": agreement.classical_splitting,
                "quantum_splitting": agreement.quantum_splitting,
            },
            "passed": bool(ok),
        }
    )

    # 5. square-root scaling of the splitting with dipole number
    fit_cavity = reference_cavity(
        256, coupling_fraction=0.04, finesse=1000.0, gamma_fraction=5e-5
    )
    n_values = (4, 8, 16, 32, 64, 128, 256)
    splittings = splitting_vs_n(fit_cavity, n_values)
    tol = tolerances["sqrt_n_slope"]
    if any(s is None for s in splittings):
        classical_slope = float("nan")
        ok = False
    else:
        classical_slope = _log_slope(n_values, splittings)
        ok = abs(classical_slope - 0.5) <= tol
    jc_ns = (1, 2, 4, 8, 16, 32, 64)
    jc_splittings = [
        jc_polariton_splitting(ModelParams(1.0, 1.0, 0.01, n), seed=seed) for n in jc_ns
    ]
    jc_slope = _log_slope(jc_ns, jc_splittings)
    ok = ok and abs(jc_slope - 0.5) <= tol
    checks.append(
        {
            "name": "sqrt_n_fit",
            "tolerance": tol,
            "measured": {"classical_slope": classical_slope, "jc_slope": jc_slope},
            "passed": bool(ok),
        }
    )

    return {
        "seed": seed,
        "all_passed": all(c["passed"] for c in checks),
        "checks": checks,
    }


def cmd_verify(cfg: RunConfig, args) -> int:
    report = run_verification(cfg.verify_tolerances, seed=cfg.seed)
    _write_json(cfg.out_dir / "verify_report.json", report)
    for check in report["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"verify: {check['name']}: {status}")
    if report["all_passed"]:
        print("verify: all checks passed")
        return 0
    print("verify: FAILED", file=sys.stderr)
    return 3


# ------------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as configuration errors so the
    exit code stays 1."""

    def error(self, message):
        raise ConfigurationError(message)


def _add_common(sub):
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--out", help="output directory (overrides config)")
    sub.add_argument("--format", help="comma list from csv,json,svg")
    sub.add_argument("--seed", type=int, help="eigensolver seed")


def _build_parser() -> _Parser:
    parser = _Parser(prog="polariton", description=__doc__)
    subs = parser.add_subparsers(dest="verb", parser_class=_Parser)

    sp = subs.add_parser("spectrum", help="eigenvalue tables or classical spectra")
    _add_common(sp)
    sp.add_argument("--sweep", help="NAME=v1,v2,... over a parameter")
    sp.set_defaults(handler=cmd_spectrum)

    wp = subs.add_parser("witness", help="entanglement witness and linear entropy")
    _add_common(wp)
    wp.add_argument("--sweep", help="NAME=v1,v2,... over a parameter")
    wp.set_defaults(handler=cmd_witness)

    dp = subs.add_parser("dynamics", help="time evolution and spectra")
    dp.add_argument(
        "kind", choices=("rabi-flop", "semiclassical", "vacuum-correlation")
    )
    _add_common(dp)
    dp.set_defaults(handler=cmd_dynamics)

    cp = subs.add_parser("classical", help="multi-beam interference transmission")
    _add_common(cp)
    cp.add_argument("--sweep", help="NAME=v1,v2,... over a cavity parameter")
    cp.set_defaults(handler=cmd_classical)

    vp = subs.add_parser("verify", help="run the standing cross-check suite")
    _add_common(vp)
    vp.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not hasattr(args, "handler"):
            parser.print_help()
            return 1
        cfg = _load_config(args)
        return args.handler(cfg, args)
    except (ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
