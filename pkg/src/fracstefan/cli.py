"""Command-line front end: simulate, profile, sweep, verify, compare.

Every subcommand resolves a configuration (file + --set/flag overrides),
computes, and writes its artifacts into a run directory

    <root>/<subcommand>-<hash12>/

where <root> is taken from --out, then the [output] root key, then the
FRACSTEFAN_OUT environment variable, then ./runs, and <hash12> is the
first 12 hex digits of the SHA-256 of the resolved configuration (minus
the [output] section) together with the subcommand and its extra options.
manifest.json in that directory records the resolved parameters, the time
step and step count, library versions, wall time, and SHA-256 hashes of
every artifact.  CSV numbers use the shortest round-trip decimal form, so
re-running a subcommand with the same configuration reproduces the CSVs
byte for byte.

Exit status: 0 all gates passed, 1 a gate failed, 2 usage or
configuration error, 3 numeric abort (CFL violation, non-finite values,
or an oracle that cannot reach its tolerance).
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import os
import platform
import sys
import time

import numpy as np
import scipy

from . import __version__
from .config import Config, ConfigError, parse_config, render_config
from .experiments import (
    box_datum,
    classical_front_comparison,
    limit_L_bracketing,
    small_s_ode_check,
    support_growth,
    sweep_xi0_vs_P2,
    sweep_xi0_vs_s,
)
from .grid import FarField, Grid1D, init_cell_average, init_pointwise
from .phase import PhaseLaw
from .selfsimilar import (
    ProfileError,
    extract_profile,
    fit_front_exponent,
    fit_tail_exponent,
    locate_free_boundary,
    mass_transfer,
    profile_report,
    step_datum,
)
from .stencil import (
    OracleError,
    apply,
    boundary_flux,
    build_power_weights,
    build_quadrature_weights,
    consistency_error,
    kernel_constant,
    oracle_point,
    power_kernel,
    power_tail,
)
from .stepper import CFLError, NumericsError, RunConfig, cfl_max_dt, run

ENV_OUTPUT_ROOT = "FRACSTEFAN_OUT"

# flag -> section.key shorthand table; applied after --set entries
_SUGAR = (
    ("--s", "problem.s"),
    ("--L", "problem.L"),
    ("--P1", "problem.P1"),
    ("--P2", "problem.P2"),
    ("--law", "problem.law"),
    ("--datum", "problem.datum"),
    ("--dx", "grid.dx"),
    ("--radius", "grid.domain_radius"),
    ("--init", "grid.init"),
    ("--backend", "operator.weights_backend"),
    ("--method", "operator.method"),
    ("--G", "operator.window_G"),
    ("--t-final", "time.t_final"),
    ("--theta", "time.theta"),
    ("--snapshots", "time.snapshots"),
)


# ---------------------------------------------------------------------------
# artifact plumbing

def _fmt(value) -> str:
    """Shortest decimal that reloads to the same float (ints stay ints)."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: _jsonable(getattr(obj, f.name))
               for f in dataclasses.fields(obj)}
        if hasattr(obj, "passed"):
            out["passed"] = bool(obj.passed)
        return out
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _resolve_root(config: Config, args) -> str:
    return (args.out or config.root
            or os.environ.get(ENV_OUTPUT_ROOT) or "runs")


def _make_run_dir(config: Config, args, extras: dict) -> str:
    """Create <root>/<subcommand>-<hash12>; the hash covers everything that
    influences the artifacts, and nothing (like the output root) that does
    not."""
    blob = render_config(dataclasses.replace(config, root=None))
    blob += f"\n[invocation]\nsubcommand = {json.dumps(args.subcommand)}\n"
    for key in sorted(extras):
        blob += f"{key} = {json.dumps(extras[key])}\n"
    digest = hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]
    path = os.path.join(_resolve_root(config, args), f"{args.subcommand}-{digest}")
    os.makedirs(path, exist_ok=True)
    return path


def _config_sections(config: Config) -> dict:
    from .config import SECTION_LAYOUT
    return {sec: {k: _jsonable(getattr(config, k)) for k in keys}
            for sec, keys in SECTION_LAYOUT.items()}


def _write_manifest(run_dir: str, config: Config, args, extras: dict,
                    parameters: dict, gates: dict, t_start: float) -> None:
    artifacts = {
        name: _sha256(os.path.join(run_dir, name))
        for name in sorted(os.listdir(run_dir)) if name != "manifest.json"
    }
    payload = {
        "subcommand": args.subcommand,
        "invocation": extras,
        "config": _config_sections(config),
        "parameters": parameters,
        "gates": gates,
        "passed": all(gates.values()) if gates else True,
        "versions": {
            "fracstefan": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "wall_time_s": round(time.perf_counter() - t_start, 3),
        "artifacts": artifacts,
    }
    _write_json(os.path.join(run_dir, "manifest.json"), payload)


def _report_gates(gates: dict) -> int:
    for name, ok in gates.items():
        print(f"gate {name}: {'PASS' if ok else 'FAIL'}")
    return 0 if all(gates.values()) else 1


# ---------------------------------------------------------------------------
# problem assembly

def _build_law(config: Config) -> PhaseLaw:
    if config.law == "two":
        return PhaseLaw("two", latent_heat=config.L, k1=config.k1, k2=config.k2)
    if config.law == "identity":
        return PhaseLaw("identity")
    return PhaseLaw("one", latent_heat=config.L)


def _build_problem(config: Config):
    grid = Grid1D.centered(config.domain_radius, config.dx)
    law = _build_law(config)
    G = config.window_G if config.window_G is not None else grid.m - 1
    builder = (build_power_weights if config.weights_backend == "power"
               else build_quadrature_weights)
    stencil = builder(config.s, config.dx, G)
    if config.datum == "step":
        far = FarField(config.L + config.P1, config.L - config.P2)
        h0 = lambda x: step_datum(x, config.L, config.P1, config.P2)
    else:
        far = FarField(0.0, 0.0)
        h0 = lambda x: box_datum(x, config.L + config.box_height, 0.0,
                                 config.box_radius)
    init = init_pointwise if config.init == "pointwise" else init_cell_average
    state = init(grid, far, h0)
    run_config = RunConfig(t_final=config.t_final, theta=config.theta,
                           snapshot_times=config.snapshots)
    return grid, law, stencil, state, run_config


def _march(config: Config):
    """Run the configured problem; returns (grid, law, stencil, snapshots,
    parameter dict for the manifest)."""
    grid, law, stencil, state, run_config = _build_problem(config)
    counter = {"steps": 0}

    def tick(st):
        counter["steps"] += 1
        return st

    snaps = run(state, stencil, law, run_config, method=config.method,
                post_step=tick)
    parameters = {
        "m": grid.m,
        "window_G": stencil.G,
        "dt_max": cfl_max_dt(stencil, law, config.theta),
        "steps": counter["steps"],
        "snapshot_times": [st.time for st in snaps],
    }
    return grid, law, stencil, snaps, parameters


# ---------------------------------------------------------------------------
# subcommands

def cmd_simulate(config: Config, args) -> int:
    t0 = time.perf_counter()
    run_dir = args.run_dir = _make_run_dir(config, args, {})
    grid, law, _, snaps, parameters = _march(config)
    x = grid.nodes()
    files = {}
    for i, st in enumerate(snaps):
        name = f"snapshot_{i:03d}.csv"
        files[name] = st.time
        _write_csv(os.path.join(run_dir, name), ("x", "h", "u"),
                   zip(x, st.values, np.asarray(law.phi(st.values))))
    parameters["snapshot_files"] = files
    _write_manifest(run_dir, config, args, {}, parameters, {}, t0)
    print(f"wrote {len(files)} snapshot(s) to {run_dir}")
    return 0


def cmd_profile(config: Config, args) -> int:
    t0 = time.perf_counter()
    if config.datum != "step":
        raise ConfigError("profile requires datum = \"step\"")
    if config.t_final <= 0.0:
        raise ConfigError("profile requires t_final > 0")
    extras = {}
    if args.threshold is not None:
        extras["threshold"] = args.threshold
    run_dir = args.run_dir = _make_run_dir(config, args, extras)
    grid, law, _, snaps, parameters = _march(config)
    prof = extract_profile(snaps[-1], law, config.s, config.P1, config.P2,
                           locate_threshold=args.threshold)
    _write_csv(os.path.join(run_dir, "profile.csv"), ("xi", "H", "U"),
               zip(prof.xi, prof.H, prof.U))

    report = {"s": config.s, "t_extract": prof.t_extract, "dxi": prof.dxi,
              "xi0": prof.xi0}
    try:
        loc = locate_free_boundary(prof, threshold=args.threshold)
        report["front"] = _jsonable(loc)
    except ProfileError as exc:
        report["front"] = {"error": f"{type(exc).__name__}: {exc}"}
    for key, fit_fn in (("tail_fit", fit_tail_exponent),
                        ("front_fit", fit_front_exponent)):
        try:
            report[key] = _jsonable(fit_fn(prof))
        except ProfileError as exc:
            report[key] = {"error": f"{type(exc).__name__}: {exc}"}
    try:
        report["mass_transfer"] = _jsonable(mass_transfer(prof))
    except ProfileError as exc:
        report["mass_transfer"] = {"error": f"{type(exc).__name__}: {exc}"}
    checks = profile_report(prof)
    report["checks"] = _jsonable(checks)

    gates = {
        "profile_checks": bool(checks.passed),
        "front_positive": bool(np.isfinite(prof.xi0) and prof.xi0 > 0.0),
    }
    report["passed"] = all(gates.values())
    _write_json(os.path.join(run_dir, "profile.json"), report)
    _write_manifest(run_dir, config, args, extras, parameters, gates, t0)
    print(f"profile written to {run_dir} (xi0 = {prof.xi0!r})")
    return _report_gates(gates)


_SWEEP_DEFAULTS = {"p2": (0.25, 0.5, 1.0, 2.0, 4.0),
                   "s": (0.1, 0.25, 0.5, 0.75, 0.9)}


def _parse_values(raw, axis: str):
    if raw is None:
        return list(_SWEEP_DEFAULTS[axis])
    try:
        values = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--values must be a JSON list: {exc}")
    if (not isinstance(values, list) or not values
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                       for v in values)):
        raise ConfigError(f"--values must be a nonempty JSON list of numbers, "
                          f"got {raw!r}")
    return [float(v) for v in values]


def cmd_sweep(config: Config, args) -> int:
    t0 = time.perf_counter()
    values = _parse_values(args.values, args.axis)
    extras = {"axis": args.axis, "values": values}
    run_dir = args.run_dir = _make_run_dir(config, args, extras)
    common = dict(L=config.L, P1=config.P1, dx=config.dx,
                  radius=config.domain_radius, t_extract=config.t_final,
                  theta=config.theta)
    if args.axis == "p2":
        records = sweep_xi0_vs_P2([config.s], values, **common)
        csv_name = "sweep_xi0_p2.csv"
        gate_keys = ("xi0_monotone_in_P2", "min_at_largest_P2")
    else:
        records = sweep_xi0_vs_s(values, [config.P2], **common)
        csv_name = "sweep_xi0_s.csv"
        gate_keys = ("min_at_smallest_s",)

    header = ("s", "P2", "xi0", "L", "P1", "dx", "domain_radius",
              "t_extract", "tail_exponent", "front_exponent")
    _write_csv(os.path.join(run_dir, csv_name), header,
               [(r.s, r.P2, r.xi0, r.L, r.P1, r.dx, r.domain_radius,
                 r.t_extract, r.tail_exponent, r.front_exponent)
                for r in records])
    gates = {key: all(bool(r.flags.get(key)) for r in records)
             for key in gate_keys}
    _write_json(os.path.join(run_dir, "sweep.json"),
                {"axis": args.axis, "values": values,
                 "records": records, "gates": gates,
                 "passed": all(gates.values())})
    parameters = {"n_records": len(records),
                  "xi0": [r.xi0 for r in records]}
    _write_manifest(run_dir, config, args, extras, parameters, gates, t0)
    print(f"{len(records)} sweep record(s) written to {run_dir}")
    return _report_gates(gates)


def _verify_consistency(config: Config) -> tuple:
    """Order table of the configured backend against the point oracle."""
    s = config.s
    builder = (build_power_weights if config.weights_backend == "power"
               else build_quadrature_weights)
    psi = lambda x: np.exp(-np.asarray(x) ** 2)
    pts = np.array([-1.0, -0.6, -0.2, 0.2, 0.6, 1.0])
    oracle_values = np.array([oracle_point(s, psi, float(x), tol=1e-9)
                              for x in pts])
    rows = []
    prev = None
    for dx in (0.2, 0.1, 0.05):
        G = int(math.ceil(30.0 / dx)) + pts.size
        err = consistency_error(builder(s, dx, G), psi, pts,
                                oracle_values=oracle_values)
        order = math.nan if prev is None else \
            math.log(prev / err["err_inf"]) / math.log(2.0)
        rows.append((dx, err["err_inf"], err["err_l1"], order))
        prev = err["err_inf"]
    expected = 2.0 if config.weights_backend == "power" else 2.0 - 2.0 * s
    band = 0.4 if config.weights_backend == "power" else 0.5
    measured = rows[-1][3]
    return rows, {"expected_order": expected, "measured_order": measured,
                  "band": band, "passed": abs(measured - expected) <= band}


def _verify_weights(config: Config) -> dict:
    """Closed-form identities of the power-law weight family."""
    s = config.s
    k = np.arange(1, 41)
    telescoped = power_tail(s, k) - power_tail(s, k + 1)
    direct = power_kernel(s, k)
    # the difference of adjacent tails cancels ~k/(2s) digits, so the
    # identity holds only to ~1e-12 in float64; gate with headroom
    tail_err = float(np.max(np.abs(telescoped - direct) / direct))
    anchor_err = abs(power_kernel(0.5, 1) - 4.0 / (3.0 * math.pi))
    m = 1000.0
    asym = float(power_kernel(s, m) * m ** (1.0 + 2.0 * s) / kernel_constant(s))
    return {
        "tail_telescoping_rel_err": tail_err,
        "tail_telescoping_ok": tail_err <= 1e-11,
        "half_s_anchor_abs_err": anchor_err,
        "half_s_anchor_ok": anchor_err <= 1e-12,
        "large_index_ratio": asym,
        "large_index_ok": abs(asym - 1.0) <= 1e-2,
    }


def _verify_scheme(config: Config) -> dict:
    """Spot checks of the discrete structure on random data: comparison,
    sup bound, L1 contraction, discrete mass balance, fft agreement."""
    s = config.s
    law = _build_law(config)
    grid = Grid1D(x_left=-3.15, dx=0.1, m=64)
    builder = (build_power_weights if config.weights_backend == "power"
               else build_quadrature_weights)
    stencil = builder(s, grid.dx, grid.m - 1)
    dt = cfl_max_dt(stencil, law, config.theta)
    fL = fR = 0.0
    pfL, pfR = float(law.phi(fL)), float(law.phi(fR))
    rng = np.random.default_rng(12345)
    worst = {"comparison": 0.0, "sup_bound": 0.0, "l1_expansion": 0.0,
             "mass_residual": 0.0, "fft_gap": 0.0}
    for _ in range(20):
        V = rng.uniform(-1.0, 3.0, grid.m)
        W = V + rng.uniform(0.0, 1.0, grid.m)
        sup0 = max(np.max(np.abs(V)), abs(fL), abs(fR))
        l1_prev = float(np.sum(np.abs(V - W)))
        mass_res = 0.0
        for _ in range(10):
            uV, uW = law.phi(V), law.phi(W)
            outV = apply(stencil, uV, pfL, pfR)
            flux = boundary_flux(stencil, uV, pfL, pfR)
            mass_res = max(mass_res, abs(float(np.sum(outV)) - flux))
            V = V - dt * outV
            W = W - dt * apply(stencil, uW, pfL, pfR)
            worst["comparison"] = max(worst["comparison"], float(np.max(V - W)))
            l1_now = float(np.sum(np.abs(V - W)))
            worst["l1_expansion"] = max(worst["l1_expansion"], l1_now - l1_prev)
            l1_prev = l1_now
        worst["sup_bound"] = max(worst["sup_bound"],
                                 float(np.max(np.abs(V))) - sup0)
        worst["mass_residual"] = max(worst["mass_residual"], mass_res)
    V = rng.uniform(-1.0, 1.0, grid.m)
    gap = np.max(np.abs(apply(stencil, V, 0.0, 0.0, method="fft")
                        - apply(stencil, V, 0.0, 0.0, method="direct")))
    worst["fft_gap"] = float(gap)
    tol = 1e-11
    return {
        **worst,
        "comparison_ok": worst["comparison"] <= tol,
        "sup_bound_ok": worst["sup_bound"] <= tol,
        "l1_contraction_ok": worst["l1_expansion"] <= tol,
        "mass_balance_ok": worst["mass_residual"] <= 1e-10,
        "fft_ok": worst["fft_gap"] <= 1e-11,
    }


def cmd_verify(config: Config, args) -> int:
    t0 = time.perf_counter()
    run_dir = args.run_dir = _make_run_dir(config, args, {})
    rows, order_gate = _verify_consistency(config)
    _write_csv(os.path.join(run_dir, "consistency.csv"),
               ("dx", "err_inf", "err_l1", "order"), rows)
    weights = _verify_weights(config)
    scheme = _verify_scheme(config)
    gates = {
        "consistency_order": bool(order_gate["passed"]),
        "weight_identities": all(v for k, v in weights.items()
                                 if k.endswith("_ok")),
        "scheme_invariants": all(v for k, v in scheme.items()
                                 if k.endswith("_ok")),
    }
    _write_json(os.path.join(run_dir, "verify.json"),
                {"consistency": {"rows": rows, **order_gate},
                 "weights": weights, "scheme": scheme, "gates": gates,
                 "passed": all(gates.values())})
    parameters = {"backend": config.weights_backend, "s": config.s,
                  "measured_order": order_gate["measured_order"]}
    _write_manifest(run_dir, config, args, {}, parameters, gates, t0)
    for dx, err_inf, err_l1, order in rows:
        tag = "-" if math.isnan(order) else f"{order:.3f}"
        print(f"dx={dx:g} err_inf={err_inf:.3e} err_l1={err_l1:.3e} order={tag}")
    return _report_gates(gates)


def cmd_compare(config: Config, args) -> int:
    t0 = time.perf_counter()
    extras = {"classical_s": args.classical_s, "ode_s": args.ode_s}
    run_dir = args.run_dir = _make_run_dir(config, args, extras)
    front = classical_front_comparison(
        s=args.classical_s, L=config.L, P1=config.P1, P2=config.P2,
        radius=config.domain_radius, dx=config.dx, t=config.t_final,
        theta=config.theta)
    bracketing = limit_L_bracketing(config.s, radius=config.domain_radius,
                                    dx=config.dx, theta=config.theta)
    ode = small_s_ode_check(s=args.ode_s, L=config.L, dx=config.dx,
                            theta=config.theta)
    growth = support_growth(config.s, config.L, height=config.box_height,
                            R=config.box_radius, radius=config.domain_radius,
                            dx=config.dx, theta=config.theta)
    _write_csv(os.path.join(run_dir, "support_trace.csv"),
               ("t", "radius", "bound"),
               zip(growth.trace.times, growth.trace.support_radius_u,
                   growth.trace.theoretical_bound))
    gates = {
        "classical_front": bool(front.passed),
        "limit_L_bracketing": bool(bracketing.passed),
        "small_s_ode": bool(ode.passed),
        "support_growth": bool(growth.passed),
    }
    _write_json(os.path.join(run_dir, "compare.json"),
                {"classical_front": front, "limit_L_bracketing": bracketing,
                 "small_s_ode": ode, "support_growth": growth,
                 "gates": gates, "passed": all(gates.values())})
    parameters = {"front_gap": front.gap,
                  "bracketing_worst": bracketing.worst_violation,
                  "ode_rel_error": ode.rel_error,
                  "xi0_companion": growth.xi0_companion}
    _write_manifest(run_dir, config, args, extras, parameters, gates, t0)
    return _report_gates(gates)


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", metavar="PATH",
                    help="INI configuration file")
    sp.add_argument("--set", dest="assignments", action="append", default=[],
                    metavar="KEY=VALUE",
                    help="override a config key (section.key=value or bare "
                         "key=value; JSON scalar syntax; repeatable)")
    sp.add_argument("--out", metavar="DIR",
                    help=f"output root (else [output] root, else "
                         f"${ENV_OUTPUT_ROOT}, else ./runs)")
    for flag, target in _SUGAR:
        sp.add_argument(flag, dest=target.replace(".", "__"), default=None,
                        metavar="V", help=f"shorthand for --set {target}=V")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracstefan",
        description="Monotone explicit finite-difference solver for the "
                    "fractional Stefan problem in 1D.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True,
                                metavar="subcommand")

    sp = sub.add_parser("simulate",
                        help="march the enthalpy and write x,h,u snapshots",
                        description="Run the configured problem and write one "
                                    "x,h,u CSV per snapshot time.")
    _add_common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("profile",
                        help="extract the rescaled profile and diagnostics",
                        description="Run the step-datum problem, rescale the "
                                    "final snapshot by t^(1/(2s)), and report "
                                    "the free boundary, exponent fits, mass "
                                    "transfer, and structure checks.")
    _add_common(sp)
    sp.add_argument("--threshold", type=float, default=None, metavar="D",
                    help="water-detection level for the front locator")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("sweep",
                        help="free-boundary location across P2 or across s",
                        description="Sweep the free-boundary point xi0 over "
                                    "P2 (at the configured s) or over s (at "
                                    "the configured P2); t_final sets the "
                                    "extraction time.")
    _add_common(sp)
    sp.add_argument("--axis", choices=("p2", "s"), required=True,
                    help="sweep variable")
    sp.add_argument("--values", metavar="JSON", default=None,
                    help="JSON list of sweep values (defaults: p2 "
                         f"{list(_SWEEP_DEFAULTS['p2'])}, s "
                         f"{list(_SWEEP_DEFAULTS['s'])})")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify",
                        help="operator consistency and scheme invariants",
                        description="Check the configured weight backend "
                                    "against the quadrature oracle on a fixed "
                                    "dx ladder (0.2/0.1/0.05), the closed-form "
                                    "weight identities, and the discrete "
                                    "comparison/contraction/mass properties "
                                    "on random data.")
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("compare",
                        help="limiting regimes and propagation bounds",
                        description="Cross-check limiting regimes: water front "
                                    "at s near 1 against the classical Stefan "
                                    "run, Dirichlet/Cauchy bracketing of the "
                                    "L-parametrized runs, the small-s ODE "
                                    "relaxation, and box-datum support growth "
                                    "against its similarity bound.")
    _add_common(sp)
    sp.add_argument("--classical-s", type=float, default=0.99, metavar="S",
                    help="s used for the near-classical front run")
    sp.add_argument("--ode-s", type=float, default=0.05, metavar="S",
                    help="s used for the small-s relaxation run")
    sp.set_defaults(func=cmd_compare)
    return parser


def _load_config(args) -> Config:
    overrides = {}
    for item in args.assignments:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    for _, target in _SUGAR:
        value = getattr(args, target.replace(".", "__"))
        if value is not None:
            overrides[target] = value
    return parse_config(source=args.config, overrides=overrides)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code is None else int(exc.code)
    args.run_dir = None
    try:
        config = _load_config(args)
        return args.func(config, args)
    except (CFLError, NumericsError, OracleError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        if args.run_dir is not None:
            _write_json(os.path.join(args.run_dir, "error.json"), record)
        return 3
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
