"""``sssim`` command line: run analyses from a config file and write CSV curves.

Exit codes: 0 success, 2 configuration, 3 physics precondition, 4 numerical
non-convergence, 5 I/O.
"""

import argparse
import datetime
import logging
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .circuits import (
    LNAConfig,
    PAConfig,
    Polarity,
    lna_gain_closed_form,
    loadline_qpoint,
    pa_analysis,
    pa_power_frequency_tradeoff,
    watt_to_dbm,
)
from .constants import PROVENANCE, builtin_material, material_names
from .config import load_config, serialize_config
from .errors import SSSimError
from .junction import critical_current, iv_sweep, normal_resistance
from .noise import (
    NoiseParams,
    dos_sc,
    noise_report,
    transmission_approx,
    transmission_exact,
)
from .numerics import Tolerance

log = logging.getLogger("sssim")

EXIT_IO = 5
ABSTRACT_PA_POWER_DBM = -10.0
ABSTRACT_PA_FREQUENCY = 350e9


def _fmt(x):
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def write_csv(path, header, rows, metadata):
    """Write ``rows`` under ``#``-prefixed metadata lines and a header row."""
    width = len(header)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in metadata.items():
            fh.write(f"# {key}: {value}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            if len(row) != width:
                raise ValueError(f"row width {len(row)} does not match header width {width}")
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _pmap(fn, items, jobs):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def list_materials(custom=()):
    """Text table of the built-in registry followed by any custom materials."""
    rows = [(builtin_material(n), PROVENANCE.get(n, {})) for n in material_names()]
    rows += [(params, {"source": "config file"}) for _, params in custom]
    cols = ("name", "T_C_K", "Delta_SC_J", "rho_F_J-1m-3", "n_star_m-3", "J_C_max_A/m^2",
            "tau_n_s", "eps_F_J")
    lines = ["  ".join(f"{c:>14}" for c in cols)]
    for p, _ in rows:
        vals = (p.name, p.T_C, p.Delta_SC, p.rho_F, p.n_star, p.J_C_max, p.tau_n, p.eps_F)
        lines.append("  ".join(f"{v:>14}" if isinstance(v, str) else f"{v:>14.6g}" for v in vals))
    for p, prov in rows:
        for key, note in prov.items():
            lines.append(f"  {p.name}.{key}: {note}")
    return "\n".join(lines)


# ------------------------------------------------------------------- analyses


def _run_iv(cfg, jobs):
    device = cfg.device()
    s = cfg.settings

    def one(v):
        return iv_sweep(device, v, s["I_max"], s["n_points"], cfg.E0)

    curves = _pmap(one, s["V_GS"], jobs)
    files, summary = [], []
    for k, curve in enumerate(curves):
        suffix = "" if len(curves) == 1 else f"_{k}"
        rows = [(i, v, b.value) for i, v, b in zip(curve.currents, curve.voltages, curve.branches)]
        files.append((f"iv{suffix}", ("I_A", "V_V", "branch"), rows, {"V_GS_V": _fmt(curve.V_GS)}))
        summary.append(f"V_GS = {curve.V_GS:g} V: I_C = {curve.I_C:.6g} A, "
                       f"R_n = {curve.R_n:.6g} ohm, V_gap = {curve.V_gap:.6g} V, "
                       f"I_C*R_n = {curve.I_C * curve.R_n:.6g} V")
    return files, summary


def _run_lna(cfg, jobs):
    device = cfg.device()
    s = cfg.settings
    lna = LNAConfig(device, s["I_B"], s["V_Ai"], s["V_Bi"], cfg.E0)
    result = lna_gain_closed_form(lna)
    sweep = np.linspace(s["V_Bi"], s["V_Ai"], s["n_points"])

    def one(v):
        v = float(v)
        cc = critical_current(device, v, cfg.E0)
        q = loadline_qpoint(device, v, s["I_B"], cfg.E0)
        return (v, cc.value, normal_resistance(cc.value, device.sc.tau_n), q.voltage,
                q.branch.value)

    rows = _pmap(one, sweep, jobs)
    d = result.details
    summary = [
        f"V_A = {d['V_A']:.10g} V, V_B = {d['V_B']:.10g} V",
        f"I_C1 = {d['I_C1']:.6g} A, I_C2 = {d['I_C2']:.6g} A, "
        f"R_n1 = {d['R_n1']:.6g} ohm, R_n2 = {d['R_n2']:.6g} ohm",
        f"gain_exact = {result.gain_exact:.10g}",
        f"gain_closed_form = {result.gain_closed_form:.10g}",
        f"Gamma_Rn = {d['Gamma_Rn']:.6g}, zeta_avg = {d['zeta_avg']:.6g} m, "
        f"2a/zeta_avg = {d['two_a_over_zeta_avg']:.4g}",
        "diagnostics:",
    ]
    for diag in result.diagnostics:
        summary.append(f"  {diag.name}: exact = {diag.exact:.6g}, approx = {diag.approx:.6g}, "
                       f"relative error = {diag.relative_error:.3g}  ({diag.description})")
    files = [("lna", ("V_in_V", "I_C_A", "R_n_ohm", "V_out_V", "branch"), rows, {})]
    return files, summary


def _run_pa(cfg, jobs):
    s = cfg.settings
    pa = PAConfig.uniform(cfg.device(), s["Z_load"], s["I_bias"], s["gate_high"],
                          s["gate_low"], cfg.E0)
    result = pa_analysis(pa, s["R_on"])
    states = result.details["states"]
    rows = [(p.value, *states[p.value]) for p in Polarity]
    eff = result.efficiency_note
    summary = [
        f"C_jn = {result.details['C_jn']:.6g} F ({result.details['C_jn'] * 1e15:.4f} fF)",
        f"f_3dB = {result.f_3db:.6g} Hz ({result.f_3db / 1e9:.4f} GHz)",
        f"P_out (steered) = {result.P_out:.6g} W ({watt_to_dbm(result.P_out):.3f} dBm)",
        f"MOSFET bridge (R_on = {s['R_on']:g} ohm): conduction loss = {eff.P_loss_mosfet:.6g} W, "
        f"efficiency = {eff.efficiency_mosfet:.6g}",
        f"junction bridge: conduction loss = {eff.P_loss_junction:.6g} W, "
        f"efficiency = {eff.efficiency_junction:.6g}",
    ]
    return [("pa", ("polarity", "V_load_V", "I_load_A", "P_load_W"), rows, {})], summary


def _run_noise(cfg, jobs):
    s = cfg.settings
    p = NoiseParams(cfg.material, cfg.barrier, g=s["g"], window=s["window"], f_min=s["f_min"],
                    T=s["T"], directional_factor=s["directional_factor"],
                    literal_exponent=s["literal_exponent"])
    tol = Tolerance(s["abs_tol"], s["rel_tol"], s["max_depth"])
    report = noise_report(p, tol)
    energies = np.linspace(p.lower, p.upper, s["n_samples"])

    def one(e):
        e = float(e)
        approx = transmission_approx(e, p)
        t = transmission_exact(e, p)
        dos = dos_sc(e, p)
        return (e, dos, t, approx.reference, approx.literal, dos * t, dos * approx.literal)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows = _pmap(one, energies, jobs)
    ad = report.antiderivative
    summary = [
        f"n_star (quadrature, exact transmission) = {report.n_star_quadrature:.10g} "
        f"+/- {report.quadrature_error_estimate:.3g}",
        f"n_star (closed form) = {report.n_star_closed_form:.10g}",
        f"relative error closed form vs quadrature = {report.relative_error:.6g}",
        f"n1_star capacity: closed form = {report.n1_star_capacity:.6g}, "
        f"quadrature = {report.n1_star_capacity_quadrature:.6g}",
        f"directional 1/3 factor applied: {report.directional_fraction_applied}",
        f"quadrature tolerances: abs {report.quadrature_abs_tol:g}, rel {report.quadrature_rel_tol:g}",
        "steps:",
    ]
    summary += [f"  {k} = {v:.10g}" for k, v in report.steps.items()]
    summary += [
        f"antiderivative check: max relative error = {ad.max_relative_error:.6g} "
        f"(tolerance {ad.rel_tol:g}) -> {'pass' if ad.passed else 'FAIL'}",
        f"  control (standard antiderivative): max relative error = "
        f"{ad.control_max_relative_error:.3g}",
        f"  log-term coefficient: as written {ad.literal_log_coefficient:.6g}, "
        f"standard {ad.standard_log_coefficient:.6g}",
    ]
    header = ("eps_J", "dos", "T_exact", "T_reference", "T_literal", "integrand_exact",
              "integrand_literal")
    return [("noise", header, rows, {})], summary


def _run_tradeoff(cfg, jobs):
    s = cfg.settings
    anchor_P = s["anchor_current"] ** 2 * s["Z_load"]
    if s["power_convention"] == "rms":
        anchor_P /= 2
    anchor_dbm = watt_to_dbm(anchor_P)
    grid = np.linspace(s["P_min"], s["P_max"], s["n_points"]).tolist()
    powers = sorted(set(grid) | {ABSTRACT_PA_POWER_DBM, anchor_dbm})
    points = pa_power_frequency_tradeoff(powers, s["Z_load"], cfg.material, cfg.barrier,
                                         s["power_convention"])
    by_p = {pt.P_dbm: pt for pt in points}
    anchor = by_p[anchor_dbm]
    low = by_p[ABSTRACT_PA_POWER_DBM]
    rows = [tuple(pt) for pt in points]
    summary = [
        f"power convention: {s['power_convention']}",
        f"anchor: I = {anchor.current:.6g} A into {s['Z_load']:g} ohm -> {anchor.P_dbm:.4f} dBm, "
        f"area = {anchor.area:.6g} m^2, C_jn = {anchor.C_jn:.6g} F, f_3dB = {anchor.f_3db:.6g} Hz",
        f"{ABSTRACT_PA_POWER_DBM:g} dBm: I = {low.current:.6g} A, area = {low.area:.6g} m^2, "
        f"f_3dB = {low.f_3db:.6g} Hz",
        f"ratio of computed f_3dB at {ABSTRACT_PA_POWER_DBM:g} dBm to the 350 GHz claim = "
        f"{low.f_3db / ABSTRACT_PA_FREQUENCY:.6g}",
    ]
    header = ("P_dBm", "P_W", "I_A", "area_m2", "C_jn_F", "f_3dB_Hz")
    return [("tradeoff", header, rows, {})], summary


_ANALYSES = {"iv": _run_iv, "lna": _run_lna, "pa": _run_pa, "noise": _run_noise,
             "tradeoff": _run_tradeoff}


def run(cfg, out_dir=None, jobs=1, stream=None):
    """Execute one analysis; returns the list of written paths."""
    out_dir = out_dir or cfg.output_dir or os.environ.get("SSSIM_OUT") or "."
    files, summary = _ANALYSES[cfg.analysis](cfg, max(1, jobs))
    os.makedirs(out_dir, exist_ok=True)
    meta = {
        "tool": f"sssim {__version__}",
        "analysis": cfg.analysis,
        "config_sha256": cfg.digest(),
        "generated": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
    }
    written = []
    for name, header, rows, extra in files:
        path = os.path.join(out_dir, f"{cfg.prefix}_{name}.csv")
        write_csv(path, header, rows, {**meta, **extra})
        written.append(path)
        log.info("wrote %s (%d rows)", path, len(rows))
    text = "\n".join([
        f"sssim {__version__} -- {cfg.analysis} analysis",
        "", "results:", *("  " + line for line in summary),
        "", "resolved config:", serialize_config(cfg),
        "outputs:", *("  " + p for p in written),
    ]) + "\n"
    summary_path = os.path.join(out_dir, f"{cfg.prefix}_{cfg.analysis}_summary.txt")
    with open(summary_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    written.append(summary_path)
    if stream is not None:
        stream.write(text)
    return written


def _error_line(exc, code):
    message = " ".join(str(exc).split())
    return f"sssim: error code={code} type={type(exc).__name__} message={message}"


def build_parser():
    parser = argparse.ArgumentParser(prog="sssim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sssim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run the analysis described by a config file")
    p_run.add_argument("config")
    p_run.add_argument("--out", help="output directory (default: config, then $SSSIM_OUT, then .)")
    p_run.add_argument("--jobs", type=int, default=1)
    p_run.add_argument("--verbose", action="store_true")
    p_check = sub.add_parser("check", help="parse and validate a config file only")
    p_check.add_argument("config")
    p_mat = sub.add_parser("materials", help="list the material registry")
    p_mat.add_argument("--config", help="also list materials registered in this config")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "materials":
            custom = load_config(args.config).custom_materials if args.config else ()
            print(list_materials(custom))
        elif args.command == "check":
            cfg = load_config(args.config)
            print(f"ok: {cfg.analysis} analysis")
            print(serialize_config(cfg), end="")
        else:
            cfg = load_config(args.config)
            run(cfg, out_dir=args.out, jobs=args.jobs, stream=sys.stdout)
    except SSSimError as exc:
        print(_error_line(exc, exc.exit_code), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(_error_line(exc, EXIT_IO), file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
