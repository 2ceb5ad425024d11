"""Command-line interface: every analysis as a subcommand with CSV/JSON output.

Output files are deterministic: a metadata header records the full parameter
set and tool version (no timestamps), floats are printed with 17 significant
digits, and identical inputs produce byte-identical files.  Exit codes:
0 success, 2 argument errors, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import WgqedError
from .fitting import loglog_fit
from .model import ChainConfig, fock_state
from .spectra import (
    PolaritonConfig,
    infinite_chain_shift,
    polariton_bands,
    single_excitation_modes,
)
from .multiexc import (
    best_constituents,
    decay_additivity,
    fermionic_ansatz,
    fidelity_map,
    infidelity_scaling,
    momentum_pair_label,
    multi_excitation_modes,
    symmetrized_coefficient_grid,
)
from .dynamics import (
    conditional_fidelity,
    evolve,
    fock_blocks,
    imperfection_sweep,
    pair_population_grid,
    pure_state_blocks,
)
from .preparation import CavityConfig, phase_adjust_and_retune, prepare_fock
from .correlations import (
    conditional_weight_scaling,
    default_tau_grid,
    predicted_t2_maxima,
    t2_maxima,
    t2_surface,
)

FLOAT_FMT = "%.17g"


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return FLOAT_FMT % value
    return str(value)


def write_table(path, columns, rows, metadata, fmt="csv"):
    """Write rows either as commented-header CSV or as an equivalent JSON file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {"tool": "wgqed", "version": __version__, **metadata}
    if fmt == "json":
        payload = {
            "metadata": meta,
            "columns": list(columns),
            "rows": [[float(v) if isinstance(v, (int, float, np.floating)) else v
                      for v in row] for row in rows],
        }
        path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
        return
    lines = [f"# {k} = {_fmt(v)}" for k, v in sorted(meta.items())]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_report(path, payload, metadata):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"metadata": {"tool": "wgqed", "version": __version__, **metadata}}
    doc.update(payload)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def _chain_config(args) -> ChainConfig:
    return ChainConfig(
        n_qubits=args.n_qubits,
        k1d_d=args.k1d_d_over_pi * np.pi,
        gamma_prime=getattr(args, "gamma_prime", 0.0),
        gamma_deph=getattr(args, "gamma_deph", 0.0),
    )


def _meta_from(args, **extra):
    meta = {k: v for k, v in vars(args).items()
            if k not in ("func", "output", "out_dir") and v is not None}
    meta.update(extra)
    return meta


def cmd_spectrum(args):
    config = _chain_config(args)
    modes = single_excitation_modes(config, pad_factor=args.pad_factor)
    rows = [(m.xi, m.shift, m.decay, m.k_dom / np.pi) for m in modes]
    write_table(args.output, ["xi", "J", "Gamma", "k_dom_over_pi"], rows,
                _meta_from(args), args.format)
    return 0


def cmd_dispersion(args):
    config = ChainConfig(2, args.k1d_d_over_pi * np.pi)
    rows = []
    for k_d in np.linspace(0.0, np.pi, args.n_k):
        if abs(k_d - config.k1d_d) < args.pole_window:
            continue
        rows.append((k_d / np.pi, infinite_chain_shift(k_d, config)))
    write_table(args.output, ["k_over_pi", "J_k"], rows, _meta_from(args),
                args.format)
    return 0


def cmd_polariton(args):
    pconfig = PolaritonConfig(
        g=args.g, omega_eg=args.k1d_d_over_pi * np.pi,
        omega_f=args.omega_f, quantization_length=args.length,
    )
    points = polariton_bands(np.linspace(-np.pi, np.pi, args.n_k), pconfig)
    rows = [(p.k_d / np.pi, p.omega_lower, p.omega_upper,
             p.qubit_weight_lower, p.qubit_weight_upper) for p in points]
    write_table(args.output,
                ["k_over_pi", "omega_lower", "omega_upper",
                 "qubit_weight_lower", "qubit_weight_upper"],
                rows, _meta_from(args, gamma_1d_implied=pconfig.implied_gamma_1d),
                args.format)
    return 0


def cmd_two_exc(args):
    config = _chain_config(args)
    entries = fidelity_map(config)
    if args.n_modes:
        entries = entries[: args.n_modes]
    rows = []
    for mode, label, constituents, fid in entries:
        k1, k2 = (label if label is not None else (np.nan, np.nan))
        rows.append((mode.xi, mode.shift, mode.decay, k1 / np.pi, k2 / np.pi,
                     constituents[0], constituents[1], fid))
    write_table(args.output,
                ["xi", "J2", "Gamma2", "k1_over_pi", "k2_over_pi",
                 "constituent_a", "constituent_b", "F_ansatz"],
                rows, _meta_from(args), args.format)
    if args.grid_output:
        mode = entries[0][0]
        grid = np.abs(symmetrized_coefficient_grid(mode.vector,
                                                   config.n_qubits)) ** 2
        rows = [tuple(row) for row in grid]
        write_table(args.grid_output,
                    [f"site_{j+1}" for j in range(config.n_qubits)], rows,
                    _meta_from(args, content="pair_probability_xi1"), args.format)
    return 0


def cmd_ansatz(args):
    config = _chain_config(args)
    singles = single_excitation_modes(config)
    mode = multi_excitation_modes(config, 2)[args.xi - 1]
    constituents, fid = best_constituents(mode.vector, singles, 2)
    try:
        label = momentum_pair_label(mode.vector, config)
        label = [label[0] / np.pi, label[1] / np.pi]
    except WgqedError:
        label = None
    write_report(args.output, {
        "xi": args.xi,
        "constituents": list(constituents),
        "constituent_k_dom_over_pi": [singles[i - 1].k_dom / np.pi
                                      for i in constituents],
        "fidelity": fid,
        "momentum_label_over_pi": label,
        "decay": mode.decay,
        "constituent_decay_sum": sum(singles[i - 1].decay for i in constituents),
    }, _meta_from(args))
    return 0


def cmd_scaling(args):
    config = ChainConfig(max(args.n_list), args.k1d_d_over_pi * np.pi)
    n_list = args.n_list
    rows, slope_info = [], {}
    if args.quantity == "synthetic":
        values = [7.0 / n**3 for n in n_list]
        rows = list(zip(n_list, values))
        slope, intercept, r2 = loglog_fit(n_list, values)
        slope_info = {"slope": slope, "r_squared": r2}
    elif args.quantity == "gamma1":
        for xi in args.xi_list:
            values = []
            for n in n_list:
                modes = single_excitation_modes(
                    ChainConfig(n, config.k1d_d))
                values.append(modes[xi - 1].decay)
            slope, _, r2 = loglog_fit(n_list, values)
            slope_info[f"slope_xi{xi}"] = slope
            rows.extend((n, xi, v) for n, v in zip(n_list, values))
    elif args.quantity == "gamma2":
        values = [multi_excitation_modes(ChainConfig(n, config.k1d_d), 2)[0].decay
                  for n in n_list]
        slope, _, _ = loglog_fit(n_list, values)
        slope_info = {"slope": slope}
        rows = [(n, 1, v) for n, v in zip(n_list, values)]
    elif args.quantity == "infidelity":
        slope, infs = infidelity_scaling(config, n_list, xi=args.xi_list[0])
        slope_info = {"slope": slope, "suppression_exponent": -slope}
        rows = [(n, args.xi_list[0], v) for n, v in zip(n_list, infs)]
    elif args.quantity in ("additivity-r2", "additivity-r3"):
        m_ex = 2 if args.quantity.endswith("r2") else 3
        slopes, curves, labels = decay_additivity(config, n_list, m_ex)
        for lab in labels:
            slope_info["slope_" + "_".join(map(str, lab))] = slopes[lab]
            rows.extend((n, "+".join(map(str, lab)), v)
                        for n, v in zip(n_list, curves[lab]))
    elif args.quantity == "epsilon":
        slope, eps = conditional_weight_scaling(config, n_list)
        slope_info = {"slope": slope}
        rows = [(n, 1, v) for n, v in zip(n_list, eps)]
    columns = {"synthetic": ["N", "value"]}.get(args.quantity,
                                                ["N", "series", "value"])
    write_table(args.output, columns, rows, _meta_from(args, **slope_info),
                args.format)
    return 0


def cmd_evolve(args):
    config = _chain_config(args)
    initial = fock_blocks(config, args.k_over_pi * np.pi, args.m_ex)
    target = multi_excitation_modes(config, args.m_ex)[0].vector
    t_grid = np.linspace(0.0, args.t_max, args.n_t)
    record = evolve(initial, config, t_grid, target_vector=target)
    rows = []
    for i, t in enumerate(record.times):
        row = [t] + [record.populations[i, m] for m in range(args.m_ex + 1)]
        row.append(record.target_fidelity[i])
        rows.append(tuple(row))
    columns = (["t"] + [f"p{m}" for m in range(args.m_ex + 1)] + ["F_target"])
    write_table(args.output, columns, rows, _meta_from(args), args.format)
    if args.snapshot_times and args.m_ex == 2:
        for t_snap in args.snapshot_times:
            i = int(np.argmin(np.abs(record.times - t_snap)))
            grid = pair_population_grid(record.states[i])
            out = Path(args.output).with_suffix("") .as_posix() + \
                f"_snapshot_t{t_snap:g}.csv"
            write_table(out, [f"site_{j+1}" for j in range(config.n_qubits)],
                        [tuple(r) for r in grid],
                        _meta_from(args, snapshot_time=record.times[i]),
                        args.format)
    return 0


def cmd_prepare(args):
    cconfig = CavityConfig(args.n_qubits, gamma_prime=args.gamma_prime,
                           gamma_deph=args.gamma_deph, eta=args.eta)
    prep = prepare_fock(cconfig, args.m_ex)
    state, chain_cfg = phase_adjust_and_retune(
        prep.chain_state, args.target_k_over_pi * np.pi,
        args.k1d_d_over_pi * np.pi,
        gamma_prime=args.gamma_prime, gamma_deph=args.gamma_deph)
    ideal = fock_state(chain_cfg, args.target_k_over_pi * np.pi, args.m_ex)
    p_tra = state.sector_population(args.m_ex)
    fid_k = conditional_fidelity(state, ideal, args.m_ex)
    write_report(args.output, {
        "p_transfer": prep.transfer_probability,
        "fidelity_mirror": prep.fidelity_mirror,
        "fidelity_k0": fid_k,
        "p_transfer_after_adjust": p_tra,
        "wait_times": list(prep.wait_times),
        "config": {
            "n_qubits": args.n_qubits, "m_ex": args.m_ex,
            "gamma_prime": args.gamma_prime, "gamma_deph": args.gamma_deph,
            "eta": args.eta,
            "k1d_d_over_pi": args.k1d_d_over_pi,
            "target_k_over_pi": args.target_k_over_pi,
        },
    }, _meta_from(args))
    return 0


def _prepared_initial_factory(args, config):
    def factory(gp, gd):
        cconfig = CavityConfig(config.n_qubits, gamma_prime=gp, gamma_deph=gd,
                               eta=args.eta)
        prep = prepare_fock(cconfig, 2)
        state, _ = phase_adjust_and_retune(prep.chain_state, 0.0, config.k1d_d,
                                           gamma_prime=gp, gamma_deph=gd)
        return state
    return factory


def cmd_sweep_imperfections(args):
    config = _chain_config(args)
    factory = _prepared_initial_factory(args, config) if args.use_preparation else None
    grid = imperfection_sweep(config, args.gamma_prime_list,
                              args.gamma_deph_list, initial_factory=factory,
                              p_floor=args.p_floor)
    rows = []
    for i, gp in enumerate(args.gamma_prime_list):
        for j, gd in enumerate(args.gamma_deph_list):
            rows.append((gp, gd, grid[i, j]))
    write_table(args.output, ["gamma_prime", "gamma_deph", "max_fidelity"],
                rows, _meta_from(args), args.format)
    return 0


def cmd_g2(args):
    config = _chain_config(args)
    if args.initial == "fock-k0":
        initial = fock_blocks(config, 0.0, 2)
    else:
        vec = multi_excitation_modes(config, 2)[0].vector
        initial = pure_state_blocks(config, vec, 2)
    tau = default_tau_grid(config, periods=args.tau_periods,
                           points_per_period=args.points_per_period)
    t_grid = np.array(sorted({0.0, *map(float, args.t_list)}))
    record = t2_surface(initial, config, t_grid, tau, side=args.side)
    rows = []
    for i, t in enumerate(t_grid):
        for j, tv in enumerate(tau):
            rows.append((t, tv, record.surface[i, j]))
    write_table(args.output, ["t", "tau", "T2"], rows, _meta_from(args),
                args.format)
    peaks = t2_maxima(record)
    predicted = predicted_t2_maxima(config)
    write_report(str(Path(args.output).with_suffix("")) + "_maxima.json", {
        "detected_tau_maxima": [float(x) for x in peaks],
        "predicted_tau_maxima_odd_n": [float(x) for x in predicted],
        "tau_step": float(tau[1] - tau[0]),
        "t_row": float(t_grid[-1]),
    }, _meta_from(args))
    return 0


def cmd_figures(args):
    out = Path(args.out_dir)
    which = args.which
    made = []

    def spectrum_files():
        ns = argparse.Namespace(n_qubits=30, k1d_d_over_pi=0.2, pad_factor=8,
                                output=out / "fig1_modes.csv", format="csv")
        cmd_spectrum(ns)
        ns2 = argparse.Namespace(k1d_d_over_pi=0.2, n_k=241, pole_window=0.12,
                                 output=out / "fig1_dispersion.csv", format="csv")
        cmd_dispersion(ns2)
        ns3 = argparse.Namespace(quantity="gamma1", n_list=[10, 20, 30, 40, 60],
                                 xi_list=[1, 2, 3, 4], k1d_d_over_pi=0.2,
                                 output=out / "fig1_scaling.csv", format="csv")
        cmd_scaling(ns3)
        made.extend(["fig1_modes.csv", "fig1_dispersion.csv", "fig1_scaling.csv"])

    def two_exc_files():
        for tag, k in (("02", 0.2), ("05", 0.5)):
            ns = argparse.Namespace(
                n_qubits=20, k1d_d_over_pi=k, n_modes=None,
                output=out / f"fig2_modes_k{tag}.csv",
                grid_output=out / f"fig2_grid_k{tag}.csv", format="csv",
                gamma_prime=0.0, gamma_deph=0.0)
            cmd_two_exc(ns)
            made.extend([f"fig2_modes_k{tag}.csv", f"fig2_grid_k{tag}.csv"])
        ns = argparse.Namespace(n_qubits=50, k1d_d_over_pi=0.2, n_modes=None,
                                output=out / "fig2_fidelity_map.csv",
                                grid_output=None, format="csv",
                                gamma_prime=0.0, gamma_deph=0.0)
        cmd_two_exc(ns)
        made.append("fig2_fidelity_map.csv")

    def evolution_files():
        ns = argparse.Namespace(n_qubits=10, k1d_d_over_pi=0.7, gamma_prime=0.0,
                                gamma_deph=0.0, m_ex=2, k_over_pi=0.0,
                                t_max=20.0, n_t=81, snapshot_times=[0.0, 5.0, 20.0],
                                output=out / "fig3_trajectory.csv", format="csv")
        cmd_evolve(ns)
        made.extend(["fig3_trajectory.csv"] +
                    [f"fig3_trajectory_snapshot_t{t:g}.csv" for t in (0, 5, 20)])

    def imperfection_files():
        for tag, gd in (("i", 0.0), ("ii", 0.01), ("iii", 0.1)):
            cconfig = CavityConfig(10, gamma_deph=gd)
            prep = prepare_fock(cconfig, 2)
            state, chain_cfg = phase_adjust_and_retune(prep.chain_state, 0.0,
                                                       0.7 * np.pi, gamma_deph=gd)
            target = multi_excitation_modes(
                ChainConfig(10, 0.7 * np.pi), 2)[0].vector
            t_grid = np.linspace(0.0, 60.0, 121)
            rec = evolve(state, chain_cfg, t_grid, target_vector=target,
                         store_states=False)
            ideal = fock_state(chain_cfg, 0.0, 2)
            f_k0 = conditional_fidelity(state, ideal, 2)
            rows = [(t, rec.population(2)[i], rec.target_fidelity[i])
                    for i, t in enumerate(t_grid)]
            write_table(out / f"fig5a_{tag}.csv", ["t", "p2", "F_xi1"], rows,
                        {"gamma_deph": gd, "p2_initial": rec.population(2)[0],
                         "fidelity_k0_initial": f_k0}, "csv")
            made.append(f"fig5a_{tag}.csv")
        rates = [1e-3, 1e-2, 3e-2, 1e-1]
        ns = argparse.Namespace(n_qubits=10, k1d_d_over_pi=0.7,
                                gamma_prime=0.0, gamma_deph=0.0,
                                gamma_prime_list=rates, gamma_deph_list=rates,
                                p_floor=0.2, use_preparation=True, eta=1.0,
                                output=out / "fig5b_grid.csv", format="csv")
        cmd_sweep_imperfections(ns)
        made.append("fig5b_grid.csv")

    def g2_files():
        ns = argparse.Namespace(n_qubits=10, k1d_d_over_pi=0.7,
                                gamma_prime=0.0, gamma_deph=0.0,
                                initial="fock-k0", t_list=[0.0, 5.0, 10.0, 20.0, 30.0],
                                tau_periods=4.0, points_per_period=50, side="L",
                                output=out / "fig6_t2.csv", format="csv")
        cmd_g2(ns)
        ns2 = argparse.Namespace(n_qubits=10, k1d_d_over_pi=0.7,
                                 gamma_prime=0.0, gamma_deph=0.0,
                                 initial="xi1", t_list=[30.0],
                                 tau_periods=4.0, points_per_period=50, side="L",
                                 output=out / "fig6_t2_eigenstate.csv", format="csv")
        cmd_g2(ns2)
        made.extend(["fig6_t2.csv", "fig6_t2_maxima.json",
                     "fig6_t2_eigenstate.csv"])

    def infidelity_files():
        n_list = [16, 24, 32, 40, 48, 56]
        for tag, k, xi in (("02pi_xi1", 0.2, 1), ("047pi_xi1", 0.47, 1),
                           ("05pi_xi1", 0.5, 1), ("05pi_xi2", 0.5, 2),
                           ("05pi_xi3", 0.5, 3)):
            ns = argparse.Namespace(quantity="infidelity", n_list=n_list,
                                    xi_list=[xi], k1d_d_over_pi=k,
                                    output=out / f"figA1_{tag}.csv", format="csv")
            cmd_scaling(ns)
            made.append(f"figA1_{tag}.csv")

    def additivity_files():
        ns = argparse.Namespace(quantity="additivity-r2",
                                n_list=[16, 20, 24, 28, 32, 36, 40, 44, 48],
                                xi_list=[1], k1d_d_over_pi=0.2,
                                output=out / "figA2_r2.csv", format="csv")
        cmd_scaling(ns)
        ns = argparse.Namespace(quantity="additivity-r3",
                                n_list=[16, 24, 32, 40, 48],
                                xi_list=[1], k1d_d_over_pi=0.2,
                                output=out / "figA2_r3.csv", format="csv")
        cmd_scaling(ns)
        made.extend(["figA2_r2.csv", "figA2_r3.csv"])

    def transfer_files():
        rows = []
        for gp in (0.0, 0.01, 0.1):
            for gd in (0.0, 0.01, 0.1):
                for m_ex in (1, 2):
                    prep = prepare_fock(CavityConfig(10, gamma_prime=gp,
                                                     gamma_deph=gd), m_ex)
                    rows.append((m_ex, gp, gd, prep.transfer_probability,
                                 prep.fidelity_mirror))
        write_table(out / "figB1_transfer.csv",
                    ["m_ex", "gamma_prime", "gamma_deph", "p_transfer",
                     "fidelity"], rows, {"n_qubits": 10}, "csv")
        made.append("figB1_transfer.csv")

    tasks = {
        "fig1": spectrum_files, "fig2": two_exc_files, "fig3": evolution_files,
        "fig5": imperfection_files, "fig6": g2_files, "figA1": infidelity_files,
        "figA2": additivity_files, "figB1": transfer_files,
    }
    targets = list(tasks) if which == "all" else [which]
    for name in targets:
        tasks[name]()
    write_report(out / "figures_manifest.json",
                 {"figures": targets, "files": made}, {"which": which})
    return 0


def _add_common(p, n_default=10, k_default=0.7):
    p.add_argument("--n-qubits", type=int, default=n_default)
    p.add_argument("--k1d-d-over-pi", type=float, default=k_default)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", required=True)


def _float_list(text):
    return [float(x) for x in text.split(",") if x]


def _int_list(text):
    return [int(x) for x in text.split(",") if x]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wgqed",
        description="Collective decay of qubit chains coupled to a 1D waveguide",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="single-excitation eigenmode table")
    _add_common(p, 30, 0.2)
    p.add_argument("--pad-factor", type=int, default=8)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("dispersion", help="infinite-chain shift J_k")
    p.add_argument("--k1d-d-over-pi", type=float, default=0.2)
    p.add_argument("--n-k", type=int, default=241)
    p.add_argument("--pole-window", type=float, default=0.12)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("polariton", help="two-band qubit-photon model")
    p.add_argument("--g", type=float, default=0.01)
    p.add_argument("--k1d-d-over-pi", type=float, default=0.32)
    p.add_argument("--omega-f", type=float, default=10.0)
    p.add_argument("--length", type=float, default=30.0)
    p.add_argument("--n-k", type=int, default=201)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_polariton)

    p = sub.add_parser("two-exc", help="two-excitation modes with labels")
    _add_common(p, 20, 0.2)
    p.add_argument("--n-modes", type=int, default=None)
    p.add_argument("--grid-output", default=None)
    p.set_defaults(func=cmd_two_exc)

    p = sub.add_parser("ansatz", help="fermionic ansatz report for one mode")
    _add_common(p, 50, 0.2)
    p.add_argument("--xi", type=int, default=1)
    p.set_defaults(func=cmd_ansatz)

    p = sub.add_parser("scaling", help="power-law fits across chain sizes")
    p.add_argument("--quantity", required=True,
                   choices=("synthetic", "gamma1", "gamma2", "infidelity",
                            "additivity-r2", "additivity-r3", "epsilon"))
    p.add_argument("--n-list", type=_int_list, required=True)
    p.add_argument("--xi-list", type=_int_list, default=[1])
    p.add_argument("--k1d-d-over-pi", type=float, default=0.2)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("evolve", help="master-equation trajectory")
    _add_common(p)
    p.add_argument("--gamma-prime", type=float, default=0.0)
    p.add_argument("--gamma-deph", type=float, default=0.0)
    p.add_argument("--m-ex", type=int, default=2)
    p.add_argument("--k-over-pi", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=20.0)
    p.add_argument("--n-t", type=int, default=81)
    p.add_argument("--snapshot-times", type=_float_list, default=[0.0, 5.0, 20.0])
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("prepare", help="ancilla Fock-state preparation report")
    p.add_argument("--n-qubits", type=int, default=10)
    p.add_argument("--m-ex", type=int, default=2)
    p.add_argument("--gamma-prime", type=float, default=0.0)
    p.add_argument("--gamma-deph", type=float, default=0.0)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--k1d-d-over-pi", type=float, default=0.7)
    p.add_argument("--target-k-over-pi", type=float, default=0.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("sweep-imperfections",
                       help="max conditional fidelity over a rate grid")
    _add_common(p)
    p.add_argument("--gamma-prime-list", type=_float_list, required=True)
    p.add_argument("--gamma-deph-list", type=_float_list, required=True)
    p.add_argument("--p-floor", type=float, default=0.2)
    p.add_argument("--use-preparation", action="store_true")
    p.add_argument("--eta", type=float, default=1.0)
    p.set_defaults(func=cmd_sweep_imperfections)

    p = sub.add_parser("g2", help="two-photon delay correlation surface")
    _add_common(p)
    p.add_argument("--gamma-prime", type=float, default=0.0)
    p.add_argument("--gamma-deph", type=float, default=0.0)
    p.add_argument("--initial", choices=("fock-k0", "xi1"), default="fock-k0")
    p.add_argument("--t-list", type=_float_list, default=[0.0, 10.0, 30.0])
    p.add_argument("--tau-periods", type=float, default=4.0)
    p.add_argument("--points-per-period", type=int, default=50)
    p.add_argument("--side", choices=("L", "R"), default="L")
    p.set_defaults(func=cmd_g2)

    p = sub.add_parser("figures", help="canned parameter sets for the figures")
    p.add_argument("--which", default="all",
                   choices=("all", "fig1", "fig2", "fig3", "fig5", "fig6",
                            "figA1", "figA2", "figB1"))
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_figures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (WgqedError, ValueError, ZeroDivisionError) as exc:
        print(f"wgqed: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
