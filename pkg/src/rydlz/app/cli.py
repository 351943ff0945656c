"""``lzsim <scenario> --config <path> --out <dir>``

Exit codes: 0 success, 2 configuration error, 3 numerical-contract violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from ..errors import ConfigError, ContractViolation, DimensionError, DomainError, StepSizeError
from . import io
from .scenarios import (SCENARIOS, run_invariants_check, run_pair_coherent, run_pair_dissipative,
                        run_single_atom, run_sweep_map)

log = logging.getLogger("lzsim")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lzsim", description="Landau-Zener sweeps of Rydberg atom pairs.")
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("--config", type=Path, help="JSON scenario config (default: bundled figure config)")
    p.add_argument("--out", type=Path, default=Path("lzsim_out"), help="output directory")
    p.add_argument("--v", type=float, help="sweep rate (omega^2)")
    p.add_argument("--v0", type=float, help="interaction strength (omega)")
    p.add_argument("--gamma", type=float, help="Rydberg decay rate (omega)")
    p.add_argument("--dt", type=float, help="RK4 step (1/omega)")
    p.add_argument("--delta-span", type=float, help="sweep detuning from -span to +span (omega)")
    p.add_argument("--hold", type=float, help="hold time at the final detuning (1/omega)")
    p.add_argument("--threads", type=int, default=None, help="worker threads for sweep-map")
    p.add_argument("-q", "--quiet", action="store_true")
    return p


def _apply_overrides(data: dict, args) -> dict:
    sched = data.setdefault("schedule", {})
    if args.v is not None:
        sched["v"] = args.v
    if args.v0 is not None:
        sched["v0"] = args.v0
    if args.delta_span is not None:
        sched["delta_start"] = -abs(args.delta_span)
        sched["delta_end"] = abs(args.delta_span)
    if args.gamma is not None:
        data.setdefault("dissipation", {})["gamma"] = args.gamma
    if args.dt is not None:
        data["dt"] = args.dt
    if args.hold is not None:
        data["hold_time"] = args.hold
    return data


def _load(args):
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    else:
        data = io.default_config(args.scenario)
    if data.get("scenario", args.scenario) != args.scenario:
        raise ConfigError(f"config scenario {data.get('scenario')!r} does not match {args.scenario!r}")
    return io.config_from_dict(_apply_overrides(data, args))


def _run(cfg, out: Path, threads):
    out.mkdir(parents=True, exist_ok=True)
    if cfg.scenario == "single":
        res = run_single_atom(cfg)
        tr = res.trajectory
        io.write_csv(out / "single.csv", {
            "t": tr.times, "p_g": tr.populations["g"], "p_e": tr.populations["r"],
            "phi": tr.phi_single, "bloch_x": res.bloch[:, 0], "bloch_y": res.bloch[:, 1],
            "bloch_z": res.bloch[:, 2]})
        io.write_summary(out / "summary.json", cfg, summary=res.summary)
        log.info("P_e(final) = %.6f, LZ prediction %.6f", res.summary["p_e_final"],
                 res.summary["p_e_predicted"])
    elif cfg.scenario == "pair-coherent":
        res = run_pair_coherent(cfg)
        tr = res.trajectory
        p = tr.populations
        io.write_csv(out / "pair_coherent.csv", {
            "t": tr.times, "p_gg": p["gg"], "p_s": p["s"], "p_rr": p["rr"],
            "theta1": tr.theta1, "theta2": tr.theta2, "s_a": res.s_a})
        st = res.maxima_states
        io.write_csv(out / "maxima.csv", {
            "t": res.maxima_times, "s_a": res.maxima_values,
            "a_gg": np.abs(st[:, 0]), "a_s": np.abs(st[:, 1]), "a_rr": np.abs(st[:, 2]),
            "theta1": np.angle(st[:, 1] / st[:, 0]) % (2 * np.pi),
            "theta2": np.angle(st[:, 2] / st[:, 0]) % (2 * np.pi)})
        io.write_summary(out / "summary.json", cfg, osc_stats=res.stats,
                         asymptotic_prediction=res.prediction, summary=res.summary)
        log.info("S_A max %.6f min %.6f period %.4f", res.stats.s_max, res.stats.s_min,
                 res.stats.period)
    elif cfg.scenario == "pair-dissipative":
        res = run_pair_dissipative(cfg)
        tr = res.trajectory
        p = tr.populations
        io.write_csv(out / "populations.csv", {
            "t": tr.times, "rho_gg": p["gg"], "rho_s": p["s"], "rho_rr": p["rr"]})
        io.write_csv(out / "discord.csv", {
            "t": res.discord_times, "discord_ab": res.discord_ab, "discord_ba": res.discord_ba,
            "mutual_info": res.mutual_info})
        io.write_summary(out / "summary.json", cfg, decay_fit=res.fit, summary=res.summary,
                         discord_peaks={"t": res.peak_times, "value": res.peak_values})
        log.info("decay constants c1=%.4f c2=%.4f c3=%.4f", res.fit.c1, res.fit.c2, res.fit.c3)
    elif cfg.scenario == "sweep-map":
        res = run_sweep_map(cfg, threads)
        v0g, vg = np.meshgrid(res.v0, res.v, indexing="ij")
        io.write_csv(out / "sweep_map.csv", {
            "v0": v0g.ravel(), "v": vg.ravel(), "s_max": res.s_max.ravel(),
            "s_min": res.s_min.ravel(), "s_amp": res.s_amp.ravel(), "period": res.period.ravel()})
        io.write_summary(out / "summary.json", cfg,
                         failures={f"{res.v0[i]:g},{res.v[j]:g}": msg
                                   for (i, j), msg in res.failures.items()})
        log.info("sweep map %dx%d done, %d failures", res.v0.size, res.v.size, len(res.failures))
    else:
        rep = run_invariants_check()
        names = list(rep.invariants[0].as_dict())
        rows = list(zip(rep.labels, rep.invariants)) + list(zip(rep.bell_labels, rep.bell_invariants))
        cols = {"state": [r[0] for r in rows]}
        for k in names:
            cols[k] = [r[1].as_dict()[k] for r in rows]
        io.write_csv(out / "invariants.csv", cols)
        verdicts = {lab: dict(zip(rep.bell_labels, map(bool, row)))
                    for lab, row in zip(rep.labels, rep.verdicts)}
        io.write_summary(out / "summary.json", cfg, tolerance=rep.tol, lu_equivalent=verdicts,
                         max_residual={lab: float(r.max()) for lab, r in zip(rep.labels, rep.residuals)})
        print(rep.table())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s")
    try:
        cfg = _load(args)
    except ConfigError as exc:
        print(f"lzsim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        _run(cfg, args.out, args.threads)
    except ConfigError as exc:
        print(f"lzsim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ContractViolation, StepSizeError, DomainError, DimensionError) as exc:
        print(f"lzsim: numerical contract violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
