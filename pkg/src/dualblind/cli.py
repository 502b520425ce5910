"""Command-line harness: ``dualblind {recover,phase-transition,extremal}``.

Every CSV starts with a ``#`` comment recording the config digest and seed,
followed by a header row.  Exit codes: 0 success, 1 configuration error,
2 numerical failure.
"""

import argparse
import csv
import logging
import os
import sys

import numpy as np

from . import bench, svg
from .config import ExperimentConfig, load_config, parse_config
from .exceptions import ConfigError, DomainError, InfeasibleSeparationError, ShapeError

log = logging.getLogger("dualblind")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, header, rows, config, command, notes=()):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# dualblind {command} config={config.digest()} seed={config.seed}\n")
        for note in notes:
            fh.write(f"# {note}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def cmd_recover(config, out):
    result = bench.run_recovery(config)
    scene, rep = result.scene, result.report
    delay_rows, wave_rows = [], []
    for kind, chan, est in (("radar", scene.radar, result.radar), ("comms", scene.comms, result.comms)):
        if est is None:
            continue
        for idx, true, guess, err in bench.match_delays(chan.delays, est.delays):
            delay_rows.append((kind, idx, true, guess, err))
        wave_rows.append((kind, est.waveform_nmse))
    write_csv(os.path.join(out, "recover_delays.csv"),
              ("kind", "index", "true_delay", "est_delay", "abs_error"), delay_rows, config, "recover")
    write_csv(os.path.join(out, "recover_waveforms.csv"), ("waveform", "nmse"), wave_rows,
              config, "recover")

    metrics = [
        ("iterations", rep.iterations),
        ("primal_residual", rep.primal_residual),
        ("dual_residual", rep.dual_residual),
        ("feasibility", rep.feasibility),
        ("nuclear_norm", rep.nuclear_norm),
        ("converged", rep.converged),
        ("lifted_nmse", result.lifted_nmse),
    ]
    g = result.guarantee
    if g is not None:
        metrics += [
            ("gram_left_min", g.gram_left_min), ("threshold_left", g.threshold_left),
            ("gram_right_min", g.gram_right_min), ("threshold_right", g.threshold_right),
            ("joint_separation", g.separation), ("separation_threshold", g.separation_threshold),
            ("guarantee_pass", g.passed),
        ]
    write_csv(os.path.join(out, "recover_solver.csv"), ("metric", "value"), metrics, config, "recover")

    blocks = [(k, e) for k, e in (("radar", result.radar), ("comms", result.comms)) if e is not None]
    spec_rows = []
    if blocks:
        grid = blocks[0][1].spectrum.grid
        cols = [e.spectrum.db() for _, e in blocks]
        spec_rows = [(grid[i], *(c[i] for c in cols)) for i in range(grid.size)]
        svg.line_plot(os.path.join(out, "recover_pseudospectrum.svg"), grid,
                      [(f"{k} block", e.spectrum.db()) for k, e in blocks],
                      title="MUSIC pseudospectrum", xlabel="delay", ylabel="dB",
                      markers=np.concatenate([scene.radar.delays, scene.comms.delays]))
    write_csv(os.path.join(out, "recover_pseudospectrum.csv"),
              ("tau", *(f"{k}_db" for k, _ in blocks)), spec_rows, config, "recover")
    log.info("lifted NMSE %.3g, converged=%s after %d iterations",
             result.lifted_nmse, rep.converged, rep.iterations)
    return EXIT_OK if rep.converged else EXIT_NUMERIC


def cmd_phase_transition(config, out):
    summaries, outcomes = bench.phase_transition(config)
    notes = ["axes: K = radar targets (rows), Q = comms paths (columns); "
             f"success = lifted NMSE < {bench.SUCCESS_NMSE:g}"]
    notes += [f"K={s.k} Q={s.q} {s.method}: {s.note}" for s in summaries if s.note]
    write_csv(os.path.join(out, "phase_transition.csv"),
              ("K", "Q", "method", "success_prob", "trials"),
              [(s.k, s.q, s.method, s.success_prob, s.trials) for s in summaries],
              config, "phase-transition", notes)
    write_csv(os.path.join(out, "phase_trials.csv"),
              ("K", "Q", "trial", "method", "nmse", "converged", "iterations", "note"),
              [(o.k, o.q, o.trial, o.method, o.nmse, o.converged, o.iterations, o.note)
               for o in outcomes], config, "phase-transition")
    ks, qs = list(config.k_range), list(config.q_range)
    for method in ("proposed", "baseline"):
        grid = np.zeros((len(ks), len(qs)))
        for s in summaries:
            if s.method == method:
                grid[ks.index(s.k), qs.index(s.q)] = s.success_prob
        svg.heatmap(os.path.join(out, f"phase_{method}.svg"), ks, qs, grid,
                    title=f"success probability ({method})", xlabel="Q (paths)",
                    ylabel="K (targets)")
    return EXIT_OK


def cmd_extremal(config, out):
    rep = bench.run_extremal(config)
    write_csv(os.path.join(out, "extremal_samples.csv"), ("t", "majorant", "minorant", "indicator"),
              zip(rep.t, rep.majorant, rep.minorant, rep.indicator), config, "extremal")
    write_csv(os.path.join(out, "extremal_fourier.csv"), ("freq", "majorant", "indicator", "minorant"),
              zip(rep.freqs, rep.spectra["majorant"], rep.spectra["indicator"], rep.spectra["minorant"]),
              config, "extremal")
    write_csv(os.path.join(out, "extremal_checks.csv"), ("check", "value", "expected", "rel_error", "pass"),
              rep.checks, config, "extremal")
    write_csv(os.path.join(out, "extremal_condition.csv"), ("N", "delta", "bound", "empirical", "pass"),
              [(r.n_samples, r.delta, r.bound, r.empirical, r.passed) for r in rep.conditions],
              config, "extremal")
    svg.line_plot(os.path.join(out, "extremal.svg"), rep.t,
                  [("majorant", rep.majorant), ("minorant", rep.minorant), ("indicator", rep.indicator)],
                  title="Selberg extremal functions", xlabel="t")
    band = np.abs(rep.freqs) <= 3 * config.bandwidth
    floor = 1e-16
    svg.line_plot(os.path.join(out, "extremal_fourier.svg"), rep.freqs[band],
                  [(k, np.log10(np.maximum(v[band], floor))) for k, v in rep.spectra.items()],
                  title="Fourier magnitude", xlabel="frequency", ylabel="log10 |F|",
                  markers=(-config.bandwidth, config.bandwidth))
    ok = all(c[-1] for c in rep.checks) and all(r.passed for r in rep.conditions)
    return EXIT_OK if ok else EXIT_NUMERIC


COMMANDS = {
    "recover": cmd_recover,
    "phase-transition": cmd_phase_transition,
    "extremal": cmd_extremal,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="dualblind", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key = value config file (defaults if omitted)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config entry (repeatable)")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def resolve_config(args):
    config = load_config(args.config) if args.config else ExperimentConfig()
    if args.set:
        overrides = parse_config("\n".join(args.set))
        changed = {k: getattr(overrides, k) for k in
                   (item.split("=", 1)[0].strip() for item in args.set)}
        config = config.replace(**changed)
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    return config


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        config = resolve_config(args)
        os.makedirs(args.out, exist_ok=True)
        return COMMANDS[args.command](config, args.out)
    except (ConfigError, DomainError, ShapeError, InfeasibleSeparationError) as exc:
        print(f"dualblind: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
