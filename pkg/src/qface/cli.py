"""Command-line frontend for the swap-test face classifier.

Subcommands:
    fidelity   estimate fidelity between two PGM images
    sweep      threshold sweep of the template classifier on a dataset split
    table1     mean face/non-face fidelity per encoding size (16, 64, 256)
    compare    SVM vs k-NN vs quantum-template accuracy on one split
    bench      wall-clock scaling grid for the analytic and circuit paths

Exit codes: 0 success, 2 data/IO problem, 3 configuration problem.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import baselines, bench, classifier, config as config_mod, dataio, encoding, swaptest
from .exceptions import ConfigError, DataError, PgmParseError

EXIT_OK = 0
EXIT_DATA = 2
EXIT_CONFIG = 3

TABLE1_DIMS = (16, 64, 256)

# argparse Namespace attribute -> RunConfig field
_CONFIG_FLAGS = (
    "dim",
    "mode",
    "shots",
    "seed",
    "threshold_start",
    "threshold_step",
    "threshold_end",
    "train_n",
    "nonface_dir",
    "nonface_synthetic",
    "square",
    "out",
)


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; we reserve 2 for data errors."""

    def error(self, message):
        raise ConfigError(message)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dim", type=int, help="feature dimension (power of two)")
    parser.add_argument(
        "--mode",
        choices=sorted(config_mod.MODE_NAMES),
        help="fidelity estimation mode (exact is an alias for circuit_exact)",
    )
    parser.add_argument("--shots", type=int, help="shot count for sampled mode")
    parser.add_argument("--seed", type=int, help="base RNG seed")
    parser.add_argument("--threshold-start", type=float, dest="threshold_start")
    parser.add_argument("--threshold-step", type=float, dest="threshold_step")
    parser.add_argument("--threshold-end", type=float, dest="threshold_end")
    parser.add_argument("--train-n", type=int, dest="train_n",
                        help="number of face images reserved for training")
    parser.add_argument("--nonface-dir", dest="nonface_dir",
                        help="directory of non-face PGM images")
    parser.add_argument("--nonface-synthetic", type=int, dest="nonface_synthetic",
                        help="generate this many synthetic non-faces instead")
    parser.add_argument("--square", choices=("crop", "squash"),
                        help="how to make rectangular images square")
    parser.add_argument("--out", help="output directory (default: out)")
    parser.add_argument("--config", help="key = value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qface", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_fid = sub.add_parser("fidelity", help="fidelity between two PGM images")
    p_fid.add_argument("image_a")
    p_fid.add_argument("image_b")
    _add_config_flags(p_fid)

    p_sweep = sub.add_parser("sweep", help="threshold sweep on a face corpus")
    p_sweep.add_argument("face_dir")
    _add_config_flags(p_sweep)

    p_t1 = sub.add_parser("table1", help="mean fidelities per encoding size")
    p_t1.add_argument("face_dir")
    _add_config_flags(p_t1)

    p_cmp = sub.add_parser("compare", help="SVM / k-NN / quantum accuracy")
    p_cmp.add_argument("face_dir")
    _add_config_flags(p_cmp)

    p_bench = sub.add_parser("bench", help="timing grid for both fidelity paths")
    _add_config_flags(p_bench)

    return parser


def config_from_args(args: argparse.Namespace) -> config_mod.RunConfig:
    overrides = {
        name: getattr(args, name)
        for name in _CONFIG_FLAGS
        if getattr(args, name, None) is not None
    }
    return config_mod.load_config(config_path=args.config, overrides=overrides)


def _prepare_out(cfg: config_mod.RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "effective.config").write_text(cfg.to_text())
    return out


def _nonface_source(cfg: config_mod.RunConfig):
    if cfg.nonface_dir is not None:
        return Path(cfg.nonface_dir)
    return cfg.nonface_synthetic  # int, or None for one per face


def _samples(entries) -> list:
    return [
        classifier.LabeledSample(vector=e.vector, label=e.label, id=e.id)
        for e in entries
    ]


def _load_unit(path_str: str, cfg: config_mod.RunConfig):
    try:
        img = dataio.load_pgm(path_str)
    except PgmParseError as exc:
        raise DataError(f"{path_str}: {exc}") from exc
    return dataio.preprocess_unit(img, cfg.dim, cfg.square)


def cmd_fidelity(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    va = _load_unit(args.image_a, cfg)
    vb = _load_unit(args.image_b, cfg)
    est = swaptest.estimate_fidelity(va, vb, mode=cfg.mode, shots=cfg.shots,
                                     seed=cfg.seed)
    print(f"fidelity {est.value:.6f}")
    print(f"method {est.method}")
    print(f"shots {est.shots}")
    print(f"std_error {est.std_error:.6f}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    split = dataio.make_split(
        args.face_dir,
        nonface_source=_nonface_source(cfg),
        train_n=cfg.train_n,
        dim=cfg.dim,
        seed=cfg.seed,
        square=cfg.square,
    )
    template = classifier.build_template([e.vector for e in split.train_faces])
    testset = _samples(split.test_faces + split.test_nonfaces)
    report = classifier.sweep_thresholds(
        template, testset,
        start=cfg.threshold_start, step=cfg.threshold_step,
        end=cfg.threshold_end,
        mode=cfg.mode, shots=cfg.shots, seed=cfg.seed,
    )

    out = _prepare_out(cfg)
    (out / "sweep.csv").write_text(report.to_csv())
    dataio.write_manifest(split, out / "split.manifest")

    print(f"{'threshold':>10} {'tp':>5} {'fp':>5} {'tn':>5} {'fn':>5} {'accuracy':>9}")
    for row in report.rows:
        print(f"{row.threshold:>10.6f} {row.tp:>5d} {row.fp:>5d} "
              f"{row.tn:>5d} {row.fn:>5d} {row.accuracy:>9.6f}")
    print(f"best threshold {report.best_threshold:.6f} "
          f"accuracy {report.best_accuracy:.6f}")
    return EXIT_OK


def cmd_table1(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    rows = []
    for dim in TABLE1_DIMS:
        split = dataio.make_split(
            args.face_dir,
            nonface_source=_nonface_source(cfg),
            train_n=cfg.train_n,
            dim=dim,
            seed=cfg.seed,
            square=cfg.square,
        )
        template = classifier.build_template([e.vector for e in split.train_faces])
        testset = _samples(split.test_faces + split.test_nonfaces)
        mean_face, mean_nonface = classifier.average_fidelity_report(
            template, testset, mode=cfg.mode, shots=cfg.shots, seed=cfg.seed,
        )
        rows.append((encoding.required_qubits(dim), dim, mean_face, mean_nonface))

    out = _prepare_out(cfg)
    lines = ["qubits,dim,mean_face_fidelity,mean_nonface_fidelity"]
    for qubits, dim, mf, mn in rows:
        lines.append(f"{qubits},{dim},{mf:.6f},{mn:.6f}")
    (out / "table1.csv").write_text("\n".join(lines) + "\n")

    print(f"{'qubits':>6} {'dim':>5} {'mean_face':>10} {'mean_nonface':>13}")
    for qubits, dim, mf, mn in rows:
        print(f"{qubits:>6d} {dim:>5d} {mf:>10.6f} {mn:>13.6f}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    split = dataio.make_split(
        args.face_dir,
        nonface_source=_nonface_source(cfg),
        train_n=cfg.train_n,
        dim=cfg.dim,
        seed=cfg.seed,
        square=cfg.square,
        nonface_train_n=cfg.train_n,  # baselines need both labels in train
    )
    train = _samples(split.train_faces + split.train_nonfaces)
    test = _samples(split.test_faces + split.test_nonfaces)
    report = baselines.compare_algorithms(
        train, test,
        mode=cfg.mode, shots=cfg.shots, seed=cfg.seed,
        threshold_start=cfg.threshold_start,
        threshold_step=cfg.threshold_step,
        threshold_end=cfg.threshold_end,
    )

    out = _prepare_out(cfg)
    (out / "compare.csv").write_text(report.to_csv())
    (out / "knn_k.csv").write_text(report.knn_to_csv())
    dataio.write_manifest(split, out / "split.manifest")

    print(f"{'algorithm':<10} {'accuracy':>9} detail")
    for row in report.rows:
        print(f"{row.algorithm:<10} {row.accuracy:>9.6f} {row.detail}")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = config_from_args(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rows = bench.run_bench(seed=cfg.seed)

    out = _prepare_out(cfg)
    (out / "bench.csv").write_text(bench.bench_csv(rows))

    print(f"{'path':<9} {'dim':>5} {'samples':>8} {'median_seconds':>15}")
    for row in rows:
        print(f"{row.path:<9} {row.dim:>5d} {row.samples:>8d} "
              f"{row.median_seconds:>15.6f}")
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return EXIT_OK


_COMMANDS = {
    "fidelity": cmd_fidelity,
    "sweep": cmd_sweep,
    "table1": cmd_table1,
    "compare": cmd_compare,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, PgmParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
