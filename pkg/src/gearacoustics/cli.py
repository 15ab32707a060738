"""Command-line entry point.

Subcommands::

    generate   render the synthetic dataset (manifest.csv + wav/)
    features   extract feature tables            -> <out>/features_<set>.csv
    train      fit BRM on the train rows         -> <out>/model_<set>.json
    score      similarity of every row           -> <out>/scores_<set>.csv
    benchmark  full AUC_h / AUC_f benchmark      -> <out>/benchmark.{csv,json}
    roc        ROC points from a scores file     -> <out>/roc_<set>_{h,f}.csv

Exit status is 0 on success, 1 on a usage error and 2 on bad or missing
input data. Every run prints the seed and the config digest.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .config import FEATURE_SETS, load_config
from .errors import DataError, GearAcousticsError
from .evaluation import roc_curve, write_roc_csv
from .occ import OCCModel
from .pipeline import FeatureTable, benchmark_run, check_dimensions, extract_tables, fault_scores, train_model
from .synth import generate_dataset, read_manifest

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, feature_set: bool = False) -> None:
    p.add_argument("--config", type=Path, help="TOML config (defaults when omitted)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", type=Path, help="output directory")
    if feature_set:
        p.add_argument("--feature-set", choices=FEATURE_SETS, type=str.lower)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gearacoustics", description="Acoustic end-of-line inspection of geared motors.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="render the synthetic dataset")
    _common(p)

    p = sub.add_parser("features", help="extract feature tables from a manifest")
    _common(p, feature_set=True)
    p.add_argument("--manifest", type=Path, help="manifest.csv (default: <data_dir>/manifest.csv)")

    p = sub.add_parser("train", help="fit the one-class model on the train rows")
    _common(p, feature_set=True)

    p = sub.add_parser("score", help="score feature rows with a trained model")
    _common(p, feature_set=True)
    p.add_argument("--model", type=Path, help="model file (default: <out>/model_<set>.json)")
    p.add_argument("--threshold", type=float, help="similarity threshold for accept/reject")

    p = sub.add_parser("benchmark", help="run the full benchmark")
    _common(p)
    p.add_argument("--manifest", type=Path, help="existing manifest (generated into data_dir when absent)")

    p = sub.add_parser("roc", help="ROC points of a scores file")
    _common(p, feature_set=True)
    return parser


def _needs_set(args) -> str:
    if not args.feature_set:
        raise _UsageError("--feature-set is required for this command")
    return args.feature_set


class _UsageError(Exception):
    pass


def _read_scores(path: Path):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        labels = np.array([r["label"] for r in rows])
        splits = np.array([r["split"] for r in rows])
        scores = np.array([float(r["fault_score"]) for r in rows])
    except OSError as exc:
        raise DataError(f"cannot read scores {path}: {exc}") from exc
    except (KeyError, ValueError) as exc:
        raise DataError(f"{path}: malformed scores file ({exc})") from exc
    return labels, splits, scores


def run(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    out = Path(args.out) if args.out is not None else Path(config.out_dir)
    print(f"seed={config.seed} config_digest={config.digest}")

    if args.command == "generate":
        target = Path(args.out) if args.out is not None else Path(config.data_dir)
        samples = generate_dataset(config.dataset, config.seed, target)
        print(f"wrote {len(samples)} samples to {target / 'manifest.csv'}")
        return EXIT_OK

    out.mkdir(parents=True, exist_ok=True)

    if args.command == "features":
        sets = (args.feature_set,) if args.feature_set else config.feature_sets
        manifest = args.manifest or Path(config.data_dir) / "manifest.csv"
        samples = read_manifest(manifest)
        tables = extract_tables(samples, Path(manifest).parent, config, sets)
        for name, table in tables.items():
            path = out / f"features_{name}.csv"
            table.write_csv(path)
            print(f"wrote {path}")
        return EXIT_OK

    if args.command == "train":
        name = _needs_set(args)
        table = FeatureTable.read_csv(out / f"features_{name}.csv", name)
        model = train_model(table, config)
        path = out / f"model_{name}.json"
        path.write_text(model.dumps())
        print(f"wrote {path}")
        return EXIT_OK

    if args.command == "score":
        name = _needs_set(args)
        table = FeatureTable.read_csv(out / f"features_{name}.csv", name)
        model_path = args.model or out / f"model_{name}.json"
        try:
            model = OCCModel.loads(Path(model_path).read_text())
        except OSError as exc:
            raise DataError(f"cannot read model {model_path}: {exc}") from exc
        check_dimensions(model, table)
        if args.threshold is not None and not 0 <= args.threshold <= 1:
            raise _UsageError("--threshold must lie in [0, 1]")
        faults = fault_scores(model, table.values)
        similarity = np.exp(-faults)
        path = out / f"scores_{name}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            header = ["id", "label", "split", "similarity", "fault_score"]
            w.writerow(header + (["decision"] if args.threshold is not None else []))
            for i in range(len(table.ids)):
                row = [table.ids[i], table.labels[i], table.splits[i], repr(float(similarity[i])),
                       repr(float(faults[i]))]
                if args.threshold is not None:
                    row.append("accept" if similarity[i] >= args.threshold else "reject")
                w.writerow(row)
        print(f"wrote {path}")
        return EXIT_OK

    if args.command == "benchmark":
        report, _ = benchmark_run(config, args.manifest)
        csv_path, json_path = report.write(out)
        sys.stdout.write(report.to_csv())
        print(f"wrote {csv_path} and {json_path}")
        return EXIT_OK

    if args.command == "roc":
        name = _needs_set(args)
        labels, splits, scores = _read_scores(out / f"scores_{name}.csv")
        test = splits == "test"
        for suffix, positive in (("h", labels[test] != "healthy"), ("f", labels[test] == "major_fault")):
            path = out / f"roc_{name}_{suffix}.csv"
            write_roc_csv(roc_curve(scores[test], positive), path)
            print(f"wrote {path}")
        return EXIT_OK

    raise _UsageError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except _UsageError as exc:
        print(f"gearacoustics: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GearAcousticsError, OSError) as exc:
        print(f"gearacoustics: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
