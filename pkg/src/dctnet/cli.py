"""Experiment runner: train models, sweep result tables, export analysis
artifacts, check gradients, and dump datasets.

Every command is reproducible byte for byte given the same configuration
and seeds; outputs go only under the chosen output directory.  Defaults
reproduce the reference setup (6 hidden neurons, 12-coefficient budget,
512-sample grid) at desk scale; `--scale full` switches to the large
dataset sizes.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .analysis import (
    activation_report,
    bump,
    decision_map,
    redundancy_report,
    response_surface,
    write_activation_report,
    write_grid_csv,
    write_grid_pgm,
)
from .basis import BasisConfig
from .network import MODEL_KINDS, init_benchmark, init_network, load_model, save_model
from .tasks import PROBLEMS, generate_dataset, get_problem, load_dataset, mse, save_dataset, accuracy
from .training import LmsConfig, TrainingDiverged, default_config, gradient_check, train

SCALES = {"desk": (100_000, 20_000), "full": (800_000, 50_000)}


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str = "p1"
    model: str = "enn"
    m1: int = 6
    q: int = 12
    n: int = 512
    scale: str = "desk"
    train_size: int | None = None
    test_size: int | None = None
    epochs: int = 1
    seed: int = 1234
    # None = pick the task-appropriate assignment (see training.default_config)
    alpha_hidden_dct: float | None = None
    alpha_output_dct: float | None = None
    alpha_hidden_linear: float | None = None
    alpha_output_linear: float | None = None
    beta: float = 0.999
    out: str = "out"
    timing: bool = False

    def sizes(self) -> tuple[int, int]:
        default_train, default_test = SCALES[self.scale]
        return (
            self.train_size if self.train_size is not None else default_train,
            self.test_size if self.test_size is not None else default_test,
        )

    def lms(self) -> LmsConfig:
        base = default_config(get_problem(self.problem).kind)
        overrides = {
            name: value
            for name in (
                "alpha_hidden_dct",
                "alpha_output_dct",
                "alpha_hidden_linear",
                "alpha_output_linear",
            )
            if (value := getattr(self, name)) is not None
        }
        return replace(
            base,
            beta=self.beta,
            epochs=self.epochs,
            shuffle_seed=self.seed + 3,
            **overrides,
        )

    def validate(self) -> None:
        get_problem(self.problem)
        if self.model not in MODEL_KINDS:
            raise ValueError(f"unknown model {self.model!r}; choose from {MODEL_KINDS}")
        if self.scale not in SCALES:
            raise ValueError(f"unknown scale {self.scale!r}")
        train_size, test_size = self.sizes()
        if train_size < 1 or test_size < 1:
            raise ValueError("dataset sizes must be positive")
        BasisConfig(n=self.n, q=self.q)
        self.lms()  # step-size validation


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        doc = json.load(fh)
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown config keys {sorted(unknown)}")
    return doc


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig(**_load_config_file(getattr(args, "config", None)))
    overrides = {}
    for f in fields(ExperimentConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = value
    cfg = replace(cfg, **overrides)
    cfg.validate()
    return cfg


def _init_model(cfg: ExperimentConfig):
    basis = BasisConfig(n=cfg.n, q=cfg.q)
    task = get_problem(cfg.problem).kind
    if cfg.model == "enn":
        return init_network(m1=cfg.m1, basis=basis, seed=cfg.seed + 2)
    return init_benchmark(cfg.model, task, m1=cfg.m1, basis=basis, seed=cfg.seed + 2)


def _run_cell(cfg: ExperimentConfig):
    """Train one (problem, model) cell; returns (model, report, metric, value)."""
    problem = get_problem(cfg.problem)
    train_size, test_size = cfg.sizes()
    train_set = generate_dataset(problem, train_size, cfg.seed)
    test_set = generate_dataset(problem, test_size, cfg.seed + 1)
    model = _init_model(cfg)
    trained, report = train(model, train_set, cfg.lms())
    if problem.kind == "classification":
        return trained, report, "accuracy", accuracy(trained, test_set)
    return trained, report, "mse", mse(trained, test_set)


def cmd_train(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    try:
        trained, report, metric, value = _run_cell(cfg)
    except TrainingDiverged as exc:
        print(f"error: training diverged: {exc}", file=sys.stderr)
        return 3
    elapsed = time.perf_counter() - started
    save_model(trained, out / "model.json")
    report.write_csv(out / "train_report.csv")
    train_size, test_size = cfg.sizes()
    metrics = {
        "schema": 1,
        "problem": cfg.problem,
        "model": cfg.model,
        "metric": metric,
        "value": value,
        "train_size": train_size,
        "test_size": test_size,
        "epochs": cfg.epochs,
        "iterations": report.iterations,
        "seed": cfg.seed,
        # timing is opt-in so identical runs stay byte-identical
        "wall_time": elapsed if cfg.timing else None,
    }
    with open(out / "metrics.json", "w") as fh:
        json.dump(metrics, fh, indent=2)
        fh.write("\n")
    print(f"{cfg.problem} {cfg.model} {metric}={value:.6g} ({report.iterations} iterations)")
    return 0


def cmd_table(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    problems = args.problems or [name for name, spec in PROBLEMS.items() if spec.kind == args.task]
    for name in problems:
        if get_problem(name).kind != args.task:
            raise ValueError(f"problem {name!r} is not a {args.task} task")
    models = args.models or list(MODEL_KINDS)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    failed = False
    for problem in problems:
        for model in models:
            cell = replace(cfg, problem=problem, model=model)
            try:
                _, _, _, value = _run_cell(cell)
                rows.append((problem, model, format(value, ".17g")))
                print(f"{problem} {model} -> {value:.6g}")
            except Exception as exc:  # cell failures land in the table
                rows.append((problem, model, "error"))
                failed = True
                print(f"{problem} {model} -> error: {exc}", file=sys.stderr)
    with open(out / "table.csv", "w") as fh:
        fh.write("problem,model,metric\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
    return 1 if failed else 0


def cmd_export(args: argparse.Namespace) -> int:
    model = load_model(args.model_file)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    resolution = args.resolution
    if args.what == "bumps":
        for k in range(1, model.m1 + 1):
            grid = bump(model, k, resolution)
            write_grid_csv(grid, out / f"bump_{k}.csv")
            write_grid_pgm(grid, out / f"bump_{k}.pgm")
    elif args.what == "map":
        grid = decision_map(model, resolution)
        write_grid_csv(grid, out / "decision_map.csv")
        write_grid_pgm(grid, out / "decision_map.pgm")
    elif args.what == "response":
        grid = response_surface(model, resolution)
        write_grid_csv(grid, out / "response.csv")
        write_grid_pgm(grid, out / "response.pgm")
    elif args.what == "activations":
        dataset = load_dataset(args.dataset) if args.dataset else None
        write_activation_report(activation_report(model, dataset), out)
    elif args.what == "redundancy":
        pairs = redundancy_report(model, resolution, args.tol)
        with open(out / "redundancy.csv", "w") as fh:
            fh.write("first,second,correlation,weight_sign_product,cancelling\n")
            for p in pairs:
                fh.write(
                    f"{p.first},{p.second},{format(p.correlation, '.17g')},"
                    f"{p.weight_sign_product},{int(p.cancelling)}\n"
                )
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown export kind {args.what!r}")
    return 0


def cmd_gradcheck(args: argparse.Namespace) -> int:
    result = gradient_check(trials=args.trials, seed=args.seed, flip_group=args.flip_sign)
    print(f"max relative deviation over {result.trials} trials: {result.max_deviation:.3e}")
    if not result.passed:
        print(f"worst coordinate: {result.worst}", file=sys.stderr)
        return 1
    return 0


def cmd_dataset(args: argparse.Namespace) -> int:
    dataset = generate_dataset(args.problem, args.n, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_dataset(dataset, out / "dataset.csv")
    print(f"wrote {len(dataset)} samples of {dataset.problem} to {out / 'dataset.csv'}")
    return 0


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--out", help="output directory (default: out)")
    parser.add_argument("--seed", type=int, help="base seed for data, init, and shuffling")
    parser.add_argument("--scale", choices=sorted(SCALES), help="dataset sizes: desk or full")
    parser.add_argument("--train-size", dest="train_size", type=int)
    parser.add_argument("--test-size", dest="test_size", type=int)
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--m1", type=int, help="hidden width")
    parser.add_argument("--q", type=int, help="coefficient budget per activation")
    parser.add_argument("--n", type=int, help="basis grid length")
    parser.add_argument("--timing", action="store_const", const=True,
                        help="record wall time in metrics.json (breaks byte-level reproducibility)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dctnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train one model on one problem")
    p_train.add_argument("--problem", choices=sorted(PROBLEMS))
    p_train.add_argument("--model", choices=MODEL_KINDS)
    _add_experiment_flags(p_train)
    p_train.set_defaults(func=cmd_train)

    p_table = sub.add_parser("table", help="sweep problems x models into a CSV table")
    p_table.add_argument("--task", choices=("classification", "regression"), default="classification")
    p_table.add_argument("--problems", nargs="*", help="problem names (default: all for the task)")
    p_table.add_argument("--models", nargs="*", choices=MODEL_KINDS, help="model kinds (default: all)")
    _add_experiment_flags(p_table)
    p_table.set_defaults(func=cmd_table)

    p_export = sub.add_parser("export", help="write analysis artifacts for a saved model")
    p_export.add_argument("model_file", help="model JSON produced by train")
    p_export.add_argument("--what", required=True, choices=("bumps", "map", "response", "activations", "redundancy"))
    p_export.add_argument("--out", default="out")
    p_export.add_argument("--resolution", type=int, default=201)
    p_export.add_argument("--tol", type=float, default=0.01, help="redundancy correlation tolerance")
    p_export.add_argument("--dataset", help="dataset CSV for activation operating ranges")
    p_export.set_defaults(func=cmd_export)

    p_grad = sub.add_parser("gradcheck", help="validate update rules against finite differences")
    p_grad.add_argument("--trials", type=int, default=200)
    p_grad.add_argument("--seed", type=int, default=0)
    p_grad.add_argument("--flip-sign", dest="flip_sign", metavar="GROUP",
                        help="self-test: negate one rule's expected delta and confirm detection")
    p_grad.set_defaults(func=cmd_gradcheck)

    p_data = sub.add_parser("dataset", help="generate and export a dataset")
    p_data.add_argument("--problem", required=True, choices=sorted(PROBLEMS))
    p_data.add_argument("--n", type=int, default=10_000)
    p_data.add_argument("--seed", type=int, default=1234)
    p_data.add_argument("--out", default="out")
    p_data.set_defaults(func=cmd_dataset)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
