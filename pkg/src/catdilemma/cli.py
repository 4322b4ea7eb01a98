"""Command-line front end.

    catdilemma sample   --model quant --samples 10000 --seed 7 --format csv --out pts.csv
    catdilemma coverage --model quant --class transitive --grid 256 --method oracle
    catdilemma oracle   0.3333 0.3333 0.3334 --model quant --class transitive
    catdilemma figure   --model all --class all-three --samples 10000 --out figs/
    catdilemma report   --grid 256 --samples 100000 --seed 0

Exit codes: 0 success, 1 usage or configuration error, 2 I/O error.
``--config FILE`` reads a JSON object whose keys mirror the long flags
(``class``, ``samples``, ...); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from catdilemma import coverage, oracle, records, svg
from catdilemma.model import ClassFilter, FrequencyTriple, Model
from catdilemma.sampling import sample

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2

MODELS = ("classical", "prequant", "quant", "all")
CLASSES = ("all", "intransitive", "transitive", "all-three")
METHODS = ("oracle", "empirical", "both")
FORMATS = ("csv", "json", "svg")
LABELS = ("foods", "electoral")

DEFAULTS = {
    "model": "all",
    "class": "all",
    "samples": None,  # per command
    "seed": 0,
    "grid": None,  # per method
    "method": "both",
    "out": None,
    "format": None,
    "labels": "foods",
}
_CONFIG_KEYS = set(DEFAULTS)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    model: str
    klass: str
    samples: int
    seed: int
    grid: int | None
    method: str
    out: str | None
    format: str | None
    labels: str

    def __post_init__(self):
        for name, value, allowed in (
            ("model", self.model, MODELS),
            ("class", self.klass, CLASSES),
            ("method", self.method, METHODS),
            ("labels", self.labels, LABELS),
        ):
            if value not in allowed:
                raise UsageError(f"--{name} must be one of {', '.join(allowed)}; got {value!r}")
        if self.format is not None and self.format not in FORMATS:
            raise UsageError(f"--format must be one of {', '.join(FORMATS)}")
        if not isinstance(self.samples, int) or self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if self.grid is not None and (not isinstance(self.grid, int) or self.grid < 1):
            raise UsageError("--grid must be >= 1")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")

    @property
    def models(self) -> list[Model]:
        return list(Model) if self.model == "all" else [Model(self.model)]

    @property
    def classes(self) -> list[ClassFilter]:
        return list(ClassFilter) if self.klass == "all-three" else [ClassFilter(self.klass)]

    def grid_for(self, method: str) -> int:
        if self.grid is not None:
            return self.grid
        return coverage.DEFAULT_ORACLE_R if method == "oracle" else coverage.DEFAULT_EMPIRICAL_R


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--model")
    p.add_argument("--class", dest="class_")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--grid", type=int)
    p.add_argument("--method")
    p.add_argument("--out")
    p.add_argument("--format")
    p.add_argument("--config")
    p.add_argument("--labels")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="catdilemma", description="Cat's Dilemma strategy-space toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_common(sub.add_parser("sample", help="write sampled strategies and their images"))
    _add_common(sub.add_parser("coverage", help="triangle coverage fractions"))
    p = sub.add_parser("oracle", help="decide whether an optimal strategy exists at q")
    p.add_argument("q", nargs=3, type=float, metavar=("Q0", "Q1", "Q2"))
    _add_common(p)
    _add_common(sub.add_parser("figure", help="render ternary SVG panels"))
    _add_common(sub.add_parser("report", help="reproduce the coverage comparison table"))
    return parser


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def resolve(args: argparse.Namespace, default_samples: int) -> RunConfig:
    cfg = _load_config(args.config)
    flags = {
        "model": args.model,
        "class": args.class_,
        "samples": args.samples,
        "seed": args.seed,
        "grid": args.grid,
        "method": args.method,
        "out": args.out,
        "format": args.format,
        "labels": args.labels,
    }
    merged = {}
    for key, default in DEFAULTS.items():
        merged[key] = flags[key] if flags[key] is not None else cfg.get(key, default)
    if merged["samples"] is None:
        merged["samples"] = default_samples
    return RunConfig(
        model=merged["model"],
        klass=merged["class"],
        samples=merged["samples"],
        seed=merged["seed"],
        grid=merged["grid"],
        method=merged["method"],
        out=merged["out"],
        format=merged["format"],
        labels=merged["labels"],
    )


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_sample(cfg: RunConfig):
    fmt = cfg.format or "csv"
    if fmt not in ("csv", "json"):
        raise UsageError("sample writes csv or json")
    models = cfg.models
    if len(models) > 1 and cfg.out is None:
        raise UsageError("--model all needs --out (one file per model)")
    for model in models:
        recs = records.records(sample(model, cfg.samples, cfg.seed))
        text = records.to_csv(recs, model) if fmt == "csv" else records.to_jsonl(recs)
        out = cfg.out
        if len(models) > 1:
            p = Path(cfg.out)
            out = str(p.with_name(f"{p.stem}_{model.value}{p.suffix or '.' + fmt}"))
        _emit(text, out)


def coverage_reports(cfg: RunConfig) -> list[dict]:
    methods = ("oracle", "empirical") if cfg.method == "both" else (cfg.method,)
    reports = []
    for model in cfg.models:
        batch = None
        for method in methods:
            grid = coverage.build_grid(cfg.grid_for(method))
            for klass in cfg.classes:
                if method == "oracle":
                    rep = coverage.oracle_coverage(grid, model, klass)
                else:
                    if batch is None:
                        batch = sample(model, cfg.samples, cfg.seed)
                    rep = coverage.empirical_coverage(batch, grid, klass)
                reports.append(rep.to_dict())
    return reports


def cmd_coverage(cfg: RunConfig):
    if cfg.format not in (None, "json"):
        raise UsageError("coverage writes json")
    reports = coverage_reports(cfg)
    _emit(_dump(reports[0] if len(reports) == 1 else reports), cfg.out)


def oracle_verdict(q: FrequencyTriple, model: Model, klass: ClassFilter) -> dict:
    v = oracle.feasible(q, model, klass)
    out = {
        "q": list(q.as_tuple()),
        "model": model.value,
        "class": klass.value,
        "feasible": v.feasible,
        "witness": None,
        "witness_class": None,
        "residuals": None,
    }
    if v.feasible:
        out["witness"] = dict(zip(("alpha", "beta", "gamma"), v.witness.as_tuple()))
        out["witness_class"] = v.residuals["class"]
        out["residuals"] = {k: val for k, val in v.residuals.items() if k != "class"}
        if model is not Model.QUANT:
            out["residuals"].pop("sphere")
        if v.strategy is not None:
            out["strategy"] = list(v.strategy.x)
    return out


def parse_q(values) -> FrequencyTriple:
    q = [float(v) for v in values]
    if any(not math.isfinite(v) or v < 0 for v in q):
        raise UsageError("q components must be finite and nonnegative")
    total = sum(q)
    if abs(total - 1.0) > 1e-9:
        raise UsageError(f"q must sum to 1 (got {total!r})")
    return FrequencyTriple(*(v / total for v in q))


def cmd_oracle(cfg: RunConfig, q_values):
    q = parse_q(q_values)
    verdicts = [oracle_verdict(q, m, k) for m in cfg.models for k in cfg.classes]
    _emit(_dump(verdicts[0] if len(verdicts) == 1 else verdicts), cfg.out)


def figure_panels(cfg: RunConfig) -> dict[str, str]:
    """SVG text keyed by file name ``{model}_{class}.svg``."""
    panels = {}
    show_points = cfg.method in ("empirical", "both")
    show_cells = cfg.method in ("oracle", "both")
    grid = coverage.build_grid(cfg.grid_for("empirical"))
    for model in cfg.models:
        recs = records.records(sample(model, cfg.samples, cfg.seed)) if show_points else []
        for klass in cfg.classes:
            points = (
                records.surviving_points(recs, lambda r, k=klass: k.admits(r.klass))
                if show_points
                else None
            )
            mask = coverage.oracle_mask(grid, model, klass) if show_cells else None
            title = f"{svg.TITLES[klass.value]} ({model.value})"
            panels[f"{model.value}_{klass.value}.svg"] = svg.render_panel(
                points, grid if show_cells else None, mask, title=title, labels=cfg.labels
            )
    return panels


def cmd_figure(cfg: RunConfig):
    if cfg.format not in (None, "svg"):
        raise UsageError("figure writes svg")
    panels = figure_panels(cfg)
    out = Path(cfg.out or ".")
    if len(panels) == 1 and out.suffix == ".svg":
        _emit(next(iter(panels.values())), str(out))
        return
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {out}: {exc.strerror}") from exc
    for name, text in panels.items():
        _emit(text, str(out / name))


def report_text(rep: dict) -> str:
    lines = [
        f"oracle grid R={rep['oracle_resolution']}, empirical grid R={rep['empirical_resolution']}, "
        f"n={rep['samples']}, seed={rep['seed']}",
        f"{'model':<10} {'class':<13} {'ref.':>6} {'oracle':>7} {'delta':>7} {'empir.':>7} {'delta':>7}",
    ]
    for model, row in rep["rows"].items():
        for klass, cell in row.items():
            lines.append(
                f"{model:<10} {klass:<13} {cell['reference']:>6.0%} {cell['oracle']:>7.1%} "
                f"{100 * cell['oracle_delta']:>+6.1f}p {cell['empirical']:>7.1%} "
                f"{100 * cell['empirical_delta']:>+6.1f}p"
            )
    lines.append(
        f"prequant vs classical empirical, max |delta|: "
        f"{100 * rep['prequant_classical_empirical_max_delta']:.2f}pp"
    )
    return "\n".join(lines) + "\n"


def cmd_report(cfg: RunConfig):
    rep = coverage.coverage_table(oracle_R=cfg.grid_for("oracle"), n=cfg.samples, seed=cfg.seed)
    if cfg.format == "json":
        _emit(_dump(rep), cfg.out)
        return
    if cfg.format is not None:
        raise UsageError("report writes text to stdout and json via --out or --format json")
    sys.stdout.write(report_text(rep))
    if cfg.out is not None:
        _emit(_dump(rep), cfg.out)


_DEFAULT_SAMPLES = {
    "sample": 10_000,
    "coverage": 100_000,
    "oracle": 1,
    "figure": 10_000,
    "report": 100_000,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args, _DEFAULT_SAMPLES[args.command])
        if args.command == "sample":
            cmd_sample(cfg)
        elif args.command == "coverage":
            cmd_coverage(cfg)
        elif args.command == "oracle":
            cmd_oracle(cfg, args.q)
        elif args.command == "figure":
            cmd_figure(cfg)
        else:
            cmd_report(cfg)
    except (UsageError, ValueError) as exc:
        print(f"catdilemma: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"catdilemma: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
