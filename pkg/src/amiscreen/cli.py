"""Operator command line: select | train | evaluate | predict | serve.

Every flag can be preset through the environment with the AMISCRN_ prefix
(e.g. AMISCRN_SEED=7). All randomness flows from --seed; no command reads
system entropy, so reruns with identical flags reproduce identical files.

Exit codes: 1 usage, 2 schema/ingestion error, 3 selector error,
4 training convergence failure, 5 artifact/schema hash mismatch,
6 bad answers file.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .artifact import ModelArtifact
from .data import load_csv
from .errors import ConvergenceError, ParseError, SchemaError, StratificationError
from .evaluation import EvaluationReport
from .pipeline import (
    DEFAULT_KS,
    PipelineConfig,
    encode_answer_rows,
    evaluate_artifact,
    train_pipeline,
)
from .schema import (
    DEFAULT_SCHEMA,
    LABEL_ENCODING,
    NEGATIVE_LABEL,
    POSITIVE_LABEL,
    schema_from_dict,
    schema_hash,
)
from .selection import sweep_k

ENV_PREFIX = "AMISCRN_"

EXIT_USAGE = 1
EXIT_SCHEMA = 2
EXIT_SELECTOR = 3
EXIT_CONVERGENCE = 4
EXIT_HASH_MISMATCH = 5
EXIT_ANSWERS = 6


def _env_default(name: str, fallback=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), fallback)


def _load_schema(path):
    if not path:
        return DEFAULT_SCHEMA
    with open(path, encoding="utf-8") as handle:
        return schema_from_dict(json.load(handle))


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _write_roc_csv(path: Path, report: EvaluationReport) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["fpr", "tpr"])
        for fpr, tpr in report.roc_points:
            writer.writerow([repr(fpr), repr(tpr)])


def _report_table(reports: dict[str, EvaluationReport]) -> str:
    headers = ["phase", "accuracy", "recall", "precision", "f1", "log_loss", "auc"]
    lines = ["".join(h.ljust(12) for h in headers)]
    for phase, r in reports.items():
        row = [phase] + [
            f"{getattr(r, name):.4f}" for name in headers[1:]
        ]
        lines.append("".join(cell.ljust(12) for cell in row))
    return "\n".join(lines)


def cmd_select(args) -> int:
    try:
        schema = _load_schema(args.schema)
        data = load_csv(args.data, schema)
    except (SchemaError, ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    ks = args.k or list(DEFAULT_KS)
    try:
        report = sweep_k(data, ks, args.vote_threshold)
    except (ValueError, ConvergenceError) as exc:
        print(f"selector error: {exc}", file=sys.stderr)
        return EXIT_SELECTOR
    out = Path(args.out) / "selection.json"
    _write_json(out, report.to_dict())
    for k, size in report.voted_sizes().items():
        print(f"K={k}: voted {size} features")
    print(f"wrote {out}")
    return 0


def cmd_train(args) -> int:
    from .model_selection import PRESET_GRIDS

    if args.family not in PRESET_GRIDS:
        print(f"unknown family {args.family!r}; expected one of {sorted(PRESET_GRIDS)}",
              file=sys.stderr)
        return EXIT_USAGE
    if args.grid and args.grid not in PRESET_GRIDS:
        print(f"unknown grid preset {args.grid!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        schema = _load_schema(args.schema)
        data = load_csv(args.data, schema)
    except (SchemaError, ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    mask = args.mask
    if mask not in ("default", "all"):
        mask = tuple(code.strip() for code in mask.split(","))
    config = PipelineConfig(
        family=args.family,
        grid=args.grid,
        n_folds=args.folds,
        test_fraction=args.test_fraction,
        seed=args.seed,
        mask=mask,
        stratify_folds=not args.no_stratify,
    )
    try:
        artifact, search, train, test = train_pipeline(data, config)
    except (SchemaError, StratificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ConvergenceError as exc:
        print(f"training failed to converge: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    artifact_path = out / "model.amiscrn"
    artifact.save(artifact_path)
    _write_json(out / "search.json", search.to_dict())
    n_candidates = len(search.candidates)
    score = search.best_mean_score
    print(f"family={args.family} candidates={n_candidates} "
          f"best_cv={'n/a' if score != score else f'{score:.4f}'}")
    print(f"train rows={train.n_rows} test rows={test.n_rows} mask={len(artifact.mask)} features")
    print(f"wrote {artifact_path}")
    return 0


def cmd_evaluate(args) -> int:
    try:
        schema = _load_schema(args.schema)
        data = load_csv(args.data, schema)
    except (SchemaError, ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        artifact = ModelArtifact.load(args.artifact)
    except (FileNotFoundError, ValueError) as exc:
        print(f"artifact error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    expected = artifact.schema_hash
    actual = schema_hash(data.schema)
    if expected != actual:
        print(
            f"schema hash mismatch: artifact expects {expected}, data has {actual}",
            file=sys.stderr,
        )
        return EXIT_HASH_MISMATCH

    from .data import stratified_split

    train, test = stratified_split(data, args.test_fraction, args.seed)
    reports = {
        "train": evaluate_artifact(artifact, train, "train"),
        "test": evaluate_artifact(artifact, test, "test"),
    }
    out = Path(args.out)
    for phase, report in reports.items():
        _write_json(out / f"report_{phase}.json", report.to_dict())
        _write_roc_csv(out / f"roc_{phase}.csv", report)
    print(_report_table(reports))
    print(f"wrote reports to {out}")
    return 0


def cmd_predict(args) -> int:
    try:
        artifact = ModelArtifact.load(args.artifact)
    except (FileNotFoundError, ValueError) as exc:
        print(f"artifact error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    schema = _load_schema(args.schema)
    with open(args.answers, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            return 0  # empty file: nothing to predict
        rows = [dict(r) for r in reader]
    if not rows:
        return 0
    try:
        X = encode_answer_rows(rows, artifact.mask, schema)
    except (SchemaError, ParseError) as exc:
        print(f"answers error: {exc}", file=sys.stderr)
        return EXIT_ANSWERS
    labels, proba = artifact.predict_encoded(X)
    for label, p in zip(labels, proba):
        name = POSITIVE_LABEL if label == LABEL_ENCODING[POSITIVE_LABEL] else NEGATIVE_LABEL
        print(f"{name} p={p[label]:.2f}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        artifact_path=args.artifact,
        catalog_path=args.catalog,
        serve_full_catalog=args.full_catalog,
    )
    host, _, port = args.bind.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amiscreen",
        description="Questionnaire screening toolkit: feature selection, training, "
        "evaluation, prediction, and the screening service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, data=False):
        if data:
            p.add_argument("--data", required=_env_default("data") is None,
                           default=_env_default("data"), help="CSV dataset path")
        p.add_argument("--schema", default=_env_default("schema"),
                       help="schema JSON path (default: built-in questionnaire schema)")
        p.add_argument("--seed", type=int, default=int(_env_default("seed", 0)))
        p.add_argument("--out", default=_env_default("out", "out"),
                       help="output directory")

    p_select = sub.add_parser("select", help="run the three selectors and the vote per K")
    add_common(p_select, data=True)
    p_select.add_argument("--k", type=int, action="append",
                          help="a K value to sweep (repeatable; default 10 15 20 25 30)")
    p_select.add_argument("--vote-threshold", type=int,
                          default=_env_default("vote_threshold"),
                          help="selectors that must agree (default: all three)")
    p_select.set_defaults(func=cmd_select)

    p_train = sub.add_parser("train", help="grid-search a family and export the artifact")
    add_common(p_train, data=True)
    p_train.add_argument("--family", default=_env_default("family", "SVM"))
    p_train.add_argument("--grid", default=_env_default("grid"),
                         help="preset grid name (default: the family's grid)")
    p_train.add_argument("--folds", type=int, default=int(_env_default("folds", 5)))
    p_train.add_argument("--test-fraction", type=float,
                         default=float(_env_default("test_fraction", 0.2)))
    p_train.add_argument("--mask", default=_env_default("mask", "default"),
                         help="'default' (shipped 20-item set), 'all', or a comma list of codes")
    p_train.add_argument("--no-stratify", action="store_true",
                         help="plain K-fold CV instead of stratified")
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("evaluate", help="score an artifact on the train/test split")
    add_common(p_eval, data=True)
    p_eval.add_argument("--artifact", required=True, help="trained artifact path")
    p_eval.add_argument("--test-fraction", type=float,
                        default=float(_env_default("test_fraction", 0.2)))
    p_eval.set_defaults(func=cmd_evaluate)

    p_pred = sub.add_parser("predict", help="predict rows from an answers CSV")
    p_pred.add_argument("--artifact", required=True)
    p_pred.add_argument("--answers", required=True, help="CSV of raw answers, one row per subject")
    p_pred.add_argument("--schema", default=_env_default("schema"))
    p_pred.set_defaults(func=cmd_predict)

    p_serve = sub.add_parser("serve", help="run the screening HTTP service")
    p_serve.add_argument("--artifact", default=_env_default("artifact"))
    p_serve.add_argument("--catalog", default=_env_default("catalog"))
    p_serve.add_argument("--bind", default=_env_default("bind", "127.0.0.1:8000"))
    p_serve.add_argument("--full-catalog", action="store_true",
                         help="serve every questionnaire item, not just the model's mask")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
