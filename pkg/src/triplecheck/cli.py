"""Command-line driver: validate, evaluate, check-tables.

Settings resolve with the precedence flags > environment > config file >
built-in defaults. The config file is plain ``key=value`` lines ('#'
comments allowed) whose keys mirror the long flag names without the dashes,
e.g. ``endpoint=http://localhost:8000/v1``.

Exit codes: 0 success, 1 configuration or usage error, 2 when more than 10%
of triples could not be validated (schema retries or transport exhausted).
The INVALID verdict is a normal result and never affects the exit code.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Any, Sequence

from .backend import BackendConfig, OpenAIChatBackend, mock_backend
from .datasets import DatasetError, label_balance, load_dataset, sample_subset
from .evaluation import (
    AbstainPolicy,
    RecordOutcome,
    build_report,
    table_consistency_check,
)
from .pipeline import ItemResult, validate_many
from .providers import ContextService, ProviderConfig
from .retrieval import RemoteEmbeddingProvider
from .tables import REPORTED_ROWS
from .types import Triple

logger = logging.getLogger(__name__)

FAILURE_EXIT_FRACTION = 0.10

VALIDATOR_FLAG_TO_KIND = {
    "world": "world_knowledge",
    "corpus": "corpus",
    "wikidata": "wikidata",
    "web": "web",
    "wikidata-web": "wikidata_web",
    "wikipedia-wikidata": "wikipedia_wikidata",
}

_DEFAULTS: dict[str, Any] = {
    "format": "auto",
    "sample_n": 150,
    "seed": 42,
    "validator": "world",
    "model": "gpt-3.5-turbo-0125",
    "endpoint": "https://api.openai.com/v1",
    "k": 4,
    "web_results": 5,
    "abstain": "invalid",
    "concurrency": 4,
    "max_retries": 3,
    "wikidata_url": "https://www.wikidata.org",
    "wikipedia_url": "https://en.wikipedia.org",
}

_ENV_KEYS = {
    "endpoint": "LLM_ENDPOINT",
    "model": "LLM_MODEL",
    "search_endpoint": "WEB_SEARCH_ENDPOINT",
}

_INT_KEYS = {"sample_n", "seed", "k", "web_results", "concurrency", "max_retries"}


class ConfigError(ValueError):
    pass


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for line_no, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{line_no}: expected key=value")
                key, _, value = line.partition("=")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def _resolve(args: argparse.Namespace) -> dict[str, Any]:
    """Merge defaults, config file, environment, and flags (highest wins)."""
    settings: dict[str, Any] = dict(_DEFAULTS)
    if getattr(args, "config", None):
        settings.update(_read_config_file(args.config))
    for key, env_name in _ENV_KEYS.items():
        value = os.environ.get(env_name)
        if value:
            settings[key] = value
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            settings[key] = value
    for key in _INT_KEYS & settings.keys():
        try:
            settings[key] = int(settings[key])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{key} must be an integer, got {settings[key]!r}") from exc
    return settings


def _sniff_format(path: str, fmt: str) -> str:
    if fmt != "auto":
        return fmt
    if path.endswith(".tsv"):
        return "tsv"
    if path.endswith(".jsonl"):
        return "jsonl"
    raise ConfigError(f"cannot infer format from {path!r}; pass --format tsv|jsonl")


def _build_backend(settings: dict[str, Any]):
    script_path = settings.get("mock_script")
    if script_path:
        responses: list[str] = []
        try:
            with open(script_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        responses.append(json.loads(line)["response"])
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot read mock script {script_path}: {exc}") from exc
        if not responses:
            raise ConfigError(f"mock script {script_path} is empty")
        return mock_backend(responses)
    config = BackendConfig(
        endpoint_url=settings["endpoint"],
        model_name=settings["model"],
        max_retries=settings["max_retries"],
    )
    return OpenAIChatBackend(config, max_in_flight=settings["concurrency"])


def _build_embedder(settings: dict[str, Any]):
    endpoint = os.environ.get("EMBED_ENDPOINT") or settings.get("embed_endpoint")
    if not endpoint:
        return None  # ContextService falls back to the offline hash provider
    model = os.environ.get("EMBED_MODEL", "text-embedding-3-small")
    dimension = int(os.environ.get("EMBED_DIM", "1536"))
    return RemoteEmbeddingProvider(endpoint, model, dimension)


def _build_service(settings: dict[str, Any]) -> ContextService:
    kind = VALIDATOR_FLAG_TO_KIND.get(settings["validator"])
    if kind is None:
        raise ConfigError(
            f"unknown validator {settings['validator']!r}; "
            f"expected one of {sorted(VALIDATOR_FLAG_TO_KIND)}"
        )
    if kind in ("web", "wikidata_web") and not settings.get("search_endpoint"):
        raise ConfigError(
            "the web validator needs a search endpoint "
            "(--search-endpoint or WEB_SEARCH_ENDPOINT)"
        )
    corpus_paths = settings.get("corpus") or ()
    if isinstance(corpus_paths, str):
        corpus_paths = (corpus_paths,)
    try:
        provider_config = ProviderConfig(
            kind=kind,
            k=settings["k"],
            corpus_paths=tuple(corpus_paths),
            web_results=settings["web_results"],
            cache_dir=settings.get("cache_dir"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return ContextService(
        provider_config,
        embedder=_build_embedder(settings),
        wikidata_host=settings["wikidata_url"],
        wikipedia_host=settings["wikipedia_url"],
        search_endpoint=settings.get("search_endpoint"),
    )


def _result_line(result: ItemResult, extra: dict[str, Any] | None = None) -> str:
    if result.validated is not None:
        doc = result.validated.to_wire()
    else:
        doc = {
            "predicted_subject_name": result.triple.subject,
            "predicted_relation": (
                result.triple.relations[0]
                if len(result.triple.relations) == 1
                else list(result.triple.relations)
            ),
            "predicted_object_name": result.triple.object,
            "error": result.error,
        }
    doc["fallback_used"] = result.bundle.fallback_used
    if extra:
        doc.update(extra)
    return json.dumps(doc, ensure_ascii=False, sort_keys=True)


def _failure_exit(results: Sequence[ItemResult]) -> int:
    failed = sum(1 for r in results if not r.ok)
    if results and failed / len(results) > FAILURE_EXIT_FRACTION:
        logger.error("%d of %d triples failed validation", failed, len(results))
        return 2
    return 0


def _read_input_triples(path: str | None) -> list[Triple]:
    stream = sys.stdin if path in (None, "-") else open(path, encoding="utf-8")
    triples: list[Triple] = []
    try:
        for line_no, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line:
                continue
            doc = json.loads(line)
            relation = doc["predicted_relation"]
            relations = (relation,) if isinstance(relation, str) else tuple(relation)
            triples.append(
                Triple(
                    subject=doc["predicted_subject_name"],
                    relations=relations,
                    object=doc["predicted_object_name"],
                )
            )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad input triple on line {line_no}: {exc}") from exc
    finally:
        if stream is not sys.stdin:
            stream.close()
    return triples


def cmd_validate(settings: dict[str, Any]) -> int:
    triples = _read_input_triples(settings.get("triples"))
    if not triples:
        raise ConfigError("no input triples")
    service = _build_service(settings)
    backend = _build_backend(settings)
    results = validate_many(
        triples,
        service,
        backend,
        max_retries=settings["max_retries"],
        concurrency=settings["concurrency"],
    )
    out_path = settings.get("out")
    lines = [_result_line(r) for r in results]
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line)
    return _failure_exit(results)


def cmd_evaluate(settings: dict[str, Any]) -> int:
    dataset_path = settings.get("dataset")
    if not dataset_path:
        raise ConfigError("--dataset is required for evaluate")
    fmt = _sniff_format(dataset_path, settings["format"])
    records = load_dataset(dataset_path, fmt)
    subset = sample_subset(
        records,
        settings["sample_n"],
        settings["seed"],
        balanced=bool(settings.get("balanced")),
    )
    positives, negatives = label_balance(subset)
    logger.info("evaluating %d records (%d positive / %d negative)", len(subset), positives, negatives)

    service = _build_service(settings)
    backend = _build_backend(settings)
    results = validate_many(
        [r.triple for r in subset],
        service,
        backend,
        max_retries=settings["max_retries"],
        concurrency=settings["concurrency"],
    )

    policy = AbstainPolicy.AS_EXCLUDED if settings["abstain"] == "exclude" else AbstainPolicy.AS_INVALID
    outcomes = [
        RecordOutcome(
            record_id=record.record_id,
            verdict=result.validated.verdict,
            gold=bool(record.triple.gold_label),
            fallback_used=result.bundle.fallback_used,
        )
        for record, result in zip(subset, results)
        if result.validated is not None
    ]
    report = build_report(outcomes, policy)

    out_path = settings.get("out")
    if out_path:
        lines = [
            _result_line(result, extra={"record_id": record.record_id, "gold": bool(record.triple.gold_label)})
            for record, result in zip(subset, results)
        ]
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        summary = {
            "dataset": subset[0].dataset_name if subset else "",
            "validator": settings["validator"],
            "model": settings["model"],
            "counts": {
                "tp": report.counts.tp,
                "fp": report.counts.fp,
                "tn": report.counts.tn,
                "fn": report.counts.fn,
            },
            "abstained": report.counts.abstained,
            "metrics": {
                "precision": report.metrics.precision,
                "recall": report.metrics.recall,
                "f1": report.metrics.f1,
                "accuracy": report.metrics.accuracy,
            },
            "failures": sum(1 for r in results if not r.ok),
            "label_balance": {"positive": positives, "negative": negatives},
            "config": {
                "sample_n": settings["sample_n"],
                "seed": settings["seed"],
                "k": settings["k"],
                "web_results": settings["web_results"],
                "abstain": settings["abstain"],
                "concurrency": settings["concurrency"],
            },
        }
        report_path = os.path.splitext(out_path)[0] + ".report.json"
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True, ensure_ascii=False)
            fh.write("\n")

    m = report.metrics
    print(
        f"P={m.precision:.2f} R={m.recall:.2f} F1={m.f1:.2f} Acc={m.accuracy:.2f} "
        f"(tp={report.counts.tp} fp={report.counts.fp} tn={report.counts.tn} "
        f"fn={report.counts.fn} abstained={report.counts.abstained})"
    )
    return _failure_exit(results)


def cmd_check_tables(settings: dict[str, Any]) -> int:
    rows = [(r.precision, r.recall, r.f1) for r in REPORTED_ROWS]
    labels = [r.label for r in REPORTED_ROWS]
    violations = table_consistency_check(rows, labels=labels)
    for v in violations:
        p, r, f1 = v.row
        print(
            f"VIOLATION {v.label}: P={p} R={r} F1={f1} "
            f"implies F1={v.implied_f1:.4f} (off by {v.deviation:.4f})"
        )
    print(f"{len(rows)} rows checked, {len(violations)} violations")
    return 1 if violations else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triplecheck",
        description="Validate knowledge-graph triples with an LLM backend and evidence providers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key=value config file (lowest precedence)")
        p.add_argument("--validator", choices=sorted(VALIDATOR_FLAG_TO_KIND))
        p.add_argument("--model")
        p.add_argument("--endpoint", help="OpenAI-compatible chat completions base URL")
        p.add_argument("--mock-script", dest="mock_script", help="JSONL of canned responses instead of a live backend")
        p.add_argument("--k", type=int, help="evidence chunks per triple")
        p.add_argument("--web-results", dest="web_results", type=int)
        p.add_argument("--corpus", action="append", help="corpus file or directory (repeatable)")
        p.add_argument("--cache-dir", dest="cache_dir")
        p.add_argument("--out")
        p.add_argument("--concurrency", type=int)
        p.add_argument("--max-retries", dest="max_retries", type=int)
        p.add_argument("--wikidata-url", dest="wikidata_url")
        p.add_argument("--wikipedia-url", dest="wikipedia_url")
        p.add_argument("--search-endpoint", dest="search_endpoint")

    p_validate = sub.add_parser("validate", help="validate triples from a JSONL file or stdin")
    p_validate.add_argument("--triples", help="input JSONL path (default stdin)")
    add_common(p_validate)

    p_eval = sub.add_parser("evaluate", help="run a labeled dataset and report metrics")
    p_eval.add_argument("--dataset")
    p_eval.add_argument("--format", choices=["auto", "tsv", "jsonl"])
    p_eval.add_argument("--sample-n", dest="sample_n", type=int)
    p_eval.add_argument("--seed", type=int)
    p_eval.add_argument("--balanced", action="store_true", default=None)
    p_eval.add_argument("--abstain", choices=["invalid", "exclude"])
    add_common(p_eval)

    sub.add_parser("check-tables", help="verify the bundled benchmark rows against the F1 identity")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check-tables":
            return cmd_check_tables({})
        settings = _resolve(args)
        if args.command == "validate":
            return cmd_validate(settings)
        return cmd_evaluate(settings)
    except (ConfigError, DatasetError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
