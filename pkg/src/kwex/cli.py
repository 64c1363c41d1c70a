"""Command-line entry point for reproducible extraction/evaluation runs.

Every artifact-producing subcommand writes ``<output>.manifest.json`` with
the fully resolved configuration; re-running from a manifest reproduces
the outputs byte for byte.  Exit codes: 0 success, 1 usage error, 2 data
error.
"""

from __future__ import annotations

import functools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from . import __version__
from .candidates import bundled_stopwords, load_stopwords
from .corpus import CorpusError, Document, compute_vocab_stats, load_corpus
from .evaluation import (
    EvalError,
    evaluate_run,
    load_reports_json,
    parse_rank,
    write_reports_json,
    write_reports_tsv,
)
from .extract_embed import PrecomputedEmbeddings, WordVectorProvider, keybert_rank
from .extract_stat import (
    ExtractorConfig,
    build_idf_table,
    build_term_table,
    cvalue_rank,
    first_phrases_rank,
    ncvalue_rank,
    textrank_rank,
    tfidf_rank,
)
from .predictions import read_predictions_jsonl, write_predictions_jsonl
from .split import iterative_stratified_split, load_split, save_split

METHODS = ("tfidf", "textrank", "firstphrases", "cvalue", "ncvalue", "keybert")


def _write_manifest(output: str, subcommand: str, config: dict) -> None:
    manifest = {"tool": "kwex", "version": __version__, "subcommand": subcommand, "config": config}
    path = Path(str(output) + ".manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")


def manifest_to_argv(manifest_path: str | Path) -> list[str]:
    """Rebuild the exact command line recorded in a manifest."""
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    argv = [manifest["subcommand"]]
    for key, value in sorted(manifest["config"].items()):
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        elif isinstance(value, list):
            for item in value:
                argv.extend([flag, str(item)])
        elif value is not None:
            argv.extend([flag, str(value)])
    return argv


def _resolve_stopwords(spec: str | None) -> frozenset[str]:
    if spec is None or spec == "none":
        return frozenset()
    if spec in ("pl", "en"):
        return bundled_stopwords(spec)
    return load_stopwords(spec)


def _load_docs(corpus: str, strictness: str, underscores_as_spaces: bool) -> list[Document]:
    docs, skipped = load_corpus(corpus, strictness, underscores_as_spaces)
    if skipped:
        click.echo(f"skipped {len(skipped)} malformed line(s)", err=True)
    if not docs:
        raise CorpusError(f"empty corpus: {corpus}")
    return docs


def _parse_ratios(spec: str) -> dict[str, float]:
    ratios = {}
    for part in spec.split(","):
        name, _, value = part.partition("=")
        if not name or not value:
            raise click.UsageError(f"bad --ratios entry: {part!r}")
        ratios[name.strip()] = float(value)
    return ratios


@click.group()
def cli() -> None:
    """Keyword extraction and ranked evaluation."""


@cli.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--output", required=True, type=click.Path(dir_okay=False))
@click.option("--strictness", type=click.Choice(["strict", "skip_invalid"]), default="strict", show_default=True)
@click.option("--min-docs", "min_docs", multiple=True, type=int, help="Extra thresholds for count_with_min_docs.")
@click.option("--underscores-as-spaces", is_flag=True, default=False)
def stats(corpus, output, strictness, min_docs, underscores_as_spaces) -> None:
    """Vocabulary statistics over all documents and those with keywords."""
    docs = _load_docs(corpus, strictness, underscores_as_spaces)
    queries = tuple(sorted({2, 10, *min_docs}))
    with_kw = [d for d in docs if d.keywords_normalized]
    payload = {
        "all_documents": compute_vocab_stats(docs).to_json_dict(queries),
        "documents_with_keywords": compute_vocab_stats(with_kw).to_json_dict(queries),
    }
    with open(output, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")
    _write_manifest(
        output,
        "stats",
        {
            "corpus": corpus,
            "output": output,
            "strictness": strictness,
            "min_docs": sorted(min_docs),
            "underscores_as_spaces": underscores_as_spaces,
        },
    )


@cli.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--output", required=True, type=click.Path(dir_okay=False))
@click.option("--ratios", default="train=0.7,test=0.3", show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--strictness", type=click.Choice(["strict", "skip_invalid"]), default="strict", show_default=True)
@click.option("--underscores-as-spaces", is_flag=True, default=False)
def split(corpus, output, ratios, seed, strictness, underscores_as_spaces) -> None:
    """Iterative-stratified split into train/dev/test folds."""
    docs = _load_docs(corpus, strictness, underscores_as_spaces)
    assignment = iterative_stratified_split(docs, _parse_ratios(ratios), seed)
    save_split(assignment, output)
    _write_manifest(
        output,
        "split",
        {
            "corpus": corpus,
            "output": output,
            "ratios": ratios,
            "seed": seed,
            "strictness": strictness,
            "underscores_as_spaces": underscores_as_spaces,
        },
    )


_EXTRACT_STATE: dict = {}


def _extract_one(doc: Document, method: str):
    state = _EXTRACT_STATE
    config: ExtractorConfig = state["config"]
    k = state["k"]
    if method == "tfidf":
        return tfidf_rank(doc, state["idf"], k, config)
    if method == "textrank":
        return textrank_rank(
            doc, k, config,
            window=state["window"], damping=state["damping"],
            tol=state["tol"], max_iter=state["max_iter"],
        )
    if method == "firstphrases":
        return first_phrases_rank(doc, k, config)
    if method == "cvalue":
        return cvalue_rank(doc, state["table"], k, config, max_len=state["max_phrase_len"])
    if method == "ncvalue":
        return ncvalue_rank(
            doc, state["table"], k, config,
            alpha=state["alpha"], beta=state["beta"], max_len=state["max_phrase_len"],
        )
    if method == "keybert":
        return keybert_rank(
            doc, state["provider"], k,
            n_range=(config.n_min, config.n_max), mode=state["mode"],
            diversity=state["diversity"], mss_pool=state["mss_pool"],
            stopwords=config.stopwords, use_lemmas=config.use_lemmas,
            precomputed=state["precomputed"],
        )
    raise ValueError(f"unknown method: {method}")


def _run_extraction(docs: list[Document], method: str, jobs: int):
    worker = functools.partial(_extract_one, method=method)
    if jobs <= 1:
        return [worker(doc) for doc in docs]
    # Fork inherits _EXTRACT_STATE; map preserves input order.
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, docs, chunksize=16))


def _extract_options(fn):
    for deco in reversed(
        [
            click.option("--method", required=True, type=click.Choice(METHODS)),
            click.option("--output", required=True, type=click.Path(dir_okay=False)),
            click.option("--k", default="10", show_default=True, help='Predictions per document, or "all".'),
            click.option("--ngram-min", type=int, default=1, show_default=True),
            click.option("--ngram-max", type=int, default=None,
                         help="Max candidate length [default: 5; keybert: 2]."),
            click.option("--max-phrase-len", type=int, default=5, show_default=True,
                         help="Chunk length cap for cvalue/ncvalue."),
            click.option("--stopwords", default="pl", show_default=True,
                         help='Stopword list: "pl", "en", "none" or a file path.'),
            click.option("--use-lemmas", is_flag=True, default=False,
                         help="Use the lemma_text corpus field when present."),
            click.option("--window", type=int, default=4, show_default=True, help="TextRank window."),
            click.option("--damping", type=float, default=0.85, show_default=True),
            click.option("--tol", type=float, default=1e-6, show_default=True),
            click.option("--max-iter", type=int, default=100, show_default=True),
            click.option("--vectors", type=click.Path(exists=True, dir_okay=False), default=None,
                         help="Word-vector file (required for keybert)."),
            click.option("--embeddings", type=click.Path(exists=True, dir_okay=False), default=None,
                         help="Precomputed document/candidate embedding JSONL."),
            click.option("--mode", type=click.Choice(["mmr", "mss"]), default="mmr", show_default=True),
            click.option("--diversity", type=float, default=0.7, show_default=True),
            click.option("--mss-pool", type=int, default=20, show_default=True),
            click.option("--alpha", type=float, default=0.8, show_default=True, help="NC-value C weight."),
            click.option("--beta", type=float, default=0.2, show_default=True, help="NC-value context weight."),
            click.option("--context-window", type=int, default=5, show_default=True),
            click.option("--seed", type=int, default=42, show_default=True),
            click.option("--jobs", type=int, default=1, show_default=True),
        ]
    ):
        fn = deco(fn)
    return fn


def _prepare_extract_state(docs, idf_docs, method, opts) -> None:
    if opts["ngram_max"] is None:
        opts["ngram_max"] = 2 if method == "keybert" else 5
    config = ExtractorConfig(
        stopwords=_resolve_stopwords(opts["stopwords"]),
        n_min=opts["ngram_min"],
        n_max=opts["ngram_max"],
        use_lemmas=opts["use_lemmas"],
    )
    if opts["k"] != "all" and not opts["k"].isdigit():
        raise click.UsageError(f'--k must be a positive integer or "all", got {opts["k"]!r}')
    k = None if opts["k"] == "all" else int(opts["k"])
    state = {
        "config": config,
        "k": k,
        "window": opts["window"],
        "damping": opts["damping"],
        "tol": opts["tol"],
        "max_iter": opts["max_iter"],
        "mode": opts["mode"],
        "diversity": opts["diversity"],
        "mss_pool": opts["mss_pool"],
        "alpha": opts["alpha"],
        "beta": opts["beta"],
        "max_phrase_len": opts["max_phrase_len"],
    }
    if method == "tfidf":
        state["idf"] = build_idf_table(idf_docs, config)
    if method in ("cvalue", "ncvalue"):
        state["table"] = build_term_table(
            docs, config, max_len=opts["max_phrase_len"], context_window=opts["context_window"]
        )
    if method == "keybert":
        if not opts["vectors"] and not opts["embeddings"]:
            raise click.UsageError("method keybert requires --vectors")
        if opts["vectors"]:
            state["provider"] = WordVectorProvider.load(opts["vectors"])
        else:
            state["provider"] = WordVectorProvider(vectors={}, dimension=0)
        state["precomputed"] = (
            PrecomputedEmbeddings.load(opts["embeddings"]) if opts["embeddings"] else None
        )
    _EXTRACT_STATE.clear()
    _EXTRACT_STATE.update(state)


@cli.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--split", "split_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Restrict extraction to one fold of this split.")
@click.option("--fold", default="test", show_default=True)
@click.option("--train-fold", default="train", show_default=True, help="Fold feeding the TfIdf idf table.")
@click.option("--strictness", type=click.Choice(["strict", "skip_invalid"]), default="strict", show_default=True)
@click.option("--underscores-as-spaces", is_flag=True, default=False)
@_extract_options
def extract(corpus, split_path, fold, train_fold, strictness, underscores_as_spaces, **opts) -> None:
    """Run a native extractor over a corpus (or one fold of it)."""
    docs = _load_docs(corpus, strictness, underscores_as_spaces)
    target_docs = docs
    idf_docs = docs
    if split_path:
        assignment = load_split(split_path)
        if fold not in assignment.fold_ids:
            raise EvalError(f"split has no fold {fold!r}")
        wanted = set(assignment.fold_ids[fold])
        target_docs = [d for d in docs if d.id in wanted]
        train_ids = set(assignment.fold_ids.get(train_fold, []))
        if train_ids:
            idf_docs = [d for d in docs if d.id in train_ids]
    method = opts["method"]
    # The term table for C/NC-value spans the whole corpus: the score needs
    # more text than one abstract provides.
    _prepare_extract_state(docs, idf_docs, method, opts)
    predictions = _run_extraction(target_docs, method, opts["jobs"])
    write_predictions_jsonl(predictions, opts["output"])
    _write_manifest(
        opts["output"],
        "extract",
        {
            "corpus": corpus,
            "split": split_path,
            "fold": fold,
            "train_fold": train_fold,
            "strictness": strictness,
            "underscores_as_spaces": underscores_as_spaces,
            **{key: opts[key] for key in sorted(opts)},
        },
    )


@cli.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--split", "split_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--predictions", "prediction_files", required=True, multiple=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--output-prefix", required=True)
@click.option("--scenario", type=click.Choice(["full_vocab", "min_freq_10", "train_vocab_restricted"]),
              default="full_vocab", show_default=True)
@click.option("--ranks", default="1,3,5", show_default=True, help='Comma-separated ranks; "all" allowed.')
@click.option("--macro-mode", type=click.Choice(["gold_only", "gold_union_predicted", "samples"]),
              default="gold_only", show_default=True)
@click.option("--min-count", type=int, default=10, show_default=True)
@click.option("--filter-predictions", is_flag=True, default=False,
              help="In min_freq_10, also drop low-frequency predicted labels.")
@click.option("--test-fold", default="test", show_default=True)
@click.option("--train-fold", default="train", show_default=True)
@click.option("--strictness", type=click.Choice(["strict", "skip_invalid"]), default="strict", show_default=True)
@click.option("--underscores-as-spaces", is_flag=True, default=False,
              help="Fold underscores in ingested prediction labels.")
def evaluate(corpus, split_path, prediction_files, output_prefix, scenario, ranks, macro_mode,
             min_count, filter_predictions, test_fold, train_fold, strictness,
             underscores_as_spaces) -> None:
    """Evaluate one or more prediction files against the test fold."""
    docs = _load_docs(corpus, strictness, False)
    assignment = load_split(split_path)
    try:
        rank_list = tuple(parse_rank(r.strip()) for r in ranks.split(","))
    except ValueError:
        raise click.UsageError(f'--ranks must be comma-separated integers or "all", got {ranks!r}')
    reports = []
    for pred_file in prediction_files:
        predictions = read_predictions_jsonl(pred_file, underscores_as_spaces=underscores_as_spaces)
        reports.append(
            evaluate_run(
                docs,
                assignment,
                predictions,
                scenario=scenario,
                ranks=rank_list,
                macro_mode=macro_mode,
                min_count=min_count,
                filter_predictions=filter_predictions,
                test_fold=test_fold,
                train_fold=train_fold,
            )
        )
    tsv_path = output_prefix + ".tsv"
    json_path = output_prefix + ".json"
    write_reports_tsv(reports, tsv_path)
    write_reports_json(reports, json_path)
    _write_manifest(
        output_prefix,
        "evaluate",
        {
            "corpus": corpus,
            "split": split_path,
            "predictions": list(prediction_files),
            "output_prefix": output_prefix,
            "scenario": scenario,
            "ranks": ranks,
            "macro_mode": macro_mode,
            "min_count": min_count,
            "filter_predictions": filter_predictions,
            "test_fold": test_fold,
            "train_fold": train_fold,
            "strictness": strictness,
            "underscores_as_spaces": underscores_as_spaces,
        },
    )


@cli.command()
@click.option("--counts", "counts_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="JSON report written by evaluate.")
@click.option("--output", required=True, type=click.Path(dir_okay=False))
def report(counts_path, output) -> None:
    """Regenerate the TSV report from stored evaluation JSON."""
    write_reports_tsv(load_reports_json(counts_path), output)
    _write_manifest(output, "report", {"counts": counts_path, "output": output})


@cli.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@_extract_options
def transfer(inputs, **opts) -> None:
    """Ad-hoc extraction from plain UTF-8 text files (id = filename)."""
    docs = []
    for path in inputs:
        text = Path(path).read_text(encoding="utf-8")
        if not text.strip():
            raise CorpusError(f"empty input file: {path}")
        docs.append(Document.create(id=Path(path).name, title="", abstract=text))
    method = opts["method"]
    _prepare_extract_state(docs, docs, method, opts)
    predictions = _run_extraction(docs, method, opts["jobs"])
    write_predictions_jsonl(predictions, opts["output"])
    _write_manifest(
        opts["output"],
        "transfer",
        {"inputs": list(inputs), **{key: opts[key] for key in sorted(opts)}},
    )


def main(argv: list[str] | None = None) -> int:
    """Run the CLI; returns an exit code instead of raising SystemExit."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except (CorpusError, EvalError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
