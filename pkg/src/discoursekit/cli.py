"""Command-line driver: each subcommand runs one pipeline stage against the
project workspace and records its artifacts in the manifest."""

from __future__ import annotations

import json
import sys
from dataclasses import replace

import click

from . import coherence as coh
from .colloc import collocates
from .corpus import (
    build_vocabulary,
    clean_document,
    filter_by_keywords,
    lemmatize,
    load_corpus,
    pos_tag,
    read_tokenized_jsonl,
    remove_stopwords,
    to_bow,
    write_tokenized_jsonl,
)
from .errors import DiscourseKitError, EmptyAfterCleaning, MissingSection
from .index import format_kwic_line
from .labeling import (
    SKIPPED,
    TopicCard,
    generate_topic_implication,
    retrieve_keyword_senses,
)
from .lda import LdaConfig, TopicKeywords, train_lda
from .merge import merge_topics
from .patterns import classify_slot_fillers, match_pattern
from .report import render_report
from .segment import tokenize
from .workspace import Workspace


def _corpus_records(docs):
    return "\n".join(json.dumps({
        "id": d.id, "source": d.source, "lang": d.lang,
        "date": d.published, "title": d.title, "body": d.body,
    }, ensure_ascii=False) for d in docs) + "\n"


def _docs_from_jsonl(path):
    return load_corpus(path, format="jsonl")


@click.group()
@click.option("--workspace", "-w", default=".", show_default=True,
              help="Workspace directory containing config.json")
@click.pass_context
def main(ctx, workspace):
    """Corpus discourse-analysis workbench."""
    ctx.obj = workspace


def _ws(ctx) -> Workspace:
    return Workspace(ctx.obj)


def run_cli(argv) -> int:
    """Programmatic entry point; returns the process exit code."""
    try:
        main(args=list(argv), standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 2
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except DiscourseKitError as exc:
        click.echo(json.dumps({"error": type(exc).__name__, "message": str(exc)}), err=True)
        return 1


@main.command()
@click.pass_context
def ingest(ctx):
    """Load, clean, tokenize, mask stopwords, lemmatize and POS-tag the corpus."""
    ws = _ws(ctx)
    cfg = ws.config
    if cfg.pretagged:
        tokenized = read_tokenized_jsonl(cfg.corpus_path)
    else:
        docs = load_corpus(cfg.corpus_path, format=cfg.corpus_format)
        rules = ws.cleaning_rules()
        cleaned = []
        for d in docs:
            try:
                cleaned.append(clean_document(d, rules))
            except EmptyAfterCleaning:
                click.echo(f"dropping {d.id}: empty after cleaning", err=True)
        ws.save_artifact("corpus.jsonl", _corpus_records(cleaned), "ingest")
        registry = ws.segmenters()
        stoplist = ws.stoplist()
        lemmas = ws.lemma_lexicon()
        tagger = ws.tagger()
        tokenized = []
        for d in cleaned:
            tdoc = tokenize(d, registry)
            tdoc = remove_stopwords(tdoc, stoplist, lang=d.lang)
            tdoc = lemmatize(tdoc, lemmas)
            tdoc = pos_tag(tdoc, tagger)
            tokenized.append(tdoc)
    path = ws.artifact_path("tokenized.jsonl")
    write_tokenized_jsonl(tokenized, path)
    ws.save_artifact("tokenized.jsonl", path.read_bytes(), "ingest")
    click.echo(f"ingested {len(tokenized)} documents")


@main.command("filter")
@click.option("--keyword", "keywords", multiple=True, help="Overrides config keywords")
@click.option("--min-count", type=int, default=None)
@click.pass_context
def filter_cmd(ctx, keywords, min_count):
    """Keep documents with enough query-keyword occurrences (title+body)."""
    ws = _ws(ctx)
    keywords = list(keywords) or ws.config.keywords
    min_count = min_count if min_count is not None else ws.config.min_count
    docs = _docs_from_jsonl(ws.artifact_path("corpus.jsonl"))
    kept = filter_by_keywords(docs, keywords, min_count)
    kept_ids = {d.id for d in kept}
    ws.save_artifact("corpus_filtered.jsonl", _corpus_records(kept), "filter",
                     {"corpus.jsonl": ws.artifact_hash("corpus.jsonl")})
    tokenized = read_tokenized_jsonl(ws.artifact_path("tokenized.jsonl"))
    tokenized = [t for t in tokenized if t.doc_id in kept_ids]
    path = ws.artifact_path("tokenized_filtered.jsonl")
    write_tokenized_jsonl(tokenized, path)
    ws.save_artifact("tokenized_filtered.jsonl", path.read_bytes(), "filter",
                     {"tokenized.jsonl": ws.artifact_hash("tokenized.jsonl")})
    click.echo(f"kept {len(kept)} of {len(docs)} documents")


def _lda_config(ws, k=None, seed=None, iterations=None):
    lda = ws.config.lda
    return LdaConfig(
        K=k if k is not None else int(lda.get("K", 10)),
        alpha=lda.get("alpha"),
        beta=float(lda.get("beta", 0.01)),
        iterations=iterations if iterations is not None else int(lda.get("iterations", 1000)),
        burn_in=int(lda.get("burn_in", 200)),
        seed=seed if seed is not None else int(lda.get("seed", 42)),
    )


def _bow(ws):
    corpus, src = ws.tokenized_corpus()
    vocab = build_vocabulary(corpus, min_df=ws.config.min_df)
    return to_bow(corpus, vocab), vocab, src


@main.command()
@click.option("--k", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--iterations", type=int, default=None)
@click.pass_context
def train(ctx, k, seed, iterations):
    """Train the LDA model and extract per-topic keywords."""
    ws = _ws(ctx)
    bow, vocab, src = _bow(ws)
    cfg = _lda_config(ws, k, seed, iterations)
    model = train_lda(bow, vocab, cfg)
    inputs = {src: ws.artifact_hash(src)}
    ws.save_artifact("model.json", json.dumps(model.to_snapshot(), ensure_ascii=False),
                     "train", inputs)
    topics = [{
        "topic_id": t,
        "keywords": [[w, v] for w, v in model.top_keywords(t, min(ws.config.top_keywords, len(vocab))).items],
    } for t in range(model.K)]
    ws.save_artifact("topics.json", json.dumps(topics, ensure_ascii=False, indent=1),
                     "train", {"model.json": ws.artifact_hash("model.json")})
    click.echo(f"trained K={cfg.K} over {len(bow)} documents, |V|={len(vocab)}")


@main.command()
@click.option("--kmin", type=int, default=None)
@click.option("--kmax", type=int, default=None)
@click.option("--metric", type=click.Choice(["umass", "npmi"]), default=None)
@click.option("--iterations", type=int, default=None)
@click.pass_context
def sweep(ctx, kmin, kmax, metric, iterations):
    """Train one model per topic count and emit the coherence curve CSV."""
    ws = _ws(ctx)
    bow, vocab, src = _bow(ws)
    cfg = _lda_config(ws, iterations=iterations)
    curve = coh.sweep_topic_count(
        bow, vocab,
        kmin if kmin is not None else ws.config.sweep_kmin,
        kmax if kmax is not None else ws.config.sweep_kmax,
        cfg, topN=ws.config.sweep_topn,
        metric=metric or ws.config.sweep_metric)
    ws.save_artifact("coherence.csv", curve.to_csv(), "sweep", {src: ws.artifact_hash(src)})
    click.echo(f"best_K={curve.best_K}")


@main.command()
@click.pass_context
def topics(ctx):
    """Print the trained topics with their keywords."""
    ws = _ws(ctx)
    data = json.loads(ws.load_artifact("topics.json").decode("utf-8"))
    for t in data:
        kws = ", ".join(f"{w} ({v:.3f})" for w, v in t["keywords"])
        click.echo(f"topic {t['topic_id']}: {kws}")


@main.command()
@click.option("--mapping", "mapping_file", required=True, type=click.Path(exists=True),
              help="JSON file {raw_topic_id: keep|drop|merge:<id>}")
@click.pass_context
def merge(ctx, mapping_file):
    """Merge/drop raw topics into analysis topics and seed topic cards."""
    ws = _ws(ctx)
    data = json.loads(ws.load_artifact("topics.json").decode("utf-8"))
    raw = [TopicKeywords(t["topic_id"], [tuple(kw) for kw in t["keywords"]]) for t in data]
    with open(mapping_file, encoding="utf-8") as fh:
        mapping = {int(k): v for k, v in json.load(fh).items()}
    ats = merge_topics(raw, mapping)
    out = {
        "merge_log": {str(k): v for k, v in ats.merge_log.items()},
        "dropped": ats.dropped,
        "topics": [{
            "analysis_id": t.analysis_id,
            "source_ids": t.source_ids,
            "keywords": [[w, v] for w, v in t.keywords],
            "provenance": t.provenance,
        } for t in ats.topics],
    }
    inputs = {"topics.json": ws.artifact_hash("topics.json")}
    ws.save_artifact("analysis_topics.json", json.dumps(out, ensure_ascii=False, indent=1),
                     "merge", inputs)
    cards = [TopicCard(topic_id=t.analysis_id,
                       keywords=t.keywords[:ws.config.top_keywords])
             for t in ats.topics]
    ws.save_cards(cards, "merge", inputs)
    click.echo(f"{len(raw)} raw topics -> {len(cards)} analysis topics "
               f"({len(ats.dropped)} dropped)")


@main.command()
@click.pass_context
def senses(ctx):
    """Stage 1: retrieve detailed keyword senses from the LLM."""
    ws = _ws(ctx)
    cards = ws.load_cards()
    client = ws.llm_client()
    isets = ws.instruction_sets()
    log = ws.exchange_log()
    out = [retrieve_keyword_senses(client, c, isets["I1"], log) if not c.senses else c
           for c in cards]
    ws.save_cards(out, "senses", {"cards.json": ws.artifact_hash("cards.json")})
    click.echo(f"senses retrieved for {len(out)} topics")


@main.command()
@click.option("--skip-missing", is_flag=True,
              help="Mark topics without an analyst description as explicitly skipped")
@click.pass_context
def label(ctx, skip_missing):
    """Stage 2: generate each topic's media-discourse implication."""
    ws = _ws(ctx)
    cards = ws.load_cards()
    client = ws.llm_client()
    isets = ws.instruction_sets()
    log = ws.exchange_log()
    out = []
    for c in cards:
        if c.manual_description is None and skip_missing:
            c = replace(c, manual_description=SKIPPED)
        if not c.implication:
            c = generate_topic_implication(client, c, isets["I2"], log)
        out.append(c)
    ws.save_cards(out, "label", {"cards.json": ws.artifact_hash("cards.json")})
    click.echo(f"implications generated for {len(out)} topics")


@main.command()
@click.option("--node", required=True)
@click.option("--window", type=int, default=5, show_default=True)
@click.option("--limit", type=int, default=None)
@click.pass_context
def kwic(ctx, node, window, limit):
    """Print concordance lines for a node word."""
    ws = _ws(ctx)
    index = ws.index()
    lines = index.kwic(node, window=window, limit=limit)
    for line in lines:
        click.echo(format_kwic_line(line))
    click.echo(f"{len(lines)} lines (frequency {index.frequency(node)})")


@main.command()
@click.option("--node", required=True)
@click.option("--window", type=int, default=5, show_default=True)
@click.option("--min-freq", type=int, default=1, show_default=True)
@click.option("--measure", type=click.Choice(["raw", "mi", "log_likelihood"]), default="raw")
@click.pass_context
def colloc(ctx, node, window, min_freq, measure):
    """Rank the collocates of a node word."""
    ws = _ws(ctx)
    for c in collocates(ws.index(), node, window=window, min_freq=min_freq, measure=measure):
        click.echo(f"{c.form}\t{c.stat:.4f}\t{c.freq}")


@main.command()
@click.option("--name", required=True, help="Pattern name from the configured pattern file")
@click.option("--node", required=True)
@click.option("--classify-slot", type=int, default=None,
              help="Classify this slot's fillers with the configured scheme")
@click.pass_context
def pattern(ctx, name, node, classify_slot):
    """Match a slot pattern around a node word, optionally classifying fillers."""
    ws = _ws(ctx)
    patterns = ws.patterns()
    if name not in patterns:
        raise MissingSection(f"pattern {name!r} not in configured pattern file")
    matches = match_pattern(ws.index(), patterns[name], node)
    ws.save_matches(matches, "pattern")
    click.echo(f"{len(matches)} matches for {name!r} around {node!r}")
    if classify_slot is not None:
        scheme = ws.scheme()
        if scheme is None:
            raise MissingSection("no scheme file configured")
        classified = classify_slot_fillers(matches, classify_slot, scheme)
        out = {
            "pattern": name,
            "slot": classify_slot,
            "classes": {label: {"count": count, "match_ids": [m.match_id for m in ms]}
                        for label, (count, ms) in classified.items()},
        }
        ws.save_artifact("pattern_analysis.json", json.dumps(out, ensure_ascii=False, indent=1),
                         "pattern", {"matches.json": ws.artifact_hash("matches.json")})
        for label, (count, _) in sorted(classified.items(), key=lambda kv: -kv[1][0]):
            click.echo(f"  {label}: {count}")


@main.command()
@click.option("--match-id", required=True)
@click.option("--label", "label_", required=True,
              type=click.Choice(["positive", "neutral", "negative"]))
@click.option("--annotator", required=True)
@click.option("--note", default="")
@click.pass_context
def annotate(ctx, match_id, label_, annotator, note):
    """Attach a semantic-prosody label to a pattern match."""
    ws = _ws(ctx)
    ws.annotation_store().annotate(match_id, label_, annotator, note)
    click.echo(f"annotated {match_id}: {label_}")


@main.command()
@click.option("--format", "fmt", type=click.Choice(["markdown", "csv"]), default="markdown")
@click.pass_context
def report(ctx, fmt):
    """Render the analysis report from topic cards and pattern analyses."""
    ws = _ws(ctx)
    cards = ws.load_cards() if ws.has_artifact("cards.json") else None
    pattern_sections = []
    if ws.has_artifact("pattern_analysis.json"):
        analysis = json.loads(ws.load_artifact("pattern_analysis.json").decode("utf-8"))
        by_id = {m.match_id: m for m in ws.load_matches()}
        classified = {label: (entry["count"], [by_id[i] for i in entry["match_ids"]])
                      for label, entry in analysis["classes"].items()}
        pattern_sections.append((analysis["pattern"], classified))
    prosody_sections = []
    store = ws.annotation_store()
    if store.known_matches():
        from .prosody import prosody_summary
        names = sorted({m.pattern_name for m in store.known_matches()})
        for name in names:
            prosody_sections.append((name, prosody_summary(store, pattern_name=name)))
    text = render_report(cards, pattern_sections, prosody_sections,
                         index=ws.index() if ws.has_artifact("tokenized.jsonl") else None,
                         format=fmt)
    name = "report.md" if fmt == "markdown" else "report.csv"
    ws.save_artifact(name, text, "report")
    click.echo(text)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8800, show_default=True)
@click.pass_context
def serve(ctx, host, port):
    """Serve the HTTP API for the analyst UI."""
    import uvicorn

    from .api import create_app
    ws = _ws(ctx)
    uvicorn.run(create_app(ws), host=host, port=port)


if __name__ == "__main__":
    sys.exit(run_cli(sys.argv[1:]))
