"""Single command-line entry point for all pipeline stages.

Exit codes: 0 ok, 2 usage error, 3 data error, 4 parse failure.
"""

import functools
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import jsonio
from .errors import ArsgError, ParseFailure

logger = logging.getLogger("arsg")

EXIT_DATA_ERROR = 3
EXIT_PARSE_FAILURE = 4


def _setup_logging():
    level = os.environ.get("ARSG_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParseFailure as exc:
            click.echo("parse failure: %s" % exc, err=True)
            sys.exit(EXIT_PARSE_FAILURE)
        except ArsgError as exc:
            click.echo("%s: %s" % (exc.code, exc), err=True)
            sys.exit(EXIT_DATA_ERROR)

    return wrapper


@click.group()
def main():
    """ARSG toolkit: learn, parse, summarize, evaluate, transfer, annotate."""
    _setup_logging()


# --- dkb ---------------------------------------------------------------


@main.group()
def dkb():
    """Domain knowledge base operations."""


@dkb.command("validate")
@click.argument("dkb_file", type=click.Path(exists=True))
@handle_errors
def dkb_validate(dkb_file):
    from .dkb import load_dkb

    base = load_dkb(dkb_file)
    counts = base.counts()
    click.echo(
        "ok: %s (green %d, red %d, blue %d)"
        % (base.domain_name, counts["green"], counts["red"], counts["blue"])
    )


@dkb.command("merge")
@click.argument("base_file", type=click.Path(exists=True))
@click.argument("additions_file", type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@handle_errors
def dkb_merge(base_file, additions_file, output):
    from .dkb import extend_dkb, load_dkb, save_dkb

    merged, added = extend_dkb(load_dkb(base_file), load_dkb(additions_file))
    save_dkb(merged, output)
    click.echo(
        "added green %d, red %d, blue %d"
        % (added["green"], added["red"], added["blue"])
    )


# --- learn -------------------------------------------------------------


@main.command("learn")
@click.argument("logs_dir", type=click.Path(exists=True, file_okay=False))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--start", default="RS", show_default=True)
@handle_errors
def learn_cmd(logs_dir, output, start):
    from .grammar import save_grammar
    from .learner import learn, load_log

    paths = sorted(Path(logs_dir).glob("*.json"))
    logs = [load_log(p) for p in paths]
    grammar = learn(logs, start=start)
    save_grammar(grammar, output)
    click.echo(
        "learned %d productions, %d precedence tuples from %d logs"
        % (len(grammar.productions), len(grammar.precedences), len(logs))
    )


# --- parse -------------------------------------------------------------


@main.command("parse")
@click.argument("text_file", type=click.Path(exists=True))
@click.option("--grammar", "grammar_file", required=True, type=click.Path(exists=True))
@click.option("--dkb", "dkb_file", required=True, type=click.Path(exists=True))
@click.option("--cues", "cue_file", type=click.Path(exists=True))
@click.option("--overrides", "overrides_file", type=click.Path(exists=True))
@click.option("--backoff", type=click.Choice(["FAIL", "MAJORITY_ABC_STAR", "DEFAULT_SHIFT"]), default="MAJORITY_ABC_STAR", show_default=True)
@click.option("--max-backtracks", default=10_000, show_default=True)
@click.option("--trace", is_flag=True, help="Stream each decision to stderr.")
@click.option("-o", "--output", type=click.Path(), help="Output file (single text) or directory (corpus).")
@handle_errors
def parse_cmd(text_file, grammar_file, dkb_file, cue_file, overrides_file, backoff, max_backtracks, trace, output):
    from .dkb import load_dkb
    from .grammar import load_grammar
    from .parser import ParseConfig, parse
    from .textprep import build_basic_trees, extract_lcs, load_cue_lexicon, load_presegmented

    grammar = load_grammar(grammar_file)
    base = load_dkb(dkb_file)
    cues = load_cue_lexicon(cue_file) if cue_file else []
    overrides = _load_overrides(overrides_file)
    texts = load_presegmented(text_file)
    config = ParseConfig(backoff=backoff, max_backtracks=max_backtracks)
    trace_fn = (lambda e: click.echo(jsonio.dumps(e).strip(), err=True)) if trace else None

    results = []
    for edus in texts:
        lcs, skipped = extract_lcs(edus, base)
        if skipped:
            logger.info("skipped EDUs without lexical cores: %s", skipped)
        trees = build_basic_trees(lcs, edus, base, cues, overrides, grammar.schema)
        results.append(parse(grammar, trees, config, trace=trace_fn))

    if len(results) == 1 and (output is None or not Path(output).is_dir()):
        doc = jsonio.dumps(results[0].to_json())
        if output:
            Path(output).write_text(doc, encoding="utf-8")
        else:
            click.echo(doc, nl=False)
    else:
        if output is None:
            raise click.UsageError("corpus input needs -o OUTPUT_DIR")
        out_dir = Path(output)
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, artr in enumerate(results, start=1):
            jsonio.write(out_dir / ("text%03d.artr.json" % i), artr.to_json())
        click.echo("wrote %d ARTR documents to %s" % (len(results), out_dir))


def _load_overrides(path):
    if not path:
        return None
    raw = jsonio.read(path)
    return {int(edu_id): attrs for edu_id, attrs in raw.items()}


# --- summarize ---------------------------------------------------------


@main.command("summarize")
@click.option("--artr", "artr_file", required=True, type=click.Path(exists=True))
@click.option("--edus", "count", type=int, help="Number of summary EDUs.")
@click.option("--ratio", help="Reduction rate in (0,1], e.g. 0.25 or 1/4.")
@click.option("--text-order", is_flag=True, help="Re-sort output into text order.")
@handle_errors
def summarize_cmd(artr_file, count, ratio, text_order):
    from .grammar import load_artr
    from .summarizer import SummaryRequest, summarize

    if (count is None) == (ratio is None):
        raise click.UsageError("exactly one of --edus / --ratio is required")
    artr = load_artr(artr_file)
    request = SummaryRequest(
        count=count,
        ratio=Fraction(ratio) if ratio is not None else None,
        restore_text_order=text_order,
    )
    result = summarize(artr.root, request)
    for item in result.items:
        click.echo("%d\t%d\t%s" % (item.rank, item.edu_id, item.text or ""))


# --- eval --------------------------------------------------------------


@main.group("eval")
def eval_group():
    """Scoring of parses and summaries."""


@eval_group.command("trees")
@click.argument("pred_dir", type=click.Path(exists=True, file_okay=False))
@click.argument("gold_dir", type=click.Path(exists=True, file_okay=False))
@click.option("-o", "--output", type=click.Path(), help="Write the TSV report here.")
@click.option("--figures", "figures_dir", type=click.Path(), help="Render figures into this directory.")
@handle_errors
def eval_trees(pred_dir, gold_dir, output, figures_dir):
    from .evaluation import corpus_tree_scores
    from .grammar import load_artr
    from .report import render_tree_score_figure, tree_score_table

    pred_paths = {p.name: p for p in Path(pred_dir).glob("*.json")}
    gold_paths = {p.name: p for p in Path(gold_dir).glob("*.json")}
    names = sorted(set(pred_paths) & set(gold_paths))
    if not names:
        raise click.UsageError("no matching file names between the two directories")
    pairs = [(load_artr(pred_paths[n]), load_artr(gold_paths[n])) for n in names]
    score = corpus_tree_scores(pairs)
    table = tree_score_table(score)
    if output:
        Path(output).write_text(table, encoding="utf-8")
    click.echo(table, nl=False)
    if figures_dir:
        fig_dir = Path(figures_dir)
        fig_dir.mkdir(parents=True, exist_ok=True)
        path = render_tree_score_figure(score, fig_dir / "tree_scores.png")
        click.echo("figure: %s" % path, err=True)


@eval_group.command("rouge")
@click.argument("candidate_file", type=click.Path(exists=True))
@click.argument("reference_file", type=click.Path(exists=True))
@click.option("--s4/--no-s4", default=True, show_default=True, help="Also report ROUGE-S4.")
@click.option("--stopwords", "stopwords_file", type=click.Path(exists=True))
@click.option("-o", "--output", type=click.Path())
@click.option("--figures", "figures_dir", type=click.Path())
@handle_errors
def eval_rouge(candidate_file, reference_file, s4, stopwords_file, output, figures_dir):
    from .evaluation import rouge2, rouge_s4
    from .report import render_rouge_figure, rouge_table
    from .textprep import tokenize

    candidate = tokenize(Path(candidate_file).read_text(encoding="utf-8"))
    reference = tokenize(Path(reference_file).read_text(encoding="utf-8"))
    stops = frozenset()
    if stopwords_file:
        stops = frozenset(
            line.strip()
            for line in Path(stopwords_file).read_text(encoding="utf-8").splitlines()
            if line.strip()
        )
    scores = [("ROUGE-2", rouge2(candidate, reference, stops))]
    if s4:
        scores.append(("ROUGE-S4", rouge_s4(candidate, reference, stops)))
    table = rouge_table(scores)
    if output:
        Path(output).write_text(table, encoding="utf-8")
    click.echo(table, nl=False)
    if figures_dir:
        fig_dir = Path(figures_dir)
        fig_dir.mkdir(parents=True, exist_ok=True)
        path = render_rouge_figure(scores, fig_dir / "rouge_scores.png")
        click.echo("figure: %s" % path, err=True)


# --- transfer ----------------------------------------------------------


@main.command("transfer")
@click.option("--grammar", "grammar_file", required=True, type=click.Path(exists=True))
@click.option("--map", "map_file", required=True, type=click.Path(exists=True))
@click.option("--dkb-ext", "ext_file", type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@handle_errors
def transfer_cmd(grammar_file, map_file, ext_file, output):
    from .dkb import load_dkb
    from .grammar import load_grammar, save_grammar
    from .transfer import load_mapping, transfer_grammar

    grammar = load_grammar(grammar_file)
    mapping = load_mapping(map_file)
    ext = load_dkb(ext_file) if ext_file else None
    out, rep = transfer_grammar(grammar, mapping, ext)
    save_grammar(out, output)
    click.echo(
        "changed productions %d, attributes %d, precedences %d"
        % (rep.changed_productions, rep.changed_attributes, rep.changed_precedences)
    )


# --- serve -------------------------------------------------------------


@main.command("serve")
@click.option("--dkb", "dkb_file", required=True, type=click.Path(exists=True))
@click.option("--cues", "cue_file", type=click.Path(exists=True))
@click.option("--grammar", "grammar_file", type=click.Path(exists=True))
@click.option("--overrides", "overrides_file", type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--ui-dir", type=click.Path(exists=True, file_okay=False), help="Static UI bundle to serve at /.")
@handle_errors
def serve_cmd(dkb_file, cue_file, grammar_file, overrides_file, host, port, ui_dir):
    import uvicorn

    from .dkb import load_dkb
    from .grammar import load_grammar
    from .textprep import load_cue_lexicon
    from .webapi import create_app

    app = create_app(
        load_dkb(dkb_file),
        load_cue_lexicon(cue_file) if cue_file else [],
        grammar=load_grammar(grammar_file) if grammar_file else None,
        overrides=_load_overrides(overrides_file),
    )
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
