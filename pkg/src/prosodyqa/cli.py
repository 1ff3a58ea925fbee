"""Pipeline command line.

Subcommands run the stages in order: ingest -> plan -> ssml -> synth ->
serve (collect judgments) -> score -> analyze -> report.  Every stage
is deterministic given the config seed and resumable from the
artifacts already on disk; re-running a stage with unchanged inputs
rewrites identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import click

from . import collection, corpus, prosody, report, stats, synth
from .config import RunConfig, load_config

KIND_GROUPS = prosody.MODIFICATION_KINDS


class DependencyError(RuntimeError):
    """A required artifact from an earlier stage is missing."""


_ERROR_CATEGORIES = [
    (DependencyError, "dependency"),
    (corpus.InsufficientItemsError, "insufficient-items"),
    (corpus.CorpusFormatError, "input"),
    (prosody.UnsupportedModification, "unsupported"),
    (synth.ConfigurationError, "config"),
    (synth.TransportError, "transport"),
    (FileNotFoundError, "input"),
    (ValueError, "config"),
]


def _fail(exc: Exception) -> None:
    for exc_type, category in _ERROR_CATEGORIES:
        if isinstance(exc, exc_type):
            click.echo(f"error [{category}]: {exc}", err=True)
            raise SystemExit(2)
    raise exc


def _require(path: Path, producer: str) -> Path:
    if not path.exists():
        raise DependencyError(f"missing artifact {path.name} (run '{producer}' first)")
    return path


def _load(ctx) -> RunConfig:
    return ctx.obj["config"]


@click.group()
@click.option("--config", "config_path", required=True, type=click.Path(), help="run config JSON")
@click.option("--seed", type=int, default=None, help="override the config seed")
@click.option("--out", "out_dir", type=click.Path(), default=None, help="override output_dir")
@click.pass_context
def main(ctx, config_path, seed, out_dir):
    """Answer-highlighting evaluation pipeline."""
    try:
        cfg = load_config(config_path)
        if seed is not None:
            cfg.seed = seed
        if out_dir is not None:
            cfg.output_dir = out_dir
        cfg.out.mkdir(parents=True, exist_ok=True)
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    ctx.ensure_object(dict)
    ctx.obj["config"] = cfg


# -- artifact paths ------------------------------------------------------


def items_path(cfg) -> Path:
    return cfg.out / "items.jsonl"


def plan_path(cfg) -> Path:
    return cfg.out / "plan.json"


def ssml_manifest_path(cfg, profile_name) -> Path:
    return cfg.out / f"ssml_{profile_name}.jsonl"


def audio_index_path(cfg, profile_name) -> Path:
    return cfg.out / f"audio_index_{profile_name}.jsonl"


def judgments_path(cfg, profile_name) -> Path:
    return cfg.out / f"judgments_{profile_name}.jsonl"


def scored_path(cfg, profile_name) -> Path:
    return cfg.out / f"judgments_scored_{profile_name}.jsonl"


def item_scores_path(cfg, profile_name) -> Path:
    return cfg.out / f"item_scores_{profile_name}.jsonl"


def agreement_path(cfg, profile_name) -> Path:
    return cfg.out / f"agreement_{profile_name}.json"


def _profiles(cfg, engine: str | None) -> list[prosody.EngineProfile]:
    if engine is None:
        return [cfg.profiles[name] for name in sorted(cfg.profiles)]
    if engine not in cfg.profiles:
        raise synth.ConfigurationError(
            f"unknown profile {engine!r}; configured: {sorted(cfg.profiles)}"
        )
    return [cfg.profiles[engine]]


# -- stages ----------------------------------------------------------------


@main.command()
@click.pass_context
def ingest(ctx):
    """Load the SQuAD corpus into the items file."""
    cfg = _load(ctx)
    try:
        items = corpus.load_corpus(cfg.corpus_path, cfg.limit_articles, cfg.unit)
        corpus.write_items(items, items_path(cfg))
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    click.echo(f"ingested {len(items)} items -> {items_path(cfg)}")


@main.command()
@click.pass_context
def plan(ctx):
    """Partition items into one group per modification kind."""
    cfg = _load(ctx)
    try:
        items = corpus.read_items(_require(items_path(cfg), "ingest"))
        group_plan = corpus.partition_groups(items, KIND_GROUPS, cfg.group_size, cfg.seed)
        plan_path(cfg).write_text(
            json.dumps(asdict(group_plan), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    sizes = {k: len(v) for k, v in group_plan.groups.items()}
    click.echo(f"planned groups {sizes} -> {plan_path(cfg)}")


def _read_plan(cfg) -> corpus.GroupPlan:
    payload = json.loads(_require(plan_path(cfg), "plan").read_text(encoding="utf-8"))
    return corpus.GroupPlan(groups=payload["groups"], seed=payload["seed"])


@main.command()
@click.option("--engine", default=None, help="render only this profile")
@click.pass_context
def ssml(ctx, engine):
    """Render baseline and modified SSML documents for the plan."""
    cfg = _load(ctx)
    try:
        items = {i.item_id: i for i in corpus.read_items(_require(items_path(cfg), "ingest"))}
        group_plan = _read_plan(cfg)
        for profile in _profiles(cfg, engine):
            docs: list[prosody.SsmlDocument] = []
            for kind in KIND_GROUPS:
                if kind not in profile.supported_kinds:
                    click.echo(f"note: {profile.name} does not support {kind}; group skipped")
                    continue
                for item_id in group_plan.groups[kind]:
                    item = items[item_id]
                    docs.append(prosody.render_ssml(item, "baseline", profile))
                    docs.append(prosody.render_ssml(item, kind, profile))
            doc_dir = cfg.out / "ssml" / profile.name
            doc_dir.mkdir(parents=True, exist_ok=True)
            with open(ssml_manifest_path(cfg, profile.name), "w", encoding="utf-8") as fh:
                for doc in docs:
                    fh.write(json.dumps(asdict(doc), ensure_ascii=False) + "\n")
                    (doc_dir / f"{doc.item_id}__{doc.kind}.ssml").write_text(
                        doc.markup, encoding="utf-8"
                    )
            click.echo(f"rendered {len(docs)} documents for {profile.name}")
    except Exception as exc:  # noqa: BLE001
        _fail(exc)


def _read_manifest(cfg, profile_name) -> list[prosody.SsmlDocument]:
    path = _require(ssml_manifest_path(cfg, profile_name), "ssml")
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                docs.append(prosody.SsmlDocument(**json.loads(line)))
    return docs


def _clients(cfg) -> dict[str, synth.TtsClient]:
    if cfg.tts_mode == "mock":
        mock = synth.MockTtsClient()
        engines = {p.engine_name for p in cfg.profiles.values()}
        return {name: mock for name in engines}
    clients = {}
    for engine_name, settings in cfg.engines.items():
        clients[engine_name] = synth.RemoteTtsClient(
            url=settings["url"],
            api_key_env=settings["api_key_env"],
            media_type=settings.get("media_type", "audio/mpeg"),
        )
    return clients


@main.command(name="synth")
@click.option("--engine", default=None, help="synthesize only this profile")
@click.pass_context
def synth_cmd(ctx, engine):
    """Generate audio assets for every rendered SSML document."""
    cfg = _load(ctx)
    try:
        cache = synth.AudioCache(cfg.out / "audio")
        synthesizer = synth.Synthesizer(cache, _clients(cfg), cfg.parallelism)
        for profile in _profiles(cfg, engine):
            docs = _read_manifest(cfg, profile.name)
            requests_ = [synth.SynthRequest(ssml=d, profile=profile) for d in docs]
            assets = synthesizer.synthesize_all(requests_)
            index = sorted(
                {(a.item_id, a.kind, a.asset_id) for a in assets},
                key=lambda t: (t[0], t[1]),
            )
            with open(audio_index_path(cfg, profile.name), "w", encoding="utf-8") as fh:
                for item_id, kind, asset_id in index:
                    fh.write(
                        json.dumps(
                            {"item_id": item_id, "kind": kind, "asset_id": asset_id}
                        )
                        + "\n"
                    )
            click.echo(f"synthesized {len(assets)} assets for {profile.name}")
    except Exception as exc:  # noqa: BLE001
        _fail(exc)


def _units(cfg, profile_name) -> list[collection.RatingUnit]:
    items = {i.item_id: i for i in corpus.read_items(_require(items_path(cfg), "ingest"))}
    units = []
    with open(_require(audio_index_path(cfg, profile_name), "synth"), encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            units.append(
                collection.RatingUnit(
                    item_id=record["item_id"],
                    kind=record["kind"],
                    question=items[record["item_id"]].question,
                    audio_asset_id=record["asset_id"],
                )
            )
    return units


def _traps(cfg) -> list[collection.TrapItem]:
    if cfg.traps_path and Path(cfg.traps_path).exists():
        return collection.load_traps(cfg.traps_path)
    return []


@main.command()
@click.option("--engine", required=True, help="profile whose audio is served")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
@click.pass_context
def serve(ctx, engine, host, port):
    """Run the judgment collection service for one engine profile."""
    cfg = _load(ctx)
    try:
        import uvicorn

        from .service import create_app

        profile = _profiles(cfg, engine)[0]
        store = collection.JudgmentStore(judgments_path(cfg, profile.name))
        assigner = collection.TaskAssigner(
            store,
            _units(cfg, profile.name),
            traps=_traps(cfg),
            target_judgments=cfg.target_judgments_per_item,
            trap_ratio=cfg.trap_ratio,
            seed=cfg.seed,
        )
        cache = synth.AudioCache(cfg.out / "audio")
        static_dir = Path("frontend/dist") if Path("frontend/dist").is_dir() else None
        app = create_app(assigner, store, cache, static_dir=static_dir)
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--engine", required=True)
@click.pass_context
def score(ctx, engine):
    """Attach the phonetic correctness column to every judgment row."""
    cfg = _load(ctx)
    try:
        from .scoring import correctness

        profile = _profiles(cfg, engine)[0]
        items = {i.item_id: i for i in corpus.read_items(_require(items_path(cfg), "ingest"))}
        traps = {t.trap_id: t for t in _traps(cfg)}
        src = _require(judgments_path(cfg, profile.name), "serve")
        rows = []
        with open(src, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rows.append(json.loads(line))
        for row in rows:
            gold = None
            if row["is_trap"]:
                trap = traps.get(row["item_id"])
                if trap is not None and trap.trap_type == "gold_key":
                    gold = trap.gold_key
            elif row["item_id"] in items:
                gold = items[row["item_id"]].answer_key
            row["correctness"] = (
                None
                if gold is None
                else correctness(
                    row["typed_key"], gold, cfg.accept_alternate_codes
                ).value
            )
        with open(scored_path(cfg, profile.name), "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
        click.echo(f"scored {len(rows)} rows -> {scored_path(cfg, profile.name)}")
    except Exception as exc:  # noqa: BLE001
        _fail(exc)


def _read_scored(cfg, profile_name) -> list[dict]:
    path = _require(scored_path(cfg, profile_name), "score")
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    return rows


@main.command()
@click.option("--engine", required=True)
@click.pass_context
def analyze(ctx, engine):
    """Quality-filter judgments, aggregate per item, compute agreement."""
    cfg = _load(ctx)
    try:
        profile = _profiles(cfg, engine)[0]
        rows = _read_scored(cfg, profile.name)
        judgment_objs = [
            collection.Judgment(**{k: r[k] for k in collection.JUDGMENT_FIELDS})
            for r in rows
        ]
        reliable = collection.reliable_workers(judgment_objs, _traps(cfg))
        kept = [
            r for r in rows if not r["is_trap"] and r["worker_id"] in reliable
        ]
        by_unit: dict[tuple[str, str], list[dict]] = {}
        for r in kept:
            by_unit.setdefault((r["item_id"], r["kind"]), []).append(r)
        scores = [
            stats.aggregate_item(unit_rows)
            for _, unit_rows in sorted(by_unit.items())
        ]
        with open(item_scores_path(cfg, profile.name), "w", encoding="utf-8") as fh:
            for s in scores:
                fh.write(json.dumps(asdict(s), ensure_ascii=False) + "\n")
        agreement = _agreement_summary(kept)
        agreement_path(cfg, profile.name).write_text(
            json.dumps(agreement, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        click.echo(
            f"aggregated {len(scores)} item scores "
            f"({len(rows) - len(kept)} rows excluded) for {profile.name}"
        )
    except Exception as exc:  # noqa: BLE001
        _fail(exc)


def _agreement_summary(rows: list[dict]) -> dict:
    """Per (modification kind x dimension): Krippendorff's alpha under
    ordinal and nominal metrics plus the majority ratio over
    triple-rated items."""
    kinds = sorted({r["kind"] for r in rows})
    workers = sorted({r["worker_id"] for r in rows})
    worker_col = {w: i for i, w in enumerate(workers)}
    summary: dict = {}
    for kind in kinds:
        kind_rows = [r for r in rows if r["kind"] == kind]
        item_ids = sorted({r["item_id"] for r in kind_rows})
        summary[kind] = {}
        for dimension in collection.RATING_RANGES:
            matrix = []
            for item_id in item_ids:
                row = [None] * len(workers)
                for r in kind_rows:
                    if r["item_id"] == item_id:
                        row[worker_col[r["worker_id"]]] = r[dimension]
                matrix.append(row)
            entry: dict = {"n_items": len(matrix)}
            for metric in ("ordinal", "nominal"):
                try:
                    entry[f"alpha_{metric}"] = stats.krippendorff_alpha(matrix, metric)
                except ValueError:
                    entry[f"alpha_{metric}"] = None
            triple = [
                row for row in matrix if sum(v is not None for v in row) == 3
            ]
            entry["majority_ratio"] = (
                stats.majority_ratio(triple) if triple else None
            )
            summary[kind][dimension] = entry
    return summary


@main.command(name="report")
@click.option("--engine", required=True)
@click.option(
    "--format",
    "formats",
    type=click.Choice(["md", "csv"]),
    multiple=True,
    default=("md", "csv"),
)
@click.pass_context
def report_cmd(ctx, engine, formats):
    """Write delta-vs-baseline and slice tables."""
    cfg = _load(ctx)
    try:
        profile = _profiles(cfg, engine)[0]
        score_file = _require(item_scores_path(cfg, profile.name), "analyze")
        scores = []
        with open(score_file, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    scores.append(stats.ItemScore(**json.loads(line)))
        items = corpus.read_items(_require(items_path(cfg), "ingest"))
        features = {i.item_id: corpus.item_features(i) for i in items}
        rows = report.delta_table(scores, cfg.delta_agg)
        renderers = {"md": "markdown", "csv": "csv"}
        written = []
        for fmt in formats:
            path = cfg.out / f"report_{profile.name}_overall.{fmt}"
            path.write_text(report.render_report(rows, renderers[fmt]), encoding="utf-8")
            written.append(path.name)
        for feature_name in report.FEATURE_NAMES:
            slice_rep = report.slice_table(scores, features, feature_name)
            for fmt in formats:
                path = cfg.out / f"report_{profile.name}_{feature_name}.{fmt}"
                path.write_text(
                    report.render_slice_report(slice_rep, renderers[fmt]),
                    encoding="utf-8",
                )
                written.append(path.name)
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    click.echo(f"wrote {', '.join(written)}")


if __name__ == "__main__":
    main()
