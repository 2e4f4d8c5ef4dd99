"""Pipeline command-line interface.

Subcommands: preprocess, build, features, spread, emotions, evaluate,
compare-builders, report.  An INI config file can supply every option;
flags override file values.  All artifacts are deterministic for a fixed
config, and every stage writes a manifest with the config hash and input
digests.

Exit codes: 0 ok, 2 bad input, 3 missing upstream stage output,
4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from . import activation, affect, graphmetrics, netbuild, stats, textpipe
from .errors import ConvergenceError, InputFormatError, MissingUpstreamError
from .mlharness import (
    CorpusFeatures,
    ModelSpec,
    attribution_csv,
    make_folds,
    run_matrix,
    select_best,
    shapley_attribution,
)
from .mlharness.features import EMOTION_FEATURE_NAMES, FEATURE_CONFIGS
from .mlharness.models import MODEL_KINDS, fit
from .netbuild import BUILDER_TAGS
from .seeding import derive_seed

log = logging.getLogger("storynets")

STAGES = (
    "preprocess",
    "build",
    "features",
    "spread",
    "emotions",
    "evaluate",
    "compare-builders",
    "report",
)

_LIST_FIELDS = {
    "builders": str,
    "window_sizes": int,
    "retention": float,
    "feature_configs": str,
    "models": str,
    "targets": str,
}

_PATH_FIELDS = (
    "stories_csv",
    "conllu",
    "lexicon",
    "lemma_table",
    "stoplist",
    "pronouns",
    "relations",
)


@dataclass(frozen=True)
class RunConfig:
    stories_csv: str | None = None
    conllu: str | None = None
    lexicon: str | None = None
    lemma_table: str | None = None
    stoplist: str | None = None
    pronouns: str | None = None
    relations: str | None = None
    out_dir: str = "out"
    builders: tuple[str, ...] = BUILDER_TAGS
    window_sizes: tuple[int, ...] = (2, 3, 4)
    radius: int = 3
    retention: tuple[float, ...] = (0.5,)
    feature_configs: tuple[str, ...] = FEATURE_CONFIGS
    models: tuple[str, ...] = MODEL_KINDS
    targets: tuple[str, ...] = ("mean",)
    folds: int = 4
    n_perm: int = 10_000
    rng_seed: int = 7
    pagerank_damping: float = 0.85
    enrich_tfmn: bool = False
    with_baseline: bool = True
    shap_samples: int = 2000
    shap_max_rows: int = 100
    export_graphml: bool = False
    export_conllu: bool = False

    def validate(self):
        if self.enrich_tfmn and not self.relations:
            raise InputFormatError("enrich_tfmn requires a relations file")
        unknown = set(self.builders) - set(BUILDER_TAGS)
        if unknown:
            raise InputFormatError(f"unknown builder tags: {sorted(unknown)}")
        if not set(self.window_sizes) <= {2, 3, 4}:
            raise InputFormatError("window_sizes must be a subset of {2, 3, 4}")
        if self.folds < 2:
            raise InputFormatError("folds must be >= 2")
        if self.radius < 1:
            raise InputFormatError("radius must be >= 1")
        for r in self.retention:
            if not 0.0 < r < 1.0:
                raise InputFormatError(f"retention {r} outside (0, 1)")
        unknown = set(self.feature_configs) - set(FEATURE_CONFIGS)
        if unknown:
            raise InputFormatError(f"unknown feature configs: {sorted(unknown)}")
        unknown = set(self.models) - set(MODEL_KINDS)
        if unknown:
            raise InputFormatError(f"unknown model kinds: {sorted(unknown)}")
        if not 0.0 < self.pagerank_damping < 1.0:
            raise InputFormatError("pagerank_damping must lie in (0, 1)")
        for name in _PATH_FIELDS:
            value = getattr(self, name)
            if value is not None and not Path(value).exists():
                raise InputFormatError(f"{name} path does not exist: {value}")

    def active_builders(self):
        """Configured builders restricted to the configured window sizes."""
        keep = []
        for tag in self.builders:
            if tag.startswith("coocc"):
                if int(tag.rsplit("WS", 1)[1]) in self.window_sizes:
                    keep.append(tag)
            else:
                keep.append(tag)
        return tuple(keep)


def config_hash(config):
    payload = json.dumps(asdict(config), sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def load_config_file(path):
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise InputFormatError(f"cannot read config file {path}")
    if not parser.has_section("storynets"):
        raise InputFormatError(f"{path}: missing [storynets] section")
    section = parser["storynets"]
    values = {}
    valid = set(RunConfig.__dataclass_fields__)
    for key, raw in section.items():
        if key not in valid:
            raise InputFormatError(f"{path}: unknown config key {key!r}")
        values[key] = _coerce_field(key, raw)
    return values


def _coerce_field(key, raw):
    fields = RunConfig.__dataclass_fields__
    raw = raw.strip()
    if key in _LIST_FIELDS:
        items = [p.strip() for p in raw.split(",") if p.strip()]
        return tuple(_LIST_FIELDS[key](p) for p in items)
    kind = fields[key].type
    if key in _PATH_FIELDS:
        return raw or None
    if "bool" in str(kind):
        return raw.lower() in ("1", "true", "yes", "on")
    if "float" in str(kind):
        return float(raw)
    if "int" in str(kind):
        return int(raw)
    return raw


def build_arg_parser():
    parser = argparse.ArgumentParser(
        prog="storynets",
        description="Semantic-network pipeline for short narratives",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for stage in STAGES:
        p = sub.add_parser(stage, help=f"run the {stage} stage")
        p.add_argument("--config", help="INI config file with a [storynets] section")
        p.add_argument("--stories-csv", dest="stories_csv")
        p.add_argument("--conllu")
        p.add_argument("--lexicon")
        p.add_argument("--lemma-table", dest="lemma_table")
        p.add_argument("--stoplist")
        p.add_argument("--pronouns")
        p.add_argument("--relations")
        p.add_argument("--out-dir", dest="out_dir")
        p.add_argument("--builders", help="comma-separated builder tags")
        p.add_argument("--window-sizes", dest="window_sizes", help="comma-separated")
        p.add_argument("--radius", type=int)
        p.add_argument("--retention", help="comma-separated retention values")
        p.add_argument("--feature-configs", dest="feature_configs", help="comma-separated")
        p.add_argument("--models", help="comma-separated model kinds")
        p.add_argument("--targets", help="comma-separated: mean and/or rater ids")
        p.add_argument("--folds", type=int)
        p.add_argument("--n-perm", dest="n_perm", type=int)
        p.add_argument("--rng-seed", dest="rng_seed", type=int)
        p.add_argument("--pagerank-damping", dest="pagerank_damping", type=float)
        p.add_argument("--enrich-tfmn", dest="enrich_tfmn", action="store_const", const=True)
        p.add_argument("--no-baseline", dest="with_baseline", action="store_const", const=False)
        p.add_argument("--shap-samples", dest="shap_samples", type=int)
        p.add_argument("--shap-max-rows", dest="shap_max_rows", type=int)
        p.add_argument("--export-graphml", dest="export_graphml", action="store_const", const=True)
        p.add_argument("--export-conllu", dest="export_conllu", action="store_const", const=True)
    return parser


def resolve_config(args):
    values = {}
    if args.config:
        values.update(load_config_file(args.config))
    for key in RunConfig.__dataclass_fields__:
        flag_value = getattr(args, key, None)
        if flag_value is None:
            continue
        if key in _LIST_FIELDS and isinstance(flag_value, str):
            flag_value = _coerce_field(key, flag_value)
        values[key] = flag_value
    config = RunConfig(**values)
    config.validate()
    return config


# ---------------------------------------------------------------------------
# artifact paths and manifest plumbing


def _paths(config):
    out = Path(config.out_dir)
    return {
        "corpus": out / "corpus.jsonl",
        "exclusions": out / "exclusions.csv",
        "networks": out / "networks.jsonl",
        "edges_dir": out / "edges",
        "graphml_dir": out / "graphml",
        "features": out / "features.csv",
        "histograms_dir": out / "histograms",
        "emotions": out / "emotions.csv",
        "results": out / "results.json",
        "comparison": out / "builder_comparison.csv",
        "report": out / "report.txt",
    }


def _stationary_path(config, retention):
    return Path(config.out_dir) / f"stationary_r{retention:g}.csv"


def _trajectory_path(config, retention):
    return Path(config.out_dir) / f"trajectories_r{retention:g}.csv"


def _file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(config, stage, inputs, outputs):
    out = Path(config.out_dir)
    manifest = {
        "stage": stage,
        "config_hash": config_hash(config),
        "rng_seed": config.rng_seed,
        "inputs": {str(p): _file_digest(p) for p in inputs if Path(p).exists()},
        "outputs": [str(p) for p in outputs],
    }
    path = out / f"manifest_{stage.replace('-', '_')}.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _require(path, stage_to_run):
    if not Path(path).exists():
        raise MissingUpstreamError(path, stage_to_run)


def _load_wordlists(config):
    stoplist = (
        textpipe.load_wordlist(config.stoplist)
        if config.stoplist
        else textpipe.default_stoplist()
    )
    pronouns = (
        textpipe.load_wordlist(config.pronouns)
        if config.pronouns
        else textpipe.default_pronouns()
    )
    lemma_table = textpipe.load_lemma_table(config.lemma_table) if config.lemma_table else {}
    return stoplist, pronouns, lemma_table


def _read_corpus(config):
    _require(_paths(config)["corpus"], "preprocess")
    stories = []
    with open(_paths(config)["corpus"], encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                stories.append(textpipe.story_from_json(line))
    return stories


# ---------------------------------------------------------------------------
# stages


def cmd_preprocess(config):
    if not config.stories_csv:
        raise InputFormatError("preprocess requires --stories-csv")
    stoplist, pronouns, lemma_table = _load_wordlists(config)
    conllu_sentences = None
    if config.conllu:
        with open(config.conllu, "rb") as fh:
            conllu_sentences = textpipe.read_conllu(fh.read(), stoplist, pronouns)
    stories = textpipe.read_stories_csv(
        config.stories_csv, lemma_table, stoplist, pronouns, conllu_sentences
    )
    kept = []
    excluded = []
    for story in stories:
        matches = textpipe.match_prompts(story)
        missing = [m.prompt_lemma for m in matches if not m.matched]
        if missing:
            excluded.append((story.id, missing))
            log.info("excluding story %s: unmatched prompt(s) %s", story.id, missing)
        else:
            kept.append(story)
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = _paths(config)
    with open(paths["corpus"], "w", encoding="utf-8") as fh:
        for story in kept:
            fh.write(textpipe.story_to_json(story) + "\n")
    with open(paths["exclusions"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["story_id", "unmatched_prompts"])
        for story_id, missing in excluded:
            writer.writerow([story_id, ";".join(missing)])
    outputs = [paths["corpus"], paths["exclusions"]]
    if config.export_conllu:
        conllu_out = out / "corpus.conllu"
        conllu_out.write_text(
            textpipe.write_conllu({s.id: s.sentences for s in kept}), encoding="utf-8"
        )
        outputs.append(conllu_out)
    inputs = [p for p in (config.stories_csv, config.conllu) if p]
    _write_manifest(config, "preprocess", inputs, outputs)
    log.info("retained %d stories, excluded %d", len(kept), len(excluded))
    return 0


def _build_story_networks(config, story, relations, lexicon):
    builders = config.active_builders()
    nets = netbuild.build_all_variants(
        story,
        radius=config.radius,
        relations=relations,
        lexicon=lexicon,
        enrich_tfmn=config.enrich_tfmn,
    )
    return {tag: nets[tag] for tag in builders if tag in nets}


def cmd_build(config):
    paths = _paths(config)
    _require(paths["corpus"], "preprocess")
    stories = _read_corpus(config)
    relations = netbuild.load_relations(config.relations) if config.relations else None
    lexicon = affect.load_lexicon_file(config.lexicon) if config.lexicon else None
    tfmn_requested = "TFMN" in config.active_builders()
    paths["edges_dir"].mkdir(parents=True, exist_ok=True)
    if config.export_graphml:
        paths["graphml_dir"].mkdir(parents=True, exist_ok=True)
    records = []
    edge_files = []
    for story in stories:
        if tfmn_requested and not any(
            t.head_index is not None for t in story.all_tokens()
        ) and any(len(s) > 1 for s in story.sentences):
            raise InputFormatError(
                f"story {story.id} has no dependency parse; supply --conllu at "
                "preprocess time or drop TFMN from --builders"
            )
        nets = _build_story_networks(config, story, relations, lexicon)
        for tag, net in nets.items():
            records.append(
                {
                    "story_id": story.id,
                    "builder": tag,
                    "nodes": sorted(net.nodes),
                    "edges": [list(e) for e in sorted(net.edges)],
                    "valence": {n: net.valence[n] for n in sorted(net.valence)},
                }
            )
            edge_path = paths["edges_dir"] / f"{story.id}__{tag}.csv"
            edge_path.write_text(netbuild.edge_list_csv(net), encoding="utf-8")
            edge_files.append(edge_path)
            if config.export_graphml:
                gpath = paths["graphml_dir"] / f"{story.id}__{tag}.graphml"
                gpath.write_text(netbuild.graphml(net), encoding="utf-8")
    with open(paths["networks"], "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    _write_manifest(
        config, "build", [paths["corpus"]], [paths["networks"]] + edge_files
    )
    log.info("built %d networks for %d stories", len(records), len(stories))
    return 0


def _read_networks(config):
    paths = _paths(config)
    _require(paths["networks"], "build")
    nets = {}
    with open(paths["networks"], encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            net = netbuild.make_network(
                record["nodes"],
                [tuple(e) for e in record["edges"]],
                record["builder"],
                record.get("valence", {}),
            )
            nets[(record["story_id"], record["builder"])] = net
    return nets


def cmd_features(config):
    paths = _paths(config)
    nets = _read_networks(config)
    feats = {
        key: graphmetrics.structural_features(net, damping=config.pagerank_damping)
        for key, net in nets.items()
    }
    paths["features"].write_text(graphmetrics.features_csv_rows(feats), encoding="utf-8")
    paths["histograms_dir"].mkdir(parents=True, exist_ok=True)
    outputs = [paths["features"]]
    by_builder = {}
    for (story_id, builder), f in feats.items():
        by_builder.setdefault(builder, []).append(f)
    for builder, rows in sorted(by_builder.items()):
        for name in graphmetrics.STRUCTURAL_FEATURE_NAMES + ("n_components",):
            hist_path = paths["histograms_dir"] / f"{name}__{builder}.csv"
            hist_path.write_text(
                graphmetrics.histogram_csv(f.as_dict()[name] for f in rows),
                encoding="utf-8",
            )
            outputs.append(hist_path)
    _write_manifest(config, "features", [paths["networks"]], outputs)
    log.info("wrote structural features for %d networks", len(feats))
    return 0


def cmd_spread(config):
    paths = _paths(config)
    _require(paths["corpus"], "preprocess")
    nets = _read_networks(config)
    stories = {s.id: s for s in _read_corpus(config)}
    outputs = []
    for retention in config.retention:
        traces = {}
        for story_id, story in stories.items():
            story_nets = {
                builder: net
                for (sid, builder), net in nets.items()
                if sid == story_id
            }
            if not story_nets:
                continue
            per_builder = activation.prompt_alphas(story, story_nets, retention=retention)
            for builder, trace_triple in per_builder.items():
                traces[(story_id, builder)] = trace_triple
        spath = _stationary_path(config, retention)
        tpath = _trajectory_path(config, retention)
        spath.write_text(activation.stationary_csv(traces), encoding="utf-8")
        tpath.write_text(activation.trajectory_csv(traces), encoding="utf-8")
        outputs.extend([spath, tpath])
        not_converged = sum(
            1 for triple in traces.values() for t in triple if not t.converged
        )
        if not_converged:
            raise ConvergenceError(
                f"{not_converged} activation runs failed to reach stationarity "
                f"at retention={retention}"
            )
    _write_manifest(config, "spread", [paths["corpus"], paths["networks"]], outputs)
    return 0


def cmd_emotions(config):
    paths = _paths(config)
    _require(paths["corpus"], "preprocess")
    if not config.lexicon:
        raise InputFormatError("emotions requires --lexicon")
    lexicon = affect.load_lexicon_file(config.lexicon)
    stories = _read_corpus(config)
    profiles = {s.id: affect.profile_story(s.sentences, lexicon) for s in stories}
    paths["emotions"].write_text(affect.emotions_csv(profiles), encoding="utf-8")
    _write_manifest(
        config, "emotions", [paths["corpus"], config.lexicon], [paths["emotions"]]
    )
    return 0


def _read_features_csv(path):
    structural = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            builder = row["builder"]
            story_id = row["story_id"]
            structural.setdefault(builder, {})[story_id] = {
                name: float(row[name]) for name in graphmetrics.STRUCTURAL_FEATURE_NAMES
            }
    return structural


def _read_stationary_csv(path):
    alphas = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            alphas.setdefault(row["builder"], {})[row["story_id"]] = (
                float(row["alpha1"]),
                float(row["alpha2"]),
                float(row["alpha3"]),
            )
    return alphas


def _read_emotions_csv(path):
    emotions = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            emotions[row["story_id"]] = {
                name: float(row[name]) for name in EMOTION_FEATURE_NAMES
            }
    return emotions


def _collect_targets(stories, wanted):
    targets = {}
    for name in wanted:
        if name == "mean":
            targets["mean"] = {s.id: s.mean_rating for s in stories}
            continue
        values = {s.id: float(s.ratings[name]) for s in stories if name in s.ratings}
        if not values:
            raise InputFormatError(f"no story carries a rating column {name!r}")
        targets[name] = values
    return targets


def _model_specs(config):
    return {
        kind: ModelSpec(kind=kind, rng_seed=derive_seed(config.rng_seed, "model", kind))
        for kind in config.models
    }


def cmd_evaluate(config):
    paths = _paths(config)
    _require(paths["features"], "features")
    retention = config.retention[0]
    _require(_stationary_path(config, retention), "spread")
    _require(paths["emotions"], "emotions")
    stories = _read_corpus(config)
    features = CorpusFeatures(
        structural=_read_features_csv(paths["features"]),
        alphas=_read_stationary_csv(_stationary_path(config, retention)),
        emotions=_read_emotions_csv(paths["emotions"]),
        targets=_collect_targets(stories, config.targets),
    )
    builders = [b for b in config.active_builders() if b in features.structural]
    results = run_matrix(
        features,
        config.targets,
        builders,
        config.feature_configs,
        _model_specs(config),
        k=config.folds,
        rng_seed=config.rng_seed,
        with_baseline=config.with_baseline,
    )
    payload = {
        "config_hash": config_hash(config),
        "results": [r.to_dict() for r in results],
        "best": {
            target: select_best(results, target).to_dict() for target in config.targets
        },
    }
    paths["results"].write_text(
        json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    outputs = [paths["results"]]
    for target in config.targets:
        outputs.append(_write_attributions(config, features, results, target))
    _write_manifest(
        config,
        "evaluate",
        [
            paths["features"],
            _stationary_path(config, retention),
            paths["emotions"],
            paths["corpus"],
        ],
        outputs,
    )
    return 0


def _write_attributions(config, features, results, target):
    """SHAP-style attribution CSV for the best cell of one target.

    Models are refit per CV fold and each fold's held-out rows are
    explained against that fold's training background, up to
    shap_max_rows rows in total.
    """
    best = select_best(results, target)
    rows = features.rows(best.builder_tag, best.config, target)
    spec = ModelSpec(
        kind=best.model_kind,
        hyperparameters=dict(_model_specs(config)[best.model_kind].hyperparameters),
        rng_seed=best.rng_seed,
    )
    folds = make_folds(len(rows), config.folds, best.rng_seed)
    explained_ids = []
    blocks = []
    remaining = config.shap_max_rows
    for fold_idx, test_idx in enumerate(folds):
        if remaining <= 0:
            break
        train_rows = [rows[i] for i in range(len(rows)) if i not in set(test_idx)]
        fold_spec = replace(spec, rng_seed=derive_seed(spec.rng_seed, "fold", fold_idx))
        model = fit(fold_spec, train_rows)
        take = [rows[i] for i in test_idx[:remaining]]
        result = shapley_attribution(
            model,
            take,
            n_samples=config.shap_samples,
            rng_seed=derive_seed(config.rng_seed, "shap", target, fold_idx),
        )
        explained_ids.extend(r.story_id for r in take)
        blocks.append(result)
        remaining -= len(take)
    path = Path(config.out_dir) / f"attributions_{target}.csv"
    if blocks:
        import numpy as np

        merged = blocks[0]
        values = np.vstack([b.values for b in blocks])
        merged = replace(
            merged,
            values=values,
            predictions=np.concatenate([b.predictions for b in blocks]),
            additivity_se=np.concatenate([b.additivity_se for b in blocks]),
        )
        path.write_text(attribution_csv(explained_ids, merged), encoding="utf-8")
    else:
        path.write_text("story_id\n", encoding="utf-8")
    return path


def cmd_compare_builders(config):
    paths = _paths(config)
    _require(paths["features"], "features")
    values_by_builder = {}
    with open(paths["features"], encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            features = {
                name: float(row[name])
                for name in graphmetrics.STRUCTURAL_FEATURE_NAMES + ("n_components",)
            }
            values_by_builder.setdefault(row["builder"], {})[row["story_id"]] = features
    table = stats.builder_comparison_csv(
        values_by_builder, n_perm=config.n_perm, rng_seed=config.rng_seed
    )
    paths["comparison"].write_text(table, encoding="utf-8")
    _write_manifest(config, "compare-builders", [paths["features"]], [paths["comparison"]])
    return 0


def cmd_report(config):
    paths = _paths(config)
    _require(paths["results"], "evaluate")
    payload = json.loads(paths["results"].read_text(encoding="utf-8"))
    lines = ["storynets evaluation report", "=" * 60]
    results = payload["results"]
    real = [r for r in results if not r["permuted"]]
    permuted = {
        (r["target"], r["builder"], r["config"], r["model"]): r
        for r in results
        if r["permuted"]
    }
    for target in sorted({r["target"] for r in real}):
        lines.append("")
        lines.append(f"target: {target}")
        ranked = sorted(
            (r for r in real if r["target"] == target),
            key=lambda r: (r["mae"], -r["spearman"]),
        )
        lines.append("  best cells by MAE (ties break to higher Spearman):")
        for r in ranked[:10]:
            lines.append(
                f"    {r['builder']:>12s} | {r['config']:<13s} | {r['model']:<17s} "
                f"| MAE={r['mae']:.4f} | rho={r['spearman']:.4f} | r={r['pearson']:.4f}"
            )
        pairs = [
            (r["mae"], permuted[(r["target"], r["builder"], r["config"], r["model"])]["mae"])
            for r in real
            if r["target"] == target
            and (r["target"], r["builder"], r["config"], r["model"]) in permuted
        ]
        if pairs:
            real_maes = [p[0] for p in pairs]
            perm_maes = [p[1] for p in pairs]
            test = stats.wilcoxon_signed_rank(real_maes, perm_maes, alternative="less")
            p_text = f"{test.p_value:.3g}" if test.p_value > 0 else "<1e-308"
            lines.append(
                f"  real vs permuted MAE (one-sided Wilcoxon): W={test.statistic:g}, "
                f"p={p_text}, n={test.n}"
            )
    if paths["comparison"].exists():
        lines.append("")
        lines.append(f"builder comparison table: {paths['comparison']}")
    text = "\n".join(lines) + "\n"
    paths["report"].write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    _write_manifest(config, "report", [paths["results"]], [paths["report"]])
    return 0


_COMMANDS = {
    "preprocess": cmd_preprocess,
    "build": cmd_build,
    "features": cmd_features,
    "spread": cmd_spread,
    "emotions": cmd_emotions,
    "evaluate": cmd_evaluate,
    "compare-builders": cmd_compare_builders,
    "report": cmd_report,
}


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        Path(config.out_dir).mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](config)
    except MissingUpstreamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (InputFormatError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
