"""Command-line surface: compute, query, compare, institutions, synth, validate.

Exit codes: 0 success, 1 usage, 2 data error, 3 internal.  The default
output directory can be set through the PUBRANK_OUT environment variable.
All outputs are flat CSV files plus a JSON manifest; two runs with the same
inputs and config produce byte-identical trees.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import (
    CorpusFormatError,
    DomainNotFoundError,
    domain_view,
    load_corpus,
    merge_overall,
    write_corpus,
)
from .grading import (
    ContributionBased,
    PercentileBased,
    assign_letters,
    rank_authors,
    write_grades_csv,
    write_ranking_csv,
)
from .institutions import score_institutions, write_institutions_csv
from .metrics import (
    ALL_METRICS,
    MetricConfig,
    MetricKind,
    compute_metric,
    write_metric_csv,
)
from .synth import SynthConfig, generate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

OUT_DIR_ENV = "PUBRANK_OUT"

MANIFEST_NAME = "manifest.json"


class _UsageError(Exception):
    pass


class _NotFound(Exception):
    pass


@dataclass
class RunConfig:
    input_dir: str
    output_dir: str
    metrics: tuple = ALL_METRICS
    domains: object = "all"  # "all" | "overall" | list of domain ids
    scheme: object = field(default_factory=PercentileBased)
    metric_config: MetricConfig = field(default_factory=MetricConfig)
    threads: int = 0  # 0 means available parallelism

    def fingerprint(self) -> str:
        payload = {
            "metrics": sorted(m.value for m in self.metrics),
            "domains": self.domains if isinstance(self.domains, str)
            else sorted(self.domains),
            "scheme": self.scheme.label,
            "damping": self.metric_config.damping,
            "tolerance": self.metric_config.tolerance,
            "max_iterations": self.metric_config.max_iterations,
            "connections_mode": self.metric_config.connections_mode,
            "connections_self_loops": self.metric_config.connections_self_loops,
            "exposure_mix": self.metric_config.exposure_mix,
            "self_citation_policy": self.metric_config.self_citation_policy,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


# ---------------------------------------------------------------------------
# compute pipeline


def run_compute(cfg: RunConfig) -> dict:
    """Full pipeline: load, compute, rank, grade, aggregate, export.

    Returns the manifest dict (also written to the output directory).
    """
    corpus, report = load_corpus(cfg.input_dir)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    descriptors = _resolve_domains(corpus, cfg.domains)
    slugs = _slug_map(descriptors)
    views = {
        d: (merge_overall(corpus) if d == "overall" else domain_view(corpus, d))
        for d in descriptors
    }

    workers = cfg.threads if cfg.threads > 0 else (os.cpu_count() or 1)
    tasks = [(d, kind) for d in descriptors for kind in cfg.metrics]
    results = {}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(compute_metric, views[d], kind, cfg.metric_config): (d, kind)
            for d, kind in tasks
        }
        for fut, key in futures.items():
            results[key] = fut.result()

    runs: dict = {}
    for d in descriptors:
        domain_dir = out / slugs[d]
        domain_dir.mkdir(parents=True, exist_ok=True)
        runs[d] = {}
        for kind in cfg.metrics:
            mv = results[(d, kind)]
            write_metric_csv(mv, domain_dir / f"metric_{kind.value}.csv")
            table = rank_authors(mv)
            write_ranking_csv(table, domain_dir / f"ranking_{kind.value}.csv")
            grades = assign_letters(table, cfg.scheme)
            write_grades_csv(
                table,
                grades,
                domain_dir / f"grades_{kind.value}_{cfg.scheme.label}.csv",
            )
            scores, skipped = score_institutions(grades, corpus)
            write_institutions_csv(
                scores,
                domain_dir / f"institutions_{kind.value}_{cfg.scheme.label}.csv",
            )
            runs[d][kind.value] = {
                "iterations_used": mv.iterations_used,
                "final_residual": mv.final_residual,
                "converged": mv.converged,
                "dropped_mass": mv.dropped_mass,
                "config_fingerprint": mv.config_fingerprint,
                "n_papers": views[d].n_papers,
                "n_authors": views[d].n_authors,
                "n_venues": views[d].n_venues,
                "authors_without_institution": skipped,
            }
            if not mv.converged:
                print(
                    f"warning: {kind.value} on {d} did not converge "
                    f"(residual {mv.final_residual:g})",
                    file=sys.stderr,
                )

    manifest = {
        "schema": "pubrank-run/1",
        "fingerprint": cfg.fingerprint(),
        "config": {
            "metrics": [m.value for m in cfg.metrics],
            "domains": cfg.domains if isinstance(cfg.domains, str)
            else sorted(cfg.domains),
            "scheme": cfg.scheme.label,
            "damping": cfg.metric_config.damping,
            "tolerance": cfg.metric_config.tolerance,
            "max_iterations": cfg.metric_config.max_iterations,
            "connections_mode": cfg.metric_config.connections_mode,
            "connections_self_loops": cfg.metric_config.connections_self_loops,
            "exposure_mix": cfg.metric_config.exposure_mix,
            "self_citation_policy": cfg.metric_config.self_citation_policy,
        },
        "validation_report": report.as_dict(),
        "domains": {d: slugs[d] for d in descriptors},
        "runs": runs,
    }
    with open(out / MANIFEST_NAME, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def _resolve_domains(corpus, requested) -> list:
    if requested == "all":
        return corpus.domains + ["overall"]
    if requested == "overall":
        return ["overall"]
    out = []
    for d in requested:
        if d != "overall" and d not in corpus.domains:
            raise DomainNotFoundError(d)
        out.append(d)
    return sorted(set(out))


def _slug_map(descriptors: list) -> dict:
    slugs = {}
    used = set()
    for d in sorted(descriptors):
        slug = re.sub(r"[^A-Za-z0-9._-]", "_", d) or "_"
        candidate = slug
        k = 2
        while candidate in used:
            candidate = f"{slug}~{k}"
            k += 1
        used.add(candidate)
        slugs[d] = candidate
    return slugs


# ---------------------------------------------------------------------------
# query / compare


def _load_manifest(run_dir: Path) -> dict:
    path = run_dir / MANIFEST_NAME
    if not path.exists():
        raise FileNotFoundError(f"no manifest at {path}")
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _scan_csv(path: Path, key_column: int, key: str):
    """Return the first csv row whose key column matches, or None."""
    if not path.exists():
        return None
    with open(path, encoding="utf-8") as fh:
        next(fh, None)
        for line in fh:
            fields = line.rstrip("\n").split(",")
            if fields[key_column] == key:
                return fields
    return None


def _author_blocks(run_dir: Path, manifest: dict, entity: str) -> list:
    """(domain, {metric: row}) blocks for an author id, grades CSV backed."""
    scheme = manifest["config"]["scheme"]
    blocks = []
    for d, slug in sorted(manifest["domains"].items()):
        per_metric = {}
        for kind in manifest["config"]["metrics"]:
            path = run_dir / slug / f"grades_{kind}_{scheme}.csv"
            row = _scan_csv(path, 0, entity)
            if row is not None:
                per_metric[kind] = row
        if per_metric:
            blocks.append((d, per_metric))
    return blocks


def _institution_blocks(run_dir: Path, manifest: dict, entity: str) -> list:
    scheme = manifest["config"]["scheme"]
    blocks = []
    for d, slug in sorted(manifest["domains"].items()):
        per_metric = {}
        for kind in manifest["config"]["metrics"]:
            path = run_dir / slug / f"institutions_{kind}_{scheme}.csv"
            row = _scan_csv(path, 0, entity)
            if row is not None:
                per_metric[kind] = row
        if per_metric:
            blocks.append((d, per_metric))
    return blocks


def _print_author_block(entity: str, domain: str, per_metric: dict) -> None:
    kinds = [k for k in (m.value for m in ALL_METRICS) if k in per_metric]
    kinds += [k for k in per_metric if k not in kinds]
    labels = [MetricKind(k).short_label for k in kinds]
    print(f"author {entity} — domain {domain}")
    header = "  {:<10}".format("Value") + "".join(f"{lab:>10}" for lab in labels)
    print(header)
    rows = [
        ("Rank", lambda f: f[4]),
        ("RankPer", lambda f: _pct(f[5])),
        ("CumValue", lambda f: _pct(f[6])),
        ("Letter", lambda f: f[3]),
    ]
    for label, pick in rows:
        cells = "".join(f"{pick(per_metric[k]):>10}" for k in kinds)
        print("  {:<10}".format(label) + cells)


def _print_institution_block(entity: str, domain: str, per_metric: dict) -> None:
    print(f"institution {entity} — domain {domain}")
    print(
        "  {:<12}{:>8}{:>10}{:>10}{:>14}".format(
            "Metric", "ACount", "Total", "RankByA", "RankByTotal"
        )
    )
    for k in sorted(per_metric):
        f = per_metric[k]
        print(
            "  {:<12}{:>8}{:>10}{:>10}{:>14}".format(
                MetricKind(k).short_label, f[3], f[4], f[5], f[6]
            )
        )


def _pct(raw: str) -> str:
    return f"{float(raw) * 100:.2f}%"


def run_query(run_dir: str, entities: list) -> int:
    run = Path(run_dir)
    manifest = _load_manifest(run)
    missing = []
    for entity in entities:
        blocks = _author_blocks(run, manifest, entity)
        if blocks:
            for domain, per_metric in blocks:
                _print_author_block(entity, domain, per_metric)
                print()
            continue
        inst = _institution_blocks(run, manifest, entity)
        if inst:
            for domain, per_metric in inst:
                _print_institution_block(entity, domain, per_metric)
                print()
            continue
        missing.append(entity)
    if missing:
        raise _NotFound(f"not found in run outputs: {', '.join(missing)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# institutions listing


def run_institutions(run_dir: str, domain: str, metric: str, by: str, top: int) -> int:
    run = Path(run_dir)
    manifest = _load_manifest(run)
    if domain not in manifest["domains"]:
        raise _NotFound(f"domain {domain!r} not in run outputs")
    scheme = manifest["config"]["scheme"]
    path = run / manifest["domains"][domain] / f"institutions_{metric}_{scheme}.csv"
    if not path.exists():
        raise _NotFound(f"metric {metric!r} not in run outputs")
    with open(path, encoding="utf-8") as fh:
        next(fh, None)
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    col = 5 if by == "a" else 6
    rows.sort(key=lambda f: (int(f[col]), f[0]))
    print(
        "{:<6}{:<20}{:>8}{:>10}".format(
            "rank", "institution", "a_count", "total"
        )
    )
    for f in rows[: top if top > 0 else len(rows)]:
        print("{:<6}{:<20}{:>8}{:>10}".format(f[col], f[0], f[3], f[4]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="pubrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="run the full ranking pipeline")
    p.add_argument("--input", required=True, help="corpus TSV directory")
    p.add_argument("--out", default=os.environ.get(OUT_DIR_ENV), help=f"output directory (default ${OUT_DIR_ENV})")
    p.add_argument("--metrics", default="all", help="comma list of metrics, or 'all'")
    p.add_argument("--domains", default="all", help="'all', 'overall', or comma list of domain ids")
    p.add_argument("--scheme", choices=["percentile", "contribution"], default="percentile")
    p.add_argument("--alpha", type=float, default=0.25, help="percentile scheme skew")
    p.add_argument("--self-citations", choices=["keep", "exclude"], default="keep")
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--max-iterations", type=int, default=200)
    p.add_argument("--connections-mode", choices=["weighted", "binary"], default="weighted")
    p.add_argument("--connections-self-loops", choices=["exclude", "include"], default="exclude")
    p.add_argument("--exposure-mix", type=float, default=0.5)
    p.add_argument("--threads", type=int, default=0, help="0 = available parallelism")

    p = sub.add_parser("query", help="look up one or more entities in a prior run")
    p.add_argument("--run", required=True, help="output directory of a compute run")
    p.add_argument("ids", nargs="+", help="author or institution ids")

    p = sub.add_parser("compare", help="head-to-head comparison of entities")
    p.add_argument("--run", required=True)
    p.add_argument("ids", nargs="+")

    p = sub.add_parser("institutions", help="print institution ranking from a run")
    p.add_argument("--run", required=True)
    p.add_argument("--domain", default="overall")
    p.add_argument("--metric", default="influence")
    p.add_argument("--by", choices=["total", "a"], default="total")
    p.add_argument("--top", type=int, default=0, help="limit rows (0 = all)")

    p = sub.add_parser("synth", help="generate a synthetic TSV corpus")
    p.add_argument("--out", default=os.environ.get(OUT_DIR_ENV), help=f"output directory (default ${OUT_DIR_ENV})")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--papers", type=int, default=1000)
    p.add_argument("--authors", type=int, default=300)
    p.add_argument("--venues", type=int, default=20)
    p.add_argument("--institutions", type=int, default=20)
    p.add_argument("--domains", type=int, default=4)
    p.add_argument("--refs", type=float, default=5.0)
    p.add_argument("--bias", type=float, default=1.0)
    p.add_argument("--coauthors", type=float, default=2.5)
    p.add_argument("--year-start", type=int, default=1980)
    p.add_argument("--year-end", type=int, default=2012)

    p = sub.add_parser("validate", help="load a corpus and print its validation report")
    p.add_argument("--input", required=True)

    return parser


def _parse_metrics(raw: str) -> tuple:
    if raw == "all":
        return ALL_METRICS
    kinds = []
    for token in raw.split(","):
        token = token.strip()
        try:
            kinds.append(MetricKind(token))
        except ValueError:
            raise _UsageError(f"unknown metric {token!r}") from None
    return tuple(kinds)


def _parse_domains(raw: str):
    if raw in ("all", "overall"):
        return raw
    return [d.strip() for d in raw.split(",") if d.strip()]


def _dispatch(args) -> int:
    if args.command == "compute":
        if not args.out:
            raise _UsageError(f"--out or ${OUT_DIR_ENV} required")
        try:
            metric_config = MetricConfig(
                damping=args.damping,
                tolerance=args.tolerance,
                max_iterations=args.max_iterations,
                connections_mode=args.connections_mode,
                connections_self_loops=args.connections_self_loops,
                exposure_mix=args.exposure_mix,
                self_citation_policy=args.self_citations,
            )
            scheme = (
                PercentileBased(alpha=args.alpha)
                if args.scheme == "percentile"
                else ContributionBased()
            )
        except ValueError as exc:
            raise _UsageError(str(exc)) from None
        cfg = RunConfig(
            input_dir=args.input,
            output_dir=args.out,
            metrics=_parse_metrics(args.metrics),
            domains=_parse_domains(args.domains),
            scheme=scheme,
            metric_config=metric_config,
            threads=args.threads,
        )
        run_compute(cfg)
        return EXIT_OK

    if args.command in ("query", "compare"):
        if args.command == "compare" and len(args.ids) < 2:
            raise _UsageError("compare needs at least two ids")
        return run_query(args.run, args.ids)

    if args.command == "institutions":
        return run_institutions(args.run, args.domain, args.metric, args.by, args.top)

    if args.command == "synth":
        if not args.out:
            raise _UsageError(f"--out or ${OUT_DIR_ENV} required")
        try:
            cfg = SynthConfig(
                seed=args.seed,
                n_papers=args.papers,
                n_authors=args.authors,
                n_venues=args.venues,
                n_institutions=args.institutions,
                n_domains=args.domains,
                refs_per_paper=args.refs,
                attachment_bias=args.bias,
                coauthors_per_paper=args.coauthors,
                year_span=(args.year_start, args.year_end),
            )
        except ValueError as exc:
            raise _UsageError(str(exc)) from None
        corpus = generate(cfg)
        write_corpus(corpus, args.out)
        print(
            f"wrote {corpus.n_papers} papers, {corpus.n_authors} authors, "
            f"{len(corpus.cit_src)} citations to {args.out}"
        )
        return EXIT_OK

    if args.command == "validate":
        corpus, report = load_corpus(args.input)
        print(
            f"papers={corpus.n_papers} authors={corpus.n_authors} "
            f"venues={corpus.n_venues} institutions={corpus.n_institutions} "
            f"citations={len(corpus.cit_src)} domains={len(corpus.domains)}"
        )
        for key, value in sorted(report.as_dict().items()):
            if key == "duplicate_ids":
                print(f"{key}={len(value)}")
            else:
                print(f"{key}={value}")
        return EXIT_OK

    raise _UsageError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        CorpusFormatError,
        DomainNotFoundError,
        FileNotFoundError,
        _NotFound,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BrokenPipeError:
        return EXIT_OK
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
