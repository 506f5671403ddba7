"""Command-line front door: search, ontology inspection, serving, fixtures.

The CLI embeds the engine directly — no running server is needed — and
keeps stdout strictly for payload; every diagnostic goes to stderr.
Exit codes: 0 success (including zero results), 1 runtime error,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import serialize
from .config import DEFAULT_CONFIG_NAME, Engine, load_config, load_engine
from .errors import ScholarlensError, UnknownClassError
from .extraction import RawDocument, extract_entries, transform_to_canonical
from .ontology import expand_query
from .query import SearchRequest, federate_search
from .text import format_float, normalize

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scholarlens",
        description="Federated scholarly-metadata search over ontology-expanded queries.",
    )
    parser.add_argument("--config", metavar="PATH", help="service config file")
    parser.add_argument(
        "--ontology", metavar="PATH", action="append",
        help="ontology file (repeatable; overrides config)",
    )
    parser.add_argument("--sources-dir", metavar="DIR", help="directory of source adapters")
    parser.add_argument("--cache-dir", metavar="DIR", help="page cache directory")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    search = commands.add_parser("search", help="run a federated search")
    search.add_argument("query", help="free-text query")
    search.add_argument("--depth", type=int, default=1, help="expansion depth (default 1)")
    search.add_argument("--gamma", type=float, default=0.5, help="weight decay (default 0.5)")
    search.add_argument("--sources", help="comma-separated source ids (default all)")
    search.add_argument("--limit", type=int, default=50, help="max records (default 50)")
    search.add_argument(
        "--format", choices=("json", "xml", "table"), default="json", help="output format"
    )
    search.set_defaults(func=cmd_search)

    ontology = commands.add_parser("ontology", help="inspect the class hierarchy")
    onto_cmds = ontology.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    tree = onto_cmds.add_parser("tree", help="print the hierarchy as an indented tree")
    tree.add_argument("--root", help="class id to start from (default: all roots)")
    tree.set_defaults(func=cmd_ontology_tree)
    expand = onto_cmds.add_parser("expand", help="show expansion terms and weights")
    expand.add_argument("term", help="seed term")
    expand.add_argument("--depth", type=int, default=1)
    expand.add_argument("--gamma", type=float, default=0.5)
    expand.set_defaults(func=cmd_ontology_expand)

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.set_defaults(func=cmd_serve)

    fixtures = commands.add_parser("fixtures", help="fixture corpus maintenance")
    fix_cmds = fixtures.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    validate = fix_cmds.add_parser(
        "validate", help="re-extract every fixture page and check the manifest"
    )
    validate.add_argument(
        "--manifest", metavar="PATH", help="manifest file (default fixtures/manifest.json)"
    )
    validate.set_defaults(func=cmd_fixtures_validate)

    return parser


def _load_engine(args: argparse.Namespace) -> Engine:
    config_path = args.config
    if config_path is None and Path(DEFAULT_CONFIG_NAME).is_file():
        config_path = DEFAULT_CONFIG_NAME
    overrides = {}
    if args.ontology:
        overrides["ontology"] = ",".join(args.ontology)
    if args.sources_dir:
        overrides["sources_dir"] = args.sources_dir
    if args.cache_dir:
        overrides["cache_dir"] = args.cache_dir
    return load_engine(load_config(config_path, overrides=overrides))


def cmd_search(args: argparse.Namespace) -> int:
    if not normalize(args.query):
        print("error: query must not be blank", file=sys.stderr)
        return EXIT_USAGE
    engine = _load_engine(args)
    req = SearchRequest(
        raw_query=args.query,
        depth=args.depth,
        gamma=args.gamma,
        sources=(
            [s.strip() for s in args.sources.split(",") if s.strip()] if args.sources else None
        ),
        limit=args.limit,
        format=args.format,
    )
    rs = federate_search(req, engine.ontology, engine.registry, cache=engine.cache)
    if args.format == "xml":
        sys.stdout.buffer.write(serialize.to_xml(rs))
    elif args.format == "table":
        sys.stdout.write(serialize.to_table(rs))
    else:
        sys.stdout.buffer.write(serialize.to_json(rs))
        sys.stdout.buffer.write(b"\n")
    logger.info("%d records, %d duplicates removed", len(rs.records), rs.dedup_removed)
    return EXIT_OK


def cmd_ontology_tree(args: argparse.Namespace) -> int:
    engine = _load_engine(args)
    o = engine.ontology

    def walk(node_id: str, indent: int) -> None:
        print("  " * indent + o.nodes[node_id].label)
        for child in sorted(o.children_index[node_id]):
            walk(child, indent + 1)

    if args.root is not None:
        root = normalize(args.root)
        if root not in o.nodes:
            raise UnknownClassError(root)
        walk(root, 0)
    else:
        for root in sorted(o.root_ids):
            walk(root, 0)
    return EXIT_OK


def cmd_ontology_expand(args: argparse.Namespace) -> int:
    engine = _load_engine(args)
    eq = expand_query(engine.ontology, [args.term], depth=args.depth, gamma=args.gamma)
    for term, weight in eq.terms_by_weight():
        print(f"{term} {format_float(weight)}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config_path = args.config
    if config_path is None and Path(DEFAULT_CONFIG_NAME).is_file():
        config_path = DEFAULT_CONFIG_NAME
    config = load_config(config_path)
    engine = load_engine(config)
    app = create_app(engine=engine)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return EXIT_OK


def cmd_fixtures_validate(args: argparse.Namespace) -> int:
    engine = _load_engine(args)
    manifest_path = Path(args.manifest) if args.manifest else Path("fixtures/manifest.json")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read manifest {manifest_path}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    failures = 0
    checked = 0
    for entry in manifest.get("entries", []):
        path = Path(entry["file"])
        source_id = entry["source"]
        expected = int(entry["records"])
        checked += 1
        ruleset = engine.registry.rulesets.get(source_id)
        if ruleset is None:
            print(f"FAIL {path}: unknown source {source_id!r}", file=sys.stderr)
            failures += 1
            continue
        try:
            doc = RawDocument(
                source_id=source_id,
                url=path.as_posix(),
                media_kind="json" if path.suffix == ".json" else "html",
                body=path.read_bytes(),
            )
            idoc = extract_entries(doc, ruleset)
            records = transform_to_canonical(idoc, authors_split=ruleset.authors_split)
        except (OSError, ScholarlensError) as exc:
            print(f"FAIL {path}: {exc}", file=sys.stderr)
            failures += 1
            continue
        if len(records) != expected:
            print(
                f"FAIL {path}: extracted {len(records)} records, manifest says {expected}",
                file=sys.stderr,
            )
            failures += 1

    if failures:
        print(f"{failures}/{checked} fixture pages failed validation", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"validated {checked} fixture pages")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if not getattr(args, "func", None):
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ScholarlensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
