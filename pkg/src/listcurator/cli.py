"""Command-line interface: generate / run / eval / silo / serve.

Defaults mirror the reference experimental setup: 1000-link/list/tweet
budgets, 50,000 degree cap, 25-tweet minimum, 14-day activity window,
r=50 recommendations with the top 5 auto-selected over 6 iterations.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .aggregation import FilterConfig, export_batch_csv, export_batch_json
from .evaluation import (
    run_crossval_experiment,
    run_silo_experiment,
    write_eval_csv,
    write_eval_json,
    write_silo_csv,
    write_silo_json,
)
from .generator import GeneratorConfig, generate
from .ranking import HitsParams
from .session import ExplorationBudgets, load_checkpoint, run_auto, save_checkpoint
from .snapshot import SnapshotError, latest_tweet_time, load_snapshot, save_snapshot

log = logging.getLogger("listcurator")


def read_user_list(path) -> list[str]:
    """One UserId per line; `#` starts a comment, blank lines are skipped."""
    users = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            entry = line.split("#", 1)[0].strip()
            if entry:
                users.append(entry)
    return users


def _budget_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("exploration budgets")
    group.add_argument("--max-links", type=int, default=1000, help="links fetched per user")
    group.add_argument("--max-lists", type=int, default=1000, help="lists fetched per user")
    group.add_argument("--max-tweets", type=int, default=1000, help="tweets fetched per user")
    group.add_argument("--degree-cap", type=int, default=50_000, help="drop users above this degree")
    group.add_argument("--mention-fanout", type=int, default=10, help="top mentioned users to expand")


def _filter_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("recommendation filters")
    group.add_argument("--min-tweets", type=int, default=25, help="minimum total tweet count")
    group.add_argument("--max-inactive-days", type=int, default=14, help="recent-activity window")
    group.add_argument(
        "--reference-time",
        type=float,
        default=None,
        help="activity filter anchor (latest snapshot tweet time if omitted)",
    )


def _loop_args(parser: argparse.ArgumentParser, iterations: int) -> None:
    group = parser.add_argument_group("curation loop")
    group.add_argument("--iterations", type=int, default=iterations, help="recommend/select/update cycles")
    group.add_argument("--top-k", type=int, default=5, help="users auto-selected per cycle")
    group.add_argument("--r", type=int, default=50, help="recommendations per batch")
    group.add_argument("--hits-beta", type=float, default=0.15, help="prior mass in HITS")


def _budgets_from(args) -> ExplorationBudgets:
    return ExplorationBudgets(
        max_links=args.max_links,
        max_lists=args.max_lists,
        max_tweets=args.max_tweets,
        degree_cap=args.degree_cap,
        mention_fanout=args.mention_fanout,
    )


def _filters_from(args, store) -> FilterConfig:
    reference = args.reference_time
    if reference is None:
        reference = latest_tweet_time(store)
    return FilterConfig(
        reference_time=reference,
        min_total_tweets=args.min_tweets,
        max_inactive_days=args.max_inactive_days,
        max_degree=args.degree_cap,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="listcurator",
        description="Expand a curated seed list over multiple social-graph views.",
    )
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_command(name, help_text):
        cmd = sub.add_parser(
            name, help=help_text, formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        cmd.add_argument("--verbose", action="store_true", help="log progress to stderr")
        return cmd

    p_gen = add_command("generate", "write a synthetic snapshot")
    p_gen.add_argument("--users", type=int, required=True)
    p_gen.add_argument("--communities", required=True, help="comma-separated sizes, e.g. 100,100")
    p_gen.add_argument("--p-in", type=float, required=True)
    p_gen.add_argument("--p-out", type=float, required=True)
    p_gen.add_argument("--mention-rate", type=float, default=0.0)
    p_gen.add_argument("--retweet-rate", type=float, default=0.0)
    p_gen.add_argument("--lists", type=int, default=0)
    p_gen.add_argument("--list-fidelity", type=float, default=1.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="snapshot file to write")
    p_gen.add_argument("--labels-out", default=None, help="optional community-label CSV")

    p_run = add_command("run", "run the automatic curation loop")
    p_run.add_argument("--snapshot", required=True)
    p_run.add_argument("--seeds", required=True, help="seed user list file")
    p_run.add_argument("--out", required=True, help="output directory")
    _loop_args(p_run, iterations=6)
    _budget_args(p_run)
    _filter_args(p_run)

    p_eval = add_command("eval", "cross-validation precision/recall experiment")
    p_eval.add_argument("--snapshot", required=True)
    p_eval.add_argument("--list", dest="list_file", required=True, help="full curated list file")
    p_eval.add_argument("--k", type=int, default=4)
    p_eval.add_argument("--split-seed", type=int, default=0)
    p_eval.add_argument("--out", required=True, help="output path prefix")
    _loop_args(p_eval, iterations=6)
    _budget_args(p_eval)
    _filter_args(p_eval)

    p_silo = add_command("silo", "single-community seeding experiment")
    p_silo.add_argument("--snapshot", required=True)
    p_silo.add_argument("--list", dest="list_file", required=True, help="full curated list file")
    p_silo.add_argument("--seeds", required=True, help="biased seed subset file")
    p_silo.add_argument("--labels", required=True, help="community-label CSV (user,community)")
    p_silo.add_argument("--out", required=True, help="output path prefix")
    _loop_args(p_silo, iterations=4)
    _budget_args(p_silo)
    _filter_args(p_silo)

    p_serve = add_command("serve", "HTTP service for the curator UI")
    p_serve.add_argument("--snapshot", required=True)
    p_serve.add_argument("--seeds", default=None, help="seed list file (fresh session)")
    p_serve.add_argument("--session", default=None, help="resume from a checkpoint file")
    p_serve.add_argument("--checkpoint-out", default=None, help="write checkpoints here")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui-dir", default=None, help="static UI bundle directory")
    _loop_args(p_serve, iterations=0)
    _budget_args(p_serve)
    _filter_args(p_serve)

    return parser


def cmd_generate(args) -> int:
    sizes = [int(s) for s in args.communities.split(",") if s.strip()]
    config = GeneratorConfig(
        n_users=args.users,
        communities=sizes,
        p_in=args.p_in,
        p_out=args.p_out,
        mention_rate=args.mention_rate,
        retweet_rate=args.retweet_rate,
        n_lists=args.lists,
        list_community_fidelity=args.list_fidelity,
        seed=args.seed,
    )
    store, labels = generate(config)
    save_snapshot(store, args.out)
    log.info("wrote snapshot with %d users to %s", len(store.users), args.out)
    if args.labels_out:
        with open(args.labels_out, "w", encoding="utf-8") as fh:
            fh.write("user,community\n")
            for uid in sorted(labels):
                fh.write(f"{uid},{labels[uid]}\n")
    return 0


def cmd_run(args) -> int:
    store = load_snapshot(args.snapshot)
    seeds = read_user_list(args.seeds)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    session = run_auto(
        seeds,
        store,
        iterations=args.iterations,
        r=args.r,
        top_k=args.top_k,
        budgets=_budgets_from(args),
        filters=_filters_from(args, store),
        hits_params=HitsParams(beta=args.hits_beta),
        snapshot_path=str(args.snapshot),
        checkpoint_path=out_dir / "checkpoint.json",
    )
    for record in session.history:
        batch = record.batch
        export_batch_json(batch, out_dir / f"batch_{batch.iteration:03d}.json")
        export_batch_csv(batch, out_dir / f"batch_{batch.iteration:03d}.csv")
    save_checkpoint(session, out_dir / "checkpoint.json")
    log.info(
        "finished %d iteration(s): core %d, candidates %d",
        session.iteration,
        len(session.sets.core),
        len(session.sets.candidates),
    )
    return 0


def cmd_eval(args) -> int:
    from .figures import plot_eval_report

    store = load_snapshot(args.snapshot)
    full_list = read_user_list(args.list_file)
    report = run_crossval_experiment(
        store,
        full_list,
        k=args.k,
        iterations=args.iterations,
        top_k=args.top_k,
        r=args.r,
        budgets=_budgets_from(args),
        filters=_filters_from(args, store),
        hits_params=HitsParams(beta=args.hits_beta),
        split_seed=args.split_seed,
    )
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    write_eval_csv(report, f"{prefix}.csv")
    write_eval_json(report, f"{prefix}.json")
    plot_eval_report(report, f"{prefix}.png")
    log.info("wrote %s.{csv,json,png}", prefix)
    return 0


def read_labels_csv(path) -> dict[str, int]:
    labels: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.lower().startswith("user,"):
            raise ValueError(f"{path}: expected 'user,community' header")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            user, community = line.split(",", 1)
            labels[user] = int(community)
    return labels


def cmd_silo(args) -> int:
    from .figures import plot_silo_report

    store = load_snapshot(args.snapshot)
    full_list = read_user_list(args.list_file)
    subset = read_user_list(args.seeds)
    labels = read_labels_csv(args.labels)
    report = run_silo_experiment(
        store,
        full_list,
        subset,
        iterations=args.iterations,
        top_k=args.top_k,
        r=args.r,
        labels=labels,
        budgets=_budgets_from(args),
        filters=_filters_from(args, store),
        hits_params=HitsParams(beta=args.hits_beta),
    )
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    write_silo_csv(report, f"{prefix}.csv")
    write_silo_json(report, f"{prefix}.json")
    plot_silo_report(report, f"{prefix}.png")
    log.info("wrote %s.{csv,json,png}", prefix)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ApiSession, create_app
    from .session import bootstrap

    store = load_snapshot(args.snapshot)
    if args.session:
        session = load_checkpoint(args.session)
    elif args.seeds:
        session = bootstrap(read_user_list(args.seeds), store, _budgets_from(args))
    else:
        raise ValueError("serve needs --session or --seeds")
    api = ApiSession(
        session,
        store,
        r=args.r,
        filters=_filters_from(args, store),
        hits_params=HitsParams(beta=args.hits_beta),
        checkpoint_path=args.checkpoint_out,
    )
    app = create_app(api, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info" if args.verbose else "warning")
    return 0


_COMMANDS = {
    "generate": cmd_generate,
    "run": cmd_run,
    "eval": cmd_eval,
    "silo": cmd_silo,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except (SnapshotError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
