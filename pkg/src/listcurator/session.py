"""Curation session state and the bootstrap -> recommend -> select -> update loop.

The session owns the core/candidate sets, every explored data slice (keyed
by the user it was fetched for, replaced on re-fetch), the iteration
history, and an instrumented log of fetch calls for budget auditing. All
state serializes to a deterministic JSON checkpoint, so identical runs
produce byte-identical files and interrupted runs can resume.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .aggregation import (
    FilterConfig,
    IterationRecord,
    RecommendationBatch,
    batch_from_dict,
    batch_to_dict,
    recommend,
)
from .ranking import HitsParams
from .snapshot import (
    FollowEdge,
    ListRecord,
    SnapshotStore,
    TweetRecord,
    UserId,
)
from .views import CoreSets, mention_counts


@dataclass(frozen=True)
class ExplorationBudgets:
    """Per-user caps applied to every exploration fetch."""

    max_links: int = 1000
    max_lists: int = 1000
    max_tweets: int = 1000
    degree_cap: int = 50_000
    mention_fanout: int = 10

    def __post_init__(self):
        for name in ("max_links", "max_lists", "max_tweets", "degree_cap", "mention_fanout"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass
class CurationSession:
    sets: CoreSets
    budgets: ExplorationBudgets = field(default_factory=ExplorationBudgets)
    rng_seed: int = 0
    iteration: int = 0
    snapshot_path: str | None = None
    explored_friends: dict[UserId, list[UserId]] = field(default_factory=dict)
    explored_followers: dict[UserId, list[UserId]] = field(default_factory=dict)
    explored_tweets: dict[UserId, list[TweetRecord]] = field(default_factory=dict)
    explored_lists: dict[UserId, list[ListRecord]] = field(default_factory=dict)
    history: list[IterationRecord] = field(default_factory=list)
    fetch_log: list[dict] = field(default_factory=list)

    # -- derived data for the view builders -----------------------------

    def explored_follow_edges(self) -> set[FollowEdge]:
        edges: set[FollowEdge] = set()
        for u, friends in self.explored_friends.items():
            edges.update(FollowEdge(u, f) for f in friends if f != u)
        for u, followers in self.explored_followers.items():
            edges.update(FollowEdge(g, u) for g in followers if g != u)
        return edges

    def explored_core_tweets(self) -> list[TweetRecord]:
        tweets: list[TweetRecord] = []
        for u in self.sets.core:
            tweets.extend(self.explored_tweets.get(u, ()))
        return tweets

    def explored_list_records(self) -> list[ListRecord]:
        by_id: dict[str, ListRecord] = {}
        for u in sorted(self.explored_lists):
            for lst in self.explored_lists[u]:
                by_id.setdefault(lst.list_id, lst)
        return [by_id[lid] for lid in sorted(by_id)]

    def latest_record(self) -> IterationRecord | None:
        return self.history[-1] if self.history else None

    def latest_batch(self) -> RecommendationBatch | None:
        record = self.latest_record()
        return record.batch if record else None


def _explore(session: CurationSession, store: SnapshotStore, targets: list[UserId], iteration: int) -> None:
    """Fetch the data slices for each target user (replacing prior slices)
    and admit newly discovered non-core users under the degree cap."""
    budgets = session.budgets
    discovered: set[UserId] = set()
    for u in targets:
        friends, followers = store.fetch_neighbors(u, budgets.max_links)
        lists = store.fetch_lists(u, budgets.max_lists)
        tweets = store.fetch_tweets(u, budgets.max_tweets)
        session.explored_friends[u] = friends
        session.explored_followers[u] = followers
        session.explored_lists[u] = lists
        session.explored_tweets[u] = tweets
        session.fetch_log.append(
            {
                "iteration": iteration,
                "user": u,
                "friends": len(friends),
                "followers": len(followers),
                "lists": len(lists),
                "tweets": len(tweets),
            }
        )
        discovered.update(friends)
        discovered.update(followers)
        for lst in lists:
            discovered.update(lst.members)
        for tw in tweets:
            discovered.update(tw.mentions)
            if tw.retweet_of is not None:
                discovered.add(tw.retweet_of)

    core = session.sets.core_set
    cap = budgets.degree_cap
    for u in sorted(discovered):
        if u in core or u in session.sets.candidates:
            continue
        rec = store.users[u]
        if rec.friend_count_total > cap or rec.follower_count_total > cap:
            continue
        session.sets.candidates.add(u)


def bootstrap(
    seed_list: list[UserId],
    store: SnapshotStore,
    budgets: ExplorationBudgets | None = None,
    rng_seed: int = 0,
    snapshot_path: str | None = None,
) -> CurationSession:
    """Start a session: the seed list becomes the core and each seed's ego
    network, lists and tweets are fetched under the budgets."""
    seeds: list[UserId] = []
    for s in seed_list:
        if s not in seeds:
            seeds.append(s)
    if not seeds:
        raise ValueError("seed list is empty")
    missing = [s for s in seeds if s not in store.users]
    if missing:
        raise ValueError(f"unknown seed users: {', '.join(missing)}")

    session = CurationSession(
        sets=CoreSets(core=seeds, candidates=set()),
        budgets=budgets or ExplorationBudgets(),
        rng_seed=rng_seed,
        snapshot_path=snapshot_path,
    )
    _explore(session, store, seeds, iteration=0)
    return session


def select(session: CurationSession, accepted: list[UserId]) -> None:
    """Migrate accepted users from the latest batch into the core; the rest
    of the batch is marked rejected for this iteration (still candidates)."""
    record = session.latest_record()
    if record is None:
        raise RuntimeError("no recommendation batch to select from")
    batch_users = set(record.batch.users())
    deduped: list[UserId] = []
    for u in accepted:
        if u not in deduped:
            deduped.append(u)
    invalid = [u for u in deduped if u not in batch_users or u not in session.sets.candidates]
    if invalid:
        raise ValueError(f"not selectable from the latest batch: {invalid}")

    for u in deduped:
        session.sets.candidates.discard(u)
        session.sets.core.append(u)
        record.selected.append(u)
    migrated = set(record.selected)
    record.rejected = [u for u in record.batch.users() if u not in migrated]


def update(session: CurationSession, store: SnapshotStore) -> None:
    """Refresh exploration after a selection: re-fetch the core, the last
    batch's non-migrated users, and the top-m most-mentioned users in core
    tweets; then advance the iteration counter."""
    targets: list[UserId] = list(session.sets.core)
    seen = set(targets)
    record = session.latest_record()
    if record is not None:
        for u in record.rejected:
            if u not in seen:
                targets.append(u)
                seen.add(u)

    counts = mention_counts(session.explored_core_tweets())
    core = session.sets.core_set
    cap = session.budgets.degree_cap
    mentioned = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    taken = 0
    for u, _ in mentioned:
        if taken >= session.budgets.mention_fanout:
            break
        if u in core or u in seen:
            continue
        rec = store.users.get(u)
        if rec is None or rec.friend_count_total > cap or rec.follower_count_total > cap:
            continue
        targets.append(u)
        seen.add(u)
        taken += 1

    _explore(session, store, targets, iteration=session.iteration + 1)
    session.iteration += 1


def run_auto(
    seed_list: list[UserId],
    store: SnapshotStore,
    iterations: int,
    r: int,
    top_k: int,
    budgets: ExplorationBudgets | None = None,
    filters: FilterConfig | None = None,
    hits_params: HitsParams = HitsParams(),
    rng_seed: int = 0,
    snapshot_path: str | None = None,
    checkpoint_path=None,
    on_cycle=None,
) -> CurationSession:
    """Bootstrap, then run recommend/select/update cycles with an automatic
    top-k selector in place of the human curator.

    on_cycle(session) runs after each completed cycle (used by the
    evaluation harness to score intermediate cores). A checkpoint is
    written after the bootstrap and after each phase when a path is given.
    """
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    if filters is None:
        from .snapshot import latest_tweet_time

        filters = FilterConfig(reference_time=latest_tweet_time(store))

    session = bootstrap(seed_list, store, budgets, rng_seed=rng_seed, snapshot_path=snapshot_path)
    _maybe_checkpoint(session, checkpoint_path)
    for _ in range(iterations):
        batch = recommend(session, store, r, filters, hits_params)
        _maybe_checkpoint(session, checkpoint_path)
        select(session, batch.users()[: max(top_k, 0)])
        _maybe_checkpoint(session, checkpoint_path)
        update(session, store)
        _maybe_checkpoint(session, checkpoint_path)
        if on_cycle is not None:
            on_cycle(session)
    return session


def _maybe_checkpoint(session: CurationSession, path) -> None:
    if path is not None:
        save_checkpoint(session, path)


# -- checkpoint serialization -------------------------------------------


def _tweet_to_dict(tw: TweetRecord) -> dict:
    obj: dict = {"author": tw.author, "time": tw.time, "mentions": list(tw.mentions)}
    if tw.retweet_of is not None:
        obj["retweet_of"] = tw.retweet_of
    return obj


def _tweet_from_dict(obj: dict) -> TweetRecord:
    return TweetRecord(
        author=obj["author"],
        time=obj["time"],
        mentions=tuple(obj["mentions"]),
        retweet_of=obj.get("retweet_of"),
    )


def session_to_dict(session: CurationSession) -> dict:
    return {
        "format": "listcurator-session/1",
        "snapshot_path": session.snapshot_path,
        "rng_seed": session.rng_seed,
        "iteration": session.iteration,
        "core": list(session.sets.core),
        "candidates": sorted(session.sets.candidates),
        "budgets": {
            "max_links": session.budgets.max_links,
            "max_lists": session.budgets.max_lists,
            "max_tweets": session.budgets.max_tweets,
            "degree_cap": session.budgets.degree_cap,
            "mention_fanout": session.budgets.mention_fanout,
        },
        "explored": {
            "friends": session.explored_friends,
            "followers": session.explored_followers,
            "tweets": {
                u: [_tweet_to_dict(t) for t in tws] for u, tws in session.explored_tweets.items()
            },
            "lists": {
                u: [{"list_id": l.list_id, "members": sorted(l.members)} for l in ls]
                for u, ls in session.explored_lists.items()
            },
        },
        "history": [
            {
                "batch": batch_to_dict(rec.batch),
                "prefilter_scores": [[u, s] for u, s in rec.prefilter_scores],
                "selected": list(rec.selected),
                "rejected": list(rec.rejected),
            }
            for rec in session.history
        ],
        "fetch_log": session.fetch_log,
    }


def session_from_dict(data: dict) -> CurationSession:
    budgets = ExplorationBudgets(**data["budgets"])
    explored = data["explored"]
    session = CurationSession(
        sets=CoreSets(core=list(data["core"]), candidates=set(data["candidates"])),
        budgets=budgets,
        rng_seed=data["rng_seed"],
        iteration=data["iteration"],
        snapshot_path=data.get("snapshot_path"),
        explored_friends={u: list(v) for u, v in explored["friends"].items()},
        explored_followers={u: list(v) for u, v in explored["followers"].items()},
        explored_tweets={
            u: [_tweet_from_dict(t) for t in tws] for u, tws in explored["tweets"].items()
        },
        explored_lists={
            u: [ListRecord(list_id=o["list_id"], members=frozenset(o["members"])) for o in ls]
            for u, ls in explored["lists"].items()
        },
        history=[
            IterationRecord(
                batch=batch_from_dict(rec["batch"]),
                prefilter_scores=[(u, s) for u, s in rec["prefilter_scores"]],
                selected=list(rec["selected"]),
                rejected=list(rec["rejected"]),
            )
            for rec in data["history"]
        ],
        fetch_log=[dict(entry) for entry in data["fetch_log"]],
    )
    return session


def checkpoint_bytes(session: CurationSession) -> bytes:
    """Canonical serialized form; identical sessions give identical bytes."""
    return (json.dumps(session_to_dict(session), sort_keys=True, indent=2) + "\n").encode("utf-8")


def save_checkpoint(session: CurationSession, path) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(checkpoint_bytes(session))
    os.replace(tmp, path)


def load_checkpoint(path) -> CurationSession:
    with open(path, "rb") as fh:
        return session_from_dict(json.loads(fh.read().decode("utf-8")))
