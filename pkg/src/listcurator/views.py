"""The four graph views built from explored data around a core set.

Every view is core-anchored: edges start at (or, for the co-list view,
touch) a core member, never between two candidates. Builders are pure
functions of their inputs and can be rerun at any time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .snapshot import FollowEdge, ListRecord, TweetRecord, UserId


class ViewKind(Enum):
    FRIEND = "friend"
    MENTION = "mention"
    RETWEET = "retweet"
    COLIST = "colist"


@dataclass
class ViewGraph:
    """One weighted graph view. Undirected edges are stored once under a
    sorted key pair; use weight() for symmetric lookup."""

    kind: ViewKind
    directed: bool
    nodes: set[UserId] = field(default_factory=set)
    edges: dict[tuple[UserId, UserId], float] = field(default_factory=dict)

    def _key(self, u: UserId, v: UserId) -> tuple[UserId, UserId]:
        if self.directed or u <= v:
            return (u, v)
        return (v, u)

    def weight(self, u: UserId, v: UserId) -> float:
        return self.edges.get(self._key(u, v), 0.0)

    def add_weight(self, u: UserId, v: UserId, w: float) -> None:
        key = self._key(u, v)
        self.edges[key] = self.edges.get(key, 0) + w
        self.nodes.add(u)
        self.nodes.add(v)


@dataclass
class CoreSets:
    """The curated core (ordered) and the explored non-core candidates."""

    core: list[UserId]
    candidates: set[UserId] = field(default_factory=set)

    def __post_init__(self):
        if not self.core:
            raise ValueError("core set must be non-empty")
        if len(set(self.core)) != len(self.core):
            raise ValueError("core set contains duplicates")
        overlap = set(self.core) & self.candidates
        if overlap:
            raise ValueError(f"core and candidates overlap: {sorted(overlap)}")

    @property
    def core_set(self) -> set[UserId]:
        return set(self.core)


def build_friend_graph(sets: CoreSets, follows: Iterable[FollowEdge]) -> ViewGraph:
    """Directed graph of core members and the users they follow.

    An edge A -> B is added for each core A following a B that is core or
    candidate; follow edges between non-core users are dropped.
    """
    core = sets.core_set
    g = ViewGraph(kind=ViewKind.FRIEND, directed=True, nodes=set(core))
    for edge in follows:
        a, b = edge.follower, edge.followee
        if a == b or a not in core:
            continue
        if b in core or b in sets.candidates:
            g.edges[(a, b)] = 1.0
            g.nodes.add(b)
    return g


def _tweet_targets_graph(sets: CoreSets, tweets: Iterable[TweetRecord], kind: ViewKind) -> ViewGraph:
    core = sets.core_set
    g = ViewGraph(kind=kind, directed=True, nodes=set(core))
    for tw in tweets:
        if tw.author not in core:
            continue
        if kind is ViewKind.MENTION:
            targets = set(tw.mentions)
        else:
            targets = {tw.retweet_of} if tw.retweet_of is not None else set()
        targets.discard(tw.author)  # self-interactions carry no signal
        for b in targets:
            g.add_weight(tw.author, b, 1)
    return g


def build_mention_graph(sets: CoreSets, tweets: Iterable[TweetRecord]) -> ViewGraph:
    """Directed graph weighted by the number of core tweets mentioning each
    target (a tweet mentioning the same user twice counts once)."""
    return _tweet_targets_graph(sets, tweets, ViewKind.MENTION)


def build_retweet_graph(sets: CoreSets, tweets: Iterable[TweetRecord]) -> ViewGraph:
    """Directed graph weighted by how many times a core member retweeted
    each original author."""
    return _tweet_targets_graph(sets, tweets, ViewKind.RETWEET)


def build_colist_graph(sets: CoreSets, lists: Iterable[ListRecord]) -> ViewGraph:
    """Undirected graph from co-membership in external user lists.

    Each list is scored by the Jaccard overlap w between its members and
    the core set; if w > 0, every (core member, non-core member) pair in the
    list gains w of edge weight. Duplicate list ids are counted once.
    """
    core = sets.core_set
    g = ViewGraph(kind=ViewKind.COLIST, directed=False, nodes=set(core))
    seen: set[str] = set()
    for lst in lists:
        if lst.list_id in seen:
            continue
        seen.add(lst.list_id)
        inside = lst.members & core
        if not inside:
            continue
        w = len(inside) / len(lst.members | core)
        outside = lst.members - core
        for c in sorted(inside):
            for x in sorted(outside):
                g.add_weight(c, x, w)
    return g


def export_edge_list(graph: ViewGraph, path) -> None:
    """Debug dump: one `source<TAB>target<TAB>weight` line per edge."""
    with open(path, "w", encoding="utf-8") as fh:
        for (u, v) in sorted(graph.edges):
            fh.write(f"{u}\t{v}\t{graph.edges[(u, v)]}\n")


def mention_counts(core_tweets: Iterable[TweetRecord]) -> dict[UserId, int]:
    """Tweet-level mention counts over a tweet collection, excluding
    self-mentions. Shared by the mention view and the exploration policy."""
    counts: dict[UserId, int] = {}
    for tw in core_tweets:
        for target in set(tw.mentions) - {tw.author}:
            counts[target] = counts.get(target, 0) + 1
    return counts
