"""Planted-community network generator for experiments.

Produces a directed planted-partition follow graph plus mention/retweet
activity sampled along the follow edges, and member lists biased toward a
home community. Output is deterministic for a fixed seed, and user records
are kept consistent with the generated data (follower count = in-degree,
tweet count = authored tweets).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .snapshot import FollowEdge, ListRecord, SnapshotStore, TweetRecord, UserId, UserRecord

# All tweet times fall in a one-week window ending here, so a filter
# anchored at the latest activity sees every tweeting user as active.
REFERENCE_TIME = 1_700_000_000.0
TWEET_WINDOW_SECONDS = 7 * 86_400.0

_ROW_CHUNK = 512  # bounds memory of the edge-sampling matrix


@dataclass
class GeneratorConfig:
    n_users: int
    communities: list[int] = field(default_factory=list)
    p_in: float = 0.1
    p_out: float = 0.01
    mention_rate: float = 0.0
    retweet_rate: float = 0.0
    n_lists: int = 0
    list_community_fidelity: float = 1.0
    seed: int = 0

    def validate(self) -> None:
        if self.n_users <= 0:
            raise ValueError("n_users must be positive")
        if not self.communities or any(s <= 0 for s in self.communities):
            raise ValueError("communities must be a non-empty list of positive sizes")
        if sum(self.communities) != self.n_users:
            raise ValueError(
                f"community sizes sum to {sum(self.communities)}, expected n_users={self.n_users}"
            )
        for name in ("p_in", "p_out", "list_community_fidelity"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.mention_rate < 0 or self.retweet_rate < 0:
            raise ValueError("interaction rates must be >= 0")
        if self.n_lists < 0:
            raise ValueError("n_lists must be >= 0")


def _user_id(i: int) -> UserId:
    return f"u{i:05d}"


def generate(config: GeneratorConfig) -> tuple[SnapshotStore, dict[UserId, int]]:
    """Sample a snapshot and return it with the ground-truth community map."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    n = config.n_users
    sizes = np.asarray(config.communities)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    ids = [_user_id(i) for i in range(n)]

    # Directed follow edges: P(i -> j) = p_in within a community, p_out across.
    edges: list[tuple[int, int]] = []
    for start in range(0, n, _ROW_CHUNK):
        stop = min(start + _ROW_CHUNK, n)
        draws = rng.random((stop - start, n))
        probs = np.where(labels[start:stop, None] == labels[None, :], config.p_in, config.p_out)
        mask = draws < probs
        mask[np.arange(stop - start), np.arange(start, stop)] = False
        for i, j in np.argwhere(mask):
            edges.append((start + int(i), int(j)))

    # Interactions ride on follow edges: a follower authors tweets that
    # mention or retweet the followee.
    tweets: list[TweetRecord] = []
    if edges:
        mention_counts = rng.poisson(config.mention_rate, len(edges))
        retweet_counts = rng.poisson(config.retweet_rate, len(edges))
        total = int(mention_counts.sum() + retweet_counts.sum())
        times = rng.uniform(REFERENCE_TIME - TWEET_WINDOW_SECONDS, REFERENCE_TIME, total)
        t = 0
        for (a, b), n_m, n_r in zip(edges, mention_counts, retweet_counts):
            for _ in range(int(n_m)):
                tweets.append(TweetRecord(author=ids[a], time=float(times[t]), mentions=(ids[b],)))
                t += 1
            for _ in range(int(n_r)):
                tweets.append(TweetRecord(author=ids[a], time=float(times[t]), retweet_of=ids[b]))
                t += 1

    lists = _sample_lists(config, rng, labels, ids)

    out_degree = np.zeros(n, dtype=int)
    in_degree = np.zeros(n, dtype=int)
    for a, b in edges:
        out_degree[a] += 1
        in_degree[b] += 1
    tweet_count: dict[UserId, int] = {}
    last_time: dict[UserId, float] = {}
    for tw in tweets:
        tweet_count[tw.author] = tweet_count.get(tw.author, 0) + 1
        last_time[tw.author] = max(last_time.get(tw.author, tw.time), tw.time)

    users = {
        uid: UserRecord(
            id=uid,
            follower_count_total=int(in_degree[i]),
            friend_count_total=int(out_degree[i]),
            total_tweet_count=tweet_count.get(uid, 0),
            last_tweet_time=last_time.get(uid),
        )
        for i, uid in enumerate(ids)
    }
    follow_edges = [FollowEdge(ids[a], ids[b]) for a, b in edges]
    store = SnapshotStore(users, follow_edges, tweets, lists)
    ground_truth = {uid: int(labels[i]) for i, uid in enumerate(ids)}
    return store, ground_truth


def _sample_lists(
    config: GeneratorConfig, rng: np.random.Generator, labels: np.ndarray, ids: list[UserId]
) -> list[ListRecord]:
    n_comm = len(config.communities)
    members_of = [np.flatnonzero(labels == c) for c in range(n_comm)]
    all_idx = np.arange(len(ids))
    lists: list[ListRecord] = []
    max_size = min(10, len(ids))
    for j in range(config.n_lists):
        home = int(rng.integers(n_comm))
        size = int(rng.integers(min(3, max_size), max_size + 1))
        outside = all_idx[labels != home]
        chosen: set[int] = set()
        for _ in range(size):
            pool = members_of[home]
            if outside.size and rng.random() >= config.list_community_fidelity:
                pool = outside
            chosen.add(int(pool[rng.integers(pool.size)]))
        lists.append(ListRecord(list_id=f"list{j:04d}", members=frozenset(ids[i] for i in chosen)))
    return lists
