"""Per-criterion candidate rankings over the graph views.

Five criterion/view combinations are used: normalized follower count and
HITS-with-priors on the friend graph, and weighted in-degree on the
co-list, mention and retweet graphs. All rankings are descending by score
with ties broken by UserId, so results are fully deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from .snapshot import UserId, UserRecord
from .views import CoreSets, ViewGraph, ViewKind


class Criterion(Enum):
    FRIEND_NFC = "friend_nfc"
    FRIEND_HITS = "friend_hits"
    COLIST_WDEG = "colist"
    MENTION_WDEG = "mention"
    RETWEET_WDEG = "retweet"


CRITERION_ORDER = [
    Criterion.FRIEND_NFC,
    Criterion.FRIEND_HITS,
    Criterion.COLIST_WDEG,
    Criterion.MENTION_WDEG,
    Criterion.RETWEET_WDEG,
]


@dataclass
class Ranking:
    criterion: Criterion
    ordered: list[tuple[UserId, float]]
    converged: bool = True

    def rank_of(self, user: UserId) -> int | None:
        """1-based position of user, or None if unranked."""
        for i, (u, _) in enumerate(self.ordered, start=1):
            if u == user:
                return i
        return None

    def users(self) -> list[UserId]:
        return [u for u, _ in self.ordered]


@dataclass(frozen=True)
class HitsParams:
    beta: float = 0.15
    tol: float = 1e-8
    max_iter: int = 200

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must be in (0, 1)")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


def _sorted_ranking(criterion: Criterion, scores: dict[UserId, float], converged: bool = True) -> Ranking:
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return Ranking(criterion=criterion, ordered=ordered, converged=converged)


_WDEG_CRITERION = {
    ViewKind.MENTION: Criterion.MENTION_WDEG,
    ViewKind.RETWEET: Criterion.RETWEET_WDEG,
    ViewKind.COLIST: Criterion.COLIST_WDEG,
}


def weighted_indegree(graph: ViewGraph, sets: CoreSets) -> Ranking:
    """Rank candidates by total incoming edge weight (incident weight for
    the undirected co-list view). Candidates with zero weight are omitted."""
    if graph.kind not in _WDEG_CRITERION:
        raise ValueError(f"weighted in-degree not defined for {graph.kind}")
    scores: dict[UserId, float] = {}
    for (u, v), w in graph.edges.items():
        if graph.directed:
            if v in sets.candidates:
                scores[v] = scores.get(v, 0) + w
        else:
            for node in (u, v):
                if node in sets.candidates:
                    scores[node] = scores.get(node, 0) + w
    scores = {u: s for u, s in scores.items() if s > 0}
    return _sorted_ranking(_WDEG_CRITERION[graph.kind], scores)


def normalized_indegree(
    friend_graph: ViewGraph,
    sets: CoreSets,
    users: Mapping[UserId, UserRecord],
    log_base: float | None = None,
) -> Ranking:
    """Rank candidates by log(seed followers) * log(max followers / global
    followers).

    seed followers counts the core members following the candidate in the
    friend graph; the scaling maximum is taken over the global follower
    counts of core and candidate users. The log base only rescales scores,
    so it never changes the order (natural log by default).
    """
    if friend_graph.kind is not ViewKind.FRIEND:
        raise ValueError(f"normalized in-degree requires the friend graph, got {friend_graph.kind}")
    log = math.log if log_base is None else (lambda x: math.log(x, log_base))

    seed_followers: dict[UserId, int] = {}
    for (_, b) in friend_graph.edges:
        if b in sets.candidates:
            seed_followers[b] = seed_followers.get(b, 0) + 1
    if not seed_followers:
        return Ranking(Criterion.FRIEND_NFC, [])

    max_followers = max(
        users[u].follower_count_total for u in set(sets.core) | sets.candidates
    )
    scores: dict[UserId, float] = {}
    for u, seed in seed_followers.items():
        total = users[u].follower_count_total
        if total == 0:
            raise ValueError(
                f"candidate {u!r} has {seed} seed follower(s) but a zero global follower count"
            )
        scores[u] = log(seed) * log(max_followers / total)
    return _sorted_ranking(Criterion.FRIEND_NFC, scores)


@dataclass
class HitsResult:
    """Full fixed-point state, exposed for verification against oracles."""

    authority: dict[UserId, float]
    hub: dict[UserId, float]
    prior: dict[UserId, float]
    iterations: int
    converged: bool


def _l1_normalized(v: np.ndarray) -> np.ndarray:
    total = v.sum()
    return v / total if total > 0 else np.zeros_like(v)


def hits_scores(friend_graph: ViewGraph, sets: CoreSets, params: HitsParams = HitsParams()) -> HitsResult:
    """Run the prior-biased hub/authority fixed point on the friend graph.

    Each of the m core users carries prior mass 1/m, non-core nodes 0. In
    one sweep the authority vector is refreshed from the current hubs and
    the hub vector from the fresh authorities:

        a <- (1 - beta) * normalize1(A^T h) + beta * p
        h <- (1 - beta) * normalize1(A a)   + beta * p

    starting from h = a = p, until the L1 change of both vectors drops
    below tol or max_iter sweeps have run (then converged=False).
    """
    if friend_graph.kind is not ViewKind.FRIEND:
        raise ValueError(f"HITS with priors requires the friend graph, got {friend_graph.kind}")
    nodes = sorted(friend_graph.nodes | sets.core_set)
    index = {u: i for i, u in enumerate(nodes)}
    n = len(nodes)
    adj = np.zeros((n, n))
    for (u, v), w in friend_graph.edges.items():
        adj[index[u], index[v]] = w

    prior = np.zeros(n)
    for u in sets.core:
        prior[index[u]] = 1.0 / len(sets.core)

    beta = params.beta
    auth = prior.copy()
    hub = prior.copy()
    converged = False
    iterations = 0
    for iterations in range(1, params.max_iter + 1):
        new_auth = (1 - beta) * _l1_normalized(adj.T @ hub) + beta * prior
        new_hub = (1 - beta) * _l1_normalized(adj @ new_auth) + beta * prior
        delta_a = np.abs(new_auth - auth).sum()
        delta_h = np.abs(new_hub - hub).sum()
        auth, hub = new_auth, new_hub
        if delta_a < params.tol and delta_h < params.tol:
            converged = True
            break

    return HitsResult(
        authority={u: float(auth[index[u]]) for u in nodes},
        hub={u: float(hub[index[u]]) for u in nodes},
        prior={u: float(prior[index[u]]) for u in nodes},
        iterations=iterations,
        converged=converged,
    )


def hits_with_priors(
    friend_graph: ViewGraph, sets: CoreSets, params: HitsParams = HitsParams()
) -> Ranking:
    """Rank candidates by their authority score; unreached candidates
    (authority 0) are omitted."""
    result = hits_scores(friend_graph, sets, params)
    scores = {
        u: a for u, a in result.authority.items() if u in sets.candidates and a > 0
    }
    return _sorted_ranking(Criterion.FRIEND_HITS, scores, converged=result.converged)


def compute_rankings(
    friend_graph: ViewGraph,
    mention_graph: ViewGraph,
    retweet_graph: ViewGraph,
    colist_graph: ViewGraph,
    sets: CoreSets,
    users: Mapping[UserId, UserRecord],
    hits_params: HitsParams = HitsParams(),
) -> list[Ranking]:
    """All five rankings, in the fixed criterion order used everywhere."""
    return [
        normalized_indegree(friend_graph, sets, users),
        hits_with_priors(friend_graph, sets, hits_params),
        weighted_indegree(colist_graph, sets),
        weighted_indegree(mention_graph, sets),
        weighted_indegree(retweet_graph, sets),
    ]


def write_ranking_csv(ranking: Ranking, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("rank,user,score\n")
        for i, (u, s) in enumerate(ranking.ordered, start=1):
            fh.write(f"{i},{u},{s!r}\n")
