"""Combining the per-criterion rankings into one recommendation batch.

The rankings are turned into a users x criteria matrix of reversed rank
scores (best rank in a list of length L scores L, unranked scores 0), the
dominant left singular vector of that matrix gives the aggregate score,
and activity filters prune the result before truncating to the top r.

Storing reversed rank scores rather than raw ranks keeps "sort the
singular vector descending" pointing at the best users: with raw ranks the
non-negative dominant vector would be largest for the worst-ranked rows.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping, Sequence

import numpy as np

from .ranking import CRITERION_ORDER, Criterion, HitsParams, Ranking, compute_rankings
from .snapshot import UserId, UserRecord
from .views import (
    build_colist_graph,
    build_friend_graph,
    build_mention_graph,
    build_retweet_graph,
)

if TYPE_CHECKING:  # pragma: no cover
    from .session import CurationSession
    from .snapshot import SnapshotStore


@dataclass
class RankMatrix:
    rows: list[UserId]
    cols: list[Criterion]
    entries: np.ndarray


@dataclass(frozen=True)
class FilterConfig:
    """Activity filters applied to aggregated recommendations."""

    reference_time: float
    min_total_tweets: int = 25
    max_inactive_days: int = 14
    max_degree: int = 50_000

    def __post_init__(self):
        if self.min_total_tweets < 0 or self.max_inactive_days < 0 or self.max_degree < 0:
            raise ValueError("filter thresholds must be non-negative")


@dataclass
class BatchItem:
    user: UserId
    aggregate_score: float
    criterion_ranks: dict[Criterion, int] = field(default_factory=dict)


@dataclass
class RecommendationBatch:
    iteration: int
    items: list[BatchItem]

    def users(self) -> list[UserId]:
        return [item.user for item in self.items]


@dataclass
class IterationRecord:
    """One recommend/select cycle in the session history.

    Until a selection is submitted, every batch member counts as
    non-migrated (selected empty, rejected = whole batch). The pre-filter
    aggregate scores are kept even when filtering empties the batch.
    """

    batch: RecommendationBatch
    prefilter_scores: list[tuple[UserId, float]]
    selected: list[UserId] = field(default_factory=list)
    rejected: list[UserId] = field(default_factory=list)


def build_rank_matrix(rankings: Sequence[Ranking]) -> RankMatrix:
    """Users x criteria matrix of reversed rank scores.

    Rows are the UserId-sorted union of ranked users; columns follow the
    fixed criterion order. A user ranked at position k in a ranking of
    length L scores L - k + 1 in that column, 0 where unranked.
    """
    if not any(r.ordered for r in rankings):
        raise ValueError("all rankings are empty")
    cols = sorted((r for r in rankings), key=lambda r: CRITERION_ORDER.index(r.criterion))
    rows = sorted({u for r in cols for u, _ in r.ordered})
    row_index = {u: i for i, u in enumerate(rows)}
    entries = np.zeros((len(rows), len(cols)))
    for j, ranking in enumerate(cols):
        length = len(ranking.ordered)
        for pos, (u, _) in enumerate(ranking.ordered, start=1):
            entries[row_index[u], j] = length - pos + 1
    return RankMatrix(rows=rows, cols=[r.criterion for r in cols], entries=entries)


def dominant_left_singular_vector(matrix: np.ndarray) -> np.ndarray:
    """First left singular vector, sign-fixed so its entries sum >= 0."""
    u, _, _ = np.linalg.svd(matrix, full_matrices=False)
    vec = u[:, 0]
    if vec.sum() < 0:
        vec = -vec
    return vec


def svd_aggregate(matrix: RankMatrix) -> list[tuple[UserId, float]]:
    """Aggregate scores from the dominant left singular vector, sorted
    descending (ties by UserId)."""
    if not np.any(matrix.entries):
        raise ValueError("rank matrix is all zeros")
    vec = dominant_left_singular_vector(matrix.entries)
    scored = list(zip(matrix.rows, (float(x) for x in vec)))
    return sorted(scored, key=lambda kv: (-kv[1], kv[0]))


def apply_filters(
    candidates: Sequence[tuple[UserId, float]],
    config: FilterConfig,
    users: Mapping[UserId, UserRecord],
) -> list[tuple[UserId, float]]:
    """Drop inactive, low-volume and very-high-degree users, keeping order."""
    cutoff = config.reference_time - config.max_inactive_days * 86_400
    kept = []
    for user, score in candidates:
        rec = users[user]
        if rec.total_tweet_count < config.min_total_tweets:
            continue
        if rec.last_tweet_time is None or rec.last_tweet_time < cutoff:
            continue
        if rec.friend_count_total > config.max_degree or rec.follower_count_total > config.max_degree:
            continue
        kept.append((user, score))
    return kept


def recommend(
    session: "CurationSession",
    store: "SnapshotStore",
    r: int,
    filters: FilterConfig,
    hits_params: HitsParams = HitsParams(),
) -> RecommendationBatch:
    """Run the full view -> rank -> aggregate -> filter pipeline and record
    the outcome in the session history.

    An empty candidate pool (no ranking has any entry) yields an empty
    batch rather than an error.
    """
    sets = session.sets
    friend = build_friend_graph(sets, session.explored_follow_edges())
    core_tweets = session.explored_core_tweets()
    mention = build_mention_graph(sets, core_tweets)
    retweet = build_retweet_graph(sets, core_tweets)
    colist = build_colist_graph(sets, session.explored_list_records())
    rankings = compute_rankings(friend, mention, retweet, colist, sets, store.users, hits_params)

    if any(rk.ordered for rk in rankings):
        matrix = build_rank_matrix(rankings)
        prefilter = svd_aggregate(matrix)
        filtered = apply_filters(prefilter, filters, store.users)
    else:
        prefilter = []
        filtered = []

    rank_lookup = [
        (rk.criterion, {u: pos for pos, (u, _) in enumerate(rk.ordered, start=1)}) for rk in rankings
    ]
    items = []
    for user, score in filtered[: max(r, 0)]:
        ranks = {crit: pos[user] for crit, pos in rank_lookup if user in pos}
        items.append(BatchItem(user=user, aggregate_score=score, criterion_ranks=ranks))

    batch = RecommendationBatch(iteration=session.iteration + 1, items=items)
    session.history.append(
        IterationRecord(
            batch=batch,
            prefilter_scores=prefilter,
            selected=[],
            rejected=batch.users(),
        )
    )
    return batch


def batch_to_dict(batch: RecommendationBatch) -> dict:
    return {
        "iteration": batch.iteration,
        "items": [
            {
                "user": item.user,
                "score": item.aggregate_score,
                "ranks": {crit.value: rank for crit, rank in sorted(item.criterion_ranks.items(), key=lambda kv: kv[0].value)},
            }
            for item in batch.items
        ],
    }


def batch_from_dict(data: dict) -> RecommendationBatch:
    return RecommendationBatch(
        iteration=data["iteration"],
        items=[
            BatchItem(
                user=item["user"],
                aggregate_score=item["score"],
                criterion_ranks={Criterion(name): rank for name, rank in item["ranks"].items()},
            )
            for item in data["items"]
        ],
    )


def export_batch_json(batch: RecommendationBatch, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(batch_to_dict(batch), fh, sort_keys=True, indent=2)
        fh.write("\n")


def export_batch_csv(batch: RecommendationBatch, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user", "score"] + [f"rank_{c.value}" for c in CRITERION_ORDER])
        for item in batch.items:
            row = [item.user, repr(item.aggregate_score)]
            row += [item.criterion_ranks.get(c, "") for c in CRITERION_ORDER]
            writer.writerow(row)
