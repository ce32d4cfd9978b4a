import random

import pytest

from listcurator.snapshot import (
    FollowEdge,
    ListRecord,
    SnapshotStore,
    TweetRecord,
    UserRecord,
)


def make_user(uid, followers=0, friends=0, tweets=0, last=None):
    if tweets > 0 and last is None:
        last = 1_000_000.0
    return UserRecord(
        id=uid,
        follower_count_total=followers,
        friend_count_total=friends,
        total_tweet_count=tweets,
        last_tweet_time=last,
    )


def make_store(user_ids, follows=(), tweets=(), lists=(), records=None):
    """Small-store builder: follower/friend counts derived from the edges,
    tweet counts from the tweets, unless overridden via records."""
    follows = [FollowEdge(a, b) for a, b in follows]
    tweets = list(tweets)
    in_deg = {u: 0 for u in user_ids}
    out_deg = {u: 0 for u in user_ids}
    for e in follows:
        out_deg[e.follower] += 1
        in_deg[e.followee] += 1
    n_tweets = {u: 0 for u in user_ids}
    last = {}
    for t in tweets:
        n_tweets[t.author] += 1
        last[t.author] = max(last.get(t.author, t.time), t.time)
    users = {}
    for u in user_ids:
        users[u] = make_user(
            u, followers=in_deg[u], friends=out_deg[u], tweets=n_tweets[u], last=last.get(u)
        )
    if records:
        users.update({r.id: r for r in records})
    list_records = [ListRecord(list_id=lid, members=frozenset(members)) for lid, members in lists]
    return SnapshotStore(users, follows, tweets, list_records)


def random_follow_store(n_users, n_edges, seed, prefix="u"):
    rng = random.Random(seed)
    ids = [f"{prefix}{i:03d}" for i in range(n_users)]
    edges = set()
    while len(edges) < n_edges:
        a, b = rng.sample(ids, 2)
        edges.add((a, b))
    return make_store(ids, follows=sorted(edges)), ids


@pytest.fixture
def tiny_store():
    return make_store(
        ["a", "b", "c", "x", "y"],
        follows=[("a", "b"), ("a", "x"), ("b", "x"), ("c", "y"), ("x", "y")],
        tweets=[
            TweetRecord(author="a", time=100.0, mentions=("x",)),
            TweetRecord(author="b", time=101.0, mentions=("x", "y")),
            TweetRecord(author="a", time=102.0, retweet_of="y"),
        ],
        lists=[("l1", ["a", "b", "x"]), ("l2", ["c", "y"])],
    )
