"""Offline social-network snapshot: data model, JSONL file format, query ops.

A snapshot stands in for a live network API. It is immutable after
construction and all queries are pure, so concurrent reads are safe.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

UserId = str


class SnapshotError(Exception):
    """Base class for snapshot load/validation failures."""


class SnapshotParseError(SnapshotError):
    """A line of the snapshot file could not be parsed or has bad fields."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DanglingReferenceError(SnapshotError):
    """A follow/tweet/list record references a UserId with no user record."""

    def __init__(self, user_id: UserId, context: str):
        super().__init__(f"unknown user {user_id!r} referenced by {context}")
        self.user_id = user_id


class UnknownUserError(SnapshotError):
    """A query named a user that is not in the snapshot."""

    def __init__(self, user_id: UserId):
        super().__init__(f"unknown user {user_id!r}")
        self.user_id = user_id


@dataclass(frozen=True)
class UserRecord:
    """Profile-level counters for one user.

    follower_count_total is the user's global follower count, which may be
    far larger than the number of follow edges present in the snapshot.
    last_tweet_time is None exactly when total_tweet_count is 0.
    """

    id: UserId
    follower_count_total: int
    friend_count_total: int
    total_tweet_count: int
    last_tweet_time: float | None = None


@dataclass(frozen=True)
class FollowEdge:
    follower: UserId
    followee: UserId


@dataclass(frozen=True)
class TweetRecord:
    author: UserId
    time: float
    mentions: tuple[UserId, ...] = ()
    retweet_of: UserId | None = None


@dataclass(frozen=True)
class ListRecord:
    list_id: str
    members: frozenset[UserId]


def _require_id(value, what: str) -> str:
    if not isinstance(value, str) or not value:
        raise SnapshotError(f"{what} must be a non-empty string, got {value!r}")
    return value


class SnapshotStore:
    """Validated, indexed snapshot of users, follow edges, tweets and lists.

    Construction enforces referential integrity (every UserId referenced by
    an edge, tweet or list resolves to a user record) and the per-record
    invariants. Tweets keep their input order; ties on timestamp are broken
    by that order when fetching.
    """

    def __init__(
        self,
        users: Mapping[UserId, UserRecord],
        follows: Iterable[FollowEdge] = (),
        tweets: Iterable[TweetRecord] = (),
        lists: Iterable[ListRecord] = (),
    ):
        self.users: dict[UserId, UserRecord] = dict(users)
        for uid, rec in self.users.items():
            _require_id(uid, "user id")
            if uid != rec.id:
                raise SnapshotError(f"user key {uid!r} does not match record id {rec.id!r}")
            if min(rec.follower_count_total, rec.friend_count_total, rec.total_tweet_count) < 0:
                raise SnapshotError(f"user {uid!r} has a negative count")
            if (rec.last_tweet_time is None) != (rec.total_tweet_count == 0):
                raise SnapshotError(
                    f"user {uid!r}: last_tweet_time must be present exactly when "
                    f"total_tweet_count > 0"
                )

        self.follows: frozenset[FollowEdge] = frozenset()
        seen_edges: set[FollowEdge] = set()
        for edge in follows:
            self._resolve(edge.follower, "follow edge")
            self._resolve(edge.followee, "follow edge")
            if edge.follower == edge.followee:
                raise SnapshotError(f"self-follow for user {edge.follower!r}")
            if edge in seen_edges:
                raise SnapshotError(f"duplicate follow edge {edge.follower!r} -> {edge.followee!r}")
            seen_edges.add(edge)
        self.follows = frozenset(seen_edges)

        tweet_list: list[TweetRecord] = []
        for tw in tweets:
            self._resolve(tw.author, "tweet")
            for m in tw.mentions:
                self._resolve(m, "tweet mention")
            if tw.author in tw.mentions:
                raise SnapshotError(f"tweet by {tw.author!r} mentions its own author")
            if tw.retweet_of is not None:
                self._resolve(tw.retweet_of, "retweet")
                if tw.retweet_of == tw.author:
                    raise SnapshotError(f"tweet by {tw.author!r} retweets its own author")
            tweet_list.append(tw)
        self.tweets: tuple[TweetRecord, ...] = tuple(tweet_list)

        self.lists: dict[str, ListRecord] = {}
        for lst in lists:
            _require_id(lst.list_id, "list id")
            if lst.list_id in self.lists:
                raise SnapshotError(f"duplicate list id {lst.list_id!r}")
            if not lst.members:
                raise SnapshotError(f"list {lst.list_id!r} has no members")
            for m in lst.members:
                self._resolve(m, f"list {lst.list_id!r}")
            self.lists[lst.list_id] = lst

        self._build_indexes()

    def _resolve(self, uid: UserId, context: str) -> None:
        if uid not in self.users:
            raise DanglingReferenceError(uid, context)

    def _build_indexes(self) -> None:
        friends: dict[UserId, list[UserId]] = {}
        followers: dict[UserId, list[UserId]] = {}
        for edge in self.follows:
            friends.setdefault(edge.follower, []).append(edge.followee)
            followers.setdefault(edge.followee, []).append(edge.follower)
        self._friends = {u: tuple(sorted(v)) for u, v in friends.items()}
        self._followers = {u: tuple(sorted(v)) for u, v in followers.items()}

        by_author: dict[UserId, list[TweetRecord]] = {}
        for tw in self.tweets:
            by_author.setdefault(tw.author, []).append(tw)
        # Stable sort: equal timestamps keep input order.
        self._tweets_by_author = {
            u: tuple(sorted(v, key=lambda t: t.time, reverse=True)) for u, v in by_author.items()
        }

        by_member: dict[UserId, list[ListRecord]] = {}
        for lst in self.lists.values():
            for m in lst.members:
                by_member.setdefault(m, []).append(lst)
        self._lists_by_member = {
            u: tuple(sorted(v, key=lambda r: r.list_id)) for u, v in by_member.items()
        }

    # -- queries -------------------------------------------------------

    def fetch_neighbors(self, u: UserId, max_links: int) -> tuple[list[UserId], list[UserId]]:
        """Return (friends, followers) of u, each capped at max_links.

        Order is deterministic (sorted by UserId), so a larger budget
        returns a superset prefix-wise.
        """
        self._check_query(u, max_links)
        friends = list(self._friends.get(u, ())[:max_links])
        followers = list(self._followers.get(u, ())[:max_links])
        return friends, followers

    def fetch_tweets(self, u: UserId, max_tweets: int) -> list[TweetRecord]:
        """Return up to max_tweets tweets by u, most recent first."""
        self._check_query(u, max_tweets)
        return list(self._tweets_by_author.get(u, ())[:max_tweets])

    def fetch_lists(self, u: UserId, max_lists: int) -> list[ListRecord]:
        """Return up to max_lists lists containing u, ordered by list_id."""
        self._check_query(u, max_lists)
        return list(self._lists_by_member.get(u, ())[:max_lists])

    def _check_query(self, u: UserId, budget: int) -> None:
        if u not in self.users:
            raise UnknownUserError(u)
        if budget < 0:
            raise ValueError(f"budget must be >= 0, got {budget}")

    # -- equality (multiset semantics for tweets) ----------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SnapshotStore):
            return NotImplemented
        return (
            self.users == other.users
            and self.follows == other.follows
            and Counter(self.tweets) == Counter(other.tweets)
            and self.lists == other.lists
        )

    __hash__ = None  # type: ignore[assignment]


_USER_FIELDS = {"kind", "id", "follower_count_total", "friend_count_total", "total_tweet_count"}
_FOLLOW_FIELDS = {"kind", "follower", "followee"}
_TWEET_FIELDS = {"kind", "author", "time", "mentions"}
_LIST_FIELDS = {"kind", "list_id", "members"}


def _check_fields(obj: dict, required: set[str], optional: set[str], line_no: int) -> None:
    keys = set(obj)
    missing = required - keys
    if missing:
        raise SnapshotParseError(line_no, f"missing fields {sorted(missing)}")
    unknown = keys - required - optional
    if unknown:
        raise SnapshotParseError(line_no, f"unknown fields {sorted(unknown)}")


def _as_count(obj: dict, key: str, line_no: int) -> int:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise SnapshotParseError(line_no, f"{key} must be a non-negative integer, got {v!r}")
    return v


def _as_time(v, key: str, line_no: int) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SnapshotParseError(line_no, f"{key} must be a number, got {v!r}")
    return v


def _as_user_id(v, key: str, line_no: int) -> str:
    if not isinstance(v, str) or not v:
        raise SnapshotParseError(line_no, f"{key} must be a non-empty string, got {v!r}")
    return v


def load_snapshot(path) -> SnapshotStore:
    """Parse a line-delimited JSON snapshot file and validate it.

    Raises SnapshotParseError (with line number) for malformed lines and
    DanglingReferenceError (naming the missing UserId) for integrity
    violations.
    """
    users: dict[UserId, UserRecord] = {}
    follows: list[FollowEdge] = []
    tweets: list[TweetRecord] = []
    lists: list[ListRecord] = []

    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SnapshotParseError(line_no, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise SnapshotParseError(line_no, "expected a JSON object")
            kind = obj.get("kind")
            if kind == "user":
                _check_fields(obj, _USER_FIELDS, {"last_tweet_time"}, line_no)
                uid = _as_user_id(obj["id"], "id", line_no)
                if uid in users:
                    raise SnapshotParseError(line_no, f"duplicate user id {uid!r}")
                last = obj.get("last_tweet_time")
                users[uid] = UserRecord(
                    id=uid,
                    follower_count_total=_as_count(obj, "follower_count_total", line_no),
                    friend_count_total=_as_count(obj, "friend_count_total", line_no),
                    total_tweet_count=_as_count(obj, "total_tweet_count", line_no),
                    last_tweet_time=None if last is None else _as_time(last, "last_tweet_time", line_no),
                )
            elif kind == "follow":
                _check_fields(obj, _FOLLOW_FIELDS, set(), line_no)
                follows.append(
                    FollowEdge(
                        follower=_as_user_id(obj["follower"], "follower", line_no),
                        followee=_as_user_id(obj["followee"], "followee", line_no),
                    )
                )
            elif kind == "tweet":
                _check_fields(obj, _TWEET_FIELDS, {"retweet_of"}, line_no)
                mentions = obj["mentions"]
                if not isinstance(mentions, list):
                    raise SnapshotParseError(line_no, "mentions must be a list")
                rt = obj.get("retweet_of")
                tweets.append(
                    TweetRecord(
                        author=_as_user_id(obj["author"], "author", line_no),
                        time=_as_time(obj["time"], "time", line_no),
                        mentions=tuple(_as_user_id(m, "mention", line_no) for m in mentions),
                        retweet_of=None if rt is None else _as_user_id(rt, "retweet_of", line_no),
                    )
                )
            elif kind == "list":
                _check_fields(obj, _LIST_FIELDS, set(), line_no)
                members = obj["members"]
                if not isinstance(members, list) or not members:
                    raise SnapshotParseError(line_no, "members must be a non-empty list")
                lists.append(
                    ListRecord(
                        list_id=_as_user_id(obj["list_id"], "list_id", line_no),
                        members=frozenset(_as_user_id(m, "member", line_no) for m in members),
                    )
                )
            else:
                raise SnapshotParseError(line_no, f"unknown kind {kind!r}")

    return SnapshotStore(users, follows, tweets, lists)


def save_snapshot(store: SnapshotStore, path) -> None:
    """Write a store in the line-delimited JSON format read by load_snapshot.

    Output order is deterministic: users and lists sorted by id, follow
    edges sorted by (follower, followee), tweets in store order.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for uid in sorted(store.users):
            rec = store.users[uid]
            obj: dict = {
                "kind": "user",
                "id": rec.id,
                "follower_count_total": rec.follower_count_total,
                "friend_count_total": rec.friend_count_total,
                "total_tweet_count": rec.total_tweet_count,
            }
            if rec.last_tweet_time is not None:
                obj["last_tweet_time"] = rec.last_tweet_time
            fh.write(json.dumps(obj) + "\n")
        for edge in sorted(store.follows, key=lambda e: (e.follower, e.followee)):
            fh.write(json.dumps({"kind": "follow", "follower": edge.follower, "followee": edge.followee}) + "\n")
        for tw in store.tweets:
            obj = {"kind": "tweet", "author": tw.author, "time": tw.time, "mentions": list(tw.mentions)}
            if tw.retweet_of is not None:
                obj["retweet_of"] = tw.retweet_of
            fh.write(json.dumps(obj) + "\n")
        for lid in sorted(store.lists):
            fh.write(json.dumps({"kind": "list", "list_id": lid, "members": sorted(store.lists[lid].members)}) + "\n")


def latest_tweet_time(store: SnapshotStore) -> float:
    """Most recent tweet timestamp in the snapshot, 0.0 if there are none.

    Used as the default reference time for activity filters.
    """
    times = [r.last_tweet_time for r in store.users.values() if r.last_tweet_time is not None]
    return max(times) if times else 0.0
