import math

import pytest

from listcurator.generator import GeneratorConfig, generate


def two_camp_config(**overrides):
    base = dict(
        n_users=40,
        communities=[20, 20],
        p_in=0.2,
        p_out=0.0,
        mention_rate=0.5,
        retweet_rate=0.5,
        n_lists=5,
        list_community_fidelity=1.0,
        seed=42,
    )
    base.update(overrides)
    return GeneratorConfig(**base)


class TestConfigValidation:
    def test_probability_out_of_range(self):
        with pytest.raises(ValueError):
            generate(two_camp_config(p_in=1.5))
        with pytest.raises(ValueError):
            generate(two_camp_config(p_out=-0.1))

    def test_sizes_must_sum(self):
        with pytest.raises(ValueError):
            generate(two_camp_config(communities=[10, 10]))

    def test_empty_communities(self):
        with pytest.raises(ValueError):
            generate(two_camp_config(communities=[]))

    def test_negative_rate(self):
        with pytest.raises(ValueError):
            generate(two_camp_config(mention_rate=-1))


def test_zero_cross_probability_means_zero_cross_edges():
    store, labels = generate(two_camp_config(p_out=0.0))
    for edge in store.follows:
        assert labels[edge.follower] == labels[edge.followee]


def test_zero_mention_rate_means_no_mentions():
    store, _ = generate(two_camp_config(mention_rate=0.0))
    assert all(not t.mentions for t in store.tweets)
    assert any(t.retweet_of for t in store.tweets)


def test_interactions_ride_follow_edges():
    store, _ = generate(two_camp_config(p_out=0.05))
    edges = {(e.follower, e.followee) for e in store.follows}
    for t in store.tweets:
        for m in t.mentions:
            assert (t.author, m) in edges
        if t.retweet_of is not None:
            assert (t.author, t.retweet_of) in edges


def test_within_community_edge_count_within_3_sigma():
    # analytic binomial oracle: s*(s-1) ordered in-community pairs
    s = 200
    p = 0.05
    store, labels = generate(
        GeneratorConfig(n_users=s, communities=[s], p_in=p, p_out=0.0, seed=123)
    )
    n_pairs = s * (s - 1)
    mean = p * n_pairs
    sigma = math.sqrt(n_pairs * p * (1 - p))
    assert abs(len(store.follows) - mean) <= 3 * sigma


def test_deterministic_under_fixed_seed():
    a, labels_a = generate(two_camp_config())
    b, labels_b = generate(two_camp_config())
    assert a == b
    assert labels_a == labels_b
    c, _ = generate(two_camp_config(seed=43))
    assert c != a


def test_counts_consistent_with_generated_data():
    store, _ = generate(two_camp_config(p_out=0.02))
    in_deg = {u: 0 for u in store.users}
    out_deg = {u: 0 for u in store.users}
    for e in store.follows:
        out_deg[e.follower] += 1
        in_deg[e.followee] += 1
    tweet_count = {u: 0 for u in store.users}
    last = {}
    for t in store.tweets:
        tweet_count[t.author] += 1
        last[t.author] = max(last.get(t.author, t.time), t.time)
    for u, rec in store.users.items():
        assert rec.follower_count_total == in_deg[u]
        assert rec.friend_count_total == out_deg[u]
        assert rec.total_tweet_count == tweet_count[u]
        assert rec.last_tweet_time == last.get(u)


def test_list_fidelity_one_keeps_lists_pure():
    store, labels = generate(two_camp_config(n_lists=20))
    for lst in store.lists.values():
        assert len({labels[m] for m in lst.members}) == 1


def test_ground_truth_covers_all_users():
    store, labels = generate(two_camp_config())
    assert set(labels) == set(store.users)
    assert sorted(set(labels.values())) == [0, 1]
