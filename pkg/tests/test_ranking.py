import math
import random
from collections import defaultdict

import pytest

from listcurator.ranking import (
    Criterion,
    HitsParams,
    hits_scores,
    hits_with_priors,
    normalized_indegree,
    weighted_indegree,
    write_ranking_csv,
)
from listcurator.snapshot import FollowEdge
from listcurator.views import CoreSets, ViewGraph, ViewKind, build_friend_graph

from conftest import make_user


def graph(kind, edges, nodes=(), directed=True):
    g = ViewGraph(kind=kind, directed=directed, nodes=set(nodes))
    for (u, v), w in edges.items():
        g.edges[(u, v)] = w
        g.nodes.update((u, v))
    return g


def sets(core, candidates=()):
    return CoreSets(core=list(core), candidates=set(candidates))


# -- independent dense fixed-point oracle (pure python, dict based) -------


def hits_oracle(nodes, edges, core, params):
    m = len(core)
    prior = {u: (1.0 / m if u in core else 0.0) for u in nodes}
    auth, hub = dict(prior), dict(prior)
    incoming = defaultdict(list)
    outgoing = defaultdict(list)
    for (u, v), w in edges.items():
        incoming[v].append((u, w))
        outgoing[u].append((v, w))

    def normalized(raw):
        total = sum(raw.values())
        if total <= 0:
            return {u: 0.0 for u in raw}
        return {u: x / total for u, x in raw.items()}

    converged = False
    for _ in range(params.max_iter):
        raw_a = normalized({v: sum(hub[u] * w for u, w in incoming[v]) for v in nodes})
        new_auth = {v: (1 - params.beta) * raw_a[v] + params.beta * prior[v] for v in nodes}
        raw_h = normalized({u: sum(new_auth[v] * w for v, w in outgoing[u]) for u in nodes})
        new_hub = {u: (1 - params.beta) * raw_h[u] + params.beta * prior[u] for u in nodes}
        delta_a = sum(abs(new_auth[x] - auth[x]) for x in nodes)
        delta_h = sum(abs(new_hub[x] - hub[x]) for x in nodes)
        auth, hub = new_auth, new_hub
        if delta_a < params.tol and delta_h < params.tol:
            converged = True
            break
    return auth, hub, converged


def random_directed_graph(rng, n_nodes, core_size):
    ids = [f"n{i:02d}" for i in range(n_nodes)]
    core = rng.sample(ids, core_size)
    candidates = set(ids) - set(core)
    edges = {}
    for _ in range(rng.randint(n_nodes, 3 * n_nodes)):
        u, v = rng.sample(ids, 2)
        edges[(u, v)] = 1.0
    g = graph(ViewKind.FRIEND, edges, nodes=ids)
    return g, sets(core, candidates)


class TestWeightedIndegree:
    def test_sums_incoming_weights(self):
        g = graph(ViewKind.MENTION, {("a", "x"): 3, ("b", "x"): 2, ("a", "y"): 1})
        r = weighted_indegree(g, sets(["a", "b"], ["x", "y"]))
        assert r.ordered == [("x", 5), ("y", 1)]
        assert r.criterion is Criterion.MENTION_WDEG

    def test_empty_graph(self):
        r = weighted_indegree(graph(ViewKind.RETWEET, {}), sets(["a"], ["x"]))
        assert r.ordered == []

    def test_rejects_friend_graph(self):
        with pytest.raises(ValueError):
            weighted_indegree(graph(ViewKind.FRIEND, {}), sets(["a"]))

    def test_core_users_not_ranked(self):
        g = graph(ViewKind.MENTION, {("a", "b"): 4, ("a", "x"): 1})
        r = weighted_indegree(g, sets(["a", "b"], ["x"]))
        assert r.users() == ["x"]

    def test_undirected_incident_sum(self):
        g = graph(
            ViewKind.COLIST,
            {("a", "x"): 0.5, ("b", "x"): 0.25, ("x", "y"): 0.0},
            directed=False,
        )
        r = weighted_indegree(g, sets(["a", "b"], ["x", "y"]))
        assert r.ordered == [("x", 0.75)]

    def test_matches_edge_scan_oracle(self):
        rng = random.Random(31)
        for _ in range(10):
            ids = [f"n{i}" for i in range(12)]
            core = ids[:4]
            cands = set(ids[4:])
            edges = {}
            for _ in range(30):
                u = rng.choice(core)
                v = rng.choice(ids[4:])
                edges[(u, v)] = edges.get((u, v), 0) + rng.randint(1, 5)
            g = graph(ViewKind.MENTION, edges)
            r = weighted_indegree(g, sets(core, cands))
            expected = defaultdict(int)
            for (u, v), w in edges.items():
                expected[v] += w
            assert dict(r.ordered) == dict(expected)
            # descending with id tie-break
            assert r.ordered == sorted(r.ordered, key=lambda kv: (-kv[1], kv[0]))

    def test_permutation_equivariance(self):
        rng = random.Random(37)
        ids = [f"n{i}" for i in range(10)]
        core, cands = ids[:3], set(ids[3:])
        edges = {}
        weight = 1
        for u in core:
            for v in ids[3:]:
                if rng.random() < 0.5:
                    edges[(u, v)] = weight  # distinct weights: no score ties
                    weight += 1
        relabel = {u: f"z{9 - int(u[1:])}" for u in ids}
        g = graph(ViewKind.MENTION, edges)
        g2 = graph(ViewKind.MENTION, {(relabel[u], relabel[v]): w for (u, v), w in edges.items()})
        r1 = weighted_indegree(g, sets(core, cands))
        r2 = weighted_indegree(g2, sets([relabel[u] for u in core], {relabel[u] for u in cands}))
        assert [(relabel[u], s) for u, s in r1.ordered] == r2.ordered


class TestNormalizedIndegree:
    def build(self, edges, records, core, cands):
        g = build_friend_graph(sets(core, cands), [FollowEdge(a, b) for a, b in edges])
        users = {r.id: r for r in records}
        return g, sets(core, cands), users

    def test_single_seed_follower_scores_zero(self):
        g, s, users = self.build(
            [("a", "x")],
            [make_user("a", followers=10), make_user("x", followers=50)],
            ["a"],
            ["x"],
        )
        r = normalized_indegree(g, s, users)
        assert r.ordered == [("x", 0.0)]

    def test_max_follower_candidate_scores_zero(self):
        g, s, users = self.build(
            [("a", "x"), ("b", "x")],
            [make_user("a", followers=1), make_user("b", followers=1), make_user("x", followers=500)],
            ["a", "b"],
            ["x"],
        )
        r = normalized_indegree(g, s, users)
        assert r.ordered == [("x", 0.0)]

    def test_arithmetic_example(self):
        core = [f"c{i}" for i in range(10)]
        records = [make_user(c, followers=1) for c in core]
        records.append(make_user("big", followers=100_000))
        records.append(make_user("x", followers=1000))
        g, s, users = self.build(
            [(c, "x") for c in core], records, core + ["big"], ["x"]
        )
        r = normalized_indegree(g, s, users)
        assert r.ordered[0][0] == "x"
        assert r.ordered[0][1] == pytest.approx(math.log(10) * math.log(100), abs=1e-12)

    def test_zero_global_followers_is_error(self):
        g, s, users = self.build(
            [("a", "x")],
            [make_user("a", followers=5), make_user("x", followers=0)],
            ["a"],
            ["x"],
        )
        with pytest.raises(ValueError):
            normalized_indegree(g, s, users)

    def test_unfollowed_candidates_omitted(self):
        g, s, users = self.build(
            [("a", "x")],
            [make_user("a", followers=2), make_user("x", followers=3), make_user("y", followers=4)],
            ["a"],
            ["x", "y"],
        )
        r = normalized_indegree(g, s, users)
        assert r.users() == ["x"]

    def test_rejects_non_friend_graph(self):
        with pytest.raises(ValueError):
            normalized_indegree(graph(ViewKind.MENTION, {}), sets(["a"]), {})

    def random_instance(self, rng):
        n_core = rng.randint(2, 6)
        n_cand = rng.randint(3, 10)
        core = [f"c{i}" for i in range(n_core)]
        cands = [f"x{i}" for i in range(n_cand)]
        edges = []
        for x in cands:
            for c in rng.sample(core, rng.randint(0, n_core)):
                edges.append((c, x))
        records = [make_user(c, followers=rng.randint(1, 1000)) for c in core]
        records += [make_user(x, followers=rng.randint(1, 1_000_000)) for x in cands]
        return self.build(edges, records, core, cands)

    def test_log_base_change_preserves_order(self):
        # rescaling by a positive constant cannot reorder the ranking
        rng = random.Random(99)
        for _ in range(100):
            g, s, users = self.random_instance(rng)
            natural = normalized_indegree(g, s, users)
            base2 = normalized_indegree(g, s, users, log_base=2)
            assert natural.users() == base2.users()


class TestHitsWithPriors:
    def test_params_validated(self):
        with pytest.raises(ValueError):
            HitsParams(beta=0.0)
        with pytest.raises(ValueError):
            HitsParams(tol=0.0)
        with pytest.raises(ValueError):
            HitsParams(max_iter=0)

    def test_no_edges_fixed_point_is_scaled_prior(self):
        s = sets(["a", "b"], ["x"])
        g = build_friend_graph(s, [])
        result = hits_scores(g, s)
        beta = HitsParams().beta
        assert result.converged
        assert result.prior == {"a": 0.5, "b": 0.5}
        assert result.authority["a"] == pytest.approx(beta * 0.5)
        assert result.authority["b"] == pytest.approx(beta * 0.5)
        assert hits_with_priors(g, s).ordered == []

    def test_only_edge_target_tops_candidates(self):
        s = sets(["a", "b"], ["x", "y"])
        g = build_friend_graph(s, [FollowEdge("a", "x"), FollowEdge("b", "x")])
        r = hits_with_priors(g, s)
        assert r.users() == ["x"]
        assert r.converged

    def test_more_core_followers_rank_higher(self):
        s = sets(["a", "b"], ["x", "y"])
        g = build_friend_graph(
            s, [FollowEdge("a", "x"), FollowEdge("b", "x"), FollowEdge("a", "y")]
        )
        r = hits_with_priors(g, s)
        assert r.users() == ["x", "y"]

    def test_prior_mass_uniform_on_core(self):
        rng = random.Random(55)
        g, s = random_directed_graph(rng, 15, 5)
        result = hits_scores(g, s)
        assert sum(result.prior.values()) == pytest.approx(1.0)
        for c in s.core:
            assert result.prior[c] == pytest.approx(1 / 5)

    def test_matches_independent_oracle(self):
        rng = random.Random(77)
        params = HitsParams()
        for _ in range(10):
            g, s = random_directed_graph(rng, rng.randint(10, 30), rng.randint(2, 5))
            result = hits_scores(g, s, params)
            nodes = sorted(g.nodes | s.core_set)
            auth, hub, converged = hits_oracle(nodes, g.edges, s.core_set, params)
            assert converged and result.converged
            for u in nodes:
                assert abs(result.authority[u] - auth[u]) < 1e-6
                assert abs(result.hub[u] - hub[u]) < 1e-6

    def test_vectors_non_negative_and_l1_bounded(self):
        rng = random.Random(42)
        for _ in range(5):
            g, s = random_directed_graph(rng, 12, 3)
            result = hits_scores(g, s)
            auth = list(result.authority.values())
            hub = list(result.hub.values())
            assert min(auth) >= 0 and min(hub) >= 0
            assert sum(auth) <= 1 + 1e-9 and sum(hub) <= 1 + 1e-9

    def test_non_convergence_flagged(self):
        s = sets(["a"], ["x"])
        g = build_friend_graph(s, [FollowEdge("a", "x")])
        r = hits_with_priors(g, s, HitsParams(max_iter=1, tol=1e-15))
        assert not r.converged
        assert r.users() == ["x"]

    def test_rejects_non_friend_graph(self):
        with pytest.raises(ValueError):
            hits_scores(graph(ViewKind.COLIST, {}, directed=False), sets(["a"]))


def test_rankings_deterministic():
    rng = random.Random(7)
    g, s = random_directed_graph(rng, 20, 4)
    r1 = hits_with_priors(g, s)
    r2 = hits_with_priors(g, s)
    assert r1.ordered == r2.ordered


def test_write_ranking_csv(tmp_path):
    r = weighted_indegree(
        graph(ViewKind.MENTION, {("a", "x"): 2, ("a", "y"): 5}), sets(["a"], ["x", "y"])
    )
    path = tmp_path / "ranking.csv"
    write_ranking_csv(r, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "rank,user,score"
    assert lines[1] == "1,y,5"
    assert lines[2] == "2,x,2"
