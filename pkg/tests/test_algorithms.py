"""Tests for the query algorithms and claim verification."""

import itertools
import random

import pytest

from tournament_lab.adversary import (
    make_adversary,
    mod_query_lower_bound,
    open_adversary_session,
)
from tournament_lab.algorithms import (
    OUTCOME_CERTIFIED_MOD,
    OUTCOME_FOUND,
    OUTCOME_NOT_FOUND,
    QUERY_ORDERS,
    REFUTABLE,
    SOUND,
    find_mod_certified,
    find_mod_exhaustive,
    find_zero_indegree,
    knockout_survivor,
    verify_claim,
)
from tournament_lab.cli import generate_random_tournament
from tournament_lab.core import (
    all_pairs,
    all_tournaments,
    make_rotational_regular,
    make_transitive,
    pair_count,
)
from tournament_lab.oracle import (
    CompletionLimitError,
    KnowledgeState,
    completions,
    open_static_session,
)


class TestKnockout:
    def test_exactly_n_minus_one_inquiries(self):
        for n in (1, 2, 5, 8, 13):
            session = open_static_session(generate_random_tournament(n, seed=n))
            survivor = knockout_survivor(session, n)
            assert session.q == n - 1
            assert 0 <= survivor < n

    def test_survivor_never_lost_a_queried_match(self):
        session = open_static_session(generate_random_tournament(9, seed=4))
        survivor = knockout_survivor(session, 9)
        for _, (_, head) in session.transcript:
            assert head != survivor


class TestFindZeroIndegree:
    def test_transitive_four_trace(self):
        session = open_static_session(make_transitive(4))
        run = find_zero_indegree(session, 4)
        assert run.outcome == OUTCOME_FOUND and run.claimed == 0
        assert run.transcript.q <= 6 < 8
        queried = [pair for pair, _ in run.transcript]
        assert queried == [(0, 1), (2, 3), (0, 2), (0, 3)]

    def test_three_cycle_trace(self):
        session = open_static_session(make_rotational_regular(3))
        run = find_zero_indegree(session, 3)
        assert run.outcome == OUTCOME_NOT_FOUND and run.claimed is None
        assert run.transcript.q == 3 < 6

    def test_single_vertex(self):
        session = open_static_session(make_transitive(1))
        run = find_zero_indegree(session, 1)
        assert run.outcome == OUTCOME_FOUND and run.claimed == 0
        assert run.transcript.q == 0

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_exhaustive_small(self, n):
        for t in all_tournaments(n):
            session = open_static_session(t)
            run = find_zero_indegree(session, n)
            assert run.transcript.q < 2 * n
            assert run.claimed == t.zero_indegree_vertex()
            assert (run.outcome == OUTCOME_FOUND) == (t.zero_indegree_vertex() is not None)
            assert session.repeat_count == 0

    @pytest.mark.parametrize("n", [50, 101])
    def test_random_large(self, n):
        for seed in range(50):
            t = generate_random_tournament(n, seed)
            session = open_static_session(t)
            run = find_zero_indegree(session, n)
            assert run.transcript.q < 2 * n
            assert run.claimed == t.zero_indegree_vertex()

    def test_session_size_mismatch_rejected(self):
        session = open_static_session(make_transitive(4))
        with pytest.raises(ValueError):
            find_zero_indegree(session, 5)


class TestFindModExhaustive:
    def test_always_queries_every_pair(self):
        session = open_static_session(generate_random_tournament(5, seed=9))
        run = find_mod_exhaustive(session, 5)
        assert run.transcript.q == 10

    def test_transitive_claims_source(self):
        session = open_static_session(make_transitive(4))
        run = find_mod_exhaustive(session, 4)
        assert run.claimed == 0
        assert run.outcome == OUTCOME_CERTIFIED_MOD

    def test_adversary_tie_break_picks_lowest(self):
        session = open_adversary_session(make_adversary(5))
        run = find_mod_exhaustive(session, 5)
        assert run.claimed == 0

    def test_correct_on_all_small_tournaments(self):
        for n in range(1, 6):
            for t in all_tournaments(n):
                run = find_mod_exhaustive(open_static_session(t), n)
                assert run.claimed in t.mod_vertices()


class TestQueryOrders:
    @pytest.mark.parametrize("name", sorted(QUERY_ORDERS))
    @pytest.mark.parametrize("n", [1, 2, 5, 8])
    def test_each_order_covers_every_pair_once(self, name, n):
        order = QUERY_ORDERS[name](n, 3)
        assert sorted(order) == list(all_pairs(n))

    def test_round_robin_rounds_are_matchings(self):
        order = QUERY_ORDERS["round-robin"](6, 0)
        for i in range(0, len(order), 3):
            used = [v for pair in order[i : i + 3] for v in pair]
            assert len(used) == len(set(used))

    def test_random_order_is_seed_deterministic(self):
        assert QUERY_ORDERS["random"](7, 5) == QUERY_ORDERS["random"](7, 5)
        assert QUERY_ORDERS["random"](7, 5) != QUERY_ORDERS["random"](7, 6)


class TestFindModCertified:
    def test_transitive_source_first_uses_n_minus_one(self):
        for n in (2, 4, 7, 12):
            session = open_static_session(make_transitive(n))
            run = find_mod_certified(session, n)
            assert run.claimed == 0
            assert run.transcript.q == n - 1

    def test_two_vertices_single_query(self):
        session = open_static_session(make_transitive(2))
        run = find_mod_certified(session, 2)
        assert run.transcript.q == 1
        assert run.claimed == 0

    def test_single_vertex_no_queries(self):
        session = open_static_session(make_transitive(1))
        run = find_mod_certified(session, 1)
        assert run.transcript.q == 0
        assert run.claimed == 0

    @pytest.mark.parametrize("order", sorted(QUERY_ORDERS))
    def test_correct_and_sound_on_all_small_tournaments(self, order):
        for n in range(1, 6):
            for t in all_tournaments(n):
                session = open_static_session(t)
                run = find_mod_certified(session, n, order=order, seed=1)
                assert run.claimed in t.mod_vertices()
                assert run.transcript.q <= pair_count(n)
                assert verify_claim(session.knowledge(), run.claimed) == SOUND

    def test_correct_on_random_tournaments(self):
        rng = random.Random(0)
        for _ in range(40):
            n = rng.randint(1, 60)
            t = generate_random_tournament(n, rng.randrange(2**32))
            run = find_mod_certified(open_static_session(t), n)
            assert run.claimed in t.mod_vertices()

    def test_never_more_than_exhaustive(self):
        for seed in range(10):
            t = generate_random_tournament(12, seed)
            certified = find_mod_certified(open_static_session(t), 12)
            assert certified.transcript.q <= pair_count(12)

    def test_explicit_order_iterable(self):
        session = open_static_session(make_transitive(3))
        run = find_mod_certified(session, 3, order=[(1, 2), (0, 2), (0, 1)])
        assert run.claimed in make_transitive(3).mod_vertices()

    def test_unknown_order_name_rejected(self):
        with pytest.raises(ValueError):
            find_mod_certified(open_static_session(make_transitive(3)), 3, order="sorted")


class TestCertifiedAgainstAdversary:
    @pytest.mark.parametrize("n", [3, 4])
    def test_every_query_order_pays_the_bound(self, n):
        for order in itertools.permutations(all_pairs(n)):
            adv = make_adversary(n)
            session = open_adversary_session(adv)
            run = find_mod_certified(session, n, order=order)
            assert run.transcript.q >= mod_query_lower_bound(n)
            assert adv.refute(run.claimed) is None

    @pytest.mark.parametrize("n", [5, 6])
    def test_sampled_query_orders_pay_the_bound(self, n):
        pairs = list(all_pairs(n))
        rng = random.Random(n)
        for _ in range(100):
            order = pairs[:]
            rng.shuffle(order)
            session = open_adversary_session(make_adversary(n))
            run = find_mod_certified(session, n, order=order)
            assert run.transcript.q >= mod_query_lower_bound(n)


class TestVerifyClaim:
    def test_full_knowledge_mod_claim_sound(self):
        t = generate_random_tournament(6, seed=8)
        session = open_static_session(t)
        for pair in all_pairs(6):
            session.query(pair)
        claimed = min(t.mod_vertices())
        assert verify_claim(session.knowledge(), claimed) == SOUND

    def test_single_arc_claim_refutable(self):
        state = KnowledgeState(3)
        state.record(0, 1)
        assert verify_claim(state, 0) == REFUTABLE

    def test_path_knowledge_claim_sound(self):
        state = KnowledgeState(3)
        state.record(0, 1)
        state.record(1, 2)
        assert verify_claim(state, 0) == SOUND

    def test_agrees_with_completion_enumeration(self):
        rng = random.Random(3)
        for _ in range(60):
            n = rng.randint(2, 5)
            t = generate_random_tournament(n, rng.randrange(2**32))
            state = KnowledgeState(n)
            for pair in rng.sample(list(all_pairs(n)), rng.randint(0, pair_count(n))):
                state.record(*t.arc_between(*pair))
            claimed = rng.randrange(n)
            brute = all(
                claimed in c.mod_vertices() for c in completions(state)
            )
            assert (verify_claim(state, claimed) == SOUND) == brute

    def test_inconclusive_above_limit_raises(self):
        state = KnowledgeState(10)  # 45 unknown pairs, no certificate
        with pytest.raises(CompletionLimitError):
            verify_claim(state, 0)

    def test_certificate_route_works_above_limit(self):
        # A dominant vertex certifies even when enumeration is impossible.
        t = make_transitive(30)
        session = open_static_session(t)
        for v in range(1, 30):
            session.query((0, v))
        assert verify_claim(session.knowledge(), 0) == SOUND
