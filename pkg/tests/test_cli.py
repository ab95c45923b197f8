"""Tests for seeded generation, the experiment runner, and the stdio protocol."""

import io
import json

import pytest

from tournament_lab.adversary import mod_query_lower_bound
from tournament_lab.cli import (
    ExperimentConfig,
    emit_bound_table,
    generate_random_tournament,
    main,
    rows_to_csv,
    rows_to_json,
    run_experiment,
    serve_oracle_stdio,
    splitmix64,
)
from tournament_lab.core import Tournament, all_pairs, pair_count


class TestSplitmix64:
    def test_known_answer_vector(self):
        # First two outputs of the zero-seeded reference stream.
        assert splitmix64(0) == 0xE220A8397B1DCDAF
        assert splitmix64(0x9E3779B97F4A7C15) == 0x6E789E6AA1B965F4

    def test_wraps_modulo_2_64(self):
        assert splitmix64(2**64 - 1) == splitmix64(-1 & (2**64 - 1))
        assert 0 <= splitmix64(2**64 - 1) < 2**64


class TestGenerateRandomTournament:
    def test_deterministic(self):
        assert generate_random_tournament(9, 42) == generate_random_tournament(9, 42)
        assert generate_random_tournament(9, 42) != generate_random_tournament(9, 43)

    def test_single_vertex(self):
        t = generate_random_tournament(1, 0)
        assert t.n == 1 and list(t.arcs()) == []

    def test_bits_match_scalar_reference(self):
        for n, seed in ((5, 0), (12, 987654321), (30, 2**63 + 11)):
            t = generate_random_tournament(n, seed)
            for k, (u, v) in enumerate(all_pairs(n)):
                expected = splitmix64((seed + k) & (2**64 - 1)) & 1
                assert t.has_arc(u, v) == bool(expected)

    def test_orientation_fraction_near_half(self):
        n = 200
        pairs = pair_count(n)
        sigma = 0.5 / pairs**0.5
        for seed in (0, 1, 2):
            t = generate_random_tournament(n, seed)
            forward = sum(1 for u, v in all_pairs(n) if t.has_arc(u, v))
            assert abs(forward / pairs - 0.5) <= 3 * sigma

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            generate_random_tournament(0, 0)


class TestRunExperiment:
    def test_exhaustive_vs_adversary_row(self):
        rows = run_experiment(
            ExperimentConfig(n=5, algorithm="mod-exhaustive", oracle="adversary")
        )
        assert len(rows) == 1
        row = rows[0]
        assert row.q == 10
        assert row.bound == 8
        assert row.correct is True
        assert row.claimed == 0

    def test_zero_indegree_stays_under_two_n(self):
        rows = run_experiment(
            ExperimentConfig(
                n=20, algorithm="zero-indegree", oracle="static-random", seed=5, trials=25
            )
        )
        assert all(row.q < 40 for row in rows)
        assert all(row.correct for row in rows)

    def test_certified_vs_adversary_pays_the_bound(self):
        rows = run_experiment(
            ExperimentConfig(n=4, algorithm="mod-certified", oracle="adversary")
        )
        assert rows[0].q >= 3
        assert rows[0].correct

    def test_rows_are_seed_deterministic(self):
        config = ExperimentConfig(
            n=8, algorithm="mod-certified", oracle="static-random", seed=11, trials=5
        )
        assert rows_to_csv(run_experiment(config)) == rows_to_csv(run_experiment(config))

    def test_trial_seeds_increment(self):
        rows = run_experiment(
            ExperimentConfig(
                n=6, algorithm="mod-exhaustive", oracle="static-random", seed=100, trials=3
            )
        )
        assert [row.seed for row in rows] == [100, 101, 102]

    def test_static_file_oracle(self, tmp_path):
        fixture = tmp_path / "t.txt"
        fixture.write_text(generate_random_tournament(6, 77).to_text())
        rows = run_experiment(
            ExperimentConfig(
                n=6,
                algorithm="zero-indegree",
                oracle="static-file",
                oracle_file=str(fixture),
                trials=2,
            )
        )
        assert all(row.correct for row in rows)

    def test_invalid_configs_rejected(self):
        with pytest.raises(ValueError):
            run_experiment(ExperimentConfig(n=0, algorithm="zero-indegree", oracle="adversary"))
        with pytest.raises(ValueError):
            run_experiment(ExperimentConfig(n=3, algorithm="nope", oracle="adversary"))
        with pytest.raises(ValueError):
            run_experiment(ExperimentConfig(n=3, algorithm="zero-indegree", oracle="psychic"))
        with pytest.raises(ValueError):
            run_experiment(
                ExperimentConfig(n=3, algorithm="zero-indegree", oracle="static-file")
            )

    def test_csv_shape(self):
        rows = run_experiment(
            ExperimentConfig(n=3, algorithm="zero-indegree", oracle="adversary")
        )
        lines = rows_to_csv(rows).splitlines()
        assert lines[0] == "n,algorithm,oracle,seed,q,bound,claimed,correct"
        assert len(lines) == 2
        # the adversary's 3-cycle has no source, so the claimed column is empty
        assert lines[1] == "3,zero-indegree,adversary,0,3,2,,true"

    def test_json_shape(self):
        rows = run_experiment(
            ExperimentConfig(n=3, algorithm="mod-exhaustive", oracle="adversary")
        )
        payload = json.loads(rows_to_json(rows))
        assert payload[0]["q"] == 3
        assert payload[0]["claimed"] == 0
        assert set(payload[0]) == {
            "n", "algorithm", "oracle", "seed", "q", "bound", "claimed", "correct",
        }


class TestBoundTable:
    def test_spot_rows(self):
        lines = emit_bound_table(5).splitlines()
        assert lines[0] == "n,pairs,bound,gap"
        assert lines[1] == "1,0,0,0"
        assert lines[4] == "4,6,3,3"
        assert lines[5] == "5,10,8,2"

    def test_gap_closed_form(self):
        payload = json.loads(emit_bound_table(200, fmt="json"))
        for row in payload:
            n = row["n"]
            expected_gap = (n - 1) // 2 if n % 2 else n - 1
            assert row["gap"] == expected_gap
            assert row["pairs"] - row["bound"] == expected_gap


def run_protocol(script, **kwargs):
    out = io.StringIO()
    code = serve_oracle_stdio(stdin=io.StringIO(script), stdout=out, **kwargs)
    return code, out.getvalue()


class TestServeProtocol:
    def test_adversary_answers_a_query(self):
        code, out = run_protocol("? 0 1\n", oracle="adversary", n=3)
        assert code == 0
        assert out.splitlines() == ["n 3", "0 1"]

    def test_refuted_claim_exchange(self):
        code, out = run_protocol("? 0 1\n! 0\n", oracle="adversary", n=3)
        assert code == 0
        assert out.splitlines() == [
            "n 3",
            "0 1",
            "refuted q=1",
            "0 1",
            "2 0",
            "2 1",
            "witness 2",
        ]

    def test_fully_informed_claim_is_ok(self):
        code, out = run_protocol(
            "? 0 1\n? 0 2\n? 1 2\n! 0\n", oracle="adversary", n=3
        )
        assert out.splitlines()[-1] == "ok q=3"

    def test_malformed_lines_get_err_without_state_change(self):
        code, out = run_protocol(
            "? 5 2\n? 0 1 2\nhello\n? 1 0\n? 0 1\n! 0\n", oracle="adversary", n=3
        )
        lines = out.splitlines()
        assert all(line.startswith("err") for line in lines[1:5])
        assert lines[5] == "0 1"
        assert lines[6] == "refuted q=1"

    def test_static_random_oracle_is_consistent(self):
        t = generate_random_tournament(4, 9)
        script = "".join(f"? {u} {v}\n" for u, v in all_pairs(4))
        _, out = run_protocol(script, oracle="static-random", n=4, seed=9)
        answers = [tuple(map(int, ln.split())) for ln in out.splitlines()[1:]]
        assert answers == list(t.arcs())

    def test_repeated_query_does_not_recount(self):
        _, out = run_protocol("? 0 1\n? 0 1\n! 0\n", oracle="adversary", n=3)
        assert "q=1" in out.splitlines()[3]

    def test_stored_transcript_replays_identically(self):
        from tournament_lab.adversary import make_adversary, open_adversary_session
        from tournament_lab.cli import transcript_to_client_script

        session = open_adversary_session(make_adversary(5))
        for pair in [(0, 1), (2, 4), (1, 3), (0, 4)]:
            session.query(pair)
        script = transcript_to_client_script(session.transcript.to_text(), claim=2)
        _, first = run_protocol(script, oracle="adversary", n=5)
        _, second = run_protocol(script, oracle="adversary", n=5)
        assert first == second
        answers = [tuple(map(int, ln.split())) for ln in first.splitlines()[1:5]]
        assert answers == [arc for _, arc in session.transcript]
        assert first.splitlines()[5].startswith(("ok q=", "refuted q="))


class TestMainEntry:
    def test_gen_run_round_trip(self, tmp_path, capsys):
        fixture = tmp_path / "f.txt"
        assert main(["gen", "--n", "6", "--seed", "3", "--out", str(fixture)]) == 0
        assert Tournament.from_text(fixture.read_text()) == generate_random_tournament(6, 3)
        assert (
            main(
                [
                    "run",
                    "--n", "6",
                    "--algorithm", "mod-certified",
                    "--oracle", "static-file",
                    "--file", str(fixture),
                ]
            )
            == 0
        )
        out = capsys.readouterr().out
        assert out.splitlines()[0].startswith("n,algorithm")

    def test_table_command(self, capsys):
        assert main(["table", "--n", "4"]) == 0
        assert capsys.readouterr().out.splitlines()[4] == "4,6,3,3"

    def test_exact_solve_and_replay(self, tmp_path, capsys):
        strategy = tmp_path / "s.txt"
        assert (
            main(["exact", "--n", "3", "--task", "mod-found", "--out", str(strategy)]) == 0
        )
        assert "value=2" in capsys.readouterr().out
        assert main(["exact", "--replay", str(strategy)]) == 0
        out = capsys.readouterr().out
        assert "replayed=8" in out

    def test_errors_exit_nonzero(self, capsys):
        assert main(["run", "--n", "3", "--algorithm", "zero-indegree",
                     "--oracle", "static-file", "--file", "/no/such/file"]) == 2
        assert "error:" in capsys.readouterr().err
        assert main(["exact", "--n", "9", "--task", "mod-found"]) == 2

    def test_bad_fixture_size_is_an_error(self, tmp_path, capsys):
        fixture = tmp_path / "f.txt"
        fixture.write_text(generate_random_tournament(4, 0).to_text())
        code = main(
            ["run", "--n", "5", "--algorithm", "zero-indegree",
             "--oracle", "static-file", "--file", str(fixture)]
        )
        assert code == 2


def test_bound_alignment_with_adversary_module():
    payload = json.loads(emit_bound_table(60, fmt="json"))
    for row in payload:
        assert row["bound"] == mod_query_lower_bound(row["n"])
