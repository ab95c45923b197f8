"""Experiment runner and interop surface.

Subcommands: ``gen`` (seeded tournament fixtures), ``run`` (algorithm vs
oracle matches), ``exact`` (minimax solver and strategy replay), ``serve``
(line-oriented oracle protocol over stdin/stdout), ``table`` (lower-bound
table). Exit code 0 on success, nonzero on any error.

Seeded generation uses the splitmix64 mixing function written out below
rather than any platform generator, so fixtures are bit-exact across
implementations and platforms.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from .adversary import (
    AdversaryState,
    attempt_refutation,
    make_adversary,
    mod_query_lower_bound,
    open_adversary_session,
)
from .algorithms import (
    OUTCOME_FOUND,
    find_mod_certified,
    find_mod_exhaustive,
    find_zero_indegree,
)
from .core import Tournament, all_tournaments, pair_count
from .exact import TASKS, exact_complexity, parse_strategy
from .oracle import Transcript, open_static_session

_MASK64 = (1 << 64) - 1

ALGORITHMS = {
    "zero-indegree": find_zero_indegree,
    "mod-exhaustive": find_mod_exhaustive,
    "mod-certified": find_mod_certified,
}
ORACLE_KINDS = ("static-random", "static-file", "adversary")


def splitmix64(x: int) -> int:
    """The standard add-constant / xor-shift-multiply 64-bit mixer.

    splitmix64(x) = mix(x + 0x9E3779B97F4A7C15) where mix is two rounds of
    xor-shift-multiply followed by a final xor-shift; all arithmetic mod 2**64.
    """
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _splitmix64_array(values: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = values + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def generate_random_tournament(n: int, seed: int) -> Tournament:
    """Deterministic random tournament: pair k (lex order) points u->v iff
    the least significant bit of splitmix64(seed + k) is 1."""
    if n < 1:
        raise ValueError("vertex count must be positive")
    k = np.arange(pair_count(n), dtype=np.uint64)
    with np.errstate(over="ignore"):
        bits = _splitmix64_array(k + np.uint64(seed & _MASK64)) & np.uint64(1)
    forward = bits.astype(bool)
    wins = np.zeros((n, n), dtype=bool)
    upper = np.triu_indices(n, 1)
    wins[upper] = forward
    wins.T[upper] = ~forward
    rows = [
        int.from_bytes(np.packbits(wins[u], bitorder="little").tobytes(), "little")
        for u in range(n)
    ]
    return Tournament._from_rows(n, rows)


@dataclass
class ExperimentConfig:
    n: int
    algorithm: str
    oracle: str
    seed: int = 0
    trials: int = 1
    fmt: str = "csv"
    oracle_file: str | None = None

    def validate(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.oracle not in ORACLE_KINDS:
            raise ValueError(f"unknown oracle {self.oracle!r}")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {self.fmt!r}")
        if self.oracle == "static-file" and not self.oracle_file:
            raise ValueError("static-file oracle requires a fixture path")


@dataclass
class ResultRow:
    n: int
    algorithm: str
    oracle: str
    seed: int
    q: int
    bound: int
    claimed: int | None
    correct: bool


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    """Execute the configured trials; deterministic given the seed.

    Trial t uses effective seed seed + t (mod 2**64). Correctness is judged
    against the oracle's ground-truth tournament (the hidden one for the
    adversary).
    """
    config.validate()
    fixture = None
    if config.oracle == "static-file":
        with open(config.oracle_file) as fh:
            fixture = Tournament.from_text(fh.read())
        if fixture.n != config.n:
            raise ValueError(
                f"fixture has {fixture.n} vertices but the experiment wants {config.n}"
            )
    rows = []
    for trial in range(config.trials):
        trial_seed = (config.seed + trial) & _MASK64
        if config.oracle == "static-random":
            truth = generate_random_tournament(config.n, trial_seed)
            session = open_static_session(truth)
        elif config.oracle == "static-file":
            truth = fixture
            session = open_static_session(truth)
        else:
            adv = make_adversary(config.n)
            truth = adv.hidden
            session = open_adversary_session(adv)
        run = ALGORITHMS[config.algorithm](session, config.n)
        if config.algorithm == "zero-indegree":
            expected = truth.zero_indegree_vertex()
            correct = run.claimed == expected and (
                (run.outcome == OUTCOME_FOUND) == (expected is not None)
            )
        else:
            correct = run.claimed in truth.mod_vertices()
        rows.append(
            ResultRow(
                n=config.n,
                algorithm=config.algorithm,
                oracle=config.oracle,
                seed=trial_seed,
                q=run.transcript.q,
                bound=mod_query_lower_bound(config.n),
                claimed=run.claimed,
                correct=correct,
            )
        )
    return rows


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "algorithm", "oracle", "seed", "q", "bound", "claimed", "correct"])
    for r in rows:
        writer.writerow(
            [
                r.n,
                r.algorithm,
                r.oracle,
                r.seed,
                r.q,
                r.bound,
                "" if r.claimed is None else r.claimed,
                "true" if r.correct else "false",
            ]
        )
    return buf.getvalue()


def rows_to_json(rows: list[ResultRow]) -> str:
    payload = [
        {
            "n": r.n,
            "algorithm": r.algorithm,
            "oracle": r.oracle,
            "seed": r.seed,
            "q": r.q,
            "bound": r.bound,
            "claimed": r.claimed,
            "correct": r.correct,
        }
        for r in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def emit_bound_table(n_max: int, fmt: str = "csv") -> str:
    """Rows n, pair count, lower bound, and gap = pairs - bound for n <= n_max."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    rows = [
        (n, pair_count(n), mod_query_lower_bound(n), pair_count(n) - mod_query_lower_bound(n))
        for n in range(1, n_max + 1)
    ]
    if fmt == "json":
        payload = [
            {"n": n, "pairs": pairs, "bound": bound, "gap": gap}
            for n, pairs, bound, gap in rows
        ]
        return json.dumps(payload, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "pairs", "bound", "gap"])
    writer.writerows(rows)
    return buf.getvalue()


def serve_oracle_stdio(
    oracle: str,
    n: int,
    seed: int = 0,
    path: str | None = None,
    stdin=None,
    stdout=None,
) -> int:
    """Line protocol: '? u v' asks a pair, '! x' claims a max out-degree vertex.

    The server opens with 'n <N>'. Replies: 'a b' for an answered arc;
    'ok q=<count>' when a claim survives every refutation attempt;
    'refuted q=<count>' plus the completion's arc lines and 'witness <y>'
    otherwise. Malformed input gets 'err <message>' without any state change.
    A claim ends the session.
    """
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    if oracle not in ORACLE_KINDS:
        raise ValueError(f"unknown oracle {oracle!r}")
    if oracle == "adversary":
        adv = make_adversary(n)
        hidden = adv.hidden
        session = open_adversary_session(adv)
    else:
        if oracle == "static-file":
            if not path:
                raise ValueError("static-file oracle requires a fixture path")
            with open(path) as fh:
                hidden = Tournament.from_text(fh.read())
            if hidden.n != n:
                raise ValueError(f"fixture has {hidden.n} vertices, expected {n}")
        else:
            hidden = generate_random_tournament(n, seed)
        session = open_static_session(hidden)

    def say(line: str) -> None:
        print(line, file=stdout, flush=True)

    say(f"n {n}")
    while True:
        line = stdin.readline()
        if not line:
            return 0
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "?" and len(parts) == 3:
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                say("err vertex ids must be integers")
                continue
            if not 0 <= u < v < n:
                say(f"err ({u}, {v}) is not a canonical pair on {n} vertices")
                continue
            a, b = session.query((u, v))
            say(f"{a} {b}")
        elif parts[0] == "!" and len(parts) == 2:
            try:
                claimed = int(parts[1])
            except ValueError:
                say("err claimed vertex must be an integer")
                continue
            if not 0 <= claimed < n:
                say(f"err vertex {claimed} out of range")
                continue
            refutation = attempt_refutation(hidden, session.knowledge(), claimed)
            if refutation is None:
                say(f"ok q={session.q}")
            else:
                say(f"refuted q={session.q}")
                for tail, head in refutation.completion.arcs():
                    say(f"{tail} {head}")
                say(f"witness {refutation.witness}")
            return 0
        else:
            say(f"err unrecognized line {line.strip()!r}")


def transcript_to_client_script(text: str, claim: int | None = None) -> str:
    """Turn a stored transcript into protocol lines replaying its queries.

    Appends '! <claim>' when a claim is given, so the scripted client also
    collects a verdict.
    """
    transcript = Transcript.from_text(text)
    lines = [f"? {u} {v}" for (u, v), _ in transcript]
    if claim is not None:
        lines.append(f"! {claim}")
    return "\n".join(lines) + "\n" if lines else ""


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _cmd_gen(args) -> int:
    tournament = generate_random_tournament(args.n, args.seed)
    _write_output(tournament.to_text(), args.out)
    return 0


def _cmd_run(args) -> int:
    config = ExperimentConfig(
        n=args.n,
        algorithm=args.algorithm,
        oracle=args.oracle,
        seed=args.seed,
        trials=args.trials,
        fmt=args.format,
        oracle_file=args.file,
    )
    rows = run_experiment(config)
    text = rows_to_json(rows) if args.format == "json" else rows_to_csv(rows)
    _write_output(text, args.out)
    return 0


def _cmd_exact(args) -> int:
    if args.replay:
        with open(args.replay) as fh:
            tree = parse_strategy(fh.read())
        task = TASKS[tree.task_name]
        worst = 0
        count = 0
        for tournament in all_tournaments(tree.n):
            used, answer = tree.replay(tournament)
            worst = max(worst, used)
            if task.name == "mod-found":
                good = answer in tournament.mod_vertices()
            else:
                good = answer == (tournament.zero_indegree_vertex() is not None)
            if used > tree.value or not good:
                print(
                    f"replay failed on a tournament: used={used} "
                    f"value={tree.value} answer={answer}",
                    file=sys.stderr,
                )
                return 1
            count += 1
        print(
            f"task={tree.task_name} n={tree.n} value={tree.value} "
            f"replayed={count} worst={worst}"
        )
        return 0
    result = exact_complexity(args.n, args.task, allow_large=args.allow_large)
    print(f"task={args.task} n={args.n} value={result.value}")
    if args.out:
        _write_output(result.strategy.export_text(), args.out)
    return 0


def _cmd_serve(args) -> int:
    return serve_oracle_stdio(args.oracle, args.n, seed=args.seed, path=args.file)


def _cmd_table(args) -> int:
    _write_output(emit_bound_table(args.n, args.format), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tournament-lab",
        description="Inquiry-cost experiments on tournaments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a seeded random tournament fixture")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("run", help="run algorithm-vs-oracle trials")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--algorithm", required=True, choices=sorted(ALGORITHMS))
    p.add_argument("--oracle", required=True, choices=ORACLE_KINDS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--file", default=None, help="fixture path for the static-file oracle")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("exact", help="solve a task exactly, or replay a strategy")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--task", choices=sorted(TASKS), default="mod-found")
    p.add_argument("--allow-large", action="store_true", help="permit n=6")
    p.add_argument("--out", default=None, help="write the strategy tree here")
    p.add_argument("--replay", default=None, help="replay an exported strategy file")
    p.set_defaults(fn=_cmd_exact)

    p = sub.add_parser("serve", help="serve the oracle line protocol on stdio")
    p.add_argument("--oracle", required=True, choices=ORACLE_KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--file", default=None, help="fixture path for the static-file oracle")
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("table", help="print the lower-bound table up to --n")
    p.add_argument("--n", type=int, required=True, help="largest vertex count row")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "exact" and not args.replay and args.n < 1:
        parser.error("exact requires --n (or --replay FILE)")
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
