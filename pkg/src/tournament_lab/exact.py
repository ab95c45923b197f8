"""Exact worst-case inquiry complexity of tournament tasks for tiny n.

The solver plays a perfect-information game over partial orientations: the
querier picks an undecided pair (minimizing inquiries), an adversary picks
the orientation (maximizing), and the game ends once the task's terminal
test fires. The minimax value is the exact worst-case inquiry count of an
optimal algorithm, memoized on a base-3 key over the lexicographically
ordered pairs (0 unknown, 1 u->v, 2 v->u).

Memo writes are idempotent per key, so concurrent subtree evaluation would
be safe under the interpreter lock; the default single-threaded run produces
the same values either way.
"""

from dataclasses import dataclass
from collections.abc import Callable

from .core import Tournament, all_pairs, pair_count
from .oracle import COMPLETION_LIMIT, KnowledgeState

# Required solver capability; 3**15 keys for n=6 is allowed only on request.
MAX_SOLVER_N = 5
MAX_SOLVER_N_LARGE = 6


@dataclass(frozen=True)
class GameState:
    """Partial orientation of the pairs on n vertices, keyed in base 3."""

    n: int
    key: int

    @classmethod
    def empty(cls, n: int) -> "GameState":
        return cls(n, 0)

    @classmethod
    def from_knowledge(cls, knowledge: KnowledgeState) -> "GameState":
        key = 0
        for idx, code in enumerate(knowledge._orient):
            key += code * 3**idx
        return cls(knowledge.n, key)

    def codes(self) -> list[int]:
        out = [0] * pair_count(self.n)
        key = self.key
        for idx in range(len(out)):
            key, out[idx] = divmod(key, 3)
        return out

    @property
    def q(self) -> int:
        return sum(1 for code in self.codes() if code)

    def to_knowledge(self) -> KnowledgeState:
        knowledge = KnowledgeState(self.n)
        for (u, v), code in zip(all_pairs(self.n), self.codes()):
            if code == 1:
                knowledge.record(u, v)
            elif code == 2:
                knowledge.record(v, u)
        return knowledge

    def child(self, pair_idx: int, code: int) -> "GameState":
        if code not in (1, 2):
            raise ValueError("orientation code must be 1 (u->v) or 2 (v->u)")
        if self.codes()[pair_idx] != 0:
            raise ValueError(f"pair index {pair_idx} already decided")
        return GameState(self.n, self.key + code * 3**pair_idx)


def _degree_arrays(n: int, codes: list[int]) -> tuple[list[int], list[int]]:
    dp = [0] * n
    dm = [0] * n
    for (u, v), code in zip(all_pairs(n), codes):
        if code == 1:
            dp[u] += 1
            dm[v] += 1
        elif code == 2:
            dp[v] += 1
            dm[u] += 1
    return dp, dm


def _terminal_mod(n, codes, dp, dm, pairs, limit) -> int | None:
    """Lowest vertex of maximum out-degree in every completion, else None.

    The degree certificate settles most states; enumeration over completions
    resolves the exact lowest index (and the certificate-free cases) while
    at most ``limit`` pairs are unknown. States beyond the limit that fail
    the certificate are treated as undecided, which at solver scale never
    happens (the limit covers all of n <= 6).
    """
    cert = None
    if n == 1:
        return 0
    top1 = top2 = -1
    top1_idx = -1
    top1_count = 0
    for y in range(n):
        r = (n - 1) - dm[y]
        if r > top1:
            top2 = top1
            top1, top1_idx, top1_count = r, y, 1
        elif r == top1:
            top1_count += 1
            top2 = r
        else:
            if r > top2:
                top2 = r
    for x in range(n):
        needed = top2 if (top1_count == 1 and top1_idx == x) else top1
        if dp[x] >= needed:
            cert = x
            break
    if cert == 0:
        return 0
    unknown = [i for i, code in enumerate(codes) if code == 0]
    if len(unknown) > limit:
        return cert
    if cert is None:
        candidates = set(range(n))
    else:
        # The certified vertex is safe; only lower indices remain in doubt.
        candidates = set(range(cert + 1))
    for mask in range(1 << len(unknown)):
        degs = dp.copy()
        for j, i in enumerate(unknown):
            u, v = pairs[i]
            if mask >> j & 1:
                degs[v] += 1
            else:
                degs[u] += 1
        mx = max(degs)
        candidates = {x for x in candidates if degs[x] == mx}
        if not candidates:
            return None
    return min(candidates)


def _terminal_zero_indegree(n, codes, dp, dm, pairs, limit) -> bool | None:
    """True/False once every completion agrees on a zero in-degree vertex existing."""
    candidates = [v for v in range(n) if dm[v] == 0]
    if not candidates:
        return False
    for v in candidates:
        if dp[v] == n - 1:
            return True
    unknown = [i for i, code in enumerate(codes) if code == 0]
    if len(unknown) > limit:
        return None
    verdict = None
    for mask in range(1 << len(unknown)):
        indeg = dm.copy()
        for j, i in enumerate(unknown):
            u, v = pairs[i]
            if mask >> j & 1:
                indeg[u] += 1
            else:
                indeg[v] += 1
        exists = any(indeg[v] == 0 for v in candidates)
        if verdict is None:
            verdict = exists
        elif verdict != exists:
            return None
    return verdict


def terminal_mod(state: GameState, limit: int = COMPLETION_LIMIT) -> int | None:
    """Public terminal test for the mod-found task on a game state."""
    codes = state.codes()
    dp, dm = _degree_arrays(state.n, codes)
    return _terminal_mod(state.n, codes, dp, dm, list(all_pairs(state.n)), limit)


def terminal_zero_indegree(state: GameState, limit: int = COMPLETION_LIMIT) -> bool | None:
    """Public terminal test for the zero-indegree-decided task on a game state."""
    codes = state.codes()
    dp, dm = _degree_arrays(state.n, codes)
    return _terminal_zero_indegree(
        state.n, codes, dp, dm, list(all_pairs(state.n)), limit
    )


@dataclass(frozen=True)
class TaskPredicate:
    """A named task with a monotone terminal test over game states."""

    name: str
    terminal: Callable[[GameState], object | None]


MOD_FOUND = TaskPredicate("mod-found", terminal_mod)
ZERO_INDEGREE_DECIDED = TaskPredicate("zero-indegree-decided", terminal_zero_indegree)
TASKS = {task.name: task for task in (MOD_FOUND, ZERO_INDEGREE_DECIDED)}

_INTERNAL_TERMINALS = {
    "mod-found": _terminal_mod,
    "zero-indegree-decided": _terminal_zero_indegree,
}


class StrategyTree:
    """Optimal decision tree: which pair to query in each reachable state.

    ``nodes`` maps a state key either to ("query", u, v) or ("answer", a).
    Children are addressed implicitly: answering u->v (v->u) at a query node
    moves from key to key + 1*3**i (2*3**i) for the pair's lex index i.
    """

    def __init__(self, n: int, task_name: str, value: int, nodes: dict):
        self.n = n
        self.task_name = task_name
        self.value = value
        self.nodes = nodes

    def export_text(self) -> str:
        pairs = list(all_pairs(self.n))
        pow3 = [3**i for i in range(len(pairs))]
        lines = [f"strategy task={self.task_name} n={self.n} value={self.value}"]
        emitted = set()

        def emit(key, depth):
            if key in emitted:
                return
            emitted.add(key)
            node = self.nodes[key]
            pad = "  " * depth
            if node[0] == "answer":
                lines.append(f"{pad}{key} : answer {_render_answer(node[1])}")
                return
            _, u, v = node
            idx = pairs.index((u, v))
            left = key + pow3[idx]
            right = key + 2 * pow3[idx]
            lines.append(
                f"{pad}{key} : query {u} {v} | {u} {v} => {left} | {v} {u} => {right}"
            )
            emit(left, depth + 1)
            emit(right, depth + 1)

        emit(0, 0)
        return "\n".join(lines) + "\n"

    def replay(self, tournament: Tournament) -> tuple[int, object]:
        """Drive the strategy against a concrete tournament.

        Returns (inquiries used, terminal answer).
        """
        if tournament.n != self.n:
            raise ValueError("tournament size does not match the strategy")
        pairs = list(all_pairs(self.n))
        pow3 = [3**i for i in range(len(pairs))]
        index = {pair: i for i, pair in enumerate(pairs)}
        key = 0
        used = 0
        while True:
            node = self.nodes.get(key)
            if node is None:
                raise ValueError(f"strategy has no node for state key {key}")
            if node[0] == "answer":
                return used, node[1]
            _, u, v = node
            i = index[(u, v)]
            key += pow3[i] if tournament.has_arc(u, v) else 2 * pow3[i]
            used += 1


def _render_answer(answer) -> str:
    if isinstance(answer, bool):
        return "yes" if answer else "no"
    return str(answer)


def _parse_answer(token: str):
    if token == "yes":
        return True
    if token == "no":
        return False
    return int(token)


def parse_strategy(text: str) -> StrategyTree:
    """Parse the indented text emitted by :meth:`StrategyTree.export_text`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("strategy "):
        raise ValueError("missing strategy header line")
    meta = dict(field.split("=", 1) for field in lines[0].split()[1:])
    n = int(meta["n"])
    value = int(meta["value"])
    task_name = meta["task"]
    nodes = {}
    for ln in lines[1:]:
        head, _, rest = ln.strip().partition(" : ")
        key = int(head)
        if rest.startswith("answer "):
            nodes[key] = ("answer", _parse_answer(rest.split()[1]))
        elif rest.startswith("query "):
            parts = rest.split(" | ")[0].split()
            nodes[key] = ("query", int(parts[1]), int(parts[2]))
        else:
            raise ValueError(f"malformed strategy line: {ln!r}")
    return StrategyTree(n, task_name, value, nodes)


@dataclass
class GameValue:
    """Exact worst-case inquiry count, with the optimal strategy tree."""

    value: int
    strategy: StrategyTree | None


def exact_complexity(
    n: int,
    task: TaskPredicate | str,
    *,
    allow_large: bool = False,
    use_memo: bool = True,
    want_strategy: bool = True,
    limit: int = COMPLETION_LIMIT,
) -> GameValue:
    """Minimax value of the task on n vertices.

    Supports n <= 5 by default; n = 6 (3**15 states) must be requested with
    ``allow_large``. The value always lies in [0, pair_count(n)].
    """
    if isinstance(task, str):
        try:
            task = TASKS[task]
        except KeyError:
            raise ValueError(f"unknown task {task!r}") from None
    if n < 1:
        raise ValueError("vertex count must be positive")
    cap = MAX_SOLVER_N_LARGE if allow_large else MAX_SOLVER_N
    if n > cap:
        raise ValueError(
            f"n={n} is beyond solver capability "
            f"(max {MAX_SOLVER_N}, or {MAX_SOLVER_N_LARGE} with allow_large)"
        )

    pairs = list(all_pairs(n))
    npairs = len(pairs)
    pow3 = [3**i for i in range(npairs)]
    codes = [0] * npairs
    dp = [0] * n
    dm = [0] * n
    memo: dict[int, int] = {}
    plan: dict[int, object] = {}

    internal = _INTERNAL_TERMINALS.get(task.name)
    if internal is None:
        # Custom tasks go through the public state-based terminal test.
        def check_terminal(key):
            return task.terminal(GameState(n, key))
    else:
        def check_terminal(key):
            return internal(n, codes, dp, dm, pairs, limit)

    def solve(key: int) -> int:
        if use_memo:
            cached = memo.get(key)
            if cached is not None:
                return cached
        answer = check_terminal(key)
        if answer is not None:
            if use_memo:
                memo[key] = 0
            plan[key] = ("answer", answer)
            return 0
        best = npairs + 1
        best_idx = -1
        for i in range(npairs):
            if codes[i]:
                continue
            u, v = pairs[i]
            worst = -1
            for code in (1, 2):
                codes[i] = code
                if code == 1:
                    dp[u] += 1
                    dm[v] += 1
                else:
                    dp[v] += 1
                    dm[u] += 1
                child = solve(key + code * pow3[i])
                if code == 1:
                    dp[u] -= 1
                    dm[v] -= 1
                else:
                    dp[v] -= 1
                    dm[u] -= 1
                codes[i] = 0
                if child > worst:
                    worst = child
                if 1 + worst >= best:
                    break
            if 1 + worst < best:
                best = 1 + worst
                best_idx = i
        if use_memo:
            memo[key] = best
        plan[key] = best_idx
        return best

    value = solve(0)

    strategy = None
    if want_strategy:
        nodes: dict[int, object] = {}
        stack = [0]
        while stack:
            key = stack.pop()
            if key in nodes:
                continue
            entry = plan[key]
            if isinstance(entry, tuple):
                nodes[key] = entry
                continue
            u, v = pairs[entry]
            nodes[key] = ("query", u, v)
            stack.append(key + pow3[entry])
            stack.append(key + 2 * pow3[entry])
        strategy = StrategyTree(n, task.name, value, nodes)
    return GameValue(value, strategy)
