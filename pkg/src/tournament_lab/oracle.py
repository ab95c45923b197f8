"""The binary-inquiry protocol.

An algorithm learns an unknown tournament one edge orientation at a time by
asking an oracle session about canonical pairs (u, v), u < v. The session
answers with the oriented arc, keeps an ordered transcript, counts distinct
inquiries, and maintains a :class:`KnowledgeState` with the tri-state view
(unknown / u->v / v->u) plus per-vertex known-degree tallies.

Sessions are single-owner stateful objects; distinct sessions are independent.
"""

from collections.abc import Callable, Iterator

from .core import Tournament, all_pairs, pair_count, pair_index

# Completion enumeration is refused above this many unknown pairs (2**20
# tournaments); callers must fall back to bound-based reasoning instead.
COMPLETION_LIMIT = 20

_UNKNOWN, _FORWARD, _BACKWARD = 0, 1, 2


class BudgetExceededError(RuntimeError):
    """A fresh inquiry was attempted after the session budget ran out."""


class CompletionLimitError(RuntimeError):
    """Too many unknown pairs to enumerate completions exhaustively."""


class Transcript:
    """Ordered record of (pair, answered arc), plus the inquiry count q."""

    def __init__(self):
        self.records: list[tuple[tuple[int, int], tuple[int, int]]] = []

    @property
    def q(self) -> int:
        return len(self.records)

    def append(self, pair: tuple[int, int], arc: tuple[int, int]) -> None:
        self.records.append((pair, arc))

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def to_text(self) -> str:
        """Lines 'u v -> a b' in query order, terminated by 'q=<count>'."""
        lines = [f"{u} {v} -> {a} {b}" for (u, v), (a, b) in self.records]
        lines.append(f"q={self.q}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Transcript":
        lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
        if not lines or not lines[-1].startswith("q="):
            raise ValueError("transcript must end with a 'q=<count>' line")
        t = cls()
        seen = set()
        for ln in lines[:-1]:
            left, sep, right = ln.partition("->")
            if not sep:
                raise ValueError(f"malformed transcript line: {ln!r}")
            u, v = map(int, left.split())
            a, b = map(int, right.split())
            if u >= v or {a, b} != {u, v}:
                raise ValueError(f"inconsistent transcript line: {ln!r}")
            if (u, v) in seen:
                raise ValueError(f"pair ({u}, {v}) queried twice")
            seen.add((u, v))
            t.append((u, v), (a, b))
        if int(lines[-1][2:]) != t.q:
            raise ValueError("q line does not match the number of records")
        return t


class KnowledgeState:
    """Tri-state orientation knowledge with cached degree tallies.

    ``d_plus(v)`` / ``d_minus(v)`` count the arcs known to leave / enter v;
    their sum never exceeds n - 1 and the d_plus total always equals q.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("knowledge state needs at least one vertex")
        self.n = n
        self._orient = [_UNKNOWN] * pair_count(n)
        self._dp = [0] * n
        self._dm = [0] * n
        self._q = 0

    @property
    def q(self) -> int:
        return self._q

    def d_plus(self, v: int) -> int:
        return self._dp[v]

    def d_minus(self, v: int) -> int:
        return self._dm[v]

    def unknown_at(self, v: int) -> int:
        """Number of pairs incident to v whose orientation is unknown."""
        return self.n - 1 - self._dp[v] - self._dm[v]

    def unknown_count(self) -> int:
        return pair_count(self.n) - self._q

    def is_known(self, u: int, v: int) -> bool:
        return self._orient[pair_index(self.n, u, v)] != _UNKNOWN

    def arc_between(self, u: int, v: int) -> tuple[int, int] | None:
        """The known arc on the canonical pair (u, v), or None."""
        if not 0 <= u < v < self.n:
            raise ValueError(f"({u}, {v}) is not a canonical pair on {self.n} vertices")
        code = self._orient[pair_index(self.n, u, v)]
        if code == _UNKNOWN:
            return None
        return (u, v) if code == _FORWARD else (v, u)

    def record(self, tail: int, head: int) -> bool:
        """Learn the arc tail->head. Returns False if it was already known.

        Raises ValueError if the pair was known with the opposite orientation.
        """
        u, v = (tail, head) if tail < head else (head, tail)
        if not 0 <= u < v < self.n or tail == head:
            raise ValueError(f"bad arc ({tail}, {head}) on {self.n} vertices")
        idx = pair_index(self.n, u, v)
        code = _FORWARD if tail == u else _BACKWARD
        existing = self._orient[idx]
        if existing != _UNKNOWN:
            if existing != code:
                raise ValueError(f"pair ({u}, {v}) already known with opposite orientation")
            return False
        self._orient[idx] = code
        self._dp[tail] += 1
        self._dm[head] += 1
        self._q += 1
        return True

    def known_arcs(self) -> Iterator[tuple[int, int]]:
        for idx, (u, v) in enumerate(all_pairs(self.n)):
            code = self._orient[idx]
            if code == _FORWARD:
                yield (u, v)
            elif code == _BACKWARD:
                yield (v, u)

    def unknown_pairs(self) -> list[tuple[int, int]]:
        return [
            (u, v)
            for idx, (u, v) in enumerate(all_pairs(self.n))
            if self._orient[idx] == _UNKNOWN
        ]

    def copy(self) -> "KnowledgeState":
        dup = KnowledgeState.__new__(KnowledgeState)
        dup.n = self.n
        dup._orient = self._orient.copy()
        dup._dp = self._dp.copy()
        dup._dm = self._dm.copy()
        dup._q = self._q
        return dup


def completions(state: KnowledgeState, limit: int = COMPLETION_LIMIT) -> Iterator[Tournament]:
    """Enumerate every tournament that agrees with ``state`` on known pairs.

    Yields exactly 2**unknown_count() tournaments. Enumeration order is fixed:
    unknown pairs in lex order, assignment masks ascending, a clear mask bit
    meaning u->v. Raises :class:`CompletionLimitError` above ``limit`` unknown
    pairs.
    """
    unknown = state.unknown_pairs()
    if len(unknown) > limit:
        raise CompletionLimitError(
            f"{len(unknown)} unknown pairs exceed the enumeration limit of {limit}"
        )
    n = state.n
    base = [0] * n
    for tail, head in state.known_arcs():
        base[tail] |= 1 << head

    def generate():
        for mask in range(1 << len(unknown)):
            rows = base.copy()
            for j, (u, v) in enumerate(unknown):
                if mask >> j & 1:
                    rows[v] |= 1 << u
                else:
                    rows[u] |= 1 << v
            yield Tournament._from_rows(n, rows)

    return generate()


class OracleSession:
    """Stateful answering side of the inquiry protocol.

    Wraps an answering strategy (a static tournament, or an adversary) and
    enforces the optional inquiry budget. A repeated pair is answered
    identically from the existing knowledge, is flagged via ``repeat_count``,
    and does not increment q.
    """

    def __init__(
        self,
        n: int,
        answer_fn: Callable[[tuple[int, int]], tuple[int, int]],
        budget: int | None = None,
        kind: str = "custom",
    ):
        if budget is not None and not 0 <= budget <= pair_count(n):
            raise ValueError(f"budget must lie in [0, {pair_count(n)}], got {budget}")
        self.n = n
        self.kind = kind
        self.budget = budget
        self.transcript = Transcript()
        self.repeat_count = 0
        self._answer = answer_fn
        self._state = KnowledgeState(n)

    @property
    def q(self) -> int:
        return self.transcript.q

    def query(self, pair: tuple[int, int]) -> tuple[int, int]:
        """Ask for the orientation of a canonical pair and record the answer."""
        u, v = pair
        if not 0 <= u < v < self.n:
            raise ValueError(f"({u}, {v}) is not a canonical pair on {self.n} vertices")
        known = self._state.arc_between(u, v)
        if known is not None:
            self.repeat_count += 1
            return known
        if self.budget is not None and self.transcript.q >= self.budget:
            raise BudgetExceededError(f"inquiry budget of {self.budget} exhausted")
        arc = self._answer((u, v))
        if set(arc) != {u, v}:
            raise ValueError(f"oracle answered {arc} for pair ({u}, {v})")
        self._state.record(*arc)
        self.transcript.append((u, v), arc)
        return arc

    def knowledge(self) -> KnowledgeState:
        """The tri-state view and degree tallies implied by the transcript."""
        return self._state


def open_static_session(tournament: Tournament, budget: int | None = None) -> OracleSession:
    """Session answering every inquiry according to a fixed tournament."""
    return OracleSession(
        tournament.n,
        lambda pair: tournament.arc_between(*pair),
        budget=budget,
        kind="static",
    )
