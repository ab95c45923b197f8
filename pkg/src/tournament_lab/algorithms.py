"""Query algorithms running against oracle sessions.

* ``find_zero_indegree``: knockout elimination plus verification, deciding
  whether the unknown tournament has a vertex of in-degree zero in fewer
  than 2n inquiries.
* ``find_mod_exhaustive``: queries every pair and claims the lowest-index
  vertex of maximum out-degree.
* ``find_mod_certified``: queries pairs in a pluggable order and stops as
  soon as some vertex is certifiably of maximum out-degree in every
  completion of the current knowledge.
* ``verify_claim``: independent soundness check of a claim against a
  knowledge state.
"""

import random
from dataclasses import dataclass
from collections.abc import Iterable

from .core import all_pairs, pair_count
from .oracle import (
    COMPLETION_LIMIT,
    CompletionLimitError,
    KnowledgeState,
    OracleSession,
    Transcript,
    completions,
)

OUTCOME_FOUND = "found"
OUTCOME_NOT_FOUND = "not-found"
OUTCOME_CERTIFIED_MOD = "certified-mod"

SOUND = "sound"
REFUTABLE = "refutable"


@dataclass
class AlgorithmRun:
    """Result of one algorithm execution over a session."""

    claimed: int | None
    transcript: Transcript
    outcome: str


def knockout_survivor(session: OracleSession, n: int) -> int:
    """Single-elimination sweep; uses exactly n - 1 inquiries.

    Survivors are paired by ascending index each round, an odd survivor
    carries over, and the head of each answered arc is eliminated.
    """
    alive = list(range(n))
    while len(alive) > 1:
        nxt = []
        for i in range(0, len(alive) - 1, 2):
            a, b = alive[i], alive[i + 1]
            _, loser = session.query((a, b))
            nxt.append(a if loser == b else b)
        if len(alive) % 2:
            nxt.append(alive[-1])
        alive = nxt
    return alive[0]


def find_zero_indegree(session: OracleSession, n: int) -> AlgorithmRun:
    """Decide whether the oracle's tournament has a vertex of in-degree zero.

    Runs the knockout sweep, then queries every still-unknown pair at the
    survivor. Total inquiries stay below 2n: at most n - 1 for the sweep and
    another n - 1 for verification.
    """
    if n != session.n:
        raise ValueError(f"session is over {session.n} vertices, not {n}")
    survivor = knockout_survivor(session, n)
    knowledge = session.knowledge()
    incoming = False
    for w in range(n):
        if w == survivor:
            continue
        pair = (w, survivor) if w < survivor else (survivor, w)
        arc = knowledge.arc_between(*pair)
        if arc is None:
            arc = session.query(pair)
        if arc[1] == survivor:
            incoming = True
    if incoming:
        return AlgorithmRun(None, session.transcript, OUTCOME_NOT_FOUND)
    return AlgorithmRun(survivor, session.transcript, OUTCOME_FOUND)


def find_mod_exhaustive(session: OracleSession, n: int) -> AlgorithmRun:
    """Query all pairs in lex order; claim the lowest-index max out-degree vertex."""
    if n != session.n:
        raise ValueError(f"session is over {session.n} vertices, not {n}")
    for pair in all_pairs(n):
        session.query(pair)
    knowledge = session.knowledge()
    best = max(knowledge.d_plus(v) for v in range(n))
    claimed = next(v for v in range(n) if knowledge.d_plus(v) == best)
    return AlgorithmRun(claimed, session.transcript, OUTCOME_CERTIFIED_MOD)


def lexicographic_pairs(n: int, seed: int = 0) -> list[tuple[int, int]]:
    return list(all_pairs(n))


def round_robin_pairs(n: int, seed: int = 0) -> list[tuple[int, int]]:
    """All pairs grouped into rounds of disjoint matches (circle method)."""
    slots: list[int | None] = list(range(n))
    if n % 2:
        slots.append(None)
    m = len(slots)
    order = []
    for _ in range(m - 1):
        for i in range(m // 2):
            a, b = slots[i], slots[m - 1 - i]
            if a is not None and b is not None:
                order.append((a, b) if a < b else (b, a))
        slots = [slots[0], slots[-1]] + slots[1:-1]
    return order


def shuffled_pairs(n: int, seed: int = 0) -> list[tuple[int, int]]:
    order = list(all_pairs(n))
    random.Random(seed).shuffle(order)
    return order


QUERY_ORDERS = {
    "lex": lexicographic_pairs,
    "round-robin": round_robin_pairs,
    "random": shuffled_pairs,
}


class _CertificateTracker:
    """Incremental check that some vertex is maximal in every completion.

    Vertex x is certified once d_plus(x) >= d_plus(y) + unknown(y) for every
    other y, i.e. no completion can lift any y past x's already known
    out-degree. Since d_plus(y) + unknown(y) = (n-1) - d_minus(y), the check
    reduces to comparing the best known out-degree against (n-1) minus the
    known in-degrees, which bucket counters keep O(1) per inquiry.
    """

    def __init__(self, n: int):
        self.n = n
        self.dp = [0] * n
        self.dm = [0] * n
        self.count_dm = [0] * (n + 1)
        self.count_dm[0] = n
        self.min_dm = 0
        self.max_dp = 0

    def note(self, tail: int, head: int) -> None:
        self.dp[tail] += 1
        if self.dp[tail] > self.max_dp:
            self.max_dp = self.dp[tail]
        old = self.dm[head]
        self.dm[head] = old + 1
        self.count_dm[old] -= 1
        self.count_dm[old + 1] += 1
        if old == self.min_dm and self.count_dm[old] == 0:
            self.min_dm = old + 1

    def certified(self) -> bool:
        n = self.n
        if n == 1:
            return True
        ceiling = (n - 1) - self.min_dm
        if self.max_dp >= ceiling:
            return True
        if self.count_dm[self.min_dm] != 1:
            return False
        # A sole minimum-in-degree vertex may exclude itself from the bound.
        m2 = self.min_dm + 1
        while self.count_dm[m2] == 0:
            m2 += 1
        second = (n - 1) - m2
        if self.max_dp < second:
            return False
        sole = self.dm.index(self.min_dm)
        return self.dp[sole] >= second


def certified_vertex(knowledge: KnowledgeState, n: int) -> int | None:
    """Lowest-index vertex that is maximal in every completion, by the
    known-degree certificate alone; None when the certificate is inconclusive."""
    if n == 1:
        return 0
    reach = [(n - 1) - knowledge.d_minus(y) for y in range(n)]
    top1 = top2 = -1
    top1_idx = -1
    top1_count = 0
    for y, r in enumerate(reach):
        if r > top1:
            top2 = top1
            top1, top1_idx, top1_count = r, y, 1
        elif r == top1:
            top1_count += 1
            top2 = r
        elif r > top2:
            top2 = r
    for x in range(n):
        needed = top2 if (top1_count == 1 and top1_idx == x) else top1
        if knowledge.d_plus(x) >= needed:
            return x
    return None


def find_mod_certified(
    session: OracleSession,
    n: int,
    order: str | Iterable[tuple[int, int]] = "lex",
    seed: int = 0,
) -> AlgorithmRun:
    """Query pairs in ``order`` until some vertex is certified maximal.

    The claim is of maximum out-degree in every completion of the knowledge
    at stopping time, hence correct for the oracle's true tournament. Never
    exceeds pair_count(n) inquiries.
    """
    if n != session.n:
        raise ValueError(f"session is over {session.n} vertices, not {n}")
    if isinstance(order, str):
        try:
            pairs = QUERY_ORDERS[order](n, seed)
        except KeyError:
            raise ValueError(f"unknown query order {order!r}") from None
    else:
        pairs = list(order)
    tracker = _CertificateTracker(n)
    knowledge = session.knowledge()
    for tail, head in knowledge.known_arcs():
        tracker.note(tail, head)
    if not tracker.certified():
        for pair in pairs:
            if knowledge.is_known(*pair):
                continue
            tail, head = session.query(pair)
            tracker.note(tail, head)
            if tracker.certified():
                break
    claimed = certified_vertex(knowledge, n)
    if claimed is None:
        raise RuntimeError("query order exhausted without certifying a vertex")
    return AlgorithmRun(claimed, session.transcript, OUTCOME_CERTIFIED_MOD)


def verify_claim(
    knowledge: KnowledgeState, claimed: int, limit: int = COMPLETION_LIMIT
) -> str:
    """SOUND iff ``claimed`` has maximum out-degree in every completion.

    Decides by the degree certificate when it applies, otherwise by
    exhaustive completion enumeration; raises :class:`CompletionLimitError`
    when neither route is available.
    """
    n = knowledge.n
    if not 0 <= claimed < n:
        raise ValueError(f"claimed vertex {claimed} out of range")
    dp_claimed = knowledge.d_plus(claimed)
    certified = all(
        (n - 1) - knowledge.d_minus(y) <= dp_claimed
        for y in range(n)
        if y != claimed
    )
    if certified:
        return SOUND
    if knowledge.unknown_count() > limit:
        raise CompletionLimitError(
            "certificate inconclusive and too many unknown pairs to enumerate"
        )
    for completion in completions(knowledge, limit):
        if claimed not in completion.mod_vertices():
            return REFUTABLE
    return SOUND
