"""Lower-bound adversary for maximum-out-degree claims.

The adversary answers inquiries according to a hidden tournament: rotational
regular for odd n, almost regular for even n. After an algorithm claims that
some vertex has maximum out-degree, the adversary tries to orient the still
unqueried pairs so that the claim fails. Two constructive completions drive
the argument:

* ``suppress_completion``: every unknown pair at the claimed vertex is
  oriented into it, freezing its out-degree at the known count; all other
  unknown pairs follow the hidden tournament.
* ``boost_completion``: every unknown pair at some other vertex is oriented
  out of it, lifting that vertex above what the rest can reach.

Whenever the claimed vertex's known out-degree, or some other vertex's known
in-degree, falls short of its parity threshold, the matching completion
defeats the claim. Summing the in-degree thresholds over the other n-1
vertices yields the worst-case inquiry floor reported by
``mod_query_lower_bound``.
"""

from dataclasses import dataclass

from .core import Tournament, make_almost_regular, make_rotational_regular
from .oracle import (
    COMPLETION_LIMIT,
    KnowledgeState,
    OracleSession,
    completions,
)


def mod_query_lower_bound(n: int) -> int:
    """Worst-case inquiries needed to certify a maximum-out-degree vertex.

    Equals (n-1)**2 / 2 for odd n and (n-1)(n-2) / 2 for even n.
    """
    if n < 1:
        raise ValueError("vertex count must be positive")
    if n % 2:
        return (n - 1) ** 2 // 2
    return (n - 1) * (n - 2) // 2


def out_degree_threshold(n: int) -> int:
    """Known out-degree a safe claim must reach: (n-1)/2 odd, n/2 even."""
    return (n - 1) // 2 if n % 2 else n // 2


def in_degree_threshold(n: int) -> int:
    """Known in-degree every other vertex must reach: (n-1)/2 odd, n/2-1 even."""
    return (n - 1) // 2 if n % 2 else n // 2 - 1


@dataclass
class Refutation:
    """A completion under which the claimed vertex is not of maximum out-degree."""

    completion: Tournament
    witness: int


@dataclass
class DegreeDeficitReport:
    """Known-degree audit of a claim against the parity thresholds.

    ``certified_minimum_inquiries`` is the sum of known in-degrees over all
    vertices other than the claimed one; it never exceeds q, so it is a
    certified lower bound on the inquiries any safe claim has paid for.
    """

    n: int
    claimed: int
    known_out: int
    out_threshold: int
    claimed_deficient: bool
    in_threshold: int
    known_in: tuple[int, ...]
    deficient_vertices: tuple[int, ...]
    certified_minimum_inquiries: int


def degree_deficit_audit(knowledge: KnowledgeState, claimed: int) -> DegreeDeficitReport:
    n = knowledge.n
    known_in = tuple(knowledge.d_minus(v) for v in range(n))
    in_thr = in_degree_threshold(n)
    deficient = tuple(
        y for y in range(n) if y != claimed and known_in[y] < in_thr
    )
    return DegreeDeficitReport(
        n=n,
        claimed=claimed,
        known_out=knowledge.d_plus(claimed),
        out_threshold=out_degree_threshold(n),
        claimed_deficient=knowledge.d_plus(claimed) < out_degree_threshold(n),
        in_threshold=in_thr,
        known_in=known_in,
        deficient_vertices=deficient,
        certified_minimum_inquiries=sum(
            known_in[z] for z in range(n) if z != claimed
        ),
    )


def _completion_rows(hidden: Tournament, knowledge: KnowledgeState) -> list[int]:
    # Known arcs verbatim, unknown pairs filled from the hidden tournament.
    rows = [0] * knowledge.n
    for tail, head in knowledge.known_arcs():
        rows[tail] |= 1 << head
    for u, v in knowledge.unknown_pairs():
        tail, head = hidden.arc_between(u, v)
        rows[tail] |= 1 << head
    return rows


def suppress_completion(
    hidden: Tournament, knowledge: KnowledgeState, target: int
) -> Tournament:
    """Complete the knowledge with every unknown pair at ``target`` oriented into it."""
    rows = _completion_rows(hidden, knowledge)
    for u, v in knowledge.unknown_pairs():
        if target in (u, v):
            other = v if u == target else u
            rows[target] &= ~(1 << other)
            rows[other] |= 1 << target
    return Tournament._from_rows(knowledge.n, rows)


def boost_completion(
    hidden: Tournament, knowledge: KnowledgeState, target: int
) -> Tournament:
    """Complete the knowledge with every unknown pair at ``target`` oriented out of it."""
    rows = _completion_rows(hidden, knowledge)
    for u, v in knowledge.unknown_pairs():
        if target in (u, v):
            other = v if u == target else u
            rows[other] &= ~(1 << target)
            rows[target] |= 1 << other
    return Tournament._from_rows(knowledge.n, rows)


def _refutes(completion: Tournament, claimed: int) -> Refutation | None:
    degs = completion.out_degrees()
    target = degs[claimed]
    for y, d in enumerate(degs):
        if d > target:
            return Refutation(completion, y)
    return None


def attempt_refutation(
    hidden: Tournament,
    knowledge: KnowledgeState,
    claimed: int,
    limit: int = COMPLETION_LIMIT,
) -> Refutation | None:
    """Search for a completion under which ``claimed`` is not of maximum out-degree.

    Tries, in order: the suppressing completion when the claimed vertex's
    known out-degree is below its threshold; the boosting completion for each
    other vertex (ascending) whose known in-degree is below its threshold;
    and finally brute force over all completions when at most ``limit`` pairs
    are unknown. Returns None when no attempted completion defeats the claim;
    with the brute-force stage available that means the claim is safe against
    every completion. The lowest-index witness is reported.
    """
    n = knowledge.n
    if knowledge.d_plus(claimed) < out_degree_threshold(n):
        found = _refutes(suppress_completion(hidden, knowledge, claimed), claimed)
        if found:
            return found
    in_thr = in_degree_threshold(n)
    for y in range(n):
        if y == claimed or knowledge.d_minus(y) >= in_thr:
            continue
        found = _refutes(boost_completion(hidden, knowledge, y), claimed)
        if found:
            return found
    if knowledge.unknown_count() <= limit:
        for candidate in completions(knowledge, limit):
            found = _refutes(candidate, claimed)
            if found:
                return found
    return None


class AdversaryState:
    """Answering adversary with a hidden regular or almost regular tournament.

    ``answer`` plays strictly according to the hidden tournament and mirrors
    what has been revealed; ``refute`` is a pure function of the current
    knowledge and a claimed vertex, so it can be probed mid-run.
    """

    def __init__(self, n: int, hidden: Tournament | None = None):
        if n < 1:
            raise ValueError("vertex count must be positive")
        if hidden is None:
            hidden = make_rotational_regular(n) if n % 2 else make_almost_regular(n)
        elif hidden.n != n:
            raise ValueError(f"hidden tournament has {hidden.n} vertices, expected {n}")
        self.n = n
        self.hidden = hidden
        self.knowledge = KnowledgeState(n)

    def answer(self, pair: tuple[int, int]) -> tuple[int, int]:
        arc = self.hidden.arc_between(*pair)
        if self.knowledge.arc_between(min(pair), max(pair)) is None:
            self.knowledge.record(*arc)
        return arc

    def refute(self, claimed: int, limit: int = COMPLETION_LIMIT) -> Refutation | None:
        if not 0 <= claimed < self.n:
            raise ValueError(f"claimed vertex {claimed} out of range")
        return attempt_refutation(self.hidden, self.knowledge, claimed, limit)

    def audit(self, claimed: int) -> DegreeDeficitReport:
        return degree_deficit_audit(self.knowledge, claimed)


def make_adversary(n: int, hidden: Tournament | None = None) -> AdversaryState:
    """Adversary over the standard hidden tournament for n's parity.

    ``hidden`` may be overridden for experiments with other hidden
    tournaments; the refutation guarantees are only proven for the default
    regular / almost regular choices.
    """
    return AdversaryState(n, hidden)


def open_adversary_session(
    adversary: AdversaryState, budget: int | None = None
) -> OracleSession:
    """Oracle session backed by an adversary's answering strategy."""
    return OracleSession(adversary.n, adversary.answer, budget=budget, kind="adversary")
