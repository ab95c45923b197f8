"""Tournament digraphs: representation, constructions, structural predicates.

A tournament on n labeled vertices orients every edge of the complete graph:
for each unordered pair {u, v} exactly one of the arcs u->v, v->u is present.
Vertices are the integers 0..n-1 and an arc is a ``(tail, head)`` tuple.

Orientations are stored as per-vertex out-neighborhood bitmasks (Python
integers), giving O(1) arc lookup and word-packed degree counts at any n.
Tournaments are immutable after construction and safe to share between
threads.
"""

from collections.abc import Iterable, Iterator


def pair_count(n: int) -> int:
    """Number of unordered vertex pairs on n vertices."""
    return n * (n - 1) // 2


def all_pairs(n: int) -> Iterator[tuple[int, int]]:
    """All canonical pairs (u, v) with u < v, in lexicographic order."""
    return ((u, v) for u in range(n - 1) for v in range(u + 1, n))


def pair_index(n: int, u: int, v: int) -> int:
    """Lexicographic rank of the canonical pair (u, v), u < v."""
    return u * n - u * (u + 3) // 2 + v - 1


class Tournament:
    """Immutable orientation of the complete graph on n vertices."""

    __slots__ = ("n", "_rows")

    def __init__(self, n: int, rows: Iterable[int]):
        rows = list(rows)
        if n < 1:
            raise ValueError("tournament needs at least one vertex")
        if len(rows) != n:
            raise ValueError(f"expected {n} out-neighborhood rows, got {len(rows)}")
        mask = (1 << n) - 1
        for v, row in enumerate(rows):
            if row & ~mask or row >> v & 1:
                raise ValueError(f"row {v} has bits outside 0..{n - 1} or a self-loop")
        for u in range(n - 1):
            for v in range(u + 1, n):
                if (rows[u] >> v & 1) == (rows[v] >> u & 1):
                    raise ValueError(f"pair ({u}, {v}) must have exactly one orientation")
        self.n = n
        self._rows = rows

    @classmethod
    def _from_rows(cls, n: int, rows: list[int]) -> "Tournament":
        # Trusted constructor for internal callers that build valid rows.
        t = object.__new__(cls)
        t.n = n
        t._rows = rows
        return t

    @classmethod
    def from_pair_bits(cls, n: int, bits: int) -> "Tournament":
        """Build from one orientation bit per canonical pair, in lex order.

        Bit k set means u->v for the k-th pair (u, v); clear means v->u.
        """
        rows = [0] * n
        k = 0
        for u in range(n - 1):
            for v in range(u + 1, n):
                if bits >> k & 1:
                    rows[u] |= 1 << v
                else:
                    rows[v] |= 1 << u
                k += 1
        return cls._from_rows(n, rows)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Tournament":
        """Build from an explicit arc list; must cover every pair exactly once."""
        rows = [0] * n
        for tail, head in arcs:
            rows[tail] |= 1 << head
        return cls(n, rows)

    def has_arc(self, u: int, v: int) -> bool:
        """True iff the arc u->v is present."""
        return bool(self._rows[u] >> v & 1)

    def arc_between(self, u: int, v: int) -> tuple[int, int]:
        """The oriented arc on the pair {u, v}."""
        if u == v:
            raise ValueError("no arc between a vertex and itself")
        return (u, v) if self.has_arc(u, v) else (v, u)

    def out_degree(self, v: int) -> int:
        return self._rows[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.n - 1 - self._rows[v].bit_count()

    def out_degrees(self) -> list[int]:
        return [row.bit_count() for row in self._rows]

    def arcs(self) -> Iterator[tuple[int, int]]:
        """All arcs, one per pair, in lexicographic pair order."""
        return (self.arc_between(u, v) for u, v in all_pairs(self.n))

    def is_king(self, x: int) -> bool:
        """True iff every other vertex is reachable from x in at most 2 steps."""
        row = self._rows[x]
        reach = row | (1 << x)
        m = row
        while m:
            lsb = m & -m
            reach |= self._rows[lsb.bit_length() - 1]
            m ^= lsb
        return reach == (1 << self.n) - 1

    def kings(self) -> list[int]:
        return [x for x in range(self.n) if self.is_king(x)]

    def mod_vertices(self) -> set[int]:
        """The full set of vertices attaining the maximum out-degree."""
        degs = self.out_degrees()
        mx = max(degs)
        return {v for v, d in enumerate(degs) if d == mx}

    def zero_indegree_vertex(self) -> int | None:
        """The unique vertex of in-degree 0, or None. At most one can exist."""
        full = self.n - 1
        for v, row in enumerate(self._rows):
            if row.bit_count() == full:
                return v
        return None

    def to_text(self) -> str:
        """Serialize as 'n <N>' plus one 'u v' arc line per pair, lex order."""
        lines = [f"n {self.n}"]
        for u, v in all_pairs(self.n):
            lines.append(f"{u} {v}" if self.has_arc(u, v) else f"{v} {u}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Tournament":
        """Parse the fixture format produced by :meth:`to_text`."""
        lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
        if not lines or not lines[0].startswith("n "):
            raise ValueError("missing 'n <N>' header")
        try:
            n = int(lines[0][2:])
        except ValueError:
            raise ValueError(f"bad vertex count in header: {lines[0]!r}") from None
        if n < 1:
            raise ValueError("vertex count must be positive")
        expected = pair_count(n)
        if len(lines) - 1 != expected:
            raise ValueError(f"expected {expected} arc lines, got {len(lines) - 1}")
        rows = [0] * n
        seen = set()
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise ValueError(f"malformed arc line: {ln!r}")
            tail, head = int(parts[0]), int(parts[1])
            if not (0 <= tail < n and 0 <= head < n) or tail == head:
                raise ValueError(f"arc endpoints out of range: {ln!r}")
            key = (min(tail, head), max(tail, head))
            if key in seen:
                raise ValueError(f"pair {key} appears twice")
            seen.add(key)
            rows[tail] |= 1 << head
        return cls._from_rows(n, rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Tournament)
            and self.n == other.n
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self.n, tuple(self._rows)))

    def __repr__(self) -> str:
        return f"Tournament(n={self.n})"


def _rotated_rows(n: int, base: int) -> list[int]:
    # Row i is the base neighborhood mask rotated left by i within n bits.
    mask = (1 << n) - 1
    return [((base << i) | (base >> (n - i))) & mask for i in range(n)]


def make_rotational_regular(n: int) -> Tournament:
    """Circulant tournament on odd n: i beats i+1 .. i+(n-1)/2 (mod n).

    Every out-degree and in-degree equals (n-1)/2.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError("a regular tournament requires an odd, positive vertex count")
    half = (n - 1) // 2
    base = ((1 << half) - 1) << 1
    return Tournament._from_rows(n, _rotated_rows(n, base))


def make_almost_regular(n: int) -> Tournament:
    """Almost regular tournament on even n.

    Rotational base (i beats i+1 .. i+n/2-1 mod n) plus the diametral arcs
    i -> i+n/2 for i < n/2. Exactly n/2 vertices have out-degree n/2 and the
    other n/2 have out-degree n/2 - 1.
    """
    if n < 2 or n % 2:
        raise ValueError("an almost regular tournament requires an even vertex count")
    half = n // 2
    base = ((1 << (half - 1)) - 1) << 1
    rows = _rotated_rows(n, base)
    for i in range(half):
        rows[i] |= 1 << (i + half)
    return Tournament._from_rows(n, rows)


def make_transitive(n: int) -> Tournament:
    """Totally ordered tournament: i beats j whenever i < j. Vertex 0 is the source."""
    if n < 1:
        raise ValueError("tournament needs at least one vertex")
    full = (1 << n) - 1
    rows = [full ^ ((1 << (i + 1)) - 1) for i in range(n)]
    return Tournament._from_rows(n, rows)


def all_tournaments(n: int) -> Iterator[Tournament]:
    """Every tournament on n labeled vertices, 2**pair_count(n) of them."""
    for bits in range(1 << pair_count(n)):
        yield Tournament.from_pair_bits(n, bits)
