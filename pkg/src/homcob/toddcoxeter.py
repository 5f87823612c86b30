"""Todd-Coxeter coset enumeration (HLT strategy) with a hard coset cap.

Enumerates cosets of the trivial subgroup, so a closed table gives the
exact group order.  Processing is deterministic: cosets are scanned FIFO
in creation order and relators in input order.
"""

from __future__ import annotations

from .errors import InputError
from .simplicial import GroupPresentation

EXCEEDED = "exceeded"


class _CapHit(Exception):
    pass


class _Table:
    """Coset table over columns g0, g0^-1, g1, g1^-1, ... with union-find
    coincidence handling."""

    def __init__(self, ngens: int, limit: int):
        self.width = 2 * ngens
        self.limit = limit
        self.neighbors: list[list[int | None]] = []
        self.parent: list[int] = []
        self.created = 0
        self.define()

    def define(self) -> int:
        if self.created >= self.limit:
            raise _CapHit()
        self.created += 1
        self.neighbors.append([None] * self.width)
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, c: int) -> int:
        while self.parent[c] != c:
            self.parent[c] = self.parent[self.parent[c]]
            c = self.parent[c]
        return c

    @staticmethod
    def col(letter: int) -> int:
        g = abs(letter) - 1
        return 2 * g + (0 if letter > 0 else 1)

    def get(self, c: int, col: int):
        out = self.neighbors[self.find(c)][col]
        return None if out is None else self.find(out)

    def set(self, c: int, col: int, d: int):
        merges: list[tuple[int, int]] = []
        self._edge(c, col, d, merges)
        self._process(merges)

    def merge(self, a: int, b: int):
        self._process([(a, b)])

    def _edge(self, c: int, col: int, d: int, merges: list):
        """Record c.col = d and the inverse edge; queue conflicts."""
        c, d = self.find(c), self.find(d)
        cur = self.neighbors[c][col]
        if cur is None:
            self.neighbors[c][col] = d
        else:
            cur = self.find(cur)
            self.neighbors[c][col] = cur
            if cur != d:
                merges.append((cur, d))
        icol = col ^ 1
        cur2 = self.neighbors[d][icol]
        if cur2 is None:
            self.neighbors[d][icol] = c
        else:
            cur2 = self.find(cur2)
            self.neighbors[d][icol] = cur2
            if cur2 != c:
                merges.append((cur2, c))

    def _process(self, merges: list):
        while merges:
            a, b = merges.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if a > b:
                a, b = b, a
            self.parent[b] = a
            row = self.neighbors[b]
            self.neighbors[b] = [None] * self.width
            for col, out in enumerate(row):
                if out is not None:
                    self._edge(a, col, self.find(out), merges)

    def live_count(self) -> int:
        return sum(1 for c in range(len(self.parent)) if self.find(c) == c)


def coset_enumeration(p: GroupPresentation, limit: int):
    """Order of the presented group, or "exceeded" when more than `limit`
    cosets would be needed."""
    if limit < 1:
        raise InputError("coset limit must be >= 1")
    table = _Table(p.ngens, limit)
    words = [[_Table.col(letter) for letter in w] for w in p.relators]
    try:
        idx = 0
        while idx < table.created:
            if table.find(idx) != idx:
                idx += 1
                continue
            for word in words:
                if table.find(idx) != idx:
                    break  # merged away mid-scan; survivor saw these edges
                _scan_and_fill(table, idx, word)
            if table.find(idx) == idx:
                for col in range(table.width):
                    if table.get(idx, col) is None:
                        table.set(idx, col, table.define())
            idx += 1
    except _CapHit:
        return EXCEEDED
    return table.live_count()


def _scan_and_fill(table: _Table, cos: int, word: list[int]):
    """Trace `word` at `cos`, defining cosets so the cycle closes."""
    n = len(word)
    if n == 0:
        return
    front = table.find(cos)
    i = 0
    while i < n:
        nxt = table.get(front, word[i])
        if nxt is None:
            break
        front = nxt
        i += 1
    if i == n:
        table.merge(front, cos)  # full scan must close up
        return
    back = table.find(cos)
    j = n
    while j - 1 > i:
        prv = table.get(back, word[j - 1] ^ 1)
        if prv is None:
            break
        back = prv
        j -= 1
    while i < j - 1:
        fresh = table.define()
        table.set(front, word[i], fresh)
        front = table.find(fresh)
        i += 1
    table.set(front, word[i], back)  # closing deduction (may coincide)
