"""Inverting free-group automorphisms by Stallings folding with edge labels.

Each image word ``phi(z)`` is drawn as a loop at a base vertex whose first
edge remembers the source generator ``z``.  Folding keeps, for every closed
path at the base, the product of labels along it, so when the graph has
folded down to a rose with one petal per letter ``y`` the petal's label is a
source word mapping to ``y``.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from ..words import Gen, Word, substitute

__all__ = ["NotInvertible", "invert_automorphism"]


class NotInvertible(ValueError):
    """The given endomorphism of a free group is not an automorphism."""


class _Graph:
    def __init__(self):
        self.edges: dict[int, list] = {}  # id -> [src, letter, dst, label]
        self.at: dict[int, set[int]] = {0: set()}
        self._next_v = 1
        self._next_e = 0

    def vertex(self) -> int:
        v = self._next_v
        self._next_v += 1
        self.at[v] = set()
        return v

    def edge(self, src, letter, dst, label: Word):
        e = self._next_e
        self._next_e += 1
        self.edges[e] = [src, letter, dst, label]
        self.at[src].add(e)
        self.at[dst].add(e)

    def half_edges(self, v):
        # (signed letter, edge id, far end, label read from v)
        for e in self.at[v]:
            src, letter, dst, label = self.edges[e]
            if src == v:
                yield (letter, 1), e, dst, label
            if dst == v:
                yield (letter, -1), e, src, label.inverse()

    def gauge(self, v, g: Word):
        """Conjugate labels at ``v``: out-labels get ``g*`` and in-labels ``*g^-1``."""
        if not g:
            return
        gi = g.inverse()
        for e in self.at[v]:
            edge = self.edges[e]
            if edge[0] == v:
                edge[3] = g * edge[3]
            if edge[2] == v:
                edge[3] = edge[3] * gi

    def drop(self, e):
        src, _, dst, _ = self.edges.pop(e)
        self.at[src].discard(e)
        self.at[dst].discard(e)

    def merge(self, keep, gone):
        for e in self.at.pop(gone):
            edge = self.edges[e]
            if edge[0] == gone:
                edge[0] = keep
            if edge[2] == gone:
                edge[2] = keep
            self.at[keep].add(e)


def _fold(graph: _Graph):
    pending = set(graph.at)
    while pending:
        v = pending.pop()
        if v not in graph.at:
            continue
        seen: dict = {}
        for key, e, far, label in graph.half_edges(v):
            if key not in seen:
                seen[key] = (e, far, label)
                continue
            e1, w1, t1 = seen[key]
            e2, w2, t2 = e, far, label
            if e1 == e2:
                continue  # a loop read in the same direction twice cannot happen; be safe
            if w1 == w2:
                if t1 != t2:
                    raise NotInvertible("two paths with equal image and different preimage")
                graph.drop(e2)
            else:
                if w2 == 0:
                    e1, w1, t1, e2, w2, t2 = e2, w2, t2, e1, w1, t1
                graph.gauge(w2, t1.inverse() * t2)
                graph.drop(e2)
                graph.merge(w1, w2)
                pending.add(w1)
            pending.add(v)
            break


def invert_automorphism(images: Mapping[Gen, Word], basis: Sequence[Gen] | None = None) -> dict[Gen, Word]:
    """Return ``phi^-1`` on ``basis`` given ``phi`` on the same basis."""
    basis = list(images) if basis is None else list(basis)
    graph = _Graph()
    for z in basis:
        word = images[z]
        if not word:
            raise NotInvertible(f"{z} maps to the identity")
        stray = word.symbols() - set(basis)
        if stray:
            raise NotInvertible(f"image of {z} leaves the basis: {sorted(stray)}")
        cur = 0
        n = len(word.letters)
        for k, (g, s) in enumerate(word.letters):
            nxt = 0 if k == n - 1 else graph.vertex()
            label = Word.gen(z) if k == 0 else Word()
            if s > 0:
                graph.edge(cur, g, nxt, label)
            else:
                graph.edge(nxt, g, cur, label.inverse())
            cur = nxt
    _fold(graph)
    if len(graph.at) != 1:
        raise NotInvertible("image does not generate the whole free group")
    inverse: dict[Gen, Word] = {}
    for src, letter, dst, label in graph.edges.values():
        inverse[letter] = label
    if set(inverse) != set(basis) or len(graph.edges) != len(basis):
        raise NotInvertible("folded graph is not a rose on the basis")
    for z in basis:
        if substitute(inverse[z], images) != Word.gen(z):
            raise NotInvertible(f"verification failed on {z}")
    return inverse
