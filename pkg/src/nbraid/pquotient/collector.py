"""Collection from the left in a power-commutator presentation of a p-group.

Generators ``a_0 .. a_{n-1}``; relations ``a_i^p = power[i]`` and
``[a_j, a_i] = comm[j][i]`` for ``j > i``, right sides being normal words
in generators of larger index.  Normal words are exponent vectors with
entries in ``[0, p)``.  A sparse normal word is a tuple of ``(index, exp)``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

__all__ = ["PcPresentation", "sparse", "dense"]


def sparse(vec: Sequence[int]) -> tuple:
    return tuple((k, e) for k, e in enumerate(vec) if e)


def dense(word: Iterable, n: int) -> list[int]:
    v = [0] * n
    for k, e in word:
        v[k] = e
    return v


class PcPresentation:
    def __init__(self, p: int, n: int, power: list[tuple], comm: list[list[tuple]]):
        self.p = p
        self.n = n
        self.power = power
        self.comm = comm  # comm[j][i] for i < j
        self.nontrivial = [[j for j in range(i + 1, n) if comm[j][i]] for i in range(n)]
        self._inverse: list[list[int]] | None = None

    # ------------------------------------------------------------------
    def identity(self) -> list[int]:
        return [0] * self.n

    def gen(self, i: int) -> list[int]:
        v = [0] * self.n
        v[i] = 1
        return v

    def collect(self, e: list[int], letters: Iterable[int]) -> list[int]:
        """Multiply ``e`` in place on the right by the letters (generator indices)."""
        p, n, power, comm, nontrivial = self.p, self.n, self.power, self.comm, self.nontrivial
        stack = list(letters)
        stack.reverse()
        while stack:
            i = stack.pop()
            if not any(e[k] for k in nontrivial[i]):
                if e[i] + 1 < p:
                    e[i] += 1
                    continue
                e[i] = 0
                w = power[i]
                if not w:
                    continue
                tail = [(k, e[k]) for k in range(i + 1, n) if e[k]]
                if not tail:
                    for k, c in w:
                        e[k] = c
                    continue
                for k, _ in tail:
                    e[k] = 0
                pending = []
                for k, c in w:
                    pending.extend([k] * c)
                for k, c in tail:
                    pending.extend([k] * c)
                stack.extend(reversed(pending))
                continue
            tail = [(k, e[k]) for k in range(i + 1, n) if e[k]]
            for k, _ in tail:
                e[k] = 0
            pending = []
            if e[i] + 1 < p:
                e[i] += 1
            else:
                e[i] = 0
                for k, c in power[i]:
                    pending.extend([k] * c)
            for k, c in tail:
                conj = comm[k][i]
                for _ in range(c):
                    pending.append(k)
                    for kk, cc in conj:
                        pending.extend([kk] * cc)
            stack.extend(reversed(pending))
        return e

    def letters(self, vec: Sequence[int]) -> list[int]:
        out = []
        for k, c in enumerate(vec):
            if c:
                out.extend([k] * c)
        return out

    def multiply(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        return self.collect(list(u), self.letters(v))

    def inverse_gens(self) -> list[list[int]]:
        if self._inverse is None:
            inv: list = [None] * self.n
            for i in range(self.n - 1, -1, -1):
                # a_i^-1 = a_i^(p-1) * (a_i^p)^-1 and a_i^p only involves later generators
                e = [0] * self.n
                e[i] = self.p - 1
                for k, c in reversed(self.power[i]):
                    for _ in range(c):
                        self.collect(e, self.letters(inv[k]))
                inv[i] = e
            self._inverse = inv
        return self._inverse

    def inverse(self, vec: Sequence[int]) -> list[int]:
        inv = self.inverse_gens()
        e = [0] * self.n
        for k in range(self.n - 1, -1, -1):
            for _ in range(vec[k]):
                self.collect(e, self.letters(inv[k]))
        return e

    def power_of(self, vec: Sequence[int], k: int) -> list[int]:
        e = [0] * self.n
        letters = self.letters(vec)
        for _ in range(k):
            self.collect(e, letters)
        return e

    def commutator(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        e = self.inverse(u)
        self.collect(e, self.letters(self.inverse(v)))
        self.collect(e, self.letters(u))
        self.collect(e, self.letters(v))
        return e
