"""Free-group words over braid-group generator symbols.

Words are immutable, always freely reduced, and compare letter by letter.
The text grammar accepted by :func:`parse_word` is::

    word := term (WS term)*
    term := atom ("^" SIGNED_INT)?
    atom := gen | "(" word ")" | "[" word "," word "]"
    gen  := "B[" INT "," INT "]" | "r[" INT "," INT "]" | "x[" INT "," INT "]"
          | "p[" INT "]" | NAME

``[u, v]`` expands to ``u^-1 v^-1 u v``.  The empty string is the identity.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Gen",
    "B",
    "rho",
    "x",
    "p",
    "abstract",
    "Word",
    "EPSILON",
    "reduce",
    "commutator",
    "substitute",
    "parse_word",
    "MissingImage",
    "WordSyntaxError",
]

_KIND_RANK = {"B": 0, "rho": 1, "x": 2, "p": 3, "abstract": 4}


class MissingImage(KeyError):
    """Raised by :func:`substitute` when a symbol has no image."""


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class Gen:
    """A generator symbol: a kind tag plus an integer index tuple.

    ``abstract`` generators additionally carry a name; their index tuple holds
    a single ordinal used for ordering.  Instances are interned, so equality
    and hashing are by identity.
    """

    __slots__ = ("kind", "idx", "name", "_key", "__weakref__")
    _cache: dict = {}

    def __new__(cls, kind: str, idx: tuple, name: str = ""):
        key = (kind, tuple(idx), name)
        self = cls._cache.get(key)
        if self is not None:
            return self
        _validate(kind, key[1], name)
        self = object.__new__(cls)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "idx", key[1])
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_key", (_KIND_RANK[kind], key[1], name))
        cls._cache[key] = self
        return self

    def __setattr__(self, attr, value):
        raise AttributeError("Gen is immutable")

    def __reduce__(self):
        return (Gen, (self.kind, self.idx, self.name))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    @property
    def strand(self) -> int:
        """Strand level: j for B[i,j], k for r[k,l] and x[k,t]; 0 otherwise."""
        if self.kind == "B":
            return self.idx[1]
        if self.kind in ("rho", "x"):
            return self.idx[0]
        return 0

    def sort_key(self):
        return self._key

    def __lt__(self, other: "Gen") -> bool:
        return self._key < other._key

    def __str__(self) -> str:
        if self.kind == "B":
            return f"B[{self.idx[0]},{self.idx[1]}]"
        if self.kind == "rho":
            return f"r[{self.idx[0]},{self.idx[1]}]"
        if self.kind == "x":
            return f"x[{self.idx[0]},{self.idx[1]}]"
        if self.kind == "p":
            return f"p[{self.idx[0]}]"
        return self.name

    __repr__ = __str__


def _validate(kind: str, idx: tuple, name: str):
    if kind not in _KIND_RANK:
        raise ValueError(f"unknown generator kind {kind!r}")
    if kind == "B":
        if len(idx) != 2 or not 1 <= idx[0] < idx[1]:
            raise ValueError(f"B needs indices i<j, got {idx}")
    elif kind in ("rho", "x"):
        if len(idx) != 2 or min(idx) < 1:
            raise ValueError(f"{kind} needs two positive indices, got {idx}")
    elif kind == "p":
        if len(idx) != 1 or idx[0] < 1:
            raise ValueError(f"p needs one positive index, got {idx}")
    elif not name:
        raise ValueError("abstract generators need a name")


def B(i: int, j: int) -> Gen:
    return Gen("B", (i, j))


def rho(k: int, l: int) -> Gen:
    return Gen("rho", (k, l))


def x(u: int, t: int) -> Gen:
    return Gen("x", (u, t))


def p(i: int) -> Gen:
    return Gen("p", (i,))


def abstract(name: str) -> Gen:
    """Named generator; a trailing number orders ``f2`` before ``f10``."""
    m = re.search(r"(\d+)$", name)
    return Gen("abstract", (int(m.group(1)) if m else 0,), name)


Letter = tuple  # (Gen, sign)


def _free_reduce(letters: Iterable[Letter]) -> tuple:
    out: list = []
    push, pop = out.append, out.pop
    for letter in letters:
        gen, sign = letter
        if out and out[-1][0] is gen and out[-1][1] == -sign:
            pop()
        else:
            if sign != 1 and sign != -1:
                raise ValueError(f"letter sign must be +1 or -1, got {sign}")
            push(letter)
    return tuple(out)


class Word:
    """A freely reduced word; ``Word()`` is the identity."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters = _free_reduce(letters)
        self._hash = None

    @classmethod
    def gen(cls, g: Gen, exponent: int = 1) -> "Word":
        sign = 1 if exponent > 0 else -1
        return cls([(g, sign)] * abs(exponent))

    @classmethod
    def product(cls, parts: Iterable["Word"]) -> "Word":
        letters: list = []
        for part in parts:
            letters.extend(part.letters)
        return cls(letters)

    def inverse(self) -> "Word":
        return Word((g, -s) for g, s in reversed(self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        if isinstance(other, Word):
            return self.letters == other.letters
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def symbols(self) -> set[Gen]:
        return {g for g, _ in self.letters}

    def exponent_sum(self, g: Gen) -> int:
        return sum(s for h, s in self.letters if h == g)

    def __str__(self) -> str:
        # compress runs for readability; the stored form is always expanded
        parts = []
        i = 0
        letters = self.letters
        while i < len(letters):
            g, s = letters[i]
            j = i
            while j < len(letters) and letters[j] == (g, s):
                j += 1
            e = (j - i) * s
            parts.append(str(g) if e == 1 else f"{g}^{e}")
            i = j
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


EPSILON = Word()


def reduce(raw: Iterable[Letter]) -> Word:
    return Word(raw)


def commutator(h: Word, k: Word) -> Word:
    """``[h, k] = h^-1 k^-1 h k``."""
    return Word(h.inverse().letters + k.inverse().letters + h.letters + k.letters)


def substitute(w: Word, images: Mapping[Gen, Word]) -> Word:
    """Apply the homomorphism defined by ``images`` to ``w``."""
    out: list = []
    inverses: dict[Gen, Word] = {}
    for g, s in w.letters:
        try:
            img = images[g]
        except KeyError:
            raise MissingImage(g) from None
        if s > 0:
            out.extend(img.letters)
        else:
            inv = inverses.get(g)
            if inv is None:
                inv = inverses[g] = img.inverse()
            out.extend(inv.letters)
    return Word(out)


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<gen>[Brx]\[|p\[)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[()\[\],^]))")
_INT = re.compile(r"\s*([+-]?\d+)")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str, pos: int | None = None):
        raise WordSyntaxError(msg, self.pos if pos is None else pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self) -> int:
        m = _INT.match(self.text, self.pos)
        if not m:
            self.skip_ws()
            self.error("expected integer")
        self.pos = m.end()
        return int(m.group(1))

    def word(self, stop: str) -> list:
        letters: list = []
        while True:
            ch = self.peek()
            if ch == "" or ch in stop:
                return letters
            letters.extend(self.term())

    def term(self) -> list:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            e = self.integer()
            if e < 0:
                base = [(g, -s) for g, s in reversed(base)]
            base = base * abs(e)
        return base

    def atom(self) -> list:
        self.skip_ws()
        start = self.pos
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.word(")")
            self.expect(")")
            return inner
        if ch == "[":
            self.pos += 1
            u = Word(self.word(",]"))
            self.expect(",")
            v = Word(self.word("]"))
            self.expect("]")
            return list(commutator(u, v).letters)
        m = _TOKEN.match(self.text, self.pos)
        if not m or m.group("sym"):
            self.error("expected generator, '(' or '['", start)
        if m.group("gen"):
            kind = m.group("gen")[0]
            self.pos = m.end()
            first = self.integer()
            if kind == "p":
                self.expect("]")
                return [(p(first), 1)]
            self.expect(",")
            second = self.integer()
            self.expect("]")
            try:
                g = {"B": B, "r": rho, "x": x}[kind](first, second)
            except ValueError as exc:
                raise WordSyntaxError(str(exc), start) from None
            return [(g, 1)]
        self.pos = m.end()
        return [(abstract(m.group("name")), 1)]


def parse_word(text: str) -> Word:
    """Parse the word grammar described in the module docstring."""
    parser = _Parser(text)
    letters = parser.word("")
    if parser.peek():
        parser.error(f"unexpected {parser.peek()!r}")
    return Word(letters)
