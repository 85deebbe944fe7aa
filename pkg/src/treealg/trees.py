"""Complete binary trees over a finite alphabet.

A tree is either a leaf, written as its single-character letter, or a pair
``(left, right)`` of trees.  The concrete syntax is

    tree ::= LETTER | '<' tree '*' tree '>'

The three shape characters ``< * >`` never collide with letters because
alphabets may not contain them.  Two projections of the encoded word
describe every tree: its *skeleton* (the shape characters only) and its
*foliage* (the leaf letters, left to right).  A tree is uniquely
determined by foliage and skeleton together, and :func:`rebuild` inverts
the pair of projections.

All values are immutable; every function here is pure.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from random import Random
from typing import Iterator, Optional, Tuple, Union

from .errors import (
    LengthMismatch,
    MalformedSkeleton,
    MalformedTree,
    UniverseTooLarge,
    UnknownLetter,
)

Tree = Union[str, Tuple["Tree", "Tree"]]

SHAPE_OPEN = "<"
SHAPE_SEP = "*"
SHAPE_CLOSE = ">"
SHAPE_CHARS = "<*>"

# Reserved variable symbol for polynomials; never a plain letter.
VARIABLE = "x"

# Triangle/bullet rendering for `--unicode` output.
UNICODE_SHAPES = str.maketrans(SHAPE_CHARS, "◂•▸")

_DROP_SHAPE = str.maketrans("", "", SHAPE_CHARS)
_NON_SHAPE = re.compile(r"[^<*>]+")
_XI_ORDER = str.maketrans(SHAPE_CHARS, "012")

DEFAULT_UNIVERSE_CAP = 200_000

# Universes up to this many trees are memoized and shared.
_CACHE_LIMIT = 50_000


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of leaf letters; order fixes enumeration and reports."""

    symbols: Tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must not be empty")
        seen = set()
        for sym in self.symbols:
            if len(sym) != 1 or not sym.isprintable():
                raise ValueError(f"letters must be single printable characters, got {sym!r}")
            if sym in SHAPE_CHARS or sym == VARIABLE:
                raise ValueError(f"{sym!r} is reserved and cannot be a letter")
            if sym in seen:
                raise ValueError(f"duplicate letter {sym!r}")
            seen.add(sym)
        object.__setattr__(self, "letter_set", frozenset(seen))

    @classmethod
    def from_string(cls, text: str) -> "Alphabet":
        return cls(tuple(text))

    def __contains__(self, sym) -> bool:
        return sym in self.letter_set

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, sym: str) -> int:
        return self.symbols.index(sym)


DEFAULT_ALPHABET = Alphabet.from_string("abc")


def is_leaf(t: Tree) -> bool:
    return isinstance(t, str)


def star(t: Tree, t2: Tree) -> Tree:
    """Pair two trees as the left and right children of a new root."""
    return (t, t2)


def leaf_count(t: Tree) -> int:
    if isinstance(t, str):
        return 1
    n = 0
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, str):
            n += 1
        else:
            stack.extend(node)
    return n


def encode(t: Tree) -> str:
    """Serialize a tree to its canonical ``<left*right>`` word."""
    if isinstance(t, str):
        return t
    parts = []
    stack = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
        else:
            left, right = item
            stack.extend((SHAPE_CLOSE, right, SHAPE_SEP, left, SHAPE_OPEN))
    return "".join(parts)


def skeleton(t: Tree) -> str:
    """Shape word of a tree: its encoding with all letters erased."""
    if isinstance(t, str):
        return ""
    return _NON_SHAPE.sub("", encode(t))


def foliage(t: Tree) -> str:
    """Leaf word of a tree, left to right."""
    if isinstance(t, str):
        return t
    return encode(t).translate(_DROP_SHAPE)


def mirror(t: Tree) -> Tree:
    """Swap left and right children at every node."""
    if isinstance(t, str):
        return t
    return (mirror(t[1]), mirror(t[0]))


def parse_tree(text: str, alphabet: Alphabet = DEFAULT_ALPHABET, *, variable: bool = False) -> Tree:
    """Parse the ``<left*right>`` grammar; inverse of :func:`encode`.

    With ``variable=True`` the reserved symbol ``x`` is accepted as a leaf
    (polynomial contexts); plain-tree contexts reject it.
    """
    allowed = set(alphabet.symbols)
    if variable:
        allowed.add(VARIABLE)
    pos = 0

    def node() -> Tree:
        nonlocal pos
        if pos >= len(text):
            raise MalformedTree(text, pos, "unexpected end of input")
        ch = text[pos]
        if ch == SHAPE_OPEN:
            pos += 1
            left = node()
            if pos >= len(text) or text[pos] != SHAPE_SEP:
                raise MalformedTree(text, pos, f"expected {SHAPE_SEP!r}")
            pos += 1
            right = node()
            if pos >= len(text) or text[pos] != SHAPE_CLOSE:
                raise MalformedTree(text, pos, f"expected {SHAPE_CLOSE!r}")
            pos += 1
            return (left, right)
        if ch in allowed:
            pos += 1
            return ch
        raise MalformedTree(text, pos, f"unexpected {ch!r}")

    tree = node()
    if pos != len(text):
        raise MalformedTree(text, pos, "trailing input")
    return tree


def is_skeleton(word: str) -> bool:
    """True iff ``word`` is a well-formed shape word."""
    pos = 0

    def node() -> bool:
        nonlocal pos
        if pos < len(word) and word[pos] == SHAPE_OPEN:
            pos += 1
            if not node():
                return False
            if pos >= len(word) or word[pos] != SHAPE_SEP:
                return False
            pos += 1
            if not node():
                return False
            if pos >= len(word) or word[pos] != SHAPE_CLOSE:
                return False
            pos += 1
        return True  # a leaf consumes nothing

    return node() and pos == len(word)


_SHAPE_SET = frozenset(SHAPE_CHARS)


def rebuild(u: str, s: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> Tree:
    """Reconstruct the unique tree with foliage ``u`` and skeleton ``s``.

    Walks the skeleton left to right: a leaf slot occurs wherever an
    operand is expected and the next character does not open a subtree,
    so the split of ``u`` between subtrees is forced by ``s``.
    """
    if not set(u) <= alphabet.letter_set:
        bad = next(ch for ch in u if ch not in alphabet.letter_set)
        raise UnknownLetter(bad, "foliage")
    if len(s) != 3 * len(u) - 3:
        raise LengthMismatch(u, s)
    if not set(s) <= _SHAPE_SET:
        bad = next(ch for ch in s if ch not in _SHAPE_SET)
        raise MalformedSkeleton(s, f"unexpected {bad!r}")
    n = len(s)
    pos = 0
    nxt = 0
    # None marks an open node awaiting its left subtree; a tree is a
    # stored left subtree awaiting its right sibling.
    pending = []
    try:
        while True:
            while pos < n and s[pos] == SHAPE_OPEN:
                pending.append(None)
                pos += 1
            node = u[nxt]
            nxt += 1
            while pos < n and s[pos] == SHAPE_CLOSE:
                left = pending.pop()
                if left is None:
                    raise MalformedSkeleton(s, f"separator missing before index {pos}")
                node = (left, node)
                pos += 1
            if pos >= n:
                break
            if s[pos] != SHAPE_SEP:
                raise MalformedSkeleton(s, f"expected {SHAPE_SEP!r} at index {pos}")
            if not pending or pending[-1] is not None:
                raise MalformedSkeleton(s, f"stray separator at index {pos}")
            pending[-1] = node
            pos += 1
    except IndexError:
        raise MalformedSkeleton(s, "unbalanced shape word") from None
    if pending or nxt != len(u):
        raise MalformedSkeleton(s, "unbalanced shape word")
    return node


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def universe_size(max_leaves: int, num_letters: int) -> int:
    """Number of trees with at most ``max_leaves`` leaves over ``num_letters`` letters."""
    return sum(catalan(n - 1) * num_letters**n for n in range(1, max_leaves + 1))


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple:
    """All tree shapes with ``n`` leaves (leaf = None), in shape-word order."""
    if n == 1:
        return (None,)
    out = []
    for i in range(1, n):
        for left in _shapes(i):
            for right in _shapes(n - i):
                out.append((left, right))
    out.sort(key=_shape_key)
    return tuple(out)


def _shape_word(shape) -> str:
    if shape is None:
        return ""
    parts = []
    stack = [shape]
    while stack:
        item = stack.pop()
        if item is None:
            continue
        if isinstance(item, str):
            parts.append(item)
        else:
            left, right = item
            stack.extend((SHAPE_CLOSE, right, SHAPE_SEP, left, SHAPE_OPEN))
    return "".join(parts)


def _shape_key(shape) -> str:
    # '<' < '*' < '>' ordering, realized by translating to digits.
    return _shape_word(shape).translate(_XI_ORDER)


@lru_cache(maxsize=None)
def _shape_builders(n: int) -> tuple:
    """One compiled labeling function per shape; labeling loops dominate."""
    builders = []
    for shape in _shapes(n):
        counter = itertools.count()

        def expr(sh) -> str:
            if sh is None:
                return f"L[{next(counter)}]"
            return f"({expr(sh[0])},{expr(sh[1])})"

        builders.append(eval(f"lambda L: {expr(shape)}"))  # noqa: S307
    return tuple(builders)


def iter_universe(max_leaves: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> Iterator[Tree]:
    """Stream every tree with at most ``max_leaves`` leaves, in canonical order.

    Order: leaf count, then skeleton (with ``<`` before ``*`` before ``>``),
    then foliage in alphabet order.  Uncapped; intended for linear sweeps.
    """
    if max_leaves < 1:
        raise ValueError("max_leaves must be >= 1")
    symbols = alphabet.symbols
    for n in range(1, max_leaves + 1):
        for build in _shape_builders(n):
            for labels in itertools.product(symbols, repeat=n):
                yield build(labels)


@lru_cache(maxsize=32)
def _universe_cached(symbols: Tuple[str, ...], max_leaves: int) -> tuple:
    return tuple(iter_universe(max_leaves, Alphabet(symbols)))


def enumerate_universe(
    max_leaves: int,
    alphabet: Alphabet = DEFAULT_ALPHABET,
    cap: Optional[int] = DEFAULT_UNIVERSE_CAP,
) -> list:
    """All trees with at most ``max_leaves`` leaves as a fresh list.

    Raises :class:`UniverseTooLarge` when the predicted count exceeds
    ``cap`` (pass ``cap=None`` to disable the check).
    """
    count = universe_size(max_leaves, len(alphabet))
    if cap is not None and count > cap:
        raise UniverseTooLarge(count, cap)
    if count <= _CACHE_LIMIT:
        return list(_universe_cached(alphabet.symbols, max_leaves))
    return list(iter_universe(max_leaves, alphabet))


def random_tree(rng: Random, letters: Tuple[str, ...], max_leaves: int) -> Tree:
    """Random tree: leaf count uniform in 1..max_leaves, then shape, then labels."""
    n = rng.randint(1, max_leaves)
    shape = rng.choice(_shapes(n))
    labels = [rng.choice(letters) for _ in range(n)]
    it = iter(labels)

    def fill(sh) -> Tree:
        if sh is None:
            return next(it)
        return (fill(sh[0]), fill(sh[1]))

    return fill(shape)
