"""Structure-preserving maps: graftings, word substitutions, projections.

A grafting replaces every leaf carrying one designated letter by a fixed
tree; it is the unique map that commutes with the pairing operation and
acts as specified on leaves.  Word substitutions do the same for words,
projections erase letters outside a kept set.  The kernel of any of these
("both sides map to the same image") is a congruence, which is how they
are used throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, FrozenSet, Union

from .trees import Alphabet, DEFAULT_ALPHABET, SHAPE_CHARS, Tree, foliage


@dataclass(frozen=True)
class Grafting:
    """Replace every ``source`` leaf by ``replacement``."""

    source: str
    replacement: Tree

    def __post_init__(self):
        if len(self.source) != 1 or self.source in SHAPE_CHARS:
            raise ValueError(f"grafting source must be a letter, got {self.source!r}")


@dataclass(frozen=True)
class WordSubstitution:
    """Replace every occurrence of ``source`` by ``replacement`` (may be empty)."""

    source: str
    replacement: str

    def __post_init__(self):
        if len(self.source) != 1:
            raise ValueError(f"substitution source must be a letter, got {self.source!r}")


@dataclass(frozen=True)
class Projection:
    """Erase every symbol outside ``kept``; keep the rest unchanged."""

    kept: FrozenSet[str]


SHAPE_PROJECTION = Projection(frozenset(SHAPE_CHARS))


def letter_projection(alphabet: Alphabet = DEFAULT_ALPHABET) -> Projection:
    return Projection(frozenset(alphabet.symbols))


def graft(g: Grafting, t: Tree) -> Tree:
    if isinstance(t, str):
        return g.replacement if t == g.source else t
    left, right = t
    new_left = graft(g, left)
    new_right = graft(g, right)
    if new_left is left and new_right is right:
        return t
    return (new_left, new_right)


def substitute(sub: WordSubstitution, word: str) -> str:
    return word.replace(sub.source, sub.replacement)


def project(p: Projection, word: str) -> str:
    kept = p.kept
    return "".join(ch for ch in word if ch in kept)


def kernel_related(h: Union[Grafting, Callable[[Tree], object]], t: Tree, t2: Tree) -> bool:
    """True iff ``h`` maps both trees to the same image.

    ``h`` may be a :class:`Grafting` or any callable on trees (for example
    :func:`~treealg.trees.skeleton` or :func:`~treealg.trees.foliage`).
    """
    if isinstance(h, Grafting):
        return graft(h, t) == graft(h, t2)
    return h(t) == h(t2)


def is_idempotent(g: Grafting) -> bool:
    """Letter criterion: the source letter does not occur in the replacement.

    Equivalent to ``graft(g, graft(g, t)) == graft(g, t)`` for all trees,
    except for the degenerate source-to-itself grafting, which the letter
    test rejects although it is the identity map.
    """
    return g.source not in foliage(g.replacement)


def commute_check(g: Grafting, t: Tree) -> bool:
    """Grafting then taking the foliage equals substituting in the foliage."""
    sub = WordSubstitution(g.source, foliage(g.replacement))
    return foliage(graft(g, t)) == substitute(sub, foliage(t))


def recolor(t: Tree, color: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> Tree:
    """Send every letter of the tree to ``color``.

    Composition of single-letter graftings d -> color over the alphabet;
    order is irrelevant since no source equals the target letter.
    """
    if color not in alphabet:
        raise ValueError(f"{color!r} is not in the alphabet")
    for letter in alphabet:
        if letter != color:
            t = graft(Grafting(letter, color), t)
    return t
