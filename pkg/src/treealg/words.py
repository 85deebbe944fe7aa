"""Word analogue of tree polynomials: shape is forgotten, only length is kept.

A word polynomial is a word over the alphabet plus the variable ``x``;
it induces the function substituting its argument for every ``x``.  A
table of nonempty, equal-length images that passes a pairwise
substitution test decomposes position by position: each position is
either the identity on letters (emit ``x``) or a single constant letter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

from .errors import EmptyWordImage, HypothesesViolated, MalformedTable, UnknownLetter
from .morphisms import WordSubstitution, substitute
from .trees import Alphabet, DEFAULT_ALPHABET, VARIABLE


def eval_word_poly(poly: str, word: str) -> str:
    """Substitute ``word`` for every occurrence of the variable in ``poly``."""
    return poly.replace(VARIABLE, word)


@dataclass(frozen=True)
class WordHypothesisCheck:
    ok: bool
    image_length: Optional[int] = None
    failure: Optional[str] = None  # "length-mismatch" | "substitution-compatibility" | "basis-dichotomy"
    pair: Optional[Tuple[str, str]] = None
    position: Optional[int] = None

    def describe(self) -> str:
        if self.ok:
            return f"hypotheses hold, image length {self.image_length}"
        msg = f"{self.failure} on letter pair {self.pair}"
        if self.position is not None:
            msg += f" at position {self.position}"
        return msg

    def as_json(self) -> dict:
        if self.ok:
            return {"ok": True, "image_length": self.image_length}
        return {
            "ok": False,
            "failure": self.failure,
            "pair": list(self.pair),
            "position": self.position,
        }


def check_word_hypotheses(
    table: Mapping[str, str], alphabet: Alphabet = DEFAULT_ALPHABET
) -> WordHypothesisCheck:
    """Images must be nonempty over the alphabet, equal-length, and pairwise
    compatible under the letter-collapsing substitutions."""
    missing = [a for a in alphabet if a not in table]
    extra = [a for a in table if a not in alphabet]
    if missing or extra:
        raise MalformedTable(
            f"table must cover the alphabet exactly; missing {missing}, extra {extra}"
        )
    for a in alphabet:
        image = table[a]
        if image == "":
            raise EmptyWordImage(a)
        for ch in image:
            if ch not in alphabet:
                raise UnknownLetter(ch, f"image of {a!r}")
    first = alphabet.symbols[0]
    length = len(table[first])
    for a in alphabet.symbols[1:]:
        if len(table[a]) != length:
            return WordHypothesisCheck(False, failure="length-mismatch", pair=(first, a))
    for a, b in itertools.combinations(alphabet.symbols, 2):
        sub = WordSubstitution(a, b)
        left = substitute(sub, table[a])
        right = substitute(sub, table[b])
        if left != right:
            position = next(i for i, (x, y) in enumerate(zip(left, right)) if x != y)
            return WordHypothesisCheck(
                False, failure="substitution-compatibility", pair=(a, b), position=position
            )
    return WordHypothesisCheck(True, image_length=length)


def synthesize_word(table: Mapping[str, str], alphabet: Alphabet = DEFAULT_ALPHABET) -> str:
    """Word polynomial whose values on single letters match the table.

    Each position of the equal-length images resolves independently: all
    letters map to themselves (emit the variable) or all map to one
    constant.  A position violating the dichotomy is reported with the
    offending letter pair; with at least three letters it cannot pass the
    pairwise substitution check.
    """
    check = check_word_hypotheses(table, alphabet)
    if not check.ok:
        raise HypothesesViolated(check)
    out = []
    for i in range(check.image_length):
        column = {a: table[a][i] for a in alphabet}
        constant = None
        for a in alphabet:
            if column[a] != a:
                constant = column[a]
                break
        if constant is None:
            out.append(VARIABLE)
            continue
        offender = next((b for b in alphabet if column[b] != constant), None)
        if offender is not None:
            raise HypothesesViolated(
                WordHypothesisCheck(
                    False,
                    failure="basis-dichotomy",
                    pair=(offender, constant),
                    position=i,
                )
            )
        out.append(constant)
    return "".join(out)
