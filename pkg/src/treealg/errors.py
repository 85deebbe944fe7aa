"""Exception types shared across the package.

Every error carries enough structured data to reproduce the failure; the
CLI serializes it through :meth:`TreeAlgebraError.payload`.
"""

from __future__ import annotations


class TreeAlgebraError(Exception):
    """Base class for all domain errors raised by this package."""

    def payload(self) -> dict:
        """JSON-ready description of the error, witness data included."""
        return {"error": type(self).__name__, "detail": str(self)}


class MalformedTree(TreeAlgebraError):
    def __init__(self, text: str, position: int, reason: str):
        super().__init__(f"cannot parse {text!r} at index {position}: {reason}")
        self.text = text
        self.position = position
        self.reason = reason

    def payload(self) -> dict:
        return {
            "error": "MalformedTree",
            "detail": str(self),
            "witness": {"text": self.text, "position": self.position},
        }


class MalformedSkeleton(TreeAlgebraError):
    def __init__(self, word: str, reason: str):
        super().__init__(f"{word!r} is not a skeleton: {reason}")
        self.word = word
        self.reason = reason

    def payload(self) -> dict:
        return {
            "error": "MalformedSkeleton",
            "detail": str(self),
            "witness": {"skeleton": self.word},
        }


class LengthMismatch(TreeAlgebraError):
    """Foliage and skeleton lengths are incompatible (need |s| = 3|u| - 3)."""

    def __init__(self, foliage: str, skeleton: str):
        super().__init__(
            f"skeleton length {len(skeleton)} != 3*{len(foliage)} - 3 "
            f"for foliage {foliage!r}"
        )
        self.foliage = foliage
        self.skeleton = skeleton

    def payload(self) -> dict:
        return {
            "error": "LengthMismatch",
            "detail": str(self),
            "witness": {"foliage": self.foliage, "skeleton": self.skeleton},
        }


class UnknownLetter(TreeAlgebraError):
    def __init__(self, symbol: str, context: str = ""):
        msg = f"letter {symbol!r} is not in the configured alphabet"
        if context:
            msg += f" ({context})"
        super().__init__(msg)
        self.symbol = symbol

    def payload(self) -> dict:
        return {
            "error": "UnknownLetter",
            "detail": str(self),
            "witness": {"symbol": self.symbol},
        }


class UniverseTooLarge(TreeAlgebraError):
    def __init__(self, required: int, cap: int):
        super().__init__(f"universe would hold {required} trees, cap is {cap}")
        self.required = required
        self.cap = cap

    def payload(self) -> dict:
        return {
            "error": "UniverseTooLarge",
            "detail": str(self),
            "witness": {"required": self.required, "cap": self.cap},
        }


class PairOutOfUniverse(TreeAlgebraError):
    def __init__(self, encoded_tree: str, max_leaves: int):
        super().__init__(
            f"tree {encoded_tree} does not fit in the universe "
            f"with at most {max_leaves} leaves"
        )
        self.encoded_tree = encoded_tree
        self.max_leaves = max_leaves

    def payload(self) -> dict:
        return {
            "error": "PairOutOfUniverse",
            "detail": str(self),
            "witness": {"tree": self.encoded_tree, "bound": self.max_leaves},
        }


class MalformedTable(TreeAlgebraError):
    """A generator table does not cover the alphabet exactly once."""


class EmptyWordImage(TreeAlgebraError):
    """A word table maps some letter to the empty word; images must be nonempty."""

    def __init__(self, letter: str):
        super().__init__(f"image of {letter!r} is empty")
        self.letter = letter


class HypothesesViolated(TreeAlgebraError):
    """A generator table fails the synthesis hypotheses.

    ``check`` holds the failed check result (tree or word variant), with the
    offending pair and, for word tables, the failing position.
    """

    def __init__(self, check):
        self.check = check
        super().__init__(check.describe())

    def payload(self) -> dict:
        return {
            "error": "HypothesesViolated",
            "detail": str(self),
            "witness": self.check.as_json(),
        }


class NotCP(TreeAlgebraError):
    """A candidate function was shown not to be congruence preserving."""

    def __init__(self, stage: str, witness: tuple, at_input=None):
        self.stage = stage
        self.witness = witness  # pair of trees (or letters) that disagree
        self.at_input = at_input
        super().__init__(f"not congruence preserving ({stage})")

    def payload(self) -> dict:
        from .trees import encode

        data = {
            "error": "NotCP",
            "detail": str(self),
            "verdict": "not-cp",
            "stage": self.stage,
            "witness": [encode(t) for t in self.witness],
        }
        if self.at_input is not None:
            data["input"] = encode(self.at_input)
        return data


class EvaluationFailure(TreeAlgebraError):
    """A candidate function is partial on a tree it must be evaluated on."""

    def __init__(self, encoded_tree: str):
        super().__init__(f"function has no value for {encoded_tree}")
        self.encoded_tree = encoded_tree

    def payload(self) -> dict:
        return {
            "error": "EvaluationFailure",
            "detail": str(self),
            "witness": {"tree": self.encoded_tree},
        }


class AlphabetTooSmall(TreeAlgebraError):
    def __init__(self, needed: int, got: int):
        super().__init__(f"operation needs at least {needed} letters, alphabet has {got}")
        self.needed = needed
        self.got = got
