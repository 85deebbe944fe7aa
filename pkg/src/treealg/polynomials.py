"""Polynomials over trees and congruence-preservation checking.

A polynomial is a tree over the alphabet extended with the reserved
variable ``x``; it induces the function that grafts its argument into
every ``x`` leaf.  Polynomial functions preserve every congruence.  The
converse direction is operationalized in two ways:

* :func:`cp_evidence` runs decidable *necessary* conditions for a
  candidate function (kernel congruences of the two projections and of
  sampled graftings, plus the idempotent-grafting identity).  Passing is
  evidence only; any failure disproves preservation with a witness.
* :func:`cp_to_polynomial` reads the candidate's values on the letter
  leaves, synthesizes the unique polynomial agreeing there, and verifies
  the two functions agree on a whole bounded universe.

:func:`synthesize` recovers a polynomial from a generator table that
satisfies the two hypotheses checked by :func:`check_hypotheses`: all
images share one skeleton, and collapsing any letter pair collapses the
corresponding images.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from random import Random
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Tuple

from .errors import (
    AlphabetTooSmall,
    EvaluationFailure,
    HypothesesViolated,
    MalformedTable,
    NotCP,
    UnknownLetter,
)
from .morphisms import Grafting, graft, is_idempotent, recolor
from .trees import (
    Alphabet,
    DEFAULT_ALPHABET,
    Tree,
    VARIABLE,
    _shape_builders,
    encode,
    enumerate_universe,
    foliage,
    iter_universe,
    mirror,
    parse_tree,
    skeleton,
)


def eval_poly(poly: Tree, t: Tree) -> Tree:
    """Value of the polynomial at ``t``: graft ``t`` into every variable leaf."""
    return graft(Grafting(VARIABLE, t), poly)


def compile_poly(poly: Tree) -> Callable[[Tree], Tree]:
    """Closure computing ``eval_poly(poly, .)``; worthwhile in evaluation sweeps."""
    if poly == VARIABLE:
        return lambda t: t
    if isinstance(poly, str) or VARIABLE not in foliage(poly):
        return lambda t: poly
    left = compile_poly(poly[0])
    right = compile_poly(poly[1])
    return lambda t: (left(t), right(t))


def iter_polynomials(max_leaves: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> Iterator[Tree]:
    """Every tree over the alphabet plus the variable, in canonical order."""
    symbols = alphabet.symbols + (VARIABLE,)
    for n in range(1, max_leaves + 1):
        for build in _shape_builders(n):
            for labels in itertools.product(symbols, repeat=n):
                yield build(labels)


def unused_letter_count(t: Tree, alphabet: Alphabet = DEFAULT_ALPHABET) -> int:
    """How many alphabet letters do not occur among the leaves of ``t``."""
    return len(alphabet) - len(set(foliage(t)) & set(alphabet.symbols))


@dataclass(frozen=True)
class HypothesisCheck:
    """Outcome of checking a generator table against the synthesis hypotheses."""

    ok: bool
    common_skeleton: Optional[str] = None
    failure: Optional[str] = None  # "skeleton-mismatch" | "grafting-compatibility" | "basis-dichotomy"
    pair: Optional[Tuple[str, str]] = None

    def describe(self) -> str:
        if self.ok:
            return f"hypotheses hold, common skeleton {self.common_skeleton!r}"
        a, b = self.pair
        return f"{self.failure} on letter pair ({a}, {b})"

    def as_json(self) -> dict:
        if self.ok:
            return {"ok": True, "common_skeleton": self.common_skeleton}
        return {"ok": False, "failure": self.failure, "pair": list(self.pair)}


def _validate_table(table: Mapping[str, Tree], alphabet: Alphabet) -> None:
    missing = [a for a in alphabet if a not in table]
    extra = [a for a in table if a not in alphabet]
    if missing or extra:
        raise MalformedTable(
            f"table must cover the alphabet exactly; missing {missing}, extra {extra}"
        )
    for a in alphabet:
        for ch in foliage(table[a]):
            if ch not in alphabet:
                raise UnknownLetter(ch, f"image of {a!r}")


def check_hypotheses(table: Mapping[str, Tree], alphabet: Alphabet = DEFAULT_ALPHABET) -> HypothesisCheck:
    """Check the two synthesis hypotheses, reporting the failing pair as data.

    (1) all images share one skeleton; (2) for every letter pair a != b,
    grafting a -> b maps the images of a and b to the same tree.
    """
    _validate_table(table, alphabet)
    symbols = alphabet.symbols
    first = symbols[0]
    shape = skeleton(table[first])
    for a in symbols[1:]:
        if skeleton(table[a]) != shape:
            return HypothesisCheck(False, failure="skeleton-mismatch", pair=(first, a))
    for a, b in itertools.combinations(symbols, 2):
        g = Grafting(a, b)
        if graft(g, table[a]) != graft(g, table[b]):
            return HypothesisCheck(False, failure="grafting-compatibility", pair=(a, b))
    return HypothesisCheck(True, common_skeleton=shape)


def synthesize(table: Mapping[str, Tree], alphabet: Alphabet = DEFAULT_ALPHABET) -> Tree:
    """Unique polynomial whose values on the letter leaves match the table.

    Recurses along the common skeleton, re-checking the hypotheses at
    every level rather than trusting that they are inherited.  Letter
    tables resolve by a dichotomy: either every letter maps to itself
    (variable) or every letter maps to one constant.
    """
    check = check_hypotheses(table, alphabet)
    if not check.ok:
        raise HypothesesViolated(check)
    if check.common_skeleton == "":
        anchor = constant = None
        for a in alphabet:
            if table[a] != a:
                anchor, constant = a, table[a]
                break
        if constant is None:
            return VARIABLE
        offender = next((b for b in alphabet if table[b] != constant), None)
        if offender is not None:
            # Reachable only with fewer than three letters (e.g. a swap table).
            raise HypothesesViolated(
                HypothesisCheck(False, failure="basis-dichotomy", pair=(anchor, offender))
            )
        return constant
    left = synthesize({a: table[a][0] for a in alphabet}, alphabet)
    right = synthesize({a: table[a][1] for a in alphabet}, alphabet)
    return (left, right)


@dataclass(frozen=True)
class CandidateFunction:
    """Named total function on trees, evaluable wherever the checks need it."""

    name: str
    fn: Callable[[Tree], Tree]

    def __call__(self, t: Tree) -> Tree:
        return self.fn(t)


def identity_function() -> CandidateFunction:
    return CandidateFunction("identity", lambda t: t)


def mirror_function() -> CandidateFunction:
    return CandidateFunction("mirror", mirror)


def recolor_function(color: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> CandidateFunction:
    if color not in alphabet:
        raise UnknownLetter(color, "recolor target")
    return CandidateFunction(f"recolor:{color}", lambda t: recolor(t, color, alphabet))


def constant_function(value: Tree) -> CandidateFunction:
    return CandidateFunction(f"const:{encode(value)}", lambda t: value)


def poly_function(poly: Tree) -> CandidateFunction:
    return CandidateFunction(f"poly:{encode(poly)}", compile_poly(poly))


def table_function(mapping: Mapping[Tree, Tree], name: str = "table") -> CandidateFunction:
    def fn(t: Tree) -> Tree:
        try:
            return mapping[t]
        except KeyError:
            raise EvaluationFailure(encode(t)) from None

    return CandidateFunction(name, fn)


def function_from_spec(spec: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> CandidateFunction:
    """Build a candidate from its CLI spelling.

    ``identity`` | ``mirror`` | ``recolor:LETTER`` | ``const:TREE`` |
    ``poly:TREE`` | ``table:FILE`` (one ``TREE TREE`` pair per line).
    """
    if spec == "identity":
        return identity_function()
    if spec == "mirror":
        return mirror_function()
    kind, _, arg = spec.partition(":")
    if kind == "recolor" and arg:
        return recolor_function(arg, alphabet)
    if kind == "const" and arg:
        return constant_function(parse_tree(arg, alphabet))
    if kind == "poly" and arg:
        return poly_function(parse_tree(arg, alphabet, variable=True))
    if kind == "table" and arg:
        mapping = {}
        with open(arg, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                src, dst = line.split()
                mapping[parse_tree(src, alphabet)] = parse_tree(dst, alphabet)
        return table_function(mapping, name=spec)
    raise ValueError(f"unknown function spec {spec!r}")


@dataclass(frozen=True)
class EvidenceTest:
    name: str
    passed: bool
    checked: int
    witness: Optional[dict] = None

    def as_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class EvidenceReport:
    function: str
    bound: int
    seed: int
    verdict: str  # "evidence-of-cp" | "not-cp"
    tests: Tuple[EvidenceTest, ...]

    @property
    def passed(self) -> bool:
        return self.verdict == "evidence-of-cp"

    def witness_pair(self) -> Optional[List[str]]:
        for test in self.tests:
            if not test.passed:
                return test.witness["pair"]
        return None

    def as_json(self) -> dict:
        return {
            "function": self.function,
            "bound": self.bound,
            "seed": self.seed,
            "verdict": self.verdict,
            "tests": [t.as_json() for t in self.tests],
            "witness": self.witness_pair(),
        }


def _kernel_test(
    groups: Mapping[object, List[int]],
    image_of: Callable[[int], Tree],
    universe: List[Tree],
) -> Tuple[bool, int, Optional[dict]]:
    """Within every kernel class, all function images must map together."""
    checked = 0
    for members in groups.values():
        if len(members) < 2:
            continue
        first = members[0]
        ref = image_of(first)
        for other in members[1:]:
            checked += 1
            if image_of(other) != ref:
                witness = {"pair": [encode(universe[first]), encode(universe[other])]}
                return False, checked, witness
    return True, checked, None


def cp_evidence(
    func: CandidateFunction,
    bound: int,
    alphabet: Alphabet = DEFAULT_ALPHABET,
    seed: int = 0,
) -> EvidenceReport:
    """Run the decidable necessary conditions for congruence preservation.

    Four families over the universe of trees with at most ``bound`` leaves:
    kernels of the skeleton and foliage projections, kernels of sampled
    graftings (all replacements with at most two leaves plus 100 seeded
    random ones with at most four), and the idempotent-grafting identity
    ``graft(a->t)(f(a)) == graft(a->t)(f(t))``.  All passes constitute
    evidence only; any failure is a disproof with a concrete witness.
    """
    universe = enumerate_universe(bound, alphabet, cap=None)
    images = [func(t) for t in universe]
    tests: List[EvidenceTest] = []

    # (a) skeleton kernel, (b) foliage kernel
    for name, view in (("skeleton-kernel", skeleton), ("foliage-kernel", foliage)):
        groups: Dict[str, List[int]] = {}
        for i, t in enumerate(universe):
            groups.setdefault(view(t), []).append(i)
        views = {}

        def image_view(i, view=view, views=views):
            if i not in views:
                views[i] = view(images[i])
            return views[i]

        ok, checked, witness = _kernel_test(groups, image_view, universe)
        tests.append(EvidenceTest(name, ok, checked, witness))

    # (c) grafting kernels over a fixed-plus-seeded sample of graftings
    rng = Random(seed)
    small = enumerate_universe(2, alphabet, cap=None)
    larger = enumerate_universe(4, alphabet, cap=None)
    sample = [(a, t) for a in alphabet for t in small]
    sample += [(rng.choice(alphabet.symbols), rng.choice(larger)) for _ in range(100)]

    has_letter = {a: [a in foliage(t) for t in universe] for a in alphabet}
    ok_all, checked_all, witness_all = True, 0, None
    for a, replacement in sample:
        g = Grafting(a, replacement)
        contains = has_letter[a]
        groups = {}
        for i, t in enumerate(universe):
            key = graft(g, t) if contains[i] else t
            groups.setdefault(key, []).append(i)
        image_cache: Dict[int, Tree] = {}

        def grafted_image(i, g=g, image_cache=image_cache):
            if i not in image_cache:
                image_cache[i] = graft(g, images[i])
            return image_cache[i]

        ok, checked, witness = _kernel_test(groups, grafted_image, universe)
        checked_all += checked
        if not ok and ok_all:
            ok_all = False
            witness = dict(witness)
            witness["grafting"] = f"{a}->{encode(replacement)}"
            witness_all = witness
    tests.append(EvidenceTest("grafting-kernels", ok_all, checked_all, witness_all))

    # (d) idempotent-grafting identity
    ok_d, checked_d, witness_d = True, 0, None
    leaf_image = {a: images[universe.index(a)] for a in alphabet}
    for a in alphabet:
        contains = has_letter[a]
        for i, t in enumerate(universe):
            if contains[i]:
                continue  # grafting a -> t would not be idempotent
            g = Grafting(a, t)
            checked_d += 1
            if graft(g, leaf_image[a]) != graft(g, images[i]):
                ok_d = False
                witness_d = {"pair": [a, encode(t)], "grafting": f"{a}->{encode(t)}"}
                break
        if not ok_d:
            break
    tests.append(EvidenceTest("idempotent-grafting", ok_d, checked_d, witness_d))

    verdict = "evidence-of-cp" if all(t.passed for t in tests) else "not-cp"
    return EvidenceReport(func.name, bound, seed, verdict, tuple(tests))


def cp_to_polynomial(
    func: CandidateFunction,
    verify_bound: int = 6,
    alphabet: Alphabet = DEFAULT_ALPHABET,
) -> Tree:
    """Polynomial representing ``func``, or :class:`NotCP` with a witness.

    Reads the function's values on the letter leaves, synthesizes the
    unique polynomial agreeing there, then verifies agreement on every
    tree with at most ``verify_bound`` leaves.  Any failure along the way
    shows the function preserves no congruence structure of the required
    kind, i.e. it is not congruence preserving.
    """
    if len(alphabet) < 3:
        raise AlphabetTooSmall(3, len(alphabet))
    table = {a: func(a) for a in alphabet}
    check = check_hypotheses(table, alphabet)
    if not check.ok:
        a, b = check.pair
        raise NotCP(f"generator-hypotheses:{check.failure}", (table[a], table[b]))
    try:
        poly = synthesize(table, alphabet)
    except HypothesesViolated as exc:
        raise NotCP("generator-hypotheses:recursive", tuple(table.values())[:2]) from exc
    evaluate = compile_poly(poly)
    for t in iter_universe(verify_bound, alphabet):
        expected = evaluate(t)
        actual = func(t)
        if expected != actual:
            raise NotCP("verification", (expected, actual), at_input=t)
    return poly
