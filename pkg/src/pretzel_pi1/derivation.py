"""The scripted simplification of the pretzel knot group presentation.

This module reproduces, as a machine-checked trace, the fixed sequence
of moves that takes the Wirtinger presentation down to the two
generator, one relator form

    < c, l | clc l^-1 c^-1 l^-s c^-1 l^-1 clc l^(s-1) >

while rewriting the longitude through every elimination, and then
simplifies the resulting longitude word to

    c^-(2s-2) l c l^s c l^s c l c^-(2s+9)

using justified consequences of the single relator.  Closed forms for
the intermediate relators and longitude fragments are verified against
an iterative substitution oracle (verify_R_induction, verify_L_induction).

Products written prod(a, b, x_n) here iterate with a DECREASING index,
x_a x_{a-1} ... x_b; a == b-1 gives the empty product and anything
steeper is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .knot import check_s, initial_longitude, strand_name, tunnel_moves, wirtinger_presentation
from .presentations import (
    AddGenerator,
    DerivationTrace,
    Insertion,
    InvertRelator,
    Presentation,
    RelabelRelator,
    RemoveGenerator,
    RemoveRelator,
    RewriteLongitude,
    RewriteRelator,
    RotateRelator,
    SubstituteEverywhere,
    apply_move,
    solve_for,
)
from .words import CyclicWord, Word, rotation_witness


class DerivationError(RuntimeError):
    pass


def _gen(name: str, sign: int = 1) -> Word:
    return Word(((name, sign),))


def _power(name: str, exp: int) -> Word:
    return Word.from_syllables([(name, exp)])


def descending_product(a: int, b: int, factor: Callable[[int], Word]) -> Word:
    """prod over n = a, a-1, ..., b; empty when a == b-1; steeper is an error."""
    if a < b - 1:
        raise DerivationError(f"ascending product bounds {a}..{b} rejected")
    out = Word()
    for n in range(a, b - 1, -1):
        out = out * factor(n)
    return out


# -- closed forms -----------------------------------------------------------

def closed_form_R(i: int, s: int) -> Word:
    """The distinguished relator after i corkscrew eliminations."""
    check_s(s)
    if not 1 <= i <= 2 * s:
        raise DerivationError(f"relator index {i} out of range 1..{2 * s}")
    j = (i + 1) // 2
    a_inv = _gen("a", -1)
    if i % 2:  # i == 2j-1
        x = strand_name(2 * j - 1, s)
        y = strand_name(2 * j, s)
        head = (_gen(x, -1) * _gen(y, -1)) ** (j - 1)
        return head * _gen(x, -1) * (_gen(y) * _gen(x)) ** j * a_inv
    x = strand_name(2 * j, s)
    y = strand_name(2 * j + 1, s)
    head = (_gen(x, -1) * _gen(y, -1)) ** j
    return head * _gen(x) * (_gen(y) * _gen(x)) ** j * a_inv


@dataclass(frozen=True)
class LongitudeFragments:
    """The two variable segments of the longitude after i eliminations."""
    left: Word
    right: Word
    index: int


def _fragments(i: int, s: int) -> LongitudeFragments:
    j = (i + 1) // 2
    odd_run = descending_product(s, j + 1, lambda n: _gen(strand_name(2 * n - 1, s)))
    if i % 2:  # i == 2j-1
        x = strand_name(2 * j - 1, s)
        y = strand_name(2 * j, s)
        left = odd_run * _power(y, -(j - 1)) * _gen(x) * (_gen(y) * _gen(x)) ** (j - 1)
        right = (descending_product(s - 1, j, lambda n: _gen(strand_name(2 * n, s)))
                 * _power(x, -(j - 1)) * (_gen(y) * _gen(x)) ** (j - 1))
    else:  # i == 2j
        x = strand_name(2 * j, s)
        y = strand_name(2 * j + 1, s)
        left = odd_run * _power(x, -j) * (_gen(y) * _gen(x)) ** j
        right = (descending_product(s - 1, j + 1, lambda n: _gen(strand_name(2 * n, s)))
                 * _power(y, -(j - 1)) * _gen(x) * (_gen(y) * _gen(x)) ** (j - 1))
    return LongitudeFragments(left, right, i)


def closed_form_L_fragments(i: int, s: int) -> LongitudeFragments:
    check_s(s)
    if not 1 <= i <= 2 * s - 2:
        raise DerivationError(f"fragment index {i} out of range 1..{2 * s - 2}")
    return _fragments(i, s)


def _assemble_longitude(fragments: LongitudeFragments, s: int) -> Word:
    return (Word((("a", 1), ("f", 1), ("c", 1))) * fragments.left
            * Word((("c", 1), ("g", 1))) * fragments.right
            * Word((("a", 1), ("e", 1))) * _power("c", -(2 * s + 6)))


def _terminal_longitude(s: int) -> Word:
    """The longitude once the twist region is fully disentangled."""
    bg = _gen("b") * _gen("g")
    return (Word((("a", 1), ("f", 1), ("c", 1))) * _power("g", -s) * bg ** s
            * _gen("c") * _power("b", -(s - 1)) * _gen("g") * bg ** (s - 1)
            * Word((("a", 1), ("e", 1))) * _power("c", -(2 * s + 6)))


# -- induction oracles -------------------------------------------------------

@dataclass
class InductionReport:
    label: str
    steps: list[tuple[int, bool]]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.steps)

    def first_failure(self) -> Optional[int]:
        for idx, ok in self.steps:
            if not ok:
                return idx
        return None

    def __str__(self) -> str:
        verdict = "PASS" if self.passed else f"FAIL at {self.first_failure()}"
        return f"{self.label}: {len(self.steps)} steps, {verdict}"


def _twist_replacement(i: int, s: int) -> Word:
    """f_i in terms of its successors, read off the crossing relation r_{i+7}."""
    x = strand_name(i + 1, s)
    y = strand_name(i + 2, s)
    return _gen(x, -1) * _gen(y) * _gen(x)


def verify_R_induction(s: int, closed_form: Callable[[int, int], Word] = closed_form_R,
                       ) -> InductionReport:
    """Iterative substitution oracle against the closed relator forms."""
    check_s(s)
    report = InductionReport(f"R induction s={s}", [])
    # base: eliminate f0 from the tunnel relator pair
    p2 = wirtinger_presentation(s)
    for move in tunnel_moves(s):
        p2 = move.apply(p2)
    base = p2.relator("r_inf").substitute("f0", solve_for(p2.relator("r7"), "f0"))
    report.steps.append((1, base == closed_form(1, s)))
    current = base
    for i in range(1, 2 * s):
        current = current.substitute(strand_name(i, s), _twist_replacement(i, s))
        report.steps.append((i + 1, current == closed_form(i + 1, s)))
    return report


def verify_L_induction(s: int, fragments: Callable[[int, int], LongitudeFragments] = _fragments,
                       ) -> InductionReport:
    """Iterative substitution oracle against the longitude fragment forms."""
    check_s(s)
    report = InductionReport(f"L induction s={s}", [])
    current = initial_longitude(s).word
    report.steps.append((1, current == _assemble_longitude(fragments(1, s), s)))
    for i in range(1, 2 * s):
        current = current.substitute(strand_name(i, s), _twist_replacement(i, s))
        if i + 1 <= 2 * s - 1:
            expected = _assemble_longitude(fragments(i + 1, s), s)
        else:
            expected = _terminal_longitude(s)
        report.steps.append((i + 1, current == expected))
    return report


# -- closed-form endpoints ---------------------------------------------------

def final_relator(s: int) -> Word:
    check_s(s)
    return Word.from_syllables([
        ("c", 1), ("l", 1), ("c", 1), ("l", -1), ("c", -1), ("l", -s),
        ("c", -1), ("l", -1), ("c", 1), ("l", 1), ("c", 1), ("l", s - 1),
    ])


def knot_group_presentation(s: int) -> Presentation:
    return Presentation(("c", "l"), (("r_inf", final_relator(s)),),
                        provenance=f"knot_group s={s}")


def longitude_word(s: int) -> Word:
    """The simplified longitude: null-homologous companion of the meridian c."""
    check_s(s)
    return Word.from_syllables([
        ("c", -(2 * s - 2)), ("l", 1), ("c", 1), ("l", s), ("c", 1),
        ("l", s), ("c", 1), ("l", 1), ("c", -(2 * s + 9)),
    ])


def expected_l12(s: int) -> Word:
    bracket = Word.from_syllables(
        [("l", -1), ("c", 1), ("l", 1), ("c", 1), ("l", -1), ("c", -1)])
    return (_power("c", -(s - 1)) * _power("l", 1) * _gen("c") * _power("l", s)
            * bracket ** (s - 1)
            * Word.from_syllables([("l", -1), ("c", 1), ("l", 1), ("c", 1),
                                   ("l", s - 1), ("c", 1), ("l", 1)])
            * _power("c", -(2 * s + 8)))


# -- the pipeline ------------------------------------------------------------

def _replacement_insertion(word: Word, pos: int, old: Word, new: Word,
                           label: str, relator: Word) -> Insertion:
    """Insertion that swaps old for new at pos, justified by the relator."""
    if word.letters[pos:pos + len(old)] != old.letters:
        raise DerivationError(f"no occurrence of {old} at position {pos} in {word}")
    diff = new * ~old
    witness = rotation_witness(diff, relator.cyclic_reduce()[0])
    if witness is None:
        raise DerivationError(f"replacement {old} -> {new} is not justified by {relator}")
    core_word = relator.cyclic_reduce()[0].word
    core = ~core_word if witness["inverted"] else core_word
    prefix = Word(core.letters[:witness["rotation"]])
    conj = witness["conjugator"] * ~prefix * ~relator.cyclic_reduce()[1]
    return Insertion(label, witness["inverted"], conj, pos)


def _rewrite_relator(p: Presentation, label: str, old: Word, new: Word,
                     via: str, macro: str) -> RewriteRelator:
    word = p.relator(label)
    pos = word.find(old)
    if pos < 0:
        raise DerivationError(f"{old} does not occur in relator {label} = {word}")
    ins = _replacement_insertion(word, pos, old, new, via, p.relator(via))
    return RewriteRelator(label, (ins,), macro=macro)


@dataclass(frozen=True)
class PipelineResult:
    trace: DerivationTrace
    presentation: Presentation
    longitude: Word  # the tracked longitude at the end of the trace


def run_pipeline(s: int) -> PipelineResult:
    """Script the whole simplification; every move is applied as it is recorded."""
    check_s(s)
    start = wirtinger_presentation(s)
    lon_start = initial_longitude(s).word
    p, lon = start, lon_start
    moves: list = []

    def do(move):
        nonlocal p, lon
        p, lon = apply_move(p, move, lon)
        moves.append(move)

    def rewrite_longitude(old: Word, new: Word, via: str, macro: str):
        pos = lon.find(old)
        if pos < 0:
            raise DerivationError(f"{old} does not occur in the longitude")
        target = Word(lon.letters[:pos] + new.letters + lon.letters[pos + len(old):])
        do(RewriteLongitude(target, via, macro=macro))

    for move in tunnel_moves(s):
        do(move)

    # unwind the twist region, one crossing at a time
    for i in range(0, 2 * s):
        gen = "f0" if i == 0 else strand_name(i, s)
        do(RemoveGenerator(gen, f"r{i + 7}", macro="corkscrew"))

    # open the tunnel vertex: h stands for af
    macro = "opening"
    do(AddGenerator("h", _gen("a") * _gen("f"), "r7", macro=macro))
    do(_rewrite_relator(p, "r6", Word((("f", -1), ("a", -1))), _gen("h", -1),
                        "r7", macro))
    rewrite_longitude(_gen("a") * _gen("f"), _gen("h"), "r7", macro)
    for _ in range(2 * s - 1):
        rewrite_longitude(_gen("b") * _gen("g"), _gen("h"), "r6", macro)
    do(SubstituteEverywhere("b", _gen("h") * _gen("g", -1), "r6",
                            only_in=("r_inf",), macro=macro))

    # slide the clasp over: d goes away and the crossing relation turns into ch=he
    macro = "upper_sliding"
    do(RemoveGenerator("d", "r1", macro=macro))
    do(_rewrite_relator(p, "r3", _gen("a") * _gen("f"), _gen("h"), "r7", macro))
    do(RotateRelator("r3", 1, macro=macro))
    do(_rewrite_relator(p, "r3", Word((("f", -1), ("a", -1))), _gen("h", -1),
                        "r7", macro))

    # slide under: a goes away, k and l appear
    macro = "under_sliding"
    do(RemoveGenerator("a", "r7", macro=macro))
    for gen, source, label in (("k", "f", "r8"), ("l", "h", "r9")):
        do(AddGenerator(gen, _gen("c", -1) * _gen(source) * _gen("c"), label,
                        macro=macro))
        do(InvertRelator(label, macro=macro))
        do(RotateRelator(label, 1, macro=macro))
    do(_rewrite_relator(p, "r2", Word((("f", -1), ("c", 1))),
                        _gen("c") * _gen("k", -1), "r8", macro))
    do(_rewrite_relator(p, "r2", _gen("h") * _gen("c"), _gen("c") * _gen("l"),
                        "r9", macro))
    do(RotateRelator("r2", 1, macro=macro))
    do(RelabelRelator("r2", "r10", macro=macro))

    # collapse the b arc
    macro = "collapsing"
    do(RemoveGenerator("b", "r10", macro=macro))
    do(InvertRelator("r6", macro=macro))

    # turning move: f goes away, then gc=kg replaces the clasp relation
    macro = "turning"
    do(RemoveGenerator("f", "r4", macro=macro))
    do(SubstituteEverywhere("e", _gen("c") * _gen("g") * _gen("c", -1), "r5",
                            only_in=("r8",), macro=macro))
    do(RotateRelator("r8", 1, macro=macro))
    do(RelabelRelator("r8", "r11", macro=macro))

    # four more corkscrews eliminate k, g, e, h
    do(RemoveGenerator("k", "r11", macro="corkscrew"))
    do(RemoveGenerator("g", "r5", macro="corkscrew"))
    do(RemoveGenerator("e", "r3", macro="corkscrew"))
    do(RotateRelator("r6", 1, macro="corkscrew"))
    do(RemoveGenerator("h", "r6", macro="corkscrew"))
    do(RemoveRelator("r9", macro="corkscrew"))
    do(RotateRelator("r_inf", 2 * s + 5, macro="cyclic"))

    p = p.replace(provenance=f"pipeline s={s}")
    trace = DerivationTrace(start, tuple(moves), p, lon_start, lon)
    return PipelineResult(trace, p, lon)


# -- longitude simplification -------------------------------------------------

@dataclass(frozen=True)
class SimplifiedLongitude:
    word: Word
    moves: tuple[RewriteLongitude, ...]


def simplify_longitude(s: int, l12: Word) -> SimplifiedLongitude:
    """Shorten the pipeline longitude via single-relator consequences.

    The chain first straightens the tail, then unfolds the repeated
    bracket one factor at a time; each step is one justified rewrite,
    replayable against the knot group relator.
    """
    check_s(s)
    if l12 != expected_l12(s):
        raise DerivationError("input longitude does not match the pipeline output")
    relator = final_relator(s)
    core = CyclicWord(relator)
    bracket = Word.from_syllables(
        [("l", -1), ("c", 1), ("l", 1), ("c", 1), ("l", -1), ("c", -1)])
    tail = Word.from_syllables([("c", 1), ("l", s), ("c", 1), ("l", 1),
                                ("c", -(2 * s + 9))])

    def chain_word(n: int) -> Word:
        return (_power("c", -(s - 2 + n)) * _gen("l") * _gen("c") * _power("l", s)
                * bracket ** (s - n) * tail)

    words = [chain_word(n) for n in range(1, s + 1)]
    moves = []
    current = l12
    for target in words:
        diff = ~target * current
        if rotation_witness(diff, core) is None:
            raise DerivationError(f"chain step to {target} is not a relator consequence")
        moves.append(RewriteLongitude(target, "r_inf", macro="longitude_simplification"))
        current = target
    if current != longitude_word(s):
        raise DerivationError("simplification chain did not reach the closed form")
    return SimplifiedLongitude(current, tuple(moves))


def full_trace(s: int) -> DerivationTrace:
    """Pipeline plus longitude simplification as one replayable trace."""
    result = run_pipeline(s)
    simplified = simplify_longitude(s, result.longitude)
    return DerivationTrace(result.trace.start,
                           result.trace.moves + simplified.moves,
                           result.presentation,
                           result.trace.longitude_start,
                           simplified.word)
