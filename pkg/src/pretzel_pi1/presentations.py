"""Finitely presented groups, elementary moves and machine-checked traces.

A presentation keeps an ordered generator list and labeled reduced
relators.  Moves are the sound elementary steps the simplification
pipeline is scripted in; every move checks its own side condition, so a
replayed trace is a proof that the endpoints present isomorphic groups.

Relator equality is up to free reduction only; rotations and inversions
are explicit moves, which keeps replay deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import smith
from .words import Word, is_generator_name, parse_word, rotation_witness


class PresentationError(ValueError):
    pass


class SideConditionViolated(Exception):
    """A Tietze move whose syntactic side condition fails on this input."""

    def __init__(self, move, reason: str):
        self.move = move
        self.reason = reason
        super().__init__(f"{type(move).__name__}: {reason}")


@dataclass(frozen=True, eq=False)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[str, Word], ...]
    provenance: Optional[str] = None

    def __post_init__(self):
        seen = set()
        for g in self.generators:
            if not is_generator_name(g):
                raise PresentationError(f"bad generator name: {g!r}")
            if g in seen:
                raise PresentationError(f"duplicate generator: {g!r}")
            seen.add(g)
        labels = set()
        for label, word in self.relators:
            if not label or any(ch.isspace() for ch in label) or ":" in label:
                raise PresentationError(f"bad relator label: {label!r}")
            if label in labels:
                raise PresentationError(f"duplicate relator label: {label!r}")
            labels.add(label)
            undeclared = word.generators() - seen
            if undeclared:
                raise PresentationError(
                    f"relator {label} uses undeclared generators {sorted(undeclared)}")

    # equality ignores relator order but not generator order
    def __eq__(self, other) -> bool:
        return (isinstance(other, Presentation)
                and self.generators == other.generators
                and dict(self.relators) == dict(other.relators))

    def __hash__(self) -> int:
        return hash((self.generators, frozenset(self.relators)))

    def labels(self) -> list[str]:
        return [label for label, _ in self.relators]

    def relator(self, label: str) -> Word:
        for lab, word in self.relators:
            if lab == label:
                return word
        raise KeyError(f"no relator labeled {label!r}")

    def has_relator(self, label: str) -> bool:
        return any(lab == label for lab, _ in self.relators)

    def replace(self, **changes) -> "Presentation":
        data = {"generators": self.generators, "relators": self.relators,
                "provenance": self.provenance}
        data.update(changes)
        return Presentation(**data)

    # -- abelianization ----------------------------------------------

    def exponent_matrix(self) -> list[list[int]]:
        return [[word.exponent_sum(g) for g in self.generators]
                for _, word in self.relators]

    def abelian_invariants(self) -> tuple[int, ...]:
        return smith.abelian_invariants(self.exponent_matrix(), len(self.generators))

    def abel_image(self, word: Word) -> tuple[int, ...]:
        undeclared = word.generators() - set(self.generators)
        if undeclared:
            raise PresentationError(f"word uses undeclared generators {sorted(undeclared)}")
        vector = [word.exponent_sum(g) for g in self.generators]
        return smith.quotient_class(vector, self.exponent_matrix())

    # -- text format ----------------------------------------------------

    def to_text(self) -> str:
        lines = []
        if self.provenance:
            lines.append(f"# {self.provenance}")
        lines.append("gens: " + " ".join(self.generators))
        for label, word in self.relators:
            lines.append(f"rel {label}: {word.tokens()}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "Presentation":
        generators: tuple[str, ...] = ()
        relators: list[tuple[str, Word]] = []
        saw_gens = False
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("gens:"):
                generators = tuple(line[len("gens:"):].split())
                saw_gens = True
            elif line.startswith("rel "):
                head, _, body = line[len("rel "):].partition(":")
                relators.append((head.strip(), parse_word(body.strip())))
            else:
                raise PresentationError(f"unparseable line: {raw!r}")
        if not saw_gens:
            raise PresentationError("missing 'gens:' line")
        return Presentation(generators, tuple(relators))


def solve_for(word: Word, gen: str) -> Word:
    """Solve relator == 1 for its unique occurrence of gen."""
    hits = [i for i, (name, _) in enumerate(word.letters) if name == gen]
    if len(hits) != 1:
        raise PresentationError(
            f"generator {gen!r} occurs {len(hits)} times, need exactly 1")
    i = hits[0]
    sign = word.letters[i][1]
    u = Word(word.letters[:i])
    v = Word(word.letters[i + 1:])
    return ~u * ~v if sign > 0 else v * u


# -- moves ----------------------------------------------------------------

@dataclass(frozen=True)
class Insertion:
    """Insert a conjugated relator (or its inverse) and freely reduce."""
    relator: str
    inverted: bool
    conjugator: Word
    position: int

    def perform(self, word: Word, p: Presentation) -> Word:
        r = p.relator(self.relator)
        if self.inverted:
            r = ~r
        ins = self.conjugator * r * ~self.conjugator
        if not 0 <= self.position <= len(word):
            raise PresentationError(f"insertion position {self.position} out of range")
        return Word(word.letters[:self.position] + ins.letters
                    + word.letters[self.position:])


@dataclass(frozen=True)
class AddGenerator:
    gen: str
    definition: Word
    label: str
    macro: Optional[str] = None

    def apply(self, p: Presentation) -> Presentation:
        if self.gen in p.generators:
            raise SideConditionViolated(self, f"generator {self.gen!r} already present")
        if p.has_relator(self.label):
            raise SideConditionViolated(self, f"label {self.label!r} already present")
        if self.definition.generators() - set(p.generators):
            raise SideConditionViolated(self, "definition uses undeclared generators")
        relator = Word.generator(self.gen) * ~self.definition
        return p.replace(generators=p.generators + (self.gen,),
                         relators=p.relators + ((self.label, relator),))


@dataclass(frozen=True)
class RemoveGenerator:
    gen: str
    via: str
    macro: Optional[str] = None

    def solved(self, p: Presentation) -> Word:
        try:
            return solve_for(p.relator(self.via), self.gen)
        except (KeyError, PresentationError) as exc:
            raise SideConditionViolated(self, str(exc)) from exc

    def apply(self, p: Presentation) -> Presentation:
        if self.gen not in p.generators:
            raise SideConditionViolated(self, f"no generator {self.gen!r}")
        replacement = self.solved(p)
        relators = tuple((lab, w.substitute(self.gen, replacement))
                         for lab, w in p.relators if lab != self.via)
        generators = tuple(g for g in p.generators if g != self.gen)
        return p.replace(generators=generators, relators=relators)


@dataclass(frozen=True)
class SubstituteEverywhere:
    """Rewrite gen to an equal word inside chosen relators.

    The justifying relator must pin gen down (single occurrence solving
    to exactly `by`); it is never rewritten itself.  only_in=None means
    every other relator.
    """
    gen: str
    by: Word
    justified_by: str
    only_in: Optional[tuple[str, ...]] = None
    macro: Optional[str] = None

    def apply(self, p: Presentation) -> Presentation:
        try:
            solved = solve_for(p.relator(self.justified_by), self.gen)
        except (KeyError, PresentationError) as exc:
            raise SideConditionViolated(self, str(exc)) from exc
        if solved != self.by:
            raise SideConditionViolated(
                self, f"justifying relator solves {self.gen!r} to {solved}, not {self.by}")
        if self.only_in is None:
            targets = {lab for lab, _ in p.relators} - {self.justified_by}
        else:
            targets = set(self.only_in)
            missing = targets - {lab for lab, _ in p.relators}
            if missing:
                raise SideConditionViolated(self, f"no relator labeled {sorted(missing)}")
            if self.justified_by in targets:
                raise SideConditionViolated(self, "cannot rewrite the justifying relator")
        relators = tuple((lab, w.substitute(self.gen, self.by) if lab in targets else w)
                         for lab, w in p.relators)
        return p.replace(relators=relators)


@dataclass(frozen=True)
class AddRelator:
    label: str
    word: Word
    derivation: tuple[Insertion, ...]
    macro: Optional[str] = None

    def apply(self, p: Presentation) -> Presentation:
        if p.has_relator(self.label):
            raise SideConditionViolated(self, f"label {self.label!r} already present")
        if self.word.generators() - set(p.generators):
            raise SideConditionViolated(self, "relator uses undeclared generators")
        derived = Word()
        for step in self.derivation:
            try:
                derived = step.perform(derived, p)
            except (KeyError, PresentationError) as exc:
                raise SideConditionViolated(self, str(exc)) from exc
        if derived != self.word:
            raise SideConditionViolated(
                self, f"derivation yields {derived}, declared {self.word}")
        return p.replace(relators=p.relators + ((self.label, self.word),))


@dataclass(frozen=True)
class RewriteRelator:
    """Replace a relator by the result of justified insertions into it.

    Steps may only cite other relators: self-insertion is not invertible
    (it can silently double the relator), so it is rejected.
    """
    label: str
    steps: tuple[Insertion, ...]
    macro: Optional[str] = None

    def apply(self, p: Presentation) -> Presentation:
        try:
            word = p.relator(self.label)
        except KeyError as exc:
            raise SideConditionViolated(self, str(exc)) from exc
        for step in self.steps:
            if step.relator == self.label:
                raise SideConditionViolated(
                    self, "a rewrite cannot be justified by the relator it rewrites")
            try:
                word = step.perform(word, p)
            except (KeyError, PresentationError) as exc:
                raise SideConditionViolated(self, str(exc)) from exc
        relators = tuple((lab, word if lab == self.label else w)
                         for lab, w in p.relators)
        return p.replace(relators=relators)


@dataclass(frozen=True)
class RemoveRelator:
    """Drop a relator that is trivial or duplicates another one."""
    label: str
    duplicate_of: Optional[str] = None
    macro: Optional[str] = None

    def apply(self, p: Presentation) -> Presentation:
        try:
            word = p.relator(self.label)
        except KeyError as exc:
            raise SideConditionViolated(self, str(exc)) from exc
        if self.duplicate_of is None:
            if word != Word():
                raise SideConditionViolated(self, f"{self.label} is not the empty relator")
        else:
            if self.duplicate_of == self.label:
                raise SideConditionViolated(self, "relator cannot duplicate itself")
            try:
                other = p.relator(self.duplicate_of)
            except KeyError as exc:
                raise SideConditionViolated(self, str(exc)) from exc
            if other != word:
                raise SideConditionViolated(
                    self, f"{self.label} and {self.duplicate_of} differ")
        return p.replace(relators=tuple((lab, w) for lab, w in p.relators
                                        if lab != self.label))


@dataclass(frozen=True)
class RotateRelator:
    label: str
    k: int
    macro: Optional[str] = None

    def apply(self, p: Presentation) -> Presentation:
        try:
            word = p.relator(self.label)
        except KeyError as exc:
            raise SideConditionViolated(self, str(exc)) from exc
        rotated = word.rotated(self.k)
        return p.replace(relators=tuple((lab, rotated if lab == self.label else w)
                                        for lab, w in p.relators))


@dataclass(frozen=True)
class InvertRelator:
    label: str
    macro: Optional[str] = None

    def apply(self, p: Presentation) -> Presentation:
        try:
            word = p.relator(self.label)
        except KeyError as exc:
            raise SideConditionViolated(self, str(exc)) from exc
        return p.replace(relators=tuple((lab, ~word if lab == self.label else w)
                                        for lab, w in p.relators))


@dataclass(frozen=True)
class RelabelRelator:
    old: str
    new: str
    macro: Optional[str] = None

    def apply(self, p: Presentation) -> Presentation:
        if not p.has_relator(self.old):
            raise SideConditionViolated(self, f"no relator labeled {self.old!r}")
        if p.has_relator(self.new):
            raise SideConditionViolated(self, f"label {self.new!r} already present")
        return p.replace(relators=tuple((self.new if lab == self.old else lab, w)
                                        for lab, w in p.relators))


@dataclass(frozen=True)
class RewriteLongitude:
    """Rewrite the tracked longitude to a word equal modulo one relator.

    The new word must differ from the current longitude by a single
    conjugate of the cited relator, checked via rotation_witness.
    """
    new_word: Word
    via: str
    macro: Optional[str] = None

    def apply(self, p: Presentation) -> Presentation:
        if not p.has_relator(self.via):
            raise SideConditionViolated(self, f"no relator labeled {self.via!r}")
        return p


Move = (AddGenerator | RemoveGenerator | SubstituteEverywhere | AddRelator
        | RewriteRelator | RemoveRelator | RotateRelator | InvertRelator
        | RelabelRelator | RewriteLongitude)

RELATOR_DELTAS = {
    AddGenerator: 1, RemoveGenerator: -1, AddRelator: 1, RemoveRelator: -1,
    SubstituteEverywhere: 0, RewriteRelator: 0, RotateRelator: 0,
    InvertRelator: 0, RelabelRelator: 0, RewriteLongitude: 0,
}


# -- traces ---------------------------------------------------------------

@dataclass(frozen=True)
class DerivationTrace:
    start: Presentation
    moves: tuple[Move, ...]
    end: Presentation
    longitude_start: Optional[Word] = None
    longitude_end: Optional[Word] = None


@dataclass
class MoveReport:
    index: int
    kind: str
    macro: Optional[str]
    ok: bool
    reason: str = ""


@dataclass
class TraceReport:
    passed: bool
    steps: list[MoveReport] = field(default_factory=list)
    detail: str = ""

    def first_failure(self) -> Optional[MoveReport]:
        for step in self.steps:
            if not step.ok:
                return step
        return None

    def __str__(self) -> str:
        lines = [f"move {s.index:3d} {s.kind:<20} "
                 f"{'ok' if s.ok else 'FAIL: ' + s.reason}"
                 + (f"  [{s.macro}]" if s.macro else "")
                 for s in self.steps]
        lines.append(("PASS" if self.passed else "FAIL") +
                     (f" -- {self.detail}" if self.detail else ""))
        return "\n".join(lines)


def apply_move(p: Presentation, move: Move,
               longitude: Optional[Word] = None) -> tuple[Presentation, Optional[Word]]:
    """Apply one move, transporting the tracked longitude alongside."""
    if isinstance(move, RewriteLongitude):
        if longitude is None:
            raise SideConditionViolated(move, "no longitude is being tracked")
        relator = p.relator(move.via) if p.has_relator(move.via) else None
        if relator is None:
            raise SideConditionViolated(move, f"no relator labeled {move.via!r}")
        diff = ~move.new_word * longitude
        if rotation_witness(diff, relator.cyclic_reduce()[0]) is None:
            raise SideConditionViolated(
                move, "rewrite is not a single consequence of the cited relator")
        return p, move.new_word
    if isinstance(move, RemoveGenerator) and longitude is not None:
        replacement = move.solved(p)
        new_p = move.apply(p)
        return new_p, longitude.substitute(move.gen, replacement)
    return move.apply(p), longitude


def replay_trace(trace: DerivationTrace, check_abelian: bool = False) -> TraceReport:
    """Replay every move; PASS iff all side conditions hold and the end matches."""
    report = TraceReport(passed=True)
    p = trace.start
    longitude = trace.longitude_start
    invariants = p.abelian_invariants() if check_abelian else None
    for i, move in enumerate(trace.moves):
        kind = type(move).__name__
        try:
            p, longitude = apply_move(p, move, longitude)
        except (SideConditionViolated, PresentationError, KeyError) as exc:
            report.steps.append(MoveReport(i, kind, move.macro, False, str(exc)))
            report.passed = False
            report.detail = f"move {i} failed"
            return report
        if longitude is not None and longitude.generators() - set(p.generators):
            report.steps.append(MoveReport(
                i, kind, move.macro, False,
                "longitude uses a generator absent from the presentation"))
            report.passed = False
            report.detail = f"move {i} broke the longitude"
            return report
        if check_abelian:
            now = p.abelian_invariants()
            if now != invariants:
                report.steps.append(MoveReport(
                    i, kind, move.macro, False,
                    f"abelian invariants changed {invariants} -> {now}"))
                report.passed = False
                report.detail = f"move {i} changed the abelianization"
                return report
        report.steps.append(MoveReport(i, kind, move.macro, True))
    if p != trace.end:
        report.passed = False
        report.detail = "end presentation does not match"
    if trace.longitude_end is not None and longitude != trace.longitude_end:
        report.passed = False
        report.detail = "end longitude does not match"
    return report


# -- JSON serialization -----------------------------------------------------

TRACE_SCHEMA_VERSION = 1


def _word_json(word: Optional[Word]):
    return None if word is None else word.tokens()


def _insertion_json(ins: Insertion) -> dict:
    return {"rel": ins.relator, "inv": ins.inverted,
            "conj": ins.conjugator.tokens(), "at": ins.position}


def _insertion_from_json(data: dict) -> Insertion:
    return Insertion(data["rel"], bool(data["inv"]),
                     parse_word(data["conj"]), int(data["at"]))


def move_to_json(move: Move) -> dict:
    base: dict = {"kind": type(move).__name__}
    if move.macro:
        base["macro"] = move.macro
    if isinstance(move, AddGenerator):
        base.update(gen=move.gen, definition=move.definition.tokens(), label=move.label)
    elif isinstance(move, RemoveGenerator):
        base.update(gen=move.gen, via=move.via)
    elif isinstance(move, SubstituteEverywhere):
        base.update(gen=move.gen, by=move.by.tokens(), justified_by=move.justified_by,
                    only_in=list(move.only_in) if move.only_in else None)
    elif isinstance(move, AddRelator):
        base.update(label=move.label, word=move.word.tokens(),
                    derivation=[_insertion_json(s) for s in move.derivation])
    elif isinstance(move, RewriteRelator):
        base.update(label=move.label, steps=[_insertion_json(s) for s in move.steps])
    elif isinstance(move, RemoveRelator):
        base.update(label=move.label, duplicate_of=move.duplicate_of)
    elif isinstance(move, RotateRelator):
        base.update(label=move.label, k=move.k)
    elif isinstance(move, InvertRelator):
        base.update(label=move.label)
    elif isinstance(move, RelabelRelator):
        base.update(old=move.old, new=move.new)
    elif isinstance(move, RewriteLongitude):
        base.update(new_word=move.new_word.tokens(), via=move.via)
    else:
        raise PresentationError(f"unknown move {move!r}")
    return base


def move_from_json(data: dict) -> Move:
    kind = data["kind"]
    macro = data.get("macro")
    if kind == "AddGenerator":
        return AddGenerator(data["gen"], parse_word(data["definition"]),
                            data["label"], macro)
    if kind == "RemoveGenerator":
        return RemoveGenerator(data["gen"], data["via"], macro)
    if kind == "SubstituteEverywhere":
        only = data.get("only_in")
        return SubstituteEverywhere(data["gen"], parse_word(data["by"]),
                                    data["justified_by"],
                                    tuple(only) if only else None, macro)
    if kind == "AddRelator":
        return AddRelator(data["label"], parse_word(data["word"]),
                          tuple(_insertion_from_json(s) for s in data["derivation"]),
                          macro)
    if kind == "RewriteRelator":
        return RewriteRelator(data["label"],
                              tuple(_insertion_from_json(s) for s in data["steps"]),
                              macro)
    if kind == "RemoveRelator":
        return RemoveRelator(data["label"], data.get("duplicate_of"), macro)
    if kind == "RotateRelator":
        return RotateRelator(data["label"], int(data["k"]), macro)
    if kind == "InvertRelator":
        return InvertRelator(data["label"], macro)
    if kind == "RelabelRelator":
        return RelabelRelator(data["old"], data["new"], macro)
    if kind == "RewriteLongitude":
        return RewriteLongitude(parse_word(data["new_word"]), data["via"], macro)
    raise PresentationError(f"unknown move kind {kind!r}")


def presentation_to_json(p: Presentation) -> dict:
    return {"generators": list(p.generators),
            "relators": [{"label": lab, "word": w.tokens()} for lab, w in p.relators],
            "provenance": p.provenance}


def presentation_from_json(data: dict) -> Presentation:
    return Presentation(tuple(data["generators"]),
                        tuple((r["label"], parse_word(r["word"]))
                              for r in data["relators"]),
                        data.get("provenance"))


def trace_to_json(trace: DerivationTrace) -> dict:
    return {"v": TRACE_SCHEMA_VERSION,
            "start": presentation_to_json(trace.start),
            "moves": [move_to_json(m) for m in trace.moves],
            "end": presentation_to_json(trace.end),
            "longitude_start": _word_json(trace.longitude_start),
            "longitude_end": _word_json(trace.longitude_end)}


def trace_from_json(data: dict) -> DerivationTrace:
    if data.get("v") != TRACE_SCHEMA_VERSION:
        raise PresentationError(f"unsupported trace schema version {data.get('v')!r}")
    lon_start = data.get("longitude_start")
    lon_end = data.get("longitude_end")
    return DerivationTrace(
        presentation_from_json(data["start"]),
        tuple(move_from_json(m) for m in data["moves"]),
        presentation_from_json(data["end"]),
        parse_word(lon_start) if lon_start else None,
        parse_word(lon_end) if lon_end else None)
