"""Starting data for the (-2,3,2s+1) pretzel knot family.

Everything is generated straight from the integer parameter s >= 3: the
Wirtinger presentation of the knot group, the tunnel-collapsed variant
that seeds the simplification pipeline, and the longitude read off the
diagram.  The diagram itself is never modeled; the crossing schema is
complete as a function of s.
"""

from __future__ import annotations

from dataclasses import dataclass

from .presentations import (
    AddGenerator,
    Insertion,
    Presentation,
    RewriteRelator,
)
from .words import Word


def check_s(s: int) -> int:
    if not isinstance(s, int) or s < 3:
        raise ValueError(f"the pretzel parameter s must be an integer >= 3, got {s!r}")
    return s


def strand_name(m: int, s: int) -> str:
    """Arc label along the twist region: f_m, with f_0=a, f_2s=g, f_2s+1=b."""
    if m == 0:
        return "a"
    if 1 <= m <= 2 * s - 1:
        return f"f{m}"
    if m == 2 * s:
        return "g"
    if m == 2 * s + 1:
        return "b"
    raise ValueError(f"strand index {m} out of range for s={s}")


def _conjugation_relator(over: str, source: str, target: str) -> Word:
    # crossing relation  over*source = source*target, stored reduced
    return Word(((over, 1), (source, 1), (target, -1), (source, -1)))


def wirtinger_presentation(s: int) -> Presentation:
    """One generator per arc, one relator per crossing: 2s+6 of each."""
    check_s(s)
    gens = ["a", "b", "c", "d", "e", "f"]
    gens += [f"f{i}" for i in range(1, 2 * s)]
    gens.append("g")
    relators: list[tuple[str, Word]] = [
        ("r1", _conjugation_relator("c", "a", "d")),
        ("r2", _conjugation_relator("a", "c", "b")),
        ("r3", _conjugation_relator("d", "f", "e")),
        ("r4", _conjugation_relator("f", "e", "c")),
        ("r5", _conjugation_relator("e", "c", "g")),
        ("r6", Word((("f1", 1), ("a", 1), ("f", -1), ("a", -1)))),
    ]
    for i in range(1, 2 * s):
        word = Word(((strand_name(i + 1, s), 1), (strand_name(i, s), 1),
                     (strand_name(i - 1, s), -1), (strand_name(i, s), -1)))
        relators.append((f"r{i + 6}", word))
    relators.append((f"r{2 * s + 6}",
                     Word((("b", 1), ("g", 1), (strand_name(2 * s - 1, s), -1),
                           ("g", -1)))))
    return Presentation(tuple(gens), tuple(relators), provenance=f"wirtinger s={s}")


def tunnel_moves(s: int) -> tuple:
    """Attach the tunnel: add f0 defined as a, rewire the two adjacent crossings.

    The r6/r7 rewrites touch a single occurrence of a each, so they are
    expressed as justified insertions of the new relator rather than a
    global substitution.
    """
    check_s(s)
    macro = "tunnel"
    return (
        AddGenerator("f0", Word((("a", 1),)), "r_inf", macro=macro),
        RewriteRelator("r6", (Insertion("r_inf", False, Word((("f1", 1),)), 0),),
                       macro=macro),
        RewriteRelator("r7", (Insertion("r_inf", True, Word((("f0", -1),)), 2),),
                       macro=macro),
    )


def tunnel_collapse(s: int) -> Presentation:
    p = wirtinger_presentation(s)
    for move in tunnel_moves(s):
        p = move.apply(p)
    return p.replace(provenance=f"tunnel s={s}")


@dataclass(frozen=True)
class LongitudeReading:
    """The longitude as read along the knot, plus the writhe correction.

    arcs is the raw label sequence (2s+6 letters, all read positively
    under the fixed orientation); alpha = -(sum of read signs) is the
    exponent of the meridian correction appended at the end.
    """
    arcs: Word
    alpha: int

    @property
    def word(self) -> Word:
        return self.arcs * Word.from_syllables([("c", self.alpha)])


def initial_longitude(s: int) -> LongitudeReading:
    check_s(s)
    arcs = [("a", 1), ("f", 1), ("c", 1)]
    arcs += [(f"f{i}", 1) for i in range(2 * s - 1, 0, -2)]
    arcs += [("c", 1), ("g", 1)]
    arcs += [(f"f{i}", 1) for i in range(2 * s - 2, 1, -2)]
    arcs += [("a", 1), ("e", 1)]
    return LongitudeReading(Word(arcs), -(2 * s + 6))
