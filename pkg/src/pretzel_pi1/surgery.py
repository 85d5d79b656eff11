"""Dehn surgery quotients and peripheral arithmetic.

The filled group is <c,l | r_inf(s), c^p L(s)^q> with meridian M = c and
longitude L the simplified null-homologous word.  M and L commute (they
live on the boundary torus), so identities among peripheral elements are
decided exactly in Z^2 modulo the sublattice generated by (p, q); no
word search in the group is ever needed for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .derivation import check_s, final_relator, longitude_word
from .presentations import Presentation
from .smith import group_order
from .words import Word


class SlopeError(ValueError):
    pass


@dataclass(frozen=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        if self.q <= 0:
            raise SlopeError(f"slope denominator must be positive, got {self.q}")
        if math.gcd(abs(self.p), self.q) != 1:
            raise SlopeError(f"slope {self.p}/{self.q} is not in lowest terms")

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def parse_slope(text: str) -> Slope:
    head, sep, tail = text.partition("/")
    try:
        p = int(head)
        q = int(tail) if sep else 1
    except ValueError as exc:
        raise SlopeError(f"cannot parse slope {text!r}") from exc
    return Slope(p, q)


@dataclass(frozen=True)
class PeripheralVector:
    """Exponents (meridian, longitude) in the rank-2 peripheral subgroup."""
    m: int
    l: int

    def __add__(self, other: "PeripheralVector") -> "PeripheralVector":
        return PeripheralVector(self.m + other.m, self.l + other.l)

    def __sub__(self, other: "PeripheralVector") -> "PeripheralVector":
        return PeripheralVector(self.m - other.m, self.l - other.l)

    def scaled(self, n: int) -> "PeripheralVector":
        return PeripheralVector(n * self.m, n * self.l)

    def congruent(self, other: "PeripheralVector", slope: Slope) -> bool:
        """Equality modulo the filling sublattice Z*(p, q)."""
        dm, dl = self.m - other.m, self.l - other.l
        if dl % slope.q:
            return False
        return dm == (dl // slope.q) * slope.p


MERIDIAN = PeripheralVector(1, 0)
LONGITUDE = PeripheralVector(0, 1)


def bezout_k(slope: Slope) -> PeripheralVector:
    """The peripheral root k = M^s L^-r with rp + sq = 1, canonical pair.

    Normalization: r = 0 when q = 1, otherwise the unique 0 <= r < q.
    Any other Bezout pair shifts the vector by a filling-lattice element.
    """
    if slope.q == 1:
        r, s = 0, 1
    else:
        r = pow(slope.p, -1, slope.q)
        s = (1 - r * slope.p) // slope.q
    assert r * slope.p + s * slope.q == 1
    return PeripheralVector(s, -r)


@dataclass
class CheckReport:
    label: str
    checks: list[tuple[str, bool]]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def __str__(self) -> str:
        lines = [f"{self.label}:"]
        lines += [f"  {'ok  ' if ok else 'FAIL'} {name}" for name, ok in self.checks]
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def verify_lemma_k(slope: Slope) -> CheckReport:
    """k^q = M and k^-p = L hold in the peripheral quotient."""
    k = bezout_k(slope)
    report = CheckReport(f"lemma-k {slope}", [])
    report.checks.append(
        (f"k^{slope.q} = M", k.scaled(slope.q).congruent(MERIDIAN, slope)))
    report.checks.append(
        (f"k^{-slope.p} = L", k.scaled(-slope.p).congruent(LONGITUDE, slope)))
    return report


def fact_exponent(s: int, slope: Slope) -> int:
    """Exponent of k in the peripheral identity for the clasp word."""
    check_s(s)
    return slope.p - (4 * s + 7) * slope.q


def clasp_word(s: int) -> Word:
    """The product l c l^s c l^s c l that the peripheral identity targets."""
    check_s(s)
    return Word.from_syllables([("l", 1), ("c", 1), ("l", s), ("c", 1),
                                ("l", s), ("c", 1), ("l", 1)])


def verify_fact(s: int) -> CheckReport:
    """Free-word half plus exponent bookkeeping of the clasp identity.

    (a) inverting the longitude literally exposes c^(2s+9) * W^-1 * c^(2s-2)
        with W the clasp word; pure free reduction, no group quotient.
    (b) trading each meridian block for k^q then moves the whole identity
        onto k with exponent p - (4s+7)q; the meridian blocks contribute
        (2s+9) + (2s-2) = 4s+7 copies of q.
    """
    check_s(s)
    report = CheckReport(f"fact s={s}", [])
    lhs = ~longitude_word(s)
    rhs = (Word.from_syllables([("c", 2 * s + 9)]) * ~clasp_word(s)
           * Word.from_syllables([("c", 2 * s - 2)]))
    report.checks.append(("free reduction identity", lhs == rhs))
    report.checks.append(("meridian blocks sum to 4s+7",
                          (2 * s + 9) + (2 * s - 2) == 4 * s + 7))
    return report


def surgered_presentation(s: int, slope: Slope) -> Presentation:
    """Two generators, two relators: the knot relator plus the filling."""
    check_s(s)
    filling = (Word.from_syllables([("c", slope.p)])
               * longitude_word(s) ** slope.q)
    return Presentation(
        ("c", "l"),
        (("r_inf", final_relator(s)), ("fill", filling)),
        provenance=f"surgery s={s} slope={slope}")


def h1_order(s: int, slope: Slope) -> int:
    """|H_1| of the filled manifold; 0 means infinite."""
    return group_order(surgered_presentation(s, slope).abelian_invariants())
