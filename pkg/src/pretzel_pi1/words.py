"""Exact arithmetic on words in a free group.

A Word is an immutable, freely reduced sequence of signed letters over
named generators.  Generator names match ``[a-z][a-z0-9]*``, so ``c``,
``l`` and ``f12`` are all valid.  Every public operation returns reduced
words, so equality of words is plain equality of their letter sequences.

Two interchangeable text forms are supported:

* tokenized: whitespace separated tokens ``name`` or ``name^k`` with a
  nonzero integer ``k``; an uppercase first letter marks an inverse
  (``F1`` is the inverse of ``f1``).
* compact (single-letter alphabets only): ``clcLCL^-3CLclcl^2`` style,
  lowercase for a generator, uppercase for its inverse, ``^k`` for runs.

The empty word prints as ``1`` in both forms.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Optional

GENERATOR_RE = re.compile(r"[a-z][a-z0-9]*\Z")
_TOKEN_RE = re.compile(r"([A-Za-z][a-z0-9]*)(?:\^(-?\d+))?\Z")
_COMPACT_RE = re.compile(r"([A-Za-z])(?:\^(-?\d+))?")

Letter = tuple[str, int]


class WordError(ValueError):
    """Malformed word text or invalid generator name."""


def is_generator_name(name: str) -> bool:
    return bool(GENERATOR_RE.match(name))


def _reduce_letters(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for name, sign in letters:
        if stack and stack[-1][0] == name and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((name, sign))
    return tuple(stack)


class Word:
    """A freely reduced word; the universal currency of the toolkit."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", _reduce_letters(letters))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    # -- construction ------------------------------------------------

    @staticmethod
    def generator(name: str, sign: int = 1) -> "Word":
        if not is_generator_name(name):
            raise WordError(f"invalid generator name: {name!r}")
        if sign not in (1, -1):
            raise WordError(f"letter sign must be +1 or -1, got {sign}")
        return Word(((name, sign),))

    @staticmethod
    def from_syllables(syllables: Iterable[tuple[str, int]]) -> "Word":
        letters: list[Letter] = []
        for name, exp in syllables:
            if exp == 0:
                continue
            sign = 1 if exp > 0 else -1
            letters.extend((name, sign) for _ in range(abs(exp)))
        return Word(letters)

    # -- basic protocol ----------------------------------------------

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.letters + other.letters)

    def __invert__(self) -> "Word":
        return Word(tuple((name, -sign) for name, sign in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return Word()
        base = self if n > 0 else ~self
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __str__(self) -> str:
        return self.tokens()

    # -- views ---------------------------------------------------------

    def syllables(self) -> list[tuple[str, int]]:
        """Run-length view: maximal runs as (generator, signed exponent)."""
        runs: list[tuple[str, int]] = []
        for name, sign in self.letters:
            if runs and runs[-1][0] == name:
                runs[-1] = (name, runs[-1][1] + sign)
            else:
                runs.append((name, sign))
        return runs

    def generators(self) -> set[str]:
        return {name for name, _ in self.letters}

    # -- rendering -----------------------------------------------------

    def tokens(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for name, exp in self.syllables():
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return " ".join(parts)

    def compact(self) -> str:
        """Single-letter rendering: case marks sign, ``^k`` marks runs."""
        if not self.letters:
            return "1"
        parts = []
        for name, exp in self.syllables():
            if len(name) != 1:
                raise WordError(f"compact form needs single-letter names, got {name!r}")
            base = name if exp > 0 else name.upper()
            parts.append(base if abs(exp) == 1 else f"{base}^{exp}")
        return "".join(parts)

    # -- operations ------------------------------------------------------

    def exponent_sum(self, name: str) -> int:
        return sum(sign for gen, sign in self.letters if gen == name)

    def substitute(self, name: str, replacement: "Word") -> "Word":
        """Replace every signed occurrence of ``name`` by ``replacement``."""
        inv = ~replacement
        out: list[Letter] = []
        for gen, sign in self.letters:
            if gen == name:
                out.extend(replacement.letters if sign > 0 else inv.letters)
            else:
                out.append((gen, sign))
        return Word(out)

    def rotated(self, k: int) -> "Word":
        """Left rotation by k letters, reduced (a conjugate of self)."""
        if not self.letters:
            return self
        k %= len(self.letters)
        return Word(self.letters[k:] + self.letters[:k])

    def cyclic_reduce(self) -> tuple["CyclicWord", "Word"]:
        """Split off the conjugator: self == conj * core * ~conj."""
        letters = list(self.letters)
        conj: list[Letter] = []
        while len(letters) >= 2 and letters[0][0] == letters[-1][0] \
                and letters[0][1] == -letters[-1][1]:
            conj.append(letters.pop(0))
            letters.pop()
        return CyclicWord(Word(letters)), Word(conj)

    def find(self, pattern: "Word", start: int = 0) -> int:
        """Index of the first occurrence of pattern's letters, or -1."""
        pat = pattern.letters
        if not pat:
            return start if start <= len(self.letters) else -1
        for i in range(start, len(self.letters) - len(pat) + 1):
            if self.letters[i:i + len(pat)] == pat:
                return i
        return -1


class CyclicWord:
    """A cyclically reduced word considered up to rotation."""

    __slots__ = ("word",)

    def __init__(self, word: Word):
        letters = word.letters
        if letters and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
            raise WordError(f"not cyclically reduced: {word}")
        object.__setattr__(self, "word", word)

    def __setattr__(self, name, value):
        raise AttributeError("CyclicWord is immutable")

    def __len__(self) -> int:
        return len(self.word)

    def rotations(self) -> Iterator[Word]:
        n = len(self.word)
        if n == 0:
            yield self.word
            return
        for k in range(n):
            yield self.word.rotated(k)

    def _canonical(self) -> tuple[Letter, ...]:
        return min(rot.letters for rot in self.rotations())

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclicWord):
            return NotImplemented
        return len(self.word) == len(other.word) and self._canonical() == other._canonical()

    def __hash__(self) -> int:
        return hash(self._canonical())

    def __repr__(self) -> str:
        return f"CyclicWord({str(self.word)!r})"

    def __str__(self) -> str:
        return str(self.word)

    def rotation_of(self, other: Word) -> Optional[int]:
        """k such that self.word rotated left by k equals other, else None."""
        if len(other) != len(self.word):
            return None
        for k in range(max(1, len(self.word))):
            if self.word.rotated(k) == other:
                return k
        return None


def cyclic_reduce(word: Word) -> tuple[CyclicWord, Word]:
    return word.cyclic_reduce()


def rotation_witness(w: Word, relator: CyclicWord) -> Optional[dict]:
    """Witness that w is conjugate to a rotation of relator or its inverse.

    Sufficient (not necessary) for w to die in any group carrying the
    relator.  Returns {"inverted", "rotation", "conjugator"} or None.
    """
    core, conj = w.cyclic_reduce()
    if len(core) == 0 or len(core) != len(relator):
        return None
    k = relator.rotation_of(core.word)
    if k is not None:
        return {"inverted": False, "rotation": k, "conjugator": conj}
    k = CyclicWord(~relator.word).rotation_of(core.word)
    if k is not None:
        return {"inverted": True, "rotation": k, "conjugator": conj}
    return None


def palindrome_rotation(cyclic: CyclicWord) -> Optional[int]:
    """Smallest k with rotate-left-by-k equal to the letter reversal.

    Reversal reverses letter order only; each letter keeps its own sign.
    Returns None when no rotation matches.
    """
    letters = cyclic.word.letters
    n = len(letters)
    if n == 0:
        return 0
    rev = tuple(reversed(letters))
    for k in range(n):
        if letters[k:] + letters[:k] == rev:
            return k
    return None


# -- parsing -------------------------------------------------------------

def _parse_token(token: str) -> list[Letter]:
    m = _TOKEN_RE.match(token)
    if m is None:
        raise WordError(f"bad word token: {token!r}")
    name, exp_text = m.groups()
    upper = name[0].isupper()
    base = name[0].lower() + name[1:]
    if not is_generator_name(base):
        raise WordError(f"bad generator name in token: {token!r}")
    if exp_text is None:
        exp = -1 if upper else 1
    else:
        exp = int(exp_text)
        if exp == 0:
            raise WordError(f"zero exponent in token: {token!r}")
        if upper and exp > 0:
            raise WordError(f"ambiguous token {token!r}: uppercase with positive exponent")
    sign = 1 if exp > 0 else -1
    return [(base, sign)] * abs(exp)


def parse_compact(text: str) -> Word:
    """Parse the compact single-letter form."""
    if text == "1":
        return Word()
    letters: list[Letter] = []
    pos = 0
    while pos < len(text):
        m = _COMPACT_RE.match(text, pos)
        if m is None:
            raise WordError(f"bad compact word at offset {pos}: {text!r}")
        letters.extend(_parse_token(m.group(0)))
        pos = m.end()
    return Word(letters)


def parse_word(text: str, compact: Optional[bool] = None) -> Word:
    """Parse either text form of a word.

    With compact=None the form is inferred: whitespace means tokenized,
    otherwise a string that parses as a single token is one token and
    anything else is treated as compact.
    """
    text = text.strip()
    if not text:
        raise WordError("empty word text (the empty word is written '1')")
    if text == "1":
        return Word()
    if compact is True:
        return parse_compact(text)
    if any(ch.isspace() for ch in text):
        letters: list[Letter] = []
        for token in text.split():
            letters.extend(_parse_token(token))
        return Word(letters)
    if compact is False or _TOKEN_RE.match(text):
        return Word(_parse_token(text))
    return parse_compact(text)


def W(text: str) -> Word:
    """Shorthand parser, handy in tests and interactive use."""
    return parse_word(text)
