"""Positive-cone deduction engine and non-left-orderability certificates.

Signs classify how a group element moves points of the line under an
orientation-preserving action: Positive means every point moves up,
Negative down, Identity nowhere.  All closure rules below are sound for
that reading (conjugation included, since order-preserving bijections
transport pointwise inequalities), and a branch closes when some word is
forced into two incompatible signs.

Words live over the alphabet {c, l, k}: c and l are the group
generators, while k is the peripheral root element carried symbolically
and never expanded (its powers are tied to c and to the clasp word
through the surgery identities, which the rules cite explicitly).  This
k is unrelated to the short-lived generator of the same name inside the
presentation pipeline; engine inputs are always two-generator groups.

A certificate is the full case tree with per-branch deduction journals;
replay_certificate re-checks every journal line from scratch, so emitted
certificates stand on their own.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .derivation import check_s, final_relator, longitude_word
from .surgery import Slope, bezout_k, clasp_word, fact_exponent, h1_order
from .words import CyclicWord, Word, parse_word, rotation_witness

ENGINE_VERSION = "1.0"
DEFAULT_DEPTH = 100_000


class EngineError(RuntimeError):
    """An invalid rule application; indicates a bug in a deduction script."""


class BudgetExhausted(RuntimeError):
    pass


class Sign(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    IDENTITY = "identity"

    def flipped(self) -> "Sign":
        if self is Sign.POSITIVE:
            return Sign.NEGATIVE
        if self is Sign.NEGATIVE:
            return Sign.POSITIVE
        return Sign.IDENTITY


def _combine(a: Sign, b: Sign) -> Optional[Sign]:
    if a is b:
        return a
    if a is Sign.IDENTITY:
        return b
    if b is Sign.IDENTITY:
        return a
    return None  # strictly mixed products are not signed


def pointwise_compare(u: Word, v: Word) -> Word:
    """x.u > x.v everywhere iff this word is Positive."""
    return ~v * u


def relator_rotation_consequence(w: Word, relator: CyclicWord) -> Optional[dict]:
    """Justification that w is trivial via a single rotated relator copy."""
    return rotation_witness(w, relator)


@dataclass
class JournalLine:
    rule: str
    premises: tuple[int, ...]
    args: dict
    word: Optional[Word]
    sign: Optional[Sign]
    note: str = ""

    def to_json(self) -> dict:
        if self.word is None:
            conclusion = {"contradiction": True}
        else:
            conclusion = {"word": self.word.tokens(), "sign": self.sign.value}
        data = {"rule": self.rule, "premises": list(self.premises),
                "args": self.args, "conclusion": conclusion}
        if self.note:
            data["note"] = self.note
        return data


class Contradiction(Exception):
    def __init__(self, line_index: int):
        self.line_index = line_index
        super().__init__(f"contradiction at journal line {line_index}")


@dataclass
class ConeState:
    """Partial sign assignment with its deduction journal and budget."""
    relators: tuple[Word, ...] = ()
    budget: int = DEFAULT_DEPTH
    used: int = 0
    journal: list[JournalLine] = field(default_factory=list)
    signs: dict = field(default_factory=dict)
    outcome: str = "open"  # open | contradiction | budget

    def sign_of(self, word: Word) -> Optional[Sign]:
        entry = self.signs.get(word.letters)
        return entry[0] if entry else None

    def line_of(self, word: Word) -> Optional[int]:
        entry = self.signs.get(word.letters)
        return entry[1] if entry else None

    def _contradict(self, a: int, b: int, note: str) -> None:
        self.journal.append(JournalLine("contradiction", (a, b), {}, None, None, note))
        self.outcome = "contradiction"
        raise Contradiction(len(self.journal) - 1)

    def close(self, rule: str, premises: tuple[int, ...], args: dict,
              note: str = "") -> None:
        """Terminal rule: close the branch with a named obstruction."""
        self.journal.append(JournalLine(rule, premises, args, None, None, note))
        self.outcome = "contradiction"
        raise Contradiction(len(self.journal) - 1)

    def record(self, rule: str, premises: tuple[int, ...], args: dict,
               word: Word, sign: Sign, note: str = "") -> int:
        """Append a justified classification and police consistency."""
        if self.outcome == "contradiction":
            raise EngineError("branch already closed")
        self.used += 1
        if self.used > self.budget:
            self.outcome = "budget"
            raise BudgetExhausted(f"depth budget {self.budget} exhausted")
        self.journal.append(JournalLine(rule, premises, args, word, sign, note))
        idx = len(self.journal) - 1
        if not word and sign is not Sign.IDENTITY:
            self._contradict(idx, idx, "the empty word moves no point")
        existing = self.signs.get(word.letters)
        if existing and existing[0] is not sign:
            self._contradict(idx, existing[1], "incompatible signs for one word")
        inv_entry = self.signs.get((~word).letters)
        if inv_entry and inv_entry[0] is not sign.flipped():
            self._contradict(idx, inv_entry[1], "word and inverse both strictly signed")
        if sign is not Sign.IDENTITY:
            for relator in self.relators:
                if word and rotation_witness(word, relator.cyclic_reduce()[0]):
                    self._contradict(idx, idx, "relator-trivial word strictly signed")
        if existing is None:
            self.signs[word.letters] = (sign, idx)
        return idx


class Engine:
    """Rule layer over ConeState: every method validates, then records."""

    def __init__(self, relators: tuple[Word, ...] = (), budget: int = DEFAULT_DEPTH):
        self.state = ConeState(relators=relators, budget=budget)

    @property
    def journal(self):
        return self.state.journal

    def _premise(self, idx: int) -> JournalLine:
        line = self.state.journal[idx]
        if line.word is None:
            raise EngineError(f"line {idx} is not a classification")
        return line

    def assume(self, word: Word, sign: Sign, note: str = "") -> int:
        return self.state.record("assume", (), {}, word, sign, note)

    def power(self, idx: int, n: int, note: str = "") -> int:
        if n < 1:
            raise EngineError("power rule needs n >= 1")
        line = self._premise(idx)
        return self.state.record("power", (idx,), {"n": n},
                                 line.word ** n, line.sign, note)

    def inverse(self, idx: int, note: str = "") -> int:
        line = self._premise(idx)
        return self.state.record("inverse", (idx,), {}, ~line.word,
                                 line.sign.flipped(), note)

    def product(self, i: int, j: int, note: str = "") -> int:
        a, b = self._premise(i), self._premise(j)
        sign = _combine(a.sign, b.sign)
        if sign is None:
            raise EngineError("cannot sign a strictly mixed product")
        return self.state.record("product", (i, j), {}, a.word * b.word, sign, note)

    def conjugate(self, idx: int, conjugator: Word, note: str = "") -> int:
        line = self._premise(idx)
        word = conjugator * line.word * ~conjugator
        return self.state.record("conjugate", (idx,),
                                 {"conjugator": conjugator.tokens()},
                                 word, line.sign, note)

    def relator_transfer(self, idx: int, target: Word, note: str = "") -> int:
        """Signs transport along equality witnessed by one relator copy."""
        line = self._premise(idx)
        witness = None
        used = None
        for relator in self.state.relators:
            witness = rotation_witness(~target * line.word,
                                       relator.cyclic_reduce()[0])
            if witness:
                used = relator
                break
        if witness is None:
            raise EngineError(f"{line.word} and {target} differ by no single relator copy")
        return self.state.record("relator", (idx,),
                                 {"relator": used.tokens(),
                                  "rotation": witness["rotation"],
                                  "inverted": witness["inverted"]},
                                 target, line.sign, note)


# -- blind saturation --------------------------------------------------------

def saturate(state: ConeState, relators: tuple[Word, ...] = (),
             generators: tuple[str, ...] = ("c", "l")) -> ConeState:
    """Close the sign assignment under the rules until fixpoint or budget.

    Applies, in a fixed order: inverse flips, pairwise products,
    conjugation by single generators, and relator transfers (multiplying
    by rotated relator copies).  Contradictions surface through the
    journal exactly as in scripted runs.
    """
    state.relators = state.relators + tuple(r for r in relators
                                            if r not in state.relators)
    ball = [Word(((g, 1),)) for g in generators]
    ball += [Word(((g, -1),)) for g in generators]
    rotations: list[Word] = []
    for relator in state.relators:
        core = relator.cyclic_reduce()[0]
        rotations.extend(core.rotations())
        rotations.extend(CyclicWord(~core.word).rotations())
    frontier = [idx for _, idx in sorted(state.signs.values(), key=lambda e: e[1])]
    try:
        while frontier:
            idx = frontier.pop(0)
            line = state.journal[idx]
            if line.word is None:
                continue

            def emit(rule, premises, args, word, sign, note=""):
                before = state.signs.get(word.letters)
                new_idx = state.record(rule, premises, args, word, sign, note)
                if before is None:
                    frontier.append(new_idx)

            emit("inverse", (idx,), {}, ~line.word, line.sign.flipped())
            partners = sorted(state.signs.values(), key=lambda e: e[1])
            for _, p_idx in partners:
                other = state.journal[p_idx]
                if other.word is None:
                    continue
                for left, right in ((idx, p_idx), (p_idx, idx)):
                    u, v = state.journal[left], state.journal[right]
                    sign = _combine(u.sign, v.sign)
                    if sign is not None:
                        emit("product", (left, right), {}, u.word * v.word, sign)
            for x in ball:
                emit("conjugate", (idx,), {"conjugator": x.tokens()},
                     x * line.word * ~x, line.sign)
            for rot in rotations:
                emit("relator", (idx,), {"relator": rot.tokens(), "rotation": 0,
                                         "inverted": False},
                     rot * line.word, line.sign)
    except Contradiction:
        pass
    except BudgetExhausted:
        pass
    return state


# -- scripted replays of the order arguments ---------------------------------

K = Word((("k", 1),))
C = Word((("c", 1),))
L = Word((("l", 1),))


def _power_word(base: Word, n: int) -> Word:
    return base ** n


def _meridian_root_line(engine: Engine, slope: Slope, root_idx: int) -> int:
    """k^q classified, then transported to the meridian c."""
    kq_idx = root_idx if slope.q == 1 else engine.power(
        root_idx, slope.q, note="q-th power of the peripheral root")
    line = engine._premise(kq_idx)
    pair = bezout_k(slope)
    return engine.state.record(
        "peripheral-meridian", (kq_idx,),
        {"p": slope.p, "q": slope.q, "bezout": [pair.m, pair.l]},
        C, line.sign,
        note="k^q equals the meridian in the filled group")


def _lemma_chain(engine: Engine, s: int, slope: Slope, root_sign: Sign) -> dict:
    """Journal the chain from a strictly signed root to a signed l.

    The meridian inherits the sign, a conjugate of it rides along the
    clasp prefix, one rotated relator copy trades the comparison word,
    and un-conjugating isolates l.  Returns the key journal indices.
    """
    root = engine.assume(K, root_sign, note="root normalization")
    c_idx = _meridian_root_line(engine, slope, root)
    w = L * C * _power_word(L, s) * C * L  # the clasp prefix l c l^s c l
    conj_idx = engine.conjugate(c_idx, ~w,
                                note="meridian conjugated along the clasp prefix")
    prod_idx = engine.product(conj_idx, c_idx)
    d_word = Word.from_syllables([("c", -1), ("l", -1), ("c", -1),
                                  ("l", 1), ("c", 1), ("l", 1), ("c", 1)])
    d_idx = engine.relator_transfer(prod_idx, d_word,
                                    note="trade the comparison word by one relator copy")
    l_idx = engine.conjugate(d_idx, C * L * C, note="un-conjugate to isolate l")
    return {"root": root, "c": c_idx, "l": l_idx}


def replay_lemma_l_positive(s: int, slope: Slope, root_sign: Sign = Sign.POSITIVE,
                            budget: int = DEFAULT_DEPTH) -> Engine:
    """Scripted replay: a strictly signed root forces l to the same sign."""
    check_s(s)
    if root_sign is Sign.IDENTITY:
        raise EngineError("the identity root is handled by the degenerate branch")
    engine = Engine(relators=(final_relator(s),), budget=budget)
    _lemma_chain(engine, s, slope, root_sign)
    return engine


@dataclass
class BranchRecord:
    name: str
    assumptions: list[dict]
    journal: list[JournalLine]
    outcome: str
    note: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "assumptions": self.assumptions,
                "journal": [line.to_json() for line in self.journal],
                "outcome": self.outcome, "note": self.note}


@dataclass
class Certificate:
    s: int
    slope: Slope
    branches: list[BranchRecord]
    depth_used: int
    depth_budget: int

    def to_json(self) -> dict:
        return {
            "params": _params_json(self.s, self.slope, self.depth_budget),
            "branches": [b.to_json() for b in self.branches],
            "symmetry": ("the k-negative case is the orientation mirror of the "
                         "k-positive branch; reversing the line swaps the signs"),
            "interpretation": (
                "every orientation-preserving action of the filled group on the "
                "line has a globally fixed point, hence the group (countable) "
                "carries no left-invariant total order"),
            "verdict": "not_left_orderable",
            "engine_version": ENGINE_VERSION,
            "depth_used": self.depth_used,
        }


@dataclass
class Inconclusive:
    s: int
    slope: Slope
    reason: str
    branches: list[BranchRecord]
    depth_budget: int

    def to_json(self) -> dict:
        return {
            "params": _params_json(self.s, self.slope, self.depth_budget),
            "branches": [b.to_json() for b in self.branches],
            "verdict": "inconclusive",
            "reason": self.reason,
            "engine_version": ENGINE_VERSION,
        }


def _params_json(s: int, slope: Slope, depth: int) -> dict:
    return {"s": s, "p": slope.p, "q": slope.q, "depth": depth,
            "p_odd": slope.p % 2 != 0,
            "slope_bound": 4 * s + 7,
            "relator": final_relator(s).tokens(),
            "longitude": longitude_word(s).tokens(),
            "clasp": clasp_word(s).tokens()}


def _strict_branch(s: int, slope: Slope, root_sign: Sign, budget: int) -> BranchRecord:
    """The main case: a fixed-point-free root normalized to one sign."""
    name = "k_positive" if root_sign is Sign.POSITIVE else "k_negative"
    assumptions = [{"word": "k", "sign": root_sign.value}]
    e = fact_exponent(s, slope)  # p - (4s+7) q
    engine = Engine(relators=(final_relator(s),), budget=budget)
    state = engine.state
    try:
        marks = _lemma_chain(engine, s, slope, root_sign)
        c_idx, l_idx = marks["c"], marks["l"]
        engine.power(c_idx, 3, note="the meridian cube bound")
        ls_idx = engine.power(l_idx, s)
        t = engine.product(l_idx, c_idx)
        t = engine.product(t, ls_idx)
        t = engine.product(t, c_idx)
        t = engine.product(t, ls_idx)
        t = engine.product(t, c_idx)
        w0_idx = engine.product(t, l_idx, note="the clasp word, signed by products")
        # the peripheral identity: clasp = k^((4s+7)q - p) = k^(-e)
        if e < 0:
            return BranchRecord(
                name, assumptions, state.journal, "open",
                note=f"slope below the bound: the clasp word is k^{-e}, a positive "
                     f"power of the root, consistent with its sign")
        if e == 0:
            state.record("fact-exponent", (w0_idx,),
                         {"clasp_power": 0, "p": slope.p, "q": slope.q},
                         clasp_word(s), Sign.IDENTITY,
                         note="zero peripheral exponent: the clasp word is trivial")
        else:
            kinv = engine.inverse(marks["root"])
            kpow = kinv if e == 1 else engine.power(kinv, e)
            line = engine._premise(kpow)
            state.record("fact-exponent", (kpow,),
                         {"clasp_power": -e, "p": slope.p, "q": slope.q},
                         clasp_word(s), line.sign,
                         note="the clasp word is this negative power of the root")
        raise EngineError("strict branch failed to close")  # pragma: no cover
    except Contradiction:
        return BranchRecord(name, assumptions, state.journal, "contradiction")
    except BudgetExhausted:
        return BranchRecord(name, assumptions, state.journal, "budget")


def _identity_branch(s: int, slope: Slope, budget: int) -> BranchRecord:
    """The degenerate case: the root acts trivially."""
    assumptions = [{"word": "k", "sign": Sign.IDENTITY.value}]
    engine = Engine(relators=(final_relator(s),), budget=budget)
    try:
        root = engine.assume(K, Sign.IDENTITY, note="degenerate root")
        c_idx = _meridian_root_line(engine, slope, root)
        order = h1_order(s, slope)
        if order == 1 or order == 0:
            return BranchRecord(
                "k_identity", assumptions, engine.state.journal, "open",
                note=f"H1 has order {order}; a trivial meridian is not obstructed")
        engine.state.close(
            "abelian-obstruction", (c_idx,), {"h1_order": order},
            note="a trivially-acting meridian kills H1, which has order > 1")
        raise EngineError("identity branch failed to close")  # pragma: no cover
    except Contradiction:
        return BranchRecord("k_identity", assumptions, engine.state.journal,
                            "contradiction")
    except BudgetExhausted:
        return BranchRecord("k_identity", assumptions, engine.state.journal, "budget")


def nlo_search(s: int, slope: Slope, depth: int = DEFAULT_DEPTH,
               jobs: int = 1):
    """Case tree for non-left-orderability of the filled group.

    Returns a Certificate when every branch reaches a contradiction and
    an honest Inconclusive otherwise (slope below the bound, or budget).
    """
    check_s(s)
    if depth < 1:
        raise ValueError("depth budget must be at least 1")
    tasks = (
        lambda: _strict_branch(s, slope, Sign.POSITIVE, depth),
        lambda: _identity_branch(s, slope, depth),
    )
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            branches = list(pool.map(lambda task: task(), tasks))
    else:
        branches = [task() for task in tasks]
    depth_used = sum(len(b.journal) for b in branches)
    if all(b.outcome == "contradiction" for b in branches):
        return Certificate(s, slope, branches, depth_used, depth)
    if any(b.outcome == "budget" for b in branches):
        reason = "depth budget exhausted"
    else:
        open_notes = "; ".join(b.note for b in branches if b.outcome == "open")
        reason = open_notes or "some branch stayed open"
    return Inconclusive(s, slope, reason, branches, depth)


# -- certificate replay -------------------------------------------------------

@dataclass
class ReplayReport:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        if self.ok:
            return "certificate replay: OK"
        return "certificate replay: REJECTED\n" + "\n".join(
            f"  - {p}" for p in self.problems)


def _check_context(params: dict, problems: list[str]) -> Optional[tuple]:
    try:
        s = int(params["s"])
        slope = Slope(int(params["p"]), int(params["q"]))
    except (KeyError, ValueError, TypeError) as exc:
        problems.append(f"bad params: {exc}")
        return None
    if parse_word(params.get("relator", "")) != final_relator(s):
        problems.append("cited relator does not match the knot group relator")
    if parse_word(params.get("longitude", "")) != longitude_word(s):
        problems.append("cited longitude does not match")
    if parse_word(params.get("clasp", "")) != clasp_word(s):
        problems.append("cited clasp word does not match")
    # the peripheral identity behind the fact-exponent rule, from scratch
    lhs = ~longitude_word(s)
    rhs = (Word.from_syllables([("c", 2 * s + 9)]) * ~clasp_word(s)
           * Word.from_syllables([("c", 2 * s - 2)]))
    if lhs != rhs:
        problems.append("the free clasp identity fails")
    return s, slope


def _replay_line(i: int, line: dict, parsed: list, ctx, assumptions,
                 problems: list[str]) -> None:
    s, slope = ctx
    rule = line.get("rule")
    premises = line.get("premises", [])
    args = line.get("args", {})
    conclusion = line.get("conclusion", {})

    def premise(n: int):
        if not (0 <= n < i) or parsed[n] is None:
            raise ValueError(f"line {i}: bad premise reference {n}")
        return parsed[n]

    if conclusion.get("contradiction"):
        if rule == "abelian-obstruction":
            w, sg = premise(premises[0])
            if w != C or sg is not Sign.IDENTITY:
                raise ValueError(f"line {i}: obstruction needs a trivial meridian")
            order = h1_order(s, slope)
            if order != int(args["h1_order"]) or order < 2:
                raise ValueError(f"line {i}: H1 order does not obstruct")
            parsed.append(None)
            return
        if rule != "contradiction" or len(premises) != 2:
            raise ValueError(f"line {i}: malformed contradiction")
        (wa, sa), (wb, sb) = premise(premises[0]), premise(premises[1])
        if premises[0] == premises[1]:
            # intrinsic clash: a strictly signed trivial word
            trivial = (not wa and sa is not Sign.IDENTITY) or (
                sa is not Sign.IDENTITY and rotation_witness(
                    wa, final_relator(s).cyclic_reduce()[0]) is not None)
            if not trivial:
                raise ValueError(f"line {i}: self-contradiction without triviality")
        elif wa == wb:
            if sa is sb:
                raise ValueError(f"line {i}: premises are not incompatible")
        elif wa == ~wb:
            if sa is sb.flipped():
                raise ValueError(f"line {i}: inverse premises are consistent")
        else:
            raise ValueError(f"line {i}: contradiction premises are unrelated words")
        parsed.append(None)
        return

    word = parse_word(conclusion["word"]) if conclusion.get("word") else Word()
    sign = Sign(conclusion["sign"])
    if rule == "assume":
        if {"word": word.tokens(), "sign": sign.value} not in assumptions:
            raise ValueError(f"line {i}: assumption not declared by the branch")
    elif rule == "power":
        w, sg = premise(premises[0])
        n = int(args["n"])
        if n < 1 or word != w ** n or sign is not sg:
            raise ValueError(f"line {i}: bad power application")
    elif rule == "inverse":
        w, sg = premise(premises[0])
        if word != ~w or sign is not sg.flipped():
            raise ValueError(f"line {i}: bad inverse application")
    elif rule == "product":
        (wa, sa), (wb, sb) = premise(premises[0]), premise(premises[1])
        if word != wa * wb or _combine(sa, sb) is not sign:
            raise ValueError(f"line {i}: bad product application")
    elif rule == "conjugate":
        w, sg = premise(premises[0])
        x = parse_word(args["conjugator"])
        if word != x * w * ~x or sign is not sg:
            raise ValueError(f"line {i}: bad conjugation")
    elif rule == "relator":
        w, sg = premise(premises[0])
        core = final_relator(s).cyclic_reduce()[0]
        if rotation_witness(~word * w, core) is None or sign is not sg:
            raise ValueError(f"line {i}: relator transfer not witnessed")
    elif rule == "peripheral-meridian":
        w, sg = premise(premises[0])
        r, t = args.get("bezout", (None, None))
        if w != K ** slope.q or word != C or sign is not sg:
            raise ValueError(f"line {i}: peripheral-meridian shape is wrong")
        vec = bezout_k(slope)
        if [vec.m, vec.l] != [r, t]:
            raise ValueError(f"line {i}: bezout witness does not match")
    elif rule == "fact-exponent":
        power = int(args["clasp_power"])
        if power != -fact_exponent(s, slope) or word != clasp_word(s):
            raise ValueError(f"line {i}: exponent bookkeeping is wrong")
        if power == 0:
            if sign is not Sign.IDENTITY:
                raise ValueError(f"line {i}: zero exponent must give the identity")
        else:
            w, sg = premise(premises[0])
            if w != K ** power or sign is not sg:
                raise ValueError(f"line {i}: clasp power does not match the premise")
    else:
        raise ValueError(f"line {i}: unknown rule {rule!r}")
    parsed.append((word, sign))


def replay_certificate(cert: dict) -> ReplayReport:
    """Re-run every journal line of an emitted certificate from scratch."""
    problems: list[str] = []
    ctx = _check_context(cert.get("params", {}), problems)
    if ctx is None:
        return ReplayReport(False, problems)
    if cert.get("verdict") != "not_left_orderable":
        problems.append(f"unexpected verdict {cert.get('verdict')!r}")
    branches = cert.get("branches", [])
    covered = {tuple(sorted((a.get("word"), a.get("sign")) for a in b.get("assumptions", [])))
               for b in branches}
    needed = {(("k", "positive"),), (("k", "identity"),)}
    if not needed <= covered:
        problems.append("certificate must cover the k-positive and k-identity cases "
                        "(the k-negative case is the recorded orientation mirror)")
    for branch in branches:
        name = branch.get("name", "?")
        parsed: list = []
        closed = False
        seen_signs: dict = {}
        for i, line in enumerate(branch.get("journal", [])):
            try:
                _replay_line(i, line, parsed, ctx, branch.get("assumptions", []),
                             problems)
            except (ValueError, KeyError, TypeError) as exc:
                problems.append(f"branch {name}: {exc}")
                break
            entry = parsed[-1]
            if entry is None:
                closed = True
                continue
            word, sign = entry
            prev = seen_signs.setdefault(word.letters, sign)
            inv_prev = seen_signs.get((~word).letters)
            if prev is not sign or (inv_prev is not None
                                    and inv_prev is not sign.flipped()):
                closed = True  # the journal itself exhibits the clash
        if branch.get("outcome") != "contradiction":
            problems.append(f"branch {name}: outcome is not a contradiction")
        elif not closed:
            problems.append(f"branch {name}: journal never reaches a contradiction")
    return ReplayReport(not problems, problems)
