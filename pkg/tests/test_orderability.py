import copy
import json

import pytest
from hypothesis import given, settings, strategies as st

from pretzel_pi1.derivation import final_relator
from pretzel_pi1.orderability import (
    BudgetExhausted,
    Certificate,
    Contradiction,
    Engine,
    EngineError,
    Inconclusive,
    Sign,
    _identity_branch,
    _strict_branch,
    nlo_search,
    pointwise_compare,
    relator_rotation_consequence,
    replay_certificate,
    replay_lemma_l_positive,
    saturate,
)
from pretzel_pi1.surgery import Slope
from pretzel_pi1.words import CyclicWord, Word, W

names = st.sampled_from(["c", "l"])
letters = st.tuples(names, st.sampled_from([1, -1]))
words = st.lists(letters, max_size=16).map(Word)


def test_pointwise_compare_examples():
    assert pointwise_compare(W("l"), Word()) == W("l")
    got = pointwise_compare(W("l c l^3 c"), W("c^2"))
    assert got == W("c^-2 l c l^3 c")
    w = W("c l C")
    assert pointwise_compare(w, w) == Word()


@settings(max_examples=80, deadline=None)
@given(words, words)
def test_compare_antisymmetry(u, v):
    assert pointwise_compare(u, v) == ~pointwise_compare(v, u)


def test_rotation_consequence_examples():
    relator = CyclicWord(final_relator(3))
    # the traded comparison identity: clcl^{s-1}clc = lcl^scl
    diff = ~W("l c l^3 c l") * W("c l c l^2 c l c")
    assert relator_rotation_consequence(diff, relator) is not None
    assert relator_rotation_consequence(final_relator(3), relator) == {
        "inverted": False, "rotation": 0, "conjugator": Word()}
    assert relator_rotation_consequence(W("c"), relator) is None
    assert relator_rotation_consequence(Word(), relator) is None


def test_engine_rules_and_conflicts():
    eng = Engine(budget=50)
    i = eng.assume(W("l"), Sign.POSITIVE)
    j = eng.power(i, 2)
    assert eng.journal[j].word == W("l^2")
    k = eng.inverse(i)
    assert eng.journal[k].sign is Sign.NEGATIVE
    with pytest.raises(EngineError):
        eng.product(i, k)  # strictly mixed product has no sign
    with pytest.raises(Contradiction):
        eng.assume(W("l^-1"), Sign.POSITIVE)
    assert eng.state.outcome == "contradiction"


def test_engine_relator_triviality_contradicts():
    eng = Engine(relators=(final_relator(3),), budget=50)
    with pytest.raises(Contradiction):
        eng.assume(final_relator(3).rotated(4), Sign.POSITIVE)


def test_engine_budget():
    eng = Engine(budget=2)
    eng.assume(W("l"), Sign.POSITIVE)
    eng.power(0, 2)
    with pytest.raises(BudgetExhausted):
        eng.power(0, 3)
    assert eng.state.outcome == "budget"


def test_saturate_derives_powers_without_contradiction():
    eng = Engine(budget=40)
    eng.assume(W("l"), Sign.POSITIVE)
    state = saturate(eng.state, relators=(), generators=("l",))
    assert state.outcome in ("open", "budget")
    signs = {Word(k).tokens(): v[0] for k, v in state.signs.items()}
    assert signs.get("l^2") is Sign.POSITIVE
    assert signs.get("l^3") is Sign.POSITIVE
    assert signs.get("l^-1") is Sign.NEGATIVE


def test_saturate_detects_antisymmetry_clash():
    eng = Engine(budget=40)
    eng.assume(W("c l"), Sign.POSITIVE)
    eng.state.signs[(~W("c l")).letters] = (Sign.POSITIVE, 0)  # forged entry
    state = saturate(eng.state, relators=(), generators=("c", "l"))
    assert state.outcome == "contradiction"


def test_free_group_positivity_never_contradicts():
    # soundness control: the free group on {c, l} is orderable
    eng = Engine(budget=700)
    eng.assume(W("c"), Sign.POSITIVE)
    eng.assume(W("l"), Sign.POSITIVE)
    state = saturate(eng.state, relators=(), generators=("c", "l"))
    assert state.outcome != "contradiction"
    for key, (sign, _) in state.signs.items():
        inv = tuple((n, -s) for n, s in reversed(key))
        if inv in state.signs:
            assert state.signs[inv][0] is sign.flipped()


def test_knot_group_positivity_never_contradicts():
    # the unfilled knot group acts on the line with c, l both moving points
    # up (translations by 1 and 2 factor through the abelianization and kill
    # the relator), so saturation with the relator available must stay
    # consistent and every derived sign must match that model
    relator = final_relator(3)
    eng = Engine(relators=(relator,), budget=900)
    eng.assume(W("c"), Sign.POSITIVE)
    eng.assume(W("l"), Sign.POSITIVE)
    state = saturate(eng.state, relators=(relator,), generators=("c", "l"))
    assert state.outcome != "contradiction"
    for key, (sign, _) in state.signs.items():
        translation = sum(s for n, s in key if n == "c") \
            + 2 * sum(s for n, s in key if n == "l")
        if sign is Sign.POSITIVE:
            assert translation > 0
        elif sign is Sign.NEGATIVE:
            assert translation < 0


@pytest.mark.parametrize("s,p,q", [(3, 19, 1), (4, 23, 1), (3, 39, 2)])
def test_replay_lemma_l_positive(s, p, q):
    eng = replay_lemma_l_positive(s, Slope(p, q))
    journal = eng.journal
    assert len(journal) <= 12
    last = journal[-1]
    assert last.word == W("l") and last.sign is Sign.POSITIVE
    rules = [line.rule for line in journal]
    assert "peripheral-meridian" in rules  # the x < xk < xk^q = xM = xc chain
    assert "relator" in rules


def test_identity_branch_closes_via_h1():
    branch = _identity_branch(3, Slope(19, 1), 1000)
    assert branch.outcome == "contradiction"
    rules = [line.rule for line in branch.journal]
    assert rules[-1] == "abelian-obstruction"
    # meridian inherits the trivial action before the obstruction fires
    c_lines = [l for l in branch.journal if l.word == W("c")]
    assert c_lines and c_lines[0].sign is Sign.IDENTITY


def test_identity_branch_open_for_unit_h1():
    branch = _identity_branch(3, Slope(1, 1), 1000)
    assert branch.outcome == "open"


CERTIFIABLE = [(3, 19, 1), (3, 39, 2), (4, 23, 1), (5, 27, 1)]


@pytest.mark.parametrize("s,p,q", CERTIFIABLE)
def test_nlo_emits_replayable_certificates(s, p, q):
    result = nlo_search(s, Slope(p, q), depth=100_000)
    assert isinstance(result, Certificate)
    cert = result.to_json()
    assert cert["verdict"] == "not_left_orderable"
    assert cert["params"]["p_odd"] is True
    assert {b["name"] for b in cert["branches"]} == {"k_positive", "k_identity"}
    for branch in cert["branches"]:
        assert branch["outcome"] == "contradiction"
        for line in branch["journal"]:
            assert "rule" in line and "premises" in line and "conclusion" in line
    report = replay_certificate(cert)
    assert report.ok, report.problems


@pytest.mark.parametrize("s,p,q", [(3, 17, 1), (3, 18, 1)])
def test_nlo_below_bound_is_inconclusive(s, p, q):
    result = nlo_search(s, Slope(p, q))
    assert isinstance(result, Inconclusive)
    assert "below the bound" in result.reason


def test_nlo_budget_exhaustion_is_inconclusive():
    result = nlo_search(3, Slope(19, 1), depth=3)
    assert isinstance(result, Inconclusive)
    assert "budget" in result.reason


def test_nlo_even_p_still_certifies_with_flag():
    result = nlo_search(3, Slope(20, 1))
    assert isinstance(result, Certificate)
    assert result.to_json()["params"]["p_odd"] is False


def test_certificate_exactly_when_slope_reaches_bound():
    import math
    for s in (3, 4, 5):
        bound = 4 * s + 7
        for q in (1, 2, 3):
            for p in range(bound * q - 3, bound * q + 4):
                if math.gcd(abs(p), q) != 1:
                    continue
                result = nlo_search(s, Slope(p, q))
                certified = isinstance(result, Certificate)
                assert certified == (p - bound * q >= 0), (s, p, q)
                if certified:
                    assert replay_certificate(result.to_json()).ok


def test_nlo_jobs_deterministic():
    a = nlo_search(3, Slope(19, 1), jobs=1).to_json()
    b = nlo_search(3, Slope(19, 1), jobs=2).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_mirror_branch_has_equal_shape_and_flipped_signs():
    pos = _strict_branch(3, Slope(19, 1), Sign.POSITIVE, 1000)
    neg = _strict_branch(3, Slope(19, 1), Sign.NEGATIVE, 1000)
    assert pos.outcome == neg.outcome == "contradiction"
    assert [(l.rule, l.premises) for l in pos.journal] == \
           [(l.rule, l.premises) for l in neg.journal]
    for a, b in zip(pos.journal, neg.journal):
        if a.sign is None:
            assert b.sign is None
        else:
            assert b.sign is a.sign.flipped()


def test_replayer_rejects_tampered_certificates():
    cert = nlo_search(3, Slope(19, 1)).to_json()

    flipped = copy.deepcopy(cert)
    flipped["verdict"] = "left_orderable"
    assert not replay_certificate(flipped).ok

    corrupted = copy.deepcopy(cert)
    for line in corrupted["branches"][0]["journal"]:
        if line["conclusion"].get("word") == "l":
            line["conclusion"]["word"] = "c"
    assert not replay_certificate(corrupted).ok

    unfinished = copy.deepcopy(cert)
    unfinished["branches"][1]["journal"] = unfinished["branches"][1]["journal"][:1]
    assert not replay_certificate(unfinished).ok

    wrong_params = copy.deepcopy(cert)
    wrong_params["params"]["p"] = 17
    assert not replay_certificate(wrong_params).ok

    forged_assumption = copy.deepcopy(cert)
    forged_assumption["branches"][0]["journal"].insert(
        1, {"rule": "assume", "premises": [],
            "args": {}, "conclusion": {"word": "c^-1", "sign": "positive"}})
    assert not replay_certificate(forged_assumption).ok

    dropped_case = copy.deepcopy(cert)
    dropped_case["branches"][1] = copy.deepcopy(dropped_case["branches"][0])
    assert not replay_certificate(dropped_case).ok


def test_certificates_are_json_serializable():
    cert = nlo_search(4, Slope(23, 1)).to_json()
    encoded = json.dumps(cert, indent=2)
    assert replay_certificate(json.loads(encoded)).ok
