import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import P_A, profiles_with_tb
from oracles import best_attainable
from itervote.moves import (
    CapabilityError,
    MoveContext,
    Restriction,
    best_response_move,
    k_pragmatist_move,
    lift,
    m1_move,
    m2_move,
    restriction_from_name,
)
from itervote.preferences import Profile, TieBreak
from itervote.rules import Rule, named_psr, rule_from_name, scores
from test_rules import usable_rules


def ctx_for(profile, agent, rule_name="plurality", tb=None, truthful=None):
    tb = tb or TieBreak.identity(profile.m)
    truthful = truthful or profile.ballots[agent]
    return MoveContext.build(truthful, profile, agent, rule_from_name(rule_name, profile.m), tb)


@st.composite
def contexts(draw, max_m=4, max_n=6, truthful_is_current=False):
    profile, tb = draw(profiles_with_tb(min_m=3, max_m=max_m, max_n=max_n))
    agent = draw(st.integers(0, profile.n - 1))
    if truthful_is_current:
        truthful = profile.ballots[agent]
    else:
        truthful = tuple(draw(st.permutations(range(profile.m))))
    name = draw(st.sampled_from(usable_rules(profile.m)))
    return MoveContext.build(truthful, profile, agent, rule_from_name(name, profile.m), tb)


def test_lift():
    assert lift((2, 1, 0), 1) == (1, 2, 0)
    assert lift((0, 1, 2, 3), 2) == (2, 0, 1, 3)
    assert lift((0, 1, 2), 0) == (0, 1, 2)


def test_m1_examples(pa, pb):
    assert m1_move(ctx_for(pa, 4)) == (1, 2, 0)
    assert m1_move(ctx_for(pa, 2)) is None
    for name in usable_rules(3):
        for agent in range(5):
            assert m1_move(ctx_for(pb, agent, name)) is None


def test_m1_ungated_skips_improvement_check():
    # w=0 is last for agent 3; lifting 1 leaves plurality at 3-1 for 0
    profile = Profile.from_lists([[0, 1, 2], [0, 1, 2], [0, 2, 1], [2, 1, 0]])
    ctx = ctx_for(profile, 3)
    assert m1_move(ctx) is None
    assert m1_move(ctx, gated=False) == (1, 2, 0)
    assert Restriction("m1", gated=False).name == "m1-ungated"


def test_m2_examples(pa):
    assert m2_move(ctx_for(pa, 4)) == (1, 2, 0)
    assert m2_move(ctx_for(pa, 2)) is None
    for agent in range(4):
        assert m2_move(ctx_for(pa, agent)) is None


@given(contexts())
def test_veto_m2_never_moves(ctx):
    veto = named_psr("veto", ctx.profile.m)
    ctx = MoveContext.build(ctx.truthful, ctx.profile, ctx.agent, veto, ctx.tb)
    assert m2_move(ctx) is None


def test_k_pragmatist_examples(pa, pb):
    assert k_pragmatist_move(ctx_for(pa, 4), 2) == (1, 2, 0)
    for agent in range(5):
        assert k_pragmatist_move(ctx_for(pb, agent), 2) is None
    with pytest.raises(ValueError):
        k_pragmatist_move(ctx_for(pa, 4), 4)


@given(contexts())
def test_one_pragmatist_never_moves_on_scored_rules(ctx):
    assume(ctx.rule.kind != "stv")
    assert k_pragmatist_move(ctx, 1) is None


def test_best_response_examples(pa, pb):
    assert best_response_move(ctx_for(pa, 4)) == (1, 2, 0)
    for name in usable_rules(3):
        for agent in range(5):
            assert best_response_move(ctx_for(pb, agent, name)) is None


@pytest.mark.parametrize("name", ["plurality", "borda"])
@pytest.mark.parametrize("truthful", [(2, 0, 1, 3), (3, 1, 2, 0), (1, 0, 2, 3)])
def test_single_voter_best_response_elects_favourite(name, truthful):
    # start the voter from a ballot that elects someone else
    profile = Profile.from_lists([list(reversed(truthful))])
    ctx = ctx_for(profile, 0, name, truthful=truthful)
    ballot = best_response_move(ctx)
    assert ctx.election.winner_with(0, ballot) == truthful[0]


def test_best_response_cap():
    profile = Profile.from_lists([list(range(9))])
    with pytest.raises(CapabilityError):
        best_response_move(ctx_for(profile, 0, truthful=tuple(range(8, -1, -1))))


def test_restriction_names():
    assert restriction_from_name("m2") == Restriction("m2")
    assert restriction_from_name("pragmatist3") == Restriction("pragmatist", 3)
    assert restriction_from_name("pragmatist2").name == "pragmatist2"
    for bad in ("m3", "pragmatist0", "pragmatist", "Best"):
        with pytest.raises(ValueError):
            restriction_from_name(bad)


ALL = [Restriction("m1"), Restriction("m2"), Restriction("pragmatist", 2),
       Restriction("pragmatist", 3), Restriction("best")]


@given(contexts())
def test_moves_improve_and_stay_permutations(ctx):
    for restriction in ALL:
        ballot = restriction.move(ctx)
        if ballot is None:
            continue
        assert sorted(ballot) == list(range(ctx.profile.m))
        new = ctx.election.winner_with(ctx.agent, ballot)
        assert ctx.truth_pos[new] < ctx.truth_pos[ctx.current_winner], restriction.name


@given(contexts(truthful_is_current=True), st.data())
def test_m1_m2_keep_winner_position(ctx, data):
    # M1 assumes the agent has not moved yet; M2 holds for any current ballot
    if not data.draw(st.booleans()):
        ctx = MoveContext(tuple(data.draw(st.permutations(range(ctx.profile.m)))), ctx.agent, ctx.election)
        moves = [m2_move]
    else:
        moves = [m1_move, m2_move]
    w = ctx.current_winner
    for move in moves:
        ballot = move(ctx)
        if ballot is None:
            continue
        before = ctx.current
        for x in range(ctx.profile.m):
            if x != w:
                assert (before.index(w) < before.index(x)) == (ballot.index(w) < ballot.index(x))


@given(contexts())
def test_m2_raises_winner_key(ctx):
    assume(ctx.rule.kind != "stv")
    ballot = m2_move(ctx)
    if ballot is None:
        return
    old_w = ctx.current_winner
    new_profile = ctx.profile.replace(ctx.agent, ballot)
    new_scores = scores(ctx.rule, new_profile)
    new_w = ctx.election.winner_with(ctx.agent, ballot)
    pos = ctx.tb.position
    assert (new_scores[new_w], -pos[new_w]) > (ctx.election.scores[old_w], -pos[old_w])


@given(contexts())
def test_best_response_dominates(ctx):
    best = best_response_move(ctx)
    best_w = ctx.current_winner if best is None else ctx.election.winner_with(ctx.agent, best)
    for restriction in ALL[:-1]:
        ballot = restriction.move(ctx)
        if ballot is None:
            continue
        other = ctx.election.winner_with(ctx.agent, ballot)
        assert ctx.truth_pos[best_w] <= ctx.truth_pos[other]


@given(contexts(max_m=4, max_n=5))
def test_best_response_matches_enumeration_oracle(ctx):
    ballots = [list(b) for b in ctx.profile]
    target = best_attainable(ctx.rule.name, ballots, ctx.agent, list(ctx.truthful), list(ctx.tb.priority))
    ballot = best_response_move(ctx)
    if ctx.truth_pos[target] < ctx.truth_pos[ctx.current_winner]:
        assert ballot is not None and ctx.election.winner_with(ctx.agent, ballot) == target
    else:
        assert ballot is None


def test_p_a_manual_oracle():
    # re-running plurality on the modified P_A elects 1, which agent 4 prefers to 0
    from oracles import oracle_winner
    modified = [list(b) for b in P_A]
    modified[4] = [1, 2, 0]
    assert oracle_winner("plurality", modified, [0, 1, 2]) == 1
