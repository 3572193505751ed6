"""Manipulation moves available to a single agent.

Each move function takes a :class:`MoveContext` and returns the agent's new
ballot, or ``None`` when the restriction offers no move that makes the
outcome strictly better for the agent's truthful preferences.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .preferences import Ballot, Profile, TieBreak
from .rules import Election, Rule

BEST_RESPONSE_CAP = 8
MOVE_NAMES = ("best", "pragmatist2", "pragmatist3", "m1", "m2")


class CapabilityError(ValueError):
    """Raised when exhaustive best-response enumeration would be too large."""


def lift(ballot: Ballot, c: int) -> Ballot:
    """``ballot`` with ``c`` moved to the top, everyone else keeping their order."""
    if ballot[0] == c:
        return ballot
    return (c,) + tuple(x for x in ballot if x != c)


@dataclass(frozen=True)
class MoveContext:
    truthful: Ballot
    agent: int
    election: Election
    truth_pos: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pos = [0] * len(self.truthful)
        for i, c in enumerate(self.truthful):
            pos[c] = i
        object.__setattr__(self, "truth_pos", tuple(pos))

    @classmethod
    def build(cls, truthful: Ballot, profile: Profile, agent: int, rule: Rule, tb: TieBreak) -> "MoveContext":
        return cls(tuple(truthful), agent, Election(rule, profile, tb))

    @property
    def current(self) -> Ballot:
        return self.election.profile.ballots[self.agent]

    @property
    def profile(self) -> Profile:
        return self.election.profile

    @property
    def rule(self) -> Rule:
        return self.election.rule

    @property
    def tb(self) -> TieBreak:
        return self.election.tb

    @property
    def current_winner(self) -> int:
        return self.election.winner

    def prefers(self, a: int, b: int) -> bool:
        """Strict truthful preference of a over b."""
        return self.truth_pos[a] < self.truth_pos[b]

    def improves(self, ballot: Ballot) -> bool:
        return self.prefers(self.election.winner_with(self.agent, ballot), self.current_winner)


def m1_move(ctx: MoveContext, gated: bool = True) -> Ballot | None:
    truthful, w = ctx.truthful, ctx.current_winner
    if w == truthful[0] or w == truthful[1]:
        return None
    second = truthful[1]
    if ctx.current[0] == second:
        return None
    ballot = lift(ctx.current, second)
    if gated and not ctx.improves(ballot):
        return None
    return ballot


def m2_move(ctx: MoveContext) -> Ballot | None:
    w = ctx.current_winner
    current = ctx.current
    above = set(current[: current.index(w)])
    # truthful order, stopping at w: the first candidate that can win is the
    # most preferred survivor, and anything after w would not be an improvement
    for c in ctx.truthful:
        if c == w:
            return None
        if c in above:
            ballot = lift(current, c)
            if ctx.election.winner_with(ctx.agent, ballot) == c:
                return ballot
    return None


def k_pragmatist_move(ctx: MoveContext, k: int) -> Ballot | None:
    m = len(ctx.truthful)
    if not 1 <= k <= m:
        raise ValueError(f"k must be in 1..{m}, got {k}")
    leaders = ctx.election.ranking()[:k]
    c = min(leaders, key=ctx.truth_pos.__getitem__)
    if ctx.current[0] == c:
        return None
    ballot = lift(ctx.current, c)
    return ballot if ctx.improves(ballot) else None


def best_response_move(ctx: MoveContext, cap: int = BEST_RESPONSE_CAP) -> Ballot | None:
    """Exhaustive best response.

    Among the ballots reaching the best attainable winner, prefers the one
    with that winner on top and the rest in truthful order; if that ballot
    does not reach it (possible under STV), the first one in enumeration
    order is returned.
    """
    truthful = ctx.truthful
    m = len(truthful)
    if m > cap:
        raise CapabilityError(f"best response enumerates m! ballots; m={m} exceeds cap {cap}")
    w = ctx.current_winner
    if truthful[0] == w:
        return None
    favourite = truthful[0]
    first_ballot: dict[int, Ballot] = {}
    for ballot in itertools.permutations(range(m)):
        c = ctx.election.winner_with(ctx.agent, ballot)
        first_ballot.setdefault(c, ballot)
        if c == favourite:
            break
    target = min(first_ballot, key=ctx.truth_pos.__getitem__)
    if not ctx.prefers(target, w):
        return None
    canonical = lift(truthful, target)
    if ctx.election.winner_with(ctx.agent, canonical) == target:
        return canonical
    return first_ballot[target]


@dataclass(frozen=True)
class Restriction:
    """A manipulation-move restriction: ``best``, ``pragmatist`` (with k), ``m1`` or ``m2``.

    ``gated=False`` turns off the improvement check on M1, so the lift is
    performed whenever the current winner is outside the agent's top two.
    """

    kind: str
    k: int = 0
    gated: bool = True

    def __post_init__(self):
        if self.kind not in ("best", "pragmatist", "m1", "m2"):
            raise ValueError(f"unknown move restriction {self.kind!r}")
        if self.kind == "pragmatist" and self.k < 1:
            raise ValueError(f"k-pragmatist needs k >= 1, got {self.k}")

    @property
    def name(self) -> str:
        if self.kind == "pragmatist":
            return f"pragmatist{self.k}"
        if self.kind == "m1" and not self.gated:
            return "m1-ungated"
        return self.kind

    def move(self, ctx: MoveContext) -> Ballot | None:
        if self.kind == "m1":
            return m1_move(ctx, self.gated)
        if self.kind == "m2":
            return m2_move(ctx)
        if self.kind == "pragmatist":
            return k_pragmatist_move(ctx, self.k)
        return best_response_move(ctx)

    def __str__(self):
        return self.name


def restriction_from_name(name: str) -> Restriction:
    if name in ("best", "m1", "m2"):
        return Restriction(name)
    if name == "m1-ungated":
        return Restriction("m1", gated=False)
    match = re.fullmatch(r"pragmatist([1-9][0-9]*)", name)
    if match:
        return Restriction("pragmatist", int(match.group(1)))
    raise ValueError(
        f"unknown move {name!r}; expected one of {', '.join(MOVE_NAMES)} (or pragmatistK for any k >= 1)"
    )
