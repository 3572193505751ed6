"""Iterative voting: one manipulator per step until nobody can improve.

The turn goes to the eligible agent (one with an improving move) with the
highest dissatisfaction index, lowest agent id first on ties. Every eligible
agent passed over gains one point of dissatisfaction; the mover is reset to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .moves import MoveContext, Restriction
from .preferences import Ballot, Profile, TieBreak, format_ballot
from .rules import Election, Rule

CONVERGED = "converged"
STEP_CAP_REACHED = "step_cap_reached"


def default_step_cap(n: int, m: int) -> int:
    return 10 * n * m


@dataclass(frozen=True)
class MoveRecord:
    step: int
    agent: int
    before: Ballot
    after: Ballot
    winner_before: int
    winner_after: int

    def to_line(self) -> str:
        fields = (self.step, self.agent, format_ballot(self.before), format_ballot(self.after),
                  self.winner_before, self.winner_after)
        return "\t".join(str(f) for f in fields)

    @classmethod
    def from_line(cls, line: str) -> "MoveRecord":
        step, agent, before, after, w0, w1 = line.rstrip("\n").split("\t")
        return cls(int(step), int(agent), tuple(int(c) for c in before.split()),
                   tuple(int(c) for c in after.split()), int(w0), int(w1))


@dataclass(frozen=True)
class IterationState:
    truthful: Profile
    current: Profile
    rule: Rule
    restriction: Restriction
    tb: TieBreak
    dissatisfaction: tuple[int, ...]
    trace: tuple[MoveRecord, ...] = ()
    election: Election = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.truthful.m != self.current.m or self.truthful.n != self.current.n:
            raise ValueError("truthful and current profiles differ in shape")
        if len(self.dissatisfaction) != self.truthful.n or min(self.dissatisfaction) < 0:
            raise ValueError("need one nonnegative dissatisfaction index per agent")
        object.__setattr__(self, "election", Election(self.rule, self.current, self.tb))

    @classmethod
    def start(cls, profile: Profile, rule: Rule, restriction: Restriction, tb: TieBreak) -> "IterationState":
        return cls(profile, profile, rule, restriction, tb, (0,) * profile.n)

    @property
    def step(self) -> int:
        return len(self.trace)

    @property
    def winner(self) -> int:
        return self.election.winner

    def context(self, agent: int) -> MoveContext:
        return MoveContext(self.truthful.ballots[agent], agent, self.election)


def available_moves(state: IterationState) -> dict[int, Ballot]:
    """Improving move of every agent that has one, keyed by agent id."""
    moves = {}
    for agent in range(state.current.n):
        ballot = state.restriction.move(state.context(agent))
        if ballot is not None:
            moves[agent] = ballot
    return moves


def eligible_agents(state: IterationState) -> set[int]:
    return set(available_moves(state))


def select_mover(eligible: Iterable[int], dissatisfaction: Sequence[int]) -> int:
    eligible = sorted(eligible)
    if not eligible:
        raise ValueError("select_mover called with no eligible agents")
    return max(eligible, key=lambda i: (dissatisfaction[i], -i))


def step(state: IterationState) -> IterationState | None:
    """Advance one step; ``None`` means nobody has an improving move."""
    moves = available_moves(state)
    if not moves:
        return None
    mover = select_mover(moves, state.dissatisfaction)
    before = state.current.ballots[mover]
    after = moves[mover]
    current = state.current.replace(mover, after)
    d = list(state.dissatisfaction)
    for agent in moves:
        d[agent] += 1
    d[mover] = 0
    record = MoveRecord(state.step, mover, before, after, state.winner,
                        state.election.winner_with(mover, after))
    return IterationState(state.truthful, current, state.rule, state.restriction, state.tb,
                          tuple(d), state.trace + (record,))


@dataclass(frozen=True)
class IterationOutcome:
    status: str
    winner: int
    initial_winner: int
    steps: int
    profile: Profile
    trace: tuple[MoveRecord, ...]

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def summary(self) -> str:
        return f"{self.status} steps={self.steps} winner={self.winner}"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "winner": self.winner,
            "initial_winner": self.initial_winner,
            "steps": self.steps,
            "profile": [list(b) for b in self.profile.ballots],
            "trace": [
                {"step": r.step, "agent": r.agent, "before": list(r.before), "after": list(r.after),
                 "winner_before": r.winner_before, "winner_after": r.winner_after}
                for r in self.trace
            ],
        }


def iterate(
    profile: Profile,
    rule: Rule,
    restriction: Restriction,
    tb: TieBreak | None = None,
    step_cap: int | None = None,
) -> IterationOutcome:
    if tb is None:
        tb = TieBreak.identity(profile.m)
    if step_cap is None:
        step_cap = default_step_cap(profile.n, profile.m)
    if step_cap < 1:
        raise ValueError(f"step_cap must be >= 1, got {step_cap}")
    state = IterationState.start(profile, rule, restriction, tb)
    initial_winner = state.winner
    status = CONVERGED
    while True:
        if state.step >= step_cap:
            # still report convergence if the capped profile happens to be stable
            status = STEP_CAP_REACHED if available_moves(state) else CONVERGED
            break
        nxt = step(state)
        if nxt is None:
            break
        state = nxt
    return IterationOutcome(status, state.winner, initial_winner, state.step, state.current, state.trace)


def format_trace(trace: Iterable[MoveRecord]) -> str:
    return "".join(r.to_line() + "\n" for r in trace)


def parse_trace(text: str) -> list[MoveRecord]:
    return [MoveRecord.from_line(line) for line in text.splitlines() if line.strip()]


def replay(truthful: Profile, trace: Iterable[MoveRecord]) -> list[Profile]:
    """Profiles b0, b1, ... reconstructed from a trace."""
    profiles = [truthful]
    for record in trace:
        profiles.append(profiles[-1].replace(record.agent, record.after))
    return profiles
