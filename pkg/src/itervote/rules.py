"""Resolute voting rules: positional scoring, Copeland, Maximin and STV.

Every rule breaks ties with a :class:`~itervote.preferences.TieBreak`. The
:class:`Election` class caches the aggregate tally of a profile so that the
winner after swapping a single ballot can be recomputed without re-tallying
everyone, which is what the manipulation moves do thousands of times per run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .preferences import Ballot, Profile, TieBreak, majority_matrix

PSR_NAMES = ("plurality", "veto", "approval2", "approval3", "borda")
RULE_NAMES = PSR_NAMES + ("copeland", "maximin", "stv")


@dataclass(frozen=True)
class Rule:
    """``kind`` is one of psr, copeland, maximin, stv; ``vector`` is set for psr only."""

    kind: str
    vector: tuple[int, ...] | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("psr", "copeland", "maximin", "stv"):
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.kind == "psr":
            vec = self.vector
            if vec is None or len(vec) < 2:
                raise ValueError("a scoring rule needs a vector of length m >= 2")
            if any(int(s) != s or s < 0 for s in vec):
                raise ValueError(f"scores must be nonnegative integers: {vec}")
            if any(a < b for a, b in zip(vec, vec[1:])) or vec[0] <= vec[-1]:
                raise ValueError(f"scoring vector must be nonincreasing with s1 > sm: {vec}")
            object.__setattr__(self, "vector", tuple(int(s) for s in vec))
        elif self.vector is not None:
            raise ValueError(f"{self.kind} takes no scoring vector")
        if not self.name:
            object.__setattr__(self, "name", self.kind if self.kind != "psr" else f"psr{self.vector}")

    @classmethod
    def psr(cls, vector: Sequence[int], name: str = "") -> "Rule":
        return cls("psr", tuple(vector), name)

    def check(self, profile: Profile) -> None:
        if self.kind == "psr" and len(self.vector) != profile.m:
            raise ValueError(
                f"{self.name}: scoring vector has length {len(self.vector)}, profile has m={profile.m}"
            )


@dataclass(frozen=True)
class ElectionResult:
    """Winner plus per-candidate scores.

    For STV the scores are elimination rounds: a candidate eliminated in round
    r scores r, candidates still standing at the end score the number of
    rounds played, and the winner one more than that.
    """

    winner: int
    scores: tuple[int, ...]
    tie_broken: bool


def named_psr(name: str, m: int) -> Rule:
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if name == "plurality":
        vec = [1] + [0] * (m - 1)
    elif name == "veto":
        vec = [1] * (m - 1) + [0]
    elif name in ("approval2", "approval3"):
        k = int(name[-1])
        if m <= k:
            raise ValueError(f"{k}-approval needs more than {k} candidates, got m={m}")
        vec = [1] * k + [0] * (m - k)
    elif name == "borda":
        vec = list(range(m - 1, -1, -1))
    else:
        raise ValueError(f"unknown scoring rule {name!r}; expected one of {', '.join(PSR_NAMES)}")
    return Rule.psr(vec, name)


def rule_from_name(name: str, m: int) -> Rule:
    if name in PSR_NAMES:
        return named_psr(name, m)
    if name in ("copeland", "maximin", "stv"):
        return Rule(name)
    raise ValueError(f"unknown rule {name!r}; expected one of {', '.join(RULE_NAMES)}")


def psr_scores(rule: Rule, profile: Profile) -> tuple[int, ...]:
    rule.check(profile)
    scores = [0] * profile.m
    for ballot in profile.ballots:
        for s, c in zip(rule.vector, ballot):
            scores[c] += s
    return tuple(scores)


def _copeland_from_matrix(support: Sequence[Sequence[int]], n: int) -> list[int]:
    m = len(support)
    scores = [0] * m
    for x in range(m):
        row = support[x]
        for y in range(x + 1, m):
            # twice the count avoids n/2 for odd n; exact ties score nothing
            diff = 2 * row[y] - n
            if diff > 0:
                scores[x] += 1
                scores[y] -= 1
            elif diff < 0:
                scores[x] -= 1
                scores[y] += 1
    return scores


def _maximin_from_matrix(support: Sequence[Sequence[int]]) -> list[int]:
    m = len(support)
    return [min(support[c][a] for a in range(m) if a != c) for c in range(m)]


def copeland_scores(profile: Profile) -> tuple[int, ...]:
    return tuple(_copeland_from_matrix(majority_matrix(profile), profile.n))


def maximin_scores(profile: Profile) -> tuple[int, ...]:
    return tuple(_maximin_from_matrix(majority_matrix(profile)))


def _top(scores: Sequence[int], position: Sequence[int]) -> int:
    best = 0
    for c in range(1, len(scores)):
        if scores[c] > scores[best] or (scores[c] == scores[best] and position[c] < position[best]):
            best = c
    return best


def _stv(ballots: Sequence[Ballot], m: int, tb: TieBreak) -> tuple[int, list[int], bool, list[int]]:
    """Returns (winner, scores, tie_broken, ranking best-to-worst)."""
    n = len(ballots)
    piles: list[list[Ballot]] = [[] for _ in range(m)]
    for b in ballots:
        piles[b[0]].append(b)
    alive = [True] * m
    eliminated: list[int] = []
    tie_broken = False
    while True:
        survivors = [c for c in range(m) if alive[c]]
        if len(survivors) == 1:
            winner = survivors[0]
            break
        leader = max(survivors, key=lambda c: len(piles[c]))
        if 2 * len(piles[leader]) > n:
            winner = leader
            break
        fewest = min(len(piles[c]) for c in survivors)
        tied = [c for c in survivors if len(piles[c]) == fewest]
        if len(tied) > 1:
            tie_broken = True
        loser = tb.worst(tied)
        alive[loser] = False
        eliminated.append(loser)
        for b in piles[loser]:
            for c in b:
                if alive[c]:
                    piles[c].append(b)
                    break
        piles[loser] = []

    rounds = len(eliminated)
    scores = [0] * m
    for r, c in enumerate(eliminated):
        scores[c] = r
    standing = [c for c in range(m) if alive[c] and c != winner]
    for c in standing:
        scores[c] = rounds
    scores[winner] = rounds + 1
    standing.sort(key=lambda c: (-len(piles[c]), tb.position[c]))
    ranking = [winner] + standing + eliminated[::-1]
    return winner, scores, tie_broken, ranking


def stv_winner(profile: Profile, tb: TieBreak) -> ElectionResult:
    winner, scores, tie_broken, _ = _stv(profile.ballots, profile.m, tb)
    return ElectionResult(winner, tuple(scores), tie_broken)


class Election:
    """A profile evaluated under one rule and tie-break.

    Holds the PSR score vector or the majority matrix of the profile, so
    :meth:`winner_with` only applies the difference made by one ballot.
    """

    def __init__(self, rule: Rule, profile: Profile, tb: TieBreak):
        rule.check(profile)
        if len(tb) != profile.m:
            raise ValueError(f"tie-break order has {len(tb)} candidates, profile has m={profile.m}")
        self.rule = rule
        self.profile = profile
        self.tb = tb
        self.m = profile.m
        self.n = profile.n
        self._ranking: list[int] | None = None
        kind = rule.kind
        if kind == "psr":
            scores = list(psr_scores(rule, profile))
        elif kind in ("copeland", "maximin"):
            self._support = majority_matrix(profile)
            if kind == "copeland":
                scores = _copeland_from_matrix(self._support, self.n)
            else:
                scores = _maximin_from_matrix(self._support)
        else:
            winner, scores, tie_broken, self._ranking = _stv(profile.ballots, self.m, tb)
            self.result = ElectionResult(winner, tuple(scores), tie_broken)
            return
        self._scores = scores
        winner = _top(scores, tb.position)
        tie_broken = scores.count(scores[winner]) > 1
        self.result = ElectionResult(winner, tuple(scores), tie_broken)

    @property
    def winner(self) -> int:
        return self.result.winner

    @property
    def scores(self) -> tuple[int, ...]:
        return self.result.scores

    def ranking(self) -> list[int]:
        """All candidates from strongest to weakest.

        Score order with tie-break for scored rules; for STV the winner, then
        the remaining survivors, then eliminated candidates in reverse order.
        """
        if self._ranking is None:
            pos = self.tb.position
            self._ranking = sorted(range(self.m), key=lambda c: (-self.scores[c], pos[c]))
        return list(self._ranking)

    def winner_with(self, agent: int, ballot: Ballot) -> int:
        """Winner if ``agent`` reported ``ballot`` and everyone else stayed put."""
        old = self.profile.ballots[agent]
        if ballot == old:
            return self.winner
        kind = self.rule.kind
        if kind == "psr":
            scores = self._scores[:]
            for s, a, b in zip(self.rule.vector, old, ballot):
                scores[a] -= s
                scores[b] += s
            return _top(scores, self.tb.position)
        if kind == "stv":
            ballots = list(self.profile.ballots)
            ballots[agent] = ballot
            return _stv(ballots, self.m, self.tb)[0]
        m = self.m
        old_pos = [0] * m
        new_pos = [0] * m
        for i in range(m):
            old_pos[old[i]] = i
            new_pos[ballot[i]] = i
        support = [row[:] for row in self._support]
        for x in range(m):
            for y in range(x + 1, m):
                was = old_pos[x] < old_pos[y]
                if was != (new_pos[x] < new_pos[y]):
                    d = -1 if was else 1
                    support[x][y] += d
                    support[y][x] -= d
        if kind == "copeland":
            scores = _copeland_from_matrix(support, self.n)
        else:
            scores = _maximin_from_matrix(support)
        return _top(scores, self.tb.position)


def winner(rule: Rule, profile: Profile, tb: TieBreak) -> ElectionResult:
    return Election(rule, profile, tb).result


def scores(rule: Rule, profile: Profile) -> tuple[int, ...]:
    """Scores of a scored rule (PSR, Copeland, Maximin)."""
    if rule.kind == "psr":
        return psr_scores(rule, profile)
    if rule.kind == "copeland":
        return copeland_scores(profile)
    if rule.kind == "maximin":
        return maximin_scores(profile)
    raise ValueError("STV has no score; use stv_winner for its elimination rounds")
