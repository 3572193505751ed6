"""Candidates, ballots, profiles, pairwise majorities and impartial-culture sampling.

Candidates are the integers ``0..m-1``. A ballot is a tuple holding a
permutation of those ids, most preferred first. Profiles are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

Ballot = tuple[int, ...]
DEFAULT_ATTEMPT_CAP = 1_000_000


class ProfileFormatError(ValueError):
    """Malformed profile text; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class SamplingError(RuntimeError):
    pass


def check_ballot(ballot: Sequence[int], m: int) -> Ballot:
    ballot = tuple(int(c) for c in ballot)
    if len(ballot) != m or set(ballot) != set(range(m)):
        raise ValueError(f"ballot {ballot} is not a permutation of 0..{m - 1}")
    return ballot


@dataclass(frozen=True)
class TieBreak:
    """Fixed candidate priority; ``priority[0]`` wins every tie it is part of."""

    priority: tuple[int, ...]
    position: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        priority = check_ballot(self.priority, len(self.priority))
        position = [0] * len(priority)
        for pos, c in enumerate(priority):
            position[c] = pos
        object.__setattr__(self, "priority", priority)
        object.__setattr__(self, "position", tuple(position))

    @classmethod
    def identity(cls, m: int) -> "TieBreak":
        return cls(tuple(range(m)))

    def __len__(self):
        return len(self.priority)

    def best(self, candidates: Iterable[int]) -> int:
        return min(candidates, key=self.position.__getitem__)

    def worst(self, candidates: Iterable[int]) -> int:
        return max(candidates, key=self.position.__getitem__)


@dataclass(frozen=True)
class Profile:
    m: int
    ballots: tuple[Ballot, ...]

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"need at least 2 candidates, got m={self.m}")
        if not self.ballots:
            raise ValueError("a profile needs at least one ballot")
        ballots = tuple(check_ballot(b, self.m) for b in self.ballots)
        object.__setattr__(self, "ballots", ballots)

    @classmethod
    def from_lists(cls, ballots: Sequence[Sequence[int]]) -> "Profile":
        return cls(len(ballots[0]), tuple(tuple(b) for b in ballots))

    @property
    def n(self) -> int:
        return len(self.ballots)

    def __len__(self):
        return len(self.ballots)

    def __iter__(self) -> Iterator[Ballot]:
        return iter(self.ballots)

    def __getitem__(self, i: int) -> Ballot:
        return self.ballots[i]

    def replace(self, agent: int, ballot: Sequence[int]) -> "Profile":
        ballots = list(self.ballots)
        ballots[agent] = tuple(ballot)
        return Profile(self.m, tuple(ballots))

    def to_text(self) -> str:
        lines = [f"{self.m} {self.n}"]
        lines.extend(format_ballot(b) for b in self.ballots)
        return "\n".join(lines) + "\n"


def format_ballot(ballot: Sequence[int]) -> str:
    return " ".join(str(c) for c in ballot)


def parse_profiles(text: str) -> list[Profile]:
    """Parse one or more concatenated profiles.

    Each block is a ``m n`` header followed by ``n`` ballot lines; blank lines
    and ``#`` comments between blocks are ignored.
    """
    lines = [(i + 1, line.split("#", 1)[0].strip()) for i, line in enumerate(text.splitlines())]
    lines = [(no, line) for no, line in lines if line]
    profiles = []
    pos = 0
    while pos < len(lines):
        no, header = lines[pos]
        tokens = header.split()
        if len(tokens) != 2:
            raise ProfileFormatError(f"expected header 'm n', got {header!r}", no)
        try:
            m, n = (int(t) for t in tokens)
        except ValueError:
            raise ProfileFormatError(f"non-integer token in header {header!r}", no) from None
        if m < 2 or n < 1:
            raise ProfileFormatError(f"need m >= 2 and n >= 1, got m={m} n={n}", no)
        body = lines[pos + 1 : pos + 1 + n]
        if len(body) < n:
            raise ProfileFormatError(f"header announces {n} ballots, found {len(body)}", no)
        ballots = []
        for bno, line in body:
            try:
                ballot = tuple(int(t) for t in line.split())
            except ValueError:
                bad = next(t for t in line.split() if not t.lstrip("-").isdigit())
                raise ProfileFormatError(f"non-integer token {bad!r}", bno) from None
            try:
                ballots.append(check_ballot(ballot, m))
            except ValueError as exc:
                raise ProfileFormatError(str(exc), bno) from None
        profiles.append(Profile(m, tuple(ballots)))
        pos += 1 + n
    if not profiles:
        raise ProfileFormatError("no profile found")
    return profiles


def parse_profile(text: str) -> Profile:
    profiles = parse_profiles(text)
    if len(profiles) != 1:
        raise ProfileFormatError(f"expected exactly one profile, found {len(profiles)}")
    return profiles[0]


def majority_matrix(profile: Profile) -> list[list[int]]:
    """``support[x][y]`` = number of voters ranking x above y (diagonal is 0)."""
    m = profile.m
    support = [[0] * m for _ in range(m)]
    for ballot in profile.ballots:
        for i, x in enumerate(ballot):
            row = support[x]
            for y in ballot[i + 1 :]:
                row[y] += 1
    return support


def condorcet_winner_from_matrix(support: Sequence[Sequence[int]], n: int) -> int | None:
    m = len(support)
    for c in range(m):
        if all(2 * support[c][x] > n for x in range(m) if x != c):
            return c
    return None


def condorcet_winner(profile: Profile) -> int | None:
    return condorcet_winner_from_matrix(majority_matrix(profile), profile.n)


def profile_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for ``(seed, *key)``; the same key always yields the same stream."""
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


def generate_profile(m: int, n: int, rng: np.random.Generator) -> Profile:
    """Impartial culture: every ballot uniform over the m! orders, independently."""
    if m < 2 or n < 1:
        raise ValueError(f"need m >= 2 and n >= 1, got m={m} n={n}")
    rows = rng.permuted(np.tile(np.arange(m), (n, 1)), axis=1)
    return Profile(m, tuple(tuple(int(c) for c in row) for row in rows))


def generate_profile_with_condorcet_winner(
    m: int, n: int, rng: np.random.Generator, attempt_cap: int = DEFAULT_ATTEMPT_CAP
) -> Profile:
    for _ in range(attempt_cap):
        profile = generate_profile(m, n, rng)
        if condorcet_winner(profile) is not None:
            return profile
    raise SamplingError(f"no Condorcet winner in {attempt_cap} draws (m={m}, n={n})")
