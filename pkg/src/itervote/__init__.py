"""Iterative voting with restricted manipulation moves."""

from .engine import IterationOutcome, MoveRecord, iterate
from .moves import Restriction, restriction_from_name
from .preferences import (
    Profile,
    TieBreak,
    condorcet_winner,
    generate_profile,
    generate_profile_with_condorcet_winner,
    majority_matrix,
)
from .rules import Election, ElectionResult, Rule, rule_from_name, winner

__all__ = [
    "Election",
    "ElectionResult",
    "IterationOutcome",
    "MoveRecord",
    "Profile",
    "Restriction",
    "Rule",
    "TieBreak",
    "condorcet_winner",
    "generate_profile",
    "generate_profile_with_condorcet_winner",
    "iterate",
    "majority_matrix",
    "restriction_from_name",
    "rule_from_name",
    "winner",
]
