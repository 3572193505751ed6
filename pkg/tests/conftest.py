import hypothesis
import pytest
from hypothesis import strategies as st

from itervote import Profile, TieBreak

hypothesis.settings.register_profile("ci", max_examples=300, deadline=None)
hypothesis.settings.register_profile("dev", max_examples=60, deadline=None)
hypothesis.settings.load_profile("dev")

# profiles used throughout: A has a Condorcet winner but plurality misses it,
# B is unanimous, C is the 3-cycle
P_A = [[0, 1, 2], [0, 1, 2], [1, 0, 2], [1, 0, 2], [2, 1, 0]]
P_B = [[0, 1, 2]] * 5
P_C = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]


@pytest.fixture
def pa():
    return Profile.from_lists(P_A)


@pytest.fixture
def pb():
    return Profile.from_lists(P_B)


@pytest.fixture
def pc():
    return Profile.from_lists(P_C)


@pytest.fixture
def tb3():
    return TieBreak.identity(3)


@st.composite
def profiles(draw, min_m=2, max_m=5, min_n=1, max_n=9):
    m = draw(st.integers(min_m, max_m))
    n = draw(st.integers(min_n, max_n))
    ballots = draw(st.lists(st.permutations(range(m)), min_size=n, max_size=n))
    return Profile(m, tuple(tuple(b) for b in ballots))


@st.composite
def profiles_with_tb(draw, **kwargs):
    profile = draw(profiles(**kwargs))
    return profile, TieBreak(tuple(draw(st.permutations(range(profile.m)))))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
