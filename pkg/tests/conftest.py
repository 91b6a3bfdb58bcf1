import pytest

from mannerctc.alphabet import CHAR_ALPHABET, MANNER_ALPHABET
from mannerctc.ctc import PosteriorMatrix

from helpers import label_rows


@pytest.fixture
def fig3_pair():
    """Character/manner posteriors shaped like the five-peak worked example.

    Character labels follow the C1..C29 numbering: C1 = '<', C3 = 'B',
    C4 = 'C', C9 = 'H', C10 = 'I', C29 = '>'.  Peaks 1 and 5 are blank
    dominated in the character stream but non-blank in the manner stream.
    """
    B = "<"
    char = [
        {B: 0.9},
        {B: 0.6, "B": 0.3},            # peak 1: blank wins, B second
        {B: 0.55, "B": 0.35},
        {B: 0.6, "D": 0.3},            # per-frame second choice differs; B wins by frequency
        {B: 0.9},
        {"C": 0.7, B: 0.2},            # peak 2
        {"C": 0.8},
        {B: 0.9},
        {">": 0.8},                    # peak 3: space
        {B: 0.9},
        {"I": 0.8},                    # peak 4
        {"I": 0.7, B: 0.2},
        {B: 0.9},
        {B: 0.6, "H": 0.3},            # peak 5: blank wins, H second
        {B: 0.6, "H": 0.35},
        {B: 0.9},
    ]
    manner = [
        {B: 0.9},
        {"S": 0.8}, {"S": 0.8}, {"S": 0.7},
        {B: 0.9},
        {"S": 0.8}, {"S": 0.8},
        {B: 0.9},
        {">": 0.8},
        {B: 0.9},
        {"V": 0.8}, {"V": 0.8},
        {B: 0.9},
        {"F": 0.7}, {"F": 0.8},
        {B: 0.9},
    ]
    Pc = PosteriorMatrix(label_rows(char, CHAR_ALPHABET), CHAR_ALPHABET)
    Pm = PosteriorMatrix(label_rows(manner, MANNER_ALPHABET), MANNER_ALPHABET)
    return Pm, Pc


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
