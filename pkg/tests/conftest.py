import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
sys.path.insert(0, str(TESTS_DIR))

from ludelab.corpus import corpus_entry  # noqa: E402
from ludelab.game import compile_game  # noqa: E402
from ludelab.sexpr import parse  # noqa: E402
from ludelab.validate import validate  # noqa: E402

FIXTURES = TESTS_DIR / "fixtures"
GOLDEN = TESTS_DIR / "golden"

TABLE_I_TEXT = """\
(game Tic-Tac-Toe
    (players White Black)
    (equipment
        (board (square 3) diagonals)
    )
    (rules
        (play (add (piece Own) (board Empty)))
        (end (win All (line 3 Own Any)))
    )
)
"""


def load_fixture(name: str, partial: bool = False):
    text = (FIXTURES / f"{name}.lud").read_text(encoding="utf-8")
    return validate(parse(text), partial=partial)


def corpus_game(name: str):
    return compile_game(corpus_entry(name).description)


@pytest.fixture(scope="session")
def ttt():
    return corpus_game("Tic-Tac-Toe")


@pytest.fixture(scope="session")
def mutorere():
    return corpus_game("Mu-Torere")


@pytest.fixture(scope="session")
def mutorere_free():
    return corpus_game("Mu-Torere-Free")


@pytest.fixture(scope="session")
def hex5():
    return corpus_game("Hex-5")


@pytest.fixture(scope="session")
def roundmerels():
    return corpus_game("Round-Merels")


@pytest.fixture(scope="session")
def tafl7():
    return corpus_game("Tafl-7")


@pytest.fixture(scope="session")
def coinflip():
    return compile_game(load_fixture("coinflip"))


@pytest.fixture(scope="session")
def lockstep():
    return compile_game(load_fixture("lockstep"))


@pytest.fixture(scope="session")
def onecell():
    return compile_game(load_fixture("onecell"))


@pytest.fixture(scope="session")
def custodial3():
    return compile_game(load_fixture("custodial3"))


def golden_check(name: str, text: str) -> None:
    """Compare against a frozen golden file; first run (or
    UPDATE_GOLDEN=1) writes the file so it can be reviewed and committed."""
    import os

    path = GOLDEN / name
    if os.environ.get("UPDATE_GOLDEN") == "1" or not path.exists():
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return
    assert text == path.read_text(encoding="utf-8"), f"golden mismatch: {name}"
