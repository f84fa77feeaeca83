import pathlib

import pytest

from rafkit.parsing import parse_raf

INSTANCE_DIR = pathlib.Path(__file__).resolve().parent.parent / "instances"


def load_raf(name):
    return parse_raf((INSTANCE_DIR / name).read_text())


@pytest.fixture
def conference():
    return load_raf("conference.raf")


@pytest.fixture
def research_week():
    return load_raf("research_week.raf")


@pytest.fixture
def nonmonotonic():
    return load_raf("nonmonotonic.raf")


@pytest.fixture
def no_stable():
    return load_raf("no_stable.raf")
