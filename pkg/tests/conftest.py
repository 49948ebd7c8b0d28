import random

import pytest

from wordmaps.pushdown import GradedAlphabet, IteratedPushdown, parse


WORKED_GAMMA = GradedAlphabet.of(
    ["A1", "B1", "C1", "D1"],
    ["A2", "B2", "C2", "D2"],
    ["A3", "B3", "C3", "D3"],
)

WORKED_UNDET = GradedAlphabet.of(
    ["O1", "O1p"],
    ["O2", "O2p"],
    ["O3", "O3p"],
)

WORKED_SYMBOLS = set(WORKED_GAMMA.symbols) | set(WORKED_UNDET.symbols)


@pytest.fixture
def worked_gamma():
    return WORKED_GAMMA


@pytest.fixture
def worked_undet():
    return WORKED_UNDET


@pytest.fixture
def omega():
    return parse("A1[A2[A3C3]B2[D3C3]]B1[B2[B3D3]]", 3, WORKED_SYMBOLS)


def pt(text, level=3):
    """Parse a store/term over the worked example's alphabets."""
    return parse(text, level, WORKED_SYMBOLS)


def random_store(rng: random.Random, level: int, symbols="ABCD", max_width=3) -> IteratedPushdown:
    if level == 0:
        return IteratedPushdown.empty(0)
    width = rng.randrange(max_width + 1)
    entries = tuple(
        (rng.choice(symbols), random_store(rng, level - 1, symbols, max_width))
        for _ in range(width)
    )
    return IteratedPushdown(level, entries)


def random_graded_store(rng: random.Random, gamma: GradedAlphabet, level=None, max_width=3):
    k = gamma.height
    level = k if level is None else level

    def build(lv):
        if lv == 0:
            return IteratedPushdown.empty(0)
        depth_level = k - lv + 1
        pool = sorted(gamma.levels[depth_level - 1])
        width = rng.randrange(max_width + 1)
        return IteratedPushdown(
            lv, tuple((rng.choice(pool), build(lv - 1)) for _ in range(width))
        )

    return build(level)
