import pytest

from edgegroups.sgraph import build_graph


@pytest.fixture
def se():
    """Single non-loop edge e: u -> v."""
    return build_graph(["u", "v"], [("e", "u", "v")])


@pytest.fixture
def sl():
    """Single loop edge e at u."""
    return build_graph(["u"], [("e", "u", "u")])


@pytest.fixture
def p2():
    """Two-edge path a: u -> v, b: v -> w."""
    return build_graph(["u", "v", "w"], [("a", "u", "v"), ("b", "v", "w")])


@pytest.fixture
def p2_symmetric():
    """Two-edge path with both edges oriented into the middle vertex,
    so that swapping the outer vertices is an oriented automorphism."""
    return build_graph(["u", "v", "w"], [("a", "u", "v"), ("b", "w", "v")])


@pytest.fixture
def triangle():
    return build_graph(
        ["x", "y", "z"],
        [("a", "x", "y"), ("b", "y", "z"), ("c", "z", "x")],
    )


def make_word(text):
    """Words like "a b a' c" with a trailing apostrophe for inverses."""
    out = []
    for tok in text.split():
        if tok.endswith("'"):
            out.append((tok[:-1], -1))
        else:
            out.append((tok, 1))
    return tuple(out)


@pytest.fixture
def w():
    return make_word
