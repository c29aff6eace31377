import random

import pytest

from fuzzyrel.cli import builtin_path
from fuzzyrel.model import AND, OR, Component, Gate, Ref, SystemModel, load_model

ROBOT_PATH = builtin_path("robot")
REFERENCE_PATH = builtin_path("robot_reference")


@pytest.fixture(scope="session")
def robot():
    return load_model(ROBOT_PATH)


def leaf(cid, lam=0.01, tau=2.0):
    return Component(cid, lam, tau)


def make(top, **rates):
    """Model over every id referenced in ``top``; ``rates`` maps id -> (lam, tau)."""
    ids = []

    def walk(n):
        if isinstance(n, Ref):
            if n.id not in ids:
                ids.append(n.id)
        else:
            for c in n.children:
                walk(c)

    walk(top)
    return SystemModel(tuple(Component(i, *rates.get(i, (0.01, 2.0))) for i in ids), top)


def g(kind, *children):
    return Gate(kind, tuple(Ref(c) if isinstance(c, str) else c for c in children))


def random_model(seed: int, max_components: int = 12, repeats: bool = True) -> SystemModel:
    """Random mixed AND/OR tree, arities 1..4, occasionally reusing a component."""
    rng = random.Random(seed)
    n = rng.randint(1, max_components)
    ids = [f"c{i}" for i in range(n)]

    def build(group, depth):
        if len(group) == 1 and (depth > 0 and rng.random() < 0.7):
            return Ref(group[0])
        if len(group) == 1:
            return Gate(rng.choice((AND, OR)), (Ref(group[0]),))
        k = rng.randint(1, min(4, len(group)))
        if k == 1:
            return Gate(rng.choice((AND, OR)), (build(group, depth + 1),))
        rng.shuffle(group)
        cuts = sorted(rng.sample(range(1, len(group)), k - 1))
        parts = [group[a:b] for a, b in zip([0] + cuts, cuts + [len(group)])]
        if repeats and rng.random() < 0.2:
            parts[rng.randrange(k)].append(rng.choice(ids))
        return Gate(rng.choice((AND, OR)), tuple(build(list(p), depth + 1) for p in parts))

    top = build(list(ids), 0)
    if isinstance(top, Ref):
        top = Gate(OR, (top,))
    comps = tuple(Component(i, rng.uniform(1e-4, 1e-1), rng.uniform(0.5, 20.0)) for i in ids)
    return SystemModel(comps, top)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
