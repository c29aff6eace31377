"""Minimal cut sets and path sets.

The production route expands the Petri net top-down, row by row: a place
fed by several transitions splits its row into alternatives, a transition
with several inputs puts all of them into the same row. Rows are then
reduced by absorption. :func:`brute_force_cut_sets` enumerates failure
states directly and is kept as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .model import AND, Gate, PetriNet, Ref, SystemModel

CUT = "cut"
PATH = "path"
BRUTE_FORCE_LIMIT = 20


def canonical_key(s: frozenset) -> tuple:
    return (len(s), sorted(s))


def minimize(sets: Iterable[Iterable[str]]) -> list[frozenset]:
    """Drop duplicates and every set that contains another (absorption)."""
    uniq = sorted({frozenset(s) for s in sets}, key=canonical_key)
    kept: list[frozenset] = []
    for s in uniq:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


@dataclass(frozen=True)
class CutSetFamily:
    sets: tuple[frozenset, ...]
    kind: str = CUT

    def __post_init__(self):
        if self.kind not in (CUT, PATH):
            raise ValueError(f"kind must be 'cut' or 'path', got {self.kind!r}")
        if any(not s for s in self.sets):
            raise ValueError("empty set in family")
        if minimize(self.sets) != list(self.sets):
            raise ValueError("family is not a canonically ordered antichain")

    @classmethod
    def from_sets(cls, sets, kind: str = CUT) -> "CutSetFamily":
        return cls(tuple(minimize(sets)), kind)

    def __iter__(self):
        return iter(self.sets)

    def __len__(self):
        return len(self.sets)

    def as_lists(self) -> list[list[str]]:
        return [sorted(s) for s in self.sets]

    def format(self) -> str:
        return " ".join("{" + ",".join(sorted(s)) + "}" for s in self.sets)


def _expand(net: PetriNet) -> list[frozenset]:
    producers: dict = {}
    for t, p in net.output_arcs:
        producers.setdefault(p, []).append(t)
    consumes: dict = {}
    for p, t in net.input_arcs:
        consumes.setdefault(t, []).append(p)

    done = []
    rows = [frozenset([net.top])]
    seen = set(rows)
    while rows:
        row = rows.pop()
        pending = sorted(p for p in row if not net.is_leaf(p))
        if not pending:
            done.append(frozenset(net.leaf_component[p] for p in row))
            continue
        p = pending[0]
        rest = row - {p}
        for t in sorted(producers[p]):
            new = rest | frozenset(consumes[t])
            if new not in seen:
                seen.add(new)
                rows.append(new)
    return done


def minimal_cut_sets(net: PetriNet) -> CutSetFamily:
    return CutSetFamily.from_sets(_expand(net), CUT)


def minimal_path_sets(net: PetriNet) -> CutSetFamily:
    return CutSetFamily.from_sets(_expand(net.dual()), PATH)


def structure_function(m: SystemModel):
    """Compile the gate tree into ``f(failed) -> bool`` over a set of failed ids."""

    def build(node):
        if isinstance(node, Ref):
            cid = node.id
            return lambda failed: cid in failed
        parts = [build(c) for c in node.children]
        if node.kind == AND:
            return lambda failed: all(f(failed) for f in parts)
        return lambda failed: any(f(failed) for f in parts)

    return build(m.top)


def top_event_state(m: SystemModel, failed) -> bool:
    """Whether the top event occurs when exactly ``failed`` components are down."""
    failed = frozenset(failed)
    unknown = failed - set(m.ids)
    if unknown:
        raise KeyError(f"unknown component ids: {', '.join(sorted(unknown))}")
    return _eval(m.top, failed)


def _eval(node, failed) -> bool:
    if isinstance(node, Ref):
        return node.id in failed
    if node.kind == AND:
        return all(_eval(c, failed) for c in node.children)
    return any(_eval(c, failed) for c in node.children)


def brute_force_cut_sets(m: SystemModel) -> CutSetFamily:
    """Minimal cut sets by enumerating all ``2**n`` failure states."""
    ids = sorted(m.ids)
    if len(ids) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_LIMIT} components, model has {len(ids)}")
    f = structure_function(m)
    found: list[frozenset] = []
    # increasing cardinality: a failing state is minimal iff it contains no smaller one
    for k in range(1, len(ids) + 1):
        for combo in combinations(ids, k):
            s = frozenset(combo)
            if any(c <= s for c in found):
                continue
            if f(s):
                found.append(s)
    return CutSetFamily.from_sets(found, CUT)


def brute_force_path_sets(m: SystemModel) -> CutSetFamily:
    """Minimal path sets: smallest working sets that keep the top event from occurring."""
    ids = sorted(m.ids)
    if len(ids) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_LIMIT} components, model has {len(ids)}")
    f = structure_function(m)
    everything = frozenset(ids)
    found: list[frozenset] = []
    for k in range(1, len(ids) + 1):
        for combo in combinations(ids, k):
            s = frozenset(combo)
            if any(c <= s for c in found):
                continue
            if not f(everything - s):
                found.append(s)
    return CutSetFamily.from_sets(found, PATH)
