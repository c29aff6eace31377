"""System models: components, AND/OR gate trees and their Petri-net view.

Model files are JSON::

    {
      "components": [{"id": "S1", "lambda": 0.000182, "tau": 3}, ...],
      "system": {"gate": "OR", "children": [{"ref": "S1"}, ...]}
    }

A bare ``{"ref": ...}`` at the top level is wrapped in an arity-1 OR gate,
so ``SystemModel.top`` is always a gate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Union

AND = "AND"
OR = "OR"
GATE_KINDS = (AND, OR)


class ModelError(ValueError):
    """Invalid model file or model structure. ``location`` names the offending node."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


@dataclass(frozen=True)
class Component:
    id: str
    lam: float
    tau: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ModelError(f"failure rate must be positive, got {self.lam!r}", self.id)
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ModelError(f"repair time must be positive, got {self.tau!r}", self.id)

    @property
    def mu(self) -> float:
        return 1.0 / self.tau


@dataclass(frozen=True)
class Ref:
    id: str


@dataclass(frozen=True)
class Gate:
    kind: str
    children: tuple[Union["Gate", Ref], ...]

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ModelError(f"unknown gate kind {self.kind!r}")
        if not self.children:
            raise ModelError("gate with no children")


Node = Union[Gate, Ref]


def iter_refs(node: Node) -> Iterator[str]:
    if isinstance(node, Ref):
        yield node.id
    else:
        for child in node.children:
            yield from iter_refs(child)


def iter_gates(node: Node) -> Iterator[Gate]:
    if isinstance(node, Gate):
        yield node
        for child in node.children:
            yield from iter_gates(child)


@dataclass(frozen=True)
class SystemModel:
    components: tuple[Component, ...]
    top: Gate
    _by_id: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        by_id = {}
        for c in self.components:
            if c.id in by_id:
                raise ModelError(f"duplicate component id {c.id!r}")
            by_id[c.id] = c
        if not isinstance(self.top, Gate):
            raise ModelError("top node must be a gate")
        used = set()
        for rid in iter_refs(self.top):
            if rid not in by_id:
                raise ModelError(f"reference to undeclared component {rid!r}")
            used.add(rid)
        unused = [c.id for c in self.components if c.id not in used]
        if unused:
            raise ModelError(f"components not reachable from the top event: {', '.join(unused)}")
        object.__setattr__(self, "_by_id", by_id)

    def __getitem__(self, cid: str) -> Component:
        return self._by_id[cid]

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)

    @property
    def gate_count(self) -> int:
        return sum(1 for _ in iter_gates(self.top))


def dual(m: SystemModel) -> SystemModel:
    """Same model with every AND swapped for OR and vice versa."""

    def flip(node: Node) -> Node:
        if isinstance(node, Ref):
            return node
        return Gate(OR if node.kind == AND else AND, tuple(flip(c) for c in node.children))

    return SystemModel(m.components, flip(m.top))


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelError(f"expected a number, got {json.dumps(value)}", where)
    return float(value)


def _parse_node(obj, where: str) -> Node:
    if not isinstance(obj, dict):
        raise ModelError("node must be an object", where)
    if "ref" in obj:
        extra = set(obj) - {"ref"}
        if extra:
            raise ModelError(f"unexpected keys {sorted(extra)} in reference node", where)
        if not isinstance(obj["ref"], str):
            raise ModelError("reference must be a string", where)
        return Ref(obj["ref"])
    if "gate" in obj:
        extra = set(obj) - {"gate", "children"}
        if extra:
            raise ModelError(f"unexpected keys {sorted(extra)} in gate node", where)
        kind = obj["gate"]
        if kind not in GATE_KINDS:
            raise ModelError(f"gate must be AND or OR, got {json.dumps(kind)}", where)
        children = obj.get("children")
        if not isinstance(children, list):
            raise ModelError("gate needs a children list", where)
        if not children:
            raise ModelError("empty children list", where)
        return Gate(kind, tuple(_parse_node(c, f"{where}.children[{i}]") for i, c in enumerate(children)))
    raise ModelError("node needs either 'ref' or 'gate'", where)


def model_from_dict(doc) -> SystemModel:
    if not isinstance(doc, dict):
        raise ModelError("model must be a JSON object", "$")
    for key in ("components", "system"):
        if key not in doc:
            raise ModelError(f"missing key {key!r}", "$")
    comps_doc = doc["components"]
    if not isinstance(comps_doc, list):
        raise ModelError("components must be a list", "components")
    comps = []
    seen = set()
    for i, c in enumerate(comps_doc):
        where = f"components[{i}]"
        if not isinstance(c, dict):
            raise ModelError("component must be an object", where)
        for key in ("id", "lambda", "tau"):
            if key not in c:
                raise ModelError(f"missing key {key!r}", where)
        cid = c["id"]
        if not isinstance(cid, str) or not cid:
            raise ModelError("id must be a nonempty string", f"{where}.id")
        if cid in seen:
            raise ModelError(f"duplicate component id {cid!r}", f"{where}.id")
        seen.add(cid)
        lam = _number(c["lambda"], f"{where}.lambda")
        tau = _number(c["tau"], f"{where}.tau")
        if not (math.isfinite(lam) and lam > 0):
            raise ModelError(f"lambda must be positive, got {c['lambda']!r}", f"{where}.lambda")
        if not (math.isfinite(tau) and tau > 0):
            raise ModelError(f"tau must be positive, got {c['tau']!r}", f"{where}.tau")
        comps.append(Component(cid, lam, tau))

    top = _parse_node(doc["system"], "system")
    for gate_path, rid in _refs_with_paths(top, "system"):
        if rid not in seen:
            raise ModelError(f"reference to undeclared component {rid!r}", gate_path)
    if isinstance(top, Ref):
        top = Gate(OR, (top,))
    try:
        return SystemModel(tuple(comps), top)
    except ModelError as exc:
        raise ModelError(str(exc), "$") from None


def _refs_with_paths(node: Node, where: str):
    if isinstance(node, Ref):
        yield where, node.id
    else:
        for i, c in enumerate(node.children):
            yield from _refs_with_paths(c, f"{where}.children[{i}]")


def parse_model(text) -> SystemModel:
    """Parse and validate a model file's contents (``bytes`` or ``str``)."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ModelError(f"not valid UTF-8 ({exc.reason})", f"byte {exc.start}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return model_from_dict(doc)


def load_model(path) -> SystemModel:
    return parse_model(Path(path).read_bytes())


def model_to_dict(m: SystemModel) -> dict:
    def node(n: Node):
        if isinstance(n, Ref):
            return {"ref": n.id}
        return {"gate": n.kind, "children": [node(c) for c in n.children]}

    return {
        "components": [{"id": c.id, "lambda": c.lam, "tau": c.tau} for c in m.components],
        "system": node(m.top),
    }


def serialize_model(m: SystemModel) -> bytes:
    return (json.dumps(model_to_dict(m), indent=2) + "\n").encode("utf-8")


@dataclass(frozen=True)
class PetriNet:
    """Static place/transition structure equivalent to a gate tree.

    Each gate output and each component is a place. An AND gate is one
    transition consuming every child place; an OR gate is one transition per
    child. ``input_arcs`` holds (place, transition) pairs and
    ``output_arcs`` (transition, place) pairs.
    """

    places: frozenset
    transitions: frozenset
    input_arcs: frozenset
    output_arcs: frozenset
    top: str
    leaf_component: dict = field(compare=False, hash=False)

    def inputs(self, transition: str) -> tuple[str, ...]:
        return tuple(sorted(p for p, t in self.input_arcs if t == transition))

    def producers(self, place: str) -> tuple[str, ...]:
        """Transitions that output into ``place``."""
        return tuple(sorted(t for t, p in self.output_arcs if p == place))

    def is_leaf(self, place: str) -> bool:
        return place in self.leaf_component

    def dual(self) -> "PetriNet":
        """Net of the dual structure (conjunction and alternatives exchanged)."""
        producers = _index(self.output_arcs, key=1, val=0)
        consumes = _index(self.input_arcs, key=1, val=0)
        places = set(self.places)
        transitions, ins, outs = set(), set(), set()
        names = _Namer(places | set(self.transitions))

        def add_transition(inputs, out):
            t = names.fresh("t")
            transitions.add(t)
            outs.add((t, out))
            ins.update((q, t) for q in inputs)

        for p in sorted(self.places):
            ts = sorted(producers.get(p, ()))
            if not ts:
                continue
            if len(ts) == 1:
                # conjunction of inputs becomes alternatives
                for q in sorted(consumes[ts[0]]):
                    add_transition([q], p)
                continue
            branches = []
            for t in ts:
                qs = sorted(consumes[t])
                if len(qs) == 1:
                    branches.append(qs[0])
                else:
                    mid = names.fresh("p")
                    places.add(mid)
                    for q in qs:
                        add_transition([q], mid)
                    branches.append(mid)
            add_transition(branches, p)
        return PetriNet(
            frozenset(places),
            frozenset(transitions),
            frozenset(ins),
            frozenset(outs),
            self.top,
            dict(self.leaf_component),
        )


def _index(arcs, key: int, val: int) -> dict:
    out: dict = {}
    for arc in arcs:
        out.setdefault(arc[key], set()).add(arc[val])
    return out


class _Namer:
    def __init__(self, taken):
        self.taken = set(taken)
        self.counters: dict = {}

    def fresh(self, prefix: str) -> str:
        while True:
            n = self.counters.get(prefix, 0)
            self.counters[prefix] = n + 1
            name = f"{prefix}{n}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def to_petri_net(m: SystemModel) -> PetriNet:
    names = _Namer(m.ids)
    places = set(m.ids)
    transitions, ins, outs = set(), set(), set()

    def visit(node: Node) -> str:
        if isinstance(node, Ref):
            return node.id
        p = names.fresh("G")
        places.add(p)
        child_places = [visit(c) for c in node.children]
        if node.kind == AND:
            t = names.fresh("t")
            transitions.add(t)
            outs.add((t, p))
            ins.update((q, t) for q in child_places)
        else:
            for q in child_places:
                t = names.fresh("t")
                transitions.add(t)
                outs.add((t, p))
                ins.add((q, t))
        return p

    top = visit(m.top)
    return PetriNet(
        frozenset(places),
        frozenset(transitions),
        frozenset(ins),
        frozenset(outs),
        top,
        {cid: cid for cid in m.ids},
    )
