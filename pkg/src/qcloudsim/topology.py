"""Qubit connectivity graphs and greedy SWAP routing."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

from .circuit import Circuit, Instruction, gate

PRESETS = ("ionq-11", "ibm-melbourne-15", "ibm-vigo-5", "rigetti-aspen8-31")


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class TopologyGraph:
    name: str
    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        edges = set()
        for a, b in self.edges:
            if a == b:
                raise TopologyError(f"self-loop on qubit {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise TopologyError(f"edge ({a}, {b}) outside 0..{self.n - 1}")
            edges.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(edges))
        if self.n > 1 and len(self._reachable(0)) != self.n:
            raise TopologyError(f"topology {self.name!r} is not connected")

    @cached_property
    def neighbors(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def _reachable(self, start: int) -> set[int]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen, todo = {start}, [start]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def _check(self, *qubits: int):
        for q in qubits:
            if not 0 <= q < self.n:
                raise TopologyError(f"qubit {q} out of range for {self.name} ({self.n} qubits)")


def is_adjacent(g: TopologyGraph, a: int, b: int) -> bool:
    g._check(a, b)
    return (min(a, b), max(a, b)) in g.edges


def max_degree(g: TopologyGraph) -> int:
    return max((g.degree(v) for v in range(g.n)), default=0)


def bfs_distances(g: TopologyGraph, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in g.neighbors[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def shortest_path(g: TopologyGraph, a: int, b: int) -> list[int]:
    """Minimal path a..b; ties go to the lexicographically smallest sequence."""
    g._check(a, b)
    if a == b:
        raise TopologyError("shortest_path needs distinct endpoints")
    dist = bfs_distances(g, b)
    path = [a]
    while path[-1] != b:
        here = path[-1]
        path.append(min(w for w in g.neighbors[here] if dist.get(w) == dist[here] - 1))
    return path


def parse_topology(text: str) -> TopologyGraph:
    name, n, edges = None, None, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "name":
            name = " ".join(rest)
        elif head == "qubits":
            n = int(rest[0])
        elif head == "edge" and len(rest) == 2:
            edges.append((int(rest[0]), int(rest[1])))
        else:
            raise TopologyError(f"line {lineno}: cannot parse {raw!r}")
    if name is None or n is None:
        raise TopologyError("topology file needs 'name' and 'qubits' headers")
    return TopologyGraph(name, n, frozenset(edges))


def dumps_topology(g: TopologyGraph) -> str:
    lines = [f"name {g.name}", f"qubits {g.n}"]
    lines += [f"edge {a} {b}" for a, b in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def load_topology(path: str | Path) -> TopologyGraph:
    return parse_topology(Path(path).read_text())


def preset(name: str) -> TopologyGraph:
    try:
        text = resources.files("qcloudsim.data.topologies").joinpath(f"{name}.txt").read_text()
    except FileNotFoundError:
        raise TopologyError(f"unknown topology {name!r}; presets: {', '.join(PRESETS)}") from None
    return parse_topology(text)


def identity_placement(n: int) -> dict[int, int]:
    return {q: q for q in range(n)}


def hub_placement(g: TopologyGraph, n: int, hub: int) -> dict[int, int]:
    """Put logical qubit ``hub`` on a maximum-degree vertex and fill the
    remaining logical qubits outward in breadth-first order."""
    if n > g.n:
        raise TopologyError(f"{n} qubits do not fit on {g.name} ({g.n} qubits)")
    centre = min(range(g.n), key=lambda v: (-g.degree(v), v))
    dist = bfs_distances(g, centre)
    order = sorted((v for v in dist if v != centre), key=lambda v: (dist[v], v))
    others = [q for q in range(n) if q != hub]
    placement = {hub: centre}
    placement.update(zip(others, order))
    return placement


def route(c: Circuit, g: TopologyGraph, placement: dict[int, int] | None = None
          ) -> tuple[Circuit, dict[int, int]]:
    """Rewrite ``c`` onto physical qubits of ``g`` so every two-qubit gate is
    on an edge.

    A distant first operand is walked along the shortest path with SWAPs until
    it sits next to the second operand. The mapping is not restored; the
    returned mapping is the final logical -> physical placement and measured
    qubits are re-pointed accordingly.
    """
    if c.n_qubits > g.n:
        raise TopologyError(f"circuit has {c.n_qubits} qubits but {g.name} has {g.n}")
    l2p = dict(identity_placement(c.n_qubits) if placement is None else placement)
    if sorted(l2p) != list(range(c.n_qubits)) or len(set(l2p.values())) != len(l2p):
        raise TopologyError("placement must map every logical qubit to a distinct physical qubit")
    g._check(*l2p.values())
    p2l = {p: q for q, p in l2p.items()}
    start = dict(l2p)
    out: list[Instruction] = []
    for inst in c.instructions:
        if inst.arity == 2:
            a, b = inst.operands
            if not is_adjacent(g, l2p[a], l2p[b]):
                path = shortest_path(g, l2p[a], l2p[b])
                for u, v in zip(path[:-2], path[1:-1]):
                    out.append(gate("SWAP", u, v))
                    lu, lv = p2l.pop(u, None), p2l.pop(v, None)
                    if lu is not None:
                        p2l[v], l2p[lu] = lu, v
                    if lv is not None:
                        p2l[u], l2p[lv] = lv, u
        out.append(Instruction(inst.kind, tuple(l2p[q] for q in inst.operands), inst.params))
    routed = Circuit(
        g.n,
        tuple(out),
        tuple(l2p[q] for q in c.measured),
        frozenset(start[q] for q in c.initial_ones),
        frozenset(l2p[q] for q in c.complemented),
    )
    return routed, l2p


def swap_count(c: Circuit) -> int:
    return sum(1 for inst in c.instructions if inst.kind.value == "SWAP")


def compact(c: Circuit) -> tuple[Circuit, tuple[int, ...]]:
    """Drop untouched qubits. Returns the relabelled circuit and, for each new
    index, the original qubit it came from."""
    used = set(c.measured) | set(c.initial_ones) | set(c.complemented)
    for inst in c.instructions:
        used.update(inst.operands)
    layout = tuple(sorted(used)) or (0,)
    index = {p: i for i, p in enumerate(layout)}
    relabel = lambda qs: tuple(index[q] for q in qs)  # noqa: E731
    small = Circuit(
        len(layout),
        tuple(Instruction(i.kind, relabel(i.operands), i.params) for i in c.instructions),
        relabel(c.measured),
        frozenset(relabel(c.initial_ones)),
        frozenset(relabel(c.complemented)),
    )
    return small, layout
