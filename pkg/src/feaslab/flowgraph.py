"""Logical flow graphs over sequent proofs.

Nodes are formula occurrences: one per formula per sequent in the proof
tree, addressed by (path, side, index) where path is the tuple of premise
positions from the root, side is "L" or "R", and index is the position
within the antecedent or succedent.  Edges follow the checker's occurrence
accounting: ancestry for context formulas and introductions, axiom-link
across axiom leaves, cut-link between the two cut occurrences, and
contraction-merge where two occurrences collapse into one.

Cycles appear exactly where contractions share material across branches;
the cycle count is the first Betti number E - V + C of the undirected
multigraph.  Bridges are edges whose removal disconnects their component.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .kernel import Proof, analyze
from .lang import formula_str

Occ = Tuple[Tuple[int, ...], str, int]
Edge = Tuple[Occ, Occ, str]


@dataclass
class FlowGraph:
    nodes: List[Occ]
    edges: List[Edge]
    labels: Dict[Occ, str] = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def _adjacency(self):
        adj: Dict[Occ, list] = {u: [] for u in self.nodes}
        for eid, (u, v, _tag) in enumerate(self.edges):
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        return adj

    def component_count(self) -> int:
        adj = self._adjacency()
        seen = set()
        comps = 0
        for start in self.nodes:
            if start in seen:
                continue
            comps += 1
            stack = [start]
            seen.add(start)
            while stack:
                u = stack.pop()
                for v, _eid in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
        return comps

    def cycle_count(self) -> int:
        """First Betti number: independent cycles of the multigraph."""
        return self.edge_count - self.node_count + self.component_count()

    def cycle_rank_by_forest(self) -> int:
        """Independent recount: edges left out of a spanning forest."""
        adj = self._adjacency()
        seen = set()
        used_edges = set()
        tree_edges = 0
        for start in self.nodes:
            if start in seen:
                continue
            seen.add(start)
            stack = [start]
            while stack:
                u = stack.pop()
                for v, eid in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        used_edges.add(eid)
                        tree_edges += 1
                        stack.append(v)
        return self.edge_count - tree_edges

    def bridge_count(self) -> int:
        """Bridges of the multigraph (parallel edges are never bridges)."""
        adj = self._adjacency()
        disc: Dict[Occ, int] = {}
        low: Dict[Occ, int] = {}
        timer = 0
        bridges = 0
        for start in self.nodes:
            if start in disc:
                continue
            # iterative DFS; each frame remembers the edge id used to enter
            stack = [(start, -1, iter(adj[start]))]
            disc[start] = low[start] = timer
            timer += 1
            while stack:
                u, in_eid, it = stack[-1]
                advanced = False
                for v, eid in it:
                    if eid == in_eid:
                        continue
                    if v == u:
                        continue  # self-loop
                    if v not in disc:
                        disc[v] = low[v] = timer
                        timer += 1
                        stack.append((v, eid, iter(adj[v])))
                        advanced = True
                        break
                    low[u] = min(low[u], disc[v])
                if advanced:
                    continue
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[u])
                    if low[u] > disc[parent]:
                        bridges += 1
        return bridges

    def stats(self) -> dict:
        return {
            "nodes": self.node_count,
            "edges": self.edge_count,
            "components": self.component_count(),
            "cycles": self.cycle_count(),
            "bridges": self.bridge_count(),
        }


def build_flow_graph(p: Proof, theory=None) -> FlowGraph:
    """Walk the proof tree and assemble the occurrence graph.

    Shared subproofs are visited once per occurrence (path addressing), so
    the cost tracks the logical line count, not the DAG size.  Passing the
    theory tightens theory-axiom matching; without it the structural
    reading used by the checker's fallback applies.
    """
    nodes: List[Occ] = []
    labels: Dict[Occ, str] = {}
    edges: List[Edge] = []
    stack = [(p, ())]
    while stack:
        node, path = stack.pop()
        c = node.conclusion
        for side, fs in (("L", c.ant), ("R", c.succ)):
            for i, f in enumerate(fs):
                occ = (path, side, i)
                nodes.append(occ)
                labels[occ] = formula_str(f)
        local = analyze(node, theory, want_edges=True)
        for end1, end2, tag in local:
            edges.append((_to_global(end1, path), _to_global(end2, path), tag))
        for j, q in enumerate(node.premises):
            stack.append((q, path + (j,)))
    nodes.sort()
    edges.sort()
    return FlowGraph(nodes=nodes, edges=edges, labels=labels)


def _to_global(end, path) -> Occ:
    where, side, i = end
    if where == "c":
        return (path, side, i)
    return (path + (where,), side, i)


def emit_dot(g: FlowGraph, name: str = "flow") -> str:
    """Deterministic Graphviz rendering of the occurrence graph."""
    order = {occ: k for k, occ in enumerate(sorted(g.nodes))}
    out = [f"graph {name} {{"]
    out.append("  node [shape=box, fontsize=10];")
    for occ in sorted(g.nodes):
        path, side, i = occ
        loc = ".".join(str(x) for x in path) or "root"
        label = g.labels.get(occ, "")
        label = label.replace("\\", "\\\\").replace('"', '\\"')
        out.append(f'  n{order[occ]} [label="{label}\\n{loc}:{side}{i}"];')
    for u, v, tag in sorted(g.edges):
        style = {
            "ancestry": "solid",
            "axiom-link": "dashed",
            "cut-link": "bold",
            "contraction-merge": "dotted",
        }.get(tag, "solid")
        out.append(f'  n{order[u]} -- n{order[v]} [label="{tag}", style={style}];')
    out.append("}")
    return "\n".join(out) + "\n"
