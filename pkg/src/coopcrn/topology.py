"""Cooperative CRN topology, fixed PU routes and schedule feasibility.

Links are addressed by a single vertex index over the concatenated list
``relay_links + su_links``; vertex ``i < n_relay`` is relay link ``i``,
vertex ``n_relay + j`` is the SU link owned by ``su_links[j]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Hashable, Sequence

import numpy as np

DEFAULT_ENUMERATION_CAP = 20


class EnumerationCapError(ValueError):
    """Raised when exact enumeration of feasible schedules is refused."""


@dataclass(frozen=True)
class CrnTopology:
    su_nodes: tuple
    pu_source: Hashable
    pu_dest: Hashable
    relay_links: tuple  # ((u, v), ...)
    su_links: tuple  # (l, ...) one SU link (l, l') per secondary node
    conflict_edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "su_nodes", tuple(self.su_nodes))
        object.__setattr__(self, "relay_links", tuple(tuple(e) for e in self.relay_links))
        object.__setattr__(self, "su_links", tuple(self.su_links))
        edges = frozenset(tuple(sorted((int(i), int(j)))) if i != j else (int(i), int(j))
                          for i, j in self.conflict_edges)
        object.__setattr__(self, "conflict_edges", edges)

    @property
    def n_relay(self) -> int:
        return len(self.relay_links)

    @property
    def n_su(self) -> int:
        return len(self.su_links)

    @property
    def n_vertices(self) -> int:
        return self.n_relay + self.n_su

    @cached_property
    def pu_nodes(self) -> tuple:
        """Nodes holding a PU queue: s_P first, then the secondary nodes."""
        return (self.pu_source,) + self.su_nodes

    @cached_property
    def node_index(self) -> dict:
        """PU queue index per node; d_P maps to ``len(pu_nodes)`` (always empty)."""
        idx = {n: i for i, n in enumerate(self.pu_nodes)}
        idx[self.pu_dest] = len(self.pu_nodes)
        return idx

    @cached_property
    def su_index(self) -> dict:
        return {l: j for j, l in enumerate(self.su_links)}

    @cached_property
    def link_index(self) -> dict:
        return {e: i for i, e in enumerate(self.relay_links)}

    @cached_property
    def relay_src(self) -> np.ndarray:
        return np.array([self.node_index[u] for u, _ in self.relay_links], dtype=np.intp)

    @cached_property
    def relay_dst(self) -> np.ndarray:
        return np.array([self.node_index[v] for _, v in self.relay_links], dtype=np.intp)

    @cached_property
    def transceiver_groups(self) -> tuple:
        """Vertex groups of which at most one member may be active.

        One group per node other than s_P (incoming relay, outgoing relay and
        its SU link), plus the outgoing relay links of s_P.
        """
        groups = []
        for n in (self.pu_source,) + self.su_nodes + (self.pu_dest,):
            members = [i for i, (u, v) in enumerate(self.relay_links)
                       if v == n or u == n]
            if n in self.su_index:
                members.append(self.n_relay + self.su_index[n])
            if len(members) > 1:
                groups.append(tuple(members))
        return tuple(groups)

    @cached_property
    def exclusion_matrix(self) -> np.ndarray:
        """Symmetric boolean matrix: vertices that may not be active together."""
        nv = self.n_vertices
        adj = np.zeros((nv, nv), dtype=bool)
        for i, j in self.conflict_edges:
            if i != j and i < nv and j < nv:
                adj[i, j] = adj[j, i] = True
        for g in self.transceiver_groups:
            for a in g:
                for b in g:
                    if a != b:
                        adj[a, b] = True
        return adj

    @cached_property
    def units(self) -> "UnitGraph":
        """Link-level decision units (inelastic scheduling)."""
        labels = [("relay", e) for e in self.relay_links] + [("su", l) for l in self.su_links]
        return UnitGraph(self.exclusion_matrix, n_su=self.n_su, labels=tuple(labels),
                         unit_link=np.arange(self.n_vertices))

    @classmethod
    def from_dict(cls, doc: dict) -> "CrnTopology":
        nodes = list(doc["nodes"])
        src = doc.get("pu_source", nodes[0] if nodes else None)
        dst = doc.get("pu_dest", nodes[-1] if nodes else None)
        su = tuple(n for n in nodes if n != src and n != dst)
        return cls(
            su_nodes=su,
            pu_source=src,
            pu_dest=dst,
            relay_links=tuple(tuple(e) for e in doc["relay_links"]),
            su_links=tuple(doc.get("su_links", su)),
            conflict_edges=frozenset(tuple(e) for e in doc.get("conflict_edges", [])),
        )

    def to_dict(self) -> dict:
        return {
            "nodes": [self.pu_source, *self.su_nodes, self.pu_dest],
            "pu_source": self.pu_source,
            "pu_dest": self.pu_dest,
            "relay_links": [list(e) for e in self.relay_links],
            "su_links": list(self.su_links),
            "conflict_edges": sorted(list(e) for e in self.conflict_edges),
        }


@dataclass(frozen=True)
class RouteSet:
    routes: tuple  # node sequences (v^0 = s_P, ..., v^{H+1} = d_P)

    def __post_init__(self):
        object.__setattr__(self, "routes", tuple(tuple(r) for r in self.routes))

    @property
    def K(self) -> int:
        return len(self.routes)

    @property
    def hop_counts(self) -> tuple:
        """H_k per route (number of relaying SUs; the route has H_k + 1 hops)."""
        return tuple(len(r) - 2 for r in self.routes)


@dataclass(frozen=True, eq=False)
class UnitGraph:
    """Decision units with pairwise exclusions.

    The last ``n_su`` units are SU links; the rest are relay links or route
    hops.  ``unit_link`` maps each unit to its physical vertex.
    """
    exclusion: np.ndarray
    n_su: int
    labels: tuple
    unit_link: np.ndarray

    @property
    def n_units(self) -> int:
        return self.exclusion.shape[0]

    @property
    def n_pu_units(self) -> int:
        return self.n_units - self.n_su

    @cached_property
    def max_degree(self) -> int:
        return int(self.exclusion.sum(axis=1).max()) if self.n_units else 0

    def is_independent(self, active) -> bool:
        a = np.asarray(active, dtype=bool)
        if a.shape != (self.n_units,):
            raise ValueError(f"activation has shape {a.shape}, expected ({self.n_units},)")
        idx = np.flatnonzero(a)
        return not self.exclusion[np.ix_(idx, idx)].any()

    def enumerate(self, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
        """All independent unit sets as rows of a bool matrix, lexicographic order."""
        n = self.n_units
        if n > cap:
            raise EnumerationCapError(
                f"{n} decision units exceed the enumeration cap of {cap}; "
                "use the greedy (gmm) scheduler instead")
        return _independent_sets(self.exclusion.tobytes(), n)

    @cached_property
    def feasible(self) -> np.ndarray:
        return self.enumerate(max(DEFAULT_ENUMERATION_CAP, self.n_units))

    @cached_property
    def feasible_float(self) -> np.ndarray:
        return self.feasible.astype(float)


@lru_cache(maxsize=64)
def _independent_sets(adj_bytes: bytes, n: int) -> np.ndarray:
    adj = np.frombuffer(adj_bytes, dtype=bool).reshape(n, n) if n else np.zeros((0, 0), bool)
    nbr = [int(sum(1 << j for j in np.flatnonzero(adj[i]))) for i in range(n)]
    rows: list[int] = []

    # bit i of a mask <-> unit i; exclude-before-include gives ascending
    # lexicographic order with unit 0 most significant
    def rec(i: int, chosen: int, blocked: int):
        if i == n:
            rows.append(chosen)
            return
        rec(i + 1, chosen, blocked)
        if not (blocked >> i) & 1:
            rec(i + 1, chosen | (1 << i), blocked | nbr[i])

    rec(0, 0, 0)
    out = np.zeros((len(rows), n), dtype=bool)
    for r, mask in enumerate(rows):
        for i in range(n):
            if (mask >> i) & 1:
                out[r, i] = True
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class HopLayout:
    """Flattened per-route hop queues U_m^k and their decision-unit graph.

    Hop unit ``h`` is hop ``m`` of route ``k`` (link v_k^m -> v_k^{m+1}) and
    also indexes the queue U_m^k held at v_k^m.
    """
    hop_route: np.ndarray
    hop_pos: np.ndarray
    hop_link: np.ndarray
    first_hop: np.ndarray  # per route
    last_hop: np.ndarray  # per route
    membership: np.ndarray  # K x N, SU l is an interior node of route k
    units: UnitGraph

    @property
    def n_hops(self) -> int:
        return len(self.hop_link)


@lru_cache(maxsize=64)
def hop_layout(topo: CrnTopology, routes: RouteSet) -> HopLayout:
    hop_route, hop_pos, hop_link, labels = [], [], [], []
    first, last = [], []
    member = np.zeros((routes.K, topo.n_su), dtype=float)
    for k, path in enumerate(routes.routes):
        first.append(len(hop_link))
        for m in range(len(path) - 1):
            e = (path[m], path[m + 1])
            if e not in topo.link_index:
                raise ValueError(f"route {k} uses undeclared relay link {e}")
            hop_route.append(k)
            hop_pos.append(m)
            hop_link.append(topo.link_index[e])
            labels.append(("hop", k, m))
        last.append(len(hop_link) - 1)
        for v in path[1:-1]:
            if v in topo.su_index:
                member[k, topo.su_index[v]] = 1.0
    hop_link = np.array(hop_link, dtype=np.intp)
    nh = len(hop_link)
    phys = np.concatenate([hop_link, topo.n_relay + np.arange(topo.n_su)])
    excl = topo.exclusion_matrix[np.ix_(phys, phys)].copy()
    # one route per physical link per slot
    same = phys[:, None] == phys[None, :]
    excl |= same
    np.fill_diagonal(excl, False)
    labels += [("su", l) for l in topo.su_links]
    units = UnitGraph(excl, n_su=topo.n_su, labels=tuple(labels), unit_link=phys)
    member.setflags(write=False)
    return HopLayout(
        hop_route=np.array(hop_route, dtype=np.intp),
        hop_pos=np.array(hop_pos, dtype=np.intp),
        hop_link=hop_link,
        first_hop=np.array(first, dtype=np.intp),
        last_hop=np.array(last, dtype=np.intp),
        membership=member,
        units=units,
    )


class Schedule:
    """Binary link activation; ``hop_active`` is set for route-hop schedules."""

    __slots__ = ("relay_active", "su_active", "hop_active")

    def __init__(self, relay_active, su_active, hop_active=None):
        self.relay_active = np.asarray(relay_active, dtype=bool)
        self.su_active = np.asarray(su_active, dtype=bool)
        self.hop_active = None if hop_active is None else np.asarray(hop_active, dtype=bool)

    @classmethod
    def empty(cls, topo: CrnTopology, layout: HopLayout | None = None) -> "Schedule":
        hop = None if layout is None else np.zeros(layout.n_hops, dtype=bool)
        return cls(np.zeros(topo.n_relay, bool), np.zeros(topo.n_su, bool), hop)

    @classmethod
    def from_units(cls, active, topo: CrnTopology, layout: HopLayout | None = None) -> "Schedule":
        a = np.asarray(active, dtype=bool)
        if layout is None:
            return cls(a[:topo.n_relay], a[topo.n_relay:])
        hops = a[:layout.n_hops]
        relay = np.zeros(topo.n_relay, dtype=bool)
        relay[layout.hop_link[hops]] = True
        return cls(relay, a[layout.n_hops:], hops)

    def units(self) -> np.ndarray:
        pu = self.relay_active if self.hop_active is None else self.hop_active
        return np.concatenate([pu, self.su_active])

    def vertices(self) -> np.ndarray:
        return np.concatenate([self.relay_active, self.su_active])

    def __eq__(self, other):
        if not isinstance(other, Schedule):
            return NotImplemented
        return (np.array_equal(self.units(), other.units())
                and np.array_equal(self.vertices(), other.vertices()))

    def __hash__(self):
        return hash(self.units().tobytes())

    def __repr__(self):
        def bits(a):
            return "".join("1" if x else "0" for x in a)
        hop = "" if self.hop_active is None else f", hops={bits(self.hop_active)}"
        return f"Schedule(relay={bits(self.relay_active)}, su={bits(self.su_active)}{hop})"


def validate_topology(topo: CrnTopology, routes: RouteSet | None = None) -> list[str]:
    """Return every violated structural invariant (empty list when valid)."""
    problems = []
    declared = set(topo.su_nodes) | {topo.pu_source, topo.pu_dest}
    if topo.pu_source == topo.pu_dest:
        problems.append("PU source and destination coincide")
    if topo.pu_source in topo.su_nodes or topo.pu_dest in topo.su_nodes:
        problems.append("PU endpoint listed as a secondary node")
    if len(set(topo.su_nodes)) != len(topo.su_nodes):
        problems.append("duplicate secondary node")
    seen = set()
    for u, v in topo.relay_links:
        if u not in declared or v not in declared:
            problems.append(f"relay link ({u}, {v}) has an undeclared endpoint")
        if u == v:
            problems.append(f"relay link ({u}, {v}) is a self-loop")
        if v == topo.pu_source:
            problems.append(f"relay link into source: ({u}, {v})")
        if u == topo.pu_dest:
            problems.append(f"relay link out of destination: ({u}, {v})")
        if (u, v) in seen:
            problems.append(f"duplicate relay link ({u}, {v})")
        seen.add((u, v))
    if sorted(map(repr, topo.su_links)) != sorted(map(repr, topo.su_nodes)):
        problems.append("su_links must hold exactly one link per secondary node")
    nv = topo.n_vertices
    for i, j in topo.conflict_edges:
        if i == j:
            problems.append(f"conflict edge ({i}, {j}) is a self-loop")
        if not (0 <= i < nv and 0 <= j < nv):
            problems.append(f"conflict edge ({i}, {j}) references an unknown link")
    if routes is not None:
        for k, path in enumerate(routes.routes):
            if len(path) < 2 or path[0] != topo.pu_source or path[-1] != topo.pu_dest:
                problems.append(f"route {k} must start at the PU source and end at the PU destination")
            if len(set(path)) != len(path):
                problems.append(f"route {k} has a loop")
            for a, b in zip(path, path[1:]):
                if (a, b) not in topo.link_index:
                    problems.append(f"route {k} uses undeclared relay link ({a}, {b})")
        covered = {v for path in routes.routes for v in path[1:-1]}
        for l in topo.su_nodes:
            if l not in covered:
                problems.append(f"secondary node {l} lies on no route")
    return problems


def is_feasible(topo: CrnTopology, sched: Schedule, routes: RouteSet | None = None) -> bool:
    """True iff ``sched`` is independent in the conflict graph and respects
    the single-transceiver constraint (and hop uniqueness for route-hop schedules)."""
    if sched.relay_active.shape != (topo.n_relay,) or sched.su_active.shape != (topo.n_su,):
        raise ValueError("schedule dimensions do not match the topology")
    if sched.hop_active is not None:
        if routes is None:
            raise ValueError("route-hop schedule requires the route set")
        layout = hop_layout(topo, routes)
        if sched.hop_active.shape != (layout.n_hops,):
            raise ValueError("hop activation does not match the route set")
        links = layout.hop_link[sched.hop_active]
        if len(np.unique(links)) != len(links):
            return False
        projected = np.zeros(topo.n_relay, dtype=bool)
        projected[links] = True
        if not np.array_equal(projected, sched.relay_active):
            return False
    return topo.units.is_independent(sched.vertices())


def enumerate_feasible(topo: CrnTopology, routes: RouteSet | None = None,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> list[Schedule]:
    """Every feasible schedule, in ascending lexicographic order of the activation vector."""
    if routes is None:
        rows = topo.units.enumerate(cap)
        return [Schedule.from_units(r, topo) for r in rows]
    layout = hop_layout(topo, routes)
    rows = layout.units.enumerate(cap)
    return [Schedule.from_units(r, topo, layout) for r in rows]


def load_instance(path) -> tuple[CrnTopology, RouteSet | None]:
    with open(path) as fh:
        doc = json.load(fh)
    return instance_from_dict(doc)


def instance_from_dict(doc: dict) -> tuple[CrnTopology, RouteSet | None]:
    topo = CrnTopology.from_dict(doc)
    routes = RouteSet(tuple(tuple(r) for r in doc["routes"])) if doc.get("routes") else None
    return topo, routes


def instance_to_dict(topo: CrnTopology, routes: RouteSet | None = None) -> dict:
    doc = topo.to_dict()
    if routes is not None:
        doc["routes"] = [list(r) for r in routes.routes]
    return doc


def build_topology(su_nodes: Sequence, relay_links: Sequence, conflicts: Sequence = (),
                   source="s", dest="d") -> CrnTopology:
    """Convenience constructor; ``conflicts`` may name links as ``(u, v)`` pairs
    or ``("su", l)`` tuples instead of vertex indices."""
    relay_links = tuple(tuple(e) for e in relay_links)
    n_relay = len(relay_links)
    su_nodes = tuple(su_nodes)

    def vid(x):
        if isinstance(x, (int, np.integer)):
            return int(x)
        if len(x) == 2 and x[0] == "su":
            return n_relay + su_nodes.index(x[1])
        return relay_links.index(tuple(x))

    edges = frozenset((vid(a), vid(b)) for a, b in conflicts)
    return CrnTopology(su_nodes, source, dest, relay_links, su_nodes, edges)
