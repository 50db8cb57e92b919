"""Small named CRN instances used by the tests, demos and CLI examples."""
from __future__ import annotations

from .topology import CrnTopology, RouteSet, build_topology


def one_relay() -> tuple[CrnTopology, RouteSet]:
    """s -> 1 -> d with SU link at 1; all three links mutually conflicting."""
    relay = [("s", 1), (1, "d")]
    conflicts = [(("s", 1), (1, "d")), (("s", 1), ("su", 1)), ((1, "d"), ("su", 1))]
    return build_topology([1], relay, conflicts), RouteSet([("s", 1, "d")])


def line3() -> tuple[CrnTopology, RouteSet]:
    """Three relays in a line, two-hop interference."""
    relay = [("s", 1), (1, 2), (2, 3), (3, "d")]
    conflicts = [
        (("s", 1), (2, 3)), ((1, 2), (3, "d")),
        (("su", 1), (2, 3)), (("su", 2), ("s", 1)), (("su", 2), (3, "d")), (("su", 3), (1, 2)),
        (("su", 1), ("su", 2)), (("su", 2), ("su", 3)),
    ]
    return build_topology([1, 2, 3], relay, conflicts), RouteSet([("s", 1, 2, 3, "d")])


def mesh5() -> tuple[CrnTopology, RouteSet]:
    """Five relays, ten relay links, three routes (two share link s -> 1)."""
    relay = [("s", 1), ("s", 2), (1, 3), (2, 3), (1, 4), (3, 4), (3, 5), (2, 5), (4, "d"), (5, "d")]
    conflicts = [
        (("s", 1), (2, 5)), ((1, 3), (2, 5)), ((1, 4), (3, 5)), ((4, "d"), (3, 5)),
        (("su", 1), ("su", 2)), (("su", 3), ("su", 4)), (("su", 4), ("su", 5)),
        (("su", 1), (3, 4)), (("su", 5), (1, 4)),
    ]
    routes = RouteSet([("s", 1, 4, "d"), ("s", 2, 3, 5, "d"), ("s", 1, 3, 4, "d")])
    return build_topology([1, 2, 3, 4, 5], relay, conflicts), routes


def two_route() -> tuple[CrnTopology, RouteSet]:
    """Two disjoint two-hop routes through relays 1 and 2."""
    relay = [("s", 1), ("s", 2), (1, "d"), (2, "d")]
    conflicts = [(("su", 1), ("s", 2)), (("su", 2), ("s", 1)), (("su", 1), ("su", 2))]
    routes = RouteSet([("s", 1, "d"), ("s", 2, "d")])
    return build_topology([1, 2], relay, conflicts), routes


FIXTURES = {
    "one_relay": one_relay,
    "line3": line3,
    "mesh5": mesh5,
    "two_route": two_route,
}
