"""Sensor field model: deployment, node lifecycle, neighbor relations.

A deployment is a set of sensors dropped uniformly at random in a
rectangle, each with a normalized battery level and a common coverage
radius. Two sensors are direct neighbors when their centers are at most
twice the coverage radius apart, which is also the request broadcast
range. Positions never change after deployment.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from typing import IO

from .geometry import Point2D, euclidean_distance

IDLE = "idle"
ACTIVE = "active"
SLEEPING = "sleeping"
DEAD = "dead"

STATES = frozenset({IDLE, ACTIVE, SLEEPING, DEAD})


@dataclass
class SensorNode:
    id: int
    position: Point2D
    battery: float
    radius: float
    state: str = IDLE

    def __post_init__(self):
        if not 0.0 <= self.battery <= 1.0:
            raise ValueError(f"battery must be in [0, 1], got {self.battery}")
        if self.state not in STATES:
            raise ValueError(f"unknown state {self.state!r}")
        if (self.battery == 0.0) != (self.state == DEAD):
            raise ValueError("a node is dead exactly when its battery is empty")

    @property
    def alive(self) -> bool:
        return self.state != DEAD


@dataclass
class Deployment:
    nodes: list[SensorNode]
    region_width: float
    region_height: float
    radius: float
    seed: int | None = None
    _by_id: dict[int, SensorNode] = field(init=False, repr=False)

    def __post_init__(self):
        self._by_id = {n.id: n for n in self.nodes}
        if len(self._by_id) != len(self.nodes):
            raise ValueError("node ids must be unique")

    def node(self, node_id: int) -> SensorNode:
        return self._by_id[node_id]

    def __contains__(self, node_id: int) -> bool:
        return node_id in self._by_id


@dataclass
class NeighborTable:
    """Distance-annotated adjacency at the 2r communication threshold.

    ``neighbors[j]`` lists (neighbor id, distance) pairs sorted by id;
    its length is the direct-neighbor count of node j.
    """

    neighbors: dict[int, list[tuple[int, float]]]

    def degree(self, node_id: int) -> int:
        return len(self.neighbors[node_id])

    def __getitem__(self, node_id: int) -> list[tuple[int, float]]:
        return self.neighbors[node_id]


def generate_deployment(
    count: int,
    width: float,
    height: float,
    radius: float,
    seed: int,
    battery_range: tuple[float, float] = (0.5, 1.0),
) -> Deployment:
    """Drop ``count`` idle sensors uniformly at random in the rectangle.

    Batteries are drawn uniformly from ``battery_range``. The same seed
    reproduces the exact same deployment.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if width <= 0 or height <= 0 or radius <= 0:
        raise ValueError("width, height and radius must be positive")
    lo, hi = battery_range
    rng = random.Random(seed)
    nodes = []
    for i in range(count):
        pos = Point2D(rng.uniform(0, width), rng.uniform(0, height))
        nodes.append(
            SensorNode(id=i, position=pos, battery=rng.uniform(lo, hi), radius=radius)
        )
    return Deployment(nodes, width, height, radius, seed)


def build_neighbor_table(deployment: Deployment) -> NeighborTable:
    """Connect every pair of nodes within 2r of each other (inclusive)."""
    reach = 2 * deployment.radius
    table: dict[int, list[tuple[int, float]]] = {n.id: [] for n in deployment.nodes}
    nodes = sorted(deployment.nodes, key=lambda n: n.id)
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            d = euclidean_distance(a.position, b.position)
            if d <= reach:
                table[a.id].append((b.id, d))
                table[b.id].append((a.id, d))
    for lst in table.values():
        lst.sort()
    return NeighborTable(table)


def send_req(from_id: int, table: NeighborTable, deployment: Deployment) -> list[int]:
    """Ids of idle neighbors that would answer a request broadcast.

    The sender must be active; sleeping, active and dead neighbors do not
    respond.
    """
    if from_id not in deployment:
        raise KeyError(f"unknown node id {from_id}")
    sender = deployment.node(from_id)
    if sender.state != ACTIVE:
        raise ValueError(f"node {from_id} is {sender.state}, not active")
    return [
        nid for nid, _ in table[from_id] if deployment.node(nid).state == IDLE
    ]


def drain_battery(node: SensorNode, amount: float) -> SensorNode:
    """Subtract a round's battery cost, clamping at zero (node dies)."""
    if amount < 0:
        raise ValueError(f"drain amount must be >= 0, got {amount}")
    node.battery = max(0.0, node.battery - amount)
    if node.battery == 0.0:
        node.state = DEAD
    return node


def save_deployment_csv(deployment: Deployment, out: IO[str]) -> None:
    writer = csv.writer(out)
    writer.writerow(["id", "x", "y", "battery", "state"])
    for n in deployment.nodes:
        writer.writerow([n.id, repr(n.position.x), repr(n.position.y), repr(n.battery), n.state])


def load_deployment_csv(
    src: IO[str], width: float, height: float, radius: float
) -> Deployment:
    """Rebuild a deployment from its CSV dump (region geometry is not
    stored in the file and must be supplied)."""
    reader = csv.reader(src)
    header = next(reader, None)
    if header != ["id", "x", "y", "battery", "state"]:
        raise ValueError("not a deployment CSV")
    nodes = []
    for row in reader:
        nid, x, y, battery, state = row
        nodes.append(
            SensorNode(
                id=int(nid),
                position=Point2D(float(x), float(y)),
                battery=float(battery),
                radius=radius,
                state=state,
            )
        )
    return Deployment(nodes, width, height, radius, seed=None)
