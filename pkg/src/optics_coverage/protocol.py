"""Per-cluster node activation and the round-based active/sleep rotation.

Each round the eligible sensors are clustered, every cluster grows a
selection tree from a seed node, and the union of tree nodes becomes the
round's active set. Tree growth is driven by the acceptance level

    L = (w_b * battery + w_n * neighbor_count) / (w_d * distance)

which prefers close, well-connected, well-charged candidates. A candidate
whose disc boundary is almost entirely inside already-activated discs of
its cluster adds nothing and is discarded. Actives retire to sleep at the
end of their round and rejoin the eligible pool after a configurable
number of rounds.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .geometry import (
    CoLocatedSensorsError,
    Disc,
    Point2D,
    euclidean_distance,
    overlap_angle,
)
from .metrics import RoundReport, active_ratio, analytic_cr, grid_cr
from .network import (
    ACTIVE,
    IDLE,
    SLEEPING,
    Deployment,
    NeighborTable,
    build_neighbor_table,
    drain_battery,
    send_req,
)
from .optics import Cluster, OpticsParams, OrderedPoint, extract_clusters, optics_order

TWO_PI = 2 * math.pi


class AllNodesDeadError(RuntimeError):
    """Every sensor battery is exhausted; carries the failing round index."""

    def __init__(self, round_index: int):
        super().__init__(f"all nodes dead at round {round_index}")
        self.round_index = round_index


@dataclass
class ProtocolConfig:
    """Tunables of the activation protocol.

    ``theta`` is the minimum fraction of a candidate's boundary that must
    stay outside already-active discs for it to be worth activating.
    ``eps_prime`` is the reachability cut used for cluster extraction
    (defaults to half the clustering eps when None).
    """

    theta: float = 0.1
    battery_drain: float = 0.1
    sleep_rounds: int = 1
    w_battery: float = 0.4
    w_neighbors: float = 0.3
    w_distance: float = 0.2
    eps_prime: float | None = None
    grid_resolution: int = 500


@dataclass(frozen=True)
class AcceptanceLevel:
    """A candidate's score together with the inputs that produced it."""

    value: float
    battery: float
    neighbor_count: int
    distance: float

    @classmethod
    def compute(
        cls,
        battery: float,
        neighbor_count: int,
        distance: float,
        config: ProtocolConfig | None = None,
    ) -> "AcceptanceLevel":
        cfg = config or ProtocolConfig()
        value = acceptance_level(
            battery,
            neighbor_count,
            distance,
            cfg.w_battery,
            cfg.w_neighbors,
            cfg.w_distance,
        )
        return cls(value, battery, neighbor_count, distance)


@dataclass
class SelectionTree:
    """Activation order of one cluster, rooted at its seed sensor."""

    cluster_id: int
    root: int
    edges: list[tuple[int, int]] = field(default_factory=list)

    def node_ids(self) -> set[int]:
        return {self.root} | {child for _, child in self.edges}


@dataclass
class RoundState:
    round_index: int
    active: set[int] = field(default_factory=set)
    # sleeping node id -> rounds left before it returns to the idle pool
    sleeping: dict[int, int] = field(default_factory=dict)
    trees: list[SelectionTree] = field(default_factory=list)
    ordering: list[OrderedPoint] = field(default_factory=list)


def initial_round_state() -> RoundState:
    return RoundState(round_index=0)


def acceptance_level(
    battery: float,
    neighbor_count: int,
    distance: float,
    w_battery: float = 0.4,
    w_neighbors: float = 0.3,
    w_distance: float = 0.2,
) -> float:
    """Candidate score; higher is better. Distance zero is degenerate."""
    if distance == 0:
        raise CoLocatedSensorsError("candidate at distance 0 from selector")
    if distance < 0:
        raise ValueError(f"distance must be positive, got {distance}")
    return (w_battery * battery + w_neighbors * neighbor_count) / (
        w_distance * distance
    )


def choose_initial_sensor(cluster: Cluster, deployment: Deployment) -> int:
    """Cluster member closest to the member centroid, lower id on ties."""
    if not cluster.members:
        raise ValueError("cannot seed an empty cluster")
    cx = sum(deployment.node(m).position.x for m in cluster.members) / len(
        cluster.members
    )
    cy = sum(deployment.node(m).position.y for m in cluster.members) / len(
        cluster.members
    )
    centroid = Point2D(cx, cy)
    return min(
        cluster.members,
        key=lambda m: (euclidean_distance(deployment.node(m).position, centroid), m),
    )


def select_next(
    current: int,
    table: NeighborTable,
    deployment: Deployment,
    allowed: set[int] | None = None,
    exclude: frozenset[int] | set[int] = frozenset(),
    config: ProtocolConfig | None = None,
) -> int | None:
    """Idle neighbor of ``current`` answering a request with the highest
    acceptance level.

    Returns None when no idle neighbor qualifies. ``allowed`` restricts
    candidates (e.g. to one cluster's members) and ``exclude`` removes
    candidates already found redundant. Ties break toward the lower id.
    """
    cfg = config or ProtocolConfig()
    responders = set(send_req(current, table, deployment))
    best: int | None = None
    best_score = -math.inf
    for nid, dist in table[current]:  # sorted by id: first max wins ties
        if nid not in responders or nid in exclude:
            continue
        if allowed is not None and nid not in allowed:
            continue
        score = acceptance_level(
            deployment.node(nid).battery,
            table.degree(nid),
            dist,
            cfg.w_battery,
            cfg.w_neighbors,
            cfg.w_distance,
        )
        if score > best_score:
            best, best_score = nid, score
    return best


def _mostly_overlapped(
    pos: Point2D, active_positions: Iterable[Point2D], radius: float, theta: float
) -> bool:
    """True when less than ``theta`` of the boundary at ``pos`` stays free.

    The covered boundary is approximated by summing the full overlap arc
    (2*alpha) against each active disc, clamped at the full circle.
    """
    covered = 0.0
    for ap in active_positions:
        covered += 2 * overlap_angle(euclidean_distance(pos, ap), radius)
        if covered >= TWO_PI:
            return theta > 0
    return (TWO_PI - covered) / TWO_PI < theta


def cover_cluster(
    cluster: Cluster,
    deployment: Deployment,
    table: NeighborTable,
    config: ProtocolConfig | None = None,
) -> SelectionTree:
    """Grow one cluster's selection tree until no candidate is acceptable.

    The frontier rotates breadth-first in activation order: each tree node
    in turn activates its best acceptable idle neighbor (redundant ones are
    discarded for the rest of the round) and re-enters the frontier behind
    its new child; a node with no acceptable neighbor left drops out.
    """
    cfg = config or ProtocolConfig()
    root = choose_initial_sensor(cluster, deployment)
    deployment.node(root).state = ACTIVE
    tree = SelectionTree(cluster.cluster_id, root)
    members = set(cluster.members)
    active_positions = [deployment.node(root).position]
    discarded: set[int] = set()
    frontier = deque([root])
    while frontier:
        u = frontier.popleft()
        while True:
            candidate = select_next(
                u, table, deployment, allowed=members, exclude=discarded, config=cfg
            )
            if candidate is None:
                break
            cand_pos = deployment.node(candidate).position
            if _mostly_overlapped(
                cand_pos, active_positions, deployment.radius, cfg.theta
            ):
                discarded.add(candidate)
                continue
            deployment.node(candidate).state = ACTIVE
            tree.edges.append((u, candidate))
            active_positions.append(cand_pos)
            frontier.append(candidate)
            frontier.append(u)
            break
    return tree


def _resolve_eps_prime(params: OpticsParams, config: ProtocolConfig) -> float:
    return config.eps_prime if config.eps_prime is not None else params.eps / 2


def run_round(
    state: RoundState,
    deployment: Deployment,
    params: OpticsParams,
    config: ProtocolConfig | None = None,
    table: NeighborTable | None = None,
) -> tuple[RoundState, RoundReport]:
    """Advance the simulation by one round.

    Last round's actives go to sleep, expired sleepers rejoin the idle
    pool, the idle pool is re-clustered and covered cluster by cluster,
    and the new actives pay the round's battery cost. Outliers of the
    clustering stay idle.
    """
    cfg = config or ProtocolConfig()
    round_index = state.round_index + 1
    if not any(n.alive for n in deployment.nodes):
        raise AllNodesDeadError(round_index)
    if table is None:
        table = build_neighbor_table(deployment)

    sleeping: dict[int, int] = {}
    for nid, remaining in state.sleeping.items():
        node = deployment.node(nid)
        if not node.alive:
            continue
        if remaining <= 1:
            node.state = IDLE
        else:
            sleeping[nid] = remaining - 1
    for nid in state.active:
        node = deployment.node(nid)
        if node.alive:
            node.state = SLEEPING
            sleeping[nid] = cfg.sleep_rounds

    eligible = {
        n.id: n.position for n in deployment.nodes if n.state == IDLE
    }
    trees: list[SelectionTree] = []
    ordering: list[OrderedPoint] = []
    if eligible:
        ordering = optics_order(eligible, params)
        assignment = extract_clusters(ordering, _resolve_eps_prime(params, cfg))
        # clusters are node-disjoint, so covering order cannot matter;
        # sort only to fix the trace layout
        for cluster in sorted(assignment.clusters, key=lambda c: c.cluster_id):
            trees.append(cover_cluster(cluster, deployment, table, cfg))

    active = set()
    for tree in trees:
        active |= tree.node_ids()
    area = deployment.region_width * deployment.region_height
    report = RoundReport(
        deployed_count=len(deployment.nodes),
        active_count=len(active),
        ratio_r=active_ratio(len(active), len(deployment.nodes)),
        analytic_cr=analytic_cr(len(active), deployment.radius, area),
        grid_cr=grid_cr(
            [Disc(deployment.node(nid).position, deployment.radius) for nid in active],
            (deployment.region_width, deployment.region_height),
            cfg.grid_resolution,
        ),
    )
    survivors = set()
    for nid in sorted(active):
        node = drain_battery(deployment.node(nid), cfg.battery_drain)
        if node.alive:
            survivors.add(nid)
    return RoundState(round_index, survivors, sleeping, trees, ordering), report


def iterate_rounds(
    deployment: Deployment,
    params: OpticsParams,
    config: ProtocolConfig | None = None,
    rounds: int = 1,
) -> Iterator[tuple[RoundState, RoundReport]]:
    """Yield (state, report) for each round of a fresh simulation."""
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    table = build_neighbor_table(deployment)
    state = initial_round_state()
    for _ in range(rounds):
        state, report = run_round(state, deployment, params, config, table)
        yield state, report


def run_simulation(
    deployment: Deployment,
    params: OpticsParams,
    config: ProtocolConfig | None = None,
    rounds: int = 1,
) -> list[RoundReport]:
    """Reports for ``rounds`` consecutive rounds on one deployment."""
    return [report for _, report in iterate_rounds(deployment, params, config, rounds)]


def write_trace(
    out: IO[str],
    deployment: Deployment,
    rounds: Iterable[tuple[RoundState, RoundReport]],
) -> None:
    """JSON-lines trace: a header record, then one record per round.

    The header snapshots node positions so the trace can be replayed and
    plotted without the original deployment.
    """
    header = {
        "type": "header",
        "region": [deployment.region_width, deployment.region_height],
        "radius": deployment.radius,
        "seed": deployment.seed,
        "nodes": [[n.id, n.position.x, n.position.y] for n in deployment.nodes],
    }
    out.write(json.dumps(header) + "\n")
    for state, report in rounds:
        record = {
            "type": "round",
            "round_index": state.round_index,
            "active": sorted(state.active),
            "trees": [
                {
                    "cluster_id": t.cluster_id,
                    "root": t.root,
                    "edges": [[p, c] for p, c in t.edges],
                }
                for t in state.trees
            ],
            "report": {
                "deployed_count": report.deployed_count,
                "active_count": report.active_count,
                "ratio_r": report.ratio_r,
                "analytic_cr": report.analytic_cr,
                "grid_cr": report.grid_cr,
            },
            "ordering": [
                [op.point_id, op.reachability, op.core_distance]
                for op in state.ordering
            ],
        }
        out.write(json.dumps(record) + "\n")


def read_trace(src: IO[str]) -> tuple[dict, list[dict]]:
    """Parse a trace file into its header and round records."""
    lines = [line for line in src.read().splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty trace")
    header = json.loads(lines[0])
    if header.get("type") != "header":
        raise ValueError("trace does not start with a header record")
    rounds = []
    for line in lines[1:]:
        record = json.loads(line)
        if record.get("type") != "round":
            raise ValueError("unexpected record type in trace")
        rounds.append(record)
    return header, rounds
