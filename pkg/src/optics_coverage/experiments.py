"""Seeded experiment orchestration and artifact emission.

A table experiment sweeps the configured deployment sizes, running a
fixed number of seeded trials per size; trial t of every size uses seed
``master_seed + t`` so reruns are byte-identical. The baseline experiment
pairs each protocol run with a uniformly random active subset of the same
size, isolating the value of informed selection at equal battery cost.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from pathlib import Path

from .config import RunConfig
from .geometry import Disc, Point2D
from .metrics import (
    ExperimentSummary,
    RoundReport,
    coverage_grid,
    grid_cr,
    summarize_experiment,
    write_coverage_grid_csv,
    write_table_csv,
)
from .network import generate_deployment
from .optics import OrderedPoint, write_reachability_csv
from .protocol import (
    AllNodesDeadError,
    RoundState,
    iterate_rounds,
    read_trace,
    write_trace,
)

TABLE_FILENAME = "active_node_table.csv"


@dataclass
class TrialOutcome:
    deployed: int
    trial: int
    seed: int
    active_counts: list[int] = field(default_factory=list)
    failed_round: int | None = None

    @property
    def succeeded(self) -> bool:
        return self.failed_round is None and bool(self.active_counts)


@dataclass
class TableExperimentResult:
    outcomes: list[TrialOutcome]
    summary: ExperimentSummary | None


def trial_seed(master_seed: int, trial: int) -> int:
    return master_seed + trial


def run_table_experiment(
    config: RunConfig, out_dir: str | Path | None = None
) -> TableExperimentResult:
    """Sweep d_list x trials; optionally write traces, reachability CSVs
    and the summary table under ``out_dir``.

    A trial's table entry is its first round's active count. Trials that
    die mid-simulation are recorded and skipped by the summary; the
    summary is None when every trial failed.
    """
    params = config.optics_params()
    proto = config.protocol_config()
    out_path = Path(out_dir) if out_dir is not None else None
    if out_path is not None:
        out_path.mkdir(parents=True, exist_ok=True)
    outcomes: list[TrialOutcome] = []
    per_d: dict[int, list[int]] = {}
    for deployed in config.d_list:
        for trial in range(config.trials):
            seed = trial_seed(config.seed, trial)
            outcome = TrialOutcome(deployed, trial, seed)
            deployment = generate_deployment(
                deployed,
                config.width,
                config.height,
                config.radius,
                seed,
                battery_range=(config.battery_min, config.battery_max),
            )
            rounds: list[tuple[RoundState, RoundReport]] = []
            try:
                for state, report in iterate_rounds(
                    deployment, params, proto, config.rounds
                ):
                    rounds.append((state, report))
                    outcome.active_counts.append(report.active_count)
            except AllNodesDeadError as exc:
                outcome.failed_round = exc.round_index
            outcomes.append(outcome)
            if outcome.succeeded:
                per_d.setdefault(deployed, []).append(outcome.active_counts[0])
            if out_path is not None:
                _write_trial_artifacts(out_path, deployment, deployed, trial, rounds)
    summary = summarize_experiment(per_d) if per_d else None
    if summary is not None and out_path is not None:
        with open(out_path / TABLE_FILENAME, "w", newline="") as fh:
            write_table_csv(summary, fh)
    return TableExperimentResult(outcomes, summary)


def _write_trial_artifacts(
    out_path: Path,
    deployment,
    deployed: int,
    trial: int,
    rounds: list[tuple[RoundState, RoundReport]],
) -> None:
    stem = f"D{deployed}_trial{trial}"
    with open(out_path / f"trace_{stem}.jsonl", "w") as fh:
        write_trace(fh, deployment, rounds)
    for state, _ in rounds:
        if not state.ordering:
            continue
        name = f"reachability_{stem}_round{state.round_index}.csv"
        with open(out_path / name, "w", newline="") as fh:
            write_reachability_csv(state.ordering, fh)


@dataclass(frozen=True)
class BaselinePair:
    trial: int
    seed: int
    active_count: int
    protocol_grid_cr: float
    rand_grid_cr: float


@dataclass
class BaselineResult:
    deployed: int
    pairs: list[BaselinePair]

    @property
    def mean_protocol_cr(self) -> float:
        return sum(p.protocol_grid_cr for p in self.pairs) / len(self.pairs)

    @property
    def mean_rand_cr(self) -> float:
        return sum(p.rand_grid_cr for p in self.pairs) / len(self.pairs)


def run_rand_baseline(
    config: RunConfig,
    deployed: int | None = None,
    trials: int | None = None,
) -> BaselineResult:
    """Paired protocol-vs-random coverage comparison at equal active counts.

    For each trial the protocol picks its active set; a uniformly random
    subset of the same size from the same deployment is scored with the
    same grid estimator.
    """
    deployed = deployed if deployed is not None else config.count
    trials = trials if trials is not None else config.trials
    params = config.optics_params()
    proto = config.protocol_config()
    region = (config.width, config.height)
    pairs: list[BaselinePair] = []
    for trial in range(trials):
        seed = trial_seed(config.seed, trial)
        deployment = generate_deployment(
            deployed,
            config.width,
            config.height,
            config.radius,
            seed,
            battery_range=(config.battery_min, config.battery_max),
        )
        try:
            state, report = next(iter(iterate_rounds(deployment, params, proto, 1)))
        except AllNodesDeadError:
            continue
        k = report.active_count
        if k == 0:
            pairs.append(BaselinePair(trial, seed, 0, 0.0, 0.0))
            continue
        # separate deterministic stream so the random pick cannot be
        # correlated with the deployment draw
        rng = random.Random(seed * 1_000_003 + 17)
        rand_ids = rng.sample([n.id for n in deployment.nodes], k)
        rand_discs = [
            Disc(deployment.node(nid).position, config.radius) for nid in rand_ids
        ]
        rand_cr = grid_cr(rand_discs, region, config.grid_resolution)
        pairs.append(BaselinePair(trial, seed, k, report.grid_cr, rand_cr))
    return BaselineResult(deployed, pairs)


def write_baseline_csv(result: BaselineResult, out) -> None:
    writer = csv.writer(out)
    writer.writerow(
        ["trial", "seed", "active_count", "protocol_grid_cr", "rand_grid_cr"]
    )
    for p in result.pairs:
        writer.writerow(
            [p.trial, p.seed, p.active_count, repr(p.protocol_grid_cr), repr(p.rand_grid_cr)]
        )
    if result.pairs:
        writer.writerow(
            ["mean", "", "", repr(result.mean_protocol_cr), repr(result.mean_rand_cr)]
        )


def export_plot_data(
    trace_path: str | Path, out_dir: str | Path, resolution: int = 500
) -> list[Path]:
    """Turn a round trace into plot-ready CSVs.

    Emits one reachability CSV per round plus one coverage 0/1 grid per
    round, reconstructed from the trace's node snapshot.
    """
    trace_path = Path(trace_path)
    with open(trace_path) as fh:
        header, rounds = read_trace(fh)
    if not rounds:
        raise ValueError(f"trace {trace_path} contains no rounds")
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)
    positions = {
        int(nid): Point2D(float(x), float(y)) for nid, x, y in header["nodes"]
    }
    radius = float(header["radius"])
    region = (float(header["region"][0]), float(header["region"][1]))
    written = []
    for record in rounds:
        k = record["round_index"]
        ordering = [
            OrderedPoint(
                point_id=int(pid),
                order_index=idx,
                reachability=None if reach is None else float(reach),
                core_distance=None if core is None else float(core),
            )
            for idx, (pid, reach, core) in enumerate(record["ordering"])
        ]
        reach_file = out_path / f"reachability_round{k}.csv"
        with open(reach_file, "w", newline="") as fh:
            write_reachability_csv(ordering, fh)
        written.append(reach_file)
        discs = [Disc(positions[nid], radius) for nid in record["active"]]
        grid = coverage_grid(discs, region, resolution)
        grid_file = out_path / f"coverage_round{k}.csv"
        with open(grid_file, "w", newline="") as fh:
            write_coverage_grid_csv(grid, fh)
        written.append(grid_file)
    return written
