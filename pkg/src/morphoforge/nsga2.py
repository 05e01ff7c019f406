"""Elitist multi-objective genetic search over the mixed module genome.

This is a self-contained NSGA-II: fast non-dominated sorting, crowding
distance, binary tournament selection, uniform kind exchange plus simulated
binary crossover for the mixed categorical/continuous genome, and polynomial
mutation.  Parents and offspring are merged each generation and survivors
picked front by front, truncating the split front by descending crowding
distance.

Reproducibility contract: a run is fully determined by its seed.  Offspring
are bred from one sequential generator, while each genome's objective
evaluation seeds itself from the genome's own bytes, so evaluation order and
worker count cannot change any result.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
from typing import Callable, Sequence

import numpy as np

from .archive import ParetoArchive
from .ik import IkConfig
from .modules import ALL_KINDS, Genome, ValidationError, random_genome
from .objectives import evaluate

Objectives = tuple[float, float]


@dataclass(frozen=True)
class OptimizerConfig:
    """Search settings; defaults follow common NSGA-II practice."""

    population_size: int = 100
    total_evaluations: int = 10_000
    crossover_probability: float = 0.9
    mutation_probability_categorical: float = 1.0 / 6.0
    mutation_probability_continuous: float = 1.0 / 6.0
    sbx_eta: float = 15.0
    pm_eta: float = 20.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population_size < 2 or self.population_size % 2:
            raise ValidationError(
                f"population_size must be a positive even integer, got {self.population_size}"
            )
        if self.total_evaluations < self.population_size:
            raise ValidationError(
                f"total_evaluations ({self.total_evaluations}) must be >= "
                f"population_size ({self.population_size})"
            )
        for name in ("crossover_probability", "mutation_probability_categorical", "mutation_probability_continuous"):
            p = getattr(self, name)
            if not (0.0 <= p <= 1.0):
                raise ValidationError(f"{name} must be in [0, 1], got {p}")
        if self.sbx_eta <= 0.0 or self.pm_eta <= 0.0:
            raise ValidationError("distribution indices sbx_eta and pm_eta must be > 0")


@dataclass
class Individual:
    """A genome with its objective values and current selection metadata."""

    genome: Genome
    task_error: float
    design_cost: float
    eval_index: int
    rank: int = -1
    crowding: float = 0.0

    @property
    def objectives(self) -> Objectives:
        return (self.task_error, self.design_cost)


@dataclass(frozen=True)
class ProgressEvent:
    """Monotonic progress snapshot emitted once per generation."""

    evaluations: int
    front_size: int
    best_task_error: float


ProgressSink = Callable[[ProgressEvent], None]


def dominates(a: Objectives, b: Objectives) -> bool:
    """True iff `a` is no worse in both objectives and better in at least one."""
    return a[0] <= b[0] and a[1] <= b[1] and (a[0] < b[0] or a[1] < b[1])


def non_dominated_sort(objectives: Sequence[Objectives]) -> list[list[int]]:
    """Partition indices into fronts: front 0 is the non-dominated set, front
    k is non-dominated once fronts below k are removed."""
    n = len(objectives)
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    domination_count = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if dominates(objectives[i], objectives[j]):
                dominated_by[i].append(j)
                domination_count[j] += 1
            elif dominates(objectives[j], objectives[i]):
                dominated_by[j].append(i)
                domination_count[i] += 1
    fronts: list[list[int]] = [[i for i in range(n) if domination_count[i] == 0]]
    while fronts[-1]:
        next_front = []
        for i in fronts[-1]:
            for j in dominated_by[i]:
                domination_count[j] -= 1
                if domination_count[j] == 0:
                    next_front.append(j)
        next_front.sort()
        fronts.append(next_front)
    fronts.pop()
    return fronts


def crowding_distance(objectives: Sequence[Objectives]) -> np.ndarray:
    """Per-member crowding distance within one front.

    Boundary members of each objective get +inf; interior members sum the
    normalized gaps between their neighbors.  When an objective is constant
    across the front its gap term is zero.  Fronts of size one or two are
    all-boundary, hence all +inf.
    """
    n = len(objectives)
    if n <= 2:
        return np.full(n, np.inf)
    values = np.asarray(objectives, dtype=np.float64)
    distance = np.zeros(n)
    for m in range(values.shape[1]):
        order = np.argsort(values[:, m], kind="stable")
        distance[order[0]] = np.inf
        distance[order[-1]] = np.inf
        span = values[order[-1], m] - values[order[0], m]
        if span == 0.0:
            continue
        distance[order[1:-1]] += (values[order[2:], m] - values[order[:-2], m]) / span
    return distance


def select_parent(population: Sequence[Individual], rng: np.random.Generator) -> Individual:
    """Binary tournament: lower rank wins, then larger crowding, then the
    first pick."""
    first = population[int(rng.integers(len(population)))]
    second = population[int(rng.integers(len(population)))]
    if second.rank < first.rank:
        return second
    if first.rank < second.rank:
        return first
    if second.crowding > first.crowding:
        return second
    return first


def crossover(
    parent_a: Genome, parent_b: Genome, config: OptimizerConfig, rng: np.random.Generator
) -> tuple[Genome, Genome]:
    """Recombine two genomes into two children.

    With probability `crossover_probability`: kind genes are exchanged
    per position with probability 1/2, and each pair of length genes is
    combined by simulated binary crossover (distribution index `sbx_eta`),
    clipped to [0, 1].  Otherwise the parents are returned unchanged.
    """
    if len(parent_a) != len(parent_b):
        raise ValidationError("crossover requires genomes of equal length")
    if rng.random() >= config.crossover_probability:
        return parent_a, parent_b
    kinds_a = list(parent_a.kinds)
    kinds_b = list(parent_b.kinds)
    for i in range(len(kinds_a)):
        if rng.random() < 0.5:
            kinds_a[i], kinds_b[i] = kinds_b[i], kinds_a[i]
    frac_a = []
    frac_b = []
    exponent = 1.0 / (config.sbx_eta + 1.0)
    for x, y in zip(parent_a.fractions, parent_b.fractions):
        u = rng.random()
        if x == y:  # spread is zero; avoid rounding the parents' value
            frac_a.append(x)
            frac_b.append(y)
            continue
        beta = (2.0 * u) ** exponent if u <= 0.5 else (1.0 / (2.0 * (1.0 - u))) ** exponent
        c1 = 0.5 * ((1.0 + beta) * x + (1.0 - beta) * y)
        c2 = 0.5 * ((1.0 - beta) * x + (1.0 + beta) * y)
        frac_a.append(min(1.0, max(0.0, c1)))
        frac_b.append(min(1.0, max(0.0, c2)))
    return Genome(tuple(kinds_a), tuple(frac_a)), Genome(tuple(kinds_b), tuple(frac_b))


def mutate(genome: Genome, config: OptimizerConfig, rng: np.random.Generator) -> Genome:
    """Independently resample kind genes and perturb length genes.

    Kind genes are redrawn uniformly over all six kinds (so a mutation keeps
    the original kind with probability 1/6); length genes get bounded
    polynomial mutation with distribution index `pm_eta`, clipped to [0, 1].
    """
    kinds = list(genome.kinds)
    for i in range(len(kinds)):
        if rng.random() < config.mutation_probability_categorical:
            kinds[i] = ALL_KINDS[int(rng.integers(len(ALL_KINDS)))]
    exponent = 1.0 / (config.pm_eta + 1.0)
    fractions = list(genome.fractions)
    for i, x in enumerate(fractions):
        if rng.random() < config.mutation_probability_continuous:
            u = rng.random()
            if u < 0.5:
                val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - x) ** (config.pm_eta + 1.0)
                delta = val**exponent - 1.0
            else:
                val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * x ** (config.pm_eta + 1.0)
                delta = 1.0 - val**exponent
            fractions[i] = min(1.0, max(0.0, x + delta))
    return Genome(tuple(kinds), tuple(fractions))


def _evaluate_one(args) -> Objectives:
    genome, scenario, ik_config = args
    result = evaluate(genome, scenario, ik_config)
    return result.objectives


def _evaluate_batch(genomes, scenario, ik_config, pool, workers) -> list[Objectives]:
    tasks = [(g, scenario, ik_config) for g in genomes]
    if pool is None:
        return [_evaluate_one(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 4))
    return list(pool.map(_evaluate_one, tasks, chunksize=chunk))


def _assign_metadata(population: list[Individual]) -> list[list[int]]:
    """Recompute rank and crowding on `population`; returns the fronts."""
    fronts = non_dominated_sort([ind.objectives for ind in population])
    for rank, front in enumerate(fronts):
        distances = crowding_distance([population[i].objectives for i in front])
        for i, dist in zip(front, distances):
            population[i].rank = rank
            population[i].crowding = float(dist)
    return fronts


def _select_survivors(merged: list[Individual], capacity: int) -> list[Individual]:
    fronts = _assign_metadata(merged)
    survivors: list[Individual] = []
    for front in fronts:
        members = [merged[i] for i in front]
        if len(survivors) + len(members) <= capacity:
            survivors.extend(members)
            if len(survivors) == capacity:
                break
        else:
            members.sort(key=lambda ind: (-ind.crowding, ind.eval_index))
            survivors.extend(members[: capacity - len(survivors)])
            break
    return survivors


def run(
    scenario,
    optimizer_config: OptimizerConfig,
    ik_config: IkConfig | None = None,
    progress: ProgressSink | None = None,
    workers: int = 1,
) -> ParetoArchive:
    """Run the generational loop until the evaluation budget is spent.

    Every evaluated genome is recorded, in evaluation order, into the
    returned archive; the archive therefore holds exactly
    `total_evaluations` records.  When `ik_config` is None the scenario's
    own IK overrides are applied on top of the solver defaults, seeded from
    the optimizer seed.

    `workers` > 1 evaluates each generation in a process pool; results are
    merged in submission order and genomes carry their own evaluation seeds,
    so the archive is identical for any worker count.
    """
    if ik_config is None:
        ik_config = scenario.resolve_ik(seed=optimizer_config.seed)
    if workers < 1:
        raise ValidationError(f"workers must be >= 1, got {workers}")

    rng = np.random.default_rng(optimizer_config.seed & ((1 << 64) - 1))
    mu = optimizer_config.population_size
    budget = optimizer_config.total_evaluations

    archive_genomes: list[Genome] = []
    archive_objectives: list[Objectives] = []

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        population: list[Individual] = []
        genomes = [random_genome(rng, scenario.n_modules) for _ in range(mu)]
        for genome, objs in zip(genomes, _evaluate_batch(genomes, scenario, ik_config, pool, workers)):
            population.append(Individual(genome, objs[0], objs[1], eval_index=len(archive_genomes)))
            archive_genomes.append(genome)
            archive_objectives.append(objs)
        fronts = _assign_metadata(population)
        _report(progress, archive_objectives, len(fronts[0]) if fronts else 0)

        while len(archive_genomes) < budget:
            n_offspring = min(mu, budget - len(archive_genomes))
            children: list[Genome] = []
            while len(children) < n_offspring:
                pa = select_parent(population, rng)
                pb = select_parent(population, rng)
                child_a, child_b = crossover(pa.genome, pb.genome, optimizer_config, rng)
                children.append(mutate(child_a, optimizer_config, rng))
                if len(children) < n_offspring:
                    children.append(mutate(child_b, optimizer_config, rng))

            offspring: list[Individual] = []
            for genome, objs in zip(children, _evaluate_batch(children, scenario, ik_config, pool, workers)):
                offspring.append(Individual(genome, objs[0], objs[1], eval_index=len(archive_genomes)))
                archive_genomes.append(genome)
                archive_objectives.append(objs)

            population = _select_survivors(population + offspring, mu)
            front0 = sum(1 for ind in population if ind.rank == 0)
            _report(progress, archive_objectives, front0)
    finally:
        if pool is not None:
            pool.shutdown()

    return ParetoArchive.from_evaluations(
        archive_genomes,
        archive_objectives,
        scenario_name=scenario.name,
        seed=optimizer_config.seed,
        config={"optimizer": asdict(optimizer_config), "ik": asdict(ik_config)},
    )


def _report(progress: ProgressSink | None, archive_objectives: list[Objectives], front_size: int) -> None:
    if progress is None:
        return
    best = min(obj[0] for obj in archive_objectives)
    progress(ProgressEvent(evaluations=len(archive_objectives), front_size=front_size, best_task_error=best))
