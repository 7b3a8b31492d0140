"""Per-slot comparison policies: a real-coded genetic algorithm and a
randomised equal-split rule.

The genetic solver is myopic by design: it re-optimises every slot with
full knowledge of that slot's channel gains and requests, searching the
same raw [0, 1] action space the learner uses.  Fitness is evaluated on
the projected (feasible) candidate through the exact environment cost
path, so the search space and the executed actions coincide.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .env import EnvState, FeasibleAction, _cap_unit_sum, evaluate_slot, project_action, slot_view
from .errors import ConfigError


@dataclass(frozen=True)
class GaConfig:
    population: int = 50
    generations: int = 100
    eta_c: float = 15.0  # crossover spread concentration; larger keeps children closer
    eta_m: float = 20.0  # mutation spread concentration
    mutation_prob: float | None = None  # None -> 1/dimension
    tournament: int = 2

    def __post_init__(self):
        if self.population < 2 or self.population % 2:
            raise ConfigError("population must be even and at least 2")
        if self.generations < 1:
            raise ConfigError("need at least one generation")
        if self.tournament < 1:
            raise ConfigError("tournament size must be at least 1")


def sbx_crossover(parent_a, parent_b, eta_c: float, rng: np.random.Generator):
    """Simulated binary crossover on [0, 1] genes.

    Each gene draws its own spread factor from the polynomial density with
    index eta_c; the two children straddle the parents symmetrically, so
    their pre-clip midpoint equals the parents' midpoint gene by gene.
    """
    pa = np.asarray(parent_a, dtype=float)
    pb = np.asarray(parent_b, dtype=float)
    if pa.shape != pb.shape:
        raise ValueError("parents must have equal dimension")
    u = rng.random(pa.shape)
    beta = np.where(
        u <= 0.5,
        (2.0 * u) ** (1.0 / (eta_c + 1.0)),
        (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta_c + 1.0)),
    )
    # midpoint-and-spread form: equal genes pass through bit-exactly
    mid = 0.5 * (pa + pb)
    half_spread = 0.5 * beta * (pb - pa)
    return np.clip(mid - half_spread, 0.0, 1.0), np.clip(mid + half_spread, 0.0, 1.0)


def poly_mutation(chromosome, eta_m: float, per_gene_prob: float, rng: np.random.Generator):
    """Bounded polynomial mutation on [0, 1] genes.

    The perturbation law respects the gene bounds, so a gene sitting on a
    boundary can only move inward, and no clipping artefacts pile mass on
    the edges.
    """
    y = np.array(chromosome, dtype=float)
    mask = rng.random(y.shape) < per_gene_prob
    u = rng.random(y.shape)
    exp = 1.0 / (eta_m + 1.0)
    # distance to each bound, already normalised because the range is [0, 1]
    d_lo = y
    d_hi = 1.0 - y
    delta = np.where(
        u <= 0.5,
        (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d_lo) ** (eta_m + 1.0)) ** exp - 1.0,
        1.0 - (2.0 * (1.0 - u) + (2.0 * u - 1.0) * (1.0 - d_hi) ** (eta_m + 1.0)) ** exp,
    )
    y[mask] = y[mask] + delta[mask]
    return np.clip(y, 0.0, 1.0)


def _population_fitness(pop: np.ndarray, view, config: SystemConfig) -> np.ndarray:
    """Mean per-user cost of each projected candidate (lower is better)."""
    m, n = config.m_models, config.n_users
    rho = np.empty((len(pop), m), dtype=np.int8)
    b = np.empty((len(pop), n))
    x = np.empty((len(pop), n))
    for i, chrom in enumerate(pop):
        action = project_action(chrom, config)
        rho[i], b[i], x[i] = action.rho, action.b, action.x
    costs = evaluate_slot(view, rho, b, x, config)
    return costs.utility.mean(axis=-1)


def hcras_solve(
    state: EnvState,
    config: SystemConfig,
    ga: GaConfig,
    rng: np.random.Generator,
    initial_population: np.ndarray | None = None,
    fitness_history: list | None = None,
) -> FeasibleAction:
    """Evolve a population of raw actions against the current slot.

    Binary-tournament selection, simulated binary crossover, polynomial
    mutation, and one preserved elite; the best candidate ever seen is
    returned after projection.  ``fitness_history``, when given, collects
    the best-so-far fitness after every generation.
    """
    dim = config.m_models + 2 * config.n_users
    prob = ga.mutation_prob if ga.mutation_prob is not None else 1.0 / dim
    view = slot_view(state, config)

    if initial_population is not None:
        pop = np.clip(np.asarray(initial_population, dtype=float), 0.0, 1.0)
        if pop.shape != (ga.population, dim):
            raise ConfigError(f"initial population must have shape ({ga.population}, {dim})")
    else:
        pop = rng.random((ga.population, dim))
    fitness = _population_fitness(pop, view, config)
    best_idx = int(np.argmin(fitness))
    best_chrom = pop[best_idx].copy()
    best_fit = float(fitness[best_idx])

    for _ in range(ga.generations):
        entrants = rng.integers(0, ga.population, size=(ga.population, ga.tournament))
        winners = entrants[np.arange(ga.population), np.argmin(fitness[entrants], axis=1)]
        parents = pop[winners]

        children = np.empty_like(parents)
        for i in range(0, ga.population, 2):
            children[i], children[i + 1] = sbx_crossover(parents[i], parents[i + 1], ga.eta_c, rng)
        for i in range(ga.population):
            children[i] = poly_mutation(children[i], ga.eta_m, prob, rng)

        fitness = _population_fitness(children, view, config)
        worst = int(np.argmax(fitness))
        if fitness.min() > best_fit:
            children[worst] = best_chrom  # keep the elite alive
            fitness[worst] = best_fit
        pop = children

        gen_best = int(np.argmin(fitness))
        if float(fitness[gen_best]) < best_fit:
            best_fit = float(fitness[gen_best])
            best_chrom = pop[gen_best].copy()
        if fitness_history is not None:
            fitness_history.append(best_fit)

    return project_action(best_chrom, config)


def rcars_action(state: EnvState, config: SystemConfig, rng: np.random.Generator) -> FeasibleAction:
    """Random cache fill until nothing else fits; equal resource shares."""
    m, n = config.m_models, config.n_users
    sizes = config.model_bank.storage_gb
    rho = np.zeros(m, dtype=np.int8)
    remaining = config.capacity_gb
    for idx in rng.permutation(m):
        if sizes[idx] <= remaining:
            rho[idx] = 1
            remaining -= sizes[idx]
    shares = _cap_unit_sum(np.full(n, 1.0 / n))
    return FeasibleAction(rho=rho, b=shares, x=shares.copy())
