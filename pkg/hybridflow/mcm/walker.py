from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np
import wandb
from tqdm import tqdm

from hybridflow import utils
from hybridflow.errors import ConfigurationError, NonConvergenceError
from hybridflow.grid import GridSpec, MacroField
from hybridflow.mcm.probabilities import TransitionProbs, transition_probs, cumulative_table
from hybridflow.mcm.streams import node_generator


@dataclass(frozen=True)
class EdgeRule:
    """ kind 'fixed' absorbs a walker and scores value; 'adiabatic' reflects it to the adjacent interior node. """
    kind: str = 'fixed'
    value: object = 0.0

    def __post_init__(self):
        if self.kind not in ('fixed', 'adiabatic'):
            raise ConfigurationError(f"Unknown edge rule {self.kind}")


@dataclass(frozen=True)
class BoundarySpec:
    shape: Tuple[int, int]
    west: EdgeRule = EdgeRule()
    east: EdgeRule = EdgeRule()
    south: EdgeRule = EdgeRule()
    north: EdgeRule = EdgeRule()

    def __post_init__(self):
        if not any(rule.kind == 'fixed' for rule in (self.west, self.east, self.south, self.north)):
            raise ConfigurationError("at least one edge must hold a fixed temperature")
        if min(self.shape) < 3:
            raise ConfigurationError(f"walk grid needs an interior node, got shape {self.shape}")

    @classmethod
    def conduction_square(cls, n, hot=1.0, cold=0.0):
        return cls(shape=(n, n), west=EdgeRule('fixed', cold), east=EdgeRule('fixed', cold),
                   south=EdgeRule('fixed', cold), north=EdgeRule('fixed', hot))

    @classmethod
    def heated_cavity(cls, shape, hot=1.0, cold=0.0):
        return cls(shape=tuple(shape), west=EdgeRule('fixed', hot), east=EdgeRule('fixed', cold),
                   south=EdgeRule('adiabatic'), north=EdgeRule('adiabatic'))

    def tables(self):
        """ (absorbing mask, boundary values, reflection target i, reflection target j), all (nx, ny).
            Vertical edges are written last and own the corners. """
        nx, ny = self.shape
        absorb = np.zeros((nx, ny), dtype=bool)
        value = np.zeros((nx, ny))
        ii, jj = np.meshgrid(np.arange(nx), np.arange(ny), indexing='ij')
        target_i, target_j = ii.copy(), jj.copy()
        edges = (('south', (slice(None), 0), (slice(None), 1)), ('north', (slice(None), -1), (slice(None), -2)),
                 ('west', (0, slice(None)), (1, slice(None))), ('east', (-1, slice(None)), (-2, slice(None))))
        for side, index, inward in edges:
            rule = getattr(self, side)
            if rule.kind == 'fixed':
                absorb[index] = True
                value[index] = rule.value
                target_i[index] = ii[index]
                target_j[index] = jj[index]
            else:
                absorb[index] = False
                target_i[index] = np.clip(ii[inward], 1, nx - 2)
                target_j[index] = np.clip(jj[inward], 1, ny - 2)
        return absorb, value, target_i, target_j


@dataclass(frozen=True)
class WalkerConfig:
    n_walkers: int = 10000
    seed: int = 20240601
    max_steps: int = 0
    stream: int = 0

    def __post_init__(self):
        if self.n_walkers < 1:
            raise ConfigurationError("n_walkers must be at least 1")

    def step_limit(self, shape):
        return self.max_steps if self.max_steps > 0 else 10 * max(shape) ** 2


class Estimate(NamedTuple):
    mean: float
    stderr: float
    n: int
    stderr_defined: bool


def walker_moves(r, thresholds):
    """ Displacements for draws r against cumulative thresholds (3, n) in the order +x, +y, -x, -y. """
    c1, c2, c3 = thresholds
    di = np.where(r < c1, 1, np.where(r < c2, 0, np.where(r < c3, -1, 0)))
    dj = np.where(r < c1, 0, np.where(r < c2, 1, np.where(r < c3, 0, -1)))
    return di, dj


def walk_batch(start, cumulative, tables, rng, n, max_steps):
    """ Scores of n walkers released at start. """
    absorb, value, target_i, target_j = tables
    i = np.full(n, start[0])
    j = np.full(n, start[1])
    scores = np.empty(n)
    active = np.arange(n)
    steps = 0
    while active.size:
        if steps >= max_steps:
            raise NonConvergenceError(f"{active.size} walkers from {tuple(start)} still inside after {max_steps} steps")
        ci, cj = i[active], j[active]
        di, dj = walker_moves(rng.random(active.size), cumulative[:, ci, cj])
        ci, cj = ci + di, cj + dj
        hit = absorb[ci, cj]
        scores[active[hit]] = value[ci[hit], cj[hit]]
        keep = ~hit
        i[active[keep]] = target_i[ci[keep], cj[keep]]
        j[active[keep]] = target_j[ci[keep], cj[keep]]
        active = active[keep]
        steps += 1
    return scores


def _check_start(node, shape):
    i, j = node
    if not (1 <= i <= shape[0] - 2 and 1 <= j <= shape[1] - 2):
        raise IndexError(f"walks start at interior nodes, got {node}")


def random_walk(start, probs: TransitionProbs, bounds: BoundarySpec, rng, max_steps=None):
    """ Score of a single walker. """
    _check_start(start, bounds.shape)
    max_steps = max_steps or 10 * max(bounds.shape) ** 2
    return float(walk_batch(start, cumulative_table(probs, bounds.shape), bounds.tables(), rng, 1, max_steps)[0])


def _estimate(samples):
    n = samples.shape[0]
    if n == 1:
        return Estimate(mean=float(samples[0]), stderr=0.0, n=1, stderr_defined=False)
    return Estimate(mean=float(samples.mean()), stderr=float(samples.std(ddof=1) / np.sqrt(n)), n=n,
                    stderr_defined=True)


def estimate_temperature(node, probs: TransitionProbs, bounds: BoundarySpec, cfg: WalkerConfig, rng=None) -> Estimate:
    _check_start(node, bounds.shape)
    rng = rng if rng is not None else node_generator(cfg.seed, node, cfg.stream)
    samples = walk_batch(node, cumulative_table(probs, bounds.shape), bounds.tables(), rng, cfg.n_walkers,
                         cfg.step_limit(bounds.shape))
    return _estimate(samples)


class McmField(NamedTuple):
    T: np.ndarray
    stderr: np.ndarray


def solve_field_mcm(bounds: BoundarySpec, cfg: WalkerConfig, u=None, v=None, alpha=1.0, h=None, threads=None,
                    progress_bar=False) -> McmField:
    """ Independent estimates at every interior node. Adiabatic edge nodes copy their reflection target. """
    nx, ny = bounds.shape
    h = h if h is not None else 1.0 / (max(nx, ny) - 1)
    u = np.zeros((nx, ny)) if u is None else np.asarray(u, dtype=float)
    v = np.zeros((nx, ny)) if v is None else np.asarray(v, dtype=float)

    probs = transition_probs(u, v, alpha, h, h)
    cumulative = cumulative_table(probs, (nx, ny))
    tables = bounds.tables()
    max_steps = cfg.step_limit(bounds.shape)

    def work(node):
        samples = walk_batch(node, cumulative, tables, node_generator(cfg.seed, node, cfg.stream), cfg.n_walkers,
                             max_steps)
        return node, _estimate(samples)

    T = np.zeros((nx, ny))
    stderr = np.zeros((nx, ny))
    nodes = [(i, j) for i in range(1, nx - 1) for j in range(1, ny - 1)]
    with ThreadPoolExecutor(max_workers=utils.worker_count(threads)) as executor:
        for node, est in tqdm(executor.map(work, nodes), total=len(nodes), disable=not progress_bar, desc='mcm'):
            T[node] = est.mean
            stderr[node] = est.stderr

    absorb, value, target_i, target_j = tables
    boundary = np.ones((nx, ny), dtype=bool)
    boundary[1:-1, 1:-1] = False
    fixed = boundary & absorb
    reflected = boundary & ~absorb
    T[fixed] = value[fixed]
    T[reflected] = T[target_i[reflected], target_j[reflected]]
    stderr[reflected] = stderr[target_i[reflected], target_j[reflected]]

    if wandb.run:
        wandb.log({'mcm/median_stderr': float(np.median(stderr[1:-1, 1:-1])), 'mcm/max_stderr': float(stderr.max())})
    return McmField(T=T, stderr=stderr)


def solve_conduction(case, cfg: WalkerConfig, threads=None, progress_bar=False) -> MacroField:
    """ Pure random-walk solution of the heated-lid conduction square. """
    if case.kind != 'conduction':
        raise ConfigurationError(f"mcm solves conduction cases only, got {case.kind}")
    grid = GridSpec.unit_square(case.grid)
    print(f"mcm conduction: {grid.nx}x{grid.ny} nodes, {cfg.n_walkers} walkers per node")
    field = solve_field_mcm(BoundarySpec.conduction_square(case.grid), cfg, threads=threads,
                            progress_bar=progress_bar)
    mf = MacroField.at_rest(grid)
    mf.T = field.T
    mf.T_stderr = field.stderr
    return mf
