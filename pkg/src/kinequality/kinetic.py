"""Kinetic exchange wealth models with uniform (CC) and quenched (CCM) saving.

Random numbers come from numpy's PCG64 generator.  A run seeded with ``s``
uses ``Generator(PCG64(s))``; sweep run ``i`` uses seed ``base_seed ^ i``, so
results do not depend on the order or concurrency in which runs execute.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Union

import numba
import numpy as np

from .errors import NumericError, ValidationError
from .metrics import IndexReport, indices_report
from .pipeline import GKRecord, GKScatter

CONSERVATION_RTOL = 1e-9


@dataclass(frozen=True)
class CCParams:
    lam: float
    agents: int = 1000
    seed: int = 42

    def __post_init__(self):
        _check_lambda(self.lam)
        _check_agents(self.agents)


@dataclass(frozen=True)
class CCMParams:
    delta: float
    agents: int = 1000
    seed: int = 42

    def __post_init__(self):
        _check_delta(self.delta)
        _check_agents(self.agents)


@dataclass(frozen=True)
class SimulationSchedule:
    """Steady-state protocol; one sweep is ``agents`` pair trades."""

    therm_sweeps: int = 10_000
    sample_count: int = 100
    sample_stride: int = 10

    def __post_init__(self):
        for name in ("therm_sweeps", "sample_count", "sample_stride"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValidationError(f"{name} must be a positive integer, got {v}")


@dataclass
class AgentPopulation:
    wealth: np.ndarray
    saving: np.ndarray

    @property
    def total(self) -> float:
        return float(self.wealth.sum())


@dataclass
class SteadyStateSample:
    pooled_wealth: np.ndarray
    report: IndexReport
    saving: np.ndarray


def _check_lambda(lam):
    if not 0.0 <= lam < 1.0:
        raise ValidationError(f"saving propensity must lie in [0, 1), got {lam}")


def _check_delta(delta):
    if not delta > -1.0 or not math.isfinite(delta):
        raise ValidationError(f"delta must be > -1, got {delta}")


def _check_agents(n):
    if int(n) != n or n < 2:
        raise ValidationError(f"need at least 2 agents, got {n}")


def _check_share(m):
    if not m >= 0.0:
        raise ValidationError(f"wealth must be >= 0, got {m}")


def _check_r(r):
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"r must lie in [0, 1], got {r}")


def cc_trade(m_i: float, m_j: float, lam: float, r: float) -> tuple[float, float]:
    _check_share(m_i)
    _check_share(m_j)
    _check_lambda(lam)
    _check_r(r)
    pool = (1.0 - lam) * (m_i + m_j)
    return lam * m_i + r * pool, lam * m_j + (1.0 - r) * pool


def ccm_trade(m_i: float, m_j: float, lam_i: float, lam_j: float, r: float) -> tuple[float, float]:
    _check_share(m_i)
    _check_share(m_j)
    _check_lambda(lam_i)
    _check_lambda(lam_j)
    _check_r(r)
    pool = (1.0 - lam_i) * m_i + (1.0 - lam_j) * m_j
    return lam_i * m_i + r * pool, lam_j * m_j + (1.0 - r) * pool


def sample_saving(delta: float, u):
    """Inverse CDF of the saving density ``(1 + delta) (1 - lam)**delta``."""
    _check_delta(delta)
    u = np.asarray(u, dtype=float)
    if np.any((u < 0) | (u >= 1)):
        raise ValidationError("u must lie in [0, 1)")
    lam = 1.0 - np.power(1.0 - u, 1.0 / (1.0 + delta))
    # float rounding can land exactly on 1 for extreme u
    lam = np.minimum(lam, np.nextafter(1.0, 0.0))
    return float(lam) if lam.ndim == 0 else lam


@numba.njit(nogil=True, cache=True)
def _exchange(wealth, saving, rng, trades):
    n = wealth.shape[0]
    for _ in range(trades):
        i = rng.integers(0, n)
        j = rng.integers(0, n - 1)
        if j >= i:
            j += 1
        r = rng.random()
        li = saving[i]
        lj = saving[j]
        mi = wealth[i]
        mj = wealth[j]
        pool = (1.0 - li) * mi + (1.0 - lj) * mj
        wealth[i] = li * mi + r * pool
        wealth[j] = lj * mj + (1.0 - r) * pool


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def init_population(params: Union[CCParams, CCMParams], rng: np.random.Generator) -> AgentPopulation:
    n = params.agents
    wealth = np.ones(n, dtype=float)
    if isinstance(params, CCParams):
        saving = np.full(n, float(params.lam))
    else:
        saving = np.asarray(sample_saving(params.delta, rng.random(n)), dtype=float)
    return AgentPopulation(wealth, saving)


def evolve(pop: AgentPopulation, rng: np.random.Generator, trades: int) -> AgentPopulation:
    """Apply ``trades`` random pair exchanges to ``pop`` in place."""
    _exchange(pop.wealth, pop.saving, rng, int(trades))
    return pop


def run_steady_state(params: Union[CCParams, CCMParams],
                     schedule: SimulationSchedule | None = None) -> SteadyStateSample:
    """Thermalise, then pool ``sample_count`` wealth snapshots ``sample_stride`` sweeps apart."""
    schedule = schedule or SimulationSchedule()
    rng = make_rng(params.seed)
    pop = init_population(params, rng)
    n = params.agents
    total0 = pop.total

    evolve(pop, rng, schedule.therm_sweeps * n)
    pooled = np.empty(schedule.sample_count * n)
    for s in range(schedule.sample_count):
        if s:
            evolve(pop, rng, schedule.sample_stride * n)
        pooled[s * n:(s + 1) * n] = pop.wealth

    drift = abs(pop.total - total0) / total0
    if drift > CONSERVATION_RTOL or np.any(pop.wealth < 0):
        raise NumericError(f"wealth not conserved (relative drift {drift:.3g})")
    return SteadyStateSample(pooled, indices_report(pooled), pop.saving)


def _map_runs(fn, jobs, parallel, max_workers):
    if parallel and len(jobs) > 1:
        # the trade kernel releases the GIL, so threads run truly in parallel
        with ThreadPoolExecutor(max_workers=max_workers) as ex:
            return list(ex.map(fn, jobs))
    return [fn(j) for j in jobs]


def sweep_lambda(lambdas: Sequence[float], agents: int = 1000,
                 schedule: SimulationSchedule | None = None, base_seed: int = 42, *,
                 parallel: bool = False, max_workers: int | None = None) -> GKScatter:
    schedule = schedule or SimulationSchedule()
    params = [CCParams(float(lam), agents, base_seed ^ i) for i, lam in enumerate(lambdas)]
    runs = _map_runs(lambda p: run_steady_state(p, schedule).report, params, parallel, max_workers)
    return GKScatter([GKRecord("cc", p.lam, rep.g, rep.k, rep.n) for p, rep in zip(params, runs)])


def sweep_delta(deltas: Sequence[float], agents: int = 1000,
                schedule: SimulationSchedule | None = None, base_seed: int = 42,
                quenched_configs: int = 1, *, parallel: bool = False,
                max_workers: int | None = None) -> GKScatter:
    """Per delta, average g and k over independent quenched saving configurations."""
    if int(quenched_configs) != quenched_configs or quenched_configs < 1:
        raise ValidationError(f"quenched_configs must be >= 1, got {quenched_configs}")
    schedule = schedule or SimulationSchedule()
    q = int(quenched_configs)
    params = [CCMParams(float(d), agents, base_seed ^ (i * q + c))
              for i, d in enumerate(deltas) for c in range(q)]
    runs = _map_runs(lambda p: run_steady_state(p, schedule).report, params, parallel, max_workers)
    records = []
    for i, d in enumerate(deltas):
        reps = runs[i * q:(i + 1) * q]
        records.append(GKRecord("ccm", float(d),
                                float(np.mean([r.g for r in reps])),
                                float(np.mean([r.k for r in reps])),
                                int(sum(r.n for r in reps))))
    return GKScatter(records)
