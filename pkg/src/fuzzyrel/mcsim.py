"""Monte Carlo simulation of independent alternating-renewal components.

Each component starts up and alternates Exp(lambda) up-times with
Exp(1/tau) repair times, returning as good as new. Every trial draws from
its own Philox stream keyed by ``(seed, trial)``, so a trial's history does
not depend on how many other trials run or in which order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import AND, OR, Component, Gate, Ref, SystemModel

TRIAL_CHUNK = 4096


@dataclass(frozen=True)
class SimConfig:
    trials: int
    horizon: float
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.trials, bool) or not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise ValueError(f"horizon must be positive, got {self.horizon!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed!r}")


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float

    def within(self, expected: float, k: float = 3.0) -> bool:
        return abs(self.value - expected) <= k * self.stderr


@dataclass(frozen=True)
class SimEstimate:
    availability: Estimate
    reliability: Estimate
    expected_failures: Estimate
    trials: int
    horizon: float


def _mean_se(x: np.ndarray) -> Estimate:
    n = x.size
    mean = float(x.mean())
    if n < 2:
        return Estimate(mean, math.inf)
    return Estimate(mean, float(x.std(ddof=1) / math.sqrt(n)))


def _stream(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(int(trial) << 64) | int(seed)))


def _uniforms(seed: int, trial: int, n_comp: int, block: int, blocks: int) -> np.ndarray:
    g = _stream(seed, trial)
    if blocks == 1:
        return g.random((n_comp, block))
    # fixed layout: block b holds draws [b*block, (b+1)*block) for every component
    return np.concatenate([g.random((n_comp, block)) for _ in range(blocks)], axis=1)


def _structure(node, index: dict):
    """Vectorised top-event indicator over a boolean ``failed[..., component]`` array."""
    if isinstance(node, Ref):
        i = index[node.id]
        return lambda failed: failed[..., i]
    parts = [_structure(c, index) for c in node.children]
    if node.kind == AND:
        return lambda failed: np.logical_and.reduce([f(failed) for f in parts])
    return lambda failed: np.logical_or.reduce([f(failed) for f in parts])


def _block_size(components, horizon: float) -> int:
    cycles = max(horizon / (1.0 / c.lam + c.tau) for c in components)
    return 2 * (int(math.ceil(1.5 * cycles)) + 4)


def _chunk(m: SystemModel, seed: int, trials: range, horizon: float, block: int, top):
    comps = m.components
    n = len(comps)
    # scale[c, k]: mean of the k-th duration (even k up-time, odd k repair)
    up = np.array([1.0 / c.lam for c in comps])[:, None]
    down = np.array([c.tau for c in comps])[:, None]
    blocks = np.ones(len(trials), dtype=int)
    u = np.stack([_uniforms(seed, tr, n, block, 1) for tr in trials])
    while True:
        scale = np.where(np.arange(u.shape[2]) % 2 == 0, up, down)
        times = np.cumsum(-np.log1p(-u) * scale, axis=2)
        short = np.flatnonzero((times[:, :, -1] < horizon).any(axis=1))
        if short.size == 0:
            break
        # rare: extend only the trials that outlived their draws; zero padding
        # elsewhere adds zero-length durations that stay past the horizon
        blocks[short] += 1
        wide = np.zeros((len(trials), n, int(blocks.max()) * block))
        wide[:, :, : u.shape[2]] = u
        for j in short:
            d = _uniforms(seed, trials[j], n, block, int(blocks[j]))
            wide[j, :, : d.shape[1]] = d
        u = wide

    n_trials, _, k = times.shape
    valid = times < horizon
    step = np.where(np.arange(k) % 2 == 0, 1, -1).astype(np.int8)
    delta = np.where(valid, step, 0).astype(np.int8)

    flat_t = np.where(valid, times, np.inf).reshape(n_trials, n * k)
    order = np.argsort(flat_t, axis=1, kind="stable")
    comp_of = np.repeat(np.arange(n), k)[order]
    d = np.take_along_axis(delta.reshape(n_trials, n * k), order, axis=1)
    onehot = np.zeros((n_trials, n * k, n), dtype=np.int8)
    np.put_along_axis(onehot, comp_of[:, :, None], d[:, :, None], axis=2)
    failed = np.cumsum(onehot, axis=1, dtype=np.int8) > 0

    down_sys = top(failed)
    prev = np.concatenate([np.zeros((n_trials, 1), dtype=bool), down_sys[:, :-1]], axis=1)
    failures = np.count_nonzero(down_sys & ~prev, axis=1)
    up_at_horizon = ~down_sys[:, -1]
    return up_at_horizon, failures


def simulate_system(m: SystemModel, cfg: SimConfig) -> SimEstimate:
    """Estimate system availability, reliability and failure count at ``cfg.horizon``."""
    index = {cid: i for i, cid in enumerate(m.ids)}
    top = _structure(m.top, index)
    block = _block_size(m.components, cfg.horizon)
    ups, counts = [], []
    for start in range(0, cfg.trials, TRIAL_CHUNK):
        trials = range(start, min(start + TRIAL_CHUNK, cfg.trials))
        up, failures = _chunk(m, int(cfg.seed), trials, cfg.horizon, block, top)
        ups.append(up)
        counts.append(failures)
    up = np.concatenate(ups).astype(float)
    count = np.concatenate(counts)
    return SimEstimate(
        availability=_mean_se(up),
        reliability=_mean_se((count == 0).astype(float)),
        expected_failures=_mean_se(count.astype(float)),
        trials=cfg.trials,
        horizon=cfg.horizon,
    )


def simulate_component(lam: float, tau: float, cfg: SimConfig) -> SimEstimate:
    c = Component("c", float(lam), float(tau))
    return simulate_system(SystemModel((c,), Gate(OR, (Ref("c"),))), cfg)
