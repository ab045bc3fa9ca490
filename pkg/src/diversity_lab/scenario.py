"""Continuous-time scenario engine.

Abstracts a live rotation deployment: the application dwells on one of N
platforms for a uniformly random delay, migrates to a uniformly random
other platform (no immediate repeat), and exploits arrive at configured
or random times, permanently marking their target platforms exploited.
The attacker succeeds in a sample when the active platform is exploited
for at least T contiguous seconds within the trial duration. Simulation
is event-driven (migrations and exploit arrivals), not tick-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import substream


@dataclass(frozen=True)
class ExploitSpec:
    """One exploit: the platforms it breaches and its arrival time.

    ``arrival`` is an absolute time in seconds, or None to draw the
    arrival uniformly over the trial duration per sample.
    """

    platforms: frozenset[int]
    arrival: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "platforms", frozenset(int(p) for p in self.platforms))
        if not self.platforms:
            raise ValueError("an exploit must target at least one platform")
        if self.arrival is not None and self.arrival < 0:
            raise ValueError("exploit arrival time must be non-negative")


#: Two network exploits with uniformly random arrivals: one breaches a
#: single platform, the other a pair.
DEFAULT_EXPLOITS = (
    ExploitSpec(frozenset({0})),
    ExploitSpec(frozenset({1, 2})),
)


@dataclass(frozen=True)
class ScenarioConfig:
    """Grid of (N, T) scenario configurations sharing one engine setup."""

    t_values: tuple[float, ...]
    n_values: tuple[int, ...] = (3,)
    duration: float = 900.0
    delay: tuple[float, float] = (20.0, 30.0)
    samples: int = 300
    exploits: tuple[ExploitSpec, ...] = DEFAULT_EXPLOITS
    master_seed: int = 0

    def __post_init__(self) -> None:
        if not self.t_values:
            raise ValueError("at least one attacker goal T is required")
        if any(t < 0 for t in self.t_values):
            raise ValueError("attacker goals must be non-negative")
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ValueError("platform counts must be >= 1")
        if self.duration <= 0:
            raise ValueError("trial duration must be positive")
        lo, hi = self.delay
        if lo <= 0 or hi < lo:
            raise ValueError("migration delay range must satisfy 0 < lo <= hi")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.exploits:
            raise ValueError("at least one exploit is required")
        if self.master_seed < 0:
            raise ValueError("master seed must be non-negative")


@dataclass(frozen=True)
class GridPoint:
    """Attacker success fraction for one (N, T) configuration."""

    n: int
    t: float
    success_fraction: float
    samples: int


def max_control_run(
    n: int,
    duration: float,
    delay: tuple[float, float],
    exploits: tuple[ExploitSpec, ...],
    rng: np.random.Generator,
) -> float:
    """Longest contiguous attacker-control span (seconds) in one sample.

    Draw order per sample: exploit arrivals (for unspecified arrivals) in
    exploit order, then the initial platform, then one dwell per stay and
    one choice per migration. With ``n == 1`` the platform never
    migrates. Control persists across a migration when the next platform
    is already exploited at handover; migration time itself is treated as
    negligible.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lo, hi = delay
    arrivals = [
        spec.arrival if spec.arrival is not None else float(rng.uniform(0.0, duration))
        for spec in exploits
    ]
    exploited_at = [math.inf] * n
    for spec, arrival in zip(exploits, arrivals):
        for platform in spec.platforms:
            if platform < n:
                exploited_at[platform] = min(exploited_at[platform], arrival)

    current = int(rng.integers(n)) if n > 1 else 0
    segments: list[tuple[float, float]] = []
    now = 0.0
    while now < duration:
        if n == 1:
            dwell_end = duration
        else:
            dwell_end = min(now + float(rng.uniform(lo, hi)), duration)
        arrival = exploited_at[current]
        if arrival < dwell_end:
            segments.append((max(now, arrival), dwell_end))
        now = dwell_end
        if n > 1 and now < duration:
            draw = int(rng.integers(n - 1))
            if draw >= current:
                draw += 1
            current = draw

    best = 0.0
    run_start: float | None = None
    run_end = 0.0
    for start, end in segments:
        if run_start is not None and start == run_end:
            run_end = end
        else:
            if run_start is not None:
                best = max(best, run_end - run_start)
            run_start, run_end = start, end
    if run_start is not None:
        best = max(best, run_end - run_start)
    return best


def run_scenario_study(config: ScenarioConfig, labelings=None) -> list[GridPoint]:
    """Success fraction per (N, T) grid point.

    ``labelings``, when given, overrides the exploits' platform sets per
    sample: a sequence of ``config.samples`` entries, each a sequence of
    platform collections aligned with ``config.exploits``. Samples are
    shared across the T sweep for each N, so the success fraction at T is
    the fraction of samples whose longest control run reaches T. Sample
    streams derive from (master seed, N, sample index).
    """
    if labelings is not None:
        labelings = list(labelings)
        if len(labelings) != config.samples:
            raise ValueError("labelings must provide one entry per sample")
        for entry in labelings:
            if len(entry) != len(config.exploits):
                raise ValueError("each labeling must cover every configured exploit")
    results: list[GridPoint] = []
    for n in config.n_values:
        runs: list[float] = []
        for sample in range(config.samples):
            rng = substream(config.master_seed, n, sample)
            exploits = config.exploits
            if labelings is not None:
                exploits = tuple(
                    ExploitSpec(frozenset(platforms), spec.arrival)
                    for spec, platforms in zip(config.exploits, labelings[sample])
                )
            runs.append(max_control_run(n, config.duration, config.delay, exploits, rng))
        for t in config.t_values:
            hits = sum(1 for run in runs if run >= t)
            results.append(GridPoint(n=n, t=t, success_fraction=hits / config.samples, samples=config.samples))
    return results
