"""Seeded procedural scenario generator.

Trajectories are random-waypoint walks clipped to a square area: each UAV
heads for a uniformly drawn waypoint at a fixed per-time-unit speed and draws
the next waypoint on arrival. Informations get a uniform location; every
(uav, time) pair within the gather radius of that location becomes a source
copy, resampling the location until at least one exists. A scenario is a pure
function of its config, including the seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, replace

from .errors import GenerationError
from .radio import RadioParams
from .scenario import CACHE_CAPACITIES, CACHE_SINGLE, InfoSpec, Scenario

_RESAMPLE_CAP = 200


@dataclass(frozen=True)
class GenConfig:
    uav_count: int
    info_count: int
    horizon: int
    channels: int
    area_side: float
    speed: float
    gather_radius: float
    subrange_count: int
    max_range: float
    destinations_per_info: tuple[int, int]
    radio: RadioParams
    seed: int
    cache_capacity: str = CACHE_SINGLE

    def __post_init__(self):
        object.__setattr__(self, "destinations_per_info",
                           tuple(int(v) for v in self.destinations_per_info))
        for name in ("uav_count", "info_count", "horizon", "channels",
                     "subrange_count"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        for name in ("area_side", "speed", "gather_radius", "max_range"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.gather_radius > self.max_range:
            raise ValueError("gather_radius must not exceed max_range")
        lo, hi = self.destinations_per_info
        if not 1 <= lo <= hi <= self.uav_count:
            raise ValueError("destinations_per_info must satisfy "
                             "1 <= lo <= hi <= uav_count")
        if self.cache_capacity not in CACHE_CAPACITIES:
            raise ValueError(f"cache_capacity must be one of {CACHE_CAPACITIES}")


#: Radio constants of the default evaluation setup. 1 KB = 1000 bytes.
PAPER_RADIO = RadioParams(bandwidth_hz=40e6, path_loss_exponent=2.0,
                          noise_density=1e-9, packet_bits=1_600_000,
                          slot_seconds=0.01)

PROFILES = {
    # full-scale sweeps
    "paper": dict(uav_count=6, info_count=3, horizon=200, channels=2,
                  area_side=150.0, speed=3.0, gather_radius=40.0,
                  subrange_count=10, max_range=60.0,
                  destinations_per_info=(1, 2), radio=PAPER_RADIO),
    # small instances an exact solver can certify
    "micro": dict(uav_count=3, info_count=1, horizon=6, channels=2,
                  area_side=70.0, speed=6.0, gather_radius=22.0,
                  subrange_count=3, max_range=25.0,
                  destinations_per_info=(1, 1), radio=PAPER_RADIO),
}


def make_config(profile: str, seed: int, **overrides) -> GenConfig:
    """Build a GenConfig from a named profile plus keyword overrides."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; expected one of "
                         f"{sorted(PROFILES)}")
    fields = dict(PROFILES[profile])
    radio_overrides = {}
    for key in ("bandwidth_hz", "path_loss_exponent", "noise_density",
                "packet_bits", "slot_seconds"):
        if key in overrides:
            value = overrides.pop(key)
            if value is not None:
                radio_overrides[key] = value
    for key, value in overrides.items():
        if value is not None:
            fields[key] = value
    if radio_overrides:
        fields["radio"] = replace(fields["radio"], **radio_overrides)
    return GenConfig(seed=seed, **fields)


def generate_scenario(config: GenConfig, extra_provenance: dict | None = None) -> Scenario:
    """Generate the scenario determined by `config`; same config, same bytes."""
    rng = random.Random(config.seed)
    area = config.area_side

    trajectories = []
    for _ in range(config.uav_count):
        pos = (rng.uniform(0.0, area), rng.uniform(0.0, area))
        waypoint = (rng.uniform(0.0, area), rng.uniform(0.0, area))
        walk = []
        for _ in range(config.horizon):
            walk.append(pos)
            dx = waypoint[0] - pos[0]
            dy = waypoint[1] - pos[1]
            gap = math.hypot(dx, dy)
            if gap <= config.speed:
                pos = waypoint
                waypoint = (rng.uniform(0.0, area), rng.uniform(0.0, area))
            else:
                scale = config.speed / gap
                pos = (pos[0] + dx * scale, pos[1] + dy * scale)
        trajectories.append(tuple(walk))

    infos = []
    lo, hi = config.destinations_per_info
    for info_id in range(config.info_count):
        sources = None
        for _ in range(_RESAMPLE_CAP):
            loc = (rng.uniform(0.0, area), rng.uniform(0.0, area))
            found = frozenset(
                (u, t)
                for u in range(config.uav_count)
                for t in range(config.horizon)
                if math.dist(trajectories[u][t], loc) <= config.gather_radius)
            if found:
                sources = found
                break
        if sources is None:
            raise GenerationError(
                f"info {info_id}: no gatherable location found in "
                f"{_RESAMPLE_CAP} attempts; widen gather_radius or the walks")
        count = rng.randint(lo, hi)
        destinations = frozenset(rng.sample(range(config.uav_count), count))
        infos.append(InfoSpec(id=info_id, sources=sources,
                              destinations=destinations))

    radii = tuple(config.max_range * k / config.subrange_count
                  for k in range(1, config.subrange_count + 1))
    provenance = {
        "generator": "fleetcast-gen/1",
        "seed": config.seed,
        "config": asdict(config),
    }
    if extra_provenance:
        provenance.update(extra_provenance)
    return Scenario(
        uav_count=config.uav_count,
        horizon=config.horizon,
        channels=config.channels,
        trajectories=tuple(trajectories),
        subrange_radii=radii,
        radio=config.radio,
        infos=tuple(infos),
        cache_capacity=config.cache_capacity,
        provenance=provenance,
    )
