"""Scenario data model and its versioned on-disk format.

A scenario fixes everything the planner needs: the fleet's trajectories over
a discretized timeline, the radio constants, the nested subrange radii that
quantize transmit power, the channel budget per time unit, and the pieces of
information to disseminate (where each can be gathered, who needs it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import FormatError, ScenarioError
from .jsonio import read_json, write_json
from .radio import RadioParams

SCENARIO_FORMAT = "fleetcast-scenario/1"

CACHE_SINGLE = "single"
CACHE_UNLIMITED = "unlimited"
CACHE_CAPACITIES = (CACHE_SINGLE, CACHE_UNLIMITED)


@dataclass(frozen=True)
class InfoSpec:
    """One piece of information: where it can be gathered and who needs it.

    sources holds (uav, time) pairs at which the information is available for
    pickup; destinations holds UAV ids. Delivery to a destination UAV is
    satisfied by any single time copy of that UAV.
    """

    id: int
    sources: frozenset
    destinations: frozenset

    def __post_init__(self):
        object.__setattr__(self, "sources",
                           frozenset((int(u), int(t)) for u, t in self.sources))
        object.__setattr__(self, "destinations",
                           frozenset(int(u) for u in self.destinations))
        if not isinstance(self.id, int) or self.id < 0:
            raise ScenarioError(f"info id must be a nonnegative integer, got {self.id!r}")
        if not self.sources:
            raise ScenarioError(f"info {self.id}: sources must be nonempty")
        if not self.destinations:
            raise ScenarioError(f"info {self.id}: destinations must be nonempty")


@dataclass(frozen=True)
class Scenario:
    uav_count: int
    horizon: int
    channels: int
    trajectories: tuple          # per UAV: tuple of (x, y) positions, length horizon
    subrange_radii: tuple        # strictly ascending outer radii, shared default
    radio: RadioParams
    infos: tuple
    per_uav_radii: dict | None = None   # optional {uav: radii} overrides
    cache_capacity: str = CACHE_SINGLE
    provenance: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "trajectories", tuple(
            tuple((float(x), float(y)) for x, y in traj)
            for traj in self.trajectories))
        object.__setattr__(self, "subrange_radii",
                           tuple(float(r) for r in self.subrange_radii))
        object.__setattr__(self, "infos", tuple(self.infos))
        if self.per_uav_radii is not None:
            object.__setattr__(self, "per_uav_radii", {
                int(u): tuple(float(r) for r in radii)
                for u, radii in self.per_uav_radii.items()})
        self._validate()

    def _validate(self):
        if self.uav_count < 1:
            raise ScenarioError("uav_count must be at least 1")
        if self.horizon < 1:
            raise ScenarioError("horizon must be at least 1")
        if self.channels < 1:
            raise ScenarioError("channels must be at least 1")
        if len(self.trajectories) != self.uav_count:
            raise ScenarioError(
                f"expected {self.uav_count} trajectories, got {len(self.trajectories)}")
        for u, traj in enumerate(self.trajectories):
            if len(traj) != self.horizon:
                raise ScenarioError(
                    f"trajectory of UAV {u} has {len(traj)} positions, "
                    f"expected horizon {self.horizon}")
            for x, y in traj:
                if not (math.isfinite(x) and math.isfinite(y)):
                    raise ScenarioError(f"trajectory of UAV {u} has non-finite position")
        _check_radii(self.subrange_radii, "subrange_radii")
        if self.per_uav_radii is not None:
            for u, radii in self.per_uav_radii.items():
                if not 0 <= u < self.uav_count:
                    raise ScenarioError(f"per_uav_radii references unknown UAV {u}")
                _check_radii(radii, f"per_uav_radii[{u}]")
        if self.cache_capacity not in CACHE_CAPACITIES:
            raise ScenarioError(
                f"cache_capacity must be one of {CACHE_CAPACITIES}, "
                f"got {self.cache_capacity!r}")
        seen_ids = set()
        for info in self.infos:
            if info.id in seen_ids:
                raise ScenarioError(f"duplicate info id {info.id}")
            seen_ids.add(info.id)
            for u, t in info.sources:
                if not (0 <= u < self.uav_count and 0 <= t < self.horizon):
                    raise ScenarioError(
                        f"info {info.id}: source ({u}, {t}) outside the scenario")
            for u in info.destinations:
                if not 0 <= u < self.uav_count:
                    raise ScenarioError(
                        f"info {info.id}: destination UAV {u} does not exist")

    def radii_for(self, uav: int) -> tuple:
        """Subrange radii used when `uav` transmits."""
        if self.per_uav_radii is not None and uav in self.per_uav_radii:
            return self.per_uav_radii[uav]
        return self.subrange_radii


def _check_radii(radii, label):
    if len(radii) < 1:
        raise ScenarioError(f"{label} must contain at least one radius")
    prev = 0.0
    for r in radii:
        if not (math.isfinite(r) and r > prev):
            raise ScenarioError(f"{label} must be strictly ascending and positive")
        prev = r


def scenario_to_dict(scenario: Scenario) -> dict:
    doc = {
        "format": SCENARIO_FORMAT,
        "uav_count": scenario.uav_count,
        "horizon": scenario.horizon,
        "channels": scenario.channels,
        "cache_capacity": scenario.cache_capacity,
        "radio": {
            "bandwidth_hz": scenario.radio.bandwidth_hz,
            "path_loss_exponent": scenario.radio.path_loss_exponent,
            "noise_density": scenario.radio.noise_density,
            "packet_bits": scenario.radio.packet_bits,
            "slot_seconds": scenario.radio.slot_seconds,
        },
        "subrange_radii": list(scenario.subrange_radii),
        "trajectories": [[[x, y] for x, y in traj] for traj in scenario.trajectories],
        "infos": [
            {
                "id": info.id,
                "sources": sorted([u, t] for u, t in info.sources),
                "destinations": sorted(info.destinations),
            }
            for info in sorted(scenario.infos, key=lambda i: i.id)
        ],
    }
    if scenario.per_uav_radii is not None:
        doc["per_uav_radii"] = {
            str(u): list(radii) for u, radii in sorted(scenario.per_uav_radii.items())}
    if scenario.provenance is not None:
        doc["provenance"] = scenario.provenance
    return doc


def scenario_from_dict(doc: dict) -> Scenario:
    try:
        radio = RadioParams(
            bandwidth_hz=doc["radio"]["bandwidth_hz"],
            path_loss_exponent=doc["radio"]["path_loss_exponent"],
            noise_density=doc["radio"]["noise_density"],
            packet_bits=doc["radio"]["packet_bits"],
            slot_seconds=doc["radio"]["slot_seconds"],
        )
        per_uav = doc.get("per_uav_radii")
        if per_uav is not None:
            per_uav = {int(u): tuple(radii) for u, radii in per_uav.items()}
        return Scenario(
            uav_count=doc["uav_count"],
            horizon=doc["horizon"],
            channels=doc["channels"],
            trajectories=doc["trajectories"],
            subrange_radii=doc["subrange_radii"],
            radio=radio,
            infos=tuple(
                InfoSpec(id=entry["id"],
                         sources=frozenset(tuple(src) for src in entry["sources"]),
                         destinations=frozenset(entry["destinations"]))
                for entry in doc["infos"]),
            per_uav_radii=per_uav,
            cache_capacity=doc.get("cache_capacity", CACHE_SINGLE),
            provenance=doc.get("provenance"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed scenario document: {exc!r}") from None


def save_scenario(scenario: Scenario, path) -> None:
    write_json(path, scenario_to_dict(scenario))


def load_scenario(path) -> Scenario:
    return scenario_from_dict(read_json(path, SCENARIO_FORMAT))
