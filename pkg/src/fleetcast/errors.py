"""Exception hierarchy for the fleetcast library."""


class FleetcastError(Exception):
    """Base class for all library-specific errors."""


class ScenarioError(FleetcastError):
    """Scenario or info data violates a structural invariant."""


class FormatError(FleetcastError):
    """A file does not conform to its declared on-disk format."""


class PlanStructureError(FleetcastError):
    """A plan references graph elements that do not exist.

    Distinct from infeasibility: a structurally broken plan cannot even be
    checked against the constraints.
    """


class LpSizeError(FleetcastError):
    """The instance exceeds the configured variable cap of the LP exporter."""


class GenerationError(FleetcastError):
    """The scenario generator could not satisfy the requested constraints."""


class InternalError(FleetcastError):
    """An internal consistency guard failed; indicates a bug."""
