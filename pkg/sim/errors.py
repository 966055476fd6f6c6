class SimulationError(Exception):
    """Base class for simulator failures."""


class DuplicateObjectError(SimulationError):
    pass


class MissingOwnershipError(SimulationError):
    """DSM accounting is on but a base object has no owning process."""


class UnknownObjectError(SimulationError):
    pass


class ScheduleError(SimulationError):
    """A schedule or step machine does not fit the simulation it drives."""
