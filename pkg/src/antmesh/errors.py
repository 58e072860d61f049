"""Exception types shared across the simulator."""


class AntmeshError(Exception):
    """Base class for all simulator errors."""


class SchedulingInPast(AntmeshError):
    """An event was scheduled before the current simulation clock."""


class InvalidRange(AntmeshError):
    """A random draw was requested over an empty interval (lo > hi)."""


class AllZeroWeights(AntmeshError):
    """Weighted sampling was attempted over weights that sum to zero."""


class EmptyRow(AntmeshError):
    """A pheromone row operation was applied to a row with no entries."""


class NoNeighbors(AntmeshError):
    """A forwarding decision was requested at a node with no neighbors."""


class NoRoute(AntmeshError):
    """No usable routing entry exists for the requested destination."""


class DegenerateTime(AntmeshError):
    """A backward pheromone update produced a non-positive remaining time."""


class NoTraffic(AntmeshError):
    """A ratio metric was requested for a run that sent no data packets."""


class NoDeliveries(AntmeshError):
    """A delay metric was requested for a run with zero delivered packets."""


class InvalidConfig(AntmeshError):
    """A scenario configuration violates a structural constraint."""


class ParseError(InvalidConfig):
    """A scenario file line could not be parsed."""


class UnknownKey(InvalidConfig):
    """A scenario file names a key that no component declares."""


class TypeMismatch(InvalidConfig):
    """A scenario value has the wrong type or is out of bounds."""


class IoFailure(AntmeshError):
    """A results file could not be read or written."""
