"""Executable semiring semantics for first-order logic, circuits and machines."""

from .semiring import (
    BOOLEAN,
    INF,
    LUKASIEWICZ,
    NATURAL,
    POLYNOMIAL,
    PROBABILITY,
    SEMIRINGS,
    TROPICAL,
    Polynomial,
    Semiring,
    SemiringError,
    UnsupportedOrderError,
    add,
    check_laws,
    get_semiring,
    leq,
    mul,
    xi,
)

__version__ = "0.1.0"
