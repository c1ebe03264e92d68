"""Reverse shortest paths on unit-disk graphs."""

from ._core import (
    EmptyInputError,
    InfeasibleError,
    InvalidInputError,
    OracleMismatchError,
    UdgError,
    decide,
    gen_points,
    pairwise_distances,
    read_points,
    rsp,
    select,
    sssp,
)

__all__ = [
    "EmptyInputError",
    "InfeasibleError",
    "InvalidInputError",
    "OracleMismatchError",
    "UdgError",
    "decide",
    "gen_points",
    "pairwise_distances",
    "read_points",
    "rsp",
    "select",
    "sssp",
]
