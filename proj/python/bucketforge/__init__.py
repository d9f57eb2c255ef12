"""Partition-function estimation for discrete graphical models.

Exact bucket elimination, mini-bucket upper/lower bounds, and the
SVD-compensated renormalization estimators, plus seeded Ising generators
and UAI MARKOV file I/O.
"""

from bucketforge._core import (
    ConfigError,
    FactorGraph,
    ModelError,
    ResourceCapError,
    brute_force_log10z,
    bucket_elimination,
    factor_graph,
    gbr,
    induced_width,
    ising_complete,
    ising_grid,
    load_uai,
    mbr,
    mbr_verify,
    mini_bucket_elimination,
    minfill_order,
    parse_uai,
    write_uai,
)

__all__ = [
    "ConfigError",
    "FactorGraph",
    "ModelError",
    "ResourceCapError",
    "brute_force_log10z",
    "bucket_elimination",
    "factor_graph",
    "gbr",
    "induced_width",
    "ising_complete",
    "ising_grid",
    "load_uai",
    "mbr",
    "mbr_verify",
    "mini_bucket_elimination",
    "minfill_order",
    "parse_uai",
    "write_uai",
]
