"""Decentralization metrics over multi-input/multi-output transaction ledgers."""

from ._core import (
    ConvergenceError,
    DataError,
    Ledger,
    __version__,
    classify,
    d_hhi,
    d_static,
    d_static_series,
    dispersion,
    dispersion_series,
    hhi,
    hhi_series,
    pagerank,
    proportions,
    retention,
    run,
    spearman,
    stability,
    synth,
    top_n,
)

__all__ = [
    "ConvergenceError",
    "DataError",
    "Ledger",
    "__version__",
    "classify",
    "d_hhi",
    "d_static",
    "d_static_series",
    "dispersion",
    "dispersion_series",
    "hhi",
    "hhi_series",
    "pagerank",
    "proportions",
    "retention",
    "run",
    "spearman",
    "stability",
    "synth",
    "top_n",
]
