"""Caps and defaults.

All enumerations take an optional Config; the module-level DEFAULTS instance
is used when none is given.  Caps are desk-scale guardrails, not precision
parameters: raising them never changes a result, only how large an input is
allowed to get before SizeCapExceeded / CapExceeded / SearchSpaceExceeded.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    # poset_core: refuse subset lattices with more than this many subsets
    subset_cap: int = 2 ** 20
    # poset_core / spectrum_classify: monotone maps and compatible tuples
    map_cap: int = 10 ** 6
    # silting_engine: enumerate_2silt object count
    silting_cap: int = 10 ** 4
    # algebra_core: longest path length explored before declaring the
    # quotient infinite-dimensional
    length_cap: int = 64
    # algebra_core: raw path count guard per length level (protects against
    # free algebras on several arrows exhausting memory before length_cap)
    path_cap: int = 200_000
    # oracle: raw representation tuples per dimension vector, and the
    # largest extension-cocycle space enumerated exhaustively
    oracle_search_cap: int = 2 ** 21
    oracle_cocycle_cap: int = 2 ** 14

    def __post_init__(self):
        for name in (
            "subset_cap", "map_cap", "silting_cap", "length_cap",
            "path_cap", "oracle_search_cap", "oracle_cocycle_cap",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULTS = Config()
