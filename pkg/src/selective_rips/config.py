"""Default numeric knobs shared by the library and the command line."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Defaults:
    # absolute slack for triangle-inequality validation
    tau_tri: float = 1e-9
    # divisor in the glued-space density bound delta1' = delta1 / k
    k_divisor: float = 8.0
    # max number of cover elements intersected at once
    size_cap: int = 6
    # max simplex dimension enumerated
    dim_cap: int = 3
    # largest vertex set handed to the exact partition solver
    max_simplex_size: int = 16
    # dense distance matrices larger than this many entries are refused
    max_matrix_entries: int = 60_000_000


DEFAULTS = Defaults()

OUTPUT_DIR_ENV = "SRIPS_OUT"
