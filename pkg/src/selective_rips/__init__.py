"""Selective Rips complexes of finite metric spaces."""

from .crushing import crushable_in_union, delta1, delta1_prime, greedy_crushable, replay
from .gluing import gh_upper_bound, glue, identity_correspondence
from .homology import Barcode, betti, induced_rank, persistence
from .metric import FiniteMetricSpace, MetricError, build_space, ball, hausdorff, is_dense
from .nerve import build_cover, good_cover_check, intersection_hausdorff, mu_margin, nerve_complex
from .pipeline import counterexample, delta_chain, reconstruct
from .sampling import SampleSpec, dense_disk_grid, sample
from .srips import ScaleSequence, SimplicialComplex, build_complex, build_filtration, is_simplex

__all__ = [
    "FiniteMetricSpace", "MetricError", "build_space", "ball", "hausdorff", "is_dense",
    "ScaleSequence", "SimplicialComplex", "build_complex", "build_filtration", "is_simplex",
    "Barcode", "betti", "induced_rank", "persistence",
    "crushable_in_union", "delta1", "delta1_prime", "greedy_crushable", "replay",
    "gh_upper_bound", "glue", "identity_correspondence",
    "build_cover", "good_cover_check", "intersection_hausdorff", "mu_margin", "nerve_complex",
    "counterexample", "delta_chain", "reconstruct",
    "SampleSpec", "dense_disk_grid", "sample",
]
