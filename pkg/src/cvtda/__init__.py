"""Classical simulation and verification of a continuous-variable quantum TDA pipeline.

Exact Betti numbers of Vietoris-Rips complexes serve as the oracle against
which the simulated quantum estimates are checked.
"""
from .cvsim import auto_params, eigendecompose, estimate_betti, sector_distribution
from .geometry import PointCloud, load_point_cloud, normalize_to_unit_sphere, pairwise_sq_distances
from .homology import betti_numbers, boundary_matrix, dirac_operator, laplacian
from .pipeline import RunConfig, RunReport, run_pipeline, run_verification
from .rips import VietorisRipsComplex, enumerate_vr

__version__ = "0.1.0"

__all__ = [
    "PointCloud",
    "load_point_cloud",
    "normalize_to_unit_sphere",
    "pairwise_sq_distances",
    "VietorisRipsComplex",
    "enumerate_vr",
    "boundary_matrix",
    "dirac_operator",
    "laplacian",
    "betti_numbers",
    "eigendecompose",
    "auto_params",
    "sector_distribution",
    "estimate_betti",
    "RunConfig",
    "RunReport",
    "run_pipeline",
    "run_verification",
]
