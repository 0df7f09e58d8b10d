"""Multi-view subspace clustering with nonconvex low-rank/sparse penalties, solved by ADMM.

Typical use::

    from umccev import SolverConfig, run, affinity, spectral_cluster
    cfg = SolverConfig()
    state, trace = run(dataset, cfg)
    labels = spectral_cluster(affinity(state, cfg), dataset.c, seed=0)
"""
from .clustering import fuse_affinity, kmeans, spectral_cluster
from .datasets import MultiViewDataset, SynthSpec, load_manifest, synth_multiview
from .errors import (
    DatasetError,
    DivergenceError,
    InvalidInputError,
    NumericalError,
    UmcCevError,
)
from .metrics import evaluate
from .solver import IterationTrace, SolverConfig, SolverState, Variant, affinity, run

__version__ = "0.1.0"

__all__ = [
    "DatasetError", "DivergenceError", "InvalidInputError", "IterationTrace",
    "MultiViewDataset", "NumericalError", "SolverConfig", "SolverState", "SynthSpec",
    "UmcCevError", "Variant", "affinity", "evaluate", "fuse_affinity", "kmeans",
    "load_manifest", "run", "spectral_cluster", "synth_multiview",
]
