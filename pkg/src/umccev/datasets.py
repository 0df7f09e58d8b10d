"""Multi-view datasets: in-memory container, text formats, synthetic generator.

On-disk layout
--------------
Matrix files are comma-separated decimal floats, one matrix row per line,
no header. View matrices store features as rows and samples as columns.

Label files hold one 0-based integer per line; line ``i`` is sample ``i``.

A manifest is a ``key = value`` text file::

    # lines starting with '#' are ignored
    view = orl_view1.csv        # repeatable, order is view order
    view = orl_view2.csv
    labels = orl_labels.txt     # optional
    clusters = 40
    normalize = unit            # unit | none
    samples = 400               # optional declared sample count

Relative paths are resolved against the manifest's directory. Column ``i``
of every view and line ``i`` of the label file must describe the same
entity; the optional ``samples`` key is checked against every file.
"""
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidInputError,
    LabelRangeError,
    ManifestParseError,
    MatrixParseError,
    MissingFileError,
)

NORMALIZATIONS = ("unit", "none")


@dataclass(frozen=True)
class MultiViewDataset:
    views: list
    c: int
    labels: np.ndarray = None
    names: list = field(default=None)

    def __post_init__(self):
        views = [np.asarray(V, dtype=np.float64) for V in self.views]
        if not views:
            raise InvalidInputError("a dataset needs at least one view")
        names = list(self.names) if self.names is not None else [f"view{i}" for i in range(len(views))]
        if len(names) != len(views):
            raise InvalidInputError("one name per view required")
        for name, V in zip(names, views):
            if V.ndim != 2:
                raise InvalidInputError(f"{name} is not a 2-D matrix")
            if not np.all(np.isfinite(V)):
                raise InvalidInputError(f"{name} contains non-finite values")
        n = views[0].shape[1]
        for name, V in zip(names[1:], views[1:]):
            if V.shape[1] != n:
                raise DimensionMismatchError(
                    f"{names[0]} has {n} samples but {name} has {V.shape[1]}"
                )
        c = int(self.c)
        if not 1 <= c <= n:
            raise InvalidInputError(f"cluster count {c} must lie in [1, {n}]")
        labels = self.labels
        if labels is not None:
            labels = np.asarray(labels)
            if labels.shape != (n,):
                raise DimensionMismatchError(f"{labels.size} labels for {n} samples")
            if not np.issubdtype(labels.dtype, np.integer):
                raise LabelRangeError("labels must be integers")
            if c < 2:
                raise InvalidInputError("labelled datasets need at least 2 clusters")
            if labels.min() < 0 or labels.max() >= c:
                raise LabelRangeError(f"labels must lie in [0, {c}), got [{labels.min()}, {labels.max()}]")
            labels = labels.astype(np.int64)
        object.__setattr__(self, "views", views)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self):
        return self.views[0].shape[1]

    @property
    def n_views(self):
        return len(self.views)

    @property
    def shape(self):
        """``(samples, views, clusters)``."""
        return self.n, self.n_views, self.c

    def normalized(self, how="unit"):
        if how == "none":
            return self
        if how != "unit":
            raise InvalidInputError(f"unknown normalization {how!r}")
        return MultiViewDataset(
            [normalize_unit_columns(V) for V in self.views], self.c, self.labels, self.names
        )


def normalize_unit_columns(X):
    """Scale each column to unit Euclidean norm; zero columns stay zero."""
    X = np.asarray(X, dtype=np.float64)
    norms = np.linalg.norm(X, axis=0)
    out = np.zeros_like(X)
    nz = norms > 0
    out[:, nz] = X[:, nz] / norms[nz]
    return out


# -- text formats -----------------------------------------------------------

def atomic_write_text(path, text):
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    try:
        with open(tmp, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def format_matrix(M):
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    return "".join(",".join(f"{x:.17g}" for x in row) + "\n" for row in M)


def save_matrix(M, path):
    atomic_write_text(path, format_matrix(M))


def load_matrix(path):
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"matrix file not found: {path}")
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise MatrixParseError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise MatrixParseError(f"{path}: empty matrix file")
    width = len(rows[0])
    for lineno, row in enumerate(rows, 1):
        if len(row) != width:
            raise MatrixParseError(f"{path}: row {lineno} has {len(row)} entries, expected {width}")
    return np.array(rows, dtype=np.float64)


def save_labels(labels, path):
    atomic_write_text(path, "".join(f"{int(x)}\n" for x in labels))


def load_labels(path):
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"label file not found: {path}")
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(int(line))
            except ValueError:
                raise MatrixParseError(f"{path}:{lineno}: not an integer label: {line!r}") from None
    return np.array(out, dtype=np.int64)


def parse_key_values(path, repeatable=("view",)):
    """Read ``key = value`` lines. Repeatable keys map to lists."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"file not found: {path}")
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ManifestParseError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if not key or not value:
                raise ManifestParseError(f"{path}:{lineno}: empty key or value")
            if key in repeatable:
                out.setdefault(key, []).append(value)
            elif key in out:
                raise ManifestParseError(f"{path}:{lineno}: duplicate key {key!r}")
            else:
                out[key] = value
    return out


def _parse_int(path, key, value):
    try:
        return int(value)
    except ValueError:
        raise ManifestParseError(f"{path}: {key} must be an integer, got {value!r}") from None


def load_manifest(path):
    """Load a :class:`MultiViewDataset` from a manifest file (see module docstring)."""
    path = Path(path)
    entries = parse_key_values(path)
    unknown = set(entries) - {"view", "labels", "clusters", "normalize", "samples"}
    if unknown:
        raise ManifestParseError(f"{path}: unknown keys {sorted(unknown)}")
    if not entries.get("view"):
        raise ManifestParseError(f"{path}: no 'view' entries")
    if "clusters" not in entries:
        raise ManifestParseError(f"{path}: missing 'clusters'")
    c = _parse_int(path, "clusters", entries["clusters"])
    normalize = entries.get("normalize", "unit")
    if normalize not in NORMALIZATIONS:
        raise ManifestParseError(f"{path}: normalize must be one of {NORMALIZATIONS}, got {normalize!r}")
    declared = _parse_int(path, "samples", entries["samples"]) if "samples" in entries else None

    base = path.parent
    views, names = [], []
    for ref in entries["view"]:
        vpath = base / ref
        V = load_matrix(vpath)
        if declared is not None and V.shape[1] != declared:
            raise DimensionMismatchError(
                f"{vpath} has {V.shape[1]} samples, manifest declares {declared}"
            )
        if views and V.shape[1] != views[0].shape[1]:
            raise DimensionMismatchError(
                f"view {names[0]} has {views[0].shape[1]} samples but view {ref} has {V.shape[1]}"
            )
        views.append(V)
        names.append(ref)
    labels = None
    if "labels" in entries:
        lpath = base / entries["labels"]
        labels = load_labels(lpath)
        if labels.size != views[0].shape[1]:
            raise DimensionMismatchError(f"{lpath} has {labels.size} labels for {views[0].shape[1]} samples")
    return MultiViewDataset(views, c, labels, names).normalized(normalize)


def write_manifest(path, view_files, clusters, labels_file=None, normalize="unit", samples=None):
    lines = [f"view = {v}" for v in view_files]
    if labels_file is not None:
        lines.append(f"labels = {labels_file}")
    lines.append(f"clusters = {int(clusters)}")
    lines.append(f"normalize = {normalize}")
    if samples is not None:
        lines.append(f"samples = {int(samples)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def save_dataset(data, directory, prefix="data", normalize="unit"):
    """Write views, labels and a manifest into ``directory``; return the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = []
    for i, V in enumerate(data.views):
        name = f"{prefix}_view{i}.csv"
        save_matrix(V, directory / name)
        files.append(name)
    labels_file = None
    if data.labels is not None:
        labels_file = f"{prefix}_labels.txt"
        save_labels(data.labels, directory / labels_file)
    manifest = directory / f"{prefix}.manifest"
    write_manifest(manifest, files, data.c, labels_file, normalize, samples=data.n)
    return manifest


# -- synthetic data -----------------------------------------------------------

@dataclass(frozen=True)
class SynthSpec:
    clusters: int = 3
    samples_per_cluster: int = 20
    ambient_dims: tuple = (10, 15)
    subspace_dim: int = 3
    noise_sigma: float = 0.01
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ambient_dims", tuple(int(m) for m in self.ambient_dims))
        if self.clusters < 1 or self.samples_per_cluster < 1 or self.subspace_dim < 1:
            raise InvalidInputError("cluster count, samples per cluster and subspace dim must be positive")
        if not self.ambient_dims or min(self.ambient_dims) < 1:
            raise InvalidInputError("need at least one view with positive ambient dimension")
        if self.subspace_dim >= min(self.ambient_dims):
            raise InvalidInputError(
                f"subspace dim {self.subspace_dim} must be below every ambient dim {self.ambient_dims}"
            )
        if self.noise_sigma < 0:
            raise InvalidInputError("noise sigma must be nonnegative")

    @property
    def views(self):
        return len(self.ambient_dims)


def synth_multiview(spec):
    """Union-of-subspaces data, one random orthonormal basis per (view, cluster).

    A sample keeps the same subspace coefficients in every view, so all views
    describe the same entity. With one cluster the dataset is unlabelled.
    """
    rng = np.random.default_rng(spec.seed)
    c, per, d = spec.clusters, spec.samples_per_cluster, spec.subspace_dim
    coeffs = [rng.standard_normal((d, per)) for _ in range(c)]
    views = []
    for m in spec.ambient_dims:
        blocks = []
        for k in range(c):
            basis, _ = np.linalg.qr(rng.standard_normal((m, d)))
            blocks.append(basis @ coeffs[k])
        V = np.hstack(blocks)
        if spec.noise_sigma > 0:
            V = V + spec.noise_sigma * rng.standard_normal(V.shape)
        views.append(V)
    # a single cluster carries no label information, and labelled datasets need c >= 2
    labels = np.repeat(np.arange(c), per) if c > 1 else None
    return MultiViewDataset(views, c, labels, [f"view{i}" for i in range(len(views))])
