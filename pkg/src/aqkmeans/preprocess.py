"""Text feature pipeline: TF-IDF, modulus feature hashing, and PCA.

The corpus is ingested pre-tokenized (JSON-lines, one document per line).
TF-IDF uses smoothed idf ``ln((1+N)/(1+df)) + 1`` over raw term counts
with L2 normalization. Feature hashing is the signless modulus folding
baseline; PCA is an exact eigendecomposition of the covariance for
moderate dimensions and an iterative top-m extraction above that.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .vecspace import Dataset, DimensionMismatch, EmptyInput

__all__ = [
    "TokenizedDocument",
    "TfIdfModel",
    "PcaModel",
    "read_corpus_jsonl",
    "fit_tfidf",
    "transform_tfidf",
    "feature_hash",
    "fit_pca",
    "transform_pca",
    "explained_variation",
    "save_models_json",
    "load_models_json",
]

# switch from dense eigh to iterative extraction above this dimension
_EXACT_EIG_MAX_DIM = 2000


@dataclass(frozen=True)
class TokenizedDocument:
    id: object
    tokens: tuple
    label: object = None


@dataclass(frozen=True)
class TfIdfModel:
    """token -> column index (insertion order of first occurrence) plus idf."""

    vocabulary: dict
    idf: np.ndarray
    doc_count: int

    def __post_init__(self):
        idf = np.asarray(self.idf, dtype=np.float64)
        if len(idf) != len(self.vocabulary):
            raise ValueError("idf length must match vocabulary size")
        if np.any(idf < 0) or not np.all(np.isfinite(idf)):
            raise ValueError("idf values must be finite and nonnegative")
        object.__setattr__(self, "idf", idf)

    @property
    def dim(self) -> int:
        return len(self.vocabulary)


@dataclass(frozen=True)
class PcaModel:
    """Orthonormal principal axes in descending eigenvalue order."""

    mean: np.ndarray
    components: np.ndarray  # (n_components, original_dim)
    explained_variance_ratio: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=np.float64))
        object.__setattr__(
            self, "components", np.asarray(self.components, dtype=np.float64)
        )
        object.__setattr__(
            self,
            "explained_variance_ratio",
            np.asarray(self.explained_variance_ratio, dtype=np.float64),
        )

    @property
    def n_components(self) -> int:
        return self.components.shape[0]


def read_corpus_jsonl(path) -> list:
    """Parse `{"id":..., "label":... or null, "tokens":[...]}` lines."""
    docs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                docs.append(
                    TokenizedDocument(
                        id=record["id"],
                        tokens=tuple(record["tokens"]),
                        label=record.get("label"),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed document ({exc})") from None
    return docs


def fit_tfidf(corpus) -> TfIdfModel:
    """Build vocabulary (first-occurrence order) and smoothed idf weights."""
    corpus = list(corpus)
    if not corpus:
        raise EmptyInput("cannot fit TF-IDF on an empty corpus")
    vocabulary: dict = {}
    df: dict = {}
    for doc in corpus:
        seen = set()
        for token in doc.tokens:
            if token not in vocabulary:
                vocabulary[token] = len(vocabulary)
            if token not in seen:
                df[token] = df.get(token, 0) + 1
                seen.add(token)
    n = len(corpus)
    idf = np.array(
        [math.log((1.0 + n) / (1.0 + df[t])) + 1.0 for t in vocabulary],
        dtype=np.float64,
    )
    return TfIdfModel(vocabulary=vocabulary, idf=idf, doc_count=n)


def transform_tfidf(model: TfIdfModel, doc: TokenizedDocument) -> np.ndarray:
    """tf * idf, L2-normalized; out-of-vocabulary tokens are dropped."""
    vec = np.zeros(model.dim, dtype=np.float64)
    for token in doc.tokens:
        j = model.vocabulary.get(token)
        if j is not None:
            vec[j] += 1.0
    vec *= model.idf
    norm = np.linalg.norm(vec)
    if norm > 0:
        vec /= norm
    return vec


def feature_hash(vector, target_dim: int) -> np.ndarray:
    """Fold components by index modulus: out[j] = sum of input[i] with i % target_dim == j."""
    if target_dim < 1:
        raise ValueError("target_dim must be >= 1")
    vector = np.asarray(vector, dtype=np.float64)
    out = np.zeros(target_dim, dtype=np.float64)
    np.add.at(out, np.arange(vector.size) % target_dim, vector)
    return out


def _as_matrix(data) -> np.ndarray:
    if isinstance(data, Dataset):
        return data.points
    return np.asarray(data, dtype=np.float64)


def fit_pca(data, n_components: int | None = None, level: float | None = None) -> PcaModel:
    """Fit PCA on the rows of ``data``.

    Exactly one of ``n_components`` or ``level`` must be given; a level
    fraction f in (0, 1] retains ceil(f * original_dim) components.
    """
    x = _as_matrix(data)
    if x.shape[0] < 2:
        raise EmptyInput("PCA needs at least 2 points")
    dim = x.shape[1]
    if (n_components is None) == (level is None):
        raise ValueError("specify exactly one of n_components or level")
    if level is not None:
        if not 0 < level <= 1:
            raise ValueError("level must be in (0, 1]")
        n_components = math.ceil(level * dim)
    if not 1 <= n_components <= dim:
        raise ValueError(f"n_components must be in [1, {dim}]")

    mean = x.mean(axis=0)
    centered = x - mean
    total_variance = float(np.sum(centered ** 2) / (x.shape[0] - 1))

    if dim <= _EXACT_EIG_MAX_DIM:
        cov = np.cov(centered, rowvar=False, ddof=1).reshape(dim, dim)
        eigvals, eigvecs = np.linalg.eigh(cov)
        order = np.argsort(eigvals)[::-1][:n_components]
        eigvals = eigvals[order]
        components = eigvecs[:, order].T
    else:
        from scipy.sparse.linalg import eigsh

        cov = np.cov(centered, rowvar=False, ddof=1)
        eigvals, eigvecs = eigsh(cov, k=n_components, which="LA")
        order = np.argsort(eigvals)[::-1]
        eigvals = eigvals[order]
        components = eigvecs[:, order].T

    # deterministic sign: largest-magnitude coordinate of each axis is positive
    for row in components:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0

    eigvals = np.clip(eigvals, 0.0, None)
    ratios = eigvals / total_variance if total_variance > 0 else np.zeros_like(eigvals)
    return PcaModel(mean=mean, components=components, explained_variance_ratio=ratios)


def transform_pca(model: PcaModel, point) -> np.ndarray:
    """Project a point (or an (n, dim) batch) onto the principal axes."""
    point = np.asarray(point, dtype=np.float64)
    if point.shape[-1] != model.mean.shape[0]:
        raise DimensionMismatch(
            f"point dim {point.shape[-1]} != model dim {model.mean.shape[0]}"
        )
    return (point - model.mean) @ model.components.T


def explained_variation(model: PcaModel) -> float:
    """Total variance fraction captured by the retained components."""
    return float(np.sum(model.explained_variance_ratio))


def save_models_json(path, tfidf: TfIdfModel | None = None, pca: PcaModel | None = None) -> None:
    payload = {"version": 1}
    if tfidf is not None:
        payload["tfidf"] = {
            "vocabulary": list(tfidf.vocabulary.keys()),  # index == position
            "idf": tfidf.idf.tolist(),
            "doc_count": tfidf.doc_count,
        }
    if pca is not None:
        payload["pca"] = {
            "mean": pca.mean.tolist(),
            "components": pca.components.tolist(),
            "explained_variance_ratio": pca.explained_variance_ratio.tolist(),
        }
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def load_models_json(path):
    """Return (TfIdfModel or None, PcaModel or None) from a serialized file."""
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("version") != 1:
        raise ValueError(f"unsupported model file version: {payload.get('version')!r}")
    tfidf = None
    if "tfidf" in payload:
        entry = payload["tfidf"]
        tfidf = TfIdfModel(
            vocabulary={t: i for i, t in enumerate(entry["vocabulary"])},
            idf=np.asarray(entry["idf"], dtype=np.float64),
            doc_count=entry["doc_count"],
        )
    pca = None
    if "pca" in payload:
        entry = payload["pca"]
        pca = PcaModel(
            mean=np.asarray(entry["mean"], dtype=np.float64),
            components=np.asarray(entry["components"], dtype=np.float64),
            explained_variance_ratio=np.asarray(
                entry["explained_variance_ratio"], dtype=np.float64
            ),
        )
    return tfidf, pca
