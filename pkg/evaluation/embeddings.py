"""
Embedding export: G(x) for a set of rows, their 2-D PCA coordinates and the
silhouette score of the class labels in embedding space.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.decomposition import PCA
from sklearn.metrics import silhouette_score

from core.config import RunConfig
from core.errors import ConfigError, ProjectionError
from core.log import RunLogger
from data.dataset import Dataset
from evaluation.benchmark import SplitTask, derive_seed, folds_for, split_data, train_split
from measures.base import SimilarityMeasure
from measures.registry import measure_for_dataset


@dataclass
class Projection:
    coords: np.ndarray  # rows x dims
    components: np.ndarray  # dims x width, orthonormal rows
    explained_variance: np.ndarray
    mean: np.ndarray


def pca_project(vectors: np.ndarray, dims: int = 2) -> Projection:
    """Project mean-centred ``vectors`` onto their top ``dims`` singular directions."""
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2:
        raise ProjectionError(f"expected a 2-D matrix, got shape {vectors.shape}")
    rows, width = vectors.shape
    if rows < dims:
        raise ProjectionError(f"{rows} row(s) cannot be projected onto {dims} dimensions")
    if width < dims:
        raise ProjectionError(f"vectors of width {width} cannot be projected onto {dims} dimensions")
    pca = PCA(n_components=dims, svd_solver="full")
    coords = pca.fit_transform(vectors)
    return Projection(coords=coords, components=pca.components_, explained_variance=pca.explained_variance_, mean=pca.mean_)


def silhouette(embeddings: np.ndarray, labels: np.ndarray) -> Optional[float]:
    """Euclidean silhouette; None unless 2 <= distinct labels < rows."""
    labels = np.asarray(labels)
    distinct = np.unique(labels).shape[0]
    if distinct < 2 or distinct >= labels.shape[0]:
        return None
    return float(silhouette_score(embeddings, labels, metric="euclidean"))


@dataclass
class EmbeddingExport:
    row_ids: np.ndarray
    labels: np.ndarray
    classes: List[str]
    embeddings: np.ndarray
    projection: Projection
    silhouette: Optional[float]

    def rows(self) -> List[Dict[str, Any]]:
        out = []
        for i, row_id in enumerate(self.row_ids):
            row = {
                "row_id": int(row_id),
                "label": self.classes[self.labels[i]],
                "pc1": float(self.projection.coords[i, 0]),
                "pc2": float(self.projection.coords[i, 1]),
            }
            for j, v in enumerate(self.embeddings[i]):
                row[f"e{j}"] = float(v)
            out.append(row)
        return out

    @property
    def columns(self) -> List[str]:
        return ["row_id", "label", "pc1", "pc2"] + [f"e{j}" for j in range(self.embeddings.shape[1])]

    def summary(self) -> Dict[str, Any]:
        return {
            "rows": int(self.row_ids.shape[0]),
            "embedding_width": int(self.embeddings.shape[1]),
            "silhouette": self.silhouette,
            "explained_variance": [float(v) for v in self.projection.explained_variance],
        }


def export_embeddings(measure: SimilarityMeasure, ds: Dataset, row_ids: Sequence[int]) -> EmbeddingExport:
    """Embed ``row_ids`` of ``ds`` with the measure's learned G."""
    if not hasattr(measure, "embed"):
        raise ConfigError(f"measure '{measure.name}' has no learned embedding function")
    row_ids = np.asarray(row_ids, dtype=np.int64)
    embeddings = measure.embed(ds.x[row_ids])
    labels = ds.labels[row_ids]
    return EmbeddingExport(
        row_ids=row_ids,
        labels=labels,
        classes=list(ds.classes),
        embeddings=embeddings,
        projection=pca_project(embeddings),
        silhouette=silhouette(embeddings, labels),
    )


def embedding_comparison(
    ds: Dataset,
    cfg: RunConfig,
    measure_name: str = "esnn",
    split_index: int = 0,
    logger: Optional[RunLogger] = None,
) -> Tuple[EmbeddingExport, EmbeddingExport]:
    """
    Embeddings of one split's validation rows before and after training,
    from the same initial weights.
    """
    log = logger or RunLogger("embeddings", ds.name, measure_name)
    splits = folds_for(ds, cfg)
    if not 0 <= split_index < len(splits):
        raise ConfigError(f"split {split_index} out of range (0..{len(splits) - 1})")
    split = splits[split_index]
    epochs = int(cfg.epochs[0])
    seed = derive_seed(cfg.seed, ds.name, measure_name, split.index, epochs)

    data = split_data(ds, split, cfg)
    before = export_embeddings(measure_for_dataset(measure_name, data, cfg, seed), data, split.val_ids)
    measure, data, _ = train_split(ds, SplitTask(ds.name, measure_name, epochs, split, seed, cfg), logger=log)
    after = export_embeddings(measure, data, split.val_ids)
    log.success(f"silhouette untrained={before.silhouette} trained={after.silhouette}")
    return before, after
