"""Retrieval loss, cross-validated benchmark, sweeps and embedding export."""
from evaluation.benchmark import BenchmarkCell, BenchmarkReport, derive_seed, run_benchmark, save_report
from evaluation.embeddings import EmbeddingExport, embedding_comparison, export_embeddings, pca_project, silhouette
from evaluation.report import render_table
from evaluation.retrieval import retrieval_loss, retrieve
from evaluation.sweeps import alpha_grid, alpha_sweep, compare_optimizers

__all__ = [
    "BenchmarkCell",
    "BenchmarkReport",
    "EmbeddingExport",
    "alpha_grid",
    "alpha_sweep",
    "compare_optimizers",
    "derive_seed",
    "embedding_comparison",
    "export_embeddings",
    "pca_project",
    "render_table",
    "retrieval_loss",
    "retrieve",
    "run_benchmark",
    "save_report",
    "silhouette",
]
