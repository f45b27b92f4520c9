from measures.base import (
    SYMMETRIC_TAGS,
    MeasureTag,
    RequirementReport,
    SimilarityMeasure,
    check_requirements,
    similarity,
)
from measures.chopra import ChopraMeasure, chopra_similarity, train_chopra
from measures.classifier import ClassifierMeasure, t31_similarity, train_t31_classifier
from measures.esnn import ESNNMeasure, esnn_batch_loss, esnn_loss, esnn_similarity
from measures.gabel import GabelMeasure, gabel_similarity, train_gabel
from measures.reference import LocalSimParams, T11Measure, T21Measure, fit_t21, t11_similarity, t21_similarity
from measures.registry import MEASURES, MNIST_PRESET, make_measure, measure_for_dataset

__all__ = [
    "MEASURES",
    "MNIST_PRESET",
    "SYMMETRIC_TAGS",
    "ChopraMeasure",
    "ClassifierMeasure",
    "ESNNMeasure",
    "GabelMeasure",
    "LocalSimParams",
    "MeasureTag",
    "RequirementReport",
    "SimilarityMeasure",
    "T11Measure",
    "T21Measure",
    "check_requirements",
    "chopra_similarity",
    "esnn_similarity",
    "gabel_similarity",
    "t31_similarity",
    "train_chopra",
    "train_gabel",
    "train_t31_classifier",
    "esnn_batch_loss",
    "esnn_loss",
    "fit_t21",
    "make_measure",
    "measure_for_dataset",
    "similarity",
    "t11_similarity",
    "t21_similarity",
]
