from data.dataset import AttributeSpec, Dataset, minmax_scale, normalize_fold
from data.folds import Split, stratified_kfold
from data.loader import load_dataset, load_dataset_files
from data.pairs import PairMode, PairSet, PairTriplet, build_pairs
from data.schema import ColumnSpec, Schema, load_schema

__all__ = [
    "AttributeSpec",
    "ColumnSpec",
    "Dataset",
    "PairMode",
    "PairSet",
    "PairTriplet",
    "Schema",
    "Split",
    "build_pairs",
    "load_dataset",
    "load_dataset_files",
    "load_schema",
    "minmax_scale",
    "normalize_fold",
    "stratified_kfold",
]
