from .tree import (UNBOUNDED, Criterion, Hyper, MaxFeatures, RandomForest, RegressionTree,
                   best_split, fit_forest, fit_tree, n_split_features)
from .validation import (CvReport, Dataset, HyperGrid, TargetType, grid_search, group_kfold,
                         logo_folds, r2, r2_flagged, transform_target)
from .training import model_seed, train_all

__all__ = ["UNBOUNDED", "Criterion", "Hyper", "MaxFeatures", "RandomForest", "RegressionTree",
           "best_split", "fit_forest", "fit_tree", "n_split_features", "CvReport", "Dataset",
           "HyperGrid", "TargetType", "grid_search", "group_kfold", "logo_folds", "r2",
           "r2_flagged", "transform_target", "model_seed", "train_all"]
