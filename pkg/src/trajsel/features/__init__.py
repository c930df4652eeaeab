from .ela import SCHEMA_VERSION, FeatureVector, SampleSet, compute_features, feature_schema

__all__ = ["SCHEMA_VERSION", "FeatureVector", "SampleSet", "compute_features", "feature_schema"]
