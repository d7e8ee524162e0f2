//! Regulated L² norms on both strata.
