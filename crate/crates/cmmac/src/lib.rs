//! Co-membership based ranking of anomalous communities in complex
//! networks, with the anomaly-infused random network generator and the
//! evaluation harness used to compare it against six topological baselines.
//!
//! The pipeline: build a bipartite co-membership view from a network and its
//! (possibly overlapping) partition map, train a link predictor on balanced
//! membership/non-membership examples, aggregate predicted edge
//! probabilities into four per-community meta-features, and rank communities
//! so the least normal-looking sit first.

pub mod baselines;
pub mod bipartite;
pub mod classifier;
pub mod error;
pub mod eval;
pub mod features;
pub mod graph;
pub mod metafeatures;
pub mod netgen;

pub use error::{Error, Result};
