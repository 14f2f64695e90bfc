//! Entropic one-class classification.
//!
//! Patterns are embedded in a dissimilarity space spanned by the training
//! set. The minimum spanning tree of the embedded training set yields an
//! entropy estimate and a family of partitions; the chosen partition becomes
//! a set of fuzzy decision regions. A genetic algorithm tunes the parameters
//! of the dissimilarity measure.

pub mod data;
pub mod dissimilarity;
pub mod error;
pub mod fuzzy;
pub mod graph;
pub mod metrics;
pub mod model_io;
pub mod partition;
pub mod pipeline;
pub mod scenarios;
pub mod training;
pub mod union_find;

pub use error::{Error, Result};
