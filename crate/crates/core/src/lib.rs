//! Relative clustering validity from ranked object pairs.
//!
//! A partition induces a binary label on every unordered pair of objects
//! (together or apart); pairwise similarity induces a ranking of the same
//! pairs. Sweeping a threshold down that ranking yields ROC and
//! precision-recall curves whose areas score the partition without any
//! reference labels. The crate also carries the classical indices, the
//! partition generators and the correlation-with-ARI benchmark used to
//! compare them.

pub mod algorithms;
pub mod classic;
pub mod curves;
pub mod cvi;
pub mod datagen;
pub mod dataset;
pub mod error;
pub mod external;
pub mod harness;
pub mod io;
pub mod pairs;

pub use classic::{compute_index, ClassicIndex, Direction};
pub use curves::{auiprc, aucc, auprc, gamma_baker_hubert, sauprc, CurveIndex, RankedPairs, SweepTable};
pub use cvi::{Cvi, Scorer};
pub use dataset::{Dataset, Partition};
pub use error::{Error, Result};
pub use external::{adjusted_rand_index, pearson_correlation};
pub use pairs::{
    euclidean_distances, pairwise_co_membership, similarities_from_distances, CoMembership,
    CondensedPairVector, Distances, Similarities,
};
