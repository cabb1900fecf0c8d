//! Robust `T`-private information retrieval from `M` replicated databases,
//! any `N` of which answer, at the capacity rate
//! `(1 - T/N) / (1 - (T/N)^K)`.
//!
//! The user masks each message with a secret invertible matrix, MDS-codes the
//! undesired messages so their contributions align inside summed blocks, and
//! peels that interference off layer by layer when decoding.

pub mod error;
pub mod field;
pub mod layout;
pub mod linalg;
pub mod mds;
pub mod rng;
pub mod scheme;
pub mod wire;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldModulus};
pub use layout::{build_layout, per_layer_counts, total_download, BlockLayout, MessageSubset, SchemeParams};
pub use linalg::Matrix;
pub use mds::{MdsCode, MdsSpec};
pub use rng::SeededRng;
pub use scheme::{
    achieved_rate, answer_query, build_queries, build_queries_with_fault, decode, sample_secrets, Answer, Decoder,
    Fault, MessageStore, Query, QueryPlan, SchemeSecrets,
};
