//! A simulated deployment: `M` replicas answering concurrently, some of them
//! silent, and a user decoding from any `N` answers.

pub mod error;
pub mod ingest;
pub mod log;
pub mod node;
pub mod session;

pub use error::{SimError, SimResult};
pub use ingest::{ingest_messages, Mode, Source};
pub use node::{Behavior, DatabaseNode};
pub use session::{replay, run_session, Metrics, SessionConfig, SessionOutcome, Transcript, TranscriptEntry};
