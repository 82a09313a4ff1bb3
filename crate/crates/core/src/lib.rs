//! Quasi-metrics on finite and infinite words, their formal-ball posets,
//! and brute-force order-theoretic checks on finite samples.

pub mod check;
pub mod corpus;
pub mod domain_oracle;
pub mod exec;
pub mod formal_balls;
pub mod metrics;
pub mod ratio;
pub mod words;

pub use exec::Exec;
pub use formal_balls::{BallError, ChainPresentation, FormalBall, SequencePresentation};
pub use metrics::{BaseMetric, Distance, Metric};
pub use ratio::Ratio;
pub use words::{Alphabet, ExtNat, Word, WordError};
