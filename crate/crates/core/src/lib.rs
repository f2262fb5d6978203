//! Words, factorizations and surface diagrams over free products of cyclic groups.

pub mod conjugacy;
pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod factorization;
pub mod fixtures;
pub mod map;
pub mod motion;
pub mod mu;
pub mod par;
pub mod random;
pub mod surgery;
pub mod word;

pub use error::{Error, Result};
pub use par::Execution;
pub use word::{Context, Ctx, FactorSpec, Letter, Order, Word, WordBounds};
