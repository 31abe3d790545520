//! Pre-commitment in General Lotto games.
//!
//! Two players split continuous budgets over battlefields; each battlefield
//! goes to whoever allocates more. The crate models the multi-battlefield
//! game with common valuations, the two-battlefield game with asymmetric
//! valuations, and the sequential variant in which player B publicly commits
//! resources before play.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod ggl;
pub mod ggl_precommit;
pub mod lotto;
pub mod oracle;
pub mod precommit;

pub use error::{LottoError, Result};
