//! Monadic selection functions, explicitly controlled bar recursion and a
//! checker for the Herbrand interpretation of the double negation shift, all
//! over small finite types where every law can be checked by enumeration.

pub mod bar_recursion;
pub mod cli;
pub mod error;
pub mod exhaust;
pub mod gen;
pub mod herbrand;
pub mod monad;
pub mod report;
pub mod selection;
pub mod universe;

pub use error::{Error, Result};
pub use report::{CheckResult, Report};

use serde::{Deserialize, Serialize};

/// Deliberate defects that the checkers must catch. Used as negative
/// controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Monad bind drops part of its result.
    CorruptBind,
    /// The bar map ignores the selected value.
    CorruptBar,
    /// The outcome transform drops the wrong number of positions.
    CorruptTransform,
}
