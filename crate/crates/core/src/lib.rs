//! Extended norms, submeasures and ideals generated by hereditary families of
//! finite sets, computed exactly over the rationals.

pub mod diagnostics;
pub mod error;
pub mod families;
pub mod finset;
pub mod norms;
pub mod ordinal;
pub mod rational;
pub mod schreier;
pub mod setgen;
pub mod submeasures;

pub use error::{Error, Result};
pub use families::{CapRule, Family};
pub use finset::FiniteSet;
pub use norms::FinVec;
pub use ordinal::Ordinal;
pub use rational::Rational;
pub use setgen::{BitString, PrefixRule, SetGenerator};
pub use submeasures::{SubmeasureSpec, WeightSeq};
