//! Exact combinatorics of quasi-particle bases for the twisted affine Lie
//! algebras `A_{2l-1}^(2)` and `D_{l+1}^(2)` at rectangular highest weights.
//!
//! The crate is organised bottom-up:
//!
//! - [`root_datum`]: folded root data, orbit projections, lattice balls.
//! - [`series`]: truncated graded series with rational exponents and
//!   big-integer coefficients.
//! - [`quasiparticle`]: monomials, difference conditions and basis enumeration.
//! - [`characters`]: closed-form fermionic/bosonic characters.
//! - [`fixtures`]: hand-transcribed example characters for A_5^(2) and D_3^(2).
//! - [`verification`]: named identity checks producing [`VerificationReport`]s.
//! - [`json`]: the stable JSON encoding used by the command-line tool.

pub mod characters;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod linalg;
pub mod quasiparticle;
pub mod rational;
pub mod root_datum;
pub mod series;
pub mod verification;

pub use characters::{CharacterObject, CharacterRequest, Method};
pub use error::{Error, Result};
pub use quasiparticle::{BasisKind, ChargeCap, QPMonomial, QuasiParticle};
pub use rational::Q;
pub use root_datum::{RectangularWeight, RootSeries, TwistedRootDatum};
pub use series::{Exponent, GradedSeries};
pub use verification::{Check, CheckStatus, VerificationReport};

