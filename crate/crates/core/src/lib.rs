//! Rate matching for polar codes, built on the bitwise domination order.
//!
//! The crate covers the full chain at desk scale:
//!
//! - [`domination`]: the partial order on `Z_{2^n}`, dominated/dominating
//!   sets, posequence validation and enumeration;
//! - [`codec`]: polar encoding, successive-cancellation decoding, and
//!   symbolic zero-LLR propagation;
//! - [`puncture`]: incapable sets, minimal puncturing families, and
//!   widely-equivalent pattern enumeration;
//! - [`shorten`]: fixed sets, greedy shortening constructions, and the
//!   generator-column oracle;
//! - [`rate_match`]: the unified circular-buffer rate matcher with split
//!   channel allocation and receiver-side de-matching;
//! - [`sim`]: a deterministic Monte-Carlo BPSK/AWGN link simulator.
//!
//! # Example
//!
//! ```
//! use polar_rm::domination::IndexSet;
//! use polar_rm::puncture::{incapable_set, widely_equivalent_patterns};
//!
//! // puncturing the three most dominant outputs silences the complement bits
//! let punctured = IndexSet::new(3, [7, 6, 3])?;
//! assert_eq!(incapable_set(&punctured).members(), &[0, 1, 4]);
//!
//! // ... and is one of exactly sixteen patterns with that effect
//! let family = widely_equivalent_patterns(&incapable_set(&punctured))?;
//! assert_eq!(family.len(), 16);
//! assert!(family.iter().any(|p| p == &punctured));
//! # Ok::<(), polar_rm::Error>(())
//! ```

pub mod codec;
pub mod domination;
pub mod error;
pub mod puncture;
pub mod rate_match;
pub mod shorten;
pub mod sim;

pub use error::{Error, Result};
