//! Spanning subsets, minimal common multiples, simple elements, normal forms
//! and Garside elements for monoids given by homogeneous presentations, with
//! the word problem and normal-form automaton of their groups of fractions.

pub mod automaton;
pub mod congruence;
pub mod error;
pub mod garside;
pub mod normal;
pub mod presentation;
pub mod report;
pub mod sampling;
pub mod structure;

pub use congruence::{Element, MonoidContext};
pub use error::{Error, Result};
pub use presentation::{fixture, parse_presentation, Presentation, SignedWord, Word};
