//! Affine classification of real plane cubic curves.
//!
//! A real polynomial `f(x, y)` of degree three is reduced to one of a finite
//! list of normal forms under the real affine group, together with the affine
//! map and scale witnessing the reduction. Invariants of the level curves
//! `f = c` (singular levels and reducible levels) give an independent check
//! that distinct families are not equivalent.

pub mod cli;
pub mod cubic_form;
pub mod error;
pub mod family;
pub mod group;
pub mod invariants;
pub mod json;
pub mod normalize;
pub mod parse;
pub mod poly;
pub mod roots;

pub use error::{Error, Result};
pub use group::AffineMap;
pub use parse::{parse_map, parse_poly, ParseError};
pub use poly::{Poly2, SubstitutionMap};
