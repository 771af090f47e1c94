//! Disjoint compatibility of plane perfect matchings on points in convex position.

pub mod arrangement;
pub mod compat;
pub mod constructions;
pub mod dcg;
pub mod error;
pub mod geometry;
pub mod matching;
pub mod oracle;
pub mod verify;

pub use compat::{
    exists_witness, find_obstruction, validate_witness, Family, Obstruction, ObstructionKind,
    Witness,
};
pub use error::{Error, MatchingViolation, Result};
pub use geometry::{Chord, ChordSet, ConvexConfig, Parity, MAX_POINTS};
pub use matching::{enumerate_matchings, perimeter_matching, PlaneMatching, Semicycle};
