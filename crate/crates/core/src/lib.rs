//! Blending the chord-transition spaces of two harmonic idioms.
//!
//! Transitions from two idioms are cross-combined into candidate blends,
//! ranked by how strongly and how evenly they inherit the features a user
//! argued to be important, and the best blends are priced into an
//! extended transition matrix that links the two idioms.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the HTTP
//! service and the command line live in the `chordblend` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod argument;
pub mod blend;
pub mod chord;
pub mod error;
pub mod extension;
pub mod idiom;
pub mod matrix;
pub mod sampler;

pub use argument::{
    association, asymmetry, psi, prefer, rate, val, Argument, ArgumentSet, Question, ScoredBlend,
};
pub use blend::{
    blend_idioms, generate_candidates, score_candidate, BlendCandidate, BlendPool, Origin,
    Provenance, DEFAULT_POOL_CAPACITY,
};
pub use chord::{
    dic_vector, directed_interval_class, extract_features, Chord, ChordTransition, ChordType,
    DicVector, Feature, FeatureVector, PcSet, PitchClass,
};
pub use error::{ChordError, Error};
pub use extension::{
    bridge_paths, build_extended, classify_sector, BridgeKind, BridgePath, CellOrigin, Direction,
    ExtendedMatrix, Membership, Sector, DEFAULT_BRIDGE_MASS,
};
pub use idiom::{artificial_idiom, train_idiom, Idiom};
pub use matrix::TransitionMatrix;
pub use sampler::{sample_walk, WalkConfig};
