//! File formats, an HTTP service and a command line around
//! [`chordblend_core`].

pub mod cli;
pub mod error;
pub mod export;
pub mod formats;
pub mod pipeline;
pub mod registry;
pub mod schema;
pub mod service;

pub use error::AppError;
