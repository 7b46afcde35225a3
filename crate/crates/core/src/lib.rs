//! Exact closed-form regular and irregular bound-state solutions of the
//! hydrogenic radial Schrödinger equation, with exact-arithmetic verification.

pub mod cli;
pub mod closedform;
pub mod error;
pub mod export;
pub mod numeval;
pub mod oracle;
pub mod ratpoly;
pub mod shellmatch;

pub use error::{Error, Result};
