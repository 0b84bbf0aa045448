//! Exact symbolic engine for positive representations of simply-laced
//! split real quantum groups.

pub mod crosscheck;
pub mod error;
pub mod format;
pub mod laurent;
pub mod moddouble;
pub mod qtorus;
pub mod repbuild;
pub mod rootdata;
pub mod transport;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
