//! Index codes over GF(2), exact minrank, and task-based embedded codes on
//! small side information graphs.

pub mod code;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod io;
pub mod minrank;
pub mod peeters;
pub mod spectral;
pub mod taskbased;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/minrank.md")]
    struct Minrank;
    #[doc = include_str!("../../../book/src/codes.md")]
    struct Codes;
    #[doc = include_str!("../../../book/src/taskbased.md")]
    struct TaskBased;
    #[doc = include_str!("../../../book/src/peeters.md")]
    struct Peeters;
    #[doc = include_str!("../../../book/src/formats.md")]
    struct Formats;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
