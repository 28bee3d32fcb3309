//! A text format for equation systems.
//!
//! ```text
//! # the 0,1-game
//! game g01 {
//!   g01 = A ? leaf(A:0, B:1) | g10;
//!   g10 = B ? leaf(A:1, B:0) | g01;
//! }
//! profile s10a of g01 {
//!   s10a = A -> r ? leaf(A:0, B:1) | B -> d ? leaf(A:1, B:0) | s10a;
//! }
//! ```
//!
//! The first equation of a block is its root. Strategy nodes are headed by
//! an agent or by a bare `d`/`r`.

mod lexer;
mod parser;
mod serialize;

use std::fmt;

use crate::termgraph::{Kind, TermGraph};

pub use lexer::Pos;
pub use parser::parse;
pub use serialize::serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub name: String,
    pub kind: Kind,
    pub graph: TermGraph,
    /// The game named in an `of` clause.
    pub of: Option<String>,
}

/// Looks a block up by name.
pub fn find<'a>(blocks: &'a [Block], name: &str) -> Option<&'a Block> {
    blocks.iter().find(|b| b.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslError {
    pub pos: Pos,
    pub message: String,
}

impl DslError {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        DslError { pos, message: message.into() }
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for DslError {}
