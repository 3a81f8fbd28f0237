//! Exact threshold functions and constructive dense-subgrid extraction for
//! subsets of products of finite sets.
//!
//! The crate is organised bottom-up:
//!
//! * [`rational`] and [`bounds`]: exact rationals, the threshold tower
//!   (`sigma`, `t_bound`, `q_bound`, `v_delta`, `f_chain`) and Ackermann
//!   hierarchy checks;
//! * [`grid`]: product spaces, mixed-radix points and bitset point sets;
//! * [`correlation`]: searching a family of events for a well-correlated
//!   `k`-subset;
//! * [`extraction`]: extracting full subgrids from dense sets and the
//!   split-and-stabilize step across levels;
//! * [`family`]: hereditary families of level sets, their rank, and common
//!   witnesses across levels;
//! * [`workbench`]: seeded instance generation, file formats and reports;
//! * [`cli`]: the command-line front end behind the `product-density` binary.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod bounds;
mod budget;
pub mod cli;
pub mod correlation;
mod error;
pub mod extraction;
pub mod family;
pub mod grid;
pub mod rational;
pub mod workbench;

pub use bounds::{Bounds, LogBase, TowerRef};
pub use budget::Budget;
pub(crate) use budget::NodeCounter;
pub use error::{Error, Result};
pub use grid::{GridShape, Point, PointSet, SubgridWitness};
pub use rational::{BigNatural, ExactRational};
