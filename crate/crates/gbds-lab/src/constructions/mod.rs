//! System-to-system constructions: the relative→non-relative "tilde"
//! system, ideal expansion, the (H, S) lattice of hereditary saturated
//! ideals with their quotient systems, and desingularization.

pub mod desing;
pub mod lattice;
pub mod tilde;

use thiserror::Error;

use crate::gba::{GbaError, Member};
use crate::system::SystemError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("sets {0:#b} and {1:#b} are not equivalent modulo the regular ideal")]
    NotEquivalent(Member, Member),
    #[error("construction requires J = B_reg")]
    RelativeSystemUnsupported,
    #[error("enumeration bound {0} too small to reach required witnesses")]
    BoundTooSmall(usize),
    #[error(transparent)]
    Gba(#[from] GbaError),
    #[error(transparent)]
    System(#[from] SystemError),
}
