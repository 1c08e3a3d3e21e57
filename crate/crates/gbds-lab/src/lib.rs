//! Finite generalized Boolean dynamical systems: validated algebras and
//! their dynamics, the associated inverse semigroup and algebra, and the
//! constructions that relate them (quotients, desingularization, duality).

pub mod algebra;
pub mod constructions;
pub mod document;
pub mod expr;
pub mod fixtures;
pub mod gba;
pub mod random;
pub mod report;
pub mod semigroup;
pub mod stone;
pub mod system;
pub mod verify;
