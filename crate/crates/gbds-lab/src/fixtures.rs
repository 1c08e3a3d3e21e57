//! Canonical in-memory fixtures, mirrored by the JSON files in `fixtures/`.

use crate::gba::{FiniteGBA, GbaMorphism};
use crate::system::DynamicalSystem;

/// FIX1: ground {v1,v2}, powerset, one letter `a` with θ_a: v1 ↦ {v2},
/// v2 ↦ ∅, I_a = {∅,{v2}}. `j_full` picks J = B_reg = {∅,{v1}},
/// otherwise J = {∅}.
pub fn fix1(j_full: bool) -> DynamicalSystem {
    let gba = FiniteGBA::powerset(vec!["v1".into(), "v2".into()]).unwrap();
    let theta = GbaMorphism::new(&gba, &gba, vec![(0b01, 0b10), (0b10, 0b00)]).unwrap();
    let ia = gba.ideal_generated(&[0b10]).unwrap();
    let j = if j_full {
        gba.ideal_generated(&[0b01]).unwrap()
    } else {
        gba.ideal_generated(&[]).unwrap()
    };
    DynamicalSystem::validate(gba, vec!["a".into()], vec![theta], vec![ia], j).unwrap()
}

/// FIX2: ground {v1,v2,v3}, powerset, letters {a,b};
/// θ_a: v1 ↦ {v2}, v2 ↦ ∅, v3 ↦ {v1}; θ_b: v2 ↦ {v3}, others ∅;
/// I_a and I_b are the respective F ideals; J = B_reg (all members).
/// A 3-cycle with no sinks.
pub fn fix2() -> DynamicalSystem {
    let gba = FiniteGBA::powerset(vec!["v1".into(), "v2".into(), "v3".into()]).unwrap();
    let theta_a = GbaMorphism::new(
        &gba,
        &gba,
        vec![(0b001, 0b010), (0b010, 0b000), (0b100, 0b001)],
    )
    .unwrap();
    let theta_b = GbaMorphism::new(
        &gba,
        &gba,
        vec![(0b001, 0b000), (0b010, 0b100), (0b100, 0b000)],
    )
    .unwrap();
    // F_a = down-set of θ_a(top) = {v1,v2}; F_b = down-set of {v3}.
    let ia = gba.ideal_generated(&[0b011]).unwrap();
    let ib = gba.ideal_generated(&[0b100]).unwrap();
    let j = gba.ideal_generated(&[0b111]).unwrap();
    DynamicalSystem::validate(
        gba,
        vec!["a".into(), "b".into()],
        vec![theta_a, theta_b],
        vec![ia, ib],
        j,
    )
    .unwrap()
}
