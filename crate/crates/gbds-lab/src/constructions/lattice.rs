//! Hereditary J-saturated ideals, admissible (H, S) pairs with their
//! quotient systems, the lattice structure on pairs, and the algebra-ideal
//! generating sets attached to a pair.

use crate::algebra::{Algebra, AlgebraElement, Ring};
use crate::gba::{GbaIdeal, GbaMorphism, Member};
use crate::system::DynamicalSystem;

use super::ConstructionError;

/// An admissible pair: `H` hereditary and J-saturated, `S` an ideal of
/// `B_H = {A : [A]_H regular in B/H}` containing `H ∪ J`, together with the
/// validated quotient system over `B/H`.
pub struct AdmissiblePair {
    pub h: GbaIdeal,
    pub s: GbaIdeal,
    pub quotient: DynamicalSystem,
}

impl AdmissiblePair {
    pub fn leq(&self, other: &AdmissiblePair) -> bool {
        self.h.is_subset_of(&other.h) && self.s.is_subset_of(&other.s)
    }
}

fn is_hereditary(sys: &DynamicalSystem, h: Member) -> bool {
    (0..sys.alphabet().len()).all(|l| {
        let img = sys.theta(l).apply(h);
        img & h == img
    })
}

fn is_saturated(sys: &DynamicalSystem, h: Member) -> bool {
    sys.j().members().iter().all(|&a| {
        let forced = (0..sys.alphabet().len()).all(|l| {
            let img = sys.theta(l).apply(a);
            img & h == img
        });
        !forced || a & h == a
    })
}

/// The quotient system `(B/H, L, θ/H, I/H)` with `J/H` the projection of J.
pub fn quotient_system(
    sys: &DynamicalSystem,
    h: &GbaIdeal,
) -> Result<DynamicalSystem, ConstructionError> {
    let q = sys.gba().quotient(h)?;
    let classes = q.classes().clone();
    let mut thetas = Vec::new();
    for l in 0..sys.alphabet().len() {
        let images: Vec<(Member, Member)> = classes
            .atoms()
            .iter()
            .map(|&t| (t, q.project(sys.theta(l).apply(t))))
            .collect();
        thetas.push(GbaMorphism::new(&classes, &classes, images)?);
    }
    let ideals: Vec<GbaIdeal> = (0..sys.alphabet().len())
        .map(|l| classes.downset(q.project(sys.ideal(l).max())))
        .collect();
    let j = classes.downset(q.project(sys.j().max()));
    Ok(DynamicalSystem::validate(
        classes,
        sys.alphabet().to_vec(),
        thetas,
        ideals,
        j,
    )?)
}

/// `B_H`: the members whose H-class is regular in the quotient. An ideal of
/// the base algebra (the preimage of the quotient's regular ideal).
pub fn b_h(sys: &DynamicalSystem, h: &GbaIdeal, quotient: &DynamicalSystem) -> GbaIdeal {
    let max = h.max() | quotient.b_reg().max();
    sys.gba().downset(max)
}

/// All admissible pairs, sorted by `(max H, max S)`.
pub fn admissible_pairs(sys: &DynamicalSystem) -> Result<Vec<AdmissiblePair>, ConstructionError> {
    let mut out = Vec::new();
    for &hm in sys.gba().members() {
        if !is_hereditary(sys, hm) || !is_saturated(sys, hm) {
            continue;
        }
        let h = sys.gba().downset(hm);
        let quotient = quotient_system(sys, &h)?;
        let bh = b_h(sys, &h, &quotient);
        let floor = h.max() | sys.j().max();
        for &sm in sys.gba().members() {
            if sm & bh.max() == sm && floor & sm == floor {
                out.push(AdmissiblePair {
                    h: h.clone(),
                    s: sys.gba().downset(sm),
                    quotient: quotient_system(sys, &h)?,
                });
            }
        }
    }
    out.sort_by_key(|p| (p.h.max(), p.s.max()));
    Ok(out)
}

/// The greatest pair below both, from the enumerated poset.
pub fn pair_meet<'a>(
    pairs: &'a [AdmissiblePair],
    x: &AdmissiblePair,
    y: &AdmissiblePair,
) -> Option<&'a AdmissiblePair> {
    let lower: Vec<&AdmissiblePair> = pairs.iter().filter(|p| p.leq(x) && p.leq(y)).collect();
    lower
        .iter()
        .find(|m| lower.iter().all(|p| p.leq(m)))
        .copied()
}

/// The least pair above both, from the enumerated poset.
pub fn pair_join<'a>(
    pairs: &'a [AdmissiblePair],
    x: &AdmissiblePair,
    y: &AdmissiblePair,
) -> Option<&'a AdmissiblePair> {
    let upper: Vec<&AdmissiblePair> = pairs.iter().filter(|p| x.leq(p) && y.leq(p)).collect();
    upper
        .iter()
        .find(|m| upper.iter().all(|p| m.leq(p)))
        .copied()
}

/// The generating set `S_H`: for each `A ∈ S`, the element
/// `p_A − Σ_{a ∈ Δ^{B/H}_{[A]}} s_{a,θ_a(A)}s*_{a,θ_a(A)}`, with the Δ
/// taken in the quotient system.
pub fn ideal_generators<R: Ring>(
    alg: &Algebra<R>,
    pair: &AdmissiblePair,
) -> Result<Vec<AlgebraElement<R>>, ConstructionError> {
    let sys = alg.system();
    let proj = |m: Member| m & !pair.h.max();
    let mut out = Vec::new();
    for &a in pair.s.members() {
        let mut x = alg.inject_p(a).map_err(map_alg)?;
        let class = proj(a);
        for l in 0..sys.alphabet().len() {
            if pair.quotient.theta(l).apply(class) == 0 {
                continue;
            }
            let img = sys.theta(l).apply(a);
            let s = alg.inject_s(l, img, false).map_err(map_alg)?;
            let ss = alg.inject_s(l, img, true).map_err(map_alg)?;
            x = alg.sub(&x, &alg.mul(&s, &ss).map_err(map_alg)?);
        }
        out.push(x);
    }
    Ok(out)
}

fn map_alg(e: crate::algebra::AlgebraError) -> ConstructionError {
    match e {
        crate::algebra::AlgebraError::NotAMember(m) => {
            ConstructionError::Gba(crate::gba::GbaError::NotAMember(m))
        }
        _ => ConstructionError::RelativeSystemUnsupported,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IntRing;
    use crate::fixtures::{fix1, fix2};

    #[test]
    fn fix1_j_full_has_two_pairs() {
        let sys = fix1(true);
        let pairs = admissible_pairs(&sys).unwrap();
        let shape: Vec<(Member, Member)> = pairs.iter().map(|p| (p.h.max(), p.s.max())).collect();
        assert_eq!(shape, vec![(0b00, 0b01), (0b11, 0b11)]);
    }

    #[test]
    fn fix1_j_empty_has_four_pairs() {
        let sys = fix1(false);
        let pairs = admissible_pairs(&sys).unwrap();
        let shape: Vec<(Member, Member)> = pairs.iter().map(|p| (p.h.max(), p.s.max())).collect();
        assert_eq!(
            shape,
            vec![(0b00, 0b00), (0b00, 0b01), (0b10, 0b10), (0b11, 0b11)]
        );
    }

    #[test]
    fn top_pair_is_maximal() {
        for sys in [fix1(true), fix1(false), fix2()] {
            let pairs = admissible_pairs(&sys).unwrap();
            let top = pairs.last().unwrap();
            assert_eq!(top.h.max(), sys.gba().top());
            assert_eq!(top.s.max(), sys.gba().top());
            assert!(pairs.iter().all(|p| p.leq(top)));
        }
    }

    #[test]
    fn pairs_form_a_lattice() {
        for sys in [fix1(true), fix1(false), fix2()] {
            let pairs = admissible_pairs(&sys).unwrap();
            for x in &pairs {
                for y in &pairs {
                    let m = pair_meet(&pairs, x, y).expect("meet exists");
                    let j = pair_join(&pairs, x, y).expect("join exists");
                    assert!(m.leq(x) && m.leq(y));
                    assert!(x.leq(j) && y.leq(j));
                    // Componentwise intersection is the meet.
                    assert_eq!(m.h.max(), x.h.max() & y.h.max());
                    assert_eq!(m.s.max(), x.s.max() & y.s.max());
                }
            }
        }
    }

    #[test]
    fn quotient_systems_validate() {
        // validation already ran inside admissible_pairs; spot-check the
        // morphism laws and the F ⊆ I requirement survived quotienting.
        for sys in [fix1(false), fix2()] {
            for pair in admissible_pairs(&sys).unwrap() {
                let q = &pair.quotient;
                for l in 0..q.alphabet().len() {
                    let f = q.theta(l).apply(q.gba().top());
                    assert!(q.ideal(l).contains(f));
                }
            }
        }
    }

    #[test]
    fn generator_examples() {
        let sys = fix1(false);
        let alg = Algebra::new(&sys, IntRing);
        let pairs = admissible_pairs(&sys).unwrap();

        // (H={∅}, S={∅,{v1}}) → {0, q_{v1}}.
        let p = &pairs[1];
        assert_eq!((p.h.max(), p.s.max()), (0b00, 0b01));
        let gens = ideal_generators(&alg, p).unwrap();
        assert_eq!(gens.len(), 2);
        assert!(gens[0].is_zero());
        assert_eq!(gens[1], alg.q_element(0b01).unwrap());

        // (H={∅,{v2}}, S=H) → quotient Δ of [{v2}] is empty, so the
        // generator for {v2} is plain p_{v2}.
        let p2 = &pairs[2];
        assert_eq!((p2.h.max(), p2.s.max()), (0b10, 0b10));
        let gens2 = ideal_generators(&alg, p2).unwrap();
        assert_eq!(gens2.len(), 2);
        assert!(gens2[0].is_zero());
        assert_eq!(gens2[1], alg.inject_p(0b10).unwrap());
    }

    #[test]
    fn s_equals_h_generators_vanish_only_on_h() {
        // With J = B_reg, generators indexed by A ∈ J normalize to zero.
        let sys = fix1(true);
        let alg = Algebra::new(&sys, IntRing);
        let pairs = admissible_pairs(&sys).unwrap();
        let bottom = &pairs[0];
        let gens = ideal_generators(&alg, bottom).unwrap();
        for (a, g) in bottom.s.members().iter().zip(&gens) {
            assert_eq!(g.is_zero(), sys.j().contains(*a), "A = {a:#b}");
        }
    }
}
