//! The full invariant suite: every module's laws checked against a given
//! system, shared between the `verify` CLI command and the acceptance
//! tests.

use std::collections::{BTreeMap, BTreeSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, AlgebraElement, IntRing, Monomial};
use crate::constructions::{
    desing::{check_embedding_conditions, desingularize, identity_embedding_fails},
    lattice::{admissible_pairs, pair_join, pair_meet},
    tilde::tilde_system,
};
use crate::gba::Member;
use crate::report::Check;
use crate::semigroup::{enumerate_elements, grade, live_words, multiply, star, Element};
use crate::stone::{filters, find_isomorphism, labelled_to_gbds, stone_graph};
use crate::system::DynamicalSystem;

/// Knobs for the suite; `bound` limits word lengths, `triple_budget` caps
/// the associativity scan (exhaustive when it fits, seeded sample
/// otherwise).
#[derive(Clone, Copy)]
pub struct SuiteOptions {
    pub bound: usize,
    pub triple_budget: usize,
    pub grading_pairs: usize,
    pub collapse_elements: usize,
    pub collapse_schedules: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            bound: 6,
            triple_budget: 200_000,
            grading_pairs: 200,
            collapse_elements: 20,
            collapse_schedules: 5,
            seed: crate::random::base_seed(),
        }
    }
}

fn elements_with_zero(sys: &DynamicalSystem, bound: usize) -> Vec<Element<usize, Member>> {
    let mut els = enumerate_elements(sys, bound);
    els.push(Element::Zero);
    els
}

/// Associativity and involution antimultiplicativity at the bound.
pub fn check_semigroup_laws(sys: &DynamicalSystem, opts: &SuiteOptions) -> Check {
    let els = elements_with_zero(sys, opts.bound);
    let n = els.len();
    let mut bad = Vec::new();
    let mut checked = 0;
    let exhaustive = n.saturating_mul(n).saturating_mul(n) <= opts.triple_budget;
    let mut run = |i: usize, j: usize, k: usize| {
        let (x, y, z) = (&els[i], &els[j], &els[k]);
        let xy = multiply(sys, x, y).unwrap();
        let yz = multiply(sys, y, z).unwrap();
        if multiply(sys, &xy, z).unwrap() != multiply(sys, x, &yz).unwrap() {
            bad.push(format!("assoc: {x:?}, {y:?}, {z:?}"));
        }
        checked += 1;
    };
    if exhaustive {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    run(i, j, k);
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.triple_budget {
            run(
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
        }
    }
    let mut involve = |i: usize, j: usize| {
        let (x, y) = (&els[i], &els[j]);
        let lhs = star(&multiply(sys, x, y).unwrap());
        let rhs = multiply(sys, &star(y), &star(x)).unwrap();
        if lhs != rhs {
            bad.push(format!("involution: {x:?}, {y:?}"));
        }
        checked += 1;
    };
    if n.saturating_mul(n) <= opts.triple_budget {
        for i in 0..n {
            for j in 0..n {
                involve(i, j);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x696e76);
        for _ in 0..opts.triple_budget {
            involve(rng.gen_range(0..n), rng.gen_range(0..n));
        }
    }
    let mode = if exhaustive { "exhaustive" } else { "sampled" };
    Check::from_counterexamples(
        &format!("semigroup-laws ({mode}, {n} elements)"),
        checked,
        &bad,
    )
}

/// Strongly E*-unitary: trivial grade forces idempotency.
pub fn check_e_unitary(sys: &DynamicalSystem, opts: &SuiteOptions) -> Check {
    let els = elements_with_zero(sys, opts.bound);
    let mut bad = Vec::new();
    for e in &els {
        if let Ok(g) = grade(e) {
            if g.is_empty() && !e.is_idempotent() {
                bad.push(format!("{e:?}"));
            }
        }
    }
    Check::from_counterexamples("strongly-e-unitary", els.len(), &bad)
}

/// Every instantiation of the defining relations normalizes to zero.
pub fn check_relation_residues(sys: &DynamicalSystem) -> Check {
    let alg = Algebra::new(sys, IntRing);
    let gba = sys.gba();
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut residue = |name: &str, r: AlgebraElement<IntRing>| {
        if !r.is_zero() {
            bad.push(name.to_string());
        }
        checked += 1;
    };
    let p = |a: Member| alg.inject_p(a).unwrap();
    // (1) lattice relations.
    residue("p_empty", p(0));
    for &a in gba.members() {
        for &b in gba.members() {
            residue("p_cap", alg.sub(&p(a & b), &alg.mul(&p(a), &p(b)).unwrap()));
            let cup = alg.sub(&alg.add(&p(a), &p(b)), &p(a & b));
            residue("p_cup", alg.sub(&p(a | b), &cup));
        }
    }
    for letter in 0..sys.alphabet().len() {
        for &a in sys.ideal(letter).members() {
            let s = alg.inject_s(letter, a, false).unwrap();
            let ss = alg.inject_s(letter, a, true).unwrap();
            for &b in gba.members() {
                // (2) commutation across the morphism.
                let tb = sys.theta(letter).apply(b);
                let lhs = alg.mul(&p(b), &s).unwrap();
                let rhs = alg.mul(&s, &p(tb)).unwrap();
                residue("p_s_commute", alg.sub(&lhs, &rhs));
                let lhs = alg.mul(&ss, &p(b)).unwrap();
                let rhs = alg.mul(&p(tb), &ss).unwrap();
                residue("s_star_p_commute", alg.sub(&lhs, &rhs));
            }
            for lp in 0..sys.alphabet().len() {
                for &ap in sys.ideal(lp).members() {
                    // (3) s*s products.
                    let sp = alg.inject_s(lp, ap, false).unwrap();
                    let got = alg.mul(&ss, &sp).unwrap();
                    let expect = if letter == lp { p(a & ap) } else { alg.zero() };
                    residue("s_star_s", alg.sub(&got, &expect));
                }
            }
            for &b in gba.members() {
                // (4) absorption.
                let lhs = alg.mul(&s, &p(b)).unwrap();
                let rhs = alg.inject_s(letter, a & b, false).unwrap();
                residue("s_p_absorb", alg.sub(&lhs, &rhs));
                let lhs = alg.mul(&p(b), &ss).unwrap();
                let rhs = alg.inject_s(letter, a & b, true).unwrap();
                residue("p_s_star_absorb", alg.sub(&lhs, &rhs));
            }
        }
    }
    // (5) the collapse relation on J, and the q-product lemma.
    for &a in sys.j().members() {
        let mut sum = alg.zero();
        for &l in sys.delta(a).unwrap() {
            let img = sys.theta(l).apply(a);
            let s = alg.inject_s(l, img, false).unwrap();
            let ss = alg.inject_s(l, img, true).unwrap();
            sum = alg.add(&sum, &alg.mul(&s, &ss).unwrap());
        }
        residue("collapse", alg.sub(&p(a), &sum));
    }
    for &a in gba.members() {
        for &b in sys.b_reg().members() {
            let q = alg.q_element(b).unwrap();
            let lhs = alg.mul(&p(a), &q).unwrap();
            let rhs = alg.mul(&q, &p(a)).unwrap();
            let qcap = alg.q_element(a & b).unwrap();
            residue("q_commute", alg.sub(&lhs, &rhs));
            residue("q_cap", alg.sub(&lhs, &qcap));
        }
    }
    Check::from_counterexamples("relation-residues", checked, &bad)
}

/// Nonzeroness of `r·p_A`, `r·s_{α,A}`, and `r·q_B` off the designated
/// ideal.
pub fn check_nonzeroness(sys: &DynamicalSystem, opts: &SuiteOptions) -> Check {
    let alg = Algebra::new(sys, IntRing);
    let mut bad = Vec::new();
    let mut checked = 0;
    for &a in sys.gba().members() {
        if a != 0 && alg.inject_p(a).unwrap().is_zero() {
            bad.push(format!("p_{a:#b}"));
        }
        checked += 1;
    }
    for alpha in live_words(sys, opts.bound) {
        if alpha.is_empty() {
            continue;
        }
        let first = alpha[0];
        let rest = &alpha[1..];
        for &a in sys.ideal(first).members() {
            let end = sys.theta_word(&rest.to_vec(), a).unwrap();
            if end == 0 {
                continue;
            }
            // s_{α,A} as the product of letter generators ending in A.
            let mut e = alg.inject_s(first, a, false).unwrap();
            let mut cur = a;
            for &l in rest {
                cur = sys.theta(l).apply(cur);
                e = alg.mul(&e, &alg.inject_s(l, cur, false).unwrap()).unwrap();
            }
            if e.is_zero() {
                bad.push(format!("s_{alpha:?},{a:#b}"));
            }
            checked += 1;
        }
    }
    for &b in sys.b_reg().members() {
        let q = alg.q_element(b).unwrap();
        if sys.j().contains(b) {
            if !q.is_zero() {
                bad.push(format!("q_{b:#b} nonzero on J"));
            }
        } else if q.is_zero() {
            bad.push(format!("q_{b:#b} zero off J"));
        }
        checked += 1;
    }
    Check::from_counterexamples("nonzeroness", checked, &bad)
}

/// Annihilator closed forms, `Ann ∩ Ann⊥ = {0}`, and local units.
pub fn check_annihilators(sys: &DynamicalSystem) -> Check {
    if !sys.is_non_relative() {
        return Check::pass("annihilators", "skipped: relative system (J ≠ B_reg)");
    }
    let alg = Algebra::new(sys, IntRing);
    let (ann, perp) = match alg.ann_basis() {
        Ok(x) => x,
        Err(e) => return Check::fail("annihilators", format!("{e:?}")),
    };
    let mut bad = Vec::new();
    let ann_atoms: BTreeSet<Member> = ann.iter().map(|m| m.atom).collect();
    let perp_atoms: BTreeSet<Member> = perp.iter().map(|m| m.atom).collect();
    if ann_atoms.intersection(&perp_atoms).next().is_some() {
        bad.push("Ann ∩ Ann⊥ ≠ {0}".to_string());
    }
    // Local units: the join of p_top with the commuting idempotents s·s*
    // is a two-sided unit for every generator (hence for every subset).
    let mut u = alg.inject_p(sys.gba().top()).unwrap();
    for letter in 0..sys.alphabet().len() {
        for &a in sys.ideal(letter).members() {
            let s = alg.inject_s(letter, a, false).unwrap();
            let ss = alg.inject_s(letter, a, true).unwrap();
            let e = alg.mul(&s, &ss).unwrap();
            // u ∨ e = u + e − u·e for commuting idempotents.
            u = alg.sub(&alg.add(&u, &e), &alg.mul(&u, &e).unwrap());
        }
    }
    if alg.mul(&u, &u).unwrap() != u {
        bad.push("local unit not idempotent".to_string());
    }
    let mut gens = vec![alg.inject_p(sys.gba().top()).unwrap()];
    for letter in 0..sys.alphabet().len() {
        for &a in sys.ideal(letter).members() {
            gens.push(alg.inject_s(letter, a, false).unwrap());
            gens.push(alg.inject_s(letter, a, true).unwrap());
        }
    }
    for x in &gens {
        if &alg.mul(&u, x).unwrap() != x || &alg.mul(x, &u).unwrap() != x {
            bad.push("local unit fails on a generator".to_string());
        }
    }
    Check::from_counterexamples("annihilators", 2 + ann.len() + perp.len(), &bad)
}

/// Regular sets of the tilde system are the pairs `(A, [∅])`, `A` regular.
pub fn check_tilde(sys: &DynamicalSystem) -> Check {
    let t = match tilde_system(sys) {
        Ok(t) => t,
        Err(e) => return Check::fail("tilde-regular-sets", format!("{e:?}")),
    };
    let expect: BTreeSet<Member> = sys
        .b_reg()
        .members()
        .iter()
        .map(|&a| t.encode(a, 0))
        .collect();
    let got: BTreeSet<Member> = t.system.b_reg().members().iter().copied().collect();
    if got == expect {
        Check::pass(
            "tilde-regular-sets",
            format!(
                "{} pairs, {} regular",
                t.system.gba().members().len(),
                got.len()
            ),
        )
    } else {
        Check::fail(
            "tilde-regular-sets",
            format!("got {got:?}, expected {expect:?}"),
        )
    }
}

/// Admissible pairs form a lattice and their quotients validate.
pub fn check_lattice(sys: &DynamicalSystem) -> Check {
    let pairs = match admissible_pairs(sys) {
        Ok(p) => p,
        Err(e) => return Check::fail("ideal-lattice", format!("{e:?}")),
    };
    let mut bad = Vec::new();
    for x in &pairs {
        for y in &pairs {
            if pair_meet(&pairs, x, y).is_none() {
                bad.push(format!("no meet of {:#b},{:#b}", x.h.max(), y.h.max()));
            }
            if pair_join(&pairs, x, y).is_none() {
                bad.push(format!("no join of {:#b},{:#b}", x.h.max(), y.h.max()));
            }
        }
    }
    Check::from_counterexamples(
        &format!("ideal-lattice ({} pairs)", pairs.len()),
        pairs.len() * pairs.len(),
        &bad,
    )
}

/// Desingularization: certificates, chain stabilization, embedding report,
/// and the negative control.
pub fn check_desingularization(sys: &DynamicalSystem, opts: &SuiteOptions) -> Check {
    if !sys.is_non_relative() {
        return Check::pass("desingularization", "skipped: relative system (J ≠ B_reg)");
    }
    let n = sys.alphabet().len();
    let d = match desingularize(sys) {
        Ok(d) => d,
        Err(e) => return Check::fail("desingularization", format!("{e:?}")),
    };
    let mut bad = Vec::new();
    let certs = match d.certify_regularity(n + 3) {
        Ok(c) => c,
        Err(e) => return Check::fail("desingularization", format!("certificate: {e:?}")),
    };
    if !d.x_max().windows(2).all(|w| w[0] & w[1] == w[0]) {
        bad.push("X-chain not monotone".to_string());
    }
    let report = match check_embedding_conditions(sys, opts.bound) {
        Ok(r) => r,
        Err(e) => return Check::fail("desingularization", format!("{e:?}")),
    };
    bad.extend(report.counterexamples.iter().cloned());
    // Negative control: with any nonzero dynamics the letterwise identity
    // map must fail the morphism check (for θ ≡ 0 the two embeddings
    // coincide on the bounded enumeration and there is nothing to detect).
    let degenerate = (0..n).all(|l| sys.theta(l).apply(sys.gba().top()) == 0);
    if !degenerate && identity_embedding_fails(sys, opts.bound).is_none() {
        bad.push("negative control: identity embedding passed".to_string());
    }
    Check::from_counterexamples(
        &format!(
            "desingularization ({} certificates, {} morphism pairs)",
            certs.len(),
            report.morphism_pairs
        ),
        certs.len() + report.membership_checked + report.sandwich_checked + 2,
        &bad,
    )
}

/// Stone duality: the range law and the round-trip isomorphism.
pub fn check_stone(sys: &DynamicalSystem) -> Check {
    let space = match stone_graph(sys) {
        Ok(s) => s,
        Err(e) => return Check::fail("stone-duality", format!("{e:?}")),
    };
    let mut bad = Vec::new();
    let gens: Vec<Member> = filters(sys.gba()).iter().map(|f| f.0).collect();
    let v_of = |x: Member| -> Member {
        gens.iter()
            .enumerate()
            .filter(|&(_, &w)| w & x == w)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    };
    for &x in sys.gba().members() {
        for (l, label) in sys.alphabet().iter().enumerate() {
            if space.range(v_of(x), label).unwrap() != v_of(sys.theta(l).apply(x)) {
                bad.push(format!("duality law at {x:#b}, {label}"));
            }
        }
    }
    match labelled_to_gbds(&space) {
        Ok(back) => {
            let phi = |x: Member| space.to_model(v_of(x)).unwrap();
            for &x in sys.gba().members() {
                if !back.gba().contains(phi(x)) {
                    bad.push(format!("transport misses member {x:#b}"));
                }
                for l in 0..sys.alphabet().len() {
                    if phi(sys.theta(l).apply(x)) != back.theta(l).apply(phi(x)) {
                        bad.push(format!("transport breaks θ at {x:#b}"));
                    }
                }
            }
            for l in 0..sys.alphabet().len() {
                if phi(sys.ideal(l).max()) != back.ideal(l).max() {
                    bad.push(format!("transport breaks ideal {l}"));
                }
            }
            if sys.is_non_relative() && find_isomorphism(sys, &back).is_none() {
                bad.push("no isomorphism found".to_string());
            }
        }
        Err(e) => bad.push(format!("round trip: {e:?}")),
    }
    Check::from_counterexamples(
        &format!("stone-duality ({} filters)", gens.len()),
        sys.gba().members().len() * (1 + sys.alphabet().len()),
        &bad,
    )
}

fn random_element(
    alg: &Algebra<IntRing>,
    pool: &[Element<usize, Member>],
    rng: &mut ChaCha8Rng,
) -> (BTreeMap<Monomial, i64>, AlgebraElement<IntRing>) {
    let mut raw: BTreeMap<Monomial, i64> = BTreeMap::new();
    for _ in 0..rng.gen_range(1..5) {
        if let Element::Triple { alpha, set, beta } = pool.choose(rng).unwrap() {
            for atom in alg.system().gba().atoms_under(*set) {
                *raw.entry(Monomial {
                    alpha: alpha.clone(),
                    atom,
                    beta: beta.clone(),
                })
                .or_insert(0) += rng.gen_range(-3i64..4);
            }
        }
    }
    let e = alg.from_terms(raw.iter().map(|(m, &k)| (m.clone(), k)));
    (raw, e)
}

/// Degree additivity: every product of homogeneous components is
/// homogeneous of the summed degree.
pub fn check_grading(sys: &DynamicalSystem, opts: &SuiteOptions) -> Check {
    let alg = Algebra::new(sys, IntRing);
    let pool = enumerate_elements(sys, 4);
    if pool.is_empty() {
        return Check::pass("grading-additivity", "no nonzero elements");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x67726164);
    let mut bad = Vec::new();
    for trial in 0..opts.grading_pairs {
        let (_, x) = random_element(&alg, &pool, &mut rng);
        let (_, y) = random_element(&alg, &pool, &mut rng);
        for (i, xi) in alg.z_components(&x) {
            for (j, yj) in alg.z_components(&y) {
                let prod = alg.mul(&xi, &yj).unwrap();
                if prod.terms().keys().any(|m| m.degree() != i + j) {
                    bad.push(format!("trial {trial}: degrees {i}+{j}"));
                }
            }
        }
    }
    Check::from_counterexamples("grading-additivity", opts.grading_pairs, &bad)
}

/// Confluence evidence: randomized single-step rewrite schedules all reach
/// the memoized normal form.
pub fn check_collapse_determinism(sys: &DynamicalSystem, opts: &SuiteOptions) -> Check {
    let alg = Algebra::new(sys, IntRing);
    let pool = enumerate_elements(sys, opts.bound);
    if pool.is_empty() {
        return Check::pass("collapse-determinism", "no nonzero elements");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x636f6c6c);
    let mut bad = Vec::new();
    let mut checked = 0;
    for trial in 0..opts.collapse_elements {
        let (raw, expect) = random_element(&alg, &pool, &mut rng);
        for schedule in 0..opts.collapse_schedules {
            let mut cur = raw.clone();
            loop {
                let forbidden: Vec<Monomial> = cur
                    .keys()
                    .filter(|m| alg.forbidden_witness(m).is_some())
                    .cloned()
                    .collect();
                let Some(pick) = forbidden.choose(&mut rng) else {
                    break;
                };
                let k = cur.remove(pick).unwrap();
                if k == 0 {
                    continue;
                }
                for (sub, kk) in alg.rewrite_step(pick).unwrap() {
                    *cur.entry(sub).or_insert(0) += k * kk;
                }
            }
            cur.retain(|_, k| *k != 0);
            if &cur != expect.terms() {
                bad.push(format!("trial {trial}, schedule {schedule}"));
            }
            checked += 1;
        }
    }
    Check::from_counterexamples("collapse-determinism", checked, &bad)
}

/// Runs every suite against one system.
pub fn run_all(sys: &DynamicalSystem, opts: &SuiteOptions) -> Vec<Check> {
    vec![
        check_semigroup_laws(sys, opts),
        check_e_unitary(sys, opts),
        check_relation_residues(sys),
        check_nonzeroness(sys, opts),
        check_annihilators(sys),
        check_tilde(sys),
        check_lattice(sys),
        check_desingularization(sys, opts),
        check_stone(sys),
        check_grading(sys, opts),
        check_collapse_determinism(sys, opts),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fix1, fix2};

    #[test]
    fn fixtures_pass_the_full_suite() {
        let opts = SuiteOptions {
            grading_pairs: 40,
            ..Default::default()
        };
        for sys in [fix1(true), fix1(false), fix2()] {
            for check in run_all(&sys, &opts) {
                assert!(check.passed, "{}: {}", check.name, check.detail);
            }
        }
    }
}
