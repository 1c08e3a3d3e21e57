//! Desingularization: replaces a non-relative system by one in which every
//! nonzero set is regular. The new algebra is the direct sum of quotients
//! `B_i = B/X_i` where `X_i` collects the sink-free sets whose Δ uses only
//! the first `i−1` letters; the alphabet gains quotient letters `b_i`.
//!
//! For a finite alphabet of size `n` the chain `X_i` stabilizes at
//! `X_{n+1} = {U : U sink-free}`, so only `n+2` distinct quotient algebras
//! exist even though the levels go on forever. Elements are represented as
//! finitely-supported maps from levels to class representatives.

use std::collections::BTreeMap;

use crate::gba::Member;
use crate::semigroup::{enumerate_elements, idempotent_leq, multiply, star, Dynamics, Element};
use crate::system::DynamicalSystem;

use super::ConstructionError;

/// A letter of the extended alphabet: a base letter by index, or the
/// quotient letter `b_i` (`i ≥ 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FLetter {
    Base(usize),
    B(usize),
}

/// A finitely-supported element of `⊕ B_i`: level → nonzero class
/// representative at that level.
pub type FMember = BTreeMap<usize, Member>;

pub struct Desingularized {
    base: DynamicalSystem,
    /// `max(X_i)` for `i = 0..=n+1`; constant from `n+1` on.
    x_max: Vec<Member>,
    /// Highest level used by bounded enumeration (not a structural limit).
    level_cap: usize,
}

/// The singleton `{level: rep}`, or empty when the rep is zero.
pub fn single(level: usize, rep: Member) -> FMember {
    if rep == 0 {
        FMember::new()
    } else {
        FMember::from([(level, rep)])
    }
}

impl Desingularized {
    pub fn base(&self) -> &DynamicalSystem {
        &self.base
    }

    pub fn x_max(&self) -> &[Member] {
        &self.x_max
    }

    /// `max(X_i)`, clamped to the stabilized ideal.
    pub fn u(&self, level: usize) -> Member {
        self.x_max[level.min(self.x_max.len() - 1)]
    }

    /// The canonical representative of `[m]_i`.
    pub fn project(&self, level: usize, m: Member) -> Member {
        m & !self.u(level)
    }

    pub fn level_cap(&self) -> usize {
        self.level_cap
    }

    /// Nonzero members of the level-`i` quotient algebra.
    pub fn level_members(&self, level: usize) -> Vec<Member> {
        let u = self.u(level);
        let mut v: Vec<Member> = self
            .base
            .gba()
            .members()
            .iter()
            .map(|&m| m & !u)
            .filter(|&m| m != 0)
            .collect();
        v.sort_by_key(|&m| crate::gba::member_key(m));
        v.dedup();
        v
    }
}

/// Builds the desingularized system. Requires `J = B_reg`.
pub fn desingularize(sys: &DynamicalSystem) -> Result<Desingularized, ConstructionError> {
    if !sys.is_non_relative() {
        return Err(ConstructionError::RelativeSystemUnsupported);
    }
    let n = sys.alphabet().len();
    let u_sink = sys.b_sink().max();
    let mut x_max = vec![0; n + 2];
    for i in 1..=n + 1 {
        // X_i: sink-free members whose Δ uses letters with index < i−1.
        let mut m = 0;
        for &u in sys.gba().members() {
            if u & u_sink == 0 && sys.delta(u).expect("member").iter().all(|&l| l + 1 < i) {
                m |= u;
            }
        }
        x_max[i] = m;
    }
    Ok(Desingularized {
        base: sys.clone(),
        x_max,
        level_cap: n + 3,
    })
}

impl Dynamics for Desingularized {
    type Letter = FLetter;
    type Set = FMember;

    fn apply(&self, letter: FLetter, s: &FMember) -> FMember {
        match letter {
            FLetter::B(i) => match s.get(&(i - 1)) {
                Some(&r) => single(i, self.project(i, r)),
                None => FMember::new(),
            },
            FLetter::Base(j0) => match s.get(&(j0 + 1)) {
                Some(&r) => single(0, self.base.theta(j0).apply(r)),
                None => FMember::new(),
            },
        }
    }

    fn is_empty(&self, s: &FMember) -> bool {
        s.is_empty()
    }

    fn intersect(&self, a: &FMember, b: &FMember) -> FMember {
        a.iter()
            .filter_map(|(&k, &v)| {
                let w = v & b.get(&k).copied().unwrap_or(0);
                (w != 0).then_some((k, w))
            })
            .collect()
    }

    fn is_subset(&self, a: &FMember, b: &FMember) -> bool {
        a.iter()
            .all(|(&k, &v)| v & b.get(&k).copied().unwrap_or(0) == v)
    }

    fn in_word_ideal(&self, w: &[FLetter], s: &FMember) -> bool {
        match w.split_first() {
            None => true,
            Some((&first, rest)) => {
                let sup = self.apply_word(rest, &self.letter_ideal_sup(first));
                self.is_subset(s, &sup)
            }
        }
    }

    fn letters(&self) -> Vec<FLetter> {
        let n = self.base.alphabet().len();
        (0..n)
            .map(FLetter::Base)
            .chain((1..=self.level_cap).map(FLetter::B))
            .collect()
    }

    fn word_ideal_members(&self, w: &[FLetter]) -> Vec<FMember> {
        match w.split_first() {
            None => {
                // Enumeration policy: the ω-ideal is all of ⊕B_i; bounded
                // enumeration uses single-level members up to the level cap
                // (multi-level members are finite disjoint unions of these).
                let mut out = Vec::new();
                for level in 0..=self.level_cap {
                    for m in self.level_members(level) {
                        out.push(single(level, m));
                    }
                }
                out
            }
            Some((&first, rest)) => {
                let sup = self.apply_word(rest, &self.letter_ideal_sup(first));
                let Some((&level, &top)) = sup.iter().next() else {
                    return Vec::new();
                };
                self.level_members(level)
                    .into_iter()
                    .filter(|&m| m & top == m)
                    .map(|m| single(level, m))
                    .collect()
            }
        }
    }
}

impl Desingularized {
    /// `max(I^F_c)`: level-0 copy of the base ideal for a base letter, the
    /// whole level for a quotient letter.
    fn letter_ideal_sup(&self, letter: FLetter) -> FMember {
        match letter {
            FLetter::Base(j0) => single(0, self.base.ideal(j0).max()),
            FLetter::B(i) => single(i, self.project(i, self.base.gba().top())),
        }
    }

    /// A regularity certificate for each nonzero class at each level up to
    /// `max_level`: a letter with nonzero image. Fails only if the
    /// regularity guarantee were violated.
    pub fn certify_regularity(
        &self,
        max_level: usize,
    ) -> Result<Vec<(usize, Member, FLetter)>, ConstructionError> {
        let mut out = Vec::new();
        for level in 0..=max_level {
            for rep in self.level_members(level) {
                let s = single(level, rep);
                let b = FLetter::B(level + 1);
                if !self.apply(b, &s).is_empty() {
                    out.push((level, rep, b));
                    continue;
                }
                // [A]_{i+1} = 0 forces A ∈ X_{i+1} \ X_i, whence a_i ∈ Δ_A.
                if level >= 1 && level <= self.base.alphabet().len() {
                    let a = FLetter::Base(level - 1);
                    if !self.apply(a, &s).is_empty() {
                        out.push((level, rep, a));
                        continue;
                    }
                }
                return Err(ConstructionError::BoundTooSmall(level));
            }
        }
        Ok(out)
    }
}

/// The free-monoid embedding `h`: `a_j ↦ b_1…b_j a_j` (1-based `j`).
pub fn h_embed(word: &[usize]) -> Vec<FLetter> {
    let mut out = Vec::new();
    for &j0 in word {
        out.extend((1..=j0 + 1).map(FLetter::B));
        out.push(FLetter::Base(j0));
    }
    out
}

/// `h` on semigroup elements: `(α, A, β) ↦ (h(α), [A]_0, h(β))`.
pub fn h_element(e: &Element<usize, Member>) -> Element<FLetter, FMember> {
    match e {
        Element::Zero => Element::Zero,
        Element::Triple { alpha, set, beta } => Element::Triple {
            alpha: h_embed(alpha),
            set: single(0, *set),
            beta: h_embed(beta),
        },
    }
}

/// Decomposes a word as `h(α')·b_1…b_n`, if it has that shape.
pub fn parse_h_word(word: &[FLetter]) -> Option<(Vec<usize>, usize)> {
    let mut base = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let mut k = 0;
        while i < word.len() && word[i] == FLetter::B(k + 1) {
            k += 1;
            i += 1;
        }
        if i == word.len() {
            return Some((base, k));
        }
        match word[i] {
            FLetter::Base(j0) if j0 + 1 == k => {
                base.push(j0);
                i += 1;
            }
            _ => return None,
        }
    }
    Some((base, 0))
}

/// Bounded verification report for the semigroup embedding conditions.
#[derive(Debug, Default)]
pub struct EmbeddingReport {
    pub morphism_pairs: usize,
    pub membership_checked: usize,
    pub cover_checked: usize,
    pub tightness_checked: usize,
    pub sandwich_checked: usize,
    pub counterexamples: Vec<String>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

type FEl = Element<FLetter, FMember>;

fn image_shape(e: &FEl) -> bool {
    // An element (α,A,β) lies in the embedded copy iff A is level-0 and each
    // word is empty or starts with b_1.
    match e {
        Element::Zero => true,
        Element::Triple { alpha, set, beta } => {
            set.keys().all(|&k| k == 0)
                && [alpha, beta]
                    .iter()
                    .all(|w| w.is_empty() || w[0] == FLetter::B(1))
        }
    }
}

/// Checks the four embedding-condition families by bounded enumeration:
/// morphism, membership characterization, cover/tightness witnesses, and
/// the sandwich property. `bound` limits `|α|+|β|`.
pub fn check_embedding_conditions(
    sys: &DynamicalSystem,
    bound: usize,
) -> Result<EmbeddingReport, ConstructionError> {
    let desing = desingularize(sys)?;
    let mut report = EmbeddingReport::default();

    let mut base_els = enumerate_elements(sys, bound);
    base_els.push(Element::Zero);
    let images: Vec<FEl> = base_els.iter().map(h_element).collect();

    // Quadratic and cubic scans are strided deterministically once they
    // exceed this budget; the per-case checks stay exact.
    const SCAN_BUDGET: usize = 200_000;
    let stride_for = |total: usize, dims: u32| -> usize {
        if total <= SCAN_BUDGET {
            1
        } else {
            ((total as f64 / SCAN_BUDGET as f64).powf(1.0 / dims as f64)).ceil() as usize
        }
    };

    // (i) morphism: h(s·t) = h(s)·h(t) for pairs at the bound.
    let pair_stride = stride_for(base_els.len() * base_els.len(), 2);
    for (s, hs) in base_els.iter().zip(&images).step_by(pair_stride) {
        for (t, ht) in base_els.iter().zip(&images).step_by(pair_stride) {
            let lhs = h_element(&multiply(sys, s, t).expect("base product"));
            let rhs = multiply(&desing, hs, ht).expect("image product");
            if lhs != rhs {
                report
                    .counterexamples
                    .push(format!("morphism: h({s:?}·{t:?}) ≠ h({s:?})·h({t:?})"));
            }
            report.morphism_pairs += 1;
        }
    }

    let desing_els = enumerate_elements(&desing, bound);

    // (ii) membership characterization against the actual image set.
    for e in &desing_els {
        let in_image = images.contains(e);
        let shaped = image_shape(e);
        // Image elements beyond the enumeration bound still have the shape;
        // within the bound the two sets must agree exactly.
        if in_image != shaped {
            report
                .counterexamples
                .push(format!("membership: {e:?} shape={shaped} image={in_image}"));
        }
        report.membership_checked += 1;
    }

    let idems: Vec<&FEl> = desing_els.iter().filter(|e| e.is_idempotent()).collect();
    let n = sys.alphabet().len();

    let z_stride = stride_for(idems.len() * idems.len(), 1);

    // (iii) cover preservation and tightness witnesses.
    for x in &idems {
        let Element::Triple { alpha, set, .. } = x else {
            continue;
        };
        if image_shape(x) {
            report.cover_checked += 1;
            continue;
        }
        if alpha.is_empty() || alpha[0] != FLetter::B(1) {
            // x⁺ ∩ E_1 = ∅ — nothing to preserve.
            report.cover_checked += 1;
            continue;
        }
        let Some((alpha_p, lvl)) = parse_h_word(alpha) else {
            report
                .counterexamples
                .push(format!("cover: unparseable word {alpha:?}"));
            continue;
        };
        // A is a single class at level `lvl` (> 0 here, else x ∈ E_1).
        let a0 = *set.get(&lvl).expect("level matches trailing b-run");
        // Either some late letter acts on A, or A has a sink.
        let late = (lvl.max(1)..=n).find(|&k| sys.theta(k - 1).apply(a0) != 0);
        if let Some(k) = late {
            let mut w = alpha.clone();
            w.extend((lvl + 1..=k).map(FLetter::B));
            w.push(FLetter::Base(k - 1));
            let z = Element::Triple {
                alpha: w.clone(),
                set: single(0, sys.theta(k - 1).apply(a0)),
                beta: w,
            };
            if desing.is_empty(match &z {
                Element::Triple { set, .. } => set,
                Element::Zero => unreachable!(),
            }) || !idempotent_leq(&desing, &z, x).unwrap()
            {
                report
                    .counterexamples
                    .push(format!("cover: witness below {x:?} via a_{k} fails"));
            }
        } else {
            let b = a0 & sys.b_sink().max();
            if b == 0 {
                report
                    .counterexamples
                    .push(format!("cover: no witness for {x:?}"));
                continue;
            }
            let hw = h_embed(&alpha_p);
            let yb = Element::Triple {
                alpha: hw.clone(),
                set: single(0, b),
                beta: hw,
            };
            // Everything below y_b meets x.
            for z in idems.iter().step_by(z_stride) {
                if idempotent_leq(&desing, z, &yb).unwrap()
                    && multiply(&desing, z, x).unwrap() == Element::Zero
                {
                    report
                        .counterexamples
                        .push(format!("cover: {z:?} ≤ sink witness misses {x:?}"));
                }
            }
        }
        report.cover_checked += 1;

        // Tightness: y = (h(α'), [A]_0, h(α')) with the y_i cover.
        let hw = h_embed(&alpha_p);
        let y = Element::Triple {
            alpha: hw.clone(),
            set: single(0, a0),
            beta: hw,
        };
        if !image_shape(&y) {
            report
                .counterexamples
                .push(format!("tight: y for {x:?} not in E_1"));
        }
        let mut cover: Vec<FEl> = vec![(*x).clone()];
        for i in 1..lvl.min(n + 1) {
            let img = sys.theta(i - 1).apply(a0);
            if img == 0 {
                continue;
            }
            let mut wp = alpha_p.clone();
            wp.push(i - 1);
            let hwi = h_embed(&wp);
            let yi = Element::Triple {
                alpha: hwi.clone(),
                set: single(0, img),
                beta: hwi,
            };
            let ok = image_shape(&yi)
                && idempotent_leq(&desing, &yi, &y).unwrap()
                && multiply(&desing, &yi, x).unwrap() == Element::Zero;
            if !ok {
                report
                    .counterexamples
                    .push(format!("tight: y_{i} invalid for {x:?}"));
            }
            cover.push(yi);
        }
        for z in idems.iter().step_by(z_stride) {
            if z.is_zero() || !idempotent_leq(&desing, z, &y).unwrap() {
                continue;
            }
            if cover
                .iter()
                .all(|c| multiply(&desing, z, c).unwrap() == Element::Zero)
            {
                report
                    .counterexamples
                    .push(format!("tight: {z:?} ≤ y meets no cover element of {x:?}"));
            }
        }
        report.tightness_checked += 1;
    }

    // (iv) sandwich: x·s·y ≤ some s′ in the embedded copy, for x, y in the
    // embedded idempotents and s at the full bound.
    let e1_idems: Vec<&FEl> = images
        .iter()
        .filter(|e| e.is_idempotent() && !e.is_zero())
        .collect();
    let xy_stride = stride_for(e1_idems.len() * e1_idems.len() * desing_els.len().max(1), 2);
    for x in e1_idems.iter().step_by(xy_stride) {
        for y in e1_idems.iter().step_by(xy_stride) {
            for s in &desing_els {
                let p = multiply(&desing, &multiply(&desing, x, s).unwrap(), y).unwrap();
                report.sandwich_checked += 1;
                let Element::Triple { alpha, set, beta } = &p else {
                    continue;
                };
                let word_ok = |w: &Vec<FLetter>| w.is_empty() || w[0] == FLetter::B(1);
                if !word_ok(alpha) || !word_ok(beta) {
                    report
                        .counterexamples
                        .push(format!("sandwich: {x:?}·{s:?}·{y:?} escapes b_1 words"));
                    continue;
                }
                let s_prime = if image_shape(&p) {
                    p.clone()
                } else {
                    // Both words nonempty and b_1-headed: drop the trailing
                    // b-runs and lift the class representative to level 0.
                    let (Some((ap, la)), Some((bp, lb))) =
                        (parse_h_word(alpha), parse_h_word(beta))
                    else {
                        report
                            .counterexamples
                            .push(format!("sandwich: unparseable {p:?}"));
                        continue;
                    };
                    if la != lb {
                        report
                            .counterexamples
                            .push(format!("sandwich: level mismatch in {p:?}"));
                        continue;
                    }
                    let rep = *set.get(&la).expect("trailing run level");
                    Element::Triple {
                        alpha: h_embed(&ap),
                        set: single(0, rep),
                        beta: h_embed(&bp),
                    }
                };
                // p ≤ s′ in the natural order: p = (p·p*)·s′.
                let e = multiply(&desing, &p, &star(&p)).unwrap();
                if multiply(&desing, &e, &s_prime).unwrap() != p || !image_shape(&s_prime) {
                    report
                        .counterexamples
                        .push(format!("sandwich: no dominating element for {p:?}"));
                }
            }
        }
    }

    Ok(report)
}

/// Negative control: the letterwise identity inclusion (no b-prefixes) is
/// not a semigroup morphism; returns a witness product where it fails.
pub fn identity_embedding_fails(sys: &DynamicalSystem, bound: usize) -> Option<String> {
    let desing = desingularize(sys).ok()?;
    let naive = |e: &Element<usize, Member>| -> FEl {
        match e {
            Element::Zero => Element::Zero,
            Element::Triple { alpha, set, beta } => Element::Triple {
                alpha: alpha.iter().map(|&l| FLetter::Base(l)).collect(),
                set: single(0, *set),
                beta: beta.iter().map(|&l| FLetter::Base(l)).collect(),
            },
        }
    };
    let mut els = enumerate_elements(sys, bound);
    els.push(Element::Zero);
    for s in &els {
        for t in &els {
            let lhs = naive(&multiply(sys, s, t).unwrap());
            let rhs = multiply(&desing, &naive(s), &naive(t)).unwrap();
            if lhs != rhs {
                return Some(format!("{s:?}·{t:?}: {lhs:?} ≠ {rhs:?}"));
            }
        }
    }
    None
}
