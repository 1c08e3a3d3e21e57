//! Exact symbolic arithmetic in the algebra L_R of a system: elements are
//! finite R-linear combinations of atomized monomials `(α, c, β)` encoding
//! `s_{α,c}·s*_{β,c}` (with the empty word reading `p_c`), kept in a normal
//! form that contains no "forbidden" monomial for the gap relation
//! `p_A = Σ_{a∈Δ_A} s_{a,θ_a(A)}s*_{a,θ_a(A)}` on regular sets in the
//! designated ideal.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::rc::Rc;

use thiserror::Error;

use crate::gba::Member;
use crate::semigroup::{multiply, Dynamics, Element};
use crate::system::{DynamicalSystem, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("set {0:#b} is not a member of the algebra")]
    NotAMember(Member),
    #[error("set {set:#b} is not in the ideal of letter {letter}")]
    NotInIdeal { letter: usize, set: Member },
    #[error("elements do not belong to the given system")]
    MixedSystems,
    #[error("annihilator bases require J = B_reg")]
    RelativeSystemUnsupported,
}

/// A unital commutative ring with exact equality.
pub trait Ring {
    type Elem: Clone + Eq + Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// The integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRing;

impl Ring for IntRing {
    type Elem = i64;
    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn add(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn neg(&self, a: &i64) -> i64 {
        -a
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a * b
    }
    fn from_i64(&self, n: i64) -> i64 {
        n
    }
}

/// The integers mod m (m ≥ 1; m = 1 is the zero ring).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModRing(pub u64);

impl Ring for ModRing {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.0 as i64) as u64
    }
}

/// A basis monomial `(α, atom, β)` for `s_{α,atom}·s*_{β,atom}`; with both
/// words empty this is `p_atom`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub alpha: Word,
    pub atom: Member,
    pub beta: Word,
}

impl Monomial {
    pub fn p(atom: Member) -> Self {
        Monomial {
            alpha: vec![],
            atom,
            beta: vec![],
        }
    }

    /// The Z-grading degree `|α| − |β|`.
    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }
}

/// A normal-form element: monomial → nonzero coefficient. The zero element
/// is the empty map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement<R: Ring> {
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: Ring> AlgebraElement<R> {
    pub fn terms(&self) -> &BTreeMap<Monomial, R::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Data driving the gap-relation rewriting: for each atom `c` in the
/// designated ideal, the chosen "forbidden" pair `(ℓ(c), d₀(c))` and the
/// full expansion list of `(letter, atom)` legs.
struct CollapseTable {
    /// `(ℓ(c), d₀(c)) → c`; well-defined because letterwise images of
    /// distinct atoms are disjoint.
    special: HashMap<(usize, Member), Member>,
    /// `c → all (a, d)` with `a ∈ Δ_c` and `d` an atom under `θ_a(c)`.
    legs: HashMap<Member, Vec<(usize, Member)>>,
}

impl CollapseTable {
    fn build(sys: &DynamicalSystem) -> Self {
        let mut special = HashMap::new();
        let mut legs = HashMap::new();
        for c in sys.gba().atoms() {
            if !sys.j().contains(*c) {
                continue;
            }
            let mut cl: Vec<(usize, Member)> = Vec::new();
            for &a in sys.delta(*c).expect("atom is a member") {
                let img = sys.theta(a).apply(*c);
                for d in sys.gba().atoms_under(img) {
                    cl.push((a, d));
                }
            }
            // J ⊆ B_reg and c ≠ ∅, so Δ_c ≠ ∅ and the images have atoms.
            let &(l, d0) = cl.iter().min().expect("regular atom has legs");
            special.insert((l, d0), *c);
            legs.insert(*c, cl);
        }
        CollapseTable { special, legs }
    }
}

/// Arithmetic context for one system and coefficient ring. Holds the
/// rewrite table and a memo of monomial normal forms (ring-independent
/// integer combinations, specialized through `Ring::from_i64`).
pub struct Algebra<'s, R: Ring> {
    sys: &'s DynamicalSystem,
    ring: R,
    collapse: CollapseTable,
    memo: RefCell<HashMap<Monomial, Rc<BTreeMap<Monomial, i64>>>>,
}

impl<'s, R: Ring> Algebra<'s, R> {
    pub fn new(sys: &'s DynamicalSystem, ring: R) -> Self {
        Algebra {
            sys,
            ring,
            collapse: CollapseTable::build(sys),
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn system(&self) -> &'s DynamicalSystem {
        self.sys
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn zero(&self) -> AlgebraElement<R> {
        AlgebraElement {
            terms: BTreeMap::new(),
        }
    }

    /// If the monomial is forbidden, its witness `(c, shared last letter)`.
    pub fn forbidden_witness(&self, m: &Monomial) -> Option<(Member, usize)> {
        let (&la, alpha_rest) = m.alpha.split_last()?;
        let (&lb, beta_rest) = m.beta.split_last()?;
        if la != lb {
            return None;
        }
        let &c = self.collapse.special.get(&(la, m.atom))?;
        if self.sys.in_word_ideal(alpha_rest, &c) && self.sys.in_word_ideal(beta_rest, &c) {
            Some((c, la))
        } else {
            None
        }
    }

    /// One application of the gap relation to a forbidden monomial:
    /// `(α·ℓ, d₀, β·ℓ) → (α,c,β) − Σ_{(a,d)≠(ℓ,d₀)} (α·a, d, β·a)`.
    /// Returns `None` if the monomial is not forbidden.
    pub fn rewrite_step(&self, m: &Monomial) -> Option<Vec<(Monomial, i64)>> {
        let (c, l) = self.forbidden_witness(m)?;
        let alpha = m.alpha[..m.alpha.len() - 1].to_vec();
        let beta = m.beta[..m.beta.len() - 1].to_vec();
        let mut out = vec![(
            Monomial {
                alpha: alpha.clone(),
                atom: c,
                beta: beta.clone(),
            },
            1,
        )];
        for &(a, d) in &self.collapse.legs[&c] {
            if (a, d) == (l, m.atom) {
                continue;
            }
            let mut na = alpha.clone();
            na.push(a);
            let mut nb = beta.clone();
            nb.push(a);
            out.push((
                Monomial {
                    alpha: na,
                    atom: d,
                    beta: nb,
                },
                -1,
            ));
        }
        Some(out)
    }

    /// The memoized normal form of a single monomial. Terminates because
    /// each rewrite strictly decreases `Σ 4^{|α|+|β|}`: the same-degree
    /// replacement monomials are never forbidden (their atoms avoid the
    /// designated pairs by disjointness of images), and the remaining term
    /// drops the word lengths by one.
    fn expand(&self, m: &Monomial) -> Rc<BTreeMap<Monomial, i64>> {
        if let Some(hit) = self.memo.borrow().get(m) {
            return Rc::clone(hit);
        }
        let result = match self.rewrite_step(m) {
            None => Rc::new(BTreeMap::from([(m.clone(), 1)])),
            Some(step) => {
                let mut acc: BTreeMap<Monomial, i64> = BTreeMap::new();
                for (sub, k) in step {
                    for (mm, kk) in self.expand(&sub).iter() {
                        let e = acc.entry(mm.clone()).or_insert(0);
                        *e += k * kk;
                        if *e == 0 {
                            acc.remove(mm);
                        }
                    }
                }
                Rc::new(acc)
            }
        };
        self.memo.borrow_mut().insert(m.clone(), Rc::clone(&result));
        result
    }

    /// Normalizes an arbitrary combination into an `AlgebraElement`.
    pub fn from_terms(
        &self,
        terms: impl IntoIterator<Item = (Monomial, R::Elem)>,
    ) -> AlgebraElement<R> {
        let mut acc: BTreeMap<Monomial, R::Elem> = BTreeMap::new();
        for (m, r) in terms {
            for (mm, &k) in self.expand(&m).iter() {
                let contrib = self.ring.mul(&r, &self.ring.from_i64(k));
                let entry = acc.entry(mm.clone()).or_insert_with(|| self.ring.zero());
                *entry = self.ring.add(entry, &contrib);
                if self.ring.is_zero(entry) {
                    acc.remove(mm);
                }
            }
        }
        AlgebraElement { terms: acc }
    }

    /// `p_A`, expanded over the atoms of `A`.
    pub fn inject_p(&self, a: Member) -> Result<AlgebraElement<R>, AlgebraError> {
        if !self.sys.gba().contains(a) {
            return Err(AlgebraError::NotAMember(a));
        }
        let one = self.ring.one();
        Ok(self.from_terms(
            self.sys
                .gba()
                .atoms_under(a)
                .map(|t| (Monomial::p(t), one.clone()))
                .collect::<Vec<_>>(),
        ))
    }

    /// `s_{a,A}` (or `s*_{a,A}` when `starred`), expanded over atoms of `A`.
    pub fn inject_s(
        &self,
        letter: usize,
        a: Member,
        starred: bool,
    ) -> Result<AlgebraElement<R>, AlgebraError> {
        if letter >= self.sys.alphabet().len() {
            return Err(AlgebraError::MixedSystems);
        }
        if !self.sys.ideal(letter).contains(a) {
            return Err(AlgebraError::NotInIdeal { letter, set: a });
        }
        let one = self.ring.one();
        Ok(self.from_terms(
            self.sys
                .gba()
                .atoms_under(a)
                .map(|t| {
                    let m = if starred {
                        Monomial {
                            alpha: vec![],
                            atom: t,
                            beta: vec![letter],
                        }
                    } else {
                        Monomial {
                            alpha: vec![letter],
                            atom: t,
                            beta: vec![],
                        }
                    };
                    (m, one.clone())
                })
                .collect::<Vec<_>>(),
        ))
    }

    pub fn add(&self, x: &AlgebraElement<R>, y: &AlgebraElement<R>) -> AlgebraElement<R> {
        let mut terms = x.terms.clone();
        for (m, r) in &y.terms {
            let entry = terms.entry(m.clone()).or_insert_with(|| self.ring.zero());
            *entry = self.ring.add(entry, r);
            if self.ring.is_zero(entry) {
                terms.remove(m);
            }
        }
        AlgebraElement { terms }
    }

    pub fn neg(&self, x: &AlgebraElement<R>) -> AlgebraElement<R> {
        AlgebraElement {
            terms: x
                .terms
                .iter()
                .map(|(m, r)| (m.clone(), self.ring.neg(r)))
                .collect(),
        }
    }

    pub fn sub(&self, x: &AlgebraElement<R>, y: &AlgebraElement<R>) -> AlgebraElement<R> {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, r: &R::Elem, x: &AlgebraElement<R>) -> AlgebraElement<R> {
        let mut terms = BTreeMap::new();
        for (m, c) in &x.terms {
            let v = self.ring.mul(r, c);
            if !self.ring.is_zero(&v) {
                terms.insert(m.clone(), v);
            }
        }
        AlgebraElement { terms }
    }

    fn check_letters(&self, x: &AlgebraElement<R>) -> Result<(), AlgebraError> {
        let n = self.sys.alphabet().len();
        for m in x.terms.keys() {
            if m.alpha.iter().chain(m.beta.iter()).any(|&l| l >= n) {
                return Err(AlgebraError::MixedSystems);
            }
        }
        Ok(())
    }

    /// Monomial products are inverse-semigroup products of triples; atoms
    /// intersected with members stay atoms or vanish, so the basis is
    /// multiplicatively closed up to sign-free renormalization.
    pub fn mul(
        &self,
        x: &AlgebraElement<R>,
        y: &AlgebraElement<R>,
    ) -> Result<AlgebraElement<R>, AlgebraError> {
        self.check_letters(x)?;
        self.check_letters(y)?;
        let mut raw: Vec<(Monomial, R::Elem)> = Vec::new();
        for (mx, rx) in &x.terms {
            let ex = Element::Triple {
                alpha: mx.alpha.clone(),
                set: mx.atom,
                beta: mx.beta.clone(),
            };
            for (my, ry) in &y.terms {
                let ey = Element::Triple {
                    alpha: my.alpha.clone(),
                    set: my.atom,
                    beta: my.beta.clone(),
                };
                match multiply(self.sys, &ex, &ey).expect("letters checked") {
                    Element::Zero => {}
                    Element::Triple { alpha, set, beta } => {
                        debug_assert!(self.sys.gba().atoms().contains(&set));
                        raw.push((
                            Monomial {
                                alpha,
                                atom: set,
                                beta,
                            },
                            self.ring.mul(rx, ry),
                        ));
                    }
                }
            }
        }
        Ok(self.from_terms(raw))
    }

    /// The linear extension of `(α,c,β)* = (β,c,α)`.
    pub fn star(&self, x: &AlgebraElement<R>) -> AlgebraElement<R> {
        self.from_terms(x.terms.iter().map(|(m, r)| {
            (
                Monomial {
                    alpha: m.beta.clone(),
                    atom: m.atom,
                    beta: m.alpha.clone(),
                },
                r.clone(),
            )
        }))
    }

    /// Splits by Z-grading degree; the components sum to `x`.
    pub fn z_components(&self, x: &AlgebraElement<R>) -> BTreeMap<i64, AlgebraElement<R>> {
        let mut out: BTreeMap<i64, AlgebraElement<R>> = BTreeMap::new();
        for (m, r) in &x.terms {
            out.entry(m.degree())
                .or_insert_with(|| self.zero())
                .terms
                .insert(m.clone(), r.clone());
        }
        out
    }

    /// `q_A = p_A − Σ_{a∈Δ_A} s_{a,θ_a(A)}s*_{a,θ_a(A)}`; zero exactly on
    /// the designated ideal (and ∅).
    pub fn q_element(&self, a: Member) -> Result<AlgebraElement<R>, AlgebraError> {
        let mut acc = self.inject_p(a)?;
        for &l in self.sys.delta(a).map_err(|_| AlgebraError::NotAMember(a))? {
            let img = self.sys.theta(l).apply(a);
            let s = self.inject_s(l, img, false)?;
            let ss = self.inject_s(l, img, true)?;
            acc = self.sub(&acc, &self.mul(&s, &ss)?);
        }
        Ok(acc)
    }

    /// Bases (as p-atom monomials) for the annihilator of the one-sided
    /// ideal generated by the `s` generators inside `span{p}`, and for its
    /// perp. Computed by solving `x·s_{a,A} = 0` over the atom basis, then
    /// checked against the closed forms: sink atoms, and atoms meeting no
    /// sink set.
    pub fn ann_basis(&self) -> Result<(Vec<Monomial>, Vec<Monomial>), AlgebraError> {
        if !self.sys.is_non_relative() {
            return Err(AlgebraError::RelativeSystemUnsupported);
        }
        let atoms = self.sys.gba().atoms().to_vec();
        // contributions of p_c·s_{a,A} = s_{a, θ_a(c)∩A}: each output
        // monomial (a,d,ω) has a unique contributing atom c, so the kernel
        // is exactly the atoms contributing nothing.
        let mut contributors: HashMap<Monomial, Vec<Member>> = HashMap::new();
        for &c in &atoms {
            for letter in 0..self.sys.alphabet().len() {
                for &a in self.sys.ideal(letter).members() {
                    let mid = self.sys.theta(letter).apply(c) & a;
                    for d in self.sys.gba().atoms_under(mid) {
                        contributors
                            .entry(Monomial {
                                alpha: vec![letter],
                                atom: d,
                                beta: vec![],
                            })
                            .or_default()
                            .push(c);
                    }
                }
            }
        }
        for (m, cs) in &contributors {
            let mut cs = cs.clone();
            cs.sort_unstable();
            cs.dedup();
            assert!(cs.len() == 1, "monomial {m:?} has multiple contributors");
        }
        let forced: Vec<Member> = contributors.values().flatten().copied().collect();
        let ann: Vec<Member> = atoms
            .iter()
            .copied()
            .filter(|c| !forced.contains(c))
            .collect();
        // Closed-form check: the kernel atoms are exactly the sinks, and the
        // perp atoms are those meeting no sink set.
        let sink_atoms: Vec<Member> = atoms
            .iter()
            .copied()
            .filter(|&c| self.sys.delta(c).unwrap().is_empty())
            .collect();
        assert_eq!(ann, sink_atoms, "kernel disagrees with sink closed form");
        let u_sink = self.sys.b_sink().max();
        let perp: Vec<Member> = atoms.iter().copied().filter(|&c| c & u_sink == 0).collect();
        Ok((
            ann.into_iter().map(Monomial::p).collect(),
            perp.into_iter().map(Monomial::p).collect(),
        ))
    }

    /// Normal-form identity. Exact when the designated ideal is trivial;
    /// otherwise decides "same normal form" (sound, and complete under the
    /// collapse-basis assumption).
    pub fn equal(
        &self,
        x: &AlgebraElement<R>,
        y: &AlgebraElement<R>,
    ) -> Result<bool, AlgebraError> {
        self.check_letters(x)?;
        self.check_letters(y)?;
        Ok(self.sub(x, y).is_zero())
    }
}
