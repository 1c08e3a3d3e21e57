//! The inverse semigroup of triples `(α, A, β)` attached to a dynamical
//! system, with its involution, idempotent order, free-group grading and
//! fiber enumeration.
//!
//! The arithmetic is written against the [`Dynamics`] trait so the same code
//! drives both the base system and the desingularized system (whose sets are
//! level-indexed and whose alphabet carries the extra `b` letters).

use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

use crate::gba::Member;
use crate::system::{DynamicalSystem, SystemError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("elements do not belong to the given system")]
    MixedSystems,
    #[error("element is not an idempotent")]
    NotIdempotent,
    #[error("the zero element has no grade")]
    ZeroUngraded,
    #[error("idempotent is not in the domain of the partial map")]
    NotInDomain,
    #[error("triple set is empty or not in the word ideals")]
    InvalidTriple,
}

/// What the semigroup arithmetic needs from a system: word actions,
/// word ideals and bounded enumeration.
pub trait Dynamics {
    type Letter: Copy + Eq + Ord + Hash + Debug;
    type Set: Clone + Eq + Ord + Hash + Debug;

    fn apply(&self, letter: Self::Letter, s: &Self::Set) -> Self::Set;
    fn is_empty(&self, s: &Self::Set) -> bool;
    fn intersect(&self, a: &Self::Set, b: &Self::Set) -> Self::Set;
    fn is_subset(&self, a: &Self::Set, b: &Self::Set) -> bool;
    /// Membership in the word ideal `I_w` (always true for ω on members).
    fn in_word_ideal(&self, w: &[Self::Letter], s: &Self::Set) -> bool;
    /// The letters available for bounded enumeration.
    fn letters(&self) -> Vec<Self::Letter>;
    /// Nonempty members of `I_w`, per the system's enumeration policy.
    fn word_ideal_members(&self, w: &[Self::Letter]) -> Vec<Self::Set>;

    fn apply_word(&self, w: &[Self::Letter], s: &Self::Set) -> Self::Set {
        let mut cur = s.clone();
        for &l in w {
            cur = self.apply(l, &cur);
        }
        cur
    }
}

impl Dynamics for DynamicalSystem {
    type Letter = usize;
    type Set = Member;

    fn apply(&self, letter: usize, s: &Member) -> Member {
        self.theta(letter).apply(*s)
    }

    fn is_empty(&self, s: &Member) -> bool {
        *s == 0
    }

    fn intersect(&self, a: &Member, b: &Member) -> Member {
        a & b
    }

    fn is_subset(&self, a: &Member, b: &Member) -> bool {
        a & b == *a
    }

    fn in_word_ideal(&self, w: &[usize], s: &Member) -> bool {
        if !self.gba().contains(*s) {
            return false;
        }
        match self.ideal_word_max(w) {
            Ok(max) => s & max == *s,
            Err(_) => false,
        }
    }

    fn letters(&self) -> Vec<usize> {
        (0..self.alphabet().len()).collect()
    }

    fn word_ideal_members(&self, w: &[usize]) -> Vec<Member> {
        match self.ideal_word(w) {
            Ok(ideal) => ideal
                .members()
                .iter()
                .copied()
                .filter(|&m| m != 0)
                .collect(),
            Err(SystemError::UnknownLetter(_)) => Vec::new(),
            Err(_) => Vec::new(),
        }
    }
}

/// A semigroup element: zero or a triple `(α, A, β)` with
/// `∅ ≠ A ∈ I_α ∩ I_β`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element<L, S> {
    Zero,
    Triple { alpha: Vec<L>, set: S, beta: Vec<L> },
}

impl<L, S> Element<L, S> {
    pub fn is_zero(&self) -> bool {
        matches!(self, Element::Zero)
    }

    pub fn is_idempotent(&self) -> bool
    where
        L: Eq,
    {
        match self {
            Element::Zero => true,
            Element::Triple { alpha, beta, .. } => alpha == beta,
        }
    }
}

/// A reduced word in the free group over the alphabet; `true` marks an
/// inverse letter. The empty word is the identity.
pub type FreeGroupWord<L> = Vec<(L, bool)>;

/// Reduces a free-group word by cancelling adjacent `x·x⁻¹` pairs.
pub fn reduce<L: Copy + Eq>(word: impl IntoIterator<Item = (L, bool)>) -> FreeGroupWord<L> {
    let mut out: FreeGroupWord<L> = Vec::new();
    for (l, inv) in word {
        if let Some(&(top, top_inv)) = out.last() {
            if top == l && top_inv != inv {
                out.pop();
                continue;
            }
        }
        out.push((l, inv));
    }
    out
}

/// Builds a validated triple; the set must be nonempty and in both word
/// ideals.
pub fn triple<D: Dynamics>(
    d: &D,
    alpha: Vec<D::Letter>,
    set: D::Set,
    beta: Vec<D::Letter>,
) -> Result<Element<D::Letter, D::Set>, SemigroupError> {
    if d.is_empty(&set) || !d.in_word_ideal(&alpha, &set) || !d.in_word_ideal(&beta, &set) {
        return Err(SemigroupError::InvalidTriple);
    }
    Ok(Element::Triple { alpha, set, beta })
}

fn letters_known<D: Dynamics>(d: &D, e: &Element<D::Letter, D::Set>) -> bool {
    let known = d.letters();
    match e {
        Element::Zero => true,
        Element::Triple { alpha, beta, .. } => {
            alpha.iter().chain(beta.iter()).all(|l| known.contains(l))
        }
    }
}

/// The four-case product. The `β = γ` case is checked first; it overlaps the
/// two prefix cases when the extension word is empty, and all agree there.
pub fn multiply<D: Dynamics>(
    d: &D,
    s: &Element<D::Letter, D::Set>,
    t: &Element<D::Letter, D::Set>,
) -> Result<Element<D::Letter, D::Set>, SemigroupError> {
    if !letters_known(d, s) || !letters_known(d, t) {
        return Err(SemigroupError::MixedSystems);
    }
    let (alpha, a, beta) = match s {
        Element::Zero => return Ok(Element::Zero),
        Element::Triple { alpha, set, beta } => (alpha, set, beta),
    };
    let (gamma, b, delta) = match t {
        Element::Zero => return Ok(Element::Zero),
        Element::Triple { alpha, set, beta } => (alpha, set, beta),
    };
    if beta == gamma {
        let m = d.intersect(a, b);
        if d.is_empty(&m) {
            return Ok(Element::Zero);
        }
        return Ok(Element::Triple {
            alpha: alpha.clone(),
            set: m,
            beta: delta.clone(),
        });
    }
    if gamma.len() > beta.len() && gamma[..beta.len()] == beta[..] {
        let ext = &gamma[beta.len()..];
        let m = d.intersect(&d.apply_word(ext, a), b);
        if d.is_empty(&m) {
            return Ok(Element::Zero);
        }
        let mut new_alpha = alpha.clone();
        new_alpha.extend_from_slice(ext);
        return Ok(Element::Triple {
            alpha: new_alpha,
            set: m,
            beta: delta.clone(),
        });
    }
    if beta.len() > gamma.len() && beta[..gamma.len()] == gamma[..] {
        let ext = &beta[gamma.len()..];
        let m = d.intersect(a, &d.apply_word(ext, b));
        if d.is_empty(&m) {
            return Ok(Element::Zero);
        }
        let mut new_beta = delta.clone();
        new_beta.extend_from_slice(ext);
        return Ok(Element::Triple {
            alpha: alpha.clone(),
            set: m,
            beta: new_beta,
        });
    }
    Ok(Element::Zero)
}

/// The involution `(α, A, β)* = (β, A, α)`; zero is fixed.
pub fn star<L: Clone, S: Clone>(e: &Element<L, S>) -> Element<L, S> {
    match e {
        Element::Zero => Element::Zero,
        Element::Triple { alpha, set, beta } => Element::Triple {
            alpha: beta.clone(),
            set: set.clone(),
            beta: alpha.clone(),
        },
    }
}

/// The idempotent order: `(α,A,α) ≤ (β,B,β)` iff `α = βα'` and
/// `A ⊆ θ_{α'}(B)`. Zero is below everything.
pub fn idempotent_leq<D: Dynamics>(
    d: &D,
    e1: &Element<D::Letter, D::Set>,
    e2: &Element<D::Letter, D::Set>,
) -> Result<bool, SemigroupError> {
    if !e1.is_idempotent() || !e2.is_idempotent() {
        return Err(SemigroupError::NotIdempotent);
    }
    let (alpha, a) = match e1 {
        Element::Zero => return Ok(true),
        Element::Triple { alpha, set, .. } => (alpha, set),
    };
    let (beta, b) = match e2 {
        Element::Zero => return Ok(false),
        Element::Triple { alpha, set, .. } => (alpha, set),
    };
    if alpha.len() < beta.len() || alpha[..beta.len()] != beta[..] {
        return Ok(false);
    }
    let ext = &alpha[beta.len()..];
    Ok(d.is_subset(a, &d.apply_word(ext, b)))
}

/// The grading `(α, A, β) ↦ αβ⁻¹` into the free group over the alphabet.
pub fn grade<L: Copy + Eq, S>(e: &Element<L, S>) -> Result<FreeGroupWord<L>, SemigroupError> {
    match e {
        Element::Zero => Err(SemigroupError::ZeroUngraded),
        Element::Triple { alpha, beta, .. } => Ok(reduce(
            alpha
                .iter()
                .map(|&l| (l, false))
                .chain(beta.iter().rev().map(|&l| (l, true))),
        )),
    }
}

/// Splits a reduced group word as `p₁ p₂⁻¹` with `p₁, p₂` positive words,
/// when possible.
pub fn positive_split<L: Copy + Eq>(g: &[(L, bool)]) -> Option<(Vec<L>, Vec<L>)> {
    let first_inv = g.iter().position(|&(_, inv)| inv).unwrap_or(g.len());
    if g[first_inv..].iter().any(|&(_, inv)| !inv) {
        return None;
    }
    let p1: Vec<L> = g[..first_inv].iter().map(|&(l, _)| l).collect();
    let p2: Vec<L> = g[first_inv..].iter().rev().map(|&(l, _)| l).collect();
    Some((p1, p2))
}

/// All words `w` with a nonempty `I_w` member and `|w| ≤ max_len`, pruned on
/// the ideal vanishing (extending a word with trivial ideal keeps it trivial).
pub fn live_words<D: Dynamics>(d: &D, max_len: usize) -> Vec<Vec<D::Letter>> {
    let mut out: Vec<Vec<D::Letter>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<D::Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in d.letters() {
                let mut w2 = w.clone();
                w2.push(l);
                if !d.word_ideal_members(&w2).is_empty() {
                    next.push(w2);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    out
}

/// All nonzero elements with `|α| + |β| ≤ max_len`, in canonical order.
pub fn enumerate_elements<D: Dynamics>(d: &D, max_len: usize) -> Vec<Element<D::Letter, D::Set>> {
    let words = live_words(d, max_len);
    let mut out = Vec::new();
    for alpha in &words {
        for beta in &words {
            if alpha.len() + beta.len() > max_len {
                continue;
            }
            for set in d.word_ideal_members(alpha) {
                if d.in_word_ideal(beta, &set) {
                    out.push(Element::Triple {
                        alpha: alpha.clone(),
                        set,
                        beta: beta.clone(),
                    });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All nonzero elements with grade `g` and `|α| + |β| ≤ max_len`. Empty when
/// `g` is not of the form `p₁p₂⁻¹` with positive `p₁, p₂`.
pub fn fiber<D: Dynamics>(
    d: &D,
    g: &[(D::Letter, bool)],
    max_len: usize,
) -> Vec<Element<D::Letter, D::Set>> {
    let g = reduce(g.iter().copied());
    let Some((p1, p2)) = positive_split(&g) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    if p1.len() + p2.len() > max_len {
        return out;
    }
    let budget = (max_len - p1.len() - p2.len()) / 2;
    for p in live_words(d, budget) {
        let mut alpha = p1.clone();
        alpha.extend_from_slice(&p);
        let mut beta = p2.clone();
        beta.extend_from_slice(&p);
        if alpha.len() + beta.len() > max_len {
            continue;
        }
        for set in d.word_ideal_members(&alpha) {
            if d.in_word_ideal(&beta, &set) {
                out.push(Element::Triple {
                    alpha: alpha.clone(),
                    set,
                    beta: beta.clone(),
                });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The partial map `φ_{g⁻¹}` on `E_g`: replaces the prefix `p₁` of an
/// idempotent's word by `p₂`, keeping the set.
pub fn phi_conjugate<D: Dynamics>(
    d: &D,
    g: &[(D::Letter, bool)],
    e: &Element<D::Letter, D::Set>,
) -> Result<Element<D::Letter, D::Set>, SemigroupError> {
    let Some((p1, p2)) = positive_split(g) else {
        return Err(SemigroupError::NotInDomain);
    };
    let (alpha, set) = match e {
        Element::Zero => return Ok(Element::Zero),
        Element::Triple { alpha, set, beta } => {
            if alpha != beta {
                return Err(SemigroupError::NotIdempotent);
            }
            (alpha, set)
        }
    };
    if alpha.len() < p1.len() || alpha[..p1.len()] != p1[..] {
        return Err(SemigroupError::NotInDomain);
    }
    let p = &alpha[p1.len()..];
    let mut new_word = p2.clone();
    new_word.extend_from_slice(p);
    // E_g membership also requires the set to lie in the swapped word ideal.
    if !d.in_word_ideal(&new_word, set) {
        return Err(SemigroupError::NotInDomain);
    }
    Ok(Element::Triple {
        alpha: new_word.clone(),
        set: set.clone(),
        beta: new_word,
    })
}
