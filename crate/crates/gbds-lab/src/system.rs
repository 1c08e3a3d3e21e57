//! (Relative) generalized Boolean dynamical systems.
//!
//! A system is `(B, L, θ, I, J)`: a finite GBA `B`, an alphabet `L`, one GBA
//! endomorphism `θ_a` per letter, one ideal `I_a ⊇ F_a` per letter, and a
//! relative ideal `J` inside the regular sets. Validation computes and caches
//! the `F_a` ideals, the Δ table, the regular ideal and the sink ideal.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gba::{FiniteGBA, GbaError, GbaIdeal, GbaMorphism, Member};

/// A finite word over the alphabet, as letter indices. Empty = ω.
pub type Word = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("ideal for letter `{letter}` is too small: witness {witness:#b} in F \\ I")]
    IdealTooSmall { letter: String, witness: Member },
    #[error("relative ideal contains a non-regular set: witness {witness:#b}")]
    JNotRegular { witness: Member },
    #[error("bad morphism for letter `{letter}`: {source}")]
    BadMorphism { letter: String, source: GbaError },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("set {0:#b} is not a member of the algebra")]
    NotAMember(Member),
    #[error("{0}")]
    Gba(#[from] GbaError),
}

/// Classification of a member per the regular/singular/sink trichotomy.
/// The empty set is vacuously regular and simultaneously a sink; it is
/// reported as regular with the sink flag set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Regular { sink: bool },
    Sink,
    SingularNonSink,
}

/// A validated relative generalized Boolean dynamical system.
/// Immutable after validation; Δ tables and derived ideals are cached.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicalSystem {
    gba: FiniteGBA,
    alphabet: Vec<String>,
    theta: Vec<GbaMorphism>,
    ideals: Vec<GbaIdeal>,
    j: GbaIdeal,
    f_ideals: Vec<GbaIdeal>,
    delta: BTreeMap<Member, Vec<usize>>,
    b_reg: GbaIdeal,
    b_sink: GbaIdeal,
}

impl DynamicalSystem {
    /// Validates all parts of a system and caches the derived data.
    pub fn validate(
        gba: FiniteGBA,
        alphabet: Vec<String>,
        theta: Vec<GbaMorphism>,
        ideals: Vec<GbaIdeal>,
        j: GbaIdeal,
    ) -> Result<Self, SystemError> {
        assert_eq!(theta.len(), alphabet.len());
        assert_eq!(ideals.len(), alphabet.len());
        // Re-validate each θ_a as an endomorphism of the algebra.
        for (i, m) in theta.iter().enumerate() {
            GbaMorphism::new(&gba, &gba, m.atom_images().to_vec()).map_err(|e| {
                SystemError::BadMorphism {
                    letter: alphabet[i].clone(),
                    source: e,
                }
            })?;
        }
        for ideal in &ideals {
            if !gba.owns_ideal(ideal) {
                return Err(GbaError::ForeignIdeal.into());
            }
        }
        if !gba.owns_ideal(&j) {
            return Err(GbaError::ForeignIdeal.into());
        }

        // F_a = {A : A ⊆ θ_a(B) for some B} = down-set of θ_a(top).
        let mut f_ideals = Vec::with_capacity(alphabet.len());
        for m in &theta {
            f_ideals.push(gba.downset(m.apply(gba.top())));
        }
        for (i, f) in f_ideals.iter().enumerate() {
            if !f.is_subset_of(&ideals[i]) {
                let witness = *f
                    .members()
                    .iter()
                    .find(|&&m| !ideals[i].contains(m))
                    .expect("non-subset ideal has a witness");
                return Err(SystemError::IdealTooSmall {
                    letter: alphabet[i].clone(),
                    witness,
                });
            }
        }

        // Δ_A = letters with θ_a(A) ≠ ∅.
        let mut delta = BTreeMap::new();
        for &m in gba.members() {
            let letters: Vec<usize> = (0..alphabet.len())
                .filter(|&a| theta[a].apply(m) != 0)
                .collect();
            delta.insert(m, letters);
        }

        // B_reg: every nonempty member below A has nonempty Δ.
        // B_sink: Δ empty.
        let mut reg_max = 0;
        let mut sink_max = 0;
        for &m in gba.members() {
            let regular = gba
                .members()
                .iter()
                .all(|&b| b == 0 || b & m != b || !delta[&b].is_empty());
            if regular {
                reg_max |= m;
            }
            if delta[&m].is_empty() {
                sink_max |= m;
            }
        }
        let b_reg = gba.downset(reg_max);
        let b_sink = gba.downset(sink_max);

        if !j.is_subset_of(&b_reg) {
            let witness = *j
                .members()
                .iter()
                .find(|&&m| !b_reg.contains(m))
                .expect("non-regular J has a witness");
            return Err(SystemError::JNotRegular { witness });
        }

        Ok(DynamicalSystem {
            gba,
            alphabet,
            theta,
            ideals,
            j,
            f_ideals,
            delta,
            b_reg,
            b_sink,
        })
    }

    pub fn gba(&self) -> &FiniteGBA {
        &self.gba
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn letter(&self, name: &str) -> Result<usize, SystemError> {
        self.alphabet
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| SystemError::UnknownLetter(name.to_string()))
    }

    pub fn theta(&self, letter: usize) -> &GbaMorphism {
        &self.theta[letter]
    }

    pub fn ideal(&self, letter: usize) -> &GbaIdeal {
        &self.ideals[letter]
    }

    pub fn f_ideal(&self, letter: usize) -> &GbaIdeal {
        &self.f_ideals[letter]
    }

    pub fn j(&self) -> &GbaIdeal {
        &self.j
    }

    pub fn b_reg(&self) -> &GbaIdeal {
        &self.b_reg
    }

    pub fn b_sink(&self) -> &GbaIdeal {
        &self.b_sink
    }

    /// True when `J = B_reg`, i.e. the system is non-relative.
    pub fn is_non_relative(&self) -> bool {
        self.j.max() == self.b_reg.max()
    }

    /// Δ_A: the letters whose θ-image of `A` is nonempty.
    pub fn delta(&self, m: Member) -> Result<&[usize], SystemError> {
        self.delta
            .get(&m)
            .map(|v| v.as_slice())
            .ok_or(SystemError::NotAMember(m))
    }

    pub fn classify(&self, m: Member) -> Result<Classification, SystemError> {
        if !self.gba.contains(m) {
            return Err(SystemError::NotAMember(m));
        }
        if m == 0 {
            return Ok(Classification::Regular { sink: true });
        }
        if self.b_reg.contains(m) {
            return Ok(Classification::Regular { sink: false });
        }
        if self.delta[&m].is_empty() {
            return Ok(Classification::Sink);
        }
        Ok(Classification::SingularNonSink)
    }

    /// θ_w: identity for ω, otherwise θ_{w_n} ∘ … ∘ θ_{w_1} (apply w_1 first).
    pub fn theta_word(&self, w: &[usize], m: Member) -> Result<Member, SystemError> {
        if !self.gba.contains(m) {
            return Err(SystemError::NotAMember(m));
        }
        let mut cur = m;
        for &l in w {
            if l >= self.alphabet.len() {
                return Err(SystemError::UnknownLetter(format!("#{l}")));
            }
            cur = self.theta[l].apply(cur);
        }
        Ok(cur)
    }

    /// `I_ω = B`; for `w = w_1 w_2 … w_n`,
    /// `I_w = {A : A ⊆ θ_{w_2…w_n}(B) for some B ∈ I_{w_1}}`,
    /// the down-set of `θ_{w_2…w_n}(max I_{w_1})`.
    pub fn ideal_word(&self, w: &[usize]) -> Result<GbaIdeal, SystemError> {
        Ok(self.gba.downset(self.ideal_word_max(w)?))
    }

    /// The maximum of `I_w` without materializing the ideal.
    pub fn ideal_word_max(&self, w: &[usize]) -> Result<Member, SystemError> {
        match w.split_first() {
            None => Ok(self.gba.top()),
            Some((&first, rest)) => {
                if first >= self.alphabet.len() {
                    return Err(SystemError::UnknownLetter(format!("#{first}")));
                }
                self.theta_word(rest, self.ideals[first].max())
            }
        }
    }
}
