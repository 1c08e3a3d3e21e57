//! Finite generalized Boolean algebras represented as fields of sets.
//!
//! A finite GBA is a family of subsets of an ordered ground set, closed under
//! union, intersection and relative complement, containing the empty set.
//! Members are stored as bit-patterns over the ground ordering; the canonical
//! member order is (popcount, numeric value) so reports are deterministic.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A member of a finite GBA: one bit per ground-set vertex.
pub type Member = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GbaError {
    #[error("the empty set is missing from the family")]
    MissingEmptySet,
    #[error("closure violation: {op} of {a:#b} and {b:#b} is not in the family")]
    ClosureViolation { op: char, a: Member, b: Member },
    #[error("set {0:#b} is not a member of the algebra")]
    NotAMember(Member),
    #[error("ideal does not belong to this algebra")]
    ForeignIdeal,
    #[error("ground set has more than 32 vertices")]
    GroundTooLarge,
    #[error("morphism images of distinct atoms overlap: {0:#b} and {1:#b}")]
    OverlappingAtomImages(Member, Member),
    #[error("morphism law {law} fails on A={a:#b}, B={b:#b}")]
    BadMorphismLaw { law: char, a: Member, b: Member },
    #[error("morphism image {0:#b} is not a member of the target algebra")]
    ImageNotAMember(Member),
}

/// Canonical member order: by popcount, then by bit value.
pub fn member_key(m: Member) -> (u32, Member) {
    (m.count_ones(), m)
}

/// A finite generalized Boolean algebra as a field of sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGBA {
    ground: Vec<String>,
    members: Vec<Member>,
    atoms: Vec<Member>,
}

impl FiniteGBA {
    /// Validates closure of `candidate_members` under union, intersection and
    /// relative complement, deduplicates, and orders canonically.
    pub fn validate(
        ground: Vec<String>,
        candidate_members: impl IntoIterator<Item = Member>,
    ) -> Result<Self, GbaError> {
        if ground.len() > 32 {
            return Err(GbaError::GroundTooLarge);
        }
        let full: Member = if ground.is_empty() {
            0
        } else {
            ((1u64 << ground.len()) - 1) as Member
        };
        let set: BTreeSet<Member> = candidate_members.into_iter().map(|m| m & full).collect();
        if !set.contains(&0) {
            return Err(GbaError::MissingEmptySet);
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&(a | b)) {
                    return Err(GbaError::ClosureViolation { op: '∪', a, b });
                }
                if !set.contains(&(a & b)) {
                    return Err(GbaError::ClosureViolation { op: '∩', a, b });
                }
                if !set.contains(&(a & !b)) {
                    return Err(GbaError::ClosureViolation { op: '\\', a, b });
                }
            }
        }
        let mut members: Vec<Member> = set.into_iter().collect();
        members.sort_by_key(|&m| member_key(m));
        let atoms = compute_atoms(&members);
        Ok(FiniteGBA {
            ground,
            members,
            atoms,
        })
    }

    /// The powerset algebra over the given ground set.
    pub fn powerset(ground: Vec<String>) -> Result<Self, GbaError> {
        if ground.len() > 32 {
            return Err(GbaError::GroundTooLarge);
        }
        let n = ground.len();
        let all: Vec<Member> = (0..(1u64 << n)).map(|m| m as Member).collect();
        Self::validate(ground, all)
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    /// Members in canonical (popcount, value) order.
    pub fn members(&self) -> &[Member] {
        &self.members
    }

    /// The minimal nonempty members, pairwise disjoint; every member is the
    /// join of the atoms below it.
    pub fn atoms(&self) -> &[Member] {
        &self.atoms
    }

    /// The maximum member (join of everything).
    pub fn top(&self) -> Member {
        self.members.iter().fold(0, |acc, &m| acc | m)
    }

    pub fn contains(&self, m: Member) -> bool {
        self.members
            .binary_search_by_key(&member_key(m), |&x| member_key(x))
            .is_ok()
    }

    /// Atoms lying under `m`.
    pub fn atoms_under(&self, m: Member) -> impl Iterator<Item = Member> + '_ {
        self.atoms.iter().copied().filter(move |&a| a & m == a)
    }

    /// Vertex index by name.
    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.ground.iter().position(|g| g == name)
    }

    /// Builds a member mask from vertex names.
    pub fn member_from_names<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Option<Member> {
        let mut m = 0;
        for n in names {
            m |= 1 << self.vertex(n)?;
        }
        Some(m)
    }

    /// Renders a member as `[v1 v2]`.
    pub fn render(&self, m: Member) -> String {
        let names: Vec<&str> = (0..self.ground.len())
            .filter(|i| m & (1 << i) != 0)
            .map(|i| self.ground[i].as_str())
            .collect();
        format!("[{}]", names.join(" "))
    }

    /// Smallest ideal containing `gens`: the down-set of their join.
    pub fn ideal_generated(&self, gens: &[Member]) -> Result<GbaIdeal, GbaError> {
        let mut max = 0;
        for &g in gens {
            if !self.contains(g) {
                return Err(GbaError::NotAMember(g));
            }
            max |= g;
        }
        Ok(self.downset(max))
    }

    /// The principal ideal of all members below `max` (which must be a member).
    pub fn downset(&self, max: Member) -> GbaIdeal {
        debug_assert!(self.contains(max));
        let members: Vec<Member> = self
            .members
            .iter()
            .copied()
            .filter(|&m| m & max == m)
            .collect();
        GbaIdeal { max, members }
    }

    /// Checks that `ideal` is an ideal of this algebra.
    pub fn owns_ideal(&self, ideal: &GbaIdeal) -> bool {
        self.contains(ideal.max) && self.downset(ideal.max) == *ideal
    }

    /// Quotient by an ideal: classes keyed by `A \ max(ideal)`.
    pub fn quotient(&self, ideal: &GbaIdeal) -> Result<QuotientGBA, GbaError> {
        if !self.owns_ideal(ideal) {
            return Err(GbaError::ForeignIdeal);
        }
        let u = ideal.max;
        let reps: BTreeSet<Member> = self.members.iter().map(|&m| m & !u).collect();
        let classes = FiniteGBA::validate(self.ground.clone(), reps)
            .expect("quotient representatives form a field of sets");
        Ok(QuotientGBA { u, classes })
    }
}

/// An ideal of a finite GBA. In the finite case every ideal is the down-set of
/// its maximum element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GbaIdeal {
    max: Member,
    members: Vec<Member>,
}

impl GbaIdeal {
    pub fn max(&self) -> Member {
        self.max
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn contains(&self, m: Member) -> bool {
        m & self.max == m && self.members.contains(&m)
    }

    pub fn is_subset_of(&self, other: &GbaIdeal) -> bool {
        self.max & other.max == self.max
    }
}

/// A quotient of a finite GBA by an ideal. `A ~ B` iff `A ∪ u = B ∪ u` for
/// `u = max(ideal)`; the canonical representative of `[A]` is `A \ u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGBA {
    u: Member,
    classes: FiniteGBA,
}

impl QuotientGBA {
    /// The max of the quotienting ideal.
    pub fn modulus(&self) -> Member {
        self.u
    }

    /// Canonical representative of `[m]`.
    pub fn project(&self, m: Member) -> Member {
        m & !self.u
    }

    /// The representative family, itself a field of sets.
    pub fn classes(&self) -> &FiniteGBA {
        &self.classes
    }
}

/// A morphism of finite GBAs, input on atoms of the source and extended by
/// joins. Validation re-checks the homomorphism laws exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GbaMorphism {
    atom_images: Vec<(Member, Member)>,
}

impl GbaMorphism {
    pub fn new(
        source: &FiniteGBA,
        target: &FiniteGBA,
        mut atom_images: Vec<(Member, Member)>,
    ) -> Result<Self, GbaError> {
        atom_images.sort_unstable();
        for &(a, _) in &atom_images {
            if !source.atoms().contains(&a) {
                return Err(GbaError::NotAMember(a));
            }
        }
        for &(_, img) in &atom_images {
            if !target.contains(img) {
                return Err(GbaError::ImageNotAMember(img));
            }
        }
        // Meet preservation forces images of distinct atoms to be disjoint.
        for (i, &(_, x)) in atom_images.iter().enumerate() {
            for &(_, y) in &atom_images[i + 1..] {
                if x & y != 0 {
                    return Err(GbaError::OverlappingAtomImages(x, y));
                }
            }
        }
        let morph = GbaMorphism { atom_images };
        for &a in source.members() {
            for &b in source.members() {
                if morph.apply(a | b) != morph.apply(a) | morph.apply(b) {
                    return Err(GbaError::BadMorphismLaw { law: '∪', a, b });
                }
                if morph.apply(a & b) != morph.apply(a) & morph.apply(b) {
                    return Err(GbaError::BadMorphismLaw { law: '∩', a, b });
                }
                if morph.apply(a & !b) != morph.apply(a) & !morph.apply(b) {
                    return Err(GbaError::BadMorphismLaw { law: '\\', a, b });
                }
                if !target.contains(morph.apply(a)) {
                    return Err(GbaError::ImageNotAMember(morph.apply(a)));
                }
            }
        }
        Ok(morph)
    }

    /// Extension by joins over the atoms under `m`.
    pub fn apply(&self, m: Member) -> Member {
        self.atom_images
            .iter()
            .filter(|&&(a, _)| a & m == a)
            .fold(0, |acc, &(_, img)| acc | img)
    }

    pub fn atom_images(&self) -> &[(Member, Member)] {
        &self.atom_images
    }
}

/// Rewrites a formal sum `Σ rᵢ p_{Aᵢ}` as a sum over pairwise disjoint sets by
/// atom expansion; zero-coefficient terms are dropped. The output agrees with
/// the input after atom expansion, each output set lies inside some input set.
pub fn disjointify(
    gba: &FiniteGBA,
    terms: &[(i64, Member)],
) -> Result<Vec<(i64, Member)>, GbaError> {
    let mut out = Vec::new();
    for &atom in gba.atoms() {
        let mut coeff = 0i64;
        let mut covered = false;
        for &(r, m) in terms {
            if !gba.contains(m) {
                return Err(GbaError::NotAMember(m));
            }
            if atom & m == atom {
                coeff += r;
                covered = true;
            }
        }
        if covered && coeff != 0 {
            out.push((coeff, atom));
        }
    }
    Ok(out)
}

impl fmt::Display for FiniteGBA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self.members.iter().map(|&m| self.render(m)).collect();
        write!(f, "{{{}}}", rendered.join(", "))
    }
}

// Minimal nonempty members: no nonempty proper member below them.
fn compute_atoms(members: &[Member]) -> Vec<Member> {
    let mut atoms: Vec<Member> = members
        .iter()
        .copied()
        .filter(|&m| m != 0 && members.iter().all(|&n| n == 0 || !(n & m == n && n != m)))
        .collect();
    atoms.sort_by_key(|&m| member_key(m));
    atoms
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    // Oracle: brute-force closure check over all pairs.
    fn closed(members: &[Member]) -> bool {
        members.contains(&0)
            && members.iter().all(|&a| {
                members.iter().all(|&b| {
                    members.contains(&(a | b))
                        && members.contains(&(a & b))
                        && members.contains(&(a & !b))
                })
            })
    }

    // Oracle: minimality scan for atoms.
    fn atom_oracle(members: &[Member]) -> Vec<Member> {
        let mut out: Vec<Member> = members
            .iter()
            .copied()
            .filter(|&m| m != 0 && members.iter().all(|&n| n == 0 || !(n & m == n && n != m)))
            .collect();
        out.sort_by_key(|&m| member_key(m));
        out
    }

    #[test]
    fn powerset_is_valid_with_singleton_atoms() {
        let g = FiniteGBA::powerset(names(&["v1", "v2"])).unwrap();
        assert_eq!(g.members().len(), 4);
        assert_eq!(g.atoms(), &[0b01, 0b10]);
    }

    #[test]
    fn missing_union_is_a_closure_violation() {
        let err = FiniteGBA::validate(names(&["v1", "v2"]), [0b00, 0b01, 0b10]).unwrap_err();
        assert_eq!(
            err,
            GbaError::ClosureViolation {
                op: '∪',
                a: 0b01,
                b: 0b10
            }
        );
    }

    #[test]
    fn non_powerset_family_validates_with_oracle_checked_atoms() {
        // ground {v1,v2,v3}, members {∅,{v1},{v2,v3},{v1,v2,v3}}
        let fam = [0b000, 0b001, 0b110, 0b111];
        assert!(closed(&fam));
        let g = FiniteGBA::validate(names(&["v1", "v2", "v3"]), fam).unwrap();
        assert_eq!(g.atoms(), atom_oracle(g.members()).as_slice());
        assert_eq!(g.atoms(), &[0b001, 0b110]);
    }

    #[test]
    fn degenerate_algebra_has_no_atoms() {
        let g = FiniteGBA::validate(vec![], [0]).unwrap();
        assert!(g.atoms().is_empty());
    }

    #[test]
    fn ideal_generated_examples() {
        let g = FiniteGBA::powerset(names(&["v1", "v2"])).unwrap();
        let empty = g.ideal_generated(&[]).unwrap();
        assert_eq!(empty.members(), &[0]);
        // Oracle: down-set of {v2}.
        let i = g.ideal_generated(&[0b10]).unwrap();
        assert_eq!(i.members(), &[0b00, 0b10]);
        // Oracle: down-set of the join {v1,v2}.
        let full = g.ideal_generated(&[0b01, 0b10]).unwrap();
        assert_eq!(full.members().len(), 4);
        assert!(matches!(
            g.ideal_generated(&[0b101]),
            Err(GbaError::NotAMember(_))
        ));
    }

    #[test]
    fn quotient_examples() {
        let g = FiniteGBA::powerset(names(&["v1", "v2"])).unwrap();
        let trivial = g.ideal_generated(&[]).unwrap();
        assert_eq!(g.quotient(&trivial).unwrap().classes().members().len(), 4);
        // Oracle: A \ {v1} over all members gives classes [∅], [{v2}].
        let by_v1 = g.ideal_generated(&[0b01]).unwrap();
        let q = g.quotient(&by_v1).unwrap();
        assert_eq!(q.classes().members(), &[0b00, 0b10]);
        let full = g.ideal_generated(&[0b11]).unwrap();
        assert_eq!(g.quotient(&full).unwrap().classes().members(), &[0]);
    }

    #[test]
    fn quotient_projection_is_a_morphism() {
        let g = FiniteGBA::powerset(names(&["v1", "v2", "v3"])).unwrap();
        let ideal = g.ideal_generated(&[0b011]).unwrap();
        let q = g.quotient(&ideal).unwrap();
        for &a in g.members() {
            for &b in g.members() {
                assert_eq!(q.project(a | b), q.project(a) | q.project(b));
                assert_eq!(q.project(a & b), q.project(a) & q.project(b));
                assert_eq!(q.project(a & !b), q.project(a) & !q.project(b));
            }
        }
    }

    #[test]
    fn disjointify_examples() {
        let g = FiniteGBA::powerset(names(&["v1", "v2"])).unwrap();
        // Atom split of p_{v1 v2}.
        assert_eq!(
            disjointify(&g, &[(1, 0b11)]).unwrap(),
            vec![(1, 0b01), (1, 0b10)]
        );
        // Already disjoint input is unchanged up to ordering.
        assert_eq!(
            disjointify(&g, &[(1, 0b01), (1, 0b10)]).unwrap(),
            vec![(1, 0b01), (1, 0b10)]
        );
        // Cancellation.
        assert_eq!(
            disjointify(&g, &[(1, 0b11), (-1, 0b01)]).unwrap(),
            vec![(1, 0b10)]
        );
    }

    #[test]
    fn disjointify_output_is_disjoint_and_covered() {
        let g =
            FiniteGBA::validate(names(&["v1", "v2", "v3"]), [0b000, 0b001, 0b110, 0b111]).unwrap();
        let terms = [(2, 0b111), (-1, 0b001), (3, 0b110)];
        let out = disjointify(&g, &terms).unwrap();
        for (i, &(_, a)) in out.iter().enumerate() {
            assert!(terms.iter().any(|&(_, m)| a & m == a));
            for &(_, b) in &out[i + 1..] {
                assert_eq!(a & b, 0);
            }
        }
        // Atom-coefficient vectors agree.
        for &atom in g.atoms() {
            let lhs: i64 = terms
                .iter()
                .filter(|&&(_, m)| atom & m == atom)
                .map(|&(r, _)| r)
                .sum();
            let rhs: i64 = out
                .iter()
                .filter(|&&(_, m)| atom & m == atom)
                .map(|&(r, _)| r)
                .sum();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn morphism_extension_preserves_laws() {
        let g = FiniteGBA::powerset(names(&["v1", "v2"])).unwrap();
        // v1 ↦ {v2}, v2 ↦ ∅ (the FIX1 θ_a).
        let m = GbaMorphism::new(&g, &g, vec![(0b01, 0b10), (0b10, 0b00)]).unwrap();
        assert_eq!(m.apply(0b01), 0b10);
        assert_eq!(m.apply(0b11), 0b10);
        assert_eq!(m.apply(0b00), 0b00);
        // Overlapping images are rejected.
        assert!(GbaMorphism::new(&g, &g, vec![(0b01, 0b11), (0b10, 0b10)]).is_err());
    }
}
