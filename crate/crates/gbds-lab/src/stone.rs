//! Stone duality for finite systems: a dynamical system becomes a labelled
//! graph on the filters of its algebra, and a weakly left-resolving normal
//! labelled space becomes a dynamical system via the range operator. The
//! two directions compose to an isomorphism.
//!
//! The family `{V_x}` of a Stone graph is closed under literal intersection
//! of vertex subsets, but its joins and relative complements are
//! order-theoretic (the least family member above both, not the set
//! union — a filter containing `x ∨ y` need not contain `x` or `y`).
//! `LabelledSpace` therefore validates the family as a lattice and builds
//! a field-of-sets model over its lattice atoms for the system side.

use thiserror::Error;

use crate::gba::{member_key, FiniteGBA, GbaError, GbaMorphism, Member};
use crate::system::{DynamicalSystem, SystemError};

#[derive(Debug, Error)]
pub enum StoneError {
    #[error("set {0:#b} is not a member of the family")]
    NotAMember(Member),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("edge references vertex or label out of range")]
    BadEdge,
    #[error("family is not closed under intersection: {a:#b} ∩ {b:#b}")]
    NotIntersectionClosed { a: Member, b: Member },
    #[error("family has no least upper bound for {a:#b}, {b:#b}")]
    NoJoin { a: Member, b: Member },
    #[error("family has no relative complement of {b:#b} in {a:#b}")]
    NoRelativeComplement { a: Member, b: Member },
    #[error("family members {a:#b} and {b:#b} lie over the same atoms")]
    NotAtomSeparated { a: Member, b: Member },
    #[error("family is not accommodating: r({set:#b}, {label}) escapes it")]
    NotAccommodating { label: String, set: Member },
    #[error("range is not weakly left-resolving on {a:#b}, {b:#b} under {label}")]
    NotWeaklyLeftResolving { label: String, a: Member, b: Member },
    #[error("ideal for {label} misses the range set {witness:#b}")]
    IdealTooSmall { label: String, witness: Member },
    #[error("space has {0} vertices or atoms, more than the supported 32")]
    TooLarge(usize),
    #[error(transparent)]
    Gba(#[from] GbaError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// A filter of a finite generalized Boolean algebra, represented by its
/// principal generator (in the finite case every filter is the up-set of
/// its meet).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Filter(pub Member);

/// All filters of the algebra: one per nonzero member.
pub fn filters(gba: &FiniteGBA) -> Vec<Filter> {
    gba.members()
        .iter()
        .filter(|&&m| m != 0)
        .map(|&m| Filter(m))
        .collect()
}

/// `V_x`: the filters containing `x`, i.e. those generated by a nonempty
/// `w ⊆ x`.
pub fn v_set(gba: &FiniteGBA, x: Member) -> Result<Vec<Filter>, StoneError> {
    if !gba.contains(x) {
        return Err(StoneError::NotAMember(x));
    }
    Ok(filters(gba)
        .into_iter()
        .filter(|f| f.0 & x == f.0)
        .collect())
}

/// A labelled graph together with an accommodating, weakly left-resolving,
/// normal family of vertex sets and per-label ideals dominating the range
/// ideals. `family` lists the vertex subsets; `model` is the isomorphic
/// field of sets over the family's lattice atoms.
#[derive(Debug)]
pub struct LabelledSpace {
    vertex_names: Vec<String>,
    labels: Vec<String>,
    edges: Vec<(usize, usize, usize)>,
    family: Vec<Member>,
    ideal_maxes: Vec<Member>,
    model: FiniteGBA,
    lattice_atoms: Vec<Member>,
}

impl LabelledSpace {
    /// Validates a labelled space. `family` is a collection of vertex
    /// subsets; `ideal_maxes` gives the principal generator of each
    /// label's ideal (finite ideals are principal).
    pub fn validate(
        vertex_names: Vec<String>,
        labels: Vec<String>,
        edges: Vec<(usize, usize, usize)>,
        family: Vec<Member>,
        ideal_maxes: Vec<Member>,
    ) -> Result<Self, StoneError> {
        assert_eq!(labels.len(), ideal_maxes.len());
        let n = vertex_names.len();
        if n > 32 {
            return Err(StoneError::TooLarge(n));
        }
        if edges
            .iter()
            .any(|&(s, t, l)| s >= n || t >= n || l >= labels.len())
        {
            return Err(StoneError::BadEdge);
        }
        let mut edges = edges;
        edges.sort_unstable();
        edges.dedup();
        let mut family = family;
        family.push(0);
        family.sort_by_key(|&m| member_key(m));
        family.dedup();

        // Lattice structure: literal meets, order-theoretic joins and
        // relative complements.
        for &a in &family {
            for &b in &family {
                if !family.contains(&(a & b)) {
                    return Err(StoneError::NotIntersectionClosed { a, b });
                }
                let join = family
                    .iter()
                    .copied()
                    .filter(|&m| a & m == a && b & m == b)
                    .min_by_key(|&m| member_key(m));
                match join {
                    Some(j)
                        if family
                            .iter()
                            .all(|&m| !(a & m == a && b & m == b) || j & m == j) => {}
                    _ => return Err(StoneError::NoJoin { a, b }),
                }
                if b & a == b {
                    // Relative complement of b in a.
                    let ok = family.iter().any(|&z| {
                        // z ≤ a, z ∧ b = 0, and z ∨ b = a in the lattice.
                        z & a == z
                            && z & b == 0
                            && family
                                .iter()
                                .copied()
                                .filter(|&m| z & m == z && b & m == b)
                                .min_by_key(|&m| member_key(m))
                                == Some(a)
                    });
                    if !ok {
                        return Err(StoneError::NoRelativeComplement { a, b });
                    }
                }
            }
        }

        // Field-of-sets model over the lattice atoms.
        let lattice_atoms: Vec<Member> = family
            .iter()
            .copied()
            .filter(|&m| m != 0 && family.iter().all(|&o| o == 0 || o == m || o & m != o))
            .collect();
        if lattice_atoms.len() > 32 {
            return Err(StoneError::TooLarge(lattice_atoms.len()));
        }
        let atomset = |m: Member| -> Member {
            lattice_atoms
                .iter()
                .enumerate()
                .filter(|&(_, &a)| a & m == a)
                .fold(0, |acc, (i, _)| acc | (1 << i))
        };
        for &a in &family {
            for &b in &family {
                if a != b && atomset(a) == atomset(b) {
                    return Err(StoneError::NotAtomSeparated { a, b });
                }
            }
        }
        let atom_names: Vec<String> = lattice_atoms
            .iter()
            .map(|&m| {
                let names: Vec<&str> = (0..n)
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| vertex_names[i].as_str())
                    .collect();
                names.join("+")
            })
            .collect();
        let model = FiniteGBA::validate(atom_names, family.iter().map(|&m| atomset(m)))?;

        let space = LabelledSpace {
            vertex_names,
            labels,
            edges,
            family,
            ideal_maxes,
            model,
            lattice_atoms,
        };
        for (l, label) in space.labels.iter().enumerate() {
            for &a in &space.family {
                let ra = space.range_raw(a, l);
                if !space.family.contains(&ra) {
                    return Err(StoneError::NotAccommodating {
                        label: label.clone(),
                        set: a,
                    });
                }
                for &b in &space.family {
                    let wlr =
                        space.range_raw(a & b, l) == space.range_raw(a, l) & space.range_raw(b, l);
                    if !wlr {
                        return Err(StoneError::NotWeaklyLeftResolving {
                            label: label.clone(),
                            a,
                            b,
                        });
                    }
                }
            }
            if !space.family.contains(&space.ideal_maxes[l]) {
                return Err(StoneError::NotAMember(space.ideal_maxes[l]));
            }
            // F_l is the down-set of r(top, l) by monotonicity of r.
            let top = *space.family.last().expect("nonempty family");
            let top_range = space.range_raw(top, l);
            if top_range & space.ideal_maxes[l] != top_range {
                return Err(StoneError::IdealTooSmall {
                    label: label.clone(),
                    witness: top_range,
                });
            }
        }
        Ok(space)
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    /// The family as vertex subsets, in canonical order.
    pub fn family(&self) -> &[Member] {
        &self.family
    }

    pub fn ideal_maxes(&self) -> &[Member] {
        &self.ideal_maxes
    }

    /// The field-of-sets model of the family over its lattice atoms.
    pub fn model(&self) -> &FiniteGBA {
        &self.model
    }

    /// Transports a family member (vertex subset) into the model.
    pub fn to_model(&self, m: Member) -> Result<Member, StoneError> {
        if !self.family.contains(&m) {
            return Err(StoneError::NotAMember(m));
        }
        Ok(self
            .lattice_atoms
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a & m == a)
            .fold(0, |acc, (i, _)| acc | (1 << i)))
    }

    fn range_raw(&self, a: Member, label: usize) -> Member {
        self.edges
            .iter()
            .filter(|&&(s, _, l)| l == label && a & (1 << s) != 0)
            .fold(0, |acc, &(_, t, _)| acc | (1 << t))
    }

    /// The range operator `r(A, a)`: targets of `a`-labelled edges out of
    /// `A`.
    pub fn range(&self, a: Member, label: &str) -> Result<Member, StoneError> {
        if !self.family.contains(&a) {
            return Err(StoneError::NotAMember(a));
        }
        let l = self
            .labels
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| StoneError::UnknownLabel(label.to_string()))?;
        Ok(self.range_raw(a, l))
    }

    /// Deterministic DOT rendering; vertices by name, edges by label.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph stone {\n");
        for name in &self.vertex_names {
            out.push_str(&format!("  \"{name}\";\n"));
        }
        for &(s, t, l) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                self.vertex_names[s], self.vertex_names[t], self.labels[l]
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// The Stone dual of a system: vertices are the filters `F_w`, with an
/// `a`-edge `F_w → F_{w′}` iff `∅ ≠ w′ ⊆ θ_a(w)`, family `{V_x}`, and
/// ideals transported along `x ↦ V_x`.
pub fn stone_graph(sys: &DynamicalSystem) -> Result<LabelledSpace, StoneError> {
    let gba = sys.gba();
    let gens: Vec<Member> = filters(gba).iter().map(|f| f.0).collect();
    if gens.len() > 32 {
        return Err(StoneError::TooLarge(gens.len()));
    }
    let v_of = |x: Member| -> Member {
        gens.iter()
            .enumerate()
            .filter(|&(_, &w)| w & x == w)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    };
    let names: Vec<String> = gens
        .iter()
        .map(|&w| format!("F{}", gba.render(w)))
        .collect();
    let family: Vec<Member> = gba.members().iter().map(|&x| v_of(x)).collect();
    let mut edges = Vec::new();
    for (i, &w) in gens.iter().enumerate() {
        for l in 0..sys.alphabet().len() {
            let img = sys.theta(l).apply(w);
            for (j, &wp) in gens.iter().enumerate() {
                if wp != 0 && wp & img == wp {
                    edges.push((i, j, l));
                }
            }
        }
    }
    let ideal_maxes = (0..sys.alphabet().len())
        .map(|l| v_of(sys.ideal(l).max()))
        .collect();
    LabelledSpace::validate(names, sys.alphabet().to_vec(), edges, family, ideal_maxes)
}

/// The system of a labelled space: the family's field-of-sets model with
/// `θ_a = r(·, a)`, the transported ideals, and every set regular.
pub fn labelled_to_gbds(space: &LabelledSpace) -> Result<DynamicalSystem, StoneError> {
    let gba = space.model().clone();
    let mut theta = Vec::new();
    for (l, label) in space.labels.iter().enumerate() {
        let mut images = Vec::new();
        for (i, &atom_set) in space.lattice_atoms.iter().enumerate() {
            let r = space.range_raw(atom_set, l);
            images.push((1 << i, space.to_model(r)?));
        }
        theta.push(
            GbaMorphism::new(&gba, &gba, images).map_err(|e| SystemError::BadMorphism {
                letter: label.clone(),
                source: e,
            })?,
        );
    }
    let ideals: Vec<_> = space
        .ideal_maxes
        .iter()
        .map(|&m| Ok(gba.downset(space.to_model(m)?)))
        .collect::<Result<_, StoneError>>()?;
    let provisional = DynamicalSystem::validate(
        gba.clone(),
        space.labels.clone(),
        theta.clone(),
        ideals.clone(),
        gba.downset(0),
    )?;
    let j = gba.downset(provisional.b_reg().max());
    Ok(DynamicalSystem::validate(
        gba,
        space.labels.clone(),
        theta,
        ideals,
        j,
    )?)
}

/// Isomorphism of systems by backtracking over atom bijections; returns the
/// first atom map (in canonical member order) that transports members, θ,
/// ideals, and J, or `None`.
pub fn find_isomorphism(s1: &DynamicalSystem, s2: &DynamicalSystem) -> Option<Vec<Member>> {
    if s1.alphabet() != s2.alphabet() {
        return None;
    }
    let (g1, g2) = (s1.gba(), s2.gba());
    if g1.members().len() != g2.members().len() || g1.atoms().len() != g2.atoms().len() {
        return None;
    }
    let atoms1 = g1.atoms().to_vec();
    let mut image: Vec<Member> = Vec::new();
    fn extend(
        s1: &DynamicalSystem,
        s2: &DynamicalSystem,
        atoms1: &[Member],
        image: &mut Vec<Member>,
    ) -> bool {
        if image.len() == atoms1.len() {
            let phi = |m: Member| -> Member {
                atoms1
                    .iter()
                    .zip(image.iter())
                    .filter(|&(&a, _)| a & m == a)
                    .fold(0, |acc, (_, &b)| acc | b)
            };
            let members_match = s1
                .gba()
                .members()
                .iter()
                .all(|&m| s2.gba().contains(phi(m)));
            let theta_match = (0..s1.alphabet().len()).all(|l| {
                s1.gba()
                    .members()
                    .iter()
                    .all(|&m| phi(s1.theta(l).apply(m)) == s2.theta(l).apply(phi(m)))
            });
            let ideals_match =
                (0..s1.alphabet().len()).all(|l| phi(s1.ideal(l).max()) == s2.ideal(l).max());
            return members_match
                && theta_match
                && ideals_match
                && phi(s1.j().max()) == s2.j().max();
        }
        for &b in s2.gba().atoms() {
            if image.contains(&b) {
                continue;
            }
            image.push(b);
            if extend(s1, s2, atoms1, image) {
                return true;
            }
            image.pop();
        }
        false
    }
    extend(s1, s2, &atoms1, &mut image).then_some(image)
}
