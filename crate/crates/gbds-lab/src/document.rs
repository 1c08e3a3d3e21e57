//! File formats: JSON documents describing systems and labelled spaces,
//! with located errors and canonical round-tripping.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gba::{FiniteGBA, GbaMorphism, Member};
use crate::stone::{LabelledSpace, StoneError};
use crate::system::{DynamicalSystem, SystemError};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{field}: unknown vertex {name}")]
    UnknownVertex { field: String, name: String },
    #[error("{field}: unknown letter {name}")]
    UnknownLetter { field: String, name: String },
    #[error("{field}: unsupported keyword {name:?}")]
    BadKeyword { field: String, name: String },
    #[error("{field}: {name:?} is not an atom of the algebra")]
    NotAnAtom { field: String, name: String },
    #[error("{field}: {source}")]
    Invalid { field: String, source: SystemError },
    #[error("{field}: {source}")]
    Space { field: String, source: StoneError },
}

/// Either the full powerset or an explicit list of vertex-name sets.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SetsSpec {
    Keyword(String),
    Explicit(Vec<Vec<String>>),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Generators {
    pub generators: Vec<Vec<String>>,
}

/// The regular ideal J: `"all_regular"`, `"empty"`, or explicit generators.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum JSpec {
    Keyword(String),
    Explicit(Generators),
}

/// On-disk description of a dynamical system. θ is given on atoms only
/// (keyed by space-separated vertex names) and extended by the library.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SystemDocument {
    pub ground_set: Vec<String>,
    pub sets: SetsSpec,
    pub alphabet: Vec<String>,
    pub theta: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    pub ideals: BTreeMap<String, Generators>,
    #[serde(rename = "J")]
    pub j: JSpec,
}

fn names_to_member(
    gba: &FiniteGBA,
    names: &[String],
    field: &str,
) -> Result<Member, DocumentError> {
    let mut m = 0;
    for n in names {
        let v = gba.vertex(n).ok_or_else(|| DocumentError::UnknownVertex {
            field: field.to_string(),
            name: n.clone(),
        })?;
        m |= 1 << v;
    }
    Ok(m)
}

fn member_names(gba: &FiniteGBA, m: Member) -> Vec<String> {
    (0..gba.ground().len())
        .filter(|i| m & (1 << i) != 0)
        .map(|i| gba.ground()[i].clone())
        .collect()
}

fn atom_key(gba: &FiniteGBA, atom: Member) -> String {
    member_names(gba, atom).join(" ")
}

impl SystemDocument {
    pub fn to_system(&self) -> Result<DynamicalSystem, DocumentError> {
        let invalid = |field: &str, source: SystemError| DocumentError::Invalid {
            field: field.to_string(),
            source,
        };
        let gba = match &self.sets {
            SetsSpec::Keyword(k) if k == "powerset" => {
                FiniteGBA::validate(self.ground_set.clone(), 0..1u32 << self.ground_set.len())
            }
            SetsSpec::Keyword(k) => {
                return Err(DocumentError::BadKeyword {
                    field: "sets".into(),
                    name: k.clone(),
                })
            }
            SetsSpec::Explicit(sets) => {
                // Resolve names against the announced ground first.
                let probe =
                    FiniteGBA::validate(self.ground_set.clone(), 0..1u32 << self.ground_set.len())
                        .map_err(|e| invalid("ground_set", e.into()))?;
                let mut members = vec![0];
                for (i, set) in sets.iter().enumerate() {
                    members.push(names_to_member(&probe, set, &format!("sets[{i}]"))?);
                }
                FiniteGBA::validate(self.ground_set.clone(), members)
            }
        }
        .map_err(|e| invalid("sets", e.into()))?;

        let mut theta = Vec::new();
        for letter in &self.alphabet {
            let field = format!("theta.{letter}");
            let map = self
                .theta
                .get(letter)
                .ok_or_else(|| DocumentError::UnknownLetter {
                    field: "theta".into(),
                    name: letter.clone(),
                })?;
            let mut images = Vec::new();
            for (key, target) in map {
                let key_names: Vec<String> = key.split_whitespace().map(str::to_string).collect();
                let atom = names_to_member(&gba, &key_names, &field)?;
                if !gba.atoms().contains(&atom) {
                    return Err(DocumentError::NotAnAtom {
                        field,
                        name: key.clone(),
                    });
                }
                images.push((atom, names_to_member(&gba, target, &field)?));
            }
            // Unlisted atoms map to the empty set.
            for &a in gba.atoms() {
                if !images.iter().any(|&(b, _)| b == a) {
                    images.push((a, 0));
                }
            }
            theta.push(GbaMorphism::new(&gba, &gba, images).map_err(|e| {
                invalid(
                    &field,
                    SystemError::BadMorphism {
                        letter: letter.clone(),
                        source: e,
                    },
                )
            })?);
        }

        let mut ideals = Vec::new();
        for letter in &self.alphabet {
            let field = format!("ideals.{letter}");
            let spec = self
                .ideals
                .get(letter)
                .ok_or_else(|| DocumentError::UnknownLetter {
                    field: "ideals".into(),
                    name: letter.clone(),
                })?;
            let mut gens = Vec::new();
            for g in &spec.generators {
                gens.push(names_to_member(&gba, g, &field)?);
            }
            ideals.push(
                gba.ideal_generated(&gens)
                    .map_err(|e| invalid(&field, e.into()))?,
            );
        }

        let provisional = DynamicalSystem::validate(
            gba.clone(),
            self.alphabet.clone(),
            theta.clone(),
            ideals.clone(),
            gba.downset(0),
        )
        .map_err(|e| invalid("ideals", e))?;
        let j = match &self.j {
            JSpec::Keyword(k) if k == "all_regular" => gba.downset(provisional.b_reg().max()),
            JSpec::Keyword(k) if k == "empty" => gba.downset(0),
            JSpec::Keyword(k) => {
                return Err(DocumentError::BadKeyword {
                    field: "J".into(),
                    name: k.clone(),
                })
            }
            JSpec::Explicit(spec) => {
                let mut gens = Vec::new();
                for g in &spec.generators {
                    gens.push(names_to_member(&gba, g, "J")?);
                }
                gba.ideal_generated(&gens)
                    .map_err(|e| invalid("J", e.into()))?
            }
        };
        DynamicalSystem::validate(gba, self.alphabet.clone(), theta, ideals, j)
            .map_err(|e| invalid("J", e))
    }

    /// Canonical document for a system: explicit sets, θ on atoms, ideal
    /// and J maxima as single generators.
    pub fn from_system(sys: &DynamicalSystem) -> Self {
        let gba = sys.gba();
        let sets = SetsSpec::Explicit(
            gba.members()
                .iter()
                .filter(|&&m| m != 0)
                .map(|&m| member_names(gba, m))
                .collect(),
        );
        let mut theta = BTreeMap::new();
        let mut ideals = BTreeMap::new();
        for (l, letter) in sys.alphabet().iter().enumerate() {
            let mut map = BTreeMap::new();
            for &a in gba.atoms() {
                let img = sys.theta(l).apply(a);
                if img != 0 {
                    map.insert(atom_key(gba, a), member_names(gba, img));
                }
            }
            theta.insert(letter.clone(), map);
            ideals.insert(
                letter.clone(),
                Generators {
                    generators: vec![member_names(gba, sys.ideal(l).max())],
                },
            );
        }
        let j = if sys.is_non_relative() {
            JSpec::Keyword("all_regular".into())
        } else if sys.j().max() == 0 {
            JSpec::Keyword("empty".into())
        } else {
            JSpec::Explicit(Generators {
                generators: vec![member_names(gba, sys.j().max())],
            })
        };
        SystemDocument {
            ground_set: gba.ground().to_vec(),
            sets,
            alphabet: sys.alphabet().to_vec(),
            theta,
            ideals,
            j,
        }
    }
}

/// On-disk description of a labelled space: explicit vertex-name edges and
/// family; ideals by generators.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LabelledSpaceDocument {
    pub vertices: Vec<String>,
    pub labels: Vec<String>,
    /// Edges as `[source, label, target]` triples.
    pub edges: Vec<[String; 3]>,
    pub family: SetsSpec,
    pub ideals: BTreeMap<String, Generators>,
}

impl LabelledSpaceDocument {
    pub fn to_space(&self) -> Result<LabelledSpace, DocumentError> {
        let vertex = |n: &str, field: &str| {
            self.vertices
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| DocumentError::UnknownVertex {
                    field: field.to_string(),
                    name: n.to_string(),
                })
        };
        let label = |n: &str, field: &str| {
            self.labels
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| DocumentError::UnknownLetter {
                    field: field.to_string(),
                    name: n.to_string(),
                })
        };
        let mut edges = Vec::new();
        for (i, [s, l, t]) in self.edges.iter().enumerate() {
            let field = format!("edges[{i}]");
            edges.push((vertex(s, &field)?, vertex(t, &field)?, label(l, &field)?));
        }
        let to_member = |names: &[String], field: &str| -> Result<Member, DocumentError> {
            let mut m = 0;
            for n in names {
                m |= 1 << vertex(n, field)?;
            }
            Ok(m)
        };
        let family: Vec<Member> = match &self.family {
            SetsSpec::Keyword(k) if k == "powerset" => (0..1u32 << self.vertices.len()).collect(),
            SetsSpec::Keyword(k) => {
                return Err(DocumentError::BadKeyword {
                    field: "family".into(),
                    name: k.clone(),
                })
            }
            SetsSpec::Explicit(sets) => {
                let mut out = vec![0];
                for (i, set) in sets.iter().enumerate() {
                    out.push(to_member(set, &format!("family[{i}]"))?);
                }
                out
            }
        };
        let mut ideal_maxes = Vec::new();
        for l in &self.labels {
            let field = format!("ideals.{l}");
            let spec = self
                .ideals
                .get(l)
                .ok_or_else(|| DocumentError::UnknownLetter {
                    field: "ideals".into(),
                    name: l.clone(),
                })?;
            let mut max = 0;
            for g in &spec.generators {
                max |= to_member(g, &field)?;
            }
            ideal_maxes.push(max);
        }
        LabelledSpace::validate(
            self.vertices.clone(),
            self.labels.clone(),
            edges,
            family,
            ideal_maxes,
        )
        .map_err(|e| DocumentError::Space {
            field: "space".into(),
            source: e,
        })
    }
}

pub fn read_system(path: &Path) -> Result<DynamicalSystem, DocumentError> {
    let text = std::fs::read_to_string(path).map_err(|e| DocumentError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let doc: SystemDocument = serde_json::from_str(&text)?;
    doc.to_system()
}

pub fn read_labelled_space(path: &Path) -> Result<LabelledSpace, DocumentError> {
    let text = std::fs::read_to_string(path).map_err(|e| DocumentError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let doc: LabelledSpaceDocument = serde_json::from_str(&text)?;
    doc.to_space()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fix1, fix2};
    use crate::random::random_system;

    #[test]
    fn fix1_document_parses_to_fixture() {
        let text = r#"{
            "ground_set": ["v1", "v2"],
            "sets": "powerset",
            "alphabet": ["a"],
            "theta": {"a": {"v1": ["v2"]}},
            "ideals": {"a": {"generators": [["v2"]]}},
            "J": "all_regular"
        }"#;
        let doc: SystemDocument = serde_json::from_str(text).unwrap();
        let sys = doc.to_system().unwrap();
        assert_eq!(sys, fix1(true));
    }

    #[test]
    fn round_trip_is_canonical() {
        for sys in [fix1(true), fix1(false), fix2()] {
            let doc = SystemDocument::from_system(&sys);
            let json = serde_json::to_string(&doc).unwrap();
            let doc2: SystemDocument = serde_json::from_str(&json).unwrap();
            assert_eq!(doc, doc2);
            assert_eq!(doc2.to_system().unwrap(), sys);
        }
        for seed in 0..20 {
            let sys = random_system(seed);
            let doc = SystemDocument::from_system(&sys);
            assert_eq!(doc.to_system().unwrap(), sys);
        }
    }

    #[test]
    fn located_errors() {
        let mut doc = SystemDocument::from_system(&fix1(true));
        doc.ideals.get_mut("a").unwrap().generators = vec![];
        // An empty generator list shrinks I_a below F_a = downset({v2}).
        match doc.to_system().unwrap_err() {
            DocumentError::Invalid { field, source } => {
                assert_eq!(field, "ideals");
                assert!(matches!(source, SystemError::IdealTooSmall { .. }));
            }
            other => panic!("unexpected error {other:?}"),
        }

        let mut doc = SystemDocument::from_system(&fix1(true));
        doc.theta
            .get_mut("a")
            .unwrap()
            .insert("v1 v2".into(), vec!["v2".into()]);
        assert!(matches!(
            doc.to_system().unwrap_err(),
            DocumentError::NotAnAtom { .. }
        ));

        let bad: Result<SystemDocument, _> = serde_json::from_str("{\"ground_set\": 3}");
        assert!(bad.is_err());
    }

    #[test]
    fn labelled_space_document_parses() {
        let text = r#"{
            "vertices": ["u", "w"],
            "labels": ["a"],
            "edges": [["u", "a", "w"]],
            "family": "powerset",
            "ideals": {"a": {"generators": [["w"]]}}
        }"#;
        let doc: LabelledSpaceDocument = serde_json::from_str(text).unwrap();
        let space = doc.to_space().unwrap();
        assert_eq!(space.range(0b01, "a").unwrap(), 0b10);
    }
}
