//! Seeded random system generation for property tests: small algebras
//! (ground ≤ 4), up to three letters, morphisms built from disjoint block
//! assignments so validation always succeeds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gba::{FiniteGBA, GbaMorphism, Member};
use crate::system::DynamicalSystem;

/// Environment variable overriding the base seed of randomized tests.
pub const SEED_ENV: &str = "GBDS_LAB_SEED";

/// The base seed: `GBDS_LAB_SEED` if set and numeric, else a fixed default.
pub fn base_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x6264_735f_6c61_6221)
}

/// A random validated system: random subalgebra of a ≤ 4-point powerset,
/// 1–3 letters, random disjoint-image morphisms, minimal-plus-random
/// ideals, and a random regular ideal for J.
pub fn random_system(seed: u64) -> DynamicalSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = rng.gen_range(1..=4usize);
    let ground: Vec<String> = (1..=g).map(|i| format!("v{i}")).collect();

    // Random partition of a subset of the ground into blocks; the algebra
    // is the field of sets generated by the blocks.
    let mut blocks: Vec<Member> = vec![0; g];
    for v in 0..g {
        let b = rng.gen_range(0..=g);
        if b > 0 {
            blocks[b - 1] |= 1 << v;
        }
    }
    blocks.retain(|&b| b != 0);
    if blocks.is_empty() {
        blocks.push(1);
    }
    let members = (0u32..1 << blocks.len()).map(|mask| {
        blocks
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .fold(0, |acc, (_, &b)| acc | b)
    });
    let gba = FiniteGBA::validate(ground, members).expect("block algebra is closed");

    let n_letters = rng.gen_range(1..=3usize);
    let alphabet: Vec<String> = ["a", "b", "c"][..n_letters]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let atoms = gba.atoms().to_vec();

    let mut theta = Vec::new();
    let mut ideals = Vec::new();
    for _ in 0..n_letters {
        // Each block lands in the image of at most one atom, which keeps
        // atom images pairwise disjoint.
        let mut images = vec![0 as Member; atoms.len()];
        for &b in &blocks {
            let t = rng.gen_range(0..atoms.len() + 2);
            if t < atoms.len() {
                images[t] |= b;
            }
        }
        let m = GbaMorphism::new(&gba, &gba, atoms.iter().copied().zip(images).collect())
            .expect("disjoint images form a morphism");
        let f_max = m.apply(gba.top());
        let extra = *pick(&mut rng, gba.members());
        ideals.push(gba.downset(f_max | extra));
        theta.push(m);
    }

    let provisional = DynamicalSystem::validate(
        gba.clone(),
        alphabet.clone(),
        theta.clone(),
        ideals.clone(),
        gba.downset(0),
    )
    .expect("random data validates");
    let j_max = match rng.gen_range(0..3) {
        0 => 0,
        1 => provisional.b_reg().max(),
        _ => *pick(&mut rng, provisional.b_reg().members()),
    };
    DynamicalSystem::validate(gba.clone(), alphabet, theta, ideals, gba.downset(j_max))
        .expect("regular J validates")
}

/// Like [`random_system`] but with `J = B_reg` (every regular set taken).
pub fn random_non_relative_system(seed: u64) -> DynamicalSystem {
    let sys = random_system(seed);
    let gba = sys.gba().clone();
    let j = gba.downset(sys.b_reg().max());
    DynamicalSystem::validate(
        gba,
        sys.alphabet().to_vec(),
        (0..sys.alphabet().len())
            .map(|l| sys.theta(l).clone())
            .collect(),
        (0..sys.alphabet().len())
            .map(|l| sys.ideal(l).clone())
            .collect(),
        j,
    )
    .expect("J = B_reg validates")
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_and_valid() {
        for seed in 0..25 {
            let a = random_system(seed);
            let b = random_system(seed);
            assert_eq!(a.gba().members(), b.gba().members());
            assert_eq!(a.alphabet(), b.alphabet());
            assert!(a.gba().ground().len() <= 4);
            assert!(a.alphabet().len() <= 3);
            let nr = random_non_relative_system(seed);
            assert!(nr.is_non_relative());
        }
    }

    #[test]
    fn seeds_vary_the_output() {
        let shapes: std::collections::BTreeSet<(usize, usize, usize)> = (0..25)
            .map(|s| {
                let sys = random_system(s);
                (
                    sys.gba().ground().len(),
                    sys.gba().members().len(),
                    sys.alphabet().len(),
                )
            })
            .collect();
        assert!(shapes.len() > 3);
    }
}
