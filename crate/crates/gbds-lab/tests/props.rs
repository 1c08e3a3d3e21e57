//! Property tests over the seeded random-system family.

use gbds_lab::algebra::{Algebra, IntRing};
use gbds_lab::document::SystemDocument;
use gbds_lab::expr;
use gbds_lab::random::{random_non_relative_system, random_system};
use gbds_lab::semigroup::{enumerate_elements, multiply, star};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Serialization round trip: any generated system reparses identically.
    #[test]
    fn document_round_trip(seed in 0u64..10_000) {
        let sys = random_system(seed);
        let doc = SystemDocument::from_system(&sys);
        let text = serde_json::to_string(&doc).unwrap();
        let back: SystemDocument = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_system().unwrap(), sys);
    }

    /// s·s*·s = s and (s*)* = s for bounded semigroup elements.
    #[test]
    fn inverse_laws(seed in 0u64..10_000, pick in 0usize..64) {
        let sys = random_system(seed);
        let els = enumerate_elements(&sys, 3);
        let s = &els[pick % els.len()];
        let ss = star(s);
        let back = multiply(&sys, &multiply(&sys, s, &ss).unwrap(), s).unwrap();
        prop_assert_eq!(&back, s);
        prop_assert_eq!(&star(&ss), s);
    }

    /// Rendering an algebra generator product reparses to the same element.
    #[test]
    fn expr_render_parse_round_trip(seed in 0u64..10_000, pick in 0usize..64) {
        let sys = random_system(seed);
        let alg = Algebra::new(&sys, IntRing);
        let els = enumerate_elements(&sys, 2);
        if let gbds_lab::semigroup::Element::Triple { alpha, set, beta } =
            &els[pick % els.len()]
        {
            let mut parts: Vec<String> = alpha
                .iter()
                .map(|&l| format!("s{{{},[{}]}}", sys.alphabet()[l], atoms(&sys, sys.ideal(l).max())))
                .collect();
            parts.push(format!("p[{}]", atoms(&sys, *set)));
            parts.extend(beta.iter().rev().map(|&l| {
                format!("S{{{},[{}]}}", sys.alphabet()[l], atoms(&sys, sys.ideal(l).max()))
            }));
            let src = parts.join("*");
            let v = expr::parse(&alg, &src).unwrap();
            let rendered = expr::render(&alg, &v);
            let reparsed = expr::parse(&alg, &rendered).unwrap();
            prop_assert!(alg.equal(&v, &reparsed).unwrap(), "{src} vs {rendered}");
        }
    }

    /// Rebuilt non-relative systems are accepted by desingularization and
    /// their quotient ideal is everything regular.
    #[test]
    fn non_relative_rebuild(seed in 0u64..10_000) {
        let sys = random_non_relative_system(seed);
        prop_assert!(sys.is_non_relative());
        gbds_lab::constructions::desing::desingularize(&sys).unwrap();
    }
}

fn atoms(sys: &gbds_lab::system::DynamicalSystem, m: u32) -> String {
    sys.gba().render(m).trim_matches(['[', ']']).to_string()
}
