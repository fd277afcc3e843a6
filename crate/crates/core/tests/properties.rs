use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use artinalg::approx::pullback_glue;
use artinalg::fixtures;
use artinalg::format::{parse_module, print_module, AlgebraFile};
use artinalg::homology::projective_cover;
use artinalg::module::{direct_sum, ShortExactSequence};
use artinalg::sample::{random_module, random_module_mixed};
use artinalg::selftest::identity_failures;
use artinalg::{Module, PathAlgebra};

fn module_for(alg: &PathAlgebra, seed: u64) -> Module {
    random_module_mixed(alg, 3, &mut ChaCha8Rng::seed_from_u64(seed))
}

macro_rules! identity_suite {
    ($($test:ident => $name:literal, $p:literal;)*) => {$(
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]
            #[test]
            fn $test(seed in any::<u64>()) {
                let alg = fixtures::load($name, $p).unwrap();
                let m = module_for(&alg, seed);
                let bad = identity_failures(&m);
                prop_assert!(bad.is_empty(), "{:?} on {:?}", bad, m);
            }
        }
    )*};
}

identity_suite! {
    identities_a3 => "a3", 2;
    identities_zigzag => "zigzag", 3;
    identities_cross => "cross", 2;
    identities_dual_numbers => "dual-numbers", 5;
    identities_cyclic => "cyclic", 2;
    identities_semisimple => "semisimple", 7;
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn module_text_round_trips(seed in any::<u64>(), which in 0usize..6, p in prop::sample::select(vec![2u64, 3, 5, 101])) {
        let alg = fixtures::load(fixtures::NAMES[which], p).unwrap();
        let m = module_for(&alg, seed);
        let again = parse_module(&alg, &print_module(&m)).unwrap();
        prop_assert_eq!(again, m);
    }

    #[test]
    fn algebra_text_round_trips(
        n in 1usize..5,
        arrows in prop::collection::vec((0usize..5, 0usize..5), 0..6),
        rel_picks in prop::collection::vec((0usize..6, 0usize..6), 0..4),
        p in prop::sample::select(vec![2u64, 3, 7]),
    ) {
        let vertices: Vec<String> = (1..=n).map(|v| v.to_string()).collect();
        let arrows: Vec<(String, String, String)> = arrows
            .iter()
            .enumerate()
            .map(|(k, (s, t))| (format!("a{k}"), vertices[s % n].clone(), vertices[t % n].clone()))
            .collect();
        let mut relations = Vec::new();
        for (x, y) in rel_picks {
            if arrows.is_empty() {
                break;
            }
            let (a, b) = (&arrows[x % arrows.len()], &arrows[y % arrows.len()]);
            if a.2 == b.1 {
                relations.push(vec![(1, vec![a.0.clone(), b.0.clone()])]);
            }
        }
        let file = AlgebraFile { field: p, vertices, arrows, relations, max_len: Some(6) };
        let text = file.print();
        let parsed = AlgebraFile::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &file);
        prop_assert_eq!(parsed.print(), text);
    }

    #[test]
    fn pullback_glue_counts_dimensions(seed in any::<u64>(), z_seed in any::<u64>()) {
        let alg = fixtures::load("a3", 3).unwrap();
        let c = random_module(&alg, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assume!(!c.is_zero());
        let (_, epi) = projective_cover(&c);
        let (_, k) = epi.kernel();
        let s1 = ShortExactSequence::new(k, epi).unwrap();
        let z = random_module(&alg, 2, &mut ChaCha8Rng::seed_from_u64(z_seed));
        let sum = direct_sum(&alg, &[z.clone(), c.clone()]);
        let s2 = ShortExactSequence::new(sum.injections[0].clone(), sum.projections[1].clone()).unwrap();
        let g = pullback_glue(&s1, &s2).unwrap();
        g.seq.certify().unwrap();
        prop_assert_eq!(g.seq.middle().total_dim(), s1.sub().total_dim() + s2.middle().total_dim());
        prop_assert_eq!(g.seq.quotient(), s2.middle());
    }

    #[test]
    fn double_dual_is_identity(seed in any::<u64>(), which in 0usize..6) {
        let alg = fixtures::load(fixtures::NAMES[which], 3).unwrap();
        let m = module_for(&alg, seed);
        prop_assert_eq!(m.dual().dual(), m);
    }
}
