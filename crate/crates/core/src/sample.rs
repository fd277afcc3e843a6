//! Random modules for property tests: quotients of sums of indecomposable
//! projectives by randomly generated submodules.

use rand::Rng;

use crate::algebra::PathAlgebra;
use crate::module::{direct_sum, generated_family, quotient, Module};

/// A random module with at most `summands` projective summands in its cover.
pub fn random_module<R: Rng + ?Sized>(alg: &PathAlgebra, summands: usize, rng: &mut R) -> Module {
    let n = alg.vertex_count();
    let k = rng.gen_range(1..=summands.max(1));
    let parts: Vec<Module> = (0..k)
        .map(|_| Module::projective(alg, rng.gen_range(0..n)))
        .collect();
    let p = direct_sum(alg, &parts).module;
    let f = alg.field();
    let relations = rng.gen_range(0..=2usize);
    let mut gens = Vec::new();
    for _ in 0..relations {
        let v = rng.gen_range(0..n);
        if p.dim_at(v) == 0 {
            continue;
        }
        let x: Vec<u32> = (0..p.dim_at(v)).map(|_| f.random(rng)).collect();
        gens.push((v, x));
    }
    let fam = generated_family(&p, &gens);
    quotient(&p, &fam)
        .expect("generated family is a submodule")
        .0
}

/// A random module of either variance: a quotient of projectives, or the
/// dual of such a quotient over the opposite algebra (a submodule of
/// injectives).
pub fn random_module_mixed<R: Rng + ?Sized>(
    alg: &PathAlgebra,
    summands: usize,
    rng: &mut R,
) -> Module {
    if rng.gen_bool(0.5) {
        random_module(alg, summands, rng)
    } else {
        random_module(&alg.opposite(), summands, rng).dual()
    }
}
