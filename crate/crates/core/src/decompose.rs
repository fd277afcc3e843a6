//! Krull-Schmidt decomposition and isomorphism testing.
//!
//! Splitting uses Fitting's lemma: for an endomorphism `f` and `m = dim M`,
//! `M = Ker f^m ⊕ Im f^m`, and both parts are nonzero exactly when `f` is
//! neither nilpotent nor invertible.  Such an `f` exists iff `End(M)` is not
//! local, and is searched for by seeded sampling, the endomorphism basis,
//! and an exhaustive scan when `End(M)` is small.

use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::module::{hom_basis, random_combination, submodule, Module, ModuleMap};
use crate::rng;

/// Random endomorphisms tried before falling back to exhaustive search.
pub const SPLIT_TRIALS: usize = 96;
/// Random homomorphisms tried before the decomposition fallback.
pub const ISO_TRIALS: usize = 64;
/// Upper bound on `|End(M)|` for the exhaustive scan.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 14;

/// An indecomposable summand together with its basis inside the parent.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    /// Columns: the summand's basis at each vertex, in parent coordinates.
    pub basis: Vec<FpMatrix>,
}

fn power(m: &FpMatrix, mut e: usize) -> FpMatrix {
    let mut acc = FpMatrix::identity(m.field(), m.rows());
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    acc
}

type Family = Vec<FpMatrix>;

fn fitting_split(m: &Module, f: &ModuleMap) -> Option<(Family, Family)> {
    let n = m.total_dim();
    let pw: Vec<FpMatrix> = f.comps().iter().map(|c| power(c, n)).collect();
    let ker: Family = pw.iter().map(FpMatrix::kernel_basis).collect();
    let kd: usize = ker.iter().map(FpMatrix::cols).sum();
    if kd == 0 || kd == n {
        return None;
    }
    let img: Family = pw.iter().map(FpMatrix::column_space).collect();
    Some((ker, img))
}

fn find_split(m: &Module) -> Option<(Family, Family)> {
    if m.total_dim() <= 1 {
        return None;
    }
    let end = hom_basis(m, m).expect("same algebra");
    if end.len() <= 1 {
        return None;
    }
    for f in &end {
        if let Some(s) = fitting_split(m, f) {
            return Some(s);
        }
    }
    let mut rng = rng::stream(m.fingerprint() ^ 0x5b11_7);
    for _ in 0..SPLIT_TRIALS {
        let f = random_combination(&end, &mut rng).expect("nonempty basis");
        if let Some(s) = fitting_split(m, &f) {
            return Some(s);
        }
    }
    let p = m.field().modulus() as u64;
    let size = (p as f64).powi(end.len() as i32);
    if size <= EXHAUSTIVE_LIMIT as f64 {
        let total = p.pow(end.len() as u32);
        for code in 1..total {
            let mut c = code;
            let mut f = ModuleMap::zero(m, m);
            for b in &end {
                let coef = (c % p) as u32;
                c /= p;
                if coef != 0 {
                    f = f.add(&b.scale(coef));
                }
            }
            if let Some(s) = fitting_split(m, &f) {
                return Some(s);
            }
        }
    }
    None
}

/// `M` is nonzero and admits no split.
pub fn is_indecomposable(m: &Module) -> bool {
    !m.is_zero() && find_split(m).is_none()
}

/// Indecomposable summands with their bases in `M`.
pub fn decompose_summands(m: &Module) -> Vec<Summand> {
    if m.is_zero() {
        return Vec::new();
    }
    match find_split(m) {
        None => vec![Summand {
            module: m.clone(),
            basis: m
                .dims()
                .iter()
                .map(|&d| FpMatrix::identity(m.field(), d))
                .collect(),
        }],
        Some((a, b)) => {
            let mut out = Vec::new();
            for fam in [a, b] {
                let (sub, _) = submodule(m, &fam).expect("Fitting pieces are submodules");
                for s in decompose_summands(&sub) {
                    let basis = fam.iter().zip(&s.basis).map(|(f, c)| f.mul(c)).collect();
                    out.push(Summand {
                        module: s.module,
                        basis,
                    });
                }
            }
            out
        }
    }
}

/// Isomorphism classes of indecomposable summands with multiplicities,
/// in order of first appearance.
pub fn decompose(m: &Module) -> Vec<(Module, usize)> {
    let mut out: Vec<(Module, usize)> = Vec::new();
    for s in decompose_summands(m) {
        match out
            .iter_mut()
            .find(|(r, _)| iso_indecomposable(r, &s.module).is_some())
        {
            Some(entry) => entry.1 += 1,
            None => out.push((s.module, 1)),
        }
    }
    out
}

/// Isomorphism test for indecomposable modules: `Hom(X, Y)` contains an
/// isomorphism iff one of its basis elements is one (non-units of the local
/// ring `End X` form an ideal).
pub fn iso_indecomposable(x: &Module, y: &Module) -> Option<ModuleMap> {
    if x.algebra() != y.algebra() || x.dims() != y.dims() {
        return None;
    }
    if x.is_zero() {
        return Some(ModuleMap::zero(x, y));
    }
    let hb = hom_basis(x, y).ok()?;
    hb.into_iter().find(ModuleMap::is_isomorphism)
}

/// Returns an isomorphism `M → N` when one exists.
pub fn is_isomorphic(m: &Module, n: &Module) -> Option<ModuleMap> {
    if m.algebra() != n.algebra() || m.dims() != n.dims() {
        return None;
    }
    if m.is_zero() {
        return Some(ModuleMap::zero(m, n));
    }
    let hb = hom_basis(m, n).ok()?;
    if hb.is_empty() {
        return None;
    }
    if let Some(f) = hb.iter().find(|f| f.is_isomorphism()) {
        return Some(f.clone());
    }
    let mut rng = rng::stream(m.fingerprint() ^ n.fingerprint().rotate_left(17));
    for _ in 0..ISO_TRIALS {
        let f = random_combination(&hb, &mut rng).expect("nonempty");
        if f.is_isomorphism() {
            return Some(f);
        }
    }
    iso_by_decomposition(m, n).ok().flatten()
}

fn iso_by_decomposition(m: &Module, n: &Module) -> Result<Option<ModuleMap>> {
    let sm = decompose_summands(m);
    let sn = decompose_summands(n);
    if sm.len() != sn.len() {
        return Ok(None);
    }
    let mut used = vec![false; sn.len()];
    let mut pairs = Vec::new();
    for a in &sm {
        let hit = sn
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .find_map(|(j, b)| iso_indecomposable(&a.module, &b.module).map(|phi| (j, phi)));
        match hit {
            Some((j, phi)) => {
                used[j] = true;
                pairs.push((j, phi));
            }
            None => return Ok(None),
        }
    }
    let f = m.field();
    let nv = m.dims().len();
    let mut comps = Vec::with_capacity(nv);
    for v in 0..nv {
        let mut tm = FpMatrix::zeros(f, m.dim_at(v), 0);
        let mut tn = FpMatrix::zeros(f, n.dim_at(v), 0);
        let mut blocks = Vec::new();
        for (a, (j, phi)) in sm.iter().zip(&pairs) {
            tm = tm.hstack(&a.basis[v]);
            tn = tn.hstack(&sn[*j].basis[v]);
            blocks.push(phi.comp(v).clone());
        }
        let refs: Vec<&FpMatrix> = blocks.iter().collect();
        let d = FpMatrix::block_diag(f, &refs);
        let inv = tm
            .inverse()
            .ok_or_else(|| Error::Internal("summand bases do not span".into()))?;
        comps.push(tn.mul(&d).mul(&inv));
    }
    let w = ModuleMap::new(m, n, comps)?;
    Ok(w.is_isomorphism().then_some(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PathAlgebra;
    use crate::module::direct_sum;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a3(p: u64) -> PathAlgebra {
        PathAlgebra::from_labels(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3")],
            &[],
            p,
        )
        .unwrap()
    }

    #[test]
    fn iso_basics() {
        let a = a3(101);
        let m = Module::projective(&a, 0);
        let w = is_isomorphic(&m, &m).unwrap();
        assert!(w.is_isomorphism());
        assert!(is_isomorphic(&Module::simple(&a, 0), &Module::simple(&a, 1)).is_none());
    }

    #[test]
    fn conjugated_modules_are_isomorphic() {
        let a = a3(101);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let m = crate::sample::random_module(&a, 3, &mut rng);
            let t: Vec<FpMatrix> = m
                .dims()
                .iter()
                .map(|&d| loop {
                    let x = FpMatrix::random(a.field(), d, d, &mut rng);
                    if x.is_invertible() {
                        break x;
                    }
                })
                .collect();
            let c = m.conjugate(&t).unwrap();
            let w = is_isomorphic(&m, &c).expect("conjugate is isomorphic");
            assert!(w.is_isomorphism());
        }
    }

    #[test]
    fn regular_module_of_a3() {
        let a = a3(2);
        let d = decompose(&Module::regular(&a));
        assert_eq!(d.len(), 3);
        for v in 0..3 {
            let p = Module::projective(&a, v);
            assert!(d
                .iter()
                .any(|(x, k)| *k == 1 && is_isomorphic(x, &p).is_some()));
        }
    }

    #[test]
    fn repeated_summand() {
        let a = a3(2);
        let p = Module::projective(&a, 0);
        let s = direct_sum(&a, &[p.clone(), p.clone()]).module;
        let d = decompose(&s);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].1, 2);
        assert!(is_isomorphic(&d[0].0, &p).is_some());
        assert!(is_indecomposable(&p));
        assert!(!is_indecomposable(&s));
    }

    #[test]
    fn semisimple_square_over_f2() {
        // S ⊕ S over F_2 has End = M_2(F_2); the split still has to be found
        let alg = PathAlgebra::from_labels(&["1"], &[], &[], 2).unwrap();
        let s = Module::simple(&alg, 0);
        let ss = direct_sum(&alg, &[s.clone(), s.clone()]).module;
        assert_eq!(decompose(&ss), vec![(s, 2)]);
    }

    #[test]
    fn decomposition_reassembles() {
        let a = a3(3);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let m = crate::sample::random_module(&a, 3, &mut rng);
            let parts: Vec<Module> = decompose(&m)
                .into_iter()
                .flat_map(|(x, k)| std::iter::repeat(x).take(k))
                .collect();
            let back = direct_sum(&a, &parts).module;
            assert!(is_isomorphic(&m, &back).is_some());
        }
    }
}
