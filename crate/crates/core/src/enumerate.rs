//! Bounded enumeration: submodule lattices and isomorphism classes of
//! indecomposable modules.

use std::collections::{BTreeMap, HashSet};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::algebra::PathAlgebra;
use crate::decompose::{is_indecomposable, is_isomorphic};
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::module::{family_sum, generated_family, quotient, submodule, Module, ModuleMap};

/// Maximum number of submodules or cyclic generators considered.
pub const SUBMODULE_BUDGET: usize = 50_000;
/// Maximum number of arrow-matrix tuples tried by the generic enumerator.
pub const TUPLE_BUDGET: u64 = 1 << 24;

/// Canonical column basis of a column space: the transpose of the reduced
/// row echelon form of its transpose.
pub fn canonical_basis(b: &FpMatrix) -> FpMatrix {
    let r = b.transpose().rref();
    r.matrix.submatrix(0, r.rank, 0, b.rows()).transpose()
}

fn family_key(fam: &[FpMatrix]) -> Vec<u32> {
    let mut key = Vec::new();
    for b in fam {
        key.push(b.cols() as u32);
        key.extend_from_slice(b.data());
    }
    key
}

fn canonical_family(fam: &[FpMatrix]) -> Vec<FpMatrix> {
    fam.iter().map(canonical_basis).collect()
}

/// Projective points of `F_p^d`: nonzero vectors whose first nonzero
/// coordinate is 1.
fn projective_points(p: u32, d: usize, budget: usize) -> Result<Vec<Vec<u32>>> {
    let count = (0..d).try_fold(0u64, |acc, i| {
        acc.checked_add((p as u64).checked_pow(i as u32)?)
    });
    match count {
        Some(c) if c as usize <= budget => {}
        _ => {
            return Err(Error::EnumerationInfeasible(format!(
                "{d}-dimensional space over F_{p} has too many lines"
            )))
        }
    }
    let mut out = Vec::new();
    for lead in 0..d {
        let free = d - lead - 1;
        let total = (p as u64).pow(free as u32);
        for code in 0..total {
            let mut v = vec![0u32; d];
            v[lead] = 1;
            let mut c = code;
            for x in v.iter_mut().skip(lead + 1) {
                *x = (c % p as u64) as u32;
                c /= p as u64;
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// All submodules of `M` (including `0` and `M`) as joins of cyclic
/// submodules, ordered by dimension then canonical basis.
pub fn submodule_families(m: &Module, budget: usize) -> Result<Vec<Vec<FpMatrix>>> {
    let p = m.field().modulus();
    let mut cyclic: Vec<Vec<FpMatrix>> = Vec::new();
    let mut seen = HashSet::new();
    for v in 0..m.dims().len() {
        for x in projective_points(p, m.dim_at(v), budget)? {
            let fam = canonical_family(&generated_family(m, &[(v, x)]));
            if seen.insert(family_key(&fam)) {
                cyclic.push(fam);
            }
        }
    }
    let zero: Vec<FpMatrix> = m
        .dims()
        .iter()
        .map(|&d| FpMatrix::zeros(m.field(), d, 0))
        .collect();
    let mut all = vec![zero.clone()];
    let mut keys: HashSet<Vec<u32>> = HashSet::from([family_key(&zero)]);
    for c in &cyclic {
        let snapshot = all.len();
        for i in 0..snapshot {
            let joined = canonical_family(&family_sum(&all[i], c));
            if keys.insert(family_key(&joined)) {
                all.push(joined);
                if all.len() > budget {
                    return Err(Error::EnumerationInfeasible(format!(
                        "more than {budget} submodules"
                    )));
                }
            }
        }
    }
    all.sort_by_key(|f| {
        let dim: usize = f.iter().map(FpMatrix::cols).sum();
        (dim, family_key(f))
    });
    Ok(all)
}

pub fn submodules(m: &Module, budget: usize) -> Result<Vec<(Module, ModuleMap)>> {
    submodule_families(m, budget)?
        .iter()
        .map(|f| submodule(m, f))
        .collect()
}

/// Every vertex has at most one incoming and one outgoing arrow, so all
/// indecomposables are uniserial quotients of projectives.
pub fn is_nakayama(alg: &PathAlgebra) -> bool {
    let n = alg.vertex_count();
    let mut ins = vec![0; n];
    let mut outs = vec![0; n];
    for a in alg.quiver().arrows() {
        outs[a.source] += 1;
        ins[a.target] += 1;
    }
    ins.iter().chain(&outs).all(|&d| d <= 1)
}

/// Radical series `M ⊇ rad M ⊇ rad² M ⊇ … ⊇ 0` as subspace families.
pub fn radical_series(m: &Module) -> Vec<Vec<FpMatrix>> {
    let ident: Vec<FpMatrix> = m
        .dims()
        .iter()
        .map(|&d| FpMatrix::identity(m.field(), d))
        .collect();
    let mut out = vec![ident];
    loop {
        let cur = out.last().expect("nonempty");
        if cur.iter().all(|b| b.cols() == 0) {
            break;
        }
        let (sub, _) = submodule(m, cur).expect("radical layers are submodules");
        let rad: Vec<FpMatrix> = sub
            .radical_family()
            .iter()
            .zip(cur)
            .map(|(r, b)| b.mul(r))
            .collect();
        out.push(rad);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMethod {
    /// Uniserial quotients of projectives; exact.
    Serial,
    /// Brute force over 0/1 arrow matrices up to the dimension bound.
    Generic,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub modules: Vec<Module>,
    pub method: EnumerationMethod,
    pub dim_bound: usize,
    /// No indecomposable was dropped by the dimension bound.
    pub complete: bool,
}

impl Enumeration {
    /// The list contains every indecomposable of `mod Λ`.
    pub fn is_exhaustive(&self) -> bool {
        self.method == EnumerationMethod::Serial && self.complete
    }
}

fn sort_modules(list: &mut [Module]) {
    list.sort_by(|a, b| {
        (a.total_dim(), a.dims(), a.canonical_bytes()).cmp(&(
            b.total_dim(),
            b.dims(),
            b.canonical_bytes(),
        ))
    });
}

/// `P(v)/rad^k P(v)` for all `v` and `k ≥ 1`.
pub fn serial_indecomposables(alg: &PathAlgebra) -> Vec<Module> {
    let mut out = Vec::new();
    for v in 0..alg.vertex_count() {
        let p = Module::projective(alg, v);
        let series = radical_series(&p);
        for fam in series.iter().skip(1) {
            out.push(quotient(&p, fam).expect("radical layer").0);
        }
    }
    sort_modules(&mut out);
    out
}

fn dimension_vectors(n: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            if cur.iter().any(|&d| d > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for d in 0..=left {
            cur[i] = d;
            rec(i + 1, left - d, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, bound, &mut cur, &mut out);
    out.sort_by_key(|d| (d.iter().sum::<usize>(), d.clone()));
    out
}

/// Isomorphism invariants used to bucket candidates before the exact test.
fn invariant_key(m: &Module) -> Vec<usize> {
    let mut key = m.dims().to_vec();
    key.extend(m.top_dims());
    key.extend(m.socle_dims());
    let alg = m.algebra();
    for b in 0..alg.dim() {
        if !alg.basis_path(b).is_trivial() {
            key.push(m.basis_action(b).rank());
        }
    }
    key
}

/// Indecomposables with dimension vector `dims` and 0/1 arrow matrices, up
/// to isomorphism.
fn indecomposables_with_dims(alg: &PathAlgebra, dims: &[usize]) -> Vec<Module> {
    let q = alg.quiver();
    let f = alg.field();
    let shapes: Vec<(usize, usize)> = q
        .arrows()
        .iter()
        .map(|a| (dims[a.target], dims[a.source]))
        .collect();
    let bits: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let mut buckets: BTreeMap<Vec<usize>, Vec<Module>> = BTreeMap::new();
    for code in 0u64..(1u64 << bits) {
        let mut shift = 0;
        let mats: Vec<FpMatrix> = shapes
            .iter()
            .map(|&(r, c)| {
                let m =
                    FpMatrix::from_fn(f, r, c, |i, j| ((code >> (shift + i * c + j)) & 1) as u32);
                shift += r * c;
                m
            })
            .collect();
        let m = match Module::new(alg, dims.to_vec(), mats) {
            Ok(m) => m,
            Err(_) => continue,
        };
        if !is_indecomposable(&m) {
            continue;
        }
        let bucket = buckets.entry(invariant_key(&m)).or_default();
        if bucket.iter().all(|x| is_isomorphic(x, &m).is_none()) {
            bucket.push(m);
        }
    }
    buckets.into_values().flatten().collect()
}

/// Indecomposables up to isomorphism with total dimension at most
/// `dim_bound`.  Nakayama algebras use the exact serial list; otherwise
/// modules with 0/1 arrow matrices are searched (exhaustive over `F_2`).
pub fn enumerate_modules(alg: &PathAlgebra, dim_bound: usize) -> Result<Enumeration> {
    if is_nakayama(alg) {
        let mut modules = serial_indecomposables(alg);
        let all = modules.len();
        modules.retain(|m| m.total_dim() <= dim_bound);
        return Ok(Enumeration {
            complete: modules.len() == all,
            modules,
            method: EnumerationMethod::Serial,
            dim_bound,
        });
    }
    enumerate_generic(alg, dim_bound)
}

pub fn enumerate_generic(alg: &PathAlgebra, dim_bound: usize) -> Result<Enumeration> {
    let q = alg.quiver();
    let vecs: Vec<Vec<usize>> = dimension_vectors(alg.vertex_count(), dim_bound)
        .into_iter()
        .filter(|d| {
            let support: Vec<usize> = (0..d.len()).filter(|&v| d[v] > 0).collect();
            q.is_connected_on(&support)
        })
        .collect();
    let mut total: u64 = 0;
    for d in &vecs {
        let bits: usize = q.arrows().iter().map(|a| d[a.source] * d[a.target]).sum();
        if bits >= 40 {
            return Err(Error::EnumerationInfeasible(format!(
                "dimension vector {d:?} needs 2^{bits} arrow tuples"
            )));
        }
        total = total.saturating_add(1u64 << bits);
    }
    if total > TUPLE_BUDGET {
        return Err(Error::EnumerationInfeasible(format!(
            "{total} arrow tuples exceed the budget of {TUPLE_BUDGET}"
        )));
    }
    #[cfg(feature = "parallel")]
    let per: Vec<Vec<Module>> = vecs
        .par_iter()
        .map(|d| indecomposables_with_dims(alg, d))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let per: Vec<Vec<Module>> = vecs
        .iter()
        .map(|d| indecomposables_with_dims(alg, d))
        .collect();
    let mut modules: Vec<Module> = per.into_iter().flatten().collect();
    sort_modules(&mut modules);
    Ok(Enumeration {
        modules,
        method: EnumerationMethod::Generic,
        dim_bound,
        complete: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::direct_sum;

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
    fn submodules_of_simple() {
        let a = a3(2);
        assert_eq!(submodules(&Module::simple(&a, 1), 100).unwrap().len(), 2);
    }

    #[test]
    fn uniserial_projective_has_chain() {
        let a = a3(2);
        let subs = submodules(&Module::projective(&a, 0), 100).unwrap();
        assert_eq!(subs.len(), 4);
        let dims: Vec<usize> = subs.iter().map(|(s, _)| s.total_dim()).collect();
        assert_eq!(dims, vec![0, 1, 2, 3]);
    }

    #[test]
    fn semisimple_square_has_five_submodules() {
        let alg = PathAlgebra::from_labels(&["1"], &[], &[], 2).unwrap();
        let s = Module::simple(&alg, 0);
        let ss = direct_sum(&alg, &[s.clone(), s]).module;
        assert_eq!(submodules(&ss, 100).unwrap().len(), 5);
        // over F_3 the projective line has 4 points
        let alg3 = PathAlgebra::from_labels(&["1"], &[], &[], 3).unwrap();
        let s3 = Module::simple(&alg3, 0);
        let ss3 = direct_sum(&alg3, &[s3.clone(), s3]).module;
        assert_eq!(submodules(&ss3, 100).unwrap().len(), 6);
    }

    #[test]
    fn budget_is_reported() {
        let alg = PathAlgebra::from_labels(&["1"], &[], &[], 101).unwrap();
        let s = Module::simple(&alg, 0);
        let big = direct_sum(&alg, &[s.clone(), s.clone(), s.clone()]).module;
        assert!(matches!(
            submodules(&big, 1000),
            Err(Error::EnumerationInfeasible(_))
        ));
    }

    #[test]
    fn a3_has_six_indecomposables() {
        let a = a3(2);
        let generic = enumerate_generic(&a, 3).unwrap();
        assert_eq!(generic.modules.len(), 6);
        let mut dims: Vec<Vec<usize>> = generic.modules.iter().map(|m| m.dims().to_vec()).collect();
        dims.sort();
        assert_eq!(
            dims,
            vec![
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![1, 0, 0],
                vec![1, 1, 0],
                vec![1, 1, 1]
            ]
        );
        let serial = enumerate_modules(&a, 3).unwrap();
        assert_eq!(serial.method, EnumerationMethod::Serial);
        assert_eq!(serial.modules.len(), 6);
        for m in &serial.modules {
            assert!(generic
                .modules
                .iter()
                .any(|g| is_isomorphic(g, m).is_some()));
        }
    }

    #[test]
    fn cyclic_nakayama_rad_square_zero() {
        let a = PathAlgebra::from_labels(
            &["1", "2"],
            &[("a", "1", "2"), ("b", "2", "1")],
            &["a*b", "b*a"],
            2,
        )
        .unwrap();
        let e = enumerate_modules(&a, 6).unwrap();
        assert_eq!(e.modules.len(), 4);
        let g = enumerate_generic(&a, 4).unwrap();
        assert_eq!(g.modules.len(), 4);
    }

    #[test]
    fn semisimple_gives_simples() {
        let a = PathAlgebra::from_labels(&["1", "2", "3"], &[], &[], 2).unwrap();
        let e = enumerate_modules(&a, 4).unwrap();
        assert_eq!(e.modules.len(), 3);
        assert!(e.modules.iter().all(|m| m.total_dim() == 1));
    }

    #[test]
    fn non_nakayama_generic() {
        // 1 → 2 → 3 ← 4 with a*b = 0: representation-finite of type A4
        let a = PathAlgebra::from_labels(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "4", "3")],
            &["a*b"],
            2,
        )
        .unwrap();
        assert!(!is_nakayama(&a));
        let e = enumerate_modules(&a, 6).unwrap();
        // A4 has 10 indecomposables; the relation removes the ones
        // supported on 1,2,3 through a*b: 1234-type (1,1,1,1) and (1,1,1,0)
        assert_eq!(e.modules.len(), 8);
    }
}
