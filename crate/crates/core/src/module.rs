//! Finite-dimensional modules as representations of a bound quiver.
//!
//! A module assigns a vector space of dimension `d_v` to each vertex and a
//! `d_w × d_v` matrix to each arrow `v → w`, acting on column vectors.  Maps
//! are families of per-vertex matrices commuting with every arrow.

use std::fmt;

use serde::Serialize;

use crate::algebra::PathAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, PrimeField};

#[derive(Clone, PartialEq, Eq)]
pub struct Module {
    alg: PathAlgebra,
    dims: Vec<usize>,
    mats: Vec<FpMatrix>,
}

/// Which of the three standard modules attached to a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StandardKind {
    Projective,
    Injective,
    Simple,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module{:?}", self.dims)?;
        for (a, m) in self.mats.iter().enumerate() {
            if m.rows() > 0 && m.cols() > 0 {
                write!(f, " {}={:?}", self.alg.quiver().arrow(a).label, rows_of(m))?;
            }
        }
        Ok(())
    }
}

fn rows_of(m: &FpMatrix) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

impl Module {
    /// Validates shapes and that every relation acts as zero.
    pub fn new(alg: &PathAlgebra, dims: Vec<usize>, mats: Vec<FpMatrix>) -> Result<Self> {
        let m = Module::new_unchecked(alg, dims, mats)?;
        m.check_relations()?;
        Ok(m)
    }

    /// Validates shapes only.
    pub fn new_unchecked(alg: &PathAlgebra, dims: Vec<usize>, mats: Vec<FpMatrix>) -> Result<Self> {
        let q = alg.quiver();
        if dims.len() != q.vertex_count() || mats.len() != q.arrow_count() {
            return Err(Error::DimensionMismatch(
                "dimension vector or arrow list has the wrong length".into(),
            ));
        }
        for (a, m) in q.arrows().iter().zip(&mats) {
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] {
                return Err(Error::DimensionMismatch(format!(
                    "arrow `{}` needs a {}x{} matrix, got {}x{}",
                    a.label,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != alg.field() {
                return Err(Error::DimensionMismatch(
                    "matrix over the wrong field".into(),
                ));
            }
        }
        Ok(Module {
            alg: alg.clone(),
            dims,
            mats,
        })
    }

    fn check_relations(&self) -> Result<()> {
        let q = self.alg.quiver();
        for r in self.alg.relations() {
            let (s, t) = q.word_ends(&r.terms[0].1).expect("validated relation");
            let mut acc = FpMatrix::zeros(self.field(), self.dims[t], self.dims[s]);
            for (c, w) in &r.terms {
                let m = self.word_matrix(w);
                acc = acc.add(&m.scale(self.field().reduce(*c)));
            }
            if !acc.is_zero() {
                let label = r.terms[0]
                    .1
                    .iter()
                    .map(|&a| q.arrow(a).label.as_str())
                    .collect::<Vec<_>>()
                    .join("*");
                return Err(Error::RelationViolated(label));
            }
        }
        // paths of length N must act as zero as well (matters only for
        // relation sets that are not admissible)
        let n = self.alg.nilpotency();
        let mut frontier: Vec<(usize, FpMatrix)> = (0..q.vertex_count())
            .filter(|&v| self.dims[v] > 0)
            .map(|v| (v, FpMatrix::identity(self.field(), self.dims[v])))
            .collect();
        for depth in 0..n {
            let mut next = Vec::new();
            for (at, m) in &frontier {
                for (ai, a) in q.arrows().iter().enumerate() {
                    if a.source == *at {
                        let prod = self.mats[ai].mul(m);
                        if !prod.is_zero() {
                            next.push((a.target, prod));
                        }
                    }
                }
            }
            if next.is_empty() {
                return Ok(());
            }
            if depth + 1 == n {
                return Err(Error::RelationViolated(format!(
                    "a path of length {n} acts nontrivially"
                )));
            }
            frontier = next;
        }
        Ok(())
    }

    pub fn zero(alg: &PathAlgebra) -> Module {
        let dims = vec![0; alg.vertex_count()];
        let mats = alg
            .quiver()
            .arrows()
            .iter()
            .map(|_| FpMatrix::zeros(alg.field(), 0, 0))
            .collect();
        Module {
            alg: alg.clone(),
            dims,
            mats,
        }
    }

    pub fn simple(alg: &PathAlgebra, v: usize) -> Module {
        let mut dims = vec![0; alg.vertex_count()];
        dims[v] = 1;
        let mats = alg
            .quiver()
            .arrows()
            .iter()
            .map(|a| FpMatrix::zeros(alg.field(), dims[a.target], dims[a.source]))
            .collect();
        Module {
            alg: alg.clone(),
            dims,
            mats,
        }
    }

    /// `P(v)`: basis the normal-form paths starting at `v`; an arrow `α`
    /// sends a path `b` to `b*α`.
    pub fn projective(alg: &PathAlgebra, v: usize) -> Module {
        let n = alg.vertex_count();
        let dims: Vec<usize> = (0..n).map(|w| alg.paths_between(v, w).len()).collect();
        let f = alg.field();
        let mats = (0..alg.quiver().arrow_count())
            .map(|ai| {
                let a = alg.quiver().arrow(ai);
                let src = alg.paths_between(v, a.source);
                let tgt = alg.paths_between(v, a.target);
                let ae = alg.arrow_element(ai);
                let mut m = FpMatrix::zeros(f, tgt.len(), src.len());
                for (j, &b) in src.iter().enumerate() {
                    for &(k, c) in alg.basis_product(b, ae) {
                        let i = tgt
                            .iter()
                            .position(|&t| t == k)
                            .expect("path ends at target");
                        m.set(i, j, c);
                    }
                }
                m
            })
            .collect();
        Module {
            alg: alg.clone(),
            dims,
            mats,
        }
    }

    /// `E(v) = D(P^op(v))`.
    pub fn injective(alg: &PathAlgebra, v: usize) -> Module {
        Module::projective(&alg.opposite(), v).dual()
    }

    pub fn standard(alg: &PathAlgebra, kind: StandardKind, v: usize) -> Result<Module> {
        if v >= alg.vertex_count() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(match kind {
            StandardKind::Projective => Module::projective(alg, v),
            StandardKind::Injective => Module::injective(alg, v),
            StandardKind::Simple => Module::simple(alg, v),
        })
    }

    /// `Λ` as a left module over itself.
    pub fn regular(alg: &PathAlgebra) -> Module {
        let parts: Vec<Module> = (0..alg.vertex_count())
            .map(|v| Module::projective(alg, v))
            .collect();
        direct_sum(alg, &parts).module
    }

    pub fn algebra(&self) -> &PathAlgebra {
        &self.alg
    }
    pub fn field(&self) -> PrimeField {
        self.alg.field()
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim_at(&self, v: usize) -> usize {
        self.dims[v]
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
    pub fn arrow_matrix(&self, a: usize) -> &FpMatrix {
        &self.mats[a]
    }
    pub fn arrow_matrices(&self) -> &[FpMatrix] {
        &self.mats
    }

    /// Matrix of an arrow word (composable, nonempty).
    pub fn word_matrix(&self, word: &[usize]) -> FpMatrix {
        let q = self.alg.quiver();
        let s = q.arrow(word[0]).source;
        let mut m = FpMatrix::identity(self.field(), self.dims[s]);
        for &a in word {
            m = self.mats[a].mul(&m);
        }
        m
    }

    /// Action of basis path `b` (from `s` to `t`): a `d_t × d_s` matrix.
    pub fn basis_action(&self, b: usize) -> FpMatrix {
        let p = self.alg.basis_path(b);
        if p.is_trivial() {
            FpMatrix::identity(self.field(), self.dims[p.source])
        } else {
            self.word_matrix(&p.arrows)
        }
    }

    /// Action of the corner `e_s x e_t` of an algebra element, as a map
    /// from the space at `s` to the space at `t`.
    pub fn element_action(&self, x: &[u32], s: usize, t: usize) -> FpMatrix {
        let f = self.field();
        let mut acc = FpMatrix::zeros(f, self.dims[t], self.dims[s]);
        for &b in self.alg.paths_between(s, t) {
            if x[b] != 0 {
                acc = acc.add(&self.basis_action(b).scale(x[b]));
            }
        }
        acc
    }

    /// Vector-space dual over the opposite algebra.
    pub fn dual(&self) -> Module {
        Module {
            alg: self.alg.opposite(),
            dims: self.dims.clone(),
            mats: self.mats.iter().map(FpMatrix::transpose).collect(),
        }
    }

    /// Offsets of each vertex block in the concatenated total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            off.push(acc);
            acc += d;
        }
        off
    }

    /// Conjugates by invertible per-vertex matrices `T_v`: the new arrow
    /// matrices are `T_w^{-1} M_α T_v`.
    pub fn conjugate(&self, t: &[FpMatrix]) -> Result<Module> {
        let inv: Vec<FpMatrix> = t
            .iter()
            .map(|m| {
                m.inverse()
                    .ok_or_else(|| Error::DimensionMismatch("base change is singular".into()))
            })
            .collect::<Result<_>>()?;
        let q = self.alg.quiver();
        let mats = q
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| inv[a.target].mul(m).mul(&t[a.source]))
            .collect();
        Ok(Module {
            alg: self.alg.clone(),
            dims: self.dims.clone(),
            mats,
        })
    }

    /// Stable byte string of the data, used for deterministic ordering.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for &d in &self.dims {
            out.extend_from_slice(&(d as u32).to_be_bytes());
        }
        for m in &self.mats {
            for &x in m.data() {
                out.extend_from_slice(&x.to_be_bytes());
            }
        }
        out
    }

    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.canonical_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h
    }

    /// Radical: the sum of the images of all arrows, as a subspace family.
    pub fn radical_family(&self) -> Vec<FpMatrix> {
        let q = self.alg.quiver();
        (0..self.dims.len())
            .map(|w| {
                let mut acc = FpMatrix::zeros(self.field(), self.dims[w], 0);
                for (ai, a) in q.arrows().iter().enumerate() {
                    if a.target == w {
                        acc = acc.hstack(&self.mats[ai]);
                    }
                }
                acc.column_space()
            })
            .collect()
    }

    /// Socle: the common kernel of all outgoing arrows at each vertex.
    pub fn socle_family(&self) -> Vec<FpMatrix> {
        let q = self.alg.quiver();
        (0..self.dims.len())
            .map(|v| {
                let mut acc = FpMatrix::zeros(self.field(), 0, self.dims[v]);
                for (ai, a) in q.arrows().iter().enumerate() {
                    if a.source == v {
                        acc = acc.vstack(&self.mats[ai]);
                    }
                }
                acc.kernel_basis()
            })
            .collect()
    }

    /// Dimension vector of `top M = M / rad M`.
    pub fn top_dims(&self) -> Vec<usize> {
        self.radical_family()
            .iter()
            .zip(&self.dims)
            .map(|(r, &d)| d - r.cols())
            .collect()
    }

    pub fn socle_dims(&self) -> Vec<usize> {
        self.socle_family().iter().map(FpMatrix::cols).collect()
    }

    /// Serializable form: dimension vector and one row list per arrow.
    pub fn to_json(&self) -> serde_json::Value {
        let q = self.alg.quiver();
        let dims: serde_json::Map<String, serde_json::Value> = q
            .vertices()
            .iter()
            .zip(&self.dims)
            .map(|(v, d)| (v.clone(), serde_json::json!(d)))
            .collect();
        let mats: serde_json::Map<String, serde_json::Value> = q
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| (a.label.clone(), serde_json::json!(rows_of(m))))
            .collect();
        serde_json::json!({ "dims": dims, "matrices": mats })
    }
}

/// A module homomorphism given by per-vertex matrices.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMap {
    source: Module,
    target: Module,
    comps: Vec<FpMatrix>,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModuleMap[{:?} -> {:?}]",
            self.source.dims, self.target.dims
        )
    }
}

impl ModuleMap {
    pub fn new(source: &Module, target: &Module, comps: Vec<FpMatrix>) -> Result<Self> {
        let m = ModuleMap::new_unchecked(source, target, comps)?;
        let q = source.alg.quiver();
        for (ai, a) in q.arrows().iter().enumerate() {
            let lhs = m.comps[a.target].mul(&source.mats[ai]);
            let rhs = target.mats[ai].mul(&m.comps[a.source]);
            if lhs != rhs {
                return Err(Error::NotAHomomorphism(format!(
                    "does not commute with arrow `{}`",
                    a.label
                )));
            }
        }
        Ok(m)
    }

    pub fn new_unchecked(source: &Module, target: &Module, comps: Vec<FpMatrix>) -> Result<Self> {
        if source.alg != target.alg {
            return Err(Error::AlgebraMismatch);
        }
        if comps.len() != source.dims.len()
            || comps
                .iter()
                .enumerate()
                .any(|(v, c)| c.rows() != target.dims[v] || c.cols() != source.dims[v])
        {
            return Err(Error::DimensionMismatch("map component shapes".into()));
        }
        Ok(ModuleMap {
            source: source.clone(),
            target: target.clone(),
            comps,
        })
    }

    pub fn identity(m: &Module) -> ModuleMap {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            comps: m
                .dims
                .iter()
                .map(|&d| FpMatrix::identity(m.field(), d))
                .collect(),
        }
    }

    pub fn zero(source: &Module, target: &Module) -> ModuleMap {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            comps: source
                .dims
                .iter()
                .zip(&target.dims)
                .map(|(&s, &t)| FpMatrix::zeros(source.field(), t, s))
                .collect(),
        }
    }

    pub fn source(&self) -> &Module {
        &self.source
    }
    pub fn target(&self) -> &Module {
        &self.target
    }
    pub fn comps(&self) -> &[FpMatrix] {
        &self.comps
    }
    pub fn comp(&self, v: usize) -> &FpMatrix {
        &self.comps[v]
    }

    /// `g ∘ self` (first `self`, then `g`).
    pub fn then(&self, g: &ModuleMap) -> ModuleMap {
        assert_eq!(
            self.target.dims, g.source.dims,
            "composition shape mismatch"
        );
        ModuleMap {
            source: self.source.clone(),
            target: g.target.clone(),
            comps: self
                .comps
                .iter()
                .zip(&g.comps)
                .map(|(f, g)| g.mul(f))
                .collect(),
        }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().map(FpMatrix::neg).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(FpMatrix::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.comps.iter().map(FpMatrix::rank).sum()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.total_dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.total_dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dims == self.target.dims && self.comps.iter().all(FpMatrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        let comps = self
            .comps
            .iter()
            .map(FpMatrix::inverse)
            .collect::<Option<Vec<_>>>()?;
        Some(ModuleMap {
            source: self.target.clone(),
            target: self.source.clone(),
            comps,
        })
    }

    /// `D f : D N → D M`.
    pub fn dual(&self) -> ModuleMap {
        ModuleMap {
            source: self.target.dual(),
            target: self.source.dual(),
            comps: self.comps.iter().map(FpMatrix::transpose).collect(),
        }
    }

    /// Reinterprets the map between isomorphic copies of its ends.
    pub fn with_ends(&self, source: &Module, target: &Module) -> ModuleMap {
        assert_eq!(source.dims, self.source.dims);
        assert_eq!(target.dims, self.target.dims);
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            comps: self.comps.clone(),
        }
    }

    pub fn kernel(&self) -> (Module, ModuleMap) {
        let fam: Vec<FpMatrix> = self.comps.iter().map(FpMatrix::kernel_basis).collect();
        submodule(&self.source, &fam).expect("kernel is a submodule")
    }

    pub fn image(&self) -> (Module, ModuleMap) {
        let fam: Vec<FpMatrix> = self.comps.iter().map(FpMatrix::column_space).collect();
        submodule(&self.target, &fam).expect("image is a submodule")
    }

    pub fn cokernel(&self) -> (Module, ModuleMap) {
        let fam: Vec<FpMatrix> = self.comps.iter().map(FpMatrix::column_space).collect();
        quotient(&self.target, &fam).expect("image is a submodule")
    }

    /// Kernel, image and cokernel together, with the epi-mono factorization
    /// `source → image → target`.
    pub fn factorize(&self) -> Factorization {
        let (kernel, kernel_incl) = self.kernel();
        let (image, image_incl) = self.image();
        let (cokernel, cokernel_proj) = self.cokernel();
        // coimage map: solve image_incl ∘ e = self
        let comps = (0..self.comps.len())
            .map(|v| {
                image_incl.comps[v]
                    .solve(&self.comps[v])
                    .expect("map lands in its image")
            })
            .collect();
        let onto_image = ModuleMap {
            source: self.source.clone(),
            target: image.clone(),
            comps,
        };
        Factorization {
            kernel,
            kernel_incl,
            image,
            onto_image,
            image_incl,
            cokernel,
            cokernel_proj,
        }
    }

    /// Solves `self = h ∘ g` for `h` (`g: source → X` given); `None` when
    /// no homomorphism `X → target` exists making the triangle commute.
    pub fn factor_through_source_map(&self, g: &ModuleMap) -> Option<ModuleMap> {
        let basis = hom_basis(&g.target, &self.target).ok()?;
        let zero = ModuleMap::zero(&g.target, &self.target);
        solve_combination(&basis, zero, |h| g.then(h), self)
    }

    /// Solves `self = g ∘ h` for `h: source → X` (`g: X → target` given).
    pub fn factor_through_target_map(&self, g: &ModuleMap) -> Option<ModuleMap> {
        let basis = hom_basis(&self.source, &g.source).ok()?;
        let zero = ModuleMap::zero(&self.source, &g.source);
        solve_combination(&basis, zero, |h| h.then(g), self)
    }
}

/// Finds a combination `h = Σ c_i b_i` of `basis` with `apply(h) = want`,
/// using linearity of `apply`; `zero` is returned for an empty basis when
/// `want` vanishes.
fn solve_combination(
    basis: &[ModuleMap],
    zero: ModuleMap,
    apply: impl Fn(&ModuleMap) -> ModuleMap,
    want: &ModuleMap,
) -> Option<ModuleMap> {
    let flat =
        |m: &ModuleMap| -> Vec<u32> { m.comps.iter().flat_map(|c| c.data().to_vec()).collect() };
    let target = flat(want);
    if basis.is_empty() {
        return target.iter().all(|&x| x == 0).then_some(zero);
    }
    let f = want.source.field();
    let cols: Vec<Vec<u32>> = basis.iter().map(|b| flat(&apply(b))).collect();
    let a = FpMatrix::from_columns(f, target.len(), &cols);
    let x = a.solve_vec(&target).ok()?;
    let mut acc = zero;
    for (b, &c) in basis.iter().zip(&x) {
        if c != 0 {
            acc = acc.add(&b.scale(c));
        }
    }
    Some(acc)
}

/// Output of [`ModuleMap::factorize`].
#[derive(Clone, Debug)]
pub struct Factorization {
    pub kernel: Module,
    pub kernel_incl: ModuleMap,
    pub image: Module,
    pub onto_image: ModuleMap,
    pub image_incl: ModuleMap,
    pub cokernel: Module,
    pub cokernel_proj: ModuleMap,
}

/// `0 → A → B → C → 0`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub incl: ModuleMap,
    pub proj: ModuleMap,
}

impl ShortExactSequence {
    pub fn new(incl: ModuleMap, proj: ModuleMap) -> Result<Self> {
        let s = ShortExactSequence { incl, proj };
        s.certify()?;
        Ok(s)
    }

    pub fn sub(&self) -> &Module {
        self.incl.source()
    }
    pub fn middle(&self) -> &Module {
        self.incl.target()
    }
    pub fn quotient(&self) -> &Module {
        self.proj.target()
    }

    /// Injective, surjective and exact in the middle at every vertex.
    pub fn certify(&self) -> Result<()> {
        if self.incl.target.dims != self.proj.source.dims {
            return Err(Error::CertificateFailed("maps do not compose".into()));
        }
        for v in 0..self.incl.comps.len() {
            let i = &self.incl.comps[v];
            let p = &self.proj.comps[v];
            if i.rank() != i.cols() {
                return Err(Error::CertificateFailed(format!(
                    "not injective at vertex {v}"
                )));
            }
            if p.rank() != p.rows() {
                return Err(Error::CertificateFailed(format!(
                    "not surjective at vertex {v}"
                )));
            }
            if !p.mul(i).is_zero() || i.cols() + p.rows() != i.rows() {
                return Err(Error::CertificateFailed(format!("not exact at vertex {v}")));
            }
        }
        Ok(())
    }

    /// True when the sequence splits (some retraction of `incl` exists).
    pub fn splits(&self) -> bool {
        let id = ModuleMap::identity(self.sub());
        id.factor_through_source_map(&self.incl).is_some()
    }
}

/// Direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

pub fn direct_sum(alg: &PathAlgebra, parts: &[Module]) -> DirectSum {
    let f = alg.field();
    let n = alg.vertex_count();
    let dims: Vec<usize> = (0..n)
        .map(|v| parts.iter().map(|p| p.dims[v]).sum())
        .collect();
    let q = alg.quiver();
    let mats = (0..q.arrow_count())
        .map(|ai| {
            let blocks: Vec<&FpMatrix> = parts.iter().map(|p| &p.mats[ai]).collect();
            FpMatrix::block_diag(f, &blocks)
        })
        .collect();
    let module = Module {
        alg: alg.clone(),
        dims: dims.clone(),
        mats,
    };
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offs = vec![0usize; n];
    for p in parts {
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        for v in 0..n {
            let mut i = FpMatrix::zeros(f, dims[v], p.dims[v]);
            i.paste(offs[v], 0, &FpMatrix::identity(f, p.dims[v]));
            proj.push(i.transpose());
            inj.push(i);
            offs[v] += p.dims[v];
        }
        injections.push(ModuleMap {
            source: p.clone(),
            target: module.clone(),
            comps: inj,
        });
        projections.push(ModuleMap {
            source: module.clone(),
            target: p.clone(),
            comps: proj,
        });
    }
    DirectSum {
        module,
        injections,
        projections,
    }
}

/// Map out of a direct sum given by its components: `[f_1 … f_k]`.
pub fn map_from_sum(sum: &DirectSum, target: &Module, parts: &[ModuleMap]) -> ModuleMap {
    let mut acc = ModuleMap::zero(&sum.module, target);
    for (p, f) in sum.projections.iter().zip(parts) {
        acc = acc.add(&p.then(f));
    }
    acc
}

/// Map into a direct sum given by its components.
pub fn map_to_sum(source: &Module, sum: &DirectSum, parts: &[ModuleMap]) -> ModuleMap {
    let mut acc = ModuleMap::zero(source, &sum.module);
    for (i, f) in sum.injections.iter().zip(parts) {
        acc = acc.add(&f.then(i));
    }
    acc
}

/// The submodule spanned by per-vertex column bases (which must be
/// independent and closed under the arrows), with its inclusion.
pub fn submodule(m: &Module, family: &[FpMatrix]) -> Result<(Module, ModuleMap)> {
    let q = m.alg.quiver();
    let dims: Vec<usize> = family.iter().map(FpMatrix::cols).collect();
    let mut mats = Vec::with_capacity(q.arrow_count());
    for (ai, a) in q.arrows().iter().enumerate() {
        let img = m.mats[ai].mul(&family[a.source]);
        let x = family[a.target]
            .solve(&img)
            .map_err(|_| Error::NotAHomomorphism("subspace family is not arrow-stable".into()))?;
        mats.push(x);
    }
    let sub = Module {
        alg: m.alg.clone(),
        dims,
        mats,
    };
    let incl = ModuleMap {
        source: sub.clone(),
        target: m.clone(),
        comps: family.to_vec(),
    };
    Ok((sub, incl))
}

/// `M / U` for an arrow-stable subspace family `U`, with the projection.
pub fn quotient(m: &Module, family: &[FpMatrix]) -> Result<(Module, ModuleMap)> {
    let q = m.alg.quiver();
    let mut comp = Vec::new();
    let mut proj = Vec::new();
    for (v, b) in family.iter().enumerate() {
        let c = b.complement_basis();
        let t = b.hstack(&c);
        let inv = t.inverse().ok_or_else(|| {
            Error::DimensionMismatch(format!("subspace basis at vertex {v} is not independent"))
        })?;
        proj.push(inv.submatrix(b.cols(), c.cols(), 0, m.dims[v]));
        comp.push(c);
    }
    let dims: Vec<usize> = comp.iter().map(FpMatrix::cols).collect();
    let mut mats = Vec::new();
    for (ai, a) in q.arrows().iter().enumerate() {
        // stability check: image of U_v lands in U_w
        let img = m.mats[ai].mul(&family[a.source]);
        if !proj[a.target].mul(&img).is_zero() {
            return Err(Error::NotAHomomorphism(
                "subspace family is not arrow-stable".into(),
            ));
        }
        mats.push(proj[a.target].mul(&m.mats[ai]).mul(&comp[a.source]));
    }
    let quo = Module {
        alg: m.alg.clone(),
        dims,
        mats,
    };
    let p = ModuleMap {
        source: m.clone(),
        target: quo.clone(),
        comps: proj,
    };
    Ok((quo, p))
}

/// Subspace family of the submodule generated by homogeneous vectors
/// `(vertex, vector)`.
pub fn generated_family(m: &Module, gens: &[(usize, Vec<u32>)]) -> Vec<FpMatrix> {
    let n = m.dims.len();
    let f = m.field();
    let mut cols: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
    for (v, x) in gens {
        for w in 0..n {
            for &b in m.alg.paths_between(*v, w) {
                cols[w].push(m.basis_action(b).mul_vec(x));
            }
        }
    }
    (0..n)
        .map(|w| FpMatrix::from_columns(f, m.dims[w], &cols[w]).column_space())
        .collect()
}

/// Sum of two subspace families.
pub fn family_sum(a: &[FpMatrix], b: &[FpMatrix]) -> Vec<FpMatrix> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.hstack(y).column_space())
        .collect()
}

/// A basis of `Hom(M, N)`.
pub fn hom_basis(m: &Module, n: &Module) -> Result<Vec<ModuleMap>> {
    if m.alg != n.alg {
        return Err(Error::AlgebraMismatch);
    }
    let q = m.alg.quiver();
    let f = m.field();
    let nv = m.dims.len();
    let mut off = vec![0usize; nv + 1];
    for v in 0..nv {
        off[v + 1] = off[v] + n.dims[v] * m.dims[v];
    }
    let unknowns = off[nv];
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let var = |v: usize, i: usize, j: usize| off[v] + i * m.dims[v] + j;
    let mut rows: Vec<Vec<(usize, u32)>> = Vec::new();
    for (ai, a) in q.arrows().iter().enumerate() {
        let (v, w) = (a.source, a.target);
        let ma = &m.mats[ai];
        let na = &n.mats[ai];
        // (X_w M_a - N_a X_v)[i][j] = 0
        for i in 0..n.dims[w] {
            for j in 0..m.dims[v] {
                let mut row = Vec::new();
                for k in 0..m.dims[w] {
                    let c = ma.get(k, j);
                    if c != 0 {
                        row.push((var(w, i, k), c));
                    }
                }
                for k in 0..n.dims[v] {
                    let c = na.get(i, k);
                    if c != 0 {
                        row.push((var(v, k, j), f.neg(c)));
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    let mut sys = FpMatrix::zeros(f, rows.len(), unknowns);
    for (r, row) in rows.iter().enumerate() {
        for &(c, x) in row {
            sys.set(r, c, f.add(sys.get(r, c), x));
        }
    }
    let k = sys.kernel_basis();
    let mut out = Vec::with_capacity(k.cols());
    for col in 0..k.cols() {
        let comps = (0..nv)
            .map(|v| FpMatrix::from_fn(f, n.dims[v], m.dims[v], |i, j| k.get(var(v, i, j), col)))
            .collect();
        out.push(ModuleMap {
            source: m.clone(),
            target: n.clone(),
            comps,
        });
    }
    Ok(out)
}

pub fn hom_dim(m: &Module, n: &Module) -> Result<usize> {
    Ok(hom_basis(m, n)?.len())
}

/// Random linear combination of maps (all with the same ends).
pub fn random_combination<R: rand::Rng + ?Sized>(
    basis: &[ModuleMap],
    rng: &mut R,
) -> Option<ModuleMap> {
    let first = basis.first()?;
    let f = first.source.field();
    let mut acc = ModuleMap::zero(&first.source, &first.target);
    for b in basis {
        acc = acc.add(&b.scale(f.random(rng)));
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn a3(p: u64) -> PathAlgebra {
        PathAlgebra::from_labels(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3")],
            &[],
            p,
        )
        .unwrap()
    }

    fn loop_alg() -> PathAlgebra {
        PathAlgebra::from_labels(&["1"], &[("x", "1", "1")], &["x*x"], 101).unwrap()
    }

    #[test]
    fn standard_modules_on_a3() {
        let a = a3(101);
        let p3 = Module::projective(&a, 2);
        assert_eq!(p3.dims(), &[0, 0, 1]);
        assert_eq!(p3, Module::simple(&a, 2));
        let p1 = Module::projective(&a, 0);
        assert_eq!(p1.dims(), &[1, 1, 1]);
        let total: usize = (0..3).map(|v| Module::projective(&a, v).total_dim()).sum();
        assert_eq!(total, a.dim());
        let e3 = Module::injective(&a, 2);
        assert_eq!(e3.dims(), &[1, 1, 1]);
        assert_eq!(e3.algebra(), &a);
    }

    #[test]
    fn loop_projective_is_injective() {
        let l = loop_alg();
        let p = Module::projective(&l, 0);
        let e = Module::injective(&l, 0);
        assert_eq!(p.total_dim(), 2);
        assert_eq!(
            hom_basis(&p, &e)
                .unwrap()
                .iter()
                .filter(|f| f.is_isomorphism())
                .count()
                > 0
                || crate::decompose::is_isomorphic(&p, &e).is_some(),
            true
        );
    }

    #[test]
    fn relations_are_enforced() {
        let alg = PathAlgebra::from_labels(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3")],
            &["a*b"],
            2,
        )
        .unwrap();
        let f = alg.field();
        let one = FpMatrix::identity(f, 1);
        let bad = Module::new(&alg, vec![1, 1, 1], vec![one.clone(), one.clone()]);
        assert!(matches!(bad, Err(Error::RelationViolated(_))));
        let ok = Module::new(&alg, vec![1, 1, 1], vec![one, FpMatrix::zeros(f, 1, 1)]);
        assert!(ok.is_ok());
    }

    #[test]
    fn hom_counts() {
        let a = a3(101);
        let s1 = Module::simple(&a, 0);
        let s3 = Module::simple(&a, 2);
        assert_eq!(hom_dim(&s1, &s1).unwrap(), 1);
        assert_eq!(hom_dim(&s1, &s3).unwrap(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = Module::regular(&a);
        for _ in 0..10 {
            // random quotient of Λ ⊕ Λ gives a random module
            let m = crate::sample::random_module(&a, 2, &mut rng);
            for v in 0..3 {
                let p = Module::projective(&a, v);
                assert_eq!(hom_dim(&p, &m).unwrap(), m.dim_at(v));
            }
        }
        assert_eq!(hom_dim(&r, &r).unwrap(), a.dim());
    }

    #[test]
    fn factorization_bookkeeping() {
        let a = a3(101);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let m = crate::sample::random_module(&a, 2, &mut rng);
            let n = crate::sample::random_module(&a, 2, &mut rng);
            let hb = hom_basis(&m, &n).unwrap();
            let Some(f) = random_combination(&hb, &mut rng) else {
                continue;
            };
            let fac = f.factorize();
            assert_eq!(
                fac.kernel.total_dim() + fac.image.total_dim(),
                m.total_dim()
            );
            assert_eq!(
                fac.image.total_dim() + fac.cokernel.total_dim(),
                n.total_dim()
            );
            ShortExactSequence::new(fac.kernel_incl.clone(), fac.onto_image.clone()).unwrap();
            ShortExactSequence::new(fac.image_incl.clone(), fac.cokernel_proj.clone()).unwrap();
        }
        let m = Module::projective(&a, 0);
        let id = ModuleMap::identity(&m).factorize();
        assert!(id.kernel.is_zero() && id.cokernel.is_zero());
        let z = ModuleMap::zero(&m, &m).factorize();
        assert_eq!(z.kernel.dims(), m.dims());
        assert_eq!(z.cokernel.dims(), m.dims());
    }

    #[test]
    fn direct_sum_cases() {
        let a = a3(101);
        let m = Module::projective(&a, 1);
        let single = direct_sum(&a, std::slice::from_ref(&m));
        assert_eq!(single.module, m);
        let with_zero = direct_sum(&a, &[Module::zero(&a), m.clone()]);
        assert_eq!(with_zero.module, m);
        let parts = [
            Module::projective(&a, 0),
            Module::injective(&a, 2),
            Module::simple(&a, 1),
        ];
        let s = direct_sum(&a, &parts);
        assert_eq!(
            s.module.total_dim(),
            parts.iter().map(Module::total_dim).sum::<usize>()
        );
        for (i, p) in s.injections.iter().zip(&s.projections) {
            assert!(i.then(p).is_isomorphism());
        }
    }

    #[test]
    fn duality_basics() {
        let a = a3(101);
        let op = a.opposite();
        for v in 0..3 {
            assert_eq!(Module::simple(&a, v).dual(), Module::simple(&op, v));
            assert_eq!(Module::projective(&a, v).dual(), Module::injective(&op, v));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = crate::sample::random_module(&a, 2, &mut rng);
        assert_eq!(m.dual().dual(), m);
        let n = crate::sample::random_module(&a, 2, &mut rng);
        assert_eq!(
            hom_dim(&m, &n).unwrap(),
            hom_dim(&n.dual(), &m.dual()).unwrap()
        );
        let _ = rng::seed();
    }

    #[test]
    fn top_and_socle() {
        let a = a3(101);
        let p1 = Module::projective(&a, 0);
        assert_eq!(p1.top_dims(), vec![1, 0, 0]);
        assert_eq!(p1.socle_dims(), vec![0, 0, 1]);
    }
}
