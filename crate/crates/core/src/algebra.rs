//! Bound quiver algebras `kQ/I` with an explicit path basis.
//!
//! Paths compose left to right: `a*b` is "a, then b", so `a*b` is a path
//! exactly when `target(a) == source(b)`.  A relation `a*b` therefore kills
//! the composite of the representation maps `M_b ∘ M_a`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, PrimeField};

/// Default bound on path lengths searched for the nilpotency index.
pub const DEFAULT_MAX_LEN: usize = 30;

/// Largest number of paths the constructor is willing to enumerate.
pub const PATH_BUDGET: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::InvalidQuiver("empty vertex label".into()));
            }
            if vertices[..i].contains(v) {
                return Err(Error::InvalidQuiver(format!("duplicate vertex `{v}`")));
            }
        }
        for (i, a) in arrows.iter().enumerate() {
            if a.label.is_empty() {
                return Err(Error::InvalidQuiver("empty arrow label".into()));
            }
            if arrows[..i].iter().any(|b| b.label == a.label) || vertices.contains(&a.label) {
                return Err(Error::InvalidQuiver(format!(
                    "duplicate label `{}`",
                    a.label
                )));
            }
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(Error::InvalidQuiver(format!(
                    "arrow `{}` has an undeclared endpoint",
                    a.label
                )));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Convenience constructor from string labels.
    pub fn from_labels(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let find = |l: &str| {
            vs.iter()
                .position(|v| v == l)
                .ok_or_else(|| Error::UnknownVertex(l.to_string()))
        };
        let mut arr = Vec::new();
        for &(label, s, t) in arrows {
            arr.push(Arrow {
                label: label.to_string(),
                source: find(s)?,
                target: find(t)?,
            });
        }
        Quiver::new(vs, arr)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }
    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn arrow_index(&self, label: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.label == label)
            .ok_or_else(|| Error::UnknownArrow(label.to_string()))
    }

    /// Same vertices and arrow indices, every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    label: a.label.clone(),
                    source: a.target,
                    target: a.source,
                })
                .collect(),
        }
    }

    /// Endpoints of a nonempty arrow word, or `None` if it does not compose.
    pub fn word_ends(&self, word: &[usize]) -> Option<(usize, usize)> {
        let first = self.arrows.get(*word.first()?)?;
        let mut at = first.target;
        for &a in &word[1..] {
            let arr = self.arrows.get(a)?;
            if arr.source != at {
                return None;
            }
            at = arr.target;
        }
        Some((first.source, at))
    }

    /// The underlying graph is connected on the given vertex subset.
    pub fn is_connected_on(&self, support: &[usize]) -> bool {
        if support.is_empty() {
            return true;
        }
        let mut seen = vec![support[0]];
        let mut stack = vec![support[0]];
        while let Some(v) = stack.pop() {
            for a in &self.arrows {
                for (x, y) in [(a.source, a.target), (a.target, a.source)] {
                    if x == v && support.contains(&y) && !seen.contains(&y) {
                        seen.push(y);
                        stack.push(y);
                    }
                }
            }
        }
        seen.len() == support.len()
    }
}

/// A linear combination of parallel paths, each of length at least two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub terms: Vec<(i64, Vec<usize>)>,
}

impl Relation {
    pub fn monomial(word: Vec<usize>) -> Self {
        Relation {
            terms: vec![(1, word)],
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn reversed(&self) -> Relation {
        Relation {
            terms: self
                .terms
                .iter()
                .map(|(c, w)| (*c, w.iter().rev().copied().collect()))
                .collect(),
        }
    }
}

/// A path in the quiver; trivial paths have no arrows and `source == target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }
    pub fn len(&self) -> usize {
        self.arrows.len()
    }
    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }
}

type Sparse = Vec<(usize, u32)>;

struct AlgebraData {
    quiver: Quiver,
    field: PrimeField,
    relations: Vec<Relation>,
    max_len: usize,
    nilpotency: usize,
    basis: Vec<Path>,
    /// Normal form of every path of length below the nilpotency index.
    reduce: HashMap<(usize, Vec<usize>), Sparse>,
    mult: Vec<Vec<Sparse>>,
    /// `by_ends[s][t]`: basis indices of paths from `s` to `t`.
    by_ends: Vec<Vec<Vec<usize>>>,
    /// Image of each basis path in the opposite algebra.
    op_image: Vec<Sparse>,
}

/// A finite-dimensional bound quiver algebra.  Cloning is cheap; the
/// opposite algebra shares storage and `opposite().opposite() == self`.
#[derive(Clone)]
pub struct PathAlgebra {
    data: Arc<[AlgebraData; 2]>,
    side: usize,
}

/// Coefficient vector over the basis of a [`PathAlgebra`].
pub type AlgebraElement = Vec<u32>;

impl PartialEq for PathAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) && self.side == other.side
    }
}
impl Eq for PathAlgebra {}

impl fmt::Debug for PathAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PathAlgebra{{vertices: {:?}, dim: {}, op: {}}}",
            self.d().quiver.vertices,
            self.dim(),
            self.side == 1
        )
    }
}

impl PathAlgebra {
    /// Builds `kQ/I` where `I` is generated by `relations`.
    ///
    /// The nilpotency index `N` is the least length such that every path of
    /// length `N` lies in `I + J^{N+1}`; the result is `kQ/(I + J^N)`, which
    /// equals `kQ/I` whenever `I` is admissible.
    pub fn build(
        quiver: Quiver,
        relations: Vec<Relation>,
        field: PrimeField,
        max_len: usize,
    ) -> Result<Self> {
        validate_relations(&quiver, &relations)?;
        let left = build_side(quiver.clone(), relations.clone(), field, max_len)?;
        let right = build_side(
            quiver.opposite(),
            relations.iter().map(Relation::reversed).collect(),
            field,
            max_len,
        )?;
        if left.nilpotency != right.nilpotency || left.basis.len() != right.basis.len() {
            return Err(Error::Internal(
                "opposite algebra has a different shape".into(),
            ));
        }
        let mut data = [left, right];
        for s in 0..2 {
            let (from, to) = if s == 0 {
                (&data[0], &data[1])
            } else {
                (&data[1], &data[0])
            };
            let img: Vec<Sparse> = from
                .basis
                .iter()
                .map(|p| {
                    let rev = Path {
                        source: p.target,
                        target: p.source,
                        arrows: p.arrows.iter().rev().copied().collect(),
                    };
                    to.reduce_path(&rev)
                })
                .collect();
            data[s].op_image = img;
        }
        let alg = PathAlgebra {
            data: Arc::new(data),
            side: 0,
        };
        alg.check_associativity()?;
        alg.opposite().check_associativity()?;
        Ok(alg)
    }

    /// Monomial-relation convenience constructor from labels, e.g. `&["a*b"]`.
    pub fn from_labels(
        vertices: &[&str],
        arrows: &[(&str, &str, &str)],
        monomials: &[&str],
        p: u64,
    ) -> Result<Self> {
        let quiver = Quiver::from_labels(vertices, arrows)?;
        let mut rels = Vec::new();
        for m in monomials {
            let word = m
                .split('*')
                .map(|l| quiver.arrow_index(l.trim()))
                .collect::<Result<Vec<_>>>()?;
            rels.push(Relation::monomial(word));
        }
        PathAlgebra::build(quiver, rels, PrimeField::new(p)?, DEFAULT_MAX_LEN)
    }

    fn d(&self) -> &AlgebraData {
        &self.data[self.side]
    }

    pub fn opposite(&self) -> PathAlgebra {
        PathAlgebra {
            data: self.data.clone(),
            side: 1 - self.side,
        }
    }

    /// True for the algebra produced by an odd number of `opposite` calls.
    pub fn is_opposite_side(&self) -> bool {
        self.side == 1
    }

    pub fn field(&self) -> PrimeField {
        self.d().field
    }
    pub fn quiver(&self) -> &Quiver {
        &self.d().quiver
    }
    pub fn relations(&self) -> &[Relation] {
        &self.d().relations
    }
    pub fn max_len(&self) -> usize {
        self.d().max_len
    }
    pub fn vertex_count(&self) -> usize {
        self.d().quiver.vertex_count()
    }
    pub fn dim(&self) -> usize {
        self.d().basis.len()
    }
    /// Least `N` with `J^N = 0` in the algebra.
    pub fn nilpotency(&self) -> usize {
        self.d().nilpotency
    }
    pub fn basis(&self) -> &[Path] {
        &self.d().basis
    }
    pub fn basis_path(&self, i: usize) -> &Path {
        &self.d().basis[i]
    }
    /// Basis indices of paths from `s` to `t`.
    pub fn paths_between(&self, s: usize, t: usize) -> &[usize] {
        &self.d().by_ends[s][t]
    }

    pub fn vertex_element(&self, v: usize) -> usize {
        self.d().by_ends[v][v]
            .iter()
            .copied()
            .find(|&i| self.d().basis[i].is_trivial())
            .expect("trivial path is a basis element")
    }

    /// Basis index of the arrow `a` (arrows are always basis elements).
    pub fn arrow_element(&self, a: usize) -> usize {
        let arr = self.quiver().arrow(a);
        self.d().by_ends[arr.source][arr.target]
            .iter()
            .copied()
            .find(|&i| self.d().basis[i].arrows == [a])
            .expect("arrow is a basis element")
    }

    pub fn zero(&self) -> AlgebraElement {
        vec![0; self.dim()]
    }

    pub fn unit(&self) -> AlgebraElement {
        let mut x = self.zero();
        for v in 0..self.vertex_count() {
            x[self.vertex_element(v)] = 1;
        }
        x
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        let mut x = self.zero();
        x[i] = 1;
        x
    }

    /// Normal form of an arbitrary path.
    pub fn reduce(&self, path: &Path) -> AlgebraElement {
        let mut x = self.zero();
        for (i, c) in self.d().reduce_path(path) {
            x[i] = c;
        }
        x
    }

    /// Product of two basis paths as a sparse combination.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.d().mult[i][j]
    }

    pub fn multiply(&self, x: &[u32], y: &[u32]) -> AlgebraElement {
        let f = self.field();
        let mut out = vec![0u32; self.dim()];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b);
                for &(k, c) in &self.d().mult[i][j] {
                    out[k] = f.add(out[k], f.mul(ab, c));
                }
            }
        }
        out
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> AlgebraElement {
        let f = self.field();
        x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect()
    }

    /// `e_s · x · e_t`.
    pub fn corner(&self, x: &[u32], s: usize, t: usize) -> AlgebraElement {
        let mut out = self.zero();
        for &i in self.paths_between(s, t) {
            out[i] = x[i];
        }
        out
    }

    /// The same element read in the opposite algebra (paths reversed).
    pub fn to_opposite(&self, x: &[u32]) -> AlgebraElement {
        let f = self.field();
        let mut out = vec![0u32; self.dim()];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(k, c) in &self.d().op_image[i] {
                out[k] = f.add(out[k], f.mul(a, c));
            }
        }
        out
    }

    /// Structure constants as a dense `dim × dim²` table, row `k`, column
    /// `i*dim + j` holding the coefficient of basis `k` in `b_i b_j`.
    pub fn structure_table(&self) -> FpMatrix {
        let n = self.dim();
        let mut t = FpMatrix::zeros(self.field(), n, n * n);
        for i in 0..n {
            for j in 0..n {
                for &(k, c) in &self.d().mult[i][j] {
                    t.set(k, i * n + j, c);
                }
            }
        }
        t
    }

    /// Human label of a basis path, e.g. `e1` or `a*b`.
    pub fn path_label(&self, path: &Path) -> String {
        if path.is_trivial() {
            format!("e{}", self.quiver().vertex_label(path.source))
        } else {
            path.arrows
                .iter()
                .map(|&a| self.quiver().arrow(a).label.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    fn check_associativity(&self) -> Result<()> {
        let d = self.d();
        let n = d.basis.len();
        let ends: Vec<(usize, usize)> = d.basis.iter().map(|p| (p.source, p.target)).collect();
        for i in 0..n {
            for j in 0..n {
                if ends[i].1 != ends[j].0 || d.mult[i][j].is_empty() {
                    continue;
                }
                for k in 0..n {
                    if ends[j].1 != ends[k].0 {
                        continue;
                    }
                    let left = self.multiply(
                        &self.multiply(&self.basis_element(i), &self.basis_element(j)),
                        &self.basis_element(k),
                    );
                    let right = self.multiply(
                        &self.basis_element(i),
                        &self.multiply(&self.basis_element(j), &self.basis_element(k)),
                    );
                    if left != right {
                        return Err(Error::Internal(format!(
                            "multiplication is not associative on basis triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

impl AlgebraData {
    fn reduce_path(&self, path: &Path) -> Sparse {
        if path.len() >= self.nilpotency {
            return Vec::new();
        }
        self.reduce
            .get(&(path.source, path.arrows.clone()))
            .cloned()
            .unwrap_or_default()
    }
}

fn validate_relations(quiver: &Quiver, relations: &[Relation]) -> Result<()> {
    for r in relations {
        let mut ends = None;
        if r.terms.is_empty() {
            return Err(Error::NonAdmissibleRelation("empty relation".into()));
        }
        for (_, w) in &r.terms {
            if w.len() < 2 {
                return Err(Error::NonAdmissibleRelation(format!(
                    "term of length {} (every term needs length at least 2)",
                    w.len()
                )));
            }
            let e = quiver.word_ends(w).ok_or_else(|| {
                Error::NonAdmissibleRelation("term is not a composable path".into())
            })?;
            match ends {
                None => ends = Some(e),
                Some(prev) if prev != e => {
                    return Err(Error::NonAdmissibleRelation(
                        "terms are not parallel paths".into(),
                    ))
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// All paths of length `<= max` (trivial paths first, then by length).
fn enumerate_paths(quiver: &Quiver, max: usize) -> Result<Vec<Path>> {
    let mut out: Vec<Path> = (0..quiver.vertex_count()).map(Path::trivial).collect();
    let mut frontier: Vec<Path> = out.clone();
    for _ in 0..max {
        let mut next = Vec::new();
        for p in &frontier {
            for (ai, a) in quiver.arrows().iter().enumerate() {
                if a.source == p.target {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    next.push(Path {
                        source: p.source,
                        target: a.target,
                        arrows,
                    });
                }
            }
        }
        if out.len() + next.len() > PATH_BUDGET {
            return Err(Error::EnumerationInfeasible(format!(
                "more than {PATH_BUDGET} paths of length <= {max}"
            )));
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// Per `(source, target)` block: the path columns (longest first) and the
/// row space of the ideal truncated above length `max`.
struct Block {
    cols: Vec<usize>,
    rref: FpMatrix,
    pivots: Vec<usize>,
}

fn ideal_blocks(
    quiver: &Quiver,
    relations: &[Relation],
    field: PrimeField,
    paths: &[Path],
    max: usize,
) -> Result<HashMap<(usize, usize), Block>> {
    let index: HashMap<(usize, &[usize]), usize> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| ((p.source, p.arrows.as_slice()), i))
        .collect();
    let mut cols_of: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, p) in paths.iter().enumerate() {
        if p.len() <= max {
            cols_of.entry((p.source, p.target)).or_default().push(i);
        }
    }
    for cols in cols_of.values_mut() {
        cols.sort_by(|&a, &b| {
            paths[b]
                .len()
                .cmp(&paths[a].len())
                .then_with(|| paths[b].arrows.cmp(&paths[a].arrows))
        });
    }
    let mut rows_of: HashMap<(usize, usize), Vec<Vec<(usize, u32)>>> = HashMap::new();
    let mut generated = 0usize;
    for r in relations {
        let (rs, rt) = quiver.word_ends(&r.terms[0].1).expect("validated");
        let min_len = r.terms.iter().map(|(_, w)| w.len()).min().unwrap_or(0);
        if min_len > max {
            continue;
        }
        let budget = max - min_len;
        for u in paths.iter().filter(|u| u.target == rs && u.len() <= budget) {
            for w in paths
                .iter()
                .filter(|w| w.source == rt && u.len() + w.len() <= budget)
            {
                let mut row = Vec::new();
                for (c, t) in &r.terms {
                    if u.len() + t.len() + w.len() > max {
                        continue;
                    }
                    let mut word = u.arrows.clone();
                    word.extend_from_slice(t);
                    word.extend_from_slice(&w.arrows);
                    let id = index[&(u.source, word.as_slice())];
                    row.push((id, field.reduce(*c)));
                }
                if row.iter().any(|&(_, c)| c != 0) {
                    rows_of.entry((u.source, w.target)).or_default().push(row);
                }
                generated += 1;
                if generated > PATH_BUDGET {
                    return Err(Error::EnumerationInfeasible(
                        "too many ideal generators".into(),
                    ));
                }
            }
        }
    }
    let mut blocks = HashMap::new();
    for (key, cols) in cols_of {
        let pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(j, &c)| (c, j)).collect();
        let rows = rows_of.remove(&key).unwrap_or_default();
        let mut m = FpMatrix::zeros(field, rows.len(), cols.len());
        for (i, row) in rows.iter().enumerate() {
            for &(id, c) in row {
                let j = pos[&id];
                m.set(i, j, field.add(m.get(i, j), c));
            }
        }
        let r = m.rref();
        let rank = r.rank;
        blocks.insert(
            key,
            Block {
                cols,
                rref: r.matrix.submatrix(0, rank, 0, m.cols()),
                pivots: r.pivots,
            },
        );
    }
    Ok(blocks)
}

fn build_side(
    quiver: Quiver,
    relations: Vec<Relation>,
    field: PrimeField,
    max_len: usize,
) -> Result<AlgebraData> {
    let n_vertices = quiver.vertex_count();
    // Find the nilpotency index.
    let mut nilpotency = None;
    for l in 1..=max_len {
        let paths = enumerate_paths(&quiver, l)?;
        if !paths.iter().any(|p| p.len() == l) {
            nilpotency = Some(l);
            break;
        }
        let blocks = ideal_blocks(&quiver, &relations, field, &paths, l)?;
        let covered = blocks.values().all(|b| {
            let top = b.cols.iter().filter(|&&c| paths[c].len() == l).count();
            if top == 0 {
                return true;
            }
            // dim(V ∩ span(top)) = rank V - rank(V projected off the top)
            let lower = b.rref.submatrix(0, b.rref.rows(), top, b.cols.len() - top);
            b.rref.rows() - lower.rank() == top
        });
        if covered {
            nilpotency = Some(l);
            break;
        }
    }
    let nilpotency = nilpotency.ok_or(Error::NotFiniteDimensional(max_len))?;

    let paths = enumerate_paths(&quiver, nilpotency.saturating_sub(1))?;
    let paths: Vec<Path> = paths.into_iter().filter(|p| p.len() < nilpotency).collect();
    let blocks = ideal_blocks(&quiver, &relations, field, &paths, nilpotency - 1)?;

    let mut basis_ids: Vec<usize> = Vec::new();
    for b in blocks.values() {
        let piv: Vec<usize> = b.pivots.clone();
        for (j, &c) in b.cols.iter().enumerate() {
            if !piv.contains(&j) {
                basis_ids.push(c);
            }
        }
    }
    basis_ids.sort_by(|&a, &b| {
        let (pa, pb) = (&paths[a], &paths[b]);
        pa.len()
            .cmp(&pb.len())
            .then_with(|| pa.source.cmp(&pb.source))
            .then_with(|| pa.arrows.cmp(&pb.arrows))
    });
    let basis: Vec<Path> = basis_ids.iter().map(|&i| paths[i].clone()).collect();
    let basis_pos: HashMap<usize, usize> =
        basis_ids.iter().enumerate().map(|(k, &i)| (i, k)).collect();

    let mut reduce: HashMap<(usize, Vec<usize>), Sparse> = HashMap::new();
    for b in blocks.values() {
        let piv_set: Vec<usize> = b.pivots.clone();
        for (j, &c) in b.cols.iter().enumerate() {
            let key = (paths[c].source, paths[c].arrows.clone());
            if let Some(row) = piv_set.iter().position(|&pj| pj == j) {
                let mut v = Vec::new();
                for (jj, &cc) in b.cols.iter().enumerate() {
                    if piv_set.contains(&jj) {
                        continue;
                    }
                    let x = b.rref.get(row, jj);
                    if x != 0 {
                        v.push((basis_pos[&cc], field.neg(x)));
                    }
                }
                v.sort_unstable();
                reduce.insert(key, v);
            } else {
                reduce.insert(key, vec![(basis_pos[&c], 1)]);
            }
        }
    }

    let mut by_ends = vec![vec![Vec::new(); n_vertices]; n_vertices];
    for (k, p) in basis.iter().enumerate() {
        by_ends[p.source][p.target].push(k);
    }

    let mut data = AlgebraData {
        quiver,
        field,
        relations,
        max_len,
        nilpotency,
        basis,
        reduce,
        mult: Vec::new(),
        by_ends,
        op_image: Vec::new(),
    };
    let n = data.basis.len();
    let mut mult = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let (pi, pj) = (&data.basis[i], &data.basis[j]);
            if pi.target != pj.source {
                continue;
            }
            let mut arrows = pi.arrows.clone();
            arrows.extend_from_slice(&pj.arrows);
            mult[i][j] = data.reduce_path(&Path {
                source: pi.source,
                target: pj.target,
                arrows,
            });
        }
    }
    data.mult = mult;
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a3() -> PathAlgebra {
        PathAlgebra::from_labels(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3")],
            &[],
            101,
        )
        .unwrap()
    }

    fn fixture_5_7() -> PathAlgebra {
        PathAlgebra::from_labels(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "4", "3")],
            &["a*b"],
            101,
        )
        .unwrap()
    }

    /// Counts paths by brute force over all arrow words, deleting those that
    /// contain a monomial relation as a factor.
    fn oracle_monomial_dim(q: &Quiver, monomials: &[Vec<usize>], max: usize) -> usize {
        let mut count = q.vertex_count();
        let mut words: Vec<Vec<usize>> = (0..q.arrow_count()).map(|a| vec![a]).collect();
        for _ in 0..max {
            let mut next = Vec::new();
            for w in &words {
                let bad = monomials
                    .iter()
                    .any(|m| w.windows(m.len()).any(|win| win == m.as_slice()));
                if !bad {
                    count += 1;
                    for a in 0..q.arrow_count() {
                        let mut w2 = w.clone();
                        w2.push(a);
                        if q.word_ends(&w2).is_some() {
                            next.push(w2);
                        }
                    }
                }
            }
            words = next;
        }
        count
    }

    #[test]
    fn dimensions_of_small_algebras() {
        assert_eq!(a3().dim(), 6);
        let loop_alg = PathAlgebra::from_labels(&["1"], &[("x", "1", "1")], &["x*x"], 101).unwrap();
        assert_eq!(loop_alg.dim(), 2);
        let f = fixture_5_7();
        assert_eq!(f.dim(), 7);
        assert_eq!(
            oracle_monomial_dim(f.quiver(), &[vec![0, 1]], 10),
            7,
            "oracle and hand count agree"
        );
    }

    #[test]
    fn opposite_shapes() {
        let a = a3();
        let op = a.opposite();
        assert_eq!(op.quiver().arrow(0).source, 1);
        assert_eq!(op.quiver().arrow(0).target, 0);
        assert_eq!(op.opposite(), a);
        let f = fixture_5_7();
        assert_eq!(f.opposite().dim(), f.dim());
        assert_eq!(f.opposite().relations()[0].terms[0].1, vec![1, 0]);
    }

    #[test]
    fn relation_kills_product() {
        let f = fixture_5_7();
        let a = f.basis_element(f.arrow_element(0));
        let b = f.basis_element(f.arrow_element(1));
        assert!(f.multiply(&a, &b).iter().all(|&x| x == 0));
        let e1 = f.basis_element(f.vertex_element(0));
        assert_eq!(f.multiply(&e1, &e1), e1);
        assert_eq!(f.multiply(&e1, &a), a);
    }

    #[test]
    fn unit_and_idempotent_decomposition() {
        let f = fixture_5_7();
        let one = f.unit();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let x: Vec<u32> = (0..f.dim()).map(|_| f.field().random(&mut rng)).collect();
            assert_eq!(f.multiply(&one, &x), x);
            assert_eq!(f.multiply(&x, &one), x);
            let mut sum = f.zero();
            for s in 0..f.vertex_count() {
                for t in 0..f.vertex_count() {
                    let es = f.basis_element(f.vertex_element(s));
                    let et = f.basis_element(f.vertex_element(t));
                    sum = f.add(&sum, &f.multiply(&f.multiply(&es, &x), &et));
                }
            }
            assert_eq!(sum, x);
        }
    }

    #[test]
    fn random_associativity_with_commutation_relation() {
        // commutative square: a*b - c*d
        let q = Quiver::from_labels(
            &["1", "2", "3", "4"],
            &[
                ("a", "1", "2"),
                ("b", "2", "4"),
                ("c", "1", "3"),
                ("d", "3", "4"),
            ],
        )
        .unwrap();
        let rel = Relation {
            terms: vec![(1, vec![0, 1]), (-1, vec![2, 3])],
        };
        let alg = PathAlgebra::build(q, vec![rel], PrimeField::new(7).unwrap(), 30).unwrap();
        assert_eq!(alg.dim(), 4 + 4 + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let r = |rng: &mut ChaCha8Rng| -> Vec<u32> {
                (0..alg.dim()).map(|_| alg.field().random(rng)).collect()
            };
            let (x, y, z) = (r(&mut rng), r(&mut rng), r(&mut rng));
            assert_eq!(
                alg.multiply(&alg.multiply(&x, &y), &z),
                alg.multiply(&x, &alg.multiply(&y, &z))
            );
        }
    }

    #[test]
    fn path_filtration() {
        let alg = PathAlgebra::from_labels(
            &["1", "2"],
            &[("a", "1", "2"), ("b", "2", "1")],
            &["a*b*a"],
            5,
        )
        .unwrap();
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let len = alg.basis_path(i).len() + alg.basis_path(j).len();
                for &(k, _) in alg.basis_product(i, j) {
                    assert_eq!(alg.basis_path(k).len(), len);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let q = Quiver::from_labels(&["1"], &[("x", "1", "1")]).unwrap();
        let r = PathAlgebra::build(
            q.clone(),
            vec![Relation::monomial(vec![0])],
            PrimeField::new(2).unwrap(),
            30,
        );
        assert!(matches!(r, Err(Error::NonAdmissibleRelation(_))));
        let r = PathAlgebra::build(q, vec![], PrimeField::new(2).unwrap(), 8);
        assert_eq!(r.unwrap_err(), Error::NotFiniteDimensional(8));
    }

    #[test]
    fn opposite_image_round_trips() {
        let f = fixture_5_7();
        let op = f.opposite();
        for i in 0..f.dim() {
            let x = f.basis_element(i);
            assert_eq!(op.to_opposite(&f.to_opposite(&x)), x);
        }
    }
}
