//! Auslander-type conditions and the subcategories `W, F, P, I, X, Y`.
//!
//! Conditions with an fd-criterion are decided exactly from the minimal
//! injective resolution of `Λ`; the remaining universal statements over
//! `mod Λ` are tested on an enumerated list of indecomposables and carry
//! the bound they were tested up to.

use std::fmt;

use serde_json::{json, Value};

use crate::algebra::PathAlgebra;
use crate::enumerate::{enumerate_modules, submodule_families, Enumeration, SUBMODULE_BUDGET};
use crate::error::{Error, Result};
use crate::homology::{
    ext_dim, ext_vanishes, grade, grade_at_least, homdim, injective_terms, projective_coresolution,
    projective_dimension, torsionfree_degree, Certificate, DimKind, ProjResolution, Verdict,
};
use crate::module::{direct_sum, quotient, submodule, Module, ModuleMap};

fn position_first<T: Sync>(items: &[T], f: impl Fn(&T) -> bool + Sync + Send) -> Option<usize> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().position_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().position(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Algebra,
    Opposite,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Algebra => Side::Opposite,
            Side::Opposite => Side::Algebra,
        }
    }

    pub fn apply(self, alg: &PathAlgebra) -> PathAlgebra {
        match self {
            Side::Algebra => alg.clone(),
            Side::Opposite => alg.opposite(),
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Side::Algebra => "",
            Side::Opposite => "^op",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Algebra => "Λ",
            Side::Opposite => "Λ^op",
        })
    }
}

/// `fd I_i` for the terms of the minimal injective resolution of `Λ`.
#[derive(Clone, Debug)]
pub struct FdProfile {
    pub side: Side,
    /// Injective vertices of each nonzero term.
    pub terms: Vec<Vec<usize>>,
    pub entries: Vec<Verdict>,
    pub depth: usize,
    /// The resolution reached zero within `depth`.
    pub terminated: bool,
}

impl FdProfile {
    /// `Some(None)` for a zero term, `None` past the computed depth.
    pub fn entry(&self, i: usize) -> Option<Option<Verdict>> {
        if i < self.entries.len() {
            Some(Some(self.entries[i]))
        } else if self.terminated {
            Some(None)
        } else {
            None
        }
    }

    /// `fd I_i ≤ b`; zero terms pass.
    pub fn le(&self, i: usize, b: usize) -> Option<bool> {
        match self.entry(i)? {
            Some(v) => v.le(b),
            None => Some(true),
        }
    }

    /// `fd I_i < b`; zero terms pass.
    pub fn lt(&self, i: usize, b: usize) -> Option<bool> {
        match self.entry(i)? {
            Some(v) => v.lt(b),
            None => Some(true),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "side": self.side.to_string(),
            "fd": self.entries.iter().map(Verdict::to_json).collect::<Vec<_>>(),
            "terms": self.terms,
            "depth": self.depth,
            "terminated": self.terminated,
        })
    }
}

/// Profile of the regular module over `alg`, `depth` terms deep.
pub fn injective_profile(alg: &PathAlgebra, depth: usize, cutoff: usize) -> FdProfile {
    let terms = injective_terms(&Module::regular(alg), depth);
    let mut pd: Vec<Option<Verdict>> = vec![None; alg.vertex_count()];
    let entries = terms
        .iter()
        .map(|t| {
            t.iter()
                .map(|&v| {
                    *pd[v].get_or_insert_with(|| {
                        projective_dimension(&Module::injective(alg, v), cutoff)
                    })
                })
                .fold(Verdict::Finite(0), Verdict::max)
        })
        .collect();
    let side = if alg.is_opposite_side() {
        Side::Opposite
    } else {
        Side::Algebra
    };
    FdProfile {
        side,
        terminated: terms.len() < depth,
        terms,
        entries,
        depth,
    }
}

/// Shared state for a run: the algebra, bounds, and cached profiles and
/// enumerations for both sides.
pub struct Context {
    alg: PathAlgebra,
    pub cutoff: usize,
    pub dim_bound: usize,
    profiles: [Option<FdProfile>; 2],
    enums: [Option<Enumeration>; 2],
}

impl Context {
    pub fn new(alg: &PathAlgebra, cutoff: usize, dim_bound: usize) -> Self {
        Context {
            alg: alg.clone(),
            cutoff,
            dim_bound,
            profiles: [None, None],
            enums: [None, None],
        }
    }

    pub fn algebra(&self, side: Side) -> PathAlgebra {
        side.apply(&self.alg)
    }

    /// Profile of the regular module over the given side.
    pub fn profile(&mut self, side: Side, depth: usize) -> &FdProfile {
        let slot = &mut self.profiles[side.index()];
        let stale = match slot {
            Some(p) => !p.terminated && p.depth < depth,
            None => true,
        };
        if stale {
            let alg = side.apply(&self.alg);
            let mut p = injective_profile(&alg, depth, self.cutoff);
            p.side = side;
            *slot = Some(p);
        }
        slot.as_ref().expect("filled")
    }

    pub fn enumeration(&mut self, side: Side) -> Result<&Enumeration> {
        let slot = &mut self.enums[side.index()];
        if slot.is_none() {
            *slot = Some(enumerate_modules(&side.apply(&self.alg), self.dim_bound)?);
        }
        Ok(slot.as_ref().expect("filled"))
    }

    pub fn set_enumeration(&mut self, side: Side, e: Enumeration) {
        self.enums[side.index()] = Some(e);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    /// Holds for every enumerated module up to this total dimension.
    HoldsUpToBound(usize),
    Indeterminate,
}

impl Outcome {
    pub fn holds(self) -> Option<bool> {
        match self {
            Outcome::Holds | Outcome::HoldsUpToBound(_) => Some(true),
            Outcome::Fails => Some(false),
            Outcome::Indeterminate => None,
        }
    }

    fn label(self) -> String {
        match self {
            Outcome::Holds => "holds".into(),
            Outcome::Fails => "fails".into(),
            Outcome::HoldsUpToBound(b) => format!("holds_up_to_bound({b})"),
            Outcome::Indeterminate => "indeterminate".into(),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    FdCriterion,
    Enumeration,
    DualityReduction,
}

impl Method {
    fn label(self) -> &'static str {
        match self {
            Method::FdCriterion => "fd_criterion",
            Method::Enumeration => "enumeration",
            Method::DualityReduction => "duality_reduction",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Witness {
    /// `fd I_index` on `side` breaks the bound.
    Profile {
        side: Side,
        index: usize,
        fd: Verdict,
        bound: String,
    },
    Module {
        module: Module,
        detail: String,
    },
}

impl Witness {
    pub fn to_json(&self) -> Value {
        match self {
            Witness::Profile {
                side,
                index,
                fd,
                bound,
            } => json!({
                "profile": { "side": side.to_string(), "index": index, "fd": fd.to_json(), "bound": bound }
            }),
            Witness::Module { module, detail } => json!({
                "module": module.to_json(),
                "detail": detail,
            }),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Profile {
                side,
                index,
                fd,
                bound,
            } => write!(f, "fd I_{index}({side}) = {fd}, needs {bound}"),
            Witness::Module { module, detail } => {
                write!(f, "module dims {:?}: {detail}", module.dims())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub condition: String,
    pub side: Side,
    pub outcome: Outcome,
    pub method: Method,
    pub witness: Option<Witness>,
    /// Outcome of the same condition on the other side, when cross-checked.
    pub cross_check: Option<Outcome>,
    pub notes: Vec<String>,
}

impl ConditionReport {
    fn new(condition: String, side: Side, method: Method) -> Self {
        ConditionReport {
            condition,
            side,
            outcome: Outcome::Holds,
            method,
            witness: None,
            cross_check: None,
            notes: Vec::new(),
        }
    }

    pub fn holds(&self) -> Option<bool> {
        self.outcome.holds()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "condition": self.condition,
            "side": self.side.to_string(),
            "verdict": self.outcome.label(),
            "method": self.method.label(),
            "witness": self.witness.as_ref().map(Witness::to_json),
            "cross_check": self.cross_check.map(Outcome::label),
            "notes": self.notes,
        })
    }
}

/// Checks `fd I_i ≤ bound(i)` (or `<` when `strict`) for `0 ≤ i < n` on
/// the profile of `profile_side`.
fn fd_criterion(
    ctx: &mut Context,
    mut report: ConditionReport,
    profile_side: Side,
    n: usize,
    bound: impl Fn(usize) -> usize,
    strict: bool,
) -> ConditionReport {
    let prof = ctx.profile(profile_side, n).clone();
    let mut undecided = None;
    for i in 0..n {
        let b = bound(i);
        let ok = if strict { prof.lt(i, b) } else { prof.le(i, b) };
        match ok {
            Some(true) => {}
            Some(false) => {
                report.outcome = Outcome::Fails;
                report.witness = Some(Witness::Profile {
                    side: profile_side,
                    index: i,
                    fd: prof.entries[i],
                    bound: format!("{} {b}", if strict { "<" } else { "≤" }),
                });
                return report;
            }
            None => {
                undecided.get_or_insert(i);
            }
        }
    }
    if let Some(i) = undecided {
        report.outcome = Outcome::Indeterminate;
        report.notes.push(format!(
            "fd I_{i}({profile_side}) not settled at cutoff {}",
            ctx.cutoff
        ));
    }
    report
}

/// `G_n(k)` for the given side: `fd I_i` of the other side is `≤ i + k`
/// for `0 ≤ i < n`.
#[allow(non_snake_case)]
pub fn check_G(ctx: &mut Context, n: usize, k: usize, side: Side) -> ConditionReport {
    let report = ConditionReport::new(
        format!("G_{n}({k}){}", side.suffix()),
        side,
        Method::FdCriterion,
    );
    fd_criterion(ctx, report, side.flip(), n, |i| i + k, false)
}

/// `g_n(k)`: `grade Ext^{i+k}(C) ≥ i` for `C ∈ mod` of the given side and
/// `1 ≤ i ≤ n`.  `k = 0` is decided exactly as `G_n(1)` of the other side;
/// `k = 1` is also enumerated on the other side as a consistency check.
pub fn check_g(ctx: &mut Context, n: usize, k: usize, side: Side) -> Result<ConditionReport> {
    let name = format!("g_{n}({k}){}", side.suffix());
    if k == 0 {
        let mut r = check_G(ctx, n, 1, side.flip());
        r.condition = name;
        r.side = side;
        r.method = Method::DualityReduction;
        return Ok(r);
    }
    let mut r = check_g_enumerated(ctx, n, k, side)?;
    if k == 1 {
        let other = check_g_enumerated(ctx, n, k, side.flip())?;
        r.cross_check = Some(other.outcome);
        if other.holds() != r.holds() {
            r.notes
                .push("opposite side disagrees; g_n(1) is left-right symmetric".into());
        }
    }
    Ok(r)
}

fn enumeration_outcome(e: &Enumeration) -> Outcome {
    if e.is_exhaustive() {
        Outcome::Holds
    } else {
        Outcome::HoldsUpToBound(e.dim_bound)
    }
}

/// `g_n(k)` tested over the enumerated indecomposables.
pub fn check_g_enumerated(
    ctx: &mut Context,
    n: usize,
    k: usize,
    side: Side,
) -> Result<ConditionReport> {
    let mut r = ConditionReport::new(
        format!("g_{n}({k}){}", side.suffix()),
        side,
        Method::Enumeration,
    );
    let e = ctx.enumeration(side)?;
    let failing = |c: &Module| -> Option<usize> {
        let mut res = ProjResolution::with_length(c, n + k + 1);
        (1..=n).find(|&i| !grade_at_least(&res.ext(i + k), i))
    };
    match position_first(&e.modules, |c| failing(c).is_some()) {
        Some(idx) => {
            let c = e.modules[idx].clone();
            let i = failing(&c).expect("found");
            r.outcome = Outcome::Fails;
            r.witness = Some(Witness::Module {
                module: c,
                detail: format!("grade Ext^{}(C) < {i}", i + k),
            });
        }
        None => r.outcome = enumeration_outcome(e),
    }
    Ok(r)
}

/// `Ω^{i+k} C` is `(i+1)`-torsionfree for every enumerated `C` and
/// `0 ≤ i < n`; equivalent to `g_n(k)` for `k ≥ 1`.
pub fn check_g_by_syzygies(
    ctx: &mut Context,
    n: usize,
    k: usize,
    side: Side,
) -> Result<ConditionReport> {
    let mut r = ConditionReport::new(
        format!("Ω^(i+{k}) ⊆ F_(i+1), i < {n}{}", side.suffix()),
        side,
        Method::Enumeration,
    );
    let e = ctx.enumeration(side)?;
    let failing = |c: &Module| -> Option<usize> {
        let mut res = ProjResolution::with_length(c, n + k);
        (0..n).find(|&i| !torsionfree_degree(&res.syzygy(i + k), i + 1))
    };
    match position_first(&e.modules, |c| failing(c).is_some()) {
        Some(idx) => {
            let c = e.modules[idx].clone();
            let i = failing(&c).expect("found");
            r.outcome = Outcome::Fails;
            r.witness = Some(Witness::Module {
                module: c,
                detail: format!("Ω^{}C is not {}-torsionfree", i + k, i + 1),
            });
        }
        None => r.outcome = enumeration_outcome(e),
    }
    Ok(r)
}

/// The `(l, n)`-condition of the given side.  Strong: `fd I_i < l` on that
/// side for `0 ≤ i < n`.  Weak: `grade Ext^l(C) ≥ n` for enumerated `C`
/// over the other side.
pub fn check_ln(
    ctx: &mut Context,
    l: usize,
    n: usize,
    side: Side,
    weak: bool,
) -> Result<ConditionReport> {
    let name = format!(
        "{}({l},{n}){}",
        if weak { "weak " } else { "" },
        side.suffix()
    );
    if !weak {
        let report = ConditionReport::new(name, side, Method::FdCriterion);
        return Ok(fd_criterion(ctx, report, side, n, |_| l, true));
    }
    let mut r = ConditionReport::new(name, side, Method::Enumeration);
    let e = ctx.enumeration(side.flip())?;
    let fails = |c: &Module| {
        let mut res = ProjResolution::with_length(c, l + 1);
        !grade_at_least(&res.ext(l), n)
    };
    match position_first(&e.modules, fails) {
        Some(idx) => {
            r.outcome = Outcome::Fails;
            r.witness = Some(Witness::Module {
                module: e.modules[idx].clone(),
                detail: format!("grade Ext^{l}(C) < {n}"),
            });
        }
        None => r.outcome = enumeration_outcome(e),
    }
    Ok(r)
}

/// `sgrade Ext¹(C) ≥ i` for enumerated `C ∈ F_{i-1}`, `1 ≤ i ≤ n`;
/// equivalent to `G_n(0)`.
pub fn check_sgrade_criterion(ctx: &mut Context, n: usize, side: Side) -> Result<ConditionReport> {
    let mut r = ConditionReport::new(
        format!("sgrade Ext^1(F_(i-1)) ≥ i, i ≤ {n}{}", side.suffix()),
        side,
        Method::Enumeration,
    );
    let e = ctx.enumeration(side)?;
    let failing = |c: &Module| -> Result<Option<usize>> {
        let mut res = ProjResolution::with_length(c, 2);
        let ext1 = res.ext(1);
        for i in 1..=n {
            if !torsionfree_degree(c, i - 1) {
                break;
            }
            for fam in submodule_families(&ext1, SUBMODULE_BUDGET)? {
                let (u, _) = submodule(&ext1, &fam)?;
                if !grade_at_least(&u, i) {
                    return Ok(Some(i));
                }
            }
        }
        Ok(None)
    };
    for c in &e.modules {
        if let Some(i) = failing(c)? {
            r.outcome = Outcome::Fails;
            r.witness = Some(Witness::Module {
                module: c.clone(),
                detail: format!("C ∈ F_{} and sgrade Ext^1(C) < {i}", i - 1),
            });
            return Ok(r);
        }
    }
    r.outcome = enumeration_outcome(e);
    Ok(r)
}

/// An `(l, n)`-condition statement, strong or weak, on a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LnFact {
    pub l: usize,
    pub n: usize,
    pub side: Side,
    pub weak: bool,
}

/// The composition rules: `(k,l) + weak (l,n) ⇒ (k,n)`, with the second
/// statement on either side, and strong or weak `(k,l)` giving a strong or
/// weak conclusion.  A strong statement also serves as a weak one.
pub fn compose_ln(a: LnFact, b: LnFact) -> Option<LnFact> {
    (a.n == b.l).then_some(LnFact {
        l: a.l,
        n: b.n,
        side: a.side,
        weak: a.weak,
    })
}

/// `G_n(k)` as the family `(k+i, i)^op`, `1 ≤ i ≤ n`; `g_n(k)` the weak
/// versions.
pub fn g_as_ln(n: usize, k: usize, side: Side, weak: bool) -> Vec<LnFact> {
    (1..=n)
        .map(|i| LnFact {
            l: k + i,
            n: i,
            side: side.flip(),
            weak,
        })
        .collect()
}

/// `G_n(k) ⇒ G_{n'}(k')` for `n ≥ n'` and `k ≤ k'`.
pub fn g_implies(n: usize, k: usize, n2: usize, k2: usize) -> bool {
    n >= n2 && k <= k2
}

#[derive(Clone, Debug)]
pub struct DominantReport {
    pub profile: FdProfile,
    /// Dominant `l` with `fd I_l`.
    pub dominant: Vec<(usize, Verdict)>,
    /// Dominant numbers with `fd I_l < l`.
    pub violations: Vec<usize>,
    /// Indices whose dominance could not be decided.
    pub undecided: Vec<usize>,
}

impl DominantReport {
    pub fn to_json(&self) -> Value {
        json!({
            "profile": self.profile.to_json(),
            "dominant": self.dominant.iter().map(|(l, v)| json!([l, v.to_json()])).collect::<Vec<_>>(),
            "violations": self.violations,
            "undecided": self.undecided,
        })
    }
}

/// Dominant numbers from a list of fd values: `l` with `fd I_i < fd I_l`
/// for all `i < l`.
pub fn dominant_in(profile: &FdProfile) -> DominantReport {
    let e = &profile.entries;
    let mut dominant = Vec::new();
    let mut violations = Vec::new();
    let mut undecided = Vec::new();
    for l in 0..e.len() {
        let cmp: Vec<Option<bool>> = (0..l).map(|i| e[i].less_than(&e[l])).collect();
        if cmp.iter().any(|c| *c == Some(false)) {
            continue;
        }
        if cmp.iter().any(Option::is_none) {
            undecided.push(l);
            continue;
        }
        dominant.push((l, e[l]));
        match e[l].ge(l) {
            Some(true) => {}
            Some(false) => violations.push(l),
            None => undecided.push(l),
        }
    }
    DominantReport {
        profile: profile.clone(),
        dominant,
        violations,
        undecided,
    }
}

pub fn dominant_numbers(ctx: &mut Context, depth: usize, side: Side) -> DominantReport {
    let p = ctx.profile(side, depth).clone();
    let mut p = p;
    p.entries.truncate(depth);
    p.terms.truncate(depth);
    dominant_in(&p)
}

#[derive(Clone, Debug)]
pub struct FinDimReport {
    /// Largest finite projective dimension among enumerated modules.
    pub lower_bound: usize,
    pub exhaustive: bool,
    pub id_algebra: Verdict,
    pub id_opposite: Verdict,
    /// Least `k` with `g_∞(k)` certified, if any.
    pub k: Option<usize>,
    /// `lower ≤ id Λ ≤ lower + k`, when `id Λ` and `k` are settled.
    pub inequality: Option<bool>,
    pub notes: Vec<String>,
}

impl FinDimReport {
    pub fn to_json(&self) -> Value {
        json!({
            "findim_lower_bound": self.lower_bound,
            "exhaustive": self.exhaustive,
            "id": self.id_algebra.to_json(),
            "id_op": self.id_opposite.to_json(),
            "k": self.k,
            "inequality": self.inequality,
            "notes": self.notes,
        })
    }
}

/// Least `k` such that the profile certifies `fd I_i ≤ i + k` for all `i`.
fn infinite_k(p: &FdProfile) -> Option<usize> {
    if !p.terminated {
        return None;
    }
    let mut k = 0;
    for (i, v) in p.entries.iter().enumerate() {
        k = k.max(v.finite()?.saturating_sub(i));
    }
    Some(k)
}

pub fn findim_estimate(ctx: &mut Context) -> Result<FinDimReport> {
    let cutoff = ctx.cutoff;
    let alg = ctx.algebra(Side::Algebra);
    let e = ctx.enumeration(Side::Algebra)?;
    let exhaustive = e.is_exhaustive();
    let lower = e
        .modules
        .iter()
        .filter_map(|m| projective_dimension(m, cutoff).finite())
        .max()
        .unwrap_or(0);
    let id_algebra = homdim(&Module::regular(&alg), DimKind::Id, cutoff);
    let id_opposite = homdim(&Module::regular(&alg.opposite()), DimKind::Id, cutoff);
    let depth = cutoff + 2;
    let mut notes = Vec::new();
    // g_∞(0) ⇔ fd I_i(Λ) ≤ i + 1; otherwise G_∞(k) ⇒ g_∞(k) via Λ^op
    let own = ctx.profile(Side::Algebra, depth).clone();
    let k = if infinite_k(&own).is_some_and(|k| k <= 1) {
        notes.push("g_∞(0) certified by fd I_i(Λ) ≤ i+1".into());
        Some(0)
    } else {
        let op = ctx.profile(Side::Opposite, depth).clone();
        let k = infinite_k(&op);
        if let Some(k) = k {
            notes.push(format!("G_∞({k}) certified by the Λ^op profile"));
        }
        k
    };
    let inequality = match (id_algebra.finite(), k) {
        (Some(id), Some(k)) => Some(lower <= id && id <= lower + k),
        _ => None,
    };
    Ok(FinDimReport {
        lower_bound: lower,
        exhaustive,
        id_algebra,
        id_opposite,
        k,
        inequality,
        notes,
    })
}

/// The subcategories of `mod Λ` built from grades and dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    /// `Ext^i(C, Λ) = 0` for `1 ≤ i ≤ n`.
    W(usize),
    /// `n`-torsionfree.
    F(usize),
    /// `pd C < n`.
    P(usize),
    /// `id C < n`.
    I(usize),
    /// `W_n ∩ F_m`.
    X(usize, usize),
    /// `add E(I_m, P_n)`.
    Y(usize, usize),
    /// `D X^op_{n,m}`.
    DXop(usize, usize),
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::W(n) => write!(f, "W_{n}"),
            Class::F(n) => write!(f, "F_{n}"),
            Class::P(n) => write!(f, "P_{n}"),
            Class::I(n) => write!(f, "I_{n}"),
            Class::X(n, m) => write!(f, "X_{{{n},{m}}}"),
            Class::Y(n, m) => write!(f, "Y_{{{n},{m}}}"),
            Class::DXop(n, m) => write!(f, "DX^op_{{{n},{m}}}"),
        }
    }
}

pub fn in_w(m: &Module, n: usize) -> bool {
    ext_vanishes(m, 1, n)
}

pub fn in_f(m: &Module, n: usize) -> bool {
    n == 0 || torsionfree_degree(m, n)
}

pub fn in_p(m: &Module, n: usize) -> bool {
    if m.is_zero() {
        return true;
    }
    if n == 0 {
        return false;
    }
    let mut r = ProjResolution::with_length(m, n);
    r.syzygy(n).is_zero()
}

pub fn in_i(m: &Module, n: usize) -> bool {
    in_p(&m.dual(), n)
}

/// `M ∈ Ω^n(mod Λ)`: `M` is a kernel in an exact sequence
/// `0 → M → R_0 → … → R_{n-1}` of projectives.
pub fn in_omega(m: &Module, n: usize) -> bool {
    projective_coresolution(m, n).is_some()
}

pub fn in_x(m: &Module, n: usize, mm: usize) -> bool {
    in_w(m, n) && in_f(m, mm)
}

pub fn in_dxop(m: &Module, n: usize, mm: usize) -> bool {
    in_x(&m.dual(), n, mm)
}

/// Exact membership for every class except `Y`.
pub fn member(m: &Module, class: Class) -> Option<bool> {
    Some(match class {
        Class::W(n) => in_w(m, n),
        Class::F(n) => in_f(m, n),
        Class::P(n) => in_p(m, n),
        Class::I(n) => in_i(m, n),
        Class::X(n, mm) => in_x(m, n, mm),
        Class::DXop(n, mm) => in_dxop(m, n, mm),
        Class::Y(..) => return None,
    })
}

/// A submodule `U ⊆ C` with `U ∈ P_n` and `C/U ∈ I_m`.
#[derive(Clone, Debug)]
pub struct EWitness {
    pub sub: Module,
    pub incl: ModuleMap,
    pub quotient: Module,
    pub proj: ModuleMap,
}

/// `C ∈ E(I_m, P_n)`: searches all submodules.
pub fn in_e(c: &Module, n: usize, m: usize) -> Result<Option<EWitness>> {
    for fam in submodule_families(c, SUBMODULE_BUDGET)? {
        let (u, incl) = submodule(c, &fam)?;
        if !in_p(&u, n) {
            continue;
        }
        let (q, proj) = quotient(c, &fam)?;
        if in_i(&q, m) {
            return Ok(Some(EWitness {
                sub: u,
                incl,
                quotient: q,
                proj,
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub enum AddEResult {
    InE(EWitness),
    /// `C ⊕ Z ∈ E(I_m, P_n)`.
    ViaComplement {
        complement: Module,
        witness: EWitness,
    },
    /// No witness among the candidate complements.
    NotFound {
        searched: usize,
    },
}

impl AddEResult {
    pub fn found(&self) -> bool {
        !matches!(self, AddEResult::NotFound { .. })
    }
}

/// `C ∈ add E(I_m, P_n)`: tries `C`, then `C ⊕ Z` for `Z` a candidate or a
/// sum of two candidates.
pub fn in_add_e(c: &Module, n: usize, m: usize, candidates: &[Module]) -> Result<AddEResult> {
    if let Some(w) = in_e(c, n, m)? {
        return Ok(AddEResult::InE(w));
    }
    let alg = c.algebra();
    let mut searched = 0;
    let mut complements: Vec<Module> = candidates.to_vec();
    for i in 0..candidates.len() {
        for j in i..candidates.len() {
            complements
                .push(direct_sum(alg, &[candidates[i].clone(), candidates[j].clone()]).module);
        }
    }
    for z in complements {
        searched += 1;
        let s = direct_sum(alg, &[c.clone(), z.clone()]).module;
        match in_e(&s, n, m) {
            Ok(Some(w)) => {
                return Ok(AddEResult::ViaComplement {
                    complement: z,
                    witness: w,
                })
            }
            Ok(None) => {}
            Err(Error::EnumerationInfeasible(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(AddEResult::NotFound { searched })
}

/// An enumerated indecomposable outside `E(I_m, P_n)` but inside its
/// additive closure, with the complement that shows it.
pub fn add_e_witness(
    modules: &[Module],
    n: usize,
    m: usize,
) -> Result<Option<(Module, Module, EWitness)>> {
    for c in modules {
        if in_e(c, n, m)?.is_some() {
            continue;
        }
        if let AddEResult::ViaComplement {
            complement,
            witness,
        } = in_add_e(c, n, m, modules)?
        {
            return Ok(Some((c.clone(), complement, witness)));
        }
    }
    Ok(None)
}

/// Smallest `N` with `G_N(1)` enough for the pair `(X_{i,j-1}, Y_{i,j})`.
pub fn cotorsion_hypothesis_degree(i: usize, j: usize) -> usize {
    (i + j).saturating_sub(2).max(j.saturating_sub(1))
}

/// `C ∈ Y_{i,j}` as `Ext¹(X, C) = 0` for the enumerated `X ∈ X_{i,j-1}`;
/// refused unless `G_N(1)` is verified for the needed `N`.
pub fn in_y_orthogonal(ctx: &mut Context, c: &Module, i: usize, j: usize) -> Result<Outcome> {
    if j == 0 {
        return Err(Error::HypothesisFailed("Y_{i,0} needs j ≥ 1".into()));
    }
    let nn = cotorsion_hypothesis_degree(i, j);
    let hyp = check_G(ctx, nn, 1, Side::Algebra);
    if hyp.outcome != Outcome::Holds {
        return Err(Error::HypothesisFailed(format!(
            "{} is {}",
            hyp.condition, hyp.outcome
        )));
    }
    let e = ctx.enumeration(Side::Algebra)?;
    for x in &e.modules {
        if in_x(x, i, j - 1) && ext_dim(x, c, 1)? != 0 {
            return Ok(Outcome::Fails);
        }
    }
    Ok(enumeration_outcome(e))
}

/// Membership in any class; `Y` via the submodule search with the
/// enumerated list as complements.
pub fn membership(ctx: &mut Context, m: &Module, class: Class) -> Result<Outcome> {
    if let Some(b) = member(m, class) {
        return Ok(if b { Outcome::Holds } else { Outcome::Fails });
    }
    let Class::Y(n, mm) = class else {
        unreachable!()
    };
    let e = ctx.enumeration(Side::Algebra)?;
    Ok(match in_add_e(m, n, mm, &e.modules)? {
        AddEResult::NotFound { .. } => Outcome::Indeterminate,
        _ => Outcome::Holds,
    })
}

#[derive(Clone, Debug)]
pub struct LEntry {
    pub i: usize,
    /// Least scanned `l` with `Ω^{l+1} C ∈ F_{i+1}` for all enumerated `C`.
    pub l: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct LSequence {
    pub entries: Vec<LEntry>,
    pub dim_bound: usize,
    pub scan_bound: usize,
    /// Consecutive indices with equal observed values.
    pub equalities: Vec<usize>,
}

impl LSequence {
    pub fn to_json(&self) -> Value {
        json!({
            "empirical": true,
            "dim_bound": self.dim_bound,
            "scan_bound": self.scan_bound,
            "l": self.entries.iter().map(|e| json!({ "i": e.i, "l": e.l })).collect::<Vec<_>>(),
            "equal_consecutive": self.equalities,
        })
    }
}

/// Empirical `l_i = inf{l | Ω^{l+1}(mod Λ) ⊆ F_{i+1}}` over the enumerated
/// modules, scanning `l ≤ scan_bound`.
pub fn l_sequence_estimate(
    ctx: &mut Context,
    max_i: usize,
    scan_bound: usize,
) -> Result<LSequence> {
    let dim_bound = ctx.dim_bound;
    let e = ctx.enumeration(Side::Algebra)?;
    let syz: Vec<Vec<Module>> = e
        .modules
        .iter()
        .map(|c| {
            let mut r = ProjResolution::with_length(c, scan_bound + 1);
            (1..=scan_bound + 1).map(|k| r.syzygy(k)).collect()
        })
        .collect();
    let mut entries = Vec::new();
    for i in 0..=max_i {
        let l = (0..=scan_bound).find(|&l| position_first(&syz, |s| !in_f(&s[l], i + 1)).is_none());
        entries.push(LEntry { i, l });
    }
    let equalities = entries
        .windows(2)
        .filter(|w| w[0].l.is_some() && w[0].l == w[1].l)
        .map(|w| w[0].i)
        .collect();
    Ok(LSequence {
        entries,
        dim_bound,
        scan_bound,
        equalities,
    })
}

/// Grade of a module with the zero module reported as such.
pub fn grade_verdict(m: &Module, cutoff: usize) -> Verdict {
    if m.is_zero() {
        return Verdict::Infinite(Certificate::ZeroModule);
    }
    grade(m, cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3(p: u64) -> PathAlgebra {
        PathAlgebra::from_labels(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3")],
            &[],
            p,
        )
        .unwrap()
    }

    fn zigzag(p: u64) -> PathAlgebra {
        PathAlgebra::from_labels(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "4", "3")],
            &["a*b"],
            p,
        )
        .unwrap()
    }

    fn cross(p: u64) -> PathAlgebra {
        PathAlgebra::from_labels(
            &["1", "2", "3", "4", "5"],
            &[
                ("c", "1", "3"),
                ("a", "2", "3"),
                ("d", "3", "4"),
                ("b", "3", "5"),
            ],
            &["a*b"],
            p,
        )
        .unwrap()
    }

    fn cyclic(p: u64) -> PathAlgebra {
        PathAlgebra::from_labels(
            &["1", "2"],
            &[("x", "1", "2"), ("y", "2", "1")],
            &["x*y", "y*x"],
            p,
        )
        .unwrap()
    }

    fn fds(p: &FdProfile) -> Vec<Option<usize>> {
        p.entries.iter().map(Verdict::finite).collect()
    }

    #[test]
    fn profiles() {
        let alg = cross(2);
        for side in [Side::Algebra, Side::Opposite] {
            let p = injective_profile(&side.apply(&alg), 3, 12);
            assert_eq!(fds(&p), vec![Some(1), Some(1), Some(2)], "{side}");
        }
        let p = injective_profile(&cyclic(2), 3, 12);
        assert_eq!(fds(&p), vec![Some(0)]);
        assert!(p.terminated);
    }

    #[test]
    fn g_conditions_on_572() {
        let mut ctx = Context::new(&cross(2), 12, 4);
        assert_eq!(
            check_G(&mut ctx, 3, 1, Side::Algebra).outcome,
            Outcome::Holds
        );
        let r = check_G(&mut ctx, 1, 0, Side::Algebra);
        assert_eq!(r.outcome, Outcome::Fails);
        assert!(matches!(r.witness, Some(Witness::Profile { index: 0, .. })));
    }

    #[test]
    fn self_injective_is_gorenstein() {
        let mut ctx = Context::new(&cyclic(2), 12, 4);
        for n in 0..5 {
            for side in [Side::Algebra, Side::Opposite] {
                assert_eq!(check_G(&mut ctx, n, 0, side).outcome, Outcome::Holds);
            }
            for k in 1..3 {
                assert_eq!(
                    check_g(&mut ctx, n, k, Side::Algebra).unwrap().outcome,
                    Outcome::Holds
                );
            }
        }
    }

    #[test]
    fn exactly_one_22_on_57() {
        let mut ctx = Context::new(&zigzag(2), 12, 4);
        let a = check_ln(&mut ctx, 2, 2, Side::Algebra, false).unwrap();
        let b = check_ln(&mut ctx, 2, 2, Side::Opposite, false).unwrap();
        assert_ne!(a.holds(), b.holds());
        assert!(a.holds().is_some() && b.holds().is_some());
        let failing = if a.holds() == Some(false) { &a } else { &b };
        assert!(matches!(failing.witness, Some(Witness::Profile { .. })));
    }

    #[test]
    fn ln_empty_range_holds() {
        let mut ctx = Context::new(&zigzag(2), 12, 4);
        for l in 0..3 {
            assert_eq!(
                check_ln(&mut ctx, l, 0, Side::Algebra, false)
                    .unwrap()
                    .outcome,
                Outcome::Holds
            );
        }
    }

    #[test]
    fn g0_by_enumeration_matches_duality_on_a3() {
        let mut ctx = Context::new(&a3(2), 12, 6);
        for n in 0..5 {
            let exact = check_g(&mut ctx, n, 0, Side::Algebra).unwrap();
            let en = check_g_enumerated(&mut ctx, n, 0, Side::Algebra).unwrap();
            assert_eq!(exact.holds(), en.holds(), "n = {n}");
        }
    }

    #[test]
    fn syzygy_route_matches_grade_route() {
        for alg in [a3(2), zigzag(2), cross(2)] {
            let mut ctx = Context::new(&alg, 12, 4);
            for n in 1..4 {
                for k in 1..3 {
                    let a = check_g_enumerated(&mut ctx, n, k, Side::Algebra).unwrap();
                    let b = check_g_by_syzygies(&mut ctx, n, k, Side::Algebra).unwrap();
                    assert_eq!(a.holds(), b.holds(), "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn dominant_numbers_of_572() {
        let mut ctx = Context::new(&cross(2), 12, 4);
        let d = dominant_numbers(&mut ctx, 3, Side::Algebra);
        let ls: Vec<usize> = d.dominant.iter().map(|x| x.0).collect();
        assert_eq!(ls, vec![0, 2]);
        assert!(d.violations.is_empty());
    }

    fn synthetic(values: &[usize]) -> FdProfile {
        FdProfile {
            side: Side::Algebra,
            terms: vec![vec![]; values.len()],
            entries: values.iter().map(|&v| Verdict::Finite(v)).collect(),
            depth: values.len(),
            terminated: false,
        }
    }

    #[test]
    fn dominant_shapes() {
        let d = dominant_in(&synthetic(&[0, 1, 2, 3]));
        assert_eq!(d.dominant.len(), 4);
        let d = dominant_in(&synthetic(&[2, 2, 2]));
        assert_eq!(d.dominant.iter().map(|x| x.0).collect::<Vec<_>>(), vec![0]);
        let d = dominant_in(&synthetic(&[0, 0, 1]));
        assert_eq!(d.violations, vec![2]);
    }

    #[test]
    fn e_not_closed_under_sums_on_a3() {
        let alg = a3(2);
        let s2 = Module::simple(&alg, 1);
        assert!(in_e(&s2, 1, 1).unwrap().is_none());
        let p1 = Module::projective(&alg, 0);
        let sum = direct_sum(&alg, &[s2.clone(), p1]).module;
        let w = in_e(&sum, 1, 1).unwrap().expect("diagonal P(2)");
        assert_eq!(w.sub.dims(), &[0, 1, 1]);
        assert_eq!(w.quotient.dims(), &[1, 1, 0]);
        let list = crate::enumerate::enumerate_modules(&alg, 6)
            .unwrap()
            .modules;
        let (c, _, _) = add_e_witness(&list, 1, 1).unwrap().expect("witness");
        assert!(in_e(&c, 1, 1).unwrap().is_none());
    }

    #[test]
    fn basic_memberships() {
        let alg = a3(2);
        let reg = Module::regular(&alg);
        assert!(in_p(&reg, 1));
        assert!(!in_p(&reg, 0));
        for v in 0..3 {
            let e = Module::injective(&alg, v);
            assert!(in_i(&e, 1));
            assert!(in_e(&e, 0, 1).unwrap().is_some());
        }
        let mut ctx = Context::new(&alg, 12, 6);
        assert_eq!(
            membership(&mut ctx, &reg, Class::W(3)).unwrap(),
            Outcome::Holds
        );
        assert_eq!(
            membership(&mut ctx, &Module::injective(&alg, 2), Class::Y(2, 1)).unwrap(),
            Outcome::Holds
        );
    }

    #[test]
    fn orthogonality_route_refuses_without_hypothesis() {
        let mut ctx = Context::new(&cross(2), 12, 4);
        let c = Module::simple(&cross(2), 0);
        assert!(in_y_orthogonal(&mut ctx, &c, 3, 3).is_err());
    }

    #[test]
    fn findim_fixtures() {
        let mut ctx = Context::new(&a3(2), 12, 6);
        let r = findim_estimate(&mut ctx).unwrap();
        assert_eq!(r.lower_bound, 1);
        assert_eq!(r.id_algebra, Verdict::Finite(1));
        assert_eq!(r.inequality, Some(true));
        let mut ctx = Context::new(&cyclic(2), 12, 6);
        let r = findim_estimate(&mut ctx).unwrap();
        assert_eq!((r.lower_bound, r.id_algebra), (0, Verdict::Finite(0)));
        assert_eq!(r.inequality, Some(true));
    }

    #[test]
    fn l_sequence_self_injective() {
        let mut ctx = Context::new(&cyclic(2), 12, 6);
        let s = l_sequence_estimate(&mut ctx, 3, 3).unwrap();
        assert!(s.entries.iter().all(|e| e.l == Some(0)));
    }

    #[test]
    fn composition_rules() {
        let a = LnFact {
            l: 1,
            n: 2,
            side: Side::Algebra,
            weak: false,
        };
        let b = LnFact {
            l: 2,
            n: 3,
            side: Side::Opposite,
            weak: true,
        };
        assert_eq!(
            compose_ln(a, b),
            Some(LnFact {
                l: 1,
                n: 3,
                side: Side::Algebra,
                weak: false
            })
        );
        assert_eq!(compose_ln(b, a), None);
        assert_eq!(g_as_ln(2, 1, Side::Algebra, false)[1].l, 3);
    }
}
