use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use artinalg::approx::{
    coresolution_approx, cotorsion_approx, g_approx, precover_3_4_2, verify_cotorsion_pair,
    ApproxResult, ApproxSide, PairSpec,
};
use artinalg::conditions::{
    check_G, check_g, check_g_by_syzygies, check_ln, check_sgrade_criterion, dominant_numbers,
    grade_verdict, l_sequence_estimate, ConditionReport, Context, Outcome, Side,
};
use artinalg::format::{parse_module, print_module, AlgebraFile};
use artinalg::homology::{
    homdim, injective_terms, rgrade, sgrade, DimKind, ProjResolution, Verdict,
};
use artinalg::module::StandardKind;
use artinalg::report::{row, RunReport, Status};
use artinalg::selftest::{run_all, run_criterion, SelftestConfig};
use artinalg::{fixtures, rng, Error, Module, PathAlgebra, Result};

#[derive(Parser)]
#[command(
    name = "artinalg",
    version,
    about = "Homological computations for bound quiver algebras over prime fields"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Algebra file.
    #[arg(long, global = true, conflicts_with = "fixture")]
    algebra: Option<PathBuf>,
    /// Shipped fixture: a3, zigzag, cross, dual-numbers, cyclic, semisimple.
    #[arg(long, global = true)]
    fixture: Option<String>,
    /// Largest degree scanned before a dimension is reported as `>= cutoff+1`.
    #[arg(long, global = true, default_value_t = 12)]
    cutoff: usize,
    /// Total dimension bound for module enumeration.
    #[arg(long = "dim-bound", global = true, default_value_t = 6)]
    dim_bound: usize,
    /// Overrides the field of the algebra.
    #[arg(long, global = true)]
    p: Option<u64>,
    #[arg(long, global = true, default_value_t = rng::DEFAULT_SEED)]
    seed: u64,
    /// JSON lines instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Include construction traces.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Subcommand)]
enum Command {
    /// fd of the terms of the minimal injective resolution of both regular modules.
    Profile {
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Decide a condition.
    Check {
        #[arg(long, value_enum)]
        cond: Cond,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
    },
    /// Grade, reduced grade, strong grade, pd and id of a module.
    Grade {
        #[arg(long)]
        module: String,
    },
    /// Minimal projective and injective resolutions.
    Resolve {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 4)]
        len: usize,
    },
    /// Auslander–Bridger transpose.
    Tr {
        #[arg(long)]
        module: String,
    },
    /// Ext^i(M, Λ), or dim Ext^i(M, N) with --with.
    Ext {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long)]
        with: Option<String>,
    },
    /// Approximation sequences; every enumerated indecomposable without --module.
    Approx {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        module: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long, default_value_t = 1)]
        j: usize,
        #[arg(long, value_enum, default_value_t = SideKind::Precover)]
        side: SideKind,
    },
    /// Orthogonality and completeness of a cotorsion pair over the enumerated indecomposables.
    CotorsionVerify {
        #[arg(long, value_enum, default_value_t = Pair::Xy)]
        pair: Pair,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long, default_value_t = 1)]
        j: usize,
    },
    /// Empirical l_i = inf{l | Ω^{l+1}(mod Λ) ⊆ F_{i+1}}.
    ExploreL {
        #[arg(long = "max-i", default_value_t = 3)]
        max_i: usize,
        #[arg(long, default_value_t = 4)]
        scan: usize,
    },
    /// Acceptance suite over the shipped fixtures.
    Selftest {
        #[arg(long)]
        criterion: Option<usize>,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Cond {
    /// G_n(k) by the fd criterion.
    #[value(name = "G")]
    BigG,
    /// g_n(k).
    #[value(name = "g")]
    SmallG,
    /// g_n(k) through torsionfree syzygies.
    Syzygy,
    /// (l, n) in its fd form.
    Ln,
    /// (l, n) through grades of Ext^l.
    WeakLn,
    /// sgrade Ext^1 over F_(i-1).
    Sgrade,
    Dominant,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Algebra,
    Op,
    Both,
}

impl SideArg {
    fn sides(self) -> Vec<Side> {
        match self {
            SideArg::Algebra => vec![Side::Algebra],
            SideArg::Op => vec![Side::Opposite],
            SideArg::Both => vec![Side::Algebra, Side::Opposite],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// 0 → Y → X → C → 0 with Y ∈ P_n, X ∈ W_n.
    Precover,
    /// g_{i+1}(k) sequences.
    G,
    /// Sequences with terms in Ω^i(mod Λ) and I_{i+1}.
    Coresolution,
    /// Approximations for (X_{i,j-1}, Y_{i,j}).
    Cotorsion,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideKind {
    Precover,
    Preenvelope,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pair {
    /// (X_{i,j-1}, Y_{i,j}).
    Xy,
    /// (Y_{i,j}, D X^op_{j,i-1}).
    Ydx,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn load_algebra(g: &Global) -> Result<(PathAlgebra, String)> {
    let (file, name) = match (&g.algebra, &g.fixture) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            (AlgebraFile::parse(&text)?, path.display().to_string())
        }
        (None, Some(name)) => (fixtures::file(name, 2)?, name.clone()),
        (None, None) => return Err(usage("pass --algebra FILE or --fixture NAME")),
    };
    let file = match g.p {
        Some(p) => file.with_field(p),
        None => file,
    };
    Ok((file.to_algebra()?, name))
}

/// `simple:V`, `projective:V`, `injective:V` or a module file.
fn load_module(alg: &PathAlgebra, spec: &str) -> Result<Module> {
    if let Some((kind, v)) = spec.split_once(':') {
        let kind = match kind {
            "simple" | "S" => Some(StandardKind::Simple),
            "projective" | "P" => Some(StandardKind::Projective),
            "injective" | "I" => Some(StandardKind::Injective),
            _ => None,
        };
        if let Some(kind) = kind {
            let v = alg.quiver().vertex_index(v)?;
            return Module::standard(alg, kind, v);
        }
    }
    let text = std::fs::read_to_string(spec).map_err(|e| usage(format!("module `{spec}`: {e}")))?;
    parse_module(alg, &text)
}

fn labels(alg: &PathAlgebra, vs: &[usize]) -> Value {
    json!(vs
        .iter()
        .map(|&v| alg.quiver().vertex_label(v))
        .collect::<Vec<_>>())
}

fn verdict(v: Verdict) -> Value {
    json!(v.to_string())
}

fn config(g: &Global, alg_name: &str, alg: &PathAlgebra, extra: Value) -> Value {
    let mut c = json!({
        "algebra": alg_name,
        "p": alg.field().modulus(),
        "cutoff": g.cutoff,
        "dim_bound": g.dim_bound,
        "seed": g.seed,
    });
    if let (Value::Object(c), Value::Object(e)) = (&mut c, extra) {
        c.extend(e);
    }
    c
}

fn condition_row(r: &ConditionReport) -> Value {
    row([
        ("condition", json!(r.condition)),
        ("verdict", json!(r.outcome.to_string())),
        ("method", r.to_json()["method"].clone()),
        ("witness", json!(r.witness.as_ref().map(|w| w.to_string()))),
        ("cross_check", json!(r.cross_check.map(|o| o.to_string()))),
        ("notes", json!(r.notes.join("; "))),
    ])
}

fn note_outcome(report: &mut RunReport, o: Outcome) {
    if o == Outcome::Indeterminate {
        report.mark(Status::Indeterminate);
    }
}

fn approx_rows(
    report: &mut RunReport,
    c: &Module,
    r: Result<ApproxResult>,
    trace: bool,
) -> Result<()> {
    let dims = json!(c.dims());
    match r {
        Ok(out) => {
            let mems: Vec<String> = out
                .memberships
                .iter()
                .map(|m| format!("{} ∈ {}: {}", m.term, m.class, m.holds))
                .collect();
            for (label, s) in &out.sequences {
                let mut r = row([
                    ("module", dims.clone()),
                    ("sequence", json!(label)),
                    ("sub", json!(s.sub().dims())),
                    ("middle", json!(s.middle().dims())),
                    ("quotient", json!(s.quotient().dims())),
                    ("exact", json!(s.certify().is_ok())),
                    ("certificates", json!(mems.join("; "))),
                ]);
                if trace {
                    r["trace"] = json!(out.trace);
                }
                report.push(r);
            }
            Ok(())
        }
        Err(Error::HypothesisFailed(why)) => {
            report.push(row([
                ("module", dims),
                ("sequence", json!("refused")),
                ("certificates", json!(why)),
            ]));
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn run(cli: Cli) -> Result<RunReport> {
    let g = cli.global.clone();
    rng::set_seed(g.seed);
    if let Command::Selftest { criterion, cases } = cli.command {
        let cfg = SelftestConfig {
            p: g.p.unwrap_or(2),
            seed: g.seed,
            cutoff: g.cutoff,
            dim_bound: g.dim_bound,
            cases,
        };
        let outcomes = match criterion {
            Some(id) if (1..=10).contains(&id) => vec![run_criterion(id, &cfg)],
            Some(id) => return Err(usage(format!("criteria are numbered 1 to 10, got {id}"))),
            None => run_all(&cfg),
        };
        let mut report = RunReport::new("selftest", cfg.to_json(), &["criterion", "title", "pass"]);
        for o in outcomes {
            if !o.pass {
                report.mark(Status::Failed);
            }
            report.push(o.to_json());
        }
        return Ok(report);
    }
    let (alg, name) = load_algebra(&g)?;
    let mut ctx = Context::new(&alg, g.cutoff, g.dim_bound);
    let report = match cli.command {
        Command::Selftest { .. } => unreachable!(),
        Command::Profile { depth } => {
            let mut report = RunReport::new(
                "profile",
                config(&g, &name, &alg, json!({ "depth": depth })),
                &["side", "i", "fd", "I_i"],
            );
            for side in [Side::Algebra, Side::Opposite] {
                let a = side.apply(&alg);
                let p = ctx.profile(side, depth).clone();
                for (i, (v, t)) in p.entries.iter().zip(&p.terms).enumerate().take(depth) {
                    if !v.is_settled() {
                        report.mark(Status::Indeterminate);
                    }
                    report.push(row([
                        ("side", json!(side.to_string())),
                        ("i", json!(i)),
                        ("fd", verdict(*v)),
                        ("I_i", labels(&a, t)),
                    ]));
                }
            }
            report
        }
        Command::Check {
            cond,
            n,
            k,
            l,
            side,
        } => {
            let mut report = RunReport::new(
                "check",
                config(&g, &name, &alg, json!({ "n": n, "k": k, "l": l })),
                &[
                    "condition",
                    "verdict",
                    "method",
                    "witness",
                    "cross_check",
                    "notes",
                ],
            );
            for s in side.sides() {
                if let Cond::Dominant = cond {
                    let d = dominant_numbers(&mut ctx, n.max(1), s);
                    for (l, v) in &d.dominant {
                        report.push(row([
                            ("condition", json!(format!("dominant{}", s.suffix()))),
                            (
                                "verdict",
                                json!(if d.violations.contains(l) {
                                    "fd I_l < l"
                                } else {
                                    "fd I_l >= l"
                                }),
                            ),
                            ("method", json!("fd_criterion")),
                            ("witness", json!(format!("l = {l}, fd I_l = {v}"))),
                        ]));
                    }
                    if !d.undecided.is_empty() {
                        report.mark(Status::Indeterminate);
                    }
                    continue;
                }
                let r = match cond {
                    Cond::BigG => check_G(&mut ctx, n, k, s),
                    Cond::SmallG => check_g(&mut ctx, n, k, s)?,
                    Cond::Syzygy => check_g_by_syzygies(&mut ctx, n, k, s)?,
                    Cond::Ln => check_ln(&mut ctx, l, n, s, false)?,
                    Cond::WeakLn => check_ln(&mut ctx, l, n, s, true)?,
                    Cond::Sgrade => check_sgrade_criterion(&mut ctx, n, s)?,
                    Cond::Dominant => unreachable!(),
                };
                note_outcome(&mut report, r.outcome);
                report.push(condition_row(&r));
            }
            report
        }
        Command::Grade { module } => {
            let m = load_module(&alg, &module)?;
            let mut report = RunReport::new(
                "grade",
                config(&g, &name, &alg, json!({ "module": module })),
                &["dims", "grade", "rgrade", "sgrade", "pd", "id"],
            );
            let vs = [
                grade_verdict(&m, g.cutoff),
                rgrade(&m, g.cutoff),
                sgrade(&m, g.cutoff)?,
                homdim(&m, DimKind::Pd, g.cutoff),
                homdim(&m, DimKind::Id, g.cutoff),
            ];
            if vs.iter().any(|v| !v.is_settled()) {
                report.mark(Status::Indeterminate);
            }
            report.push(row([
                ("dims", json!(m.dims())),
                ("grade", verdict(vs[0])),
                ("rgrade", verdict(vs[1])),
                ("sgrade", verdict(vs[2])),
                ("pd", verdict(vs[3])),
                ("id", verdict(vs[4])),
            ]));
            report
        }
        Command::Resolve { module, len } => {
            let m = load_module(&alg, &module)?;
            let mut report = RunReport::new(
                "resolve",
                config(&g, &name, &alg, json!({ "module": module, "len": len })),
                &["kind", "k", "term", "syzygy"],
            );
            let mut r = ProjResolution::with_length(&m, len);
            r.certify()?;
            for k in 0..=len {
                let t = r.term(k);
                if t.is_empty() {
                    break;
                }
                report.push(row([
                    ("kind", json!("P")),
                    ("k", json!(k)),
                    ("term", labels(&alg, &t)),
                    ("syzygy", json!(r.syzygy(k + 1).dims())),
                ]));
            }
            for (k, t) in injective_terms(&m, len).iter().enumerate() {
                report.push(row([
                    ("kind", json!("I")),
                    ("k", json!(k)),
                    ("term", labels(&alg, t)),
                ]));
            }
            report
        }
        Command::Tr { module } => {
            let m = load_module(&alg, &module)?;
            let tr = artinalg::homology::transpose(&m);
            let mut report = RunReport::new(
                "tr",
                config(&g, &name, &alg, json!({ "module": module })),
                &["dims", "module"],
            );
            report.push(row([
                ("dims", json!(tr.dims())),
                ("module", json!(print_module(&tr))),
            ]));
            report
        }
        Command::Ext {
            module,
            degree,
            with,
        } => {
            let m = load_module(&alg, &module)?;
            let mut report = RunReport::new(
                "ext",
                config(&g, &name, &alg, json!({ "module": module, "with": with })),
                &["i", "dim", "dims"],
            );
            match with {
                Some(spec) => {
                    let n = load_module(&alg, &spec)?;
                    for i in 0..=degree {
                        report.push(row([
                            ("i", json!(i)),
                            ("dim", json!(artinalg::homology::ext_dim(&m, &n, i)?)),
                        ]));
                    }
                }
                None => {
                    let mut r = ProjResolution::with_length(&m, degree + 1);
                    for i in 0..=degree {
                        let e = r.ext(i);
                        report.push(row([
                            ("i", json!(i)),
                            ("dim", json!(e.total_dim())),
                            ("dims", json!(e.dims())),
                        ]));
                    }
                }
            }
            report
        }
        Command::Approx {
            kind,
            module,
            n,
            k,
            i,
            j,
            side,
        } => {
            let side = match side {
                SideKind::Precover => ApproxSide::Precover,
                SideKind::Preenvelope => ApproxSide::Preenvelope,
            };
            let modules = match &module {
                Some(spec) => vec![load_module(&alg, spec)?],
                None => ctx.enumeration(Side::Algebra)?.modules.clone(),
            };
            let mut report = RunReport::new(
                "approx",
                config(
                    &g,
                    &name,
                    &alg,
                    json!({ "module": module, "n": n, "k": k, "i": i, "j": j, "side": side.to_string() }),
                ),
                &[
                    "module",
                    "sequence",
                    "sub",
                    "middle",
                    "quotient",
                    "exact",
                    "certificates",
                ],
            );
            for c in &modules {
                let r = match kind {
                    Kind::Precover => precover_3_4_2(c, n),
                    Kind::G => g_approx(c, k, i, side),
                    Kind::Coresolution => coresolution_approx(&mut ctx, c, i),
                    Kind::Cotorsion => cotorsion_approx(&mut ctx, c, i, j, side),
                };
                approx_rows(&mut report, c, r, g.trace)?;
            }
            report
        }
        Command::CotorsionVerify { pair, i, j } => {
            let spec = match pair {
                Pair::Xy => PairSpec::XY { i, j },
                Pair::Ydx => PairSpec::YDX { i, j },
            };
            let e = ctx.enumeration(Side::Algebra)?.clone();
            let r = verify_cotorsion_pair(spec, &e.modules)?;
            let mut report = RunReport::new(
                "cotorsion-verify",
                config(
                    &g,
                    &name,
                    &alg,
                    json!({ "pair": spec.to_string(), "exhaustive": e.is_exhaustive() }),
                ),
                &["pair", "modules", "left", "right", "violations", "passes"],
            );
            let mut v = r.to_json();
            v["violations"] = json!(r.violations.len());
            v["violation_list"] = r.to_json()["violations"].clone();
            report.push(v);
            if !e.is_exhaustive() {
                report.mark(Status::Indeterminate);
            }
            report
        }
        Command::ExploreL { max_i, scan } => {
            let s = l_sequence_estimate(&mut ctx, max_i, scan)?;
            let mut report = RunReport::new(
                "explore-l",
                config(
                    &g,
                    &name,
                    &alg,
                    json!({ "max_i": max_i, "scan": scan, "empirical": true }),
                ),
                &["i", "l", "equal_to_next"],
            );
            for e in &s.entries {
                report.push(row([
                    ("i", json!(e.i)),
                    (
                        "l",
                        json!(e.l.map_or(format!(">{scan}"), |l| l.to_string())),
                    ),
                    ("equal_to_next", json!(s.equalities.contains(&e.i))),
                ]));
            }
            report
        }
    };
    Ok(report)
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::EnumerationInfeasible(_) => 3,
        Error::CertificateFailed(_) | Error::Internal(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json_out = cli.global.json;
    match run(cli) {
        Ok(report) => {
            if json_out {
                print!("{}", report.render_json());
            } else {
                print!("{}", report.render_table());
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            if json_out {
                println!(
                    "{}",
                    json!({ "error": e.to_string(), "exit": exit_for(&e) })
                );
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
