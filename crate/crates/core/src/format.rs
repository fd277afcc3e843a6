//! Line-oriented text formats for algebras and modules.
//!
//! Algebra files:
//!
//! ```text
//! field 2
//! vertices 1 2 3
//! arrow a: 1 -> 2
//! arrow b: 2 -> 3
//! relation a*b
//! maxlen 30
//! ```
//!
//! Relations are signed sums of `*`-joined arrow words with optional integer
//! coefficients (`a*b - 2*c*d`).  Module files give a dimension vector and
//! one matrix per arrow `v → w` as `d_w` rows of `d_v` residues:
//!
//! ```text
//! dim 1=1 2=1 3=0
//! matrix a
//! 1
//! ```
//!
//! `#` starts a comment.

use crate::algebra::{Arrow, PathAlgebra, Quiver, Relation, DEFAULT_MAX_LEN};
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, PrimeField};
use crate::module::Module;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    pub field: u64,
    pub vertices: Vec<String>,
    /// `(label, source, target)`.
    pub arrows: Vec<(String, String, String)>,
    /// Each relation as `(coefficient, arrow labels)` terms.
    pub relations: Vec<Vec<(i64, Vec<String>)>>,
    pub max_len: Option<usize>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// 1-based column of `needle` inside `line` (searching from `from`).
fn column_of(line: &str, needle: &str, from: usize) -> usize {
    line[from.min(line.len())..]
        .find(needle)
        .map(|i| from + i + 1)
        .unwrap_or(from + 1)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn is_label(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.')
}

/// Splits `a*b - 2*c*d` into signed terms.
fn parse_relation(
    body: &str,
    arrows: &[(String, String, String)],
    line_no: usize,
    offset: usize,
) -> Result<Vec<(i64, Vec<String>)>> {
    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut cur = String::new();
    let mut start = offset;
    let flush = |cur: &mut String, sign: i64, start: usize, terms: &mut Vec<(i64, Vec<String>)>| {
        let t = cur.trim();
        if t.is_empty() {
            return Err(parse_err(line_no, start + 1, "empty relation term"));
        }
        let mut coef = sign;
        let mut word = Vec::new();
        for (k, piece) in t.split('*').map(str::trim).enumerate() {
            let known = arrows.iter().any(|a| a.0 == piece);
            if k == 0 && !known {
                if let Ok(c) = piece.parse::<i64>() {
                    coef *= c;
                    continue;
                }
            }
            if !is_label(piece) {
                return Err(parse_err(
                    line_no,
                    start + 1,
                    format!("bad arrow label `{piece}`"),
                ));
            }
            if !known {
                return Err(parse_err(
                    line_no,
                    start + 1,
                    format!("unknown arrow `{piece}`"),
                ));
            }
            word.push(piece.to_string());
        }
        if word.is_empty() {
            return Err(parse_err(
                line_no,
                start + 1,
                "relation term without arrows",
            ));
        }
        terms.push((coef, word));
        cur.clear();
        Ok(())
    };
    for (i, ch) in body.char_indices() {
        if (ch == '+' || ch == '-') && !cur.trim().is_empty() {
            flush(&mut cur, sign, start, &mut terms)?;
            sign = if ch == '-' { -1 } else { 1 };
            start = offset + i + 1;
        } else if (ch == '+' || ch == '-') && cur.trim().is_empty() {
            if ch == '-' {
                sign = -sign;
            }
            start = offset + i + 1;
        } else {
            cur.push(ch);
        }
    }
    flush(&mut cur, sign, start, &mut terms)?;
    Ok(terms)
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<AlgebraFile> {
        let mut file = AlgebraFile {
            field: 0,
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
            max_len: None,
        };
        let mut relation_lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let n = idx + 1;
            let line = strip_comment(raw);
            let trimmed = line.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = line.len() - trimmed.len();
            let (kw, rest) = trimmed
                .split_once(char::is_whitespace)
                .unwrap_or((trimmed, ""));
            let rest_off = indent + kw.len() + 1;
            match kw {
                "field" => {
                    file.field = rest.trim().parse().map_err(|_| {
                        parse_err(n, rest_off + 1, format!("bad modulus `{}`", rest.trim()))
                    })?;
                }
                "vertices" => {
                    for v in rest.split_whitespace() {
                        if !is_label(v) {
                            return Err(parse_err(
                                n,
                                column_of(line, v, rest_off),
                                format!("bad vertex label `{v}`"),
                            ));
                        }
                        if file.vertices.iter().any(|w| w == v) {
                            return Err(parse_err(
                                n,
                                column_of(line, v, rest_off),
                                format!("duplicate vertex `{v}`"),
                            ));
                        }
                        file.vertices.push(v.to_string());
                    }
                }
                "arrow" => {
                    let (label, ends) = rest.split_once(':').ok_or_else(|| {
                        parse_err(n, rest_off + 1, "expected `arrow <label>: <v> -> <w>`")
                    })?;
                    let label = label.trim();
                    if !is_label(label) {
                        return Err(parse_err(
                            n,
                            rest_off + 1,
                            format!("bad arrow label `{label}`"),
                        ));
                    }
                    let (s, t) = ends.split_once("->").ok_or_else(|| {
                        parse_err(
                            n,
                            column_of(line, ":", rest_off) + 1,
                            "expected `<v> -> <w>`",
                        )
                    })?;
                    let (s, t) = (s.trim(), t.trim());
                    for v in [s, t] {
                        if !file.vertices.iter().any(|w| w == v) {
                            let col = column_of(line, v, column_of(line, ":", rest_off));
                            return Err(parse_err(n, col, format!("unknown vertex `{v}`")));
                        }
                    }
                    if file.arrows.iter().any(|a| a.0 == label) {
                        return Err(parse_err(
                            n,
                            rest_off + 1,
                            format!("duplicate arrow `{label}`"),
                        ));
                    }
                    file.arrows.push((label.into(), s.into(), t.into()));
                }
                "relation" => relation_lines.push((n, rest.to_string(), rest_off)),
                "maxlen" => {
                    file.max_len = Some(rest.trim().parse().map_err(|_| {
                        parse_err(n, rest_off + 1, format!("bad length `{}`", rest.trim()))
                    })?);
                }
                other => {
                    return Err(parse_err(
                        n,
                        indent + 1,
                        format!("unknown keyword `{other}`"),
                    ));
                }
            }
        }
        if file.field == 0 {
            return Err(parse_err(1, 1, "missing `field` line"));
        }
        for (n, body, off) in relation_lines {
            let terms = parse_relation(&body, &file.arrows, n, off)?;
            let ends: Vec<Option<(String, String)>> = terms
                .iter()
                .map(|(_, w)| word_ends(&file.arrows, w))
                .collect();
            if ends.iter().any(Option::is_none) {
                return Err(parse_err(
                    n,
                    off + 1,
                    "relation term is not a composable path",
                ));
            }
            if ends.windows(2).any(|e| e[0] != e[1]) {
                return Err(parse_err(n, off + 1, "relation terms are not parallel"));
            }
            file.relations.push(terms);
        }
        Ok(file)
    }

    pub fn with_field(mut self, p: u64) -> Self {
        self.field = p;
        self
    }

    pub fn to_algebra(&self) -> Result<PathAlgebra> {
        let field = PrimeField::new(self.field)?;
        let find = |l: &str| {
            self.vertices
                .iter()
                .position(|v| v == l)
                .ok_or_else(|| Error::UnknownVertex(l.into()))
        };
        let arrows = self
            .arrows
            .iter()
            .map(|(l, s, t)| {
                Ok(Arrow {
                    label: l.clone(),
                    source: find(s)?,
                    target: find(t)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let quiver = Quiver::new(self.vertices.clone(), arrows)?;
        let relations = self
            .relations
            .iter()
            .map(|r| {
                Ok(Relation {
                    terms: r
                        .iter()
                        .map(|(c, w)| {
                            Ok((
                                *c,
                                w.iter()
                                    .map(|l| quiver.arrow_index(l))
                                    .collect::<Result<Vec<_>>>()?,
                            ))
                        })
                        .collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PathAlgebra::build(
            quiver,
            relations,
            field,
            self.max_len.unwrap_or(DEFAULT_MAX_LEN),
        )
    }

    /// Canonical text: one line per item in a fixed order, relations
    /// written with explicit signs and coefficients other than 1.
    pub fn print(&self) -> String {
        let mut out = format!("field {}\n", self.field);
        out += &format!("vertices {}\n", self.vertices.join(" "));
        for (l, s, t) in &self.arrows {
            out += &format!("arrow {l}: {s} -> {t}\n");
        }
        for r in &self.relations {
            let mut line = String::new();
            for (k, (c, w)) in r.iter().enumerate() {
                let word = w.join("*");
                let mag = c.unsigned_abs();
                let body = if mag == 1 {
                    word
                } else {
                    format!("{mag}*{word}")
                };
                match (k, *c < 0) {
                    (0, false) => line += &body,
                    (0, true) => line += &format!("-{body}"),
                    (_, false) => line += &format!(" + {body}"),
                    (_, true) => line += &format!(" - {body}"),
                }
            }
            out += &format!("relation {line}\n");
        }
        if let Some(m) = self.max_len {
            out += &format!("maxlen {m}\n");
        }
        out
    }
}

fn word_ends(arrows: &[(String, String, String)], word: &[String]) -> Option<(String, String)> {
    let find = |l: &String| arrows.iter().find(|a| &a.0 == l);
    let first = find(word.first()?)?;
    let mut at = &first.2;
    for l in &word[1..] {
        let a = find(l)?;
        if &a.1 != at {
            return None;
        }
        at = &a.2;
    }
    Some((first.1.clone(), at.clone()))
}

pub fn parse_algebra(text: &str) -> Result<PathAlgebra> {
    AlgebraFile::parse(text)?.to_algebra()
}

/// Parses a module over `alg`; missing dimensions are 0 and missing
/// matrices are zero.
pub fn parse_module(alg: &PathAlgebra, text: &str) -> Result<Module> {
    let q = alg.quiver();
    let f = alg.field();
    let mut dims: Option<Vec<usize>> = None;
    let mut mats: Vec<Option<FpMatrix>> = vec![None; q.arrow_count()];
    let mut pending: Option<(usize, usize, Vec<Vec<i64>>)> = None;
    let finish = |pending: &mut Option<(usize, usize, Vec<Vec<i64>>)>,
                  dims: &[usize],
                  mats: &mut Vec<Option<FpMatrix>>|
     -> Result<()> {
        if let Some((ai, n, rows)) = pending.take() {
            let a = q.arrow(ai);
            let (r, c) = (dims[a.target], dims[a.source]);
            if rows.len() != r {
                return Err(parse_err(
                    n,
                    1,
                    format!("matrix `{}` needs {r} rows, got {}", a.label, rows.len()),
                ));
            }
            mats[ai] = Some(if r == 0 {
                FpMatrix::zeros(f, 0, c)
            } else {
                FpMatrix::from_rows(f, &rows)?
            });
        }
        Ok(())
    };
    for (idx, raw) in text.lines().enumerate() {
        let n = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (kw, rest) = trimmed
            .split_once(char::is_whitespace)
            .unwrap_or((trimmed, ""));
        match kw {
            "dim" => {
                let mut d = vec![0; q.vertex_count()];
                for item in rest.split_whitespace() {
                    let col = column_of(line, item, 0);
                    let (v, k) = item
                        .split_once('=')
                        .ok_or_else(|| parse_err(n, col, "expected `<vertex>=<dim>`"))?;
                    let vi = q
                        .vertex_index(v)
                        .map_err(|_| parse_err(n, col, format!("unknown vertex `{v}`")))?;
                    d[vi] = k
                        .parse()
                        .map_err(|_| parse_err(n, col, format!("bad dimension `{k}`")))?;
                }
                dims = Some(d);
            }
            "matrix" => {
                let d = dims
                    .as_ref()
                    .ok_or_else(|| parse_err(n, 1, "`matrix` before `dim`"))?;
                finish(&mut pending, d, &mut mats)?;
                let ai = q.arrow_index(rest.trim()).map_err(|_| {
                    parse_err(
                        n,
                        column_of(line, rest.trim(), 0),
                        format!("unknown arrow `{}`", rest.trim()),
                    )
                })?;
                pending = Some((ai, n, Vec::new()));
            }
            _ => {
                let Some((ai, _, rows)) = pending.as_mut() else {
                    return Err(parse_err(n, 1, format!("unexpected `{kw}`")));
                };
                let d = dims.as_ref().expect("dims before matrix");
                let width = d[q.arrow(*ai).source];
                let row = trimmed
                    .split_whitespace()
                    .map(|x| x.parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| parse_err(n, 1, "matrix rows hold integers"))?;
                if row.len() != width {
                    return Err(parse_err(
                        n,
                        1,
                        format!("row needs {width} entries, got {}", row.len()),
                    ));
                }
                rows.push(row);
            }
        }
    }
    let dims = dims.ok_or_else(|| parse_err(1, 1, "missing `dim` line"))?;
    finish(&mut pending, &dims, &mut mats)?;
    let mats = mats
        .into_iter()
        .enumerate()
        .map(|(ai, m)| {
            m.unwrap_or_else(|| {
                let a = q.arrow(ai);
                FpMatrix::zeros(f, dims[a.target], dims[a.source])
            })
        })
        .collect();
    Module::new(alg, dims, mats)
}

/// Canonical module text; `parse_module(print_module(m)) == m`.
pub fn print_module(m: &Module) -> String {
    let q = m.algebra().quiver();
    let dims: Vec<String> = q
        .vertices()
        .iter()
        .zip(m.dims())
        .map(|(v, d)| format!("{v}={d}"))
        .collect();
    let mut out = format!("dim {}\n", dims.join(" "));
    for (ai, a) in q.arrows().iter().enumerate() {
        let mat = m.arrow_matrix(ai);
        if mat.rows() == 0 || mat.cols() == 0 || mat.is_zero() {
            continue;
        }
        out += &format!("matrix {}\n", a.label);
        for r in 0..mat.rows() {
            let row: Vec<String> = mat.row(r).iter().map(u32::to_string).collect();
            out += &format!("{}\n", row.join(" "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const A3: &str = "field 2\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\n";

    #[test]
    fn a3_parses() {
        let f = AlgebraFile::parse(A3).unwrap();
        assert_eq!(f.vertices.len(), 3);
        assert_eq!(f.arrows.len(), 2);
        assert!(f.relations.is_empty());
        assert_eq!(f.to_algebra().unwrap().dim(), 6);
    }

    #[test]
    fn relation_with_composable_word() {
        let t = "field 3\nvertices 1 2 3 4\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 4 -> 3\nrelation a*b\n";
        let f = AlgebraFile::parse(t).unwrap();
        assert_eq!(
            f.relations,
            vec![vec![(1, vec!["a".to_string(), "b".to_string()])]]
        );
        assert_eq!(f.to_algebra().unwrap().dim(), 4 + 3);
    }

    #[test]
    fn signed_relation_round_trips() {
        let t = "field 5\nvertices 1 2 3 4\narrow a: 1 -> 2\narrow b: 2 -> 4\narrow c: 1 -> 3\narrow d: 3 -> 4\nrelation a*b - 2*c*d\n";
        let f = AlgebraFile::parse(t).unwrap();
        assert_eq!(
            f.relations[0],
            vec![
                (1, vec!["a".into(), "b".into()]),
                (-2, vec!["c".into(), "d".into()])
            ]
        );
        let again = AlgebraFile::parse(&f.print()).unwrap();
        assert_eq!(again, f);
        assert_eq!(again.print(), f.print());
    }

    #[test]
    fn malformed_arrow_reports_location() {
        let t = "field 2\nvertices 1 2\narrow a 1 -> 2\n";
        match AlgebraFile::parse(t) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert!(column >= 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_vertex_and_nonparallel_relation() {
        let t = "field 2\nvertices 1 2\narrow a: 1 -> 9\n";
        assert!(matches!(
            AlgebraFile::parse(t),
            Err(Error::Parse {
                line: 3,
                column: 15,
                ..
            })
        ));
        let t = "field 2\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 1 -> 2\nrelation a*b - c\n";
        assert!(matches!(
            AlgebraFile::parse(t),
            Err(Error::Parse { line: 6, .. })
        ));
        let t = "field 2\nvertices 1 2\narrow a: 1 -> 2\nrelation a*a\n";
        assert!(matches!(
            AlgebraFile::parse(t),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn comments_and_unknown_keyword() {
        let t = "# A3\nfield 2 # binary\nvertices 1 2\narrow a: 1 -> 2\n";
        assert!(AlgebraFile::parse(t).is_ok());
        assert!(matches!(
            AlgebraFile::parse("field 2\nvertex 1\n"),
            Err(Error::Parse {
                line: 2,
                column: 1,
                ..
            })
        ));
    }

    #[test]
    fn module_round_trip() {
        let alg = parse_algebra(A3).unwrap();
        for v in 0..3 {
            for m in [
                Module::projective(&alg, v),
                Module::injective(&alg, v),
                Module::simple(&alg, v),
            ] {
                let text = print_module(&m);
                assert_eq!(parse_module(&alg, &text).unwrap(), m);
            }
        }
    }

    #[test]
    fn module_errors() {
        let alg = parse_algebra(A3).unwrap();
        let bad = "dim 1=1 2=1\nmatrix a\n1 0\n";
        assert!(matches!(
            parse_module(&alg, bad),
            Err(Error::Parse { line: 3, .. })
        ));
        let viol = "dim 1=1 2=1 3=1\nmatrix a\n1\nmatrix b\n1\n";
        assert!(parse_module(&alg, viol).is_ok());
        let lp = parse_algebra("field 3\nvertices 1\narrow x: 1 -> 1\nrelation x*x\n").unwrap();
        let m = "dim 1=1\nmatrix x\n1\n";
        assert!(matches!(
            parse_module(&lp, m),
            Err(Error::RelationViolated(_))
        ));
    }
}
