//! Shipped example algebras.  Each text carries `field 2`; `load` swaps in
//! any other prime.

use crate::algebra::PathAlgebra;
use crate::error::{Error, Result};
use crate::format::AlgebraFile;

pub const A3: &str = "\
# linear A3
field 2
vertices 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
";

/// Zigzag `1 → 2 → 3 ← 4` with the length-two path through 2 killed.
pub const ZIGZAG: &str = "\
field 2
vertices 1 2 3 4
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 4 -> 3
relation a*b
";

/// Two arrows into 3, two out of 3, one composite killed.
pub const CROSS: &str = "\
field 2
vertices 1 2 3 4 5
arrow c: 1 -> 3
arrow a: 2 -> 3
arrow d: 3 -> 4
arrow b: 3 -> 5
relation a*b
";

/// Dual numbers k[x]/(x^2).
pub const DUAL_NUMBERS: &str = "\
field 2
vertices 1
arrow x: 1 -> 1
relation x*x
";

/// Cyclic Nakayama algebra on two vertices with radical square zero.
pub const CYCLIC: &str = "\
field 2
vertices 1 2
arrow x: 1 -> 2
arrow y: 2 -> 1
relation x*y
relation y*x
";

pub const SEMISIMPLE: &str = "\
field 2
vertices 1 2 3
";

pub const NAMES: [&str; 6] = [
    "a3",
    "zigzag",
    "cross",
    "dual-numbers",
    "cyclic",
    "semisimple",
];

pub fn text(name: &str) -> Option<&'static str> {
    Some(match name {
        "a3" => A3,
        "zigzag" => ZIGZAG,
        "cross" => CROSS,
        "dual-numbers" => DUAL_NUMBERS,
        "cyclic" => CYCLIC,
        "semisimple" => SEMISIMPLE,
        _ => return None,
    })
}

pub fn file(name: &str, p: u64) -> Result<AlgebraFile> {
    let t = text(name).ok_or_else(|| Error::Usage(format!("unknown fixture `{name}`")))?;
    Ok(AlgebraFile::parse(t)?.with_field(p))
}

pub fn load(name: &str, p: u64) -> Result<PathAlgebra> {
    file(name, p)?.to_algebra()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_build() {
        let dims = [6, 7, 5 + 4 + 3, 2, 4, 3];
        for (name, d) in NAMES.iter().zip(dims) {
            for p in [2, 3, 5] {
                let alg = load(name, p).unwrap();
                assert_eq!(alg.dim(), d, "{name}");
                assert_eq!(alg.field().modulus() as u64, p);
            }
        }
        assert!(load("nope", 2).is_err());
        assert!(load("a3", 4).is_err());
    }

    #[test]
    fn fixtures_print_canonically() {
        for name in NAMES {
            let f = file(name, 3).unwrap();
            assert_eq!(AlgebraFile::parse(&f.print()).unwrap(), f);
        }
    }
}
