//! Automorphisms of free nilpotent groups.

pub mod central;
pub mod endo;
pub mod palindromic;
pub mod symbols;
pub mod tame;

pub use central::{decompose_central, quotient_rank_q, quotient_rank_snf, Decomposition};
pub use endo::{inverse, Endo, Inverse, InverseMethod};
pub use palindromic::{classify, parity_criterion, pi_level, solve_conjugator, Classification};
pub use symbols::{compose_symbols, make_generator, parse_symbols, render_symbols, GeneratorSymbol, Kind, Permutation};
pub use tame::{decompose_bglm, tameness_necessary, verify_tame_factorization, TameFactorization, TamenessCheck};

use crate::error::{Error, Result};
use crate::nilpotent::Group;

/// Reads an automorphism file: lines `x<i> -> <expr>`, `#` comments and
/// blank lines ignored. Generators without a line are fixed.
pub fn parse_endo(text: &str, group: &Group) -> Result<Endo> {
    let n = group.rank();
    let mut images: Vec<Option<_>> = vec![None; n];
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = body.split_once("->") else {
            return Err(Error::parse(start, "expected `x<i> -> <expr>`"));
        };
        let lhs = lhs.trim();
        let i: usize = lhs
            .strip_prefix('x')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(start, format!("expected a generator, found `{lhs}`")))?;
        if !(1..=n).contains(&i) {
            return Err(Error::IndexOutOfRank { index: i, rank: n });
        }
        if images[i - 1].is_some() {
            return Err(Error::parse(start, format!("x{i} given twice")));
        }
        let rhs_start = start + body.find("->").unwrap() + 2;
        let g = group.parse(rhs).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: rhs_start + pos, msg },
            other => other,
        })?;
        images[i - 1] = Some(g);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, g)| g.unwrap_or_else(|| group.generator(i + 1)))
        .collect();
    Endo::new(group, images)
}

/// Writes `e` in the format read by [`parse_endo`].
pub fn render_endo(e: &Endo) -> String {
    e.images().iter().enumerate().map(|(i, g)| format!("x{} -> {g}\n", i + 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::NilpotentGroup;

    #[test]
    fn file_round_trip() {
        let g = NilpotentGroup::new(2, 3).unwrap();
        let e = parse_endo("# mu(1,2)\nx1 -> x2 x1 x2\n", &g).unwrap();
        assert_eq!(e, make_generator(&GeneratorSymbol::mu(1, 2), &g).unwrap());
        assert_eq!(parse_endo(&render_endo(&e), &g).unwrap(), e);
        assert!(matches!(parse_endo("x3 -> x1", &g), Err(Error::IndexOutOfRank { .. })));
        assert!(matches!(parse_endo("x1 = x1", &g), Err(Error::Parse { .. })));
        match parse_endo("x1 -> x1\nx2 -> x2 ^", &g) {
            Err(Error::Parse { pos, .. }) => assert!(pos >= 15),
            other => panic!("{other:?}"),
        }
    }
}
