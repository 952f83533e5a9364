//! Central automorphisms of `N_{n,3}`.
//!
//! A central automorphism `x_i -> x_i w_i` (`w_i` in `gamma_3`) is recorded
//! by the weight-3 coordinates of all `w_i`; composition adds these vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::endo::Endo;
use super::symbols::GeneratorSymbol;
use crate::error::{Error, Result};
use crate::lattice::SmithForm;
use crate::nilpotent::{Group, NilElement, Node};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub factors: Vec<GeneratorSymbol>,
    pub residual_trivial: bool,
    pub diagnostic: Option<String>,
}

impl Decomposition {
    pub fn ok(factors: Vec<GeneratorSymbol>) -> Self {
        Decomposition { factors, residual_trivial: true, diagnostic: None }
    }

    pub fn failed(diagnostic: String) -> Self {
        Decomposition { factors: Vec::new(), residual_trivial: false, diagnostic: Some(diagnostic) }
    }
}

pub(crate) fn require_step3(group: &Group) -> Result<()> {
    if group.step() != 3 {
        return Err(Error::Unsupported(format!("needs step 3, got {}", group.step())));
    }
    Ok(())
}

/// Concatenated weight-3 coordinates of the tails `x_i^-1 x_i^e`.
pub fn central_vector(e: &Endo) -> Result<Vec<BigInt>> {
    require_step3(e.group())?;
    let mut out = Vec::new();
    for (i, t) in e.tails().iter().enumerate() {
        if t.weight() < 3 {
            return Err(Error::Precondition(format!("not central: x{} -> x{} * ({t})", i + 1, i + 1)));
        }
        out.extend_from_slice(t.layer(3));
    }
    Ok(out)
}

/// The central automorphism with the given coordinate vector.
pub fn from_central_vector(group: &Group, v: &[BigInt]) -> Result<Endo> {
    require_step3(group)?;
    let d3 = group.basis().layer_len(3);
    if v.len() != d3 * group.rank() {
        return Err(Error::InvalidParameters(format!("expected {} coordinates", d3 * group.rank())));
    }
    let tails = v.chunks(d3).map(|c| group.from_layer(3, c)).collect::<Result<Vec<_>>>()?;
    Endo::from_tails(group, &tails)
}

/// `(a, b, c)` for each weight-3 basic commutator `[x_a, x_b, x_c]`.
pub fn weight3_triples(group: &Group) -> Vec<(usize, usize, usize)> {
    let basis = group.basis();
    let gen = |p: usize| match basis.get(p).node {
        Node::Generator(i) => i,
        _ => unreachable!("weight-3 basic commutators are left-normed in generators"),
    };
    basis
        .layer(3)
        .map(|j| {
            let Node::Pair(u, c) = basis.get(j).node else { unreachable!() };
            let Node::Pair(a, b) = basis.get(u).node else { unreachable!() };
            (gen(a), gen(b), gen(c))
        })
        .collect()
}

/// `[x_a,x_b,x_i][x_a,x_b,x_b][x_a,x_b,x_a]`.
pub fn w_ab(group: &Group, a: usize, b: usize, i: usize) -> Result<NilElement> {
    let t = |c: usize| NilElement::left_normed(&[group.generator(a), group.generator(b), group.generator(c)]);
    Ok(&(&t(i)? * &t(b)?) * &t(a)?)
}

/// Lattice `H_i` spanned by the `w_ab` (for `x_i`, `b < a`) and the doubled
/// basis vectors. Rows come phi2-first.
fn h_lattice(group: &Group, i: usize) -> Result<(Vec<(usize, usize)>, Vec<Vec<BigInt>>)> {
    let n = group.rank();
    let d3 = group.basis().layer_len(3);
    let mut pairs = Vec::new();
    let mut rows = Vec::new();
    for a in 1..=n {
        for b in 1..a {
            pairs.push((a, b));
            rows.push(w_ab(group, a, b, i)?.layer(3).to_vec());
        }
    }
    for c in 0..d3 {
        let mut row = vec![BigInt::zero(); d3];
        row[c] = BigInt::from(2);
        rows.push(row);
    }
    Ok((pairs, rows))
}

/// `n(n^2 - 1)/3 - n(n - 1)/2`.
pub fn quotient_rank_q(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("needs n >= 2, got {n}")));
    }
    Ok(n * (n * n - 1) / 3 - n * (n - 1) / 2)
}

/// Number of invariant factors equal to 2 of `gamma_3 / H_i`, for each `i`.
pub fn quotient_rank_snf(n: usize) -> Result<Vec<usize>> {
    let group = crate::nilpotent::NilpotentGroup::shared(n, 3)?;
    let d3 = group.basis().layer_len(3);
    (1..=n)
        .map(|i| {
            let (_, rows) = h_lattice(&group, i)?;
            let s = SmithForm::new(&rows, d3);
            if s.rank() != d3 {
                return Err(Error::Internal("H lattice is not of full rank".into()));
            }
            let two = BigInt::from(2);
            if s.invariant_factors().iter().any(|d| !d.is_one() && *d != two) {
                return Err(Error::Internal("H lattice has invariant factors other than 1, 2".into()));
            }
            Ok(s.invariant_factors().iter().filter(|d| **d == two).count())
        })
        .collect()
}

/// Writes a central palindromic automorphism of `N_{n,3}` as a product of
/// `phi2(a,b;i)` (`b < a`) and `phi3(a,b,c;i)` (`[x_a,x_b,x_c]` basic).
///
/// Per generator the tail must lie in `H_i`; `phi2` exponents are reduced
/// to `{0, 1}`, the rest is halved onto `phi3` factors. Otherwise the
/// decomposition fails and reports the class of the tail in `gamma_3 / H_i`.
pub fn decompose_central(e: &Endo) -> Result<Decomposition> {
    let group = e.group();
    require_step3(group)?;
    let v = central_vector(e)?;
    let n = group.rank();
    let d3 = group.basis().layer_len(3);
    let triples = weight3_triples(group);
    let mut phi2 = Vec::new();
    let mut phi3 = Vec::new();
    let mut problems = Vec::new();
    for i in 1..=n {
        let w = &v[(i - 1) * d3..i * d3];
        let (pairs, rows) = h_lattice(group, i)?;
        let s = SmithForm::new(&rows, d3);
        match s.solve(w) {
            Ok(sol) => {
                let mut rest = w.to_vec();
                for (p, (a, b)) in pairs.iter().enumerate() {
                    let m = sol[p].mod_floor(&BigInt::from(2));
                    if m.is_one() {
                        phi2.push(((*a, *b, i), 1i64));
                        for (r, x) in rest.iter_mut().zip(&rows[p]) {
                            *r -= x;
                        }
                    }
                }
                for (c, r) in rest.iter().enumerate() {
                    if r.is_odd() {
                        return Err(Error::Internal("remainder is not even".into()));
                    }
                    let m: BigInt = r / 2;
                    if !m.is_zero() {
                        let m = i64::try_from(m).map_err(|_| Error::Unsupported("exponent too large".into()))?;
                        let (a, b, cc) = triples[c];
                        phi3.push(((a, b, cc, i), m));
                    }
                }
            }
            Err(res) => {
                let torsion: Vec<String> = s
                    .invariant_factors()
                    .iter()
                    .zip(&res)
                    .filter(|(d, _)| !d.is_one())
                    .map(|(_, r)| r.to_string())
                    .collect();
                problems.push(format!("x{i}: residue ({}) in Z_2^{}", torsion.join(","), torsion.len()));
            }
        }
    }
    if !problems.is_empty() {
        return Ok(Decomposition::failed(format!("not palindromic: {}", problems.join("; "))));
    }
    phi2.sort();
    phi3.sort();
    let mut factors: Vec<GeneratorSymbol> =
        phi2.into_iter().map(|((a, b, i), m)| GeneratorSymbol::phi2(a, b, i).pow(m)).collect();
    factors.extend(phi3.into_iter().map(|((a, b, c, i), m)| GeneratorSymbol::phi3(a, b, c, i).pow(m)));
    Ok(Decomposition::ok(factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autos::symbols::compose_symbols;
    use crate::nilpotent::NilpotentGroup;

    #[test]
    fn q_values() {
        assert_eq!(quotient_rank_q(2).unwrap(), 1);
        assert_eq!(quotient_rank_q(3).unwrap(), 5);
        assert_eq!(quotient_rank_q(4).unwrap(), 14);
        assert_eq!(quotient_rank_snf(3).unwrap(), vec![5, 5, 5]);
    }

    #[test]
    fn round_trip() {
        let g = NilpotentGroup::new(2, 3).unwrap();
        let syms = vec![GeneratorSymbol::phi2(2, 1, 1), GeneratorSymbol::phi3(2, 1, 2, 2)];
        let e = compose_symbols(&syms, &g).unwrap();
        let d = decompose_central(&e).unwrap();
        assert!(d.residual_trivial);
        assert_eq!(compose_symbols(&d.factors, &g).unwrap(), e);
        assert!(decompose_central(&Endo::identity(&g)).unwrap().factors.is_empty());
    }

    #[test]
    fn odd_tail_fails() {
        let g = NilpotentGroup::new(2, 3).unwrap();
        let e = Endo::from_tails(&g, &[g.parse("[x2,x1,x1]").unwrap(), g.identity()]).unwrap();
        let d = decompose_central(&e).unwrap();
        assert!(!d.residual_trivial);
        assert!(d.diagnostic.unwrap().contains("x1: residue (1)"));
    }
}
