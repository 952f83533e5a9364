//! The Fox-calculus tameness condition for central automorphisms of
//! `N_{n,3}`, and decomposition of the subgroup it cuts out.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

use super::central::{central_vector, decompose_central, require_step3, weight3_triples, Decomposition};
use super::endo::Endo;
use super::symbols::{compose_symbols, make_generator, GeneratorSymbol, Kind, Permutation};
use crate::error::{Error, Result};
use crate::foxring::{bglm_sum, RingElemModR};
use crate::lattice::{vec_mat, SmithForm};
use crate::nilpotent::{Group, NilElement, NilpotentGroup};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TamenessCheck {
    pub holds: bool,
    /// `sum_i d_i(u_i)` mod `R`.
    pub sum: RingElemModR,
    /// The free lifts `u_i` used.
    pub lifts: Vec<Word>,
}

impl TamenessCheck {
    /// Whether square terms `(x_a - 1)^2` and mixed terms survive in the sum.
    pub fn failing_terms(&self) -> (bool, bool) {
        let terms = self.sum.quadratic_terms();
        (terms.iter().any(|((i, j), _)| i == j), terms.iter().any(|((i, j), _)| i != j))
    }
}

/// A second lift of a central element: factors in reverse basis order
/// (they commute), times a `gamma_4` commutator.
fn alternate_lift(t: &NilElement) -> Result<Word> {
    let grp = t.group();
    let n = grp.rank();
    let mut w = Word::empty(n);
    for (j, e) in t.exponents().iter().enumerate().rev() {
        if e.is_zero() {
            continue;
        }
        let m = i64::try_from(e.clone()).map_err(|_| Error::Unsupported("exponent too large".into()))?;
        w = w.concat(&grp.basis().word(j).pow(m))?;
    }
    if n >= 2 {
        let g = |i: usize| Word::generator(n, i);
        let junk = Word::left_normed(&[g(2)?, g(1)?, g(1)?, g(2)?])?;
        w = junk.concat(&w)?.concat(&junk.inverse().pow(2))?.concat(&junk)?;
    }
    Ok(w)
}

/// Evaluates `d_1 u_1 + ... + d_n u_n = 0 mod R` for a central automorphism
/// `x_i -> x_i w_i` of `N_{n,3}`, with `u_i` free lifts of `w_i`. A second,
/// different set of lifts must give the same sum.
pub fn tameness_necessary(e: &Endo) -> Result<TamenessCheck> {
    require_step3(e.group())?;
    let tails = e.tails();
    for (i, t) in tails.iter().enumerate() {
        if t.weight() < 3 {
            return Err(Error::Precondition(format!("not central at x{}", i + 1)));
        }
    }
    let lifts = tails.iter().map(NilElement::to_word).collect::<Result<Vec<_>>>()?;
    let other = tails.iter().map(alternate_lift).collect::<Result<Vec<_>>>()?;
    let a = bglm_sum(&lifts)?;
    let b = bglm_sum(&other)?;
    if a != b {
        return Err(Error::Internal(format!("condition depends on the lift: {} vs {}", a.sum, b.sum)));
    }
    Ok(TamenessCheck { holds: a.holds, sum: a.sum, lifts })
}

/// Tameness of `phi2(a,b;i)`: iff `a, b, i` are pairwise distinct.
pub fn phi2_tame(a: usize, b: usize, i: usize) -> bool {
    a != b && a != i && b != i
}

/// Condition (1) for `phi3(a,b,c;i)` holds iff `i` is neither `a` nor `b`;
/// every such map lifts to an automorphism of `F_n`.
pub fn phi3_tame(a: usize, b: usize, _c: usize, i: usize) -> bool {
    a != b && i != a && i != b
}

/// The narrower published rule for `phi3(a,b,c;i)`: `a, b, c, i` pairwise
/// distinct, or `c = i` with `a, b, i` distinct.
pub fn phi3_tame_as_stated(a: usize, b: usize, c: usize, i: usize) -> bool {
    let abi = a != b && a != i && b != i;
    abi && (c == i || (c != a && c != b))
}

/// An automorphism `x_i -> u x_i v` of `F_n` (`u`, `v` free of `x_i`,
/// other generators fixed) inducing `phi2`/`phi3` when those are tame.
#[derive(Debug, Clone)]
pub struct FreeLift {
    pub i: usize,
    pub left: Word,
    pub right: Word,
}

impl FreeLift {
    pub fn images(&self) -> Vec<Word> {
        let n = self.left.rank();
        (1..=n)
            .map(|j| {
                let x = Word::generator(n, j).expect("in range");
                if j == self.i {
                    self.left.concat(&x).and_then(|w| w.concat(&self.right)).expect("same rank")
                } else {
                    x
                }
            })
            .collect()
    }

    pub fn inverse_images(&self) -> Vec<Word> {
        let inv = FreeLift { i: self.i, left: self.left.inverse(), right: self.right.inverse() };
        inv.images()
    }

    /// Checks that the lift is invertible in `F_n` and induces `target`.
    pub fn verify(&self, target: &Endo) -> Result<bool> {
        let n = target.rank();
        let free_of_i = |w: &Word| w.letters().iter().all(|l| l.index() != self.i);
        if !free_of_i(&self.left) || !free_of_i(&self.right) {
            return Ok(false);
        }
        let imgs = self.images();
        let inv = self.inverse_images();
        for j in 1..=n {
            let x = Word::generator(n, j)?;
            if x.substitute(&imgs)?.substitute(&inv)? != x || x.substitute(&inv)?.substitute(&imgs)? != x {
                return Ok(false);
            }
        }
        Ok(Endo::from_words(target.group(), &imgs)? == *target)
    }
}

fn w(n: usize, i: usize) -> Word {
    Word::generator(n, i).expect("in range")
}

/// A free lift for a tame `phi2`/`phi3` symbol.
pub fn free_lift(sym: &GeneratorSymbol, n: usize) -> Result<Option<FreeLift>> {
    let lift = match sym.kind {
        Kind::Phi2 { a, b, i } if phi2_tame(a, b, i) && sym.exp == 1 => {
            let c = w(n, a).commutator(&w(n, b).inverse())?;
            let tail = Word::left_normed(&[w(n, a), w(n, b), w(n, b).concat(&w(n, a))?])?;
            FreeLift { i, left: c.inverse(), right: c.concat(&tail)? }
        }
        Kind::Phi3 { a, b, c, i } if c == i && phi3_tame(a, b, c, i) && sym.exp == 1 => {
            let d = w(n, a).pow(2).commutator(&w(n, b).inverse())?;
            FreeLift { i, left: d.inverse(), right: d }
        }
        Kind::Phi3 { a, b, c, i } if phi3_tame(a, b, c, i) => {
            let t = Word::left_normed(&[w(n, a), w(n, b), w(n, c)])?.pow(2 * sym.exp);
            FreeLift { i, left: Word::empty(n), right: t }
        }
        _ => return Ok(None),
    };
    Ok(Some(lift))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TameFactorization {
    /// `phi2(a,b;i)` as `[x_a,x_b^-1]^-1 x_i [x_a,x_b^-1] [x_a,x_b,x_b x_a]`.
    Phi2 { a: usize, b: usize, i: usize },
    /// `phi3(a,b,i;i)` as `[x_a^2,x_b^-1]^-1 x_i [x_a^2,x_b^-1]`.
    Phi3 { a: usize, b: usize, i: usize },
    Identity,
}

/// Checks in `N_{n,3}` that every expression in the displayed chain of
/// equalities collects to the generator's image of `x_i`.
pub fn verify_tame_factorization(which: TameFactorization, n: usize) -> Result<bool> {
    let g = NilpotentGroup::shared(n, 3)?;
    let p = |s: &str| g.parse(s);
    let chain: Vec<NilElement> = match which {
        TameFactorization::Identity => {
            let x = g.generator(1);
            vec![x.clone(), make_generator(&GeneratorSymbol::sigma(Permutation::identity(n)), &g)?.apply(&x)?]
        }
        TameFactorization::Phi2 { a, b, i } => {
            if !phi2_tame(a, b, i) {
                return Err(Error::InvalidParameters("needs distinct a, b, i".into()));
            }
            vec![
                make_generator(&GeneratorSymbol::phi2(a, b, i), &g)?.image(i).clone(),
                p(&format!("x{i} [x{a},x{b},x{i}] [x{a},x{b},x{b}] [x{a},x{b},x{a}]"))?,
                p(&format!("x{i} [x{a},x{b}^-1,x{i}^-1] [x{a},x{b},x{b} x{a}]"))?,
                p(&format!("[x{a},x{b}^-1,x{i}^-1] x{i} [x{a},x{b},x{b} x{a}]"))?,
                p(&format!("[x{a},x{b}^-1]^-1 x{i} [x{a},x{b}^-1] [x{a},x{b},x{b} x{a}]"))?,
            ]
        }
        TameFactorization::Phi3 { a, b, i } => {
            if !phi2_tame(a, b, i) {
                return Err(Error::InvalidParameters("needs distinct a, b, i".into()));
            }
            vec![
                make_generator(&GeneratorSymbol::phi3(a, b, i, i), &g)?.image(i).clone(),
                p(&format!("x{i} [x{a},x{b},x{i}]^2"))?,
                p(&format!("x{i} [x{a}^2,x{b}^-1,x{i}^-1]"))?,
                p(&format!("[x{a}^2,x{b}^-1,x{i}^-1] x{i}"))?,
                p(&format!("[x{a}^2,x{b}^-1]^-1 x{i} [x{a}^2,x{b}^-1]"))?,
            ]
        }
    };
    Ok(chain.windows(2).all(|w| w[0] == w[1]))
}

/// The generator types of the tame-condition subgroup for `n >= 3`, each
/// as a product of symbols.
pub fn bglm_types(n: usize) -> Vec<Vec<GeneratorSymbol>> {
    let mut t = vec![vec![GeneratorSymbol::phi2(2, 3, 1)]];
    if n >= 4 {
        t.push(vec![GeneratorSymbol::phi3(2, 3, 4, 1)]);
    }
    t.push(vec![GeneratorSymbol::phi3(2, 3, 1, 1)]);
    t.push(vec![GeneratorSymbol::psi(1, 2), GeneratorSymbol::psi(1, 3).pow(-1)]);
    t.push(vec![GeneratorSymbol::phi3(1, 2, 3, 1), GeneratorSymbol::phi3(3, 2, 2, 2)]);
    t
}

/// The single generator for `n = 2`: conjugation by `[x1,x2]^2`.
pub fn bglm_n2_generator(group: &Group) -> Result<GeneratorSymbol> {
    Ok(GeneratorSymbol::inner(group.parse("[x1,x2]^2")?))
}

struct BglmTable {
    /// `(sigma, type)` per lattice row; `None` type is the `n = 2` generator.
    gens: Vec<(Permutation, Option<usize>)>,
    rows: Vec<Vec<BigInt>>,
    snf: SmithForm,
}

static TABLES: OnceLock<Mutex<HashMap<usize, Arc<BglmTable>>>> = OnceLock::new();

fn bglm_table(group: &Group) -> Result<Arc<BglmTable>> {
    let n = group.rank();
    let map = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = map.lock().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let dim = n * group.basis().layer_len(3);
    let mut gens = Vec::new();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    if n == 2 {
        let e = make_generator(&bglm_n2_generator(group)?, group)?;
        gens.push((Permutation::identity(2), None));
        rows.push(central_vector(&e)?);
    } else {
        for (ti, body) in bglm_types(n).iter().enumerate() {
            for p in Permutation::all(n) {
                let relabelled: Vec<GeneratorSymbol> = body.iter().map(|s| s.relabel(&p).expect("indexed")).collect();
                let v = central_vector(&compose_symbols(&relabelled, group)?)?;
                if v.iter().all(Zero::is_zero) || rows.contains(&v) {
                    continue;
                }
                gens.push((p, Some(ti)));
                rows.push(v);
            }
        }
    }
    let snf = SmithForm::new(&rows, dim);
    let t = Arc::new(BglmTable { gens, rows, snf });
    Ok(map.lock().unwrap().entry(n).or_insert(t).clone())
}

/// The symbols for row `r` of the table, raised to `m`.
fn table_symbol(group: &Group, table: &BglmTable, r: usize, m: i64) -> Result<GeneratorSymbol> {
    let (p, ty) = &table.gens[r];
    Ok(match ty {
        None => bglm_n2_generator(group)?.pow(m),
        Some(ti) => {
            let body = bglm_types(group.rank())[*ti].clone();
            if p.is_identity() && body.len() == 1 {
                body.into_iter().next().unwrap().pow(m)
            } else {
                GeneratorSymbol::conj(p.clone(), body).pow(m)
            }
        }
    })
}

/// All generators used by [`decompose_bglm`] for this group.
pub fn bglm_generators(group: &Group) -> Result<Vec<GeneratorSymbol>> {
    require_step3(group)?;
    let table = bglm_table(group)?;
    (0..table.gens.len()).map(|r| table_symbol(group, &table, r, 1)).collect()
}

/// Writes a central palindromic automorphism of `N_{n,3}` satisfying the
/// tameness condition as a product of conjugates of the listed generator
/// types (for `n = 2`, powers of one inner automorphism).
pub fn decompose_bglm(e: &Endo) -> Result<Decomposition> {
    let group = e.group();
    require_step3(group)?;
    let n = group.rank();
    if n < 2 {
        return Err(Error::InvalidParameters("needs n >= 2".into()));
    }
    let central = decompose_central(e)?;
    if !central.residual_trivial {
        return Ok(central);
    }
    let check = tameness_necessary(e)?;
    if !check.holds {
        let (squares, mixed) = check.failing_terms();
        let which = match (squares, mixed) {
            (true, true) => "square and mixed terms",
            (true, false) => "square terms",
            _ => "mixed terms",
        };
        let report = check.sum.residue_report().replace('\n', ", ");
        return Ok(Decomposition::failed(format!("tameness condition violated, {which}: {report}")));
    }
    let v = central_vector(e)?;
    let table = bglm_table(group)?;
    let sol = match table.snf.solve(&v) {
        Ok(sol) => sol,
        Err(res) => {
            let res: Vec<String> = res.iter().map(|x| x.to_string()).collect();
            return Ok(Decomposition::failed(format!(
                "satisfies the tameness condition but is outside the generated subgroup: residue ({})",
                res.join(",")
            )));
        }
    };
    let mut factors = Vec::new();
    for (r, m) in sol.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        let m = i64::try_from(m.clone()).map_err(|_| Error::Unsupported("exponent too large".into()))?;
        factors.push(table_symbol(group, &table, r, m)?);
    }
    if compose_symbols(&factors, group)? != *e {
        return Err(Error::Internal("decomposition does not reproduce the automorphism".into()));
    }
    Ok(Decomposition::ok(factors))
}

/// Compares the lattice generated by the listed generators with the full
/// subgroup of central palindromic automorphisms satisfying the condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanReport {
    pub rank_condition_subgroup: usize,
    pub rank_generated: usize,
    pub generated_inside: bool,
    pub covers: bool,
    /// Whether adding the conjugates of [`extra_type`] covers it.
    pub extended_covers: bool,
}

/// `phi3(2,3,2;1)`: tame, satisfies the condition, and lies outside the
/// span of [`bglm_types`].
pub fn extra_type() -> GeneratorSymbol {
    GeneratorSymbol::phi3(2, 3, 2, 1)
}

pub fn bglm_span_report(n: usize) -> Result<SpanReport> {
    let group = NilpotentGroup::shared(n, 3)?;
    let d3 = group.basis().layer_len(3);
    let dim = n * d3;
    // Central palindromic automorphisms are spanned by phi2 and phi3.
    let mut syms = Vec::new();
    for i in 1..=n {
        for a in 1..=n {
            for b in 1..a {
                syms.push(GeneratorSymbol::phi2(a, b, i));
            }
        }
        for (a, b, c) in weight3_triples(&group) {
            syms.push(GeneratorSymbol::phi3(a, b, c, i));
        }
    }
    let mut basis = Vec::new();
    let mut fox = Vec::new();
    for s in &syms {
        let e = make_generator(s, &group)?;
        basis.push(central_vector(&e)?);
        let sum = tameness_necessary(&e)?.sum;
        fox.push((1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).map(|(i, j)| sum.quadratic(i, j).clone()).collect());
    }
    let fox_dim = n * (n + 1) / 2;
    let kernel = SmithForm::new(&fox, fox_dim).left_kernel();
    let k_rows: Vec<Vec<BigInt>> = kernel.iter().map(|x| vec_mat(x, &basis, dim)).collect();
    let k_snf = SmithForm::new(&k_rows, dim);
    let table = bglm_table(&group)?;
    let generated_inside = table.rows.iter().all(|r| k_snf.contains(r));
    let covers = k_rows.iter().all(|r| table.snf.contains(r));
    let mut extended = table.rows.clone();
    if n >= 3 {
        for p in Permutation::all(n) {
            let s = extra_type().relabel(&p).expect("indexed");
            extended.push(central_vector(&make_generator(&s, &group)?)?);
        }
    }
    let ext_snf = SmithForm::new(&extended, dim);
    let extended_covers = k_rows.iter().all(|r| ext_snf.contains(r));
    Ok(SpanReport {
        rank_condition_subgroup: k_snf.rank(),
        rank_generated: table.snf.rank(),
        generated_inside,
        covers,
        extended_covers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi2_examples() {
        let g = NilpotentGroup::new(3, 3).unwrap();
        let ok = tameness_necessary(&make_generator(&GeneratorSymbol::phi2(2, 3, 1), &g).unwrap()).unwrap();
        assert!(ok.holds);
        // a = i != b: residue 2(x_i-1)(x_b-1) + (x_b-1)^2.
        let bad = tameness_necessary(&make_generator(&GeneratorSymbol::phi2(1, 2, 1), &g).unwrap()).unwrap();
        assert!(!bad.holds);
        assert_eq!(bad.sum.residue_report(), "(1,2): 2\n(2,2): 1");
    }

    #[test]
    fn factorizations() {
        assert!(verify_tame_factorization(TameFactorization::Phi2 { a: 2, b: 3, i: 1 }, 3).unwrap());
        assert!(verify_tame_factorization(TameFactorization::Phi3 { a: 2, b: 3, i: 1 }, 3).unwrap());
        assert!(verify_tame_factorization(TameFactorization::Identity, 3).unwrap());
    }

    #[test]
    fn lifts() {
        let g = NilpotentGroup::new(3, 3).unwrap();
        for s in [
            GeneratorSymbol::phi2(2, 3, 1),
            GeneratorSymbol::phi3(2, 3, 1, 1),
            GeneratorSymbol::phi3(1, 2, 1, 3),
        ] {
            let lift = free_lift(&s, 3).unwrap().unwrap();
            assert!(lift.verify(&make_generator(&s, &g).unwrap()).unwrap(), "{s}");
        }
        assert!(free_lift(&GeneratorSymbol::phi2(1, 2, 1), 3).unwrap().is_none());
    }

    #[test]
    fn n2_generator() {
        let g = NilpotentGroup::new(2, 3).unwrap();
        let e = make_generator(&bglm_n2_generator(&g).unwrap(), &g).unwrap();
        assert_eq!(*e.image(1), g.parse("x1 [x2,x1,x1]^2").unwrap());
        assert_eq!(*e.image(2), g.parse("x2 [x2,x1,x2]^2").unwrap());
        let d = decompose_bglm(&e).unwrap();
        assert!(d.residual_trivial);
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].exp, 1);
    }

    #[test]
    fn span_n3() {
        let r = bglm_span_report(3).unwrap();
        assert!(r.generated_inside);
        assert!(!r.covers);
        assert!(r.extended_covers);
        assert_eq!((r.rank_generated, r.rank_condition_subgroup), (15, 18));
    }
}
