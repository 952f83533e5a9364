use std::collections::HashMap;
use std::fmt;
use std::ops::{Mul, Neg};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::hall::{HallBasis, Node};
use super::magnus::{Algebra, Series};
use crate::error::{Error, Result};
use crate::words::Word;

/// Reads the exponents of one weight layer off the degree-`w` component.
///
/// The degree-`w` parts of the Magnus images of the weight-`w` basic
/// commutators are linearly independent; `pivots` picks columns on which
/// they form an invertible square block, whose inverse is `inv / den`.
#[derive(Debug, Clone)]
struct LayerSolver {
    pivots: Vec<usize>,
    inv: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl LayerSolver {
    fn new(rows: &[&[BigInt]]) -> Self {
        let d = rows.len();
        if d == 0 {
            return LayerSolver { pivots: vec![], inv: vec![], den: BigInt::one() };
        }
        let width = rows[0].len();
        let mut m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        // Row-reduce a copy to locate pivot columns.
        let mut pivots = Vec::with_capacity(d);
        let mut row = 0;
        for col in 0..width {
            if row == d {
                break;
            }
            let Some(p) = (row..d).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(row, p);
            let pivot = m[row][col].clone();
            for r in 0..d {
                if r != row && !m[r][col].is_zero() {
                    let f = &m[r][col] / &pivot;
                    for c in col..width {
                        let delta = &f * &m[row][c];
                        m[r][c] -= delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        assert_eq!(pivots.len(), d, "basic commutators must be independent in their layer");

        // Invert the square block A[:, pivots] by Gauss-Jordan.
        let mut a: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| pivots.iter().map(|&c| BigRational::from_integer(r[c].clone())).collect())
            .collect();
        let mut inv: Vec<Vec<BigRational>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        for col in 0..d {
            let p = (col..d).find(|&r| !a[r][col].is_zero()).expect("block is invertible");
            a.swap(col, p);
            inv.swap(col, p);
            let pivot = a[col][col].clone();
            for c in 0..d {
                a[col][c] = &a[col][c] / &pivot;
                inv[col][c] = &inv[col][c] / &pivot;
            }
            for r in 0..d {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..d {
                        let da = &f * &a[col][c];
                        a[r][c] -= da;
                        let di = &f * &inv[col][c];
                        inv[r][c] -= di;
                    }
                }
            }
        }
        let den = inv
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let inv = inv
            .iter()
            .map(|r| r.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
            .collect();
        LayerSolver { pivots, inv, den }
    }

    /// Coefficients `c` with `c * A = v`. `A^-1` is the inverse of the pivot
    /// block, so `c = v[pivots] * A^-1`.
    fn solve(&self, v: &[BigInt]) -> Vec<BigInt> {
        let d = self.pivots.len();
        let mut out = vec![BigInt::zero(); d];
        for (s, &p) in self.pivots.iter().enumerate() {
            let x = &v[p];
            if x.is_zero() {
                continue;
            }
            for j in 0..d {
                if !self.inv[s][j].is_zero() {
                    out[j] += x * &self.inv[s][j];
                }
            }
        }
        for c in out.iter_mut() {
            let (q, r) = c.div_rem(&self.den);
            assert!(r.is_zero(), "layer coordinates must be integral");
            *c = q;
        }
        out
    }
}

/// The free nilpotent group `N_{n,k} = F_n / gamma_{k+1} F_n`, with its Hall
/// basis and the tables used for arithmetic.
pub struct NilpotentGroup {
    basis: HallBasis,
    alg: Algebra,
    /// Magnus image of each basic commutator and the powers of its
    /// nilpotent part.
    basis_nil: Vec<Vec<Series>>,
    solvers: Vec<LayerSolver>,
}

impl fmt::Debug for NilpotentGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N({},{})", self.rank(), self.step())
    }
}

pub type Group = Arc<NilpotentGroup>;

static SHARED: OnceLock<Mutex<HashMap<(usize, usize), Group>>> = OnceLock::new();

impl NilpotentGroup {
    pub fn new(rank: usize, step: usize) -> Result<Group> {
        let basis = HallBasis::new(rank, step)?;
        let alg = Algebra::new(rank, step);
        let mut images: Vec<Series> = Vec::with_capacity(basis.len());
        let mut inverses: Vec<Series> = Vec::with_capacity(basis.len());
        for c in basis.elements() {
            let s = match c.node {
                Node::Generator(i) => alg.generator(i - 1, false),
                Node::Pair(u, v) => {
                    let t = alg.mul(&inverses[u], &inverses[v]);
                    let t = alg.mul(&t, &images[u]);
                    alg.mul(&t, &images[v])
                }
            };
            inverses.push(alg.inverse(&s));
            images.push(s);
        }
        let basis_nil: Vec<Vec<Series>> = images.iter().map(|s| alg.nil_powers(s)).collect();
        let mut solvers = vec![LayerSolver::new(&[])];
        for w in 1..=step {
            let rows: Vec<&[BigInt]> = basis.layer(w).map(|j| alg.degree(&images[j], w)).collect();
            solvers.push(LayerSolver::new(&rows));
        }
        Ok(Arc::new(NilpotentGroup { basis, alg, basis_nil, solvers }))
    }

    /// A process-wide cached instance for `(rank, step)`.
    pub fn shared(rank: usize, step: usize) -> Result<Group> {
        let map = SHARED.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = map.lock().unwrap().get(&(rank, step)) {
            return Ok(g.clone());
        }
        let g = NilpotentGroup::new(rank, step)?;
        Ok(map.lock().unwrap().entry((rank, step)).or_insert(g).clone())
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn step(&self) -> usize {
        self.basis.step()
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    pub fn same_group(&self, other: &NilpotentGroup) -> bool {
        std::ptr::eq(self, other) || (self.rank() == other.rank() && self.step() == other.step())
    }

    fn check_same(&self, other: &NilpotentGroup) -> Result<()> {
        if self.same_group(other) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(self.rank(), self.step(), other.rank(), other.step()))
        }
    }

    pub fn identity(self: &Arc<Self>) -> NilElement {
        let exps = vec![BigInt::zero(); self.basis.len()];
        NilElement::with_both(self.clone(), self.alg.one(), exps)
    }

    /// `x_i`, 1-based.
    pub fn generator(self: &Arc<Self>, i: usize) -> NilElement {
        assert!((1..=self.rank()).contains(&i), "generator x{i} out of range");
        self.basis_element(i - 1)
    }

    pub fn generators(self: &Arc<Self>) -> Vec<NilElement> {
        (1..=self.rank()).map(|i| self.generator(i)).collect()
    }

    /// The `j`-th basic commutator (0-based position in the basis).
    pub fn basis_element(self: &Arc<Self>, j: usize) -> NilElement {
        let mut exps = vec![BigInt::zero(); self.basis.len()];
        exps[j] = BigInt::one();
        let mut s = self.basis_nil[j][0].clone();
        s.0[0] += 1;
        NilElement::with_both(self.clone(), s, exps)
    }

    /// Normal form of the image of `w`.
    pub fn collect(self: &Arc<Self>, w: &Word) -> Result<NilElement> {
        if w.rank() != self.rank() {
            return Err(Error::RankMismatch(w.rank(), self.rank()));
        }
        let mut s = self.alg.one();
        for l in w.letters() {
            s = self.alg.mul(&s, &self.alg.generator(l.index() - 1, l.is_inverse()));
        }
        Ok(NilElement::from_series(self.clone(), s))
    }

    pub fn parse(self: &Arc<Self>, text: &str) -> Result<NilElement> {
        self.collect(&Word::parse(text, self.rank())?)
    }

    pub fn from_exponents(self: &Arc<Self>, exps: &[BigInt]) -> Result<NilElement> {
        if exps.len() != self.basis.len() {
            return Err(Error::InvalidParameters(format!(
                "expected {} exponents, got {}",
                self.basis.len(),
                exps.len()
            )));
        }
        let mut s = self.alg.one();
        for (j, e) in exps.iter().enumerate() {
            if !e.is_zero() {
                s = self.alg.mul(&s, &self.alg.pow_from_nil(&self.basis_nil[j], e));
            }
        }
        Ok(NilElement::with_both(self.clone(), s, exps.to_vec()))
    }

    pub fn from_i64_exponents(self: &Arc<Self>, exps: &[i64]) -> Result<NilElement> {
        let big: Vec<BigInt> = exps.iter().map(|&e| BigInt::from(e)).collect();
        self.from_exponents(&big)
    }

    /// Product of basis powers over weight `w` only, from layer coordinates.
    pub fn from_layer(self: &Arc<Self>, w: usize, coords: &[BigInt]) -> Result<NilElement> {
        let range = self.basis.layer(w);
        if coords.len() != range.len() {
            return Err(Error::InvalidParameters(format!(
                "weight {w} layer has {} coordinates, got {}",
                range.len(),
                coords.len()
            )));
        }
        let mut exps = vec![BigInt::zero(); self.basis.len()];
        exps[range].clone_from_slice(coords);
        self.from_exponents(&exps)
    }

    fn exponents_of(&self, series: &Series) -> Vec<BigInt> {
        let mut exps = vec![BigInt::zero(); self.basis.len()];
        let mut cur = series.clone();
        for w in 1..=self.step() {
            let coords = self.solvers[w].solve(self.alg.degree(&cur, w));
            for (j, c) in self.basis.layer(w).zip(coords) {
                if !c.is_zero() {
                    let inv = self.alg.pow_from_nil(&self.basis_nil[j], &-&c);
                    cur = self.alg.mul(&inv, &cur);
                }
                exps[j] = c;
            }
        }
        assert!(self.alg.is_one(&cur), "normal form must exhaust the element");
        exps
    }
}

/// An element of `N_{n,k}`.
///
/// Stored through its Magnus image; the Hall normal form exponents are
/// computed on demand and cached. Two elements are equal iff their normal
/// forms are equal.
#[derive(Clone)]
pub struct NilElement {
    group: Group,
    series: Series,
    exps: OnceLock<Vec<BigInt>>,
}

impl NilElement {
    fn with_both(group: Group, series: Series, exps: Vec<BigInt>) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(exps);
        NilElement { group, series, exps: cell }
    }

    pub(crate) fn from_series(group: Group, series: Series) -> Self {
        NilElement { group, series, exps: OnceLock::new() }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Normal form exponents in basis order.
    pub fn exponents(&self) -> &[BigInt] {
        self.exps.get_or_init(|| self.group.exponents_of(&self.series))
    }

    /// Exponents of the weight-`w` basic commutators.
    pub fn layer(&self, w: usize) -> &[BigInt] {
        &self.exponents()[self.group.basis.layer(w)]
    }

    /// The image in the abelianization `Z^n`.
    pub fn abelianization(&self) -> Vec<BigInt> {
        self.group.alg.degree(&self.series, 1).to_vec()
    }

    pub fn is_identity(&self) -> bool {
        self.group.alg.is_one(&self.series)
    }

    /// Largest `l <= k + 1` with `self` in `gamma_l`; `k + 1` for the identity.
    pub fn weight(&self) -> usize {
        self.group.alg.valuation(&self.series)
    }

    pub fn try_mul(&self, other: &NilElement) -> Result<NilElement> {
        self.group.check_same(&other.group)?;
        Ok(NilElement::from_series(self.group.clone(), self.group.alg.mul(&self.series, &other.series)))
    }

    pub fn inv(&self) -> NilElement {
        NilElement::from_series(self.group.clone(), self.group.alg.inverse(&self.series))
    }

    pub fn pow(&self, e: impl Into<BigInt>) -> NilElement {
        let e = e.into();
        NilElement::from_series(self.group.clone(), self.group.alg.pow(&self.series, &e))
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &NilElement) -> NilElement {
        self.try_commutator(other).expect("elements of the same group")
    }

    pub fn try_commutator(&self, other: &NilElement) -> Result<NilElement> {
        self.group.check_same(&other.group)?;
        let alg = &self.group.alg;
        let t = alg.mul(&alg.inverse(&self.series), &alg.inverse(&other.series));
        let t = alg.mul(&t, &self.series);
        Ok(NilElement::from_series(self.group.clone(), alg.mul(&t, &other.series)))
    }

    /// Left-normed `[g_1, ..., g_m]`.
    pub fn left_normed(elems: &[NilElement]) -> Result<NilElement> {
        let (first, rest) = elems
            .split_first()
            .ok_or_else(|| Error::InvalidParameters("empty commutator".into()))?;
        rest.iter().try_fold(first.clone(), |acc, g| acc.try_commutator(g))
    }

    /// `g^h = h^-1 g h`.
    pub fn conjugate(&self, h: &NilElement) -> NilElement {
        &(&h.inv() * self) * h
    }

    /// Element-level reversal: the image of the reversed word of any
    /// representative. Equals `(g^iota)^-1` where `iota` inverts every
    /// generator.
    pub fn bar(&self) -> NilElement {
        NilElement::from_series(self.group.clone(), self.group.alg.reverse(&self.series))
    }

    /// A word in `F_n` representing this element: the ordered product of
    /// basic-commutator words.
    pub fn to_word(&self) -> Result<Word> {
        let mut w = Word::empty(self.group.rank());
        for (j, e) in self.exponents().iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let m = e
                .to_i64()
                .filter(|m| m.unsigned_abs() <= crate::words::MAX_PARSED_LEN as u64)
                .ok_or_else(|| Error::Unsupported(format!("exponent {e} too large to expand")))?;
            w = w.concat(&self.group.basis.word(j).pow(m))?;
        }
        Ok(w)
    }

    /// The element scaled in a single layer: `(self)^m` when `self` is
    /// central; general powers go through [`NilElement::pow`].
    pub fn is_central(&self) -> bool {
        self.weight() >= self.group.step()
    }
}

impl PartialEq for NilElement {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_group(&other.group) && self.series == other.series
    }
}

impl Eq for NilElement {}

impl std::hash::Hash for NilElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.group.rank().hash(state);
        self.group.step().hash(state);
        self.series.hash(state);
    }
}

impl Mul for &NilElement {
    type Output = NilElement;

    /// Panics if the operands live in different groups; see
    /// [`NilElement::try_mul`].
    fn mul(self, rhs: &NilElement) -> NilElement {
        self.try_mul(rhs).expect("elements of the same group")
    }
}

impl Mul for NilElement {
    type Output = NilElement;

    fn mul(self, rhs: NilElement) -> NilElement {
        &self * &rhs
    }
}

impl Neg for &NilElement {
    type Output = NilElement;

    fn neg(self) -> NilElement {
        self.inv()
    }
}

impl fmt::Debug for NilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.group, self)
    }
}

/// Canonical rendering: factors in basis order, zero exponents omitted,
/// `1` for the identity. Parses back through the word grammar.
impl fmt::Display for NilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, e) in self.exponents().iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            write!(f, "{}", self.group.basis.display(j))?;
            if !e.is_one() {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Convenience: `|e|` summed over all exponents.
pub fn exponent_norm(g: &NilElement) -> BigInt {
    g.exponents().iter().map(|e| e.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(n: usize, k: usize) -> Group {
        NilpotentGroup::new(n, k).unwrap()
    }

    fn exps(g: &NilElement) -> Vec<i64> {
        g.exponents().iter().map(|e| e.to_i64().unwrap()).collect()
    }

    #[test]
    fn collect_examples() {
        let g = grp(2, 2);
        assert_eq!(exps(&g.parse("x2 x1").unwrap()), [1, 1, 1]);
        assert_eq!(exps(&g.parse("[x2,x1]").unwrap()), [0, 0, 1]);
        assert!(g.parse("x1 x1^-1").unwrap().is_identity());
        assert_eq!(g.parse("x2 x1").unwrap().to_string(), "x1 * x2 * [x2,x1]");
    }

    #[test]
    fn arithmetic_examples() {
        let g = grp(2, 2);
        let x1 = g.generator(1);
        let x2 = g.generator(2);
        assert_eq!(&x1 * &g.identity(), x1);
        assert_eq!(x2.commutator(&x1), g.parse("[x2,x1]").unwrap());
        assert_eq!(exps(&x2.commutator(&x1).pow(-2)), [0, 0, -2]);
        assert!((&x1 * &x1.inv()).is_identity());
    }

    #[test]
    fn bar_examples() {
        let g = grp(2, 2);
        let c = g.parse("[x2,x1]").unwrap();
        assert_eq!(c.bar(), c.inv());
        let g3 = grp(2, 3);
        let c3 = g3.parse("[x2,x1,x1]").unwrap();
        assert_eq!(c3.bar(), c3);
        assert_eq!(g3.generator(1).bar(), g3.generator(1));
    }

    #[test]
    fn weights() {
        let g = grp(2, 3);
        assert_eq!(g.generator(1).weight(), 1);
        assert_eq!(g.parse("[x2,x1]").unwrap().weight(), 2);
        assert_eq!(g.identity().weight(), 4);
        for h in ["x1 x2 [x2,x1]^3", "[x2,x1] [x2,x1,x2]", "[x2,x1,x1]^-2"] {
            let e = g.parse(h).unwrap();
            let first = e.exponents().iter().position(|x| !x.is_zero()).unwrap();
            assert_eq!(e.weight(), g.basis().get(first).weight);
        }
    }

    #[test]
    fn truncation() {
        let g = grp(2, 2);
        assert!(g.parse("[x2,x1,x1]").unwrap().is_identity());
    }

    #[test]
    fn render_round_trip() {
        let g = grp(3, 4);
        let e = g.parse("x3 x1^-2 [x2,x3] x2 [x1,x3,x3]^2 (x1 x2)^3").unwrap();
        let back = g.parse(&e.to_string()).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.exponents(), e.exponents());
        assert_eq!(g.collect(&e.to_word().unwrap()).unwrap(), e);
    }

    #[test]
    fn exponents_round_trip() {
        let g = grp(3, 3);
        let e = g.parse("x2^3 x1 [x3,x1]^-4 x3 [x2,x1,x3]").unwrap();
        let f = g.from_exponents(e.exponents()).unwrap();
        assert_eq!(e, f);
        assert_eq!(f.exponents(), e.exponents());
    }

    #[test]
    fn mismatch() {
        let a = grp(2, 2).generator(1);
        let b = grp(2, 3).generator(1);
        assert!(matches!(a.try_mul(&b), Err(Error::GroupMismatch(2, 2, 2, 3))));
        assert!(grp(2, 2).collect(&Word::parse("x1", 3).unwrap()).is_err());
    }

    #[test]
    fn shared_instances() {
        let a = NilpotentGroup::shared(2, 3).unwrap();
        let b = NilpotentGroup::shared(2, 3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
