//! The quotient `Z F_n / R` with `R = [D,D] + D^3`, `D` the augmentation
//! ideal, and Fox derivatives computed in it.
//!
//! Modulo `R` the ring is commutative and spanned by `1`, `X_i = x_i - 1`
//! and the products `X_i X_j` (`i <= j`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::nilpotent::NilpotentGroup;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElemModR {
    n: usize,
    constant: BigInt,
    linear: Vec<BigInt>,
    /// Upper triangle, row-major: pairs `(i, j)` with `i <= j`.
    quadratic: Vec<BigInt>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

impl RingElemModR {
    pub fn zero(n: usize) -> Self {
        RingElemModR {
            n,
            constant: BigInt::zero(),
            linear: vec![BigInt::zero(); n],
            quadratic: vec![BigInt::zero(); n * (n + 1) / 2],
        }
    }

    pub fn one(n: usize) -> Self {
        Self::from_integer(n, 1)
    }

    pub fn from_integer(n: usize, c: impl Into<BigInt>) -> Self {
        let mut r = Self::zero(n);
        r.constant = c.into();
        r
    }

    /// `x_i - 1`, 1-based.
    pub fn delta(n: usize, i: usize) -> Self {
        let mut r = Self::zero(n);
        r.linear[i - 1] = BigInt::one();
        r
    }

    /// `(x_i - 1)(x_j - 1)`, 1-based.
    pub fn delta2(n: usize, i: usize, j: usize) -> Self {
        let mut r = Self::zero(n);
        r.quadratic[pair_index(n, i - 1, j - 1)] = BigInt::one();
        r
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn constant(&self) -> &BigInt {
        &self.constant
    }

    /// Coefficient of `x_i - 1`, 1-based.
    pub fn linear(&self, i: usize) -> &BigInt {
        &self.linear[i - 1]
    }

    /// Coefficient of `(x_i - 1)(x_j - 1)`, 1-based, symmetric in `i, j`.
    pub fn quadratic(&self, i: usize, j: usize) -> &BigInt {
        &self.quadratic[pair_index(self.n, i - 1, j - 1)]
    }

    /// The quadratic part as a full symmetric matrix (0-based).
    pub fn quadratic_matrix(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.quadratic[pair_index(self.n, i, j)].clone()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero()
            && self.linear.iter().all(Zero::is_zero)
            && self.quadratic.iter().all(Zero::is_zero)
    }

    /// Nonzero quadratic coefficients `((i, j), c)` with `i <= j`, 1-based,
    /// in lexicographic pair order.
    pub fn quadratic_terms(&self) -> Vec<((usize, usize), BigInt)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                let c = &self.quadratic[pair_index(self.n, i, j)];
                if !c.is_zero() {
                    out.push(((i + 1, j + 1), c.clone()));
                }
            }
        }
        out
    }

    /// Residue report: `(i,j): c` lines for the nonzero quadratic part.
    pub fn residue_report(&self) -> String {
        self.quadratic_terms()
            .iter()
            .map(|((i, j), c)| format!("({i},{j}): {c}"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::RankMismatch(self.n, other.n))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let zip = |a: &[BigInt], b: &[BigInt]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(RingElemModR {
            n: self.n,
            constant: &self.constant + &other.constant,
            linear: zip(&self.linear, &other.linear),
            quadratic: zip(&self.quadratic, &other.quadratic),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.n;
        let (c, d) = (&self.constant, &other.constant);
        let mut r = Self::zero(n);
        r.constant = c * d;
        for i in 0..n {
            r.linear[i] = c * &other.linear[i] + d * &self.linear[i];
        }
        for p in 0..r.quadratic.len() {
            r.quadratic[p] = c * &other.quadratic[p] + d * &self.quadratic[p];
        }
        for i in 0..n {
            if self.linear[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !other.linear[j].is_zero() {
                    r.quadratic[pair_index(n, i, j)] += &self.linear[i] * &other.linear[j];
                }
            }
        }
        Ok(r)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        RingElemModR {
            n: self.n,
            constant: &self.constant * k,
            linear: self.linear.iter().map(|x| x * k).collect(),
            quadratic: self.quadratic.iter().map(|x| x * k).collect(),
        }
    }
}

impl Add for &RingElemModR {
    type Output = RingElemModR;

    fn add(self, rhs: &RingElemModR) -> RingElemModR {
        self.try_add(rhs).expect("same rank")
    }
}

impl Sub for &RingElemModR {
    type Output = RingElemModR;

    fn sub(self, rhs: &RingElemModR) -> RingElemModR {
        self + &-rhs
    }
}

impl Neg for &RingElemModR {
    type Output = RingElemModR;

    fn neg(self) -> RingElemModR {
        self.scale(&-BigInt::one())
    }
}

impl Mul for &RingElemModR {
    type Output = RingElemModR;

    fn mul(self, rhs: &RingElemModR) -> RingElemModR {
        self.try_mul(rhs).expect("same rank")
    }
}

/// Renders as a polynomial in `X_i = x_i - 1`, e.g. `1 + X1 - 2*X1*X2`.
impl fmt::Display for RingElemModR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(BigInt, String)> = Vec::new();
        if !self.constant.is_zero() {
            terms.push((self.constant.clone(), String::new()));
        }
        for (i, c) in self.linear.iter().enumerate() {
            if !c.is_zero() {
                terms.push((c.clone(), format!("X{}", i + 1)));
            }
        }
        for ((i, j), c) in self.quadratic_terms() {
            let mono = if i == j { format!("X{i}^2") } else { format!("X{i}*X{j}") };
            terms.push((c, mono));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, mono)) in terms.iter().enumerate() {
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn embed_letter(n: usize, l: Letter) -> RingElemModR {
    let i = l.index();
    let mut r = RingElemModR::one(n);
    if l.is_inverse() {
        r.linear[i - 1] = -BigInt::one();
        r.quadratic[pair_index(n, i - 1, i - 1)] = BigInt::one();
    } else {
        r.linear[i - 1] = BigInt::one();
    }
    r
}

/// Image of `w` in `Z F_n / R`.
pub fn embed(w: &Word) -> RingElemModR {
    let n = w.rank();
    w.letters()
        .iter()
        .fold(RingElemModR::one(n), |acc, &l| &acc * &embed_letter(n, l))
}

/// `d_j(w)` modulo `R`, by the product rule folded left to right.
pub fn fox_derivative(w: &Word, j: usize) -> Result<RingElemModR> {
    let n = w.rank();
    if !(1..=n).contains(&j) {
        return Err(Error::IndexOutOfRank { index: j, rank: n });
    }
    let mut prefix = RingElemModR::one(n);
    let mut acc = RingElemModR::zero(n);
    for &l in w.letters() {
        let e = embed_letter(n, l);
        if l.index() == j {
            // d_j(x_j) = 1, d_j(x_j^-1) = -x_j^-1.
            let d = if l.is_inverse() { -&e } else { RingElemModR::one(n) };
            acc = &acc + &(&prefix * &d);
        }
        prefix = &prefix * &e;
    }
    Ok(acc)
}

/// Outcome of the tameness condition `sum_i d_i(w_i) = 0 mod R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BglmResult {
    pub holds: bool,
    /// `sum_i d_i(w_i)`; only its quadratic part can be nonzero.
    pub sum: RingElemModR,
}

/// Evaluates `d_1 w_1 + ... + d_n w_n` mod `R` for words representing
/// elements of `gamma_3 F_n`.
pub fn bglm_sum(w: &[Word]) -> Result<BglmResult> {
    let n = w.len();
    if n == 0 {
        return Err(Error::InvalidParameters("need one word per generator".into()));
    }
    let g2 = NilpotentGroup::shared(n, 2)?;
    let mut sum = RingElemModR::zero(n);
    for (i, wi) in w.iter().enumerate() {
        if wi.rank() != n {
            return Err(Error::RankMismatch(wi.rank(), n));
        }
        if !g2.collect(wi)?.is_identity() {
            return Err(Error::Precondition(format!("w{} = {wi} is not in gamma_3", i + 1)));
        }
        sum = &sum + &fox_derivative(wi, i + 1)?;
    }
    if !sum.constant.is_zero() || sum.linear.iter().any(|c| !c.is_zero()) {
        return Err(Error::Internal(format!("derivative sum of gamma_3 words has low-degree part: {sum}")));
    }
    Ok(BglmResult { holds: sum.is_zero(), sum })
}

pub fn bglm_condition(w: &[Word]) -> Result<bool> {
    Ok(bglm_sum(w)?.holds)
}

/// One congruence of the table of derivatives of weight-3 commutators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoxRow {
    pub label: &'static str,
    pub assignments: usize,
    pub failures: Vec<String>,
}

impl FoxRow {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
enum Expected {
    Zero,
    Pair(i64, char, char),
}

/// Table rows: commutator pattern over the letters `i, a, b, c`, derivative
/// index `i`, and expected value. Distinct letters are distinct indices.
const TABLE: [(&str, [char; 3], Expected); 8] = [
    ("d_i[x_a,x_b,x_c] = 0", ['a', 'b', 'c'], Expected::Zero),
    ("d_i[x_a,x_b,x_i] = 0", ['a', 'b', 'i'], Expected::Zero),
    ("d_i[x_i,x_a,x_b] = (x_a-1)(x_b-1)", ['i', 'a', 'b'], Expected::Pair(1, 'a', 'b')),
    ("d_i[x_a,x_i,x_b] = -(x_a-1)(x_b-1)", ['a', 'i', 'b'], Expected::Pair(-1, 'a', 'b')),
    ("d_i[x_i,x_a,x_i] = (x_i-1)(x_a-1)", ['i', 'a', 'i'], Expected::Pair(1, 'i', 'a')),
    ("d_i[x_a,x_i,x_i] = -(x_i-1)(x_a-1)", ['a', 'i', 'i'], Expected::Pair(-1, 'i', 'a')),
    ("d_i[x_i,x_a,x_a] = (x_a-1)^2", ['i', 'a', 'a'], Expected::Pair(1, 'a', 'a')),
    ("d_i[x_a,x_i,x_a] = -(x_a-1)^2", ['a', 'i', 'a'], Expected::Pair(-1, 'a', 'a')),
];

/// Evaluates every row of the table for all injective assignments of its
/// letters to `1..=n`.
pub fn check_fox_table(n: usize) -> Result<Vec<FoxRow>> {
    if n == 0 {
        return Err(Error::InvalidParameters("rank must be positive".into()));
    }
    let mut rows = Vec::new();
    for (label, pattern, expected) in TABLE {
        let mut letters: Vec<char> = vec!['i'];
        for &c in &pattern {
            if !letters.contains(&c) {
                letters.push(c);
            }
        }
        let mut row = FoxRow { label, assignments: 0, failures: Vec::new() };
        for assign in injections(letters.len(), n) {
            let idx = |c: char| assign[letters.iter().position(|&l| l == c).unwrap()];
            let gens: Vec<Word> = pattern
                .iter()
                .map(|&c| Word::generator(n, idx(c)))
                .collect::<Result<_>>()?;
            let w = Word::left_normed(&gens)?;
            let got = fox_derivative(&w, idx('i'))?;
            let want = match expected {
                Expected::Zero => RingElemModR::zero(n),
                Expected::Pair(s, p, q) => RingElemModR::delta2(n, idx(p), idx(q)).scale(&BigInt::from(s)),
            };
            row.assignments += 1;
            if got != want {
                let names: Vec<String> = letters.iter().map(|&c| format!("{c}={}", idx(c))).collect();
                row.failures.push(format!("{}: got {got}, expected {want}", names.join(",")));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// All injective maps `{0..m} -> {1..=n}` in lexicographic order.
fn injections(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !cur.contains(&v) {
                cur.push(v);
                rec(m, n, cur, out);
                cur.pop();
            }
        }
    }
    rec(m, n, &mut cur, &mut out);
    out
}
