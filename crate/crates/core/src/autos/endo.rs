use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{determinant, inverse_unimodular};
use crate::nilpotent::{Group, NilElement, Node};
use crate::words::Word;

/// An endomorphism of `N_{n,k}`, given by the images of the generators.
///
/// Maps compose left to right: in `a.compose(&b)`, `a` acts first.
#[derive(Clone)]
pub struct Endo {
    group: Group,
    images: Vec<NilElement>,
    matrix: Vec<Vec<BigInt>>,
    basis_images: OnceLock<Vec<NilElement>>,
}

impl Endo {
    pub fn new(group: &Group, images: Vec<NilElement>) -> Result<Self> {
        if images.len() != group.rank() {
            return Err(Error::RankMismatch(images.len(), group.rank()));
        }
        for g in &images {
            if !g.group().same_group(group) {
                let o = g.group();
                return Err(Error::GroupMismatch(group.rank(), group.step(), o.rank(), o.step()));
            }
        }
        let matrix = images.iter().map(|g| g.abelianization()).collect();
        Ok(Endo { group: group.clone(), images, matrix, basis_images: OnceLock::new() })
    }

    pub fn from_words(group: &Group, words: &[Word]) -> Result<Self> {
        let images = words.iter().map(|w| group.collect(w)).collect::<Result<Vec<_>>>()?;
        Endo::new(group, images)
    }

    pub fn identity(group: &Group) -> Self {
        Endo::new(group, group.generators()).expect("generators")
    }

    /// Sends `x_i` to `x_i * c_i`.
    pub fn from_tails(group: &Group, tails: &[NilElement]) -> Result<Self> {
        if tails.len() != group.rank() {
            return Err(Error::RankMismatch(tails.len(), group.rank()));
        }
        let images = group
            .generators()
            .iter()
            .zip(tails)
            .map(|(x, c)| x.try_mul(c))
            .collect::<Result<Vec<_>>>()?;
        Endo::new(group, images)
    }

    /// Sends `x_i` to `bar(q_i) x_i q_i`.
    pub fn palindromic(group: &Group, witnesses: &[NilElement]) -> Result<Self> {
        if witnesses.len() != group.rank() {
            return Err(Error::RankMismatch(witnesses.len(), group.rank()));
        }
        let images = group
            .generators()
            .iter()
            .zip(witnesses)
            .map(|(x, q)| q.bar().try_mul(x)?.try_mul(q))
            .collect::<Result<Vec<_>>>()?;
        Endo::new(group, images)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn images(&self) -> &[NilElement] {
        &self.images
    }

    /// Image of `x_i`, 1-based.
    pub fn image(&self, i: usize) -> &NilElement {
        &self.images[i - 1]
    }

    /// `x_i^-1 * x_i^phi` for each `i`.
    pub fn tails(&self) -> Vec<NilElement> {
        self.group
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(x, g)| &x.inv() * g)
            .collect()
    }

    /// Row `i` holds the abelianization of the image of `x_{i+1}`.
    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.matrix)
    }

    pub fn is_automorphism(&self) -> bool {
        self.determinant().abs().is_one()
    }

    pub fn is_identity(&self) -> bool {
        self.group.generators().iter().zip(&self.images).all(|(x, g)| x == g)
    }

    fn basis_images(&self) -> &[NilElement] {
        self.basis_images.get_or_init(|| {
            let basis = self.group.basis();
            let mut out: Vec<NilElement> = Vec::with_capacity(basis.len());
            for c in basis.elements() {
                let img = match c.node {
                    Node::Generator(i) => self.images[i - 1].clone(),
                    Node::Pair(u, v) => out[u].commutator(&out[v]),
                };
                out.push(img);
            }
            out
        })
    }

    pub fn apply(&self, g: &NilElement) -> Result<NilElement> {
        if !g.group().same_group(&self.group) {
            let o = g.group();
            return Err(Error::GroupMismatch(self.group.rank(), self.group.step(), o.rank(), o.step()));
        }
        let imgs = self.basis_images();
        let mut out = self.group.identity();
        for (j, e) in g.exponents().iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let f = if e.is_one() { imgs[j].clone() } else { imgs[j].pow(e.clone()) };
            out = &out * &f;
        }
        Ok(out)
    }

    pub fn apply_word(&self, w: &Word) -> Result<NilElement> {
        self.apply(&self.group.collect(w)?)
    }

    /// First `self`, then `other`.
    pub fn compose(&self, other: &Endo) -> Result<Endo> {
        let images = self.images.iter().map(|g| other.apply(g)).collect::<Result<Vec<_>>>()?;
        Endo::new(&self.group, images)
    }

    /// `self^m`; negative powers need an automorphism.
    pub fn pow(&self, m: i64) -> Result<Endo> {
        let base = if m < 0 { inverse(self)?.inverse } else { self.clone() };
        let mut e = m.unsigned_abs();
        let mut acc = Endo::identity(&self.group);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq)?;
            }
        }
        Ok(acc)
    }

    /// `sigma^-1 * self * sigma`.
    pub fn conjugate_by(&self, sigma: &Endo) -> Result<Endo> {
        inverse(sigma)?.inverse.compose(self)?.compose(sigma)
    }

    pub fn is_ia(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    /// `x_i^-1 x_i^phi` lies in `gamma_k` for every `i`.
    pub fn is_central(&self) -> bool {
        let k = self.group.step();
        self.tails().iter().all(|c| c.weight() >= k)
    }
}

impl PartialEq for Endo {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_group(&other.group) && self.images == other.images
    }
}

impl Eq for Endo {}

impl fmt::Debug for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Endo{:?}", self.images)
    }
}

/// Automorphism file text: one `x<i> -> <normal form>` line per generator.
impl fmt::Display for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.images.iter().enumerate() {
            writeln!(f, "x{} -> {}", i + 1, g)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseMethod {
    /// Successive elementary palindromic corrections `psi_1 ... psi_k`.
    Palindromic,
    /// Linear part from the inverse matrix, then IA corrections layer by layer.
    LayerLifting,
}

#[derive(Debug, Clone)]
pub struct Inverse {
    pub inverse: Endo,
    /// The maps whose product (left to right) is `inverse`.
    pub factors: Vec<Endo>,
    pub method: InverseMethod,
}

/// Inverse of an automorphism. Elementary palindromic automorphisms of
/// step at most 3 are inverted by palindromic corrections; everything else
/// by layer lifting.
pub fn inverse(e: &Endo) -> Result<Inverse> {
    if !e.is_automorphism() {
        return Err(Error::NotAutomorphism(e.determinant().to_string()));
    }
    if e.group.step() <= 3 {
        if let Some(w) = super::palindromic::elementary_witnesses(e)? {
            return inverse_palindromic(e, &w);
        }
    }
    inverse_layered(e)
}

/// Inverts `e`, given witnesses with `x_i^e = bar(q_i) x_i q_i`.
///
/// `psi_1` sends `x_i` to `bar(Q_i) x_i Q_i` with
/// `Q_i = x_1^{b_i1} ... x_n^{b_in}` where `[e]^-1 = 2 b + I`; each later
/// `psi_l` uses the inverses of the remaining witnesses, which lie in
/// `gamma_l`.
pub fn inverse_palindromic(e: &Endo, witnesses: &[NilElement]) -> Result<Inverse> {
    let g = &e.group;
    let n = g.rank();
    let k = g.step();
    if witnesses.len() != n {
        return Err(Error::RankMismatch(witnesses.len(), n));
    }
    if Endo::palindromic(g, witnesses)? != *e {
        return Err(Error::Precondition("witnesses do not reproduce the automorphism".into()));
    }
    let minv = inverse_unimodular(&e.matrix).ok_or_else(|| Error::NotAutomorphism(e.determinant().to_string()))?;
    let mut linear = Vec::with_capacity(n);
    for (i, row) in minv.iter().enumerate() {
        let mut beta = Vec::with_capacity(n);
        for (j, x) in row.iter().enumerate() {
            let x = if i == j { x - 1 } else { x.clone() };
            if x.is_odd() {
                return Err(Error::Precondition("inverse matrix is not I mod 2".into()));
            }
            beta.push(x / 2);
        }
        linear.push(g.from_layer(1, &beta)?);
    }
    let psi1 = Endo::palindromic(g, &linear)?;
    let mut factors = vec![psi1.clone()];
    let mut current = e.compose(&psi1)?;
    let mut q: Vec<NilElement> = linear
        .iter()
        .zip(witnesses)
        .map(|(big_q, qi)| big_q.try_mul(&psi1.apply(qi)?))
        .collect::<Result<_>>()?;
    for l in 2..=k + 1 {
        if q.iter().any(|x| x.weight() < l) {
            return Err(Error::Internal(format!("remaining witness below weight {l}")));
        }
        if Endo::palindromic(g, &q)? != current {
            return Err(Error::Internal("witness bookkeeping diverged".into()));
        }
        if q.iter().all(NilElement::is_identity) {
            break;
        }
        let inv_q: Vec<NilElement> = q.iter().map(NilElement::inv).collect();
        let psi = Endo::palindromic(g, &inv_q)?;
        current = current.compose(&psi)?;
        q = inv_q.iter().zip(&q).map(|(a, b)| a.try_mul(&psi.apply(b)?)).collect::<Result<_>>()?;
        factors.push(psi);
    }
    let inverse = factors.iter().skip(1).try_fold(factors[0].clone(), |acc, f| acc.compose(f))?;
    check_inverse(e, &inverse)?;
    Ok(Inverse { inverse, factors, method: InverseMethod::Palindromic })
}

/// Inverts any automorphism by lifting through the lower central layers.
pub fn inverse_layered(e: &Endo) -> Result<Inverse> {
    let g = &e.group;
    let minv = inverse_unimodular(&e.matrix).ok_or_else(|| Error::NotAutomorphism(e.determinant().to_string()))?;
    let linear = minv.iter().map(|row| g.from_layer(1, row)).collect::<Result<Vec<_>>>()?;
    let theta = Endo::new(g, linear)?;
    let mut factors = vec![theta.clone()];
    let mut current = e.compose(&theta)?;
    for _ in 2..=g.step() {
        if current.is_identity() {
            break;
        }
        let tails: Vec<NilElement> = current.tails().iter().map(NilElement::inv).collect();
        let rho = Endo::from_tails(g, &tails)?;
        current = current.compose(&rho)?;
        factors.push(rho);
    }
    let inverse = factors.iter().skip(1).try_fold(factors[0].clone(), |acc, f| acc.compose(f))?;
    check_inverse(e, &inverse)?;
    Ok(Inverse { inverse, factors, method: InverseMethod::LayerLifting })
}

fn check_inverse(e: &Endo, inv: &Endo) -> Result<()> {
    if e.compose(inv)?.is_identity() && inv.compose(e)?.is_identity() {
        Ok(())
    } else {
        Err(Error::Internal("computed inverse does not round-trip".into()))
    }
}
