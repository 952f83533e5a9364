use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::endo::Endo;
use crate::error::{Error, Result};
use crate::lattice::SmithForm;
use crate::nilpotent::NilElement;

fn check_step(k: usize) -> Result<()> {
    if k > 3 {
        Err(Error::Undecided(k))
    } else {
        Ok(())
    }
}

/// Finds `q` of weight at least `min_weight` with `bar(q) x_i q = g`.
///
/// Decided layer by layer (step at most 3): the abelianization fixes the
/// linear part of `q`; the weight-2 part of `g` is then forced; the
/// weight-3 remainder must lie in the lattice spanned by the effects of
/// weight-2 corrections and by doubled basis vectors.
pub fn solve_conjugator(g: &NilElement, i: usize, min_weight: usize) -> Result<Option<NilElement>> {
    let grp = g.group();
    let (n, k) = (grp.rank(), grp.step());
    if k > 3 {
        return Err(Error::Unsupported(format!("conjugator search needs step <= 3, got {k}")));
    }
    if !(1..=n).contains(&i) {
        return Err(Error::IndexOutOfRank { index: i, rank: n });
    }
    if !(1..=k + 1).contains(&min_weight) {
        return Err(Error::InvalidParameters(format!("minimum weight {min_weight} outside 1..={}", k + 1)));
    }
    let x = grp.generator(i);
    if min_weight == k + 1 {
        return Ok((*g == x).then(|| grp.identity()));
    }

    let mut alpha = g.abelianization();
    alpha[i - 1] -= 1;
    if alpha.iter().any(Integer::is_odd) {
        return Ok(None);
    }
    for a in alpha.iter_mut() {
        *a /= 2;
    }
    if min_weight >= 2 && alpha.iter().any(|a| !a.is_zero()) {
        return Ok(None);
    }
    let q1 = grp.from_layer(1, &alpha)?;
    let y = &(&q1.bar() * &x) * &q1;
    let r = &y.inv() * g;
    if !r.is_identity() && r.weight() <= 2 {
        return Ok(None);
    }
    if k <= 2 {
        return Ok(Some(q1));
    }

    let rv = r.layer(3).to_vec();
    let q = if rv.iter().all(Integer::is_even) {
        let half: Vec<BigInt> = rv.iter().map(|c| c / 2).collect();
        &q1 * &grp.from_layer(3, &half)?
    } else if min_weight >= 3 {
        return Ok(None);
    } else {
        let d2 = grp.basis().layer_len(2);
        let d3 = rv.len();
        let yinv = y.inv();
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(d2 + d3);
        for j in grp.basis().layer(2) {
            let b = grp.basis_element(j);
            let l = &(&(&yinv * &b.bar()) * &y) * &b;
            rows.push(l.layer(3).to_vec());
        }
        for c in 0..d3 {
            let mut row = vec![BigInt::zero(); d3];
            row[c] = BigInt::from(2);
            rows.push(row);
        }
        let Ok(sol) = SmithForm::new(&rows, d3).solve(&rv) else { return Ok(None) };
        let c2 = grp.from_layer(2, &sol[..d2])?;
        let c3 = grp.from_layer(3, &sol[d2..])?;
        &(&q1 * &c2) * &c3
    };
    if &(&q.bar() * &x) * &q != *g {
        return Err(Error::Internal(format!("conjugator for x{i} does not reproduce {g}")));
    }
    Ok(Some(q))
}

/// Witnesses `q_i` with `x_i^e = bar(q_i) x_i q_i`, or `None` if `e` is not
/// elementary palindromic.
pub fn elementary_witnesses(e: &Endo) -> Result<Option<Vec<NilElement>>> {
    witnesses_at(e, 1)
}

fn witnesses_at(e: &Endo, min_weight: usize) -> Result<Option<Vec<NilElement>>> {
    check_step(e.group().step())?;
    let mut out = Vec::with_capacity(e.rank());
    for i in 1..=e.rank() {
        match solve_conjugator(e.image(i), i, min_weight)? {
            Some(q) => out.push(q),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Largest `l` such that witnesses can all be chosen in `gamma_l`
/// (`k + 1` for the identity); `None` if `e` is not elementary palindromic.
pub fn pi_level(e: &Endo) -> Result<Option<usize>> {
    let k = e.group().step();
    check_step(k)?;
    let mut level = k + 1;
    for i in 1..=e.rank() {
        let best = (1..=k + 1)
            .rev()
            .find_map(|l| match solve_conjugator(e.image(i), i, l) {
                Ok(Some(_)) => Some(Ok(l)),
                Ok(None) => None,
                Err(err) => Some(Err(err)),
            })
            .transpose()?;
        match best {
            Some(l) => level = level.min(l),
            None => return Ok(None),
        }
    }
    Ok(Some(level))
}

/// A signed permutation `x_i -> x_{perm[i]}^{sign[i]}` together with
/// witnesses `q_i` such that `x_i^e = bar(q_i) x_{perm[i]}^{sign[i]} q_i`.
#[derive(Debug, Clone)]
pub struct PalindromicShape {
    pub perm: Vec<usize>,
    pub signs: Vec<i32>,
    pub witnesses: Vec<NilElement>,
}

/// Writes `e` as an elementary palindromic map followed by a signed
/// permutation, if possible.
pub fn palindromic_shape(e: &Endo) -> Result<Option<PalindromicShape>> {
    check_step(e.group().step())?;
    let n = e.rank();
    let mut perm = Vec::with_capacity(n);
    for row in e.matrix() {
        let odd: Vec<usize> = (0..n).filter(|&j| row[j].is_odd()).collect();
        if odd.len() != 1 {
            return Ok(None);
        }
        perm.push(odd[0] + 1);
    }
    let mut seen = perm.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != n {
        return Ok(None);
    }
    let mut signs = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for i in 1..=n {
        let g = e.image(i);
        let c = perm[i - 1];
        if let Some(q) = solve_conjugator(g, c, 1)? {
            signs.push(1);
            witnesses.push(q);
        } else if let Some(p) = solve_conjugator(&g.inv(), c, 1)? {
            // g = p^-1 x^-1 bar(p)^-1 = bar(q) x^-1 q with q = bar(p)^-1.
            signs.push(-1);
            witnesses.push(p.bar().inv());
        } else {
            return Ok(None);
        }
    }
    Ok(Some(PalindromicShape { perm, signs, witnesses }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub is_ia: bool,
    pub is_central: bool,
    pub is_palindromic: bool,
    pub is_elementary_palindromic: bool,
    pub pi_level: Option<usize>,
    /// Set when `[e]` is the identity mod 2 but no witnesses exist.
    pub diagnostic: Option<String>,
}

pub fn classify(e: &Endo) -> Result<Classification> {
    if !e.is_automorphism() {
        return Err(Error::NotAutomorphism(e.determinant().to_string()));
    }
    check_step(e.group().step())?;
    let pi = pi_level(e)?;
    let elementary = pi.is_some();
    let parity_ok = parity_criterion(e);
    let diagnostic = (parity_ok && !elementary).then(|| {
        let bad: Vec<String> = (1..=e.rank())
            .filter(|&i| matches!(solve_conjugator(e.image(i), i, 1), Ok(None)))
            .map(|i| format!("x{i}"))
            .collect();
        format!(
            "matrix is the identity mod 2 but the commutator part of {} is not palindromic",
            bad.join(", ")
        )
    });
    Ok(Classification {
        is_ia: e.is_ia(),
        is_central: e.is_central(),
        is_palindromic: palindromic_shape(e)?.is_some(),
        is_elementary_palindromic: elementary,
        pi_level: pi,
        diagnostic,
    })
}

/// Matrix is the identity mod 2.
pub fn parity_criterion(e: &Endo) -> bool {
    e.matrix().iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| if i == j { x.is_odd() } else { x.is_even() })
    })
}
