//! Free nilpotent groups `N_{n,k}` in Hall normal form.

mod group;
pub mod hall;
pub(crate) mod magnus;

pub use group::{exponent_norm, Group, NilElement, NilpotentGroup};
pub use hall::{hall_basis, witt_number, BasicCommutator, HallBasis, Node};

use crate::error::{Error, Result};

/// The central element `w_{2k}` built from `y_1..y_{2k}`:
/// `w_2 = [y_1, y_2, y_1 y_2]` and
/// `w_{2k+2} = [w_{2k}, y_{2k+1}, y_{2k+2}] [y_1, .., y_{2k}, y_{2k+1}, y_{2k+1} y_{2k+2}, y_{2k+2}]`.
pub fn w2k(y: &[NilElement]) -> Result<NilElement> {
    if y.len() < 2 || !y.len().is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!(
            "need an even number (>= 2) of elements, got {}",
            y.len()
        )));
    }
    let mut w = NilElement::left_normed(&[y[0].clone(), y[1].clone(), y[0].try_mul(&y[1])?])?;
    for m in (2..y.len()).step_by(2) {
        let (a, b) = (&y[m], &y[m + 1]);
        let first = NilElement::left_normed(&[w, a.clone(), b.clone()])?;
        let mut args = y[..m].to_vec();
        args.extend([a.clone(), a.try_mul(b)?, b.clone()]);
        w = first.try_mul(&NilElement::left_normed(&args)?)?;
    }
    Ok(w)
}

/// Checks `[y_1, .., y_{2k}] * bar([y_1, .., y_{2k}]) = w_{2k}` in the
/// group of the arguments, which must have step `2k + 1`.
pub fn verify_w2k(y: &[NilElement]) -> Result<bool> {
    let first = y.first().ok_or_else(|| Error::InvalidParameters("no elements".into()))?;
    if first.group().step() != y.len() + 1 {
        return Err(Error::InvalidParameters(format!(
            "{} elements need step {}, group has step {}",
            y.len(),
            y.len() + 1,
            first.group().step()
        )));
    }
    let z = NilElement::left_normed(y)?;
    Ok(z.try_mul(&z.bar())? == w2k(y)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w2_examples() {
        let g = NilpotentGroup::new(2, 3).unwrap();
        let (x1, x2) = (g.generator(1), g.generator(2));
        assert!(verify_w2k(&[x1.clone(), x2.clone()]).unwrap());
        assert_eq!(w2k(&[x1.clone(), x2.clone()]).unwrap(), g.parse("[x1,x2,x1 x2]").unwrap());
        assert!(verify_w2k(&[x1.clone(), x1.clone()]).unwrap());
        assert!(w2k(&[x1.clone(), x1.clone()]).unwrap().is_identity());
        assert!(verify_w2k(std::slice::from_ref(&x1)).is_err());
        assert!(verify_w2k(&[x1.clone(), x2, x1.clone(), x1]).is_err());
    }

    #[test]
    fn w4_example() {
        let g = NilpotentGroup::new(2, 5).unwrap();
        let (x1, x2) = (g.generator(1), g.generator(2));
        assert!(verify_w2k(&[x1.clone(), x2.clone(), x1, x2]).unwrap());
    }
}
