//! The truncated free associative algebra `Z<X_1..X_n> / (degree > k)`.
//!
//! `x_i -> 1 + X_i` embeds `N_{n,k}` faithfully into its unit group, so group
//! arithmetic is done here and normal forms are read back layer by layer.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub(crate) struct Algebra {
    pub n: usize,
    pub k: usize,
    /// `offsets[d]` is the position of the first degree-`d` monomial.
    pub offsets: Vec<usize>,
    /// `pows[d] = n^d`.
    pub pows: Vec<usize>,
    /// Monomial reversal, as a permutation of positions.
    reversal: Vec<usize>,
}

/// Coefficients indexed by monomial position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Series(pub Vec<BigInt>);

impl Algebra {
    pub fn new(n: usize, k: usize) -> Self {
        let mut pows = vec![1usize];
        for _ in 0..k {
            pows.push(pows.last().unwrap() * n);
        }
        let mut offsets = vec![0usize];
        for d in 0..=k {
            offsets.push(offsets[d] + pows[d]);
        }
        let mut reversal = Vec::with_capacity(offsets[k + 1]);
        for d in 0..=k {
            for m in 0..pows[d] {
                let mut r = 0;
                let mut x = m;
                for _ in 0..d {
                    r = r * n + x % n;
                    x /= n;
                }
                reversal.push(offsets[d] + r);
            }
        }
        Algebra { n, k, offsets, pows, reversal }
    }

    pub fn dim(&self) -> usize {
        self.offsets[self.k + 1]
    }

    pub fn zero(&self) -> Series {
        Series(vec![BigInt::zero(); self.dim()])
    }

    pub fn one(&self) -> Series {
        let mut s = self.zero();
        s.0[0] = BigInt::one();
        s
    }

    /// `1 + X_i`, or its inverse `sum_m (-X_i)^m`.
    pub fn generator(&self, i: usize, inverse: bool) -> Series {
        let mut s = self.one();
        let mut pos = 0usize;
        for d in 1..=self.k {
            pos = pos * self.n + i;
            s.0[self.offsets[d] + pos] =
                if inverse && d % 2 == 1 { -BigInt::one() } else { BigInt::one() };
            if !inverse && d == 1 {
                break;
            }
        }
        s
    }

    pub fn degree<'a>(&self, s: &'a Series, d: usize) -> &'a [BigInt] {
        &s.0[self.offsets[d]..self.offsets[d + 1]]
    }

    pub fn mul(&self, a: &Series, b: &Series) -> Series {
        let mut c = self.zero();
        for d1 in 0..=self.k {
            let a_deg = &a.0[self.offsets[d1]..self.offsets[d1 + 1]];
            for (m1, x) in a_deg.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let unit = x.is_one();
                for d2 in 0..=(self.k - d1) {
                    let base = self.offsets[d1 + d2] + m1 * self.pows[d2];
                    let b_deg = &b.0[self.offsets[d2]..self.offsets[d2 + 1]];
                    for (m2, y) in b_deg.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        if unit {
                            c.0[base + m2] += y;
                        } else {
                            c.0[base + m2] += x * y;
                        }
                    }
                }
            }
        }
        c
    }

    /// `s - 1` has no terms below this degree; `k + 1` when `s == 1`.
    pub fn valuation(&self, s: &Series) -> usize {
        for d in 1..=self.k {
            if self.degree(s, d).iter().any(|c| !c.is_zero()) {
                return d;
            }
        }
        self.k + 1
    }

    /// Powers `N, N^2, ...` of `N = unit - 1` until they vanish.
    pub fn nil_powers(&self, unit: &Series) -> Vec<Series> {
        let mut nil = unit.clone();
        nil.0[0] -= 1;
        let v = self.valuation(unit);
        let mut out = Vec::new();
        if v > self.k {
            return out;
        }
        out.push(nil.clone());
        let mut m = 1;
        while (m + 1) * v <= self.k {
            let next = self.mul(out.last().unwrap(), &nil);
            out.push(next);
            m += 1;
        }
        out
    }

    /// `(1 + N)^e = sum_m binom(e, m) N^m`, valid for every integer `e`.
    pub fn pow_from_nil(&self, nil_powers: &[Series], e: &BigInt) -> Series {
        let mut s = self.one();
        if e.is_zero() {
            return s;
        }
        let mut binom = BigInt::one();
        for (m, np) in nil_powers.iter().enumerate() {
            let m = m as i64;
            binom = binom * (e - m) / (m + 1);
            if binom.is_zero() {
                break;
            }
            for (c, x) in s.0.iter_mut().zip(&np.0) {
                if !x.is_zero() {
                    *c += &binom * x;
                }
            }
        }
        s
    }

    pub fn pow(&self, unit: &Series, e: &BigInt) -> Series {
        self.pow_from_nil(&self.nil_powers(unit), e)
    }

    pub fn inverse(&self, unit: &Series) -> Series {
        self.pow(unit, &-BigInt::one())
    }

    /// Reverses every monomial; an anti-automorphism of the algebra.
    pub fn reverse(&self, s: &Series) -> Series {
        let mut out = self.zero();
        for (p, c) in s.0.iter().enumerate() {
            if !c.is_zero() {
                out.0[self.reversal[p]] = c.clone();
            }
        }
        out
    }

    pub fn is_one(&self, s: &Series) -> bool {
        s.0[0].is_one() && s.0[1..].iter().all(|c| c.is_zero())
    }

    /// Largest absolute coefficient, for diagnostics.
    #[allow(dead_code)]
    pub fn height(&self, s: &Series) -> BigInt {
        s.0.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_inverse() {
        let alg = Algebra::new(2, 4);
        for i in 0..2 {
            let g = alg.generator(i, false);
            let gi = alg.generator(i, true);
            assert!(alg.is_one(&alg.mul(&g, &gi)));
            assert!(alg.is_one(&alg.mul(&gi, &g)));
            assert_eq!(alg.inverse(&g), gi);
        }
    }

    #[test]
    fn powers() {
        let alg = Algebra::new(2, 3);
        let g = alg.mul(&alg.generator(0, false), &alg.generator(1, true));
        let g3 = alg.mul(&alg.mul(&g, &g), &g);
        assert_eq!(alg.pow(&g, &BigInt::from(3)), g3);
        let gm2 = alg.pow(&g, &BigInt::from(-2));
        assert!(alg.is_one(&alg.mul(&gm2, &alg.mul(&g, &g))));
    }

    #[test]
    fn reversal_is_antihomomorphism() {
        let alg = Algebra::new(3, 3);
        let a = alg.mul(&alg.generator(0, false), &alg.generator(2, true));
        let b = alg.mul(&alg.generator(1, false), &alg.generator(0, false));
        assert_eq!(alg.reverse(&alg.mul(&a, &b)), alg.mul(&alg.reverse(&b), &alg.reverse(&a)));
        assert_eq!(alg.reverse(&alg.reverse(&a)), a);
    }
}
