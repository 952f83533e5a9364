//! Hall basic commutators.
//!
//! The basis is ordered weight-major; within a weight, pairs are ordered
//! lexicographically by the basis positions of their constituents. A pair
//! `(u, v)` is basic when `u > v` and, if `u = (s, t)`, also `t <= v`.
//! With this order `[x_a, x_b]` is basic iff `a > b` and `[x_a, x_b, x_c]`
//! is basic iff `a > b` and `c >= b`.

use std::fmt;

use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    /// Generator `x_i`, 1-based.
    Generator(usize),
    /// `[left, right]`, as positions in the basis.
    Pair(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicCommutator {
    pub node: Node,
    pub weight: usize,
}

#[derive(Debug, Clone)]
pub struct HallBasis {
    rank: usize,
    step: usize,
    elements: Vec<BasicCommutator>,
    /// `layer_start[w]..layer_start[w + 1]` are the elements of weight `w`.
    layer_start: Vec<usize>,
}

impl HallBasis {
    pub fn new(rank: usize, step: usize) -> Result<Self> {
        if rank == 0 || step == 0 {
            return Err(Error::InvalidParameters(format!(
                "rank and step must be positive (got n={rank}, k={step})"
            )));
        }
        let mut elements: Vec<BasicCommutator> = (1..=rank)
            .map(|i| BasicCommutator { node: Node::Generator(i), weight: 1 })
            .collect();
        let mut layer_start = vec![0, 0, rank];
        for w in 2..=step {
            let mut layer = Vec::new();
            for (u, cu) in elements.iter().enumerate() {
                for (v, cv) in elements.iter().enumerate().take(u) {
                    if cu.weight + cv.weight != w {
                        continue;
                    }
                    let hall_ok = match cu.node {
                        Node::Generator(_) => true,
                        Node::Pair(_, t) => t <= v,
                    };
                    if hall_ok {
                        layer.push((u, v));
                    }
                }
            }
            layer.sort_unstable();
            elements.extend(
                layer.into_iter().map(|(u, v)| BasicCommutator { node: Node::Pair(u, v), weight: w }),
            );
            layer_start.push(elements.len());
        }
        Ok(HallBasis { rank, step, elements, layer_start })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasicCommutator] {
        &self.elements
    }

    pub fn get(&self, j: usize) -> &BasicCommutator {
        &self.elements[j]
    }

    /// Basis positions of the elements of weight `w`.
    pub fn layer(&self, w: usize) -> std::ops::Range<usize> {
        assert!((1..=self.step).contains(&w), "weight {w} outside 1..={}", self.step);
        self.layer_start[w]..self.layer_start[w + 1]
    }

    pub fn layer_len(&self, w: usize) -> usize {
        self.layer(w).len()
    }

    /// Position of a left-normed commutator of generators `[x_{i1}, ..., x_{im}]`
    /// if it is basic.
    pub fn find_left_normed(&self, indices: &[usize]) -> Option<usize> {
        let (&first, rest) = indices.split_first()?;
        let mut cur = self.elements.iter().position(|c| c.node == Node::Generator(first))?;
        for &i in rest {
            let g = self.elements.iter().position(|c| c.node == Node::Generator(i))?;
            cur = self.elements.iter().position(|c| c.node == Node::Pair(cur, g))?;
        }
        Some(cur)
    }

    /// The element as a commutator word in `F_n`.
    pub fn word(&self, j: usize) -> Word {
        match self.elements[j].node {
            Node::Generator(i) => Word::generator(self.rank, i).expect("index in range"),
            Node::Pair(u, v) => self.word(u).commutator(&self.word(v)).expect("same rank"),
        }
    }

    pub fn display(&self, j: usize) -> BasisDisplay<'_> {
        BasisDisplay { basis: self, j }
    }

    fn write_inner(&self, f: &mut fmt::Formatter<'_>, j: usize) -> fmt::Result {
        match self.elements[j].node {
            Node::Generator(i) => write!(f, "x{i}"),
            Node::Pair(u, v) => {
                self.write_inner(f, u)?;
                write!(f, ",")?;
                self.write_full(f, v)
            }
        }
    }

    fn write_full(&self, f: &mut fmt::Formatter<'_>, j: usize) -> fmt::Result {
        match self.elements[j].node {
            Node::Generator(i) => write!(f, "x{i}"),
            Node::Pair(..) => {
                write!(f, "[")?;
                self.write_inner(f, j)?;
                write!(f, "]")
            }
        }
    }
}

/// Left-normed rendering, e.g. `[x2,x1,x1]` or `[x3,x1,[x2,x1]]`.
pub struct BasisDisplay<'a> {
    basis: &'a HallBasis,
    j: usize,
}

impl fmt::Display for BasisDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.basis.write_full(f, self.j)
    }
}

/// Witt's count of basic commutators of weight `w` on `n` generators,
/// `(1/w) * sum_{d | w} mobius(d) * n^(w/d)`.
pub fn witt_number(n: u64, w: u64) -> u64 {
    assert!(w >= 1);
    let mut total: i128 = 0;
    for d in 1..=w {
        if w.is_multiple_of(d) {
            total += mobius(d) as i128 * (n as i128).pow((w / d) as u32);
        }
    }
    (total / w as i128) as u64
}

fn mobius(mut d: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            d /= p;
            if d.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if d > 1 {
        result = -result;
    }
    result
}

pub fn hall_basis(n: usize, k: usize) -> Result<HallBasis> {
    HallBasis::new(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(b: &HallBasis) -> Vec<String> {
        (0..b.len()).map(|j| b.display(j).to_string()).collect()
    }

    #[test]
    fn small_bases() {
        let b = HallBasis::new(2, 3).unwrap();
        assert_eq!(names(&b), ["x1", "x2", "[x2,x1]", "[x2,x1,x1]", "[x2,x1,x2]"]);
        assert_eq!(HallBasis::new(3, 2).unwrap().len(), 6);
        assert_eq!(names(&HallBasis::new(2, 1).unwrap()), ["x1", "x2"]);
    }

    #[test]
    fn weight_three_index_pattern() {
        let b = HallBasis::new(4, 3).unwrap();
        for j in b.layer(3) {
            let Node::Pair(u, c) = b.get(j).node else { unreachable!() };
            let Node::Pair(a, bb) = b.get(u).node else { unreachable!() };
            let idx = |p: usize| match b.get(p).node {
                Node::Generator(i) => i,
                _ => unreachable!(),
            };
            assert!(idx(a) > idx(bb) && idx(c) >= idx(bb));
        }
    }

    #[test]
    fn witt_counts() {
        assert_eq!(witt_number(2, 1), 2);
        assert_eq!(witt_number(2, 2), 1);
        assert_eq!(witt_number(3, 3), 8);
        assert_eq!(witt_number(3, 5), 48);
        assert_eq!(witt_number(2, 6), 9);
        for n in 1..=4 {
            for k in 1..=5 {
                let b = HallBasis::new(n, k).unwrap();
                for w in 1..=k {
                    assert_eq!(b.layer_len(w) as u64, witt_number(n as u64, w as u64), "n={n} w={w}");
                }
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(HallBasis::new(0, 2).is_err());
        assert!(HallBasis::new(2, 0).is_err());
    }

    #[test]
    fn nested_rendering() {
        let b = HallBasis::new(3, 4).unwrap();
        let all = names(&b);
        assert!(all.contains(&"[x3,x1,[x2,x1]]".to_string()));
        assert_eq!(b.find_left_normed(&[2, 1, 1]).map(|j| b.display(j).to_string()), Some("[x2,x1,x1]".into()));
        assert_eq!(b.find_left_normed(&[1, 2]), None);
    }
}
