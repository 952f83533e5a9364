//! Named generators of automorphism groups and their textual form.
//!
//! `mu(i,j)`, `t(i)`, `alpha(j)`, `sigma(2 1 3)`, `phi2(a,b;i)`,
//! `phi3(a,b,c;i)`, `psi(a;i)`, `inner(<expr>)` and
//! `conj(sigma(..); f1*f2*..)`, each optionally raised to `^m`.

use std::fmt;

use super::endo::{inverse, Endo};
use crate::error::{Error, Result};
use crate::nilpotent::{Group, NilElement};
use crate::words::Word;

/// A permutation of `1..=n` in one-line notation: `x_i -> x_{p(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &p in &images {
            if p == 0 || p > n || seen[p - 1] {
                return Err(Error::InvalidParameters(format!("not a permutation of 1..={n}: {images:?}")));
            }
            seen[p - 1] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// Swaps `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut p: Vec<usize> = (1..=n).collect();
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::InvalidParameters(format!("transposition ({a} {b}) outside 1..={n}")));
        }
        p.swap(a - 1, b - 1);
        Ok(Permutation(p))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `p(i)`, 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| p == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// All permutations of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "sigma({})", parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    /// `x_i -> x_j x_i x_j`.
    Mu(usize, usize),
    /// `x_i -> x_i^-1`.
    T(usize),
    /// Swaps `x_j` and `x_{j+1}`.
    Alpha(usize),
    Sigma(Permutation),
    /// `x_i -> x_i [x_a,x_b,x_i][x_a,x_b,x_b][x_a,x_b,x_a]`.
    Phi2 { a: usize, b: usize, i: usize },
    /// `x_i -> x_i [x_a,x_b,x_c]^2`.
    Phi3 { a: usize, b: usize, c: usize, i: usize },
    /// `x_i -> x_i [x_a,x_i,x_a]`.
    Psi { a: usize, i: usize },
    /// `x_j -> g^-1 x_j g`.
    Inner(NilElement),
    /// `sigma^-1 (f_1 f_2 ...) sigma`.
    Conj(Permutation, Vec<GeneratorSymbol>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSymbol {
    pub kind: Kind,
    pub exp: i64,
}

impl GeneratorSymbol {
    pub fn new(kind: Kind) -> Self {
        GeneratorSymbol { kind, exp: 1 }
    }

    pub fn pow(mut self, m: i64) -> Self {
        self.exp *= m;
        self
    }

    pub fn mu(i: usize, j: usize) -> Self {
        Self::new(Kind::Mu(i, j))
    }

    pub fn t(i: usize) -> Self {
        Self::new(Kind::T(i))
    }

    pub fn alpha(j: usize) -> Self {
        Self::new(Kind::Alpha(j))
    }

    pub fn sigma(p: Permutation) -> Self {
        Self::new(Kind::Sigma(p))
    }

    pub fn phi2(a: usize, b: usize, i: usize) -> Self {
        Self::new(Kind::Phi2 { a, b, i })
    }

    pub fn phi3(a: usize, b: usize, c: usize, i: usize) -> Self {
        Self::new(Kind::Phi3 { a, b, c, i })
    }

    pub fn psi(a: usize, i: usize) -> Self {
        Self::new(Kind::Psi { a, i })
    }

    pub fn inner(g: NilElement) -> Self {
        Self::new(Kind::Inner(g))
    }

    pub fn conj(p: Permutation, factors: Vec<GeneratorSymbol>) -> Self {
        Self::new(Kind::Conj(p, factors))
    }

    /// Relabels indices by `p`; equals conjugation by `sigma(p)` for the
    /// index-labelled families.
    pub fn relabel(&self, p: &Permutation) -> Option<Self> {
        let s = |i: usize| p.apply(i);
        let kind = match &self.kind {
            Kind::Mu(i, j) => Kind::Mu(s(*i), s(*j)),
            Kind::T(i) => Kind::T(s(*i)),
            Kind::Phi2 { a, b, i } => Kind::Phi2 { a: s(*a), b: s(*b), i: s(*i) },
            Kind::Phi3 { a, b, c, i } => Kind::Phi3 { a: s(*a), b: s(*b), c: s(*c), i: s(*i) },
            Kind::Psi { a, i } => Kind::Psi { a: s(*a), i: s(*i) },
            _ => return None,
        };
        Some(GeneratorSymbol { kind, exp: self.exp })
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if (1..=n).contains(&i) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRank { index: i, rank: n })
    }
}

fn distinct(a: usize, b: usize, what: &str) -> Result<()> {
    if a == b {
        Err(Error::InvalidParameters(format!("{what} needs distinct indices, got {a} twice")))
    } else {
        Ok(())
    }
}

fn single(group: &Group, i: usize, image: NilElement) -> Result<Endo> {
    let mut images = group.generators();
    images[i - 1] = image;
    Endo::new(group, images)
}

fn gens(group: &Group, idx: &[usize]) -> Vec<NilElement> {
    idx.iter().map(|&i| group.generator(i)).collect()
}

/// The automorphism named by `sym` (including its exponent).
pub fn make_generator(sym: &GeneratorSymbol, group: &Group) -> Result<Endo> {
    let n = group.rank();
    let base = match &sym.kind {
        Kind::Mu(i, j) => {
            check_index(*i, n)?;
            check_index(*j, n)?;
            distinct(*i, *j, "mu")?;
            let (xi, xj) = (group.generator(*i), group.generator(*j));
            single(group, *i, &(&xj * &xi) * &xj)?
        }
        Kind::T(i) => {
            check_index(*i, n)?;
            single(group, *i, group.generator(*i).inv())?
        }
        Kind::Alpha(j) => {
            check_index(*j, n)?;
            check_index(j + 1, n)?;
            let p = Permutation::transposition(n, *j, j + 1)?;
            make_generator(&GeneratorSymbol::sigma(p), group)?
        }
        Kind::Sigma(p) => {
            if p.len() != n {
                return Err(Error::RankMismatch(p.len(), n));
            }
            Endo::new(group, p.images().iter().map(|&q| group.generator(q)).collect())?
        }
        Kind::Phi2 { a, b, i } => {
            for x in [a, b, i] {
                check_index(*x, n)?;
            }
            distinct(*a, *b, "phi2")?;
            let t = |c: usize| NilElement::left_normed(&gens(group, &[*a, *b, c]));
            let w = &(&t(*i)? * &t(*b)?) * &t(*a)?;
            single(group, *i, &group.generator(*i) * &w)?
        }
        Kind::Phi3 { a, b, c, i } => {
            for x in [a, b, c, i] {
                check_index(*x, n)?;
            }
            distinct(*a, *b, "phi3")?;
            let w = NilElement::left_normed(&gens(group, &[*a, *b, *c]))?.pow(2);
            single(group, *i, &group.generator(*i) * &w)?
        }
        Kind::Psi { a, i } => {
            check_index(*a, n)?;
            check_index(*i, n)?;
            distinct(*a, *i, "psi")?;
            let w = NilElement::left_normed(&gens(group, &[*a, *i, *a]))?;
            single(group, *i, &group.generator(*i) * &w)?
        }
        Kind::Inner(g) => {
            if !g.group().same_group(group) {
                let o = g.group();
                return Err(Error::GroupMismatch(n, group.step(), o.rank(), o.step()));
            }
            Endo::new(group, group.generators().iter().map(|x| x.conjugate(g)).collect())?
        }
        Kind::Conj(p, factors) => {
            let sigma = make_generator(&GeneratorSymbol::sigma(p.clone()), group)?;
            let body = compose_symbols(factors, group)?;
            body.conjugate_by(&sigma)?
        }
    };
    match sym.exp {
        1 => Ok(base),
        -1 => Ok(inverse(&base)?.inverse),
        m => base.pow(m),
    }
}

/// Product of the factors, left to right.
pub fn compose_symbols(syms: &[GeneratorSymbol], group: &Group) -> Result<Endo> {
    syms.iter()
        .try_fold(Endo::identity(group), |acc, s| acc.compose(&make_generator(s, group)?))
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Mu(i, j) => write!(f, "mu({i},{j})")?,
            Kind::T(i) => write!(f, "t({i})")?,
            Kind::Alpha(j) => write!(f, "alpha({j})")?,
            Kind::Sigma(p) => write!(f, "{p}")?,
            Kind::Phi2 { a, b, i } => write!(f, "phi2({a},{b};{i})")?,
            Kind::Phi3 { a, b, c, i } => write!(f, "phi3({a},{b},{c};{i})")?,
            Kind::Psi { a, i } => write!(f, "psi({a};{i})")?,
            Kind::Inner(g) => write!(f, "inner({g})")?,
            Kind::Conj(p, fs) => {
                let body: Vec<String> = fs.iter().map(|s| s.to_string()).collect();
                write!(f, "conj({p}; {})", body.join("*"))?
            }
        }
        if self.exp != 1 {
            write!(f, "^{}", self.exp)?;
        }
        Ok(())
    }
}

/// Renders a factor list one symbol per line.
pub fn render_symbols(syms: &[GeneratorSymbol]) -> String {
    syms.iter().map(|s| format!("{s}\n")).collect()
}

/// Parses factors separated by whitespace, newlines or `*`.
pub fn parse_symbols(text: &str, group: &Group) -> Result<Vec<GeneratorSymbol>> {
    let mut p = SymParser { src: text, pos: 0, group };
    let out = p.list(None)?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(Error::parse(p.pos, "unexpected character"));
    }
    Ok(out)
}

pub fn parse_symbol(text: &str, group: &Group) -> Result<GeneratorSymbol> {
    let mut syms = parse_symbols(text, group)?;
    if syms.len() != 1 {
        return Err(Error::parse(0, format!("expected one generator, found {}", syms.len())));
    }
    Ok(syms.remove(0))
}

struct SymParser<'a> {
    src: &'a str,
    pos: usize,
    group: &'a Group,
}

impl SymParser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() || c == '*' {
                self.pos += c.len_utf8();
            } else if c == '#' {
                let end = self.rest().find('\n').map_or(self.src.len(), |e| self.pos + e);
                self.pos = end;
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        while self.rest().starts_with(|ch: char| ch.is_whitespace()) {
            self.pos += 1;
        }
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{c}'")))
        }
    }

    fn list(&mut self, until: Option<char>) -> Result<Vec<GeneratorSymbol>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.rest().chars().next() {
                None => break,
                Some(c) if Some(c) == until => break,
                Some(_) => out.push(self.symbol()?),
            }
        }
        Ok(out)
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self.rest().starts_with(|c: char| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn uint(&mut self) -> Result<usize> {
        while self.rest().starts_with(' ') {
            self.pos += 1;
        }
        let start = self.pos;
        while self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| Error::parse(start, "expected an index"))
    }

    /// Comma-separated indices, then optionally `;` and one more.
    fn indices(&mut self) -> Result<(Vec<usize>, Option<usize>)> {
        let mut v = vec![self.uint()?];
        loop {
            while self.rest().starts_with(' ') {
                self.pos += 1;
            }
            if self.rest().starts_with(',') {
                self.pos += 1;
                v.push(self.uint()?);
            } else {
                break;
            }
        }
        let target = if self.rest().starts_with(';') {
            self.pos += 1;
            Some(self.uint()?)
        } else {
            None
        };
        Ok((v, target))
    }

    fn arity(&self, at: usize, name: &str, got: &[usize], want: usize, target: bool, has: Option<usize>) -> Result<()> {
        if got.len() != want || target != has.is_some() {
            let shape = if target { ";i" } else { "" };
            return Err(Error::parse(at, format!("{name} takes {want} indices{shape}")));
        }
        Ok(())
    }

    fn symbol(&mut self) -> Result<GeneratorSymbol> {
        let at = self.pos;
        let name = self.ident().to_string();
        self.eat('(')?;
        let kind = match name.as_str() {
            "mu" | "t" | "alpha" | "phi2" | "phi3" | "psi" => {
                let (v, tgt) = self.indices()?;
                match name.as_str() {
                    "mu" => {
                        self.arity(at, "mu", &v, 2, false, tgt)?;
                        Kind::Mu(v[0], v[1])
                    }
                    "t" => {
                        self.arity(at, "t", &v, 1, false, tgt)?;
                        Kind::T(v[0])
                    }
                    "alpha" => {
                        self.arity(at, "alpha", &v, 1, false, tgt)?;
                        Kind::Alpha(v[0])
                    }
                    "phi2" => {
                        self.arity(at, "phi2", &v, 2, true, tgt)?;
                        Kind::Phi2 { a: v[0], b: v[1], i: tgt.unwrap() }
                    }
                    "phi3" => {
                        self.arity(at, "phi3", &v, 3, true, tgt)?;
                        Kind::Phi3 { a: v[0], b: v[1], c: v[2], i: tgt.unwrap() }
                    }
                    _ => {
                        self.arity(at, "psi", &v, 1, true, tgt)?;
                        Kind::Psi { a: v[0], i: tgt.unwrap() }
                    }
                }
            }
            "sigma" => Kind::Sigma(self.permutation()?),
            "inner" => {
                let start = self.pos;
                let mut depth = 0i32;
                let mut end = None;
                for (off, c) in self.rest().char_indices() {
                    match c {
                        '(' | '[' => depth += 1,
                        ']' => depth -= 1,
                        ')' if depth == 0 => {
                            end = Some(start + off);
                            break;
                        }
                        ')' => depth -= 1,
                        _ => {}
                    }
                }
                let end = end.ok_or_else(|| Error::parse(start, "unclosed inner("))?;
                let w = Word::parse(&self.src[start..end], self.group.rank()).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::Parse { pos: pos + start, msg },
                    other => other,
                })?;
                self.pos = end;
                Kind::Inner(self.group.collect(&w)?)
            }
            "conj" => {
                self.skip_ws();
                let p_at = self.pos;
                if self.ident() != "sigma" {
                    return Err(Error::parse(p_at, "conj needs a sigma(...) first"));
                }
                self.eat('(')?;
                let p = self.permutation()?;
                self.eat(')')?;
                self.eat(';')?;
                let body = self.list(Some(')'))?;
                Kind::Conj(p, body)
            }
            "" => return Err(Error::parse(at, "expected a generator name")),
            other => return Err(Error::parse(at, format!("unknown generator '{other}'"))),
        };
        self.eat(')')?;
        let mut exp = 1;
        if self.rest().starts_with('^') {
            self.pos += 1;
            let start = self.pos;
            if self.rest().starts_with('-') {
                self.pos += 1;
            }
            while self.rest().starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += 1;
            }
            exp = self.src[start..self.pos].parse().map_err(|_| Error::parse(start, "expected an exponent"))?;
        }
        Ok(GeneratorSymbol { kind, exp })
    }

    /// Space- or comma-separated images, up to `)`.
    fn permutation(&mut self) -> Result<Permutation> {
        let start = self.pos;
        let mut v = Vec::new();
        loop {
            while self.rest().starts_with([' ', ',']) {
                self.pos += 1;
            }
            if self.rest().starts_with(')') || self.rest().is_empty() {
                break;
            }
            v.push(self.uint()?);
        }
        Permutation::new(v).map_err(|e| Error::parse(start, e.to_string()))
    }
}
