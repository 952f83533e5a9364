//! Freely reduced words in the free group `F_n`, their literal reversal, and
//! the textual grammar shared by the CLI, automorphism files and bindings.
//!
//! Grammar:
//!
//! ```text
//! expr  := term (('*' | whitespace)? term)*
//! term  := atom ('^' int)?
//! atom  := 'x' uint | '1' | '(' expr ')' | '[' expr (',' expr)+ ']'
//! ```
//!
//! A generator exponent must be nonzero. Commutators are left-normed,
//! `[a,b,c] = [[a,b],c]`, with `[g,h] = g^-1 h^-1 g h`.

use std::fmt;

use crate::error::{Error, Result};

/// Words longer than this are rejected by the parser.
pub const MAX_PARSED_LEN: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    index: usize,
    inverse: bool,
}

impl Letter {
    /// `x_index`, 1-based.
    pub fn gen(index: usize) -> Self {
        assert!(index >= 1, "generator indices start at 1");
        Letter { index, inverse: false }
    }

    /// `x_index^-1`.
    pub fn inv(index: usize) -> Self {
        assert!(index >= 1, "generator indices start at 1");
        Letter { index, inverse: true }
    }

    pub fn new(index: usize, sign: i32) -> Self {
        assert!(sign == 1 || sign == -1, "letter sign must be +1 or -1");
        if sign == 1 {
            Letter::gen(index)
        } else {
            Letter::inv(index)
        }
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn inverted(self) -> Self {
        Letter { index: self.index, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "x{}^-1", self.index)
        } else {
            write!(f, "x{}", self.index)
        }
    }
}

/// A freely reduced word over `x_1, ..., x_rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Self> {
        check_index(index, rank)?;
        Ok(Word { rank, letters: vec![Letter::gen(index)] })
    }

    /// Freely reduces `letters`.
    pub fn reduce(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            check_index(l.index, rank)?;
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Ok(Word { rank, letters: out })
    }

    /// Builds a word from signed indices (`-2` is `x2^-1`).
    pub fn from_signed(rank: usize, signed: &[i64]) -> Result<Self> {
        let mut letters = Vec::with_capacity(signed.len());
        for &s in signed {
            if s == 0 {
                return Err(Error::InvalidParameters("zero is not a letter".into()));
            }
            let index = s.unsigned_abs() as usize;
            letters.push(if s > 0 { Letter::gen(index) } else { Letter::inv(index) });
        }
        Word::reduce(rank, letters)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Signed indices, `x_i -> i`, `x_i^-1 -> -i`.
    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.sign() as i64 * l.index as i64).collect()
    }

    /// The literal reverse word. Reversal preserves reducedness.
    pub fn reverse(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().copied().collect() }
    }

    pub fn is_palindrome(&self) -> bool {
        self.letters.iter().eq(self.letters.iter().rev())
    }

    pub fn inverse(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().map(|l| l.inverted()).collect() }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut out = self.letters.clone();
        for &l in &other.letters {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Ok(Word { rank: self.rank, letters: out })
    }

    pub fn pow(&self, m: i64) -> Word {
        let base = if m < 0 { self.inverse() } else { self.clone() };
        let mut out: Vec<Letter> = Vec::new();
        for _ in 0..m.unsigned_abs() {
            for &l in &base.letters {
                match out.last() {
                    Some(&last) if last.cancels(l) => {
                        out.pop();
                    }
                    _ => out.push(l),
                }
            }
        }
        Word { rank: self.rank, letters: out }
    }

    /// Image under the free-group endomorphism `x_i -> images[i - 1]`.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        if images.len() != self.rank {
            return Err(Error::RankMismatch(images.len(), self.rank));
        }
        let rank = images.first().map_or(self.rank, |w| w.rank);
        let mut out = Word::empty(rank);
        for l in &self.letters {
            let img = &images[l.index - 1];
            out = out.concat(&if l.is_inverse() { img.inverse() } else { img.clone() })?;
        }
        Ok(out)
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Word) -> Result<Word> {
        self.inverse().concat(&other.inverse())?.concat(self)?.concat(other)
    }

    /// Left-normed commutator `[w_1, ..., w_m]`.
    pub fn left_normed(words: &[Word]) -> Result<Word> {
        let (first, rest) = words
            .split_first()
            .ok_or_else(|| Error::InvalidParameters("empty commutator".into()))?;
        rest.iter().try_fold(first.clone(), |acc, w| acc.commutator(w))
    }

    /// Parses `text` in the word grammar over `x_1..x_rank`.
    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, rank };
        let w = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse(p.pos, format!("unexpected '{}'", p.src[p.pos] as char)));
        }
        Ok(w)
    }
}

/// Canonical rendering: runs of equal letters become powers, `1` for the
/// empty word. Parses back to the same word.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.sign() as i64;
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if run == 1 {
                write!(f, "x{}", l.index)?;
            } else {
                write!(f, "x{}^{}", l.index, run)?;
            }
            i = j;
        }
        Ok(())
    }
}

pub fn reduce(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Word> {
    Word::reduce(rank, letters)
}

pub fn parse_word(text: &str, rank: usize) -> Result<Word> {
    Word::parse(text, rank)
}

fn check_index(index: usize, rank: usize) -> Result<()> {
    if index == 0 || index > rank {
        Err(Error::IndexOutOfRank { index, rank })
    } else {
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn starts_atom(c: u8) -> bool {
        matches!(c, b'x' | b'1' | b'(' | b'[')
    }

    fn expr(&mut self) -> Result<Word> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.concat(&t)?;
                }
                Some(c) if Self::starts_atom(c) => {
                    let t = self.term()?;
                    acc = acc.concat(&t)?;
                }
                _ => return Ok(acc),
            }
            check_len(&acc, self.pos)?;
        }
    }

    fn term(&mut self) -> Result<Word> {
        self.skip_ws();
        let start = self.pos;
        let (atom, is_gen) = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let epos = self.pos;
            let m = self.int()?;
            if is_gen && m == 0 {
                return Err(Error::parse(epos, "generator exponent must be nonzero"));
            }
            if (atom.len() as u128) * (m.unsigned_abs() as u128) > MAX_PARSED_LEN as u128 {
                return Err(Error::parse(start, "word too long"));
            }
            return Ok(atom.pow(m));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<(Word, bool)> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let digits_start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
                if digits_start == self.pos {
                    return Err(Error::parse(digits_start, "expected generator index after 'x'"));
                }
                let text = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
                let index: usize = text
                    .parse()
                    .map_err(|_| Error::parse(digits_start, "generator index too large"))?;
                if index == 0 {
                    return Err(Error::parse(digits_start, "generator indices start at 1"));
                }
                if index > self.rank {
                    return Err(Error::parse(
                        start,
                        format!("x{index} out of range for rank {}", self.rank),
                    ));
                }
                Ok((Word { rank: self.rank, letters: vec![Letter::gen(index)] }, true))
            }
            Some(b'1') => {
                self.pos += 1;
                if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    return Err(Error::parse(start, "only '1' may appear as a bare number"));
                }
                Ok((Word::empty(self.rank), false))
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.expr()?;
                self.expect(b')')?;
                Ok((w, false))
            }
            Some(b'[') => {
                self.pos += 1;
                let mut args = vec![self.expr()?];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            args.push(self.expr()?);
                        }
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        Some(c) => {
                            return Err(Error::parse(
                                self.pos,
                                format!("expected ',' or ']' but found '{}'", c as char),
                            ))
                        }
                        None => return Err(Error::parse(self.pos, "unterminated commutator")),
                    }
                }
                if args.len() < 2 {
                    return Err(Error::parse(start, "commutator needs at least two arguments"));
                }
                let w = Word::left_normed(&args)?;
                check_len(&w, start)?;
                Ok((w, false))
            }
            Some(c) => Err(Error::parse(start, format!("unexpected '{}'", c as char))),
            None => Err(Error::parse(start, "unexpected end of input")),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits == self.pos {
            return Err(Error::parse(start, "expected integer exponent"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "exponent out of range"))
    }
}

fn check_len(w: &Word, pos: usize) -> Result<()> {
    if w.len() > MAX_PARSED_LEN {
        Err(Error::parse(pos, "word too long"))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str, rank: usize) -> Word {
        Word::parse(text, rank).unwrap()
    }

    #[test]
    fn parse_basic() {
        assert_eq!(w("x1 x2^-1", 2).to_signed(), vec![1, -2]);
        assert_eq!(w("[x2,x1]", 2).to_signed(), vec![-2, -1, 2, 1]);
        assert!(w("x1 x1^-1", 2).is_empty());
        assert_eq!(w("x1*x2", 2), w("x1 x2", 2));
        assert_eq!(w("(x1 x2)^2", 2).to_signed(), vec![1, 2, 1, 2]);
        assert_eq!(w("(x1 x2)^-1", 2).to_signed(), vec![-2, -1]);
        assert_eq!(w("x3^-2", 3).to_signed(), vec![-3, -3]);
        assert!(w("1", 2).is_empty());
        assert!(w("(x1)^0", 2).is_empty());
        assert_eq!(w("[x1,x2,x1]", 2), w("[[x1,x2],x1]", 2));
        assert_eq!(w("[x2,x1]^-1", 2), w("[x1,x2]", 2));
    }

    #[test]
    fn parse_errors() {
        match Word::parse("x1 x3", 2) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Word::parse("x1^0", 2), Err(Error::Parse { .. })));
        assert!(matches!(Word::parse("[x1]", 2), Err(Error::Parse { .. })));
        assert!(matches!(Word::parse("x1 +", 2), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(Word::parse("(x1", 2), Err(Error::Parse { .. })));
        assert!(matches!(Word::parse("x0", 2), Err(Error::Parse { .. })));
        assert!(matches!(Word::parse("", 2), Err(Error::Parse { .. })));
        assert!(matches!(Word::parse("x", 2), Err(Error::Parse { .. })));
    }

    #[test]
    fn reduce_examples() {
        let r = Word::reduce(2, [Letter::gen(1), Letter::gen(2), Letter::inv(2)]).unwrap();
        assert_eq!(r.to_signed(), vec![1]);
        assert!(Word::reduce(2, []).unwrap().is_empty());
        let r = Word::reduce(2, [Letter::gen(1), Letter::gen(1)]).unwrap();
        assert_eq!(r.to_signed(), vec![1, 1]);
        assert!(matches!(
            Word::reduce(2, [Letter::gen(3)]),
            Err(Error::IndexOutOfRank { index: 3, rank: 2 })
        ));
    }

    #[test]
    fn reverse_and_palindromes() {
        assert_eq!(w("x1 x2", 2).reverse(), w("x2 x1", 2));
        let p = w("x1 x2^-1 x1", 2);
        assert_eq!(p.reverse(), p);
        assert!(p.is_palindrome());
        assert!(w("x2 x1 x2", 2).is_palindrome());
        assert!(!w("x1 x2", 2).is_palindrome());
        assert!(Word::empty(2).is_palindrome());
        assert!(Word::empty(2).reverse().is_empty());
    }

    #[test]
    fn group_ops() {
        assert_eq!(w("x1 x2", 2).inverse().to_signed(), vec![-2, -1]);
        assert!(w("x1", 2).concat(&w("x1^-1", 2)).unwrap().is_empty());
        assert_eq!(w("x1", 2).concat(&w("x2", 2)).unwrap().to_signed(), vec![1, 2]);
        assert!(matches!(w("x1", 2).concat(&w("x1", 3)), Err(Error::RankMismatch(2, 3))));
    }

    #[test]
    fn render() {
        assert_eq!(w("x1 x1 x2^-1", 2).to_string(), "x1^2 x2^-1");
        assert_eq!(Word::empty(3).to_string(), "1");
    }
}
