//! Truncated noncommutative power series in the letters `A` and `B`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::symring::{SymError, SymExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series is not unital: constant term is {0}")]
    NotUnital(String),
    #[error("word of degree {degree} exceeds truncation order {order}")]
    DegreeTooLarge { degree: usize, order: usize },
    #[error("words are limited to {max} letters")]
    WordTooLong { max: usize },
    #[error("invalid word {0:?}")]
    BadWord(String),
    #[error(transparent)]
    Sym(#[from] SymError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn other(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    fn bit(self) -> u64 {
        match self {
            Letter::A => 0,
            Letter::B => 1,
        }
    }
}

/// Word in the free monoid on `{A, B}`.
///
/// Packed as a bit string (A = 0, B = 1, first letter most significant) so
/// that the derived ordering is (degree, lexicographic).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const MAX_LEN: usize = 63;

    pub fn empty() -> Word {
        Word { len: 0, bits: 0 }
    }

    pub fn letter(l: Letter) -> Word {
        Word { len: 1, bits: l.bit() }
    }

    pub fn from_letters(letters: &[Letter]) -> Result<Word, AlgebraError> {
        if letters.len() > Self::MAX_LEN {
            return Err(AlgebraError::WordTooLong { max: Self::MAX_LEN });
        }
        let bits = letters.iter().fold(0u64, |acc, l| (acc << 1) | l.bit());
        Ok(Word {
            len: letters.len() as u8,
            bits,
        })
    }

    /// `l^k`
    pub fn power(l: Letter, k: usize) -> Word {
        let mut w = Word::empty();
        for _ in 0..k {
            w = w.concat(&Word::letter(l));
        }
        w
    }

    pub fn degree(&self) -> usize {
        self.len as usize
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.len)
            .rev()
            .map(|i| if (self.bits >> i) & 1 == 1 { Letter::B } else { Letter::A })
            .collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert!(
            self.degree() + other.degree() <= Self::MAX_LEN,
            "word length overflow"
        );
        Word {
            len: self.len + other.len,
            bits: (self.bits << other.len) | other.bits,
        }
    }

    pub fn swap_letters(&self) -> Word {
        let mask = if self.len == 0 { 0 } else { u64::MAX >> (64 - self.len as u32) };
        Word {
            len: self.len,
            bits: !self.bits & mask,
        }
    }

    pub fn count(&self, l: Letter) -> usize {
        let ones = self.bits.count_ones() as usize;
        match l {
            Letter::B => ones,
            Letter::A => self.degree() - ones,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return write!(f, "1");
        }
        for l in self.letters() {
            write!(f, "{}", if l == Letter::A { 'A' } else { 'B' })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "1" || s.is_empty() {
            return Ok(Word::empty());
        }
        let letters = s
            .chars()
            .map(|ch| match ch {
                'A' => Ok(Letter::A),
                'B' => Ok(Letter::B),
                _ => Err(AlgebraError::BadWord(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word::from_letters(&letters)
    }
}

/// Noncommutative polynomial with integer coefficients; used for the
/// eagerly expanded adjoint powers.
pub(crate) type WordPoly = BTreeMap<Word, BigInt>;

pub(crate) fn wordpoly_mul(a: &WordPoly, b: &WordPoly) -> WordPoly {
    let mut out = WordPoly::new();
    for (u, x) in a {
        for (v, y) in b {
            let e = out.entry(u.concat(v)).or_insert_with(BigInt::zero);
            *e += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `ad_actor^m(argument)` expanded by the binomial formula
/// `sum_s (-1)^s C(m,s) X^(m-s) Y X^s`.
pub(crate) fn ad_power_poly(actor: Letter, argument: Letter, m: usize) -> WordPoly {
    let mut out = WordPoly::new();
    let y = Word::letter(argument);
    for s in 0..=m {
        let w = Word::power(actor, m - s)
            .concat(&y)
            .concat(&Word::power(actor, s));
        let mut c = binomial(BigInt::from(m), BigInt::from(s));
        if s % 2 == 1 {
            c = -c;
        }
        let e = out.entry(w).or_insert_with(BigInt::zero);
        *e += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Degree-truncated series with coefficients in the symbolic ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCSeries {
    order: usize,
    coeffs: BTreeMap<Word, SymExpr>,
}

impl NCSeries {
    pub fn zero(order: usize) -> NCSeries {
        NCSeries {
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn unit(order: usize) -> NCSeries {
        NCSeries::monomial(order, Word::empty(), SymExpr::one())
    }

    pub fn monomial(order: usize, w: Word, c: SymExpr) -> NCSeries {
        let mut s = NCSeries::zero(order);
        s.add_term(w, &c);
        s
    }

    pub(crate) fn from_wordpoly(order: usize, p: &WordPoly, scale: &SymExpr) -> NCSeries {
        let mut s = NCSeries::zero(order);
        for (w, k) in p {
            s.add_term(*w, &scale.scale(&BigRational::from_integer(k.clone())));
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &SymExpr)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `c` to the coefficient of `w`; words beyond the order are dropped.
    pub fn add_term(&mut self, w: Word, c: &SymExpr) {
        if w.degree() > self.order || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(w).or_default();
        *e = e.add(c);
        if e.is_zero() {
            self.coeffs.remove(&w);
        }
    }

    pub fn coeff(&self, w: &Word) -> Result<SymExpr, AlgebraError> {
        if w.degree() > self.order {
            return Err(AlgebraError::DegreeTooLarge {
                degree: w.degree(),
                order: self.order,
            });
        }
        Ok(self.coeffs.get(w).cloned().unwrap_or_default())
    }

    fn check_order(&self, other: &NCSeries) -> Result<(), AlgebraError> {
        if self.order != other.order {
            return Err(AlgebraError::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &NCSeries) -> Result<NCSeries, AlgebraError> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(*w, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NCSeries) -> Result<NCSeries, AlgebraError> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(*w, &c.neg());
        }
        Ok(out)
    }

    pub fn scale(&self, q: &SymExpr) -> NCSeries {
        let mut out = NCSeries::zero(self.order);
        for (w, c) in &self.coeffs {
            out.add_term(*w, &c.mul(q));
        }
        out
    }

    pub fn mul(&self, other: &NCSeries) -> Result<NCSeries, AlgebraError> {
        self.check_order(other)?;
        let mut acc: BTreeMap<Word, SymExpr> = BTreeMap::new();
        for (u, a) in &self.coeffs {
            for (v, b) in &other.coeffs {
                if u.degree() + v.degree() > self.order {
                    continue;
                }
                let e = acc.entry(u.concat(v)).or_default();
                *e = e.add(&a.mul(b));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(NCSeries {
            order: self.order,
            coeffs: acc,
        })
    }

    /// Inverse of a unital series via the truncated geometric series.
    pub fn inverse(&self) -> Result<NCSeries, AlgebraError> {
        let constant = self.coeff(&Word::empty())?;
        if constant != SymExpr::one() {
            return Err(AlgebraError::NotUnital(constant.to_string()));
        }
        let unit = NCSeries::unit(self.order);
        let t = unit.sub(self)?;
        let mut out = unit.clone();
        let mut power = unit;
        for _ in 0..self.order {
            power = power.mul(&t)?;
            out = out.add(&power)?;
        }
        Ok(out)
    }

    /// Exchanges `A` and `B` in every word.
    pub fn swap(&self) -> NCSeries {
        NCSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(w, c)| (w.swap_letters(), c.clone()))
                .collect(),
        }
    }

    /// The part of exact degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> NCSeries {
        NCSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(w, _)| w.degree() == d)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, order: usize) -> NCSeries {
        NCSeries {
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(w, _)| w.degree() <= order)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    /// Maps every coefficient through `f`, dropping those that become zero.
    pub fn map_coeffs<E>(
        &self,
        mut f: impl FnMut(&SymExpr) -> Result<SymExpr, E>,
    ) -> Result<NCSeries, E> {
        let mut out = NCSeries::zero(self.order);
        for (w, c) in &self.coeffs {
            out.add_term(*w, &f(c)?);
        }
        Ok(out)
    }

    /// Checks that every degree-`r` coefficient is weight-homogeneous of weight `r`.
    pub fn check_weight_grading(&self) -> Result<(), (Word, String)> {
        for (w, c) in &self.coeffs {
            match c.weight() {
                Ok(wt) if wt as usize == w.degree() => {}
                Ok(wt) => return Err((*w, format!("weight {} on degree {}", wt, w.degree()))),
                Err(e) => return Err((*w, e.to_string())),
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term {
            word: String,
            coeff: String,
        }
        #[derive(Serialize)]
        struct Doc {
            order: usize,
            terms: Vec<Term>,
        }
        serde_json::to_value(Doc {
            order: self.order,
            terms: self
                .coeffs
                .iter()
                .map(|(w, c)| Term {
                    word: w.to_string(),
                    coeff: c.to_string(),
                })
                .collect(),
        })
        .expect("series serializes")
    }
}

impl fmt::Display for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(w, c)| {
                let cs = if c.len() == 1 { c.to_string() } else { format!("({})", c) };
                if w.degree() == 0 {
                    cs
                } else if cs == "1" {
                    w.to_string()
                } else {
                    format!("{}*{}", cs, w)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `exp(sign * ln2 * l)` truncated at degree `order`.
pub fn exp_letter(l: Letter, sign: i32, order: usize) -> NCSeries {
    let mut s = NCSeries::zero(order);
    let step = SymExpr::log2().scale(&BigRational::from_integer(BigInt::from(sign.signum())));
    let mut coeff = SymExpr::one();
    for k in 0..=order {
        s.add_term(Word::power(l, k), &coeff);
        coeff = coeff
            .mul(&step)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(k + 1)));
    }
    s
}

/// `ad_actor^m(argument)` as a series truncated at its own degree `m + 1`.
pub fn ad_power(actor: Letter, argument: Letter, m: usize) -> NCSeries {
    NCSeries::from_wordpoly(m + 1, &ad_power_poly(actor, argument, m), &SymExpr::one())
}
