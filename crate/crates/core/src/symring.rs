//! Exact coefficient ring.
//!
//! Polynomials with rational coefficients in the formal generators `ln 2`,
//! multiple zeta values and delta values (multiple polylogarithms at 1/2).
//! Generators are treated as algebraically independent; identifications
//! between them only ever enter through explicit relations.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("composition must be a nonempty list of positive integers, got {0:?}")]
    BadComposition(Vec<u32>),
    #[error("zeta({0}) is not admissible: the first part must be at least 2")]
    NotAdmissible(Composition),
    #[error("expression is not weight-homogeneous (found weights {0} and {1})")]
    NotHomogeneous(u32, u32),
    #[error("replacement has weight {found}, generator has weight {expected}")]
    WeightMismatch { expected: u32, found: u32 },
    #[error("cannot parse composition {0:?}")]
    Parse(String),
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Nonempty tuple of positive integers indexing a zeta or delta value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self, SymError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(SymError::BadComposition(parts));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_admissible(&self) -> bool {
        self.0[0] >= 2
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }

    /// All compositions of `weight` in reverse-lexicographic order of parts.
    pub fn all_of_weight(weight: u32) -> Vec<Composition> {
        fn go(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition(cur.clone()));
                return;
            }
            for first in 1..=rest {
                cur.push(first);
                go(rest - first, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if weight > 0 {
            go(weight, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Composition {
    type Err = SymError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SymError::Parse(s.to_string()))?;
        Composition::new(parts)
    }
}

/// A formal generator of the coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Log2,
    Zeta(Composition),
    Delta(Composition),
}

impl Generator {
    /// Admissible multiple zeta value.
    pub fn zeta(parts: &[u32]) -> Result<Self, SymError> {
        let comp = Composition::new(parts.to_vec())?;
        if !comp.is_admissible() {
            return Err(SymError::NotAdmissible(comp));
        }
        Ok(Generator::Zeta(comp))
    }

    /// Delta value; any composition is allowed since the series converges at 1/2.
    pub fn delta(parts: &[u32]) -> Result<Self, SymError> {
        Ok(Generator::Delta(Composition::new(parts.to_vec())?))
    }

    pub fn weight(&self) -> u32 {
        match self {
            Generator::Log2 => 1,
            Generator::Zeta(c) | Generator::Delta(c) => c.weight(),
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Generator::Zeta(_) => 0,
            Generator::Log2 => 1,
            Generator::Delta(_) => 2,
        }
    }

    fn depth(&self) -> usize {
        match self {
            Generator::Log2 => 1,
            Generator::Zeta(c) | Generator::Delta(c) => c.depth(),
        }
    }

    fn parts(&self) -> &[u32] {
        match self {
            Generator::Log2 => &[1],
            Generator::Zeta(c) | Generator::Delta(c) => c.parts(),
        }
    }

    pub fn latex(&self) -> String {
        match self {
            Generator::Log2 => "\\ln2".to_string(),
            Generator::Zeta(c) => format!("\\zeta_{{{}}}", c),
            Generator::Delta(c) => format!("\\delta_{{{}}}", c),
        }
    }
}

// weight asc, Zeta < Log2 < Delta, then deeper ranks higher, then lexicographic on parts
impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.kind_rank().cmp(&other.kind_rank()))
            .then_with(|| self.depth().cmp(&other.depth()))
            .then_with(|| self.parts().cmp(other.parts()))
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Log2 => write!(f, "c"),
            Generator::Zeta(c) => write!(f, "z[{}]", c),
            Generator::Delta(c) => write!(f, "d[{}]", c),
        }
    }
}

/// Product of generator powers, factors kept sorted by the generator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Generator, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(g: Generator) -> Self {
        Monomial(vec![(g, 1)])
    }

    pub fn power(g: Generator, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(g, exp)])
        }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Generator, u32)>) -> Self {
        let mut map: BTreeMap<Generator, u32> = BTreeMap::new();
        for (g, e) in factors {
            if e > 0 {
                *map.entry(g).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(g, e)| g.weight() * e).sum()
    }

    pub fn exponent_of(&self, g: &Generator) -> u32 {
        self.0
            .iter()
            .find(|(h, _)| h == g)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Splits off every power of `g`, returning the exponent and the cofactor.
    fn split(&self, g: &Generator) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut exp = 0;
        for (h, e) in &self.0 {
            if h == g {
                exp = *e;
            } else {
                rest.push((h.clone(), *e));
            }
        }
        (exp, Monomial(rest))
    }

    pub fn latex(&self) -> String {
        let mut parts = Vec::new();
        for (g, e) in self.0.iter().rev() {
            let base = match g {
                Generator::Log2 if *e > 1 => "(\\ln2)".to_string(),
                _ => g.latex(),
            };
            if *e == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{}^{{{}}}", base, e));
            }
        }
        parts.join("")
    }
}

// Total weight first; within a weight the monomial whose largest factors are
// larger wins, so deep delta values lead and get eliminated first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let w = self.weight().cmp(&other.weight());
        if w != Ordering::Equal {
            return w;
        }
        let mut a = self.0.iter().rev();
        let mut b = other.0.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ga, ea)), Some((gb, eb))) => {
                    let ord = ga.cmp(gb).then(ea.cmp(eb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(g, e)| {
                if *e == 1 {
                    g.to_string()
                } else {
                    format!("{}^{}", g, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Finite sum of rational multiples of monomials; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymExpr {
    terms: BTreeMap<Monomial, BigRational>,
}

impl SymExpr {
    pub fn zero() -> Self {
        SymExpr::default()
    }

    pub fn one() -> Self {
        SymExpr::constant(BigRational::one())
    }

    pub fn constant(q: BigRational) -> Self {
        SymExpr::term(q, Monomial::one())
    }

    pub fn term(q: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(m, q);
        }
        SymExpr { terms }
    }

    pub fn generator(g: Generator) -> Self {
        SymExpr::term(BigRational::one(), Monomial::generator(g))
    }

    pub fn log2() -> Self {
        SymExpr::generator(Generator::Log2)
    }

    pub fn zeta(parts: &[u32]) -> Result<Self, SymError> {
        Ok(SymExpr::generator(Generator::zeta(parts)?))
    }

    /// Delta value with the all-ones case folded into `(ln 2)^k / k!`.
    pub fn delta(parts: &[u32]) -> Result<Self, SymError> {
        let comp = Composition::new(parts.to_vec())?;
        if comp.is_all_ones() {
            let k = comp.depth() as u32;
            let mut fact = BigInt::one();
            for i in 2..=k {
                fact *= BigInt::from(i);
            }
            return Ok(SymExpr::term(
                BigRational::new(BigInt::one(), fact),
                Monomial::power(Generator::Log2, k),
            ));
        }
        Ok(SymExpr::generator(Generator::Delta(comp)))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut out = SymExpr::zero();
        for (m, q) in terms {
            out.add_term(m, q);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub(crate) fn term_map(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest monomial in the fixed monomial order, with its coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, q: BigRational) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(c) => {
                *c += q;
                if c.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, q);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SymExpr, q: &BigRational) {
        if q.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * q);
        }
    }

    pub fn add(&self, other: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        out.add_scaled(other, &BigRational::one());
        out
    }

    pub fn sub(&self, other: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        out.add_scaled(other, &-BigRational::one());
        out
    }

    pub fn neg(&self) -> SymExpr {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, q: &BigRational) -> SymExpr {
        if q.is_zero() {
            return SymExpr::zero();
        }
        SymExpr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &SymExpr) -> SymExpr {
        let mut out = SymExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> SymExpr {
        SymExpr {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> SymExpr {
        let mut out = SymExpr::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Common weight of all monomials. The zero expression reports weight 0.
    pub fn weight(&self) -> Result<u32, SymError> {
        let mut it = self.terms.keys().map(Monomial::weight);
        let Some(first) = it.next() else {
            return Ok(0);
        };
        for w in it {
            if w != first {
                return Err(SymError::NotHomogeneous(first, w));
            }
        }
        Ok(first)
    }

    /// Replaces every power `g^k` by `replacement^k`.
    pub fn substitute(&self, g: &Generator, replacement: &SymExpr) -> Result<SymExpr, SymError> {
        if !replacement.is_zero() {
            let w = replacement.weight()?;
            if w != g.weight() {
                return Err(SymError::WeightMismatch {
                    expected: g.weight(),
                    found: w,
                });
            }
        }
        let mut powers: Vec<SymExpr> = vec![SymExpr::one()];
        let mut out = SymExpr::zero();
        for (m, c) in &self.terms {
            let (k, rest) = m.split(g);
            while powers.len() <= k as usize {
                let next = powers.last().unwrap().mul(replacement);
                powers.push(next);
            }
            out.add_scaled(&powers[k as usize].mul_monomial(&rest), c);
        }
        Ok(out)
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(g, _)| g.clone()))
            .collect()
    }

    /// Divides by the leading coefficient so that the leading monomial has coefficient 1.
    pub fn normalized(&self) -> SymExpr {
        match self.leading_term() {
            None => SymExpr::zero(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff = if a.is_one() {
                String::new()
            } else if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("\\tfrac{{{}}}{{{}}}", a.numer(), a.denom())
            };
            if m.is_one() {
                if coeff.is_empty() {
                    out.push('1');
                } else {
                    out.push_str(&coeff);
                }
            } else {
                out.push_str(&coeff);
                out.push_str(&m.latex());
            }
        }
        out
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (a.is_one(), m.is_one()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", m)?,
                (false, true) => write!(f, "{}", a)?,
                (false, false) => write!(f, "{}*{}", a, m)?,
            }
        }
        Ok(())
    }
}

impl From<Generator> for SymExpr {
    fn from(g: Generator) -> Self {
        SymExpr::generator(g)
    }
}

impl std::ops::Add for &SymExpr {
    type Output = SymExpr;
    fn add(self, rhs: &SymExpr) -> SymExpr {
        SymExpr::add(self, rhs)
    }
}

impl std::ops::Sub for &SymExpr {
    type Output = SymExpr;
    fn sub(self, rhs: &SymExpr) -> SymExpr {
        SymExpr::sub(self, rhs)
    }
}

impl std::ops::Mul for &SymExpr {
    type Output = SymExpr;
    fn mul(self, rhs: &SymExpr) -> SymExpr {
        SymExpr::mul(self, rhs)
    }
}

impl std::ops::Neg for &SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        SymExpr::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(p: &[u32]) -> SymExpr {
        SymExpr::zeta(p).unwrap()
    }
    fn d(p: &[u32]) -> SymExpr {
        SymExpr::delta(p).unwrap()
    }
    fn c() -> SymExpr {
        SymExpr::log2()
    }
    fn q(n: i64, den: i64) -> SymExpr {
        SymExpr::constant(rat(n, den))
    }

    #[test]
    fn add_examples() {
        assert!(z(&[2]).add(&z(&[2]).neg()).is_zero());
        let e = d(&[2]).scale(&int(2)).add(&c().pow(2));
        assert_eq!(e.len(), 2);
        assert_eq!(e.to_string(), "2*d[2] + c^2");
        let half = q(1, 2).mul(&z(&[5]));
        assert_eq!(half.add(&half), z(&[5]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(c().mul(&c()), SymExpr::term(int(1), Monomial::power(Generator::Log2, 2)));
        let p = z(&[2]).mul(&z(&[3]));
        let m = Monomial::from_factors([
            (Generator::zeta(&[2]).unwrap(), 1),
            (Generator::zeta(&[3]).unwrap(), 1),
        ]);
        assert_eq!(p, SymExpr::term(int(1), m));
        assert!(SymExpr::zero().mul(&z(&[4])).is_zero());
    }

    #[test]
    fn weight_examples() {
        let euler = z(&[2]).sub(&d(&[2]).scale(&int(2))).sub(&c().pow(2));
        assert_eq!(euler.weight(), Ok(2));
        assert_eq!(c().pow(3).mul(&z(&[2])).weight(), Ok(5));
        assert!(matches!(z(&[2]).add(&z(&[3])).weight(), Err(SymError::NotHomogeneous(..))));
        assert_eq!(SymExpr::one().weight(), Ok(0));
    }

    #[test]
    fn substitute_examples() {
        let d2 = Generator::delta(&[2]).unwrap();
        let repl = z(&[2]).sub(&c().pow(2)).scale(&rat(1, 2));
        let e = d(&[2]).scale(&int(2)).add(&c().pow(2));
        assert_eq!(e.substitute(&d2, &repl).unwrap(), z(&[2]));

        let z5 = Generator::zeta(&[5]).unwrap();
        let any = z(&[5]).mul(&c()).add(&d(&[3, 3]));
        assert_eq!(any.substitute(&z5, &z(&[5])).unwrap(), any);

        let d3 = Generator::delta(&[3]).unwrap();
        let landen = q(7, 8)
            .mul(&z(&[3]))
            .sub(&q(1, 2).mul(&c()).mul(&z(&[2])))
            .add(&q(1, 6).mul(&c().pow(3)));
        assert_eq!(d(&[3]).substitute(&d3, &landen).unwrap(), landen);

        assert!(matches!(
            d(&[3]).substitute(&d3, &z(&[2])),
            Err(SymError::WeightMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn substitution_of_powers() {
        let d2 = Generator::delta(&[2]).unwrap();
        let e = d(&[2]).pow(2).mul(&c());
        let out = e.substitute(&d2, &z(&[2])).unwrap();
        assert_eq!(out, z(&[2]).pow(2).mul(&c()));
    }

    #[test]
    fn zeta_admissibility_enforced() {
        assert!(matches!(Generator::zeta(&[1, 2]), Err(SymError::NotAdmissible(_))));
        assert!(Generator::delta(&[1, 2]).is_ok());
        assert!(Composition::new(vec![]).is_err());
        assert!(Composition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn all_ones_delta_folds_to_log_power() {
        assert_eq!(d(&[1]), c());
        assert_eq!(d(&[1, 1, 1]), q(1, 6).mul(&c().pow(3)));
    }

    #[test]
    fn generator_order_matches_elimination_preference() {
        let z3 = Generator::zeta(&[3]).unwrap();
        let z21 = Generator::zeta(&[2, 1]).unwrap();
        let d3 = Generator::delta(&[3]).unwrap();
        let d21 = Generator::delta(&[2, 1]).unwrap();
        let d12 = Generator::delta(&[1, 2]).unwrap();
        assert!(Generator::Log2 < z3);
        assert!(z3 < z21);
        assert!(z21 < d3);
        assert!(d3 < d12);
        assert!(d12 < d21);
        // weight dominates everything
        assert!(d3 < Generator::zeta(&[2, 2]).unwrap());
    }

    #[test]
    fn rendering() {
        let e = z(&[2]).sub(&d(&[2]).scale(&int(2))).sub(&c().pow(2));
        assert_eq!(e.to_string(), "-2*d[2] + z[2] - c^2");
        assert_eq!(e.latex(), "-2\\delta_{2} + \\zeta_{2} - (\\ln2)^{2}");
        assert_eq!(SymExpr::one().to_string(), "1");
        assert_eq!(q(-3, 4).to_string(), "-3/4");
        let m = c().pow(2).mul(&d(&[2, 1]));
        assert_eq!(m.to_string(), "d[2,1]*c^2");
    }

    fn arb_generator() -> impl Strategy<Value = Generator> {
        prop_oneof![
            Just(Generator::Log2),
            proptest::collection::vec(1u32..4, 1..4).prop_map(|mut p| {
                p[0] += 1;
                Generator::Zeta(Composition::new(p).unwrap())
            }),
            proptest::collection::vec(1u32..4, 1..4)
                .prop_map(|p| Generator::Delta(Composition::new(p).unwrap())),
        ]
    }

    fn arb_expr() -> impl Strategy<Value = SymExpr> {
        proptest::collection::vec(
            (
                -5i64..6,
                1i64..4,
                proptest::collection::vec((arb_generator(), 1u32..3), 0..3),
            ),
            0..4,
        )
        .prop_map(|terms| {
            SymExpr::from_terms(
                terms
                    .into_iter()
                    .map(|(n, d, f)| (Monomial::from_factors(f), rat(n, d))),
            )
        })
    }

    fn arb_homogeneous(w: u32) -> impl Strategy<Value = SymExpr> {
        proptest::collection::vec((-4i64..5, 0usize..64), 1..4).prop_map(move |terms| {
            let pool: Vec<Monomial> = homogeneous_monomials(w);
            SymExpr::from_terms(
                terms
                    .into_iter()
                    .map(|(n, i)| (pool[i % pool.len()].clone(), int(n))),
            )
        })
    }

    fn all_generators_up_to(w: u32) -> Vec<Generator> {
        let mut out = vec![Generator::Log2];
        for wt in 1..=w {
            for comp in Composition::all_of_weight(wt) {
                if comp.is_admissible() {
                    out.push(Generator::Zeta(comp.clone()));
                }
                out.push(Generator::Delta(comp));
            }
        }
        out
    }

    fn homogeneous_monomials(w: u32) -> Vec<Monomial> {
        // products of at most two generators
        let gens = all_generators_up_to(w);
        let mut out = Vec::new();
        for g in &gens {
            if g.weight() == w {
                out.push(Monomial::generator(g.clone()));
            }
            for h in &gens {
                if g.weight() + h.weight() == w {
                    out.push(Monomial::generator(g.clone()).mul(&Monomial::generator(h.clone())));
                }
            }
        }
        out
    }

    #[test]
    fn generator_order_is_strict_total() {
        let gens = all_generators_up_to(6);
        for a in &gens {
            for b in &gens {
                let ab = a.cmp(b);
                assert_eq!(ab, b.cmp(a).reverse());
                assert_eq!(ab == Ordering::Equal, a == b);
            }
        }
        let mut sorted = gens.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            assert_eq!(w[0].cmp(&w[1]), Ordering::Less);
        }
        // transitivity on a sample of triples
        for a in sorted.iter().step_by(7) {
            for b in sorted.iter().step_by(5) {
                for c in sorted.iter().step_by(3) {
                    if a < b && b < c {
                        assert!(a < c);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn weight_is_additive(
            (a, b) in (1u32..4, 1u32..4).prop_flat_map(|(wa, wb)| (arb_homogeneous(wa), arb_homogeneous(wb)))
        ) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!(a.mul(&b).weight().unwrap(), a.weight().unwrap() + b.weight().unwrap());
        }

        #[test]
        fn canonicalization_idempotent(a in arb_expr()) {
            let again = SymExpr::from_terms(a.terms().map(|(m, c)| (m.clone(), c.clone())));
            prop_assert_eq!(&again, &a);
            prop_assert!(a.terms().all(|(_, c)| !c.is_zero()));
        }
    }
}
