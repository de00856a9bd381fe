//! Arbitrary-precision values of delta values, MZVs and symbolic expressions.
//!
//! Delta values are summed directly (the `2^{-n}` weight makes the series
//! geometric). MZVs are split at `1/2`: the iterated integral over `[0,1]`
//! becomes a sum over prefix/suffix splits of products of two integrals over
//! `[0,1/2]`, and each of those is a delta value whose first index may be 1.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_rational::BigRational;
use thiserror::Error;

use crate::relations::{alt_ones, Relation};
use crate::symring::{Composition, Generator, SymError, SymExpr};

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericError {
    #[error("precision must have at least 10 digits and 5 guard digits")]
    BadPrecision,
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Requested decimal digits plus guard digits carried internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    pub digits: u32,
    pub guard: u32,
}

impl Precision {
    pub fn new(digits: u32, guard: u32) -> Result<Precision, NumericError> {
        if digits < 10 || guard < 5 {
            return Err(NumericError::BadPrecision);
        }
        Ok(Precision { digits, guard })
    }

    /// `digits` with the default 10 guard digits.
    pub fn digits(digits: u32) -> Result<Precision, NumericError> {
        Precision::new(digits, 10)
    }

    fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    fn bits(&self, extra_digits: u32) -> usize {
        (((self.working_digits() + extra_digits) as f64) * std::f64::consts::LOG2_10).ceil() as usize + 64
    }
}

/// An arbitrary-precision real together with the number of decimal digits
/// it is certified to.
#[derive(Clone, Debug)]
pub struct BigReal {
    value: BigFloat,
    digits: u32,
}

impl BigReal {
    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn raw_string(&self) -> String {
        let mut cc = Consts::new().expect("constant cache");
        self.value.format(Radix::Dec, RM, &mut cc).expect("finite value")
    }

    /// Scientific notation with `sig` significant digits, e.g. `1.6449e0`.
    pub fn to_sci_string(&self, sig: usize) -> String {
        let raw = self.raw_string();
        let (neg, body) = match raw.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, raw.as_str()),
        };
        let (mant, exp) = match body.split_once('e') {
            Some((m, e)) => (m, e.parse::<i64>().expect("decimal exponent")),
            None => (body, 0),
        };
        let mut digits: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
        if digits.iter().all(|&d| d == 0) {
            return "0".to_string();
        }
        // the formatter gives one leading digit before the point for nonzero values
        let mut exp = exp;
        let sig = sig.max(1);
        if digits.len() > sig {
            let round_up = digits[sig] >= 5;
            digits.truncate(sig);
            if round_up {
                let mut i = sig;
                loop {
                    if i == 0 {
                        digits.insert(0, 1);
                        digits.truncate(sig);
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if digits[i] == 9 {
                        digits[i] = 0;
                    } else {
                        digits[i] += 1;
                        break;
                    }
                }
            }
        }
        digits.resize(sig, 0);
        let text: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
        let (head, tail) = text.split_at(1);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(head);
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
        out.push_str(&format!("e{}", exp));
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.raw_string().parse().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> BigReal {
        BigReal {
            value: self.value.abs(),
            digits: self.digits,
        }
    }

    /// `|self| < 10^{-k}`.
    pub fn abs_below_pow10(&self, k: u32) -> bool {
        let p = self.value.precision().unwrap_or(256).max(128);
        let bound = BigFloat::from(10u64).powi(k as usize, p, RM).reciprocal(p, RM);
        // abs_cmp misreports negative left operands, so compare the absolute value
        self.value.abs().cmp(&bound).map(|c| c < 0).unwrap_or(false)
    }

    pub fn sub(&self, other: &BigReal) -> BigReal {
        let p = self.value.precision().unwrap_or(256).max(other.value.precision().unwrap_or(256));
        BigReal {
            value: self.value.sub(&other.value, p, RM),
            digits: self.digits.min(other.digits),
        }
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(self.digits as usize))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// Evaluator at a fixed precision with a shared cache of generator values.
pub struct Evaluator {
    prec: Precision,
    bits: usize,
    cache: Mutex<HashMap<Generator, BigFloat>>,
    deltas: Mutex<HashMap<Vec<u32>, BigFloat>>,
    consts: Mutex<Consts>,
}

impl Evaluator {
    pub fn new(prec: Precision) -> Evaluator {
        Evaluator {
            prec,
            bits: prec.bits(4),
            cache: Mutex::new(HashMap::new()),
            deltas: Mutex::new(HashMap::new()),
            consts: Mutex::new(Consts::new().expect("constant cache")),
        }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    fn wrap(&self, value: BigFloat) -> BigReal {
        BigReal {
            value,
            digits: self.prec.digits,
        }
    }

    fn ln2_raw(&self) -> BigFloat {
        self.consts.lock().expect("consts lock").ln_2(self.bits, RM)
    }

    pub fn ln2(&self) -> BigReal {
        self.wrap(self.ln2_raw())
    }

    /// Smallest `M` with `2^{-M} M^depth < 10^{-(digits + guard)}`.
    pub fn cutoff(&self, depth: usize) -> usize {
        let target = self.prec.working_digits() as f64 * std::f64::consts::LOG2_10;
        let mut m = 1usize;
        while (m as f64) - (depth as f64) * (m as f64).log2() < target {
            m += 1;
        }
        m
    }

    fn delta_raw(&self, parts: &[u32]) -> BigFloat {
        if let Some(v) = self.deltas.lock().expect("cache lock").get(parts) {
            return v.clone();
        }
        let v = self.sum_delta(parts);
        self.deltas
            .lock()
            .expect("cache lock")
            .insert(parts.to_vec(), v.clone());
        v
    }

    fn sum_delta(&self, parts: &[u32]) -> BigFloat {
        let p = self.bits;
        let m = self.cutoff(parts.len());
        let inv: Vec<BigFloat> = (0..=m)
            .map(|n| {
                if n == 0 {
                    BigFloat::from(0u64)
                } else {
                    BigFloat::from(n as u64).reciprocal(p, RM)
                }
            })
            .collect();
        let inv_pow = |n: usize, s: u32| inv[n].powi(s as usize, p, RM);
        // level j value at n: n^{-s_j} * sum_{m < n} (level j+1 at m)
        let k = parts.len();
        let mut level: Vec<BigFloat> = (0..=m)
            .map(|n| if n == 0 { BigFloat::from(0u64) } else { inv_pow(n, parts[k - 1]) })
            .collect();
        for j in (0..k - 1).rev() {
            let mut next = vec![BigFloat::from(0u64); m + 1];
            let mut prefix = BigFloat::from(0u64);
            for n in 1..=m {
                next[n] = prefix.mul(&inv_pow(n, parts[j]), p, RM);
                prefix = prefix.add(&level[n], p, RM);
            }
            level = next;
        }
        let half = BigFloat::from(2u64).reciprocal(p, RM);
        let mut weight = half.clone();
        let mut total = BigFloat::from(0u64);
        for item in level.iter().skip(1) {
            total = total.add(&item.mul(&weight, p, RM), p, RM);
            weight = weight.mul(&half, p, RM);
        }
        total
    }

    /// `sum_{n_1 > ... > n_k >= 1} 2^{-n_1} / prod n_i^{s_i}`; the first part may be 1.
    pub fn eval_delta(&self, comp: &Composition) -> BigReal {
        self.wrap(self.delta_raw(comp.parts()))
    }

    fn zeta_raw(&self, comp: &Composition) -> BigFloat {
        // letters: false = dt/t, true = dt/(1-t)
        let mut word = Vec::new();
        for &s in comp.parts() {
            word.extend(std::iter::repeat_n(false, s as usize - 1));
            word.push(true);
        }
        let p = self.bits;
        let mut total = BigFloat::from(0u64);
        for split in 0..=word.len() {
            let (u, v) = word.split_at(split);
            let flipped: Vec<bool> = u.iter().rev().map(|&x| !x).collect();
            let a = self.half_integral(&flipped);
            let b = self.half_integral(v);
            total = total.add(&a.mul(&b, p, RM), p, RM);
        }
        total
    }

    /// Iterated integral over `[0, 1/2]` of a word ending in `dt/(1-t)`.
    fn half_integral(&self, word: &[bool]) -> BigFloat {
        if word.is_empty() {
            return BigFloat::from(1u64);
        }
        let mut parts = Vec::new();
        let mut run = 1u32;
        for &x in word {
            if x {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        self.delta_raw(&parts)
    }

    pub fn eval_zeta(&self, comp: &Composition) -> Result<BigReal, NumericError> {
        if !comp.is_admissible() {
            return Err(SymError::NotAdmissible(comp.clone()).into());
        }
        Ok(self.wrap(self.generator_raw(&Generator::Zeta(comp.clone()))))
    }

    fn generator_raw(&self, g: &Generator) -> BigFloat {
        if let Some(v) = self.cache.lock().expect("cache lock").get(g) {
            return v.clone();
        }
        let v = match g {
            Generator::Log2 => self.ln2_raw(),
            Generator::Zeta(comp) => self.zeta_raw(comp),
            Generator::Delta(comp) => self.delta_raw(comp.parts()),
        };
        self.cache
            .lock()
            .expect("cache lock")
            .insert(g.clone(), v.clone());
        v
    }

    pub fn eval_generator(&self, g: &Generator) -> BigReal {
        self.wrap(self.generator_raw(g))
    }

    fn rational(&self, q: &BigRational) -> BigFloat {
        let p = self.bits;
        let mut cc = self.consts.lock().expect("consts lock");
        let n = BigFloat::parse(&q.numer().to_string(), Radix::Dec, p, RM, &mut cc);
        let d = BigFloat::parse(&q.denom().to_string(), Radix::Dec, p, RM, &mut cc);
        n.div(&d, p, RM)
    }

    pub fn eval_symexpr(&self, e: &SymExpr) -> BigReal {
        let p = self.bits;
        let mut total = BigFloat::from(0u64);
        for (m, q) in e.terms() {
            let mut term = self.rational(q);
            for (g, k) in m.factors() {
                let v = self.generator_raw(g).powi(*k as usize, p, RM);
                term = term.mul(&v, p, RM);
            }
            total = total.add(&term, p, RM);
        }
        self.wrap(total)
    }

    /// Closed form of `Li_{1,...,1}(-1,...,-1)` and its value.
    pub fn eval_alt_ones(&self, n: u32) -> (SymExpr, BigReal) {
        let e = alt_ones(n);
        let v = self.eval_symexpr(&e);
        (e, v)
    }

    /// Pass iff `|value| < 10^{-(digits - 5)}`.
    pub fn verify_relation(&self, rel: &Relation) -> (BigReal, Verdict) {
        let r = self.eval_symexpr(&rel.expr);
        let verdict = if r.abs_below_pow10(self.prec.digits - 5) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        (r, verdict)
    }
}

/// One-shot helpers using a fresh evaluator.
pub fn eval_delta(comp: &Composition, prec: Precision) -> BigReal {
    Evaluator::new(prec).eval_delta(comp)
}

pub fn eval_zeta(comp: &Composition, prec: Precision) -> Result<BigReal, NumericError> {
    Evaluator::new(prec).eval_zeta(comp)
}

pub fn eval_symexpr(e: &SymExpr, prec: Precision) -> BigReal {
    Evaluator::new(prec).eval_symexpr(e)
}

pub fn eval_alt_ones(n: u32, prec: Precision) -> (SymExpr, BigReal) {
    Evaluator::new(prec).eval_alt_ones(n)
}

pub fn verify_relation(rel: &Relation, prec: Precision) -> (BigReal, Verdict) {
    Evaluator::new(prec).verify_relation(rel)
}
