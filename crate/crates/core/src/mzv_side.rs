//! Associator series with multiple zeta value coefficients.
//!
//! Direct transcription of the closed nested-binomial formula: for every
//! interleaved composition `(p1, q1, ..., pg, qg)` of the degree, the MZV
//! `zeta(p1+1, {1}^(q1-1), ..., pg+1, {1}^(qg-1))` with sign `(-1)^(sum q)`
//! multiplies
//!
//! ```text
//! sum_{s_i <= p_i, t_i <= q_i} prod (-1)^(s_i+t_i) C(p_i,s_i) C(q_i,t_i)
//!     B^(sum t) A^(p1-s1) B^(q1-t1) ... A^(pg-sg) B^(qg-tg) A^(sum s)
//! ```
//!
//! Coefficients are emitted as raw generators; no duality or shuffle
//! normalization happens here.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::Zero;

use crate::freealg::{Letter, NCSeries, Word};
use crate::symring::{Composition, Generator, SymExpr};

/// Interleaved composition `(p1, q1, ..., pg, qg)` with all entries positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PQComposition {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

impl PQComposition {
    pub fn g(&self) -> usize {
        self.p.len()
    }

    pub fn degree(&self) -> u32 {
        self.p.iter().sum::<u32>() + self.q.iter().sum::<u32>()
    }

    pub fn interleaved(&self) -> Vec<u32> {
        self.p.iter().zip(&self.q).flat_map(|(&a, &b)| [a, b]).collect()
    }

    /// Index composition `(p1+1, {1}^(q1-1), ..., pg+1, {1}^(qg-1))`.
    pub fn zeta_index(&self) -> Composition {
        let mut parts = Vec::new();
        for (&p, &q) in self.p.iter().zip(&self.q) {
            parts.push(p + 1);
            parts.extend(std::iter::repeat_n(1, q as usize - 1));
        }
        Composition::new(parts).expect("entries are positive")
    }

    /// Recovers `(p, q)` from an admissible composition; inverse of [`Self::zeta_index`].
    pub fn from_zeta_index(comp: &Composition) -> Option<PQComposition> {
        if !comp.is_admissible() {
            return None;
        }
        let mut p = Vec::new();
        let mut q = Vec::new();
        for &part in comp.parts() {
            if part >= 2 {
                p.push(part - 1);
                q.push(1);
            } else {
                *q.last_mut()? += 1;
            }
        }
        Some(PQComposition { p, q })
    }

    /// The dual index: reverse the interleaving and exchange the roles of `p` and `q`.
    pub fn dual(&self) -> PQComposition {
        PQComposition {
            p: self.q.iter().rev().copied().collect(),
            q: self.p.iter().rev().copied().collect(),
        }
    }

    pub fn sign(&self) -> i32 {
        if self.q.iter().sum::<u32>() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// All `(g, p, q)` with `sum(p_i + q_i) = r`, ordered by `g` ascending and then
/// reverse-lexicographically on the interleaved tuple.
pub fn enumerate_pq(r: u32) -> Vec<PQComposition> {
    let mut out = Vec::new();
    for g in 1..=(r / 2) as usize {
        let mut tuples = Vec::new();
        compositions_with_parts(r, 2 * g, &mut Vec::new(), &mut tuples);
        tuples.sort_by(|a, b| b.cmp(a));
        for t in tuples {
            out.push(PQComposition {
                p: t.iter().step_by(2).copied().collect(),
                q: t.iter().skip(1).step_by(2).copied().collect(),
            });
        }
    }
    out
}

fn compositions_with_parts(rest: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 0 {
        if rest == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if rest < parts as u32 {
        return;
    }
    for first in 1..=rest - (parts as u32 - 1) {
        cur.push(first);
        compositions_with_parts(rest - first, parts - 1, cur, out);
        cur.pop();
    }
}

/// Integer-coefficient word expansion attached to one `(p, q)` term, without
/// the MZV and its sign.
pub fn pq_word_expansion(pq: &PQComposition) -> BTreeMap<Word, BigInt> {
    let g = pq.g();
    let mut out: BTreeMap<Word, BigInt> = BTreeMap::new();
    let mut s = vec![0u32; g];
    let mut t = vec![0u32; g];
    loop {
        let mut coeff = BigInt::from(1);
        let mut parity = 0;
        for i in 0..g {
            coeff *= binomial(BigInt::from(pq.p[i]), BigInt::from(s[i]));
            coeff *= binomial(BigInt::from(pq.q[i]), BigInt::from(t[i]));
            parity += s[i] + t[i];
        }
        if parity % 2 == 1 {
            coeff = -coeff;
        }
        let mut word = Word::power(Letter::B, t.iter().sum::<u32>() as usize);
        for i in 0..g {
            word = word
                .concat(&Word::power(Letter::A, (pq.p[i] - s[i]) as usize))
                .concat(&Word::power(Letter::B, (pq.q[i] - t[i]) as usize));
        }
        word = word.concat(&Word::power(Letter::A, s.iter().sum::<u32>() as usize));
        *out.entry(word).or_insert_with(BigInt::zero) += coeff;

        // odometer over (s_1, t_1, ..., s_g, t_g)
        let mut i = 0;
        loop {
            if i == 2 * g {
                out.retain(|_, c| !c.is_zero());
                return out;
            }
            let (slot, bound) = if i % 2 == 0 {
                (&mut s[i / 2], pq.p[i / 2])
            } else {
                (&mut t[i / 2], pq.q[i / 2])
            };
            if *slot < bound {
                *slot += 1;
                break;
            }
            *slot = 0;
            i += 1;
        }
    }
}

/// The associator truncated at degree `order`, MZV-coefficient form.
pub fn phi_mzv(order: usize) -> NCSeries {
    let mut series = NCSeries::unit(order);
    for r in 2..=order as u32 {
        for pq in enumerate_pq(r) {
            let zeta = SymExpr::generator(Generator::Zeta(pq.zeta_index()));
            let signed = zeta.scale(&BigRational::from_integer(BigInt::from(pq.sign())));
            for (w, k) in pq_word_expansion(&pq) {
                series.add_term(w, &signed.scale(&BigRational::from_integer(k)));
            }
        }
    }
    series
}
