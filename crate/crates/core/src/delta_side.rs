//! Associator series with delta-value coefficients.
//!
//! `Phi = exp(c B) Xi_{B,A} (Xi_{A,B})^{-1} exp(-c A)` where `c = ln 2` and
//!
//! ```text
//! Xi_{B,A} = 1 + sum_{r >= 1} sum_{l_1..l_r} I_{l_1..l_r} ad_B^{l_1}(A) ... ad_B^{l_r}(A)
//! ```
//!
//! The iterated integrals `I` (kernel `tau^l / (2 e^tau - 1)`) are rewritten
//! exactly as binomial-weighted sums of delta values.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;

use crate::freealg::{ad_power_poly, exp_letter, wordpoly_mul, Letter, NCSeries, Word, WordPoly};
use crate::symring::SymExpr;

/// Subscript `(l_1, ..., l_r)` of an iterated integral; its degree is `r + sum l_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexWord(pub Vec<u32>);

impl IndexWord {
    pub fn new(indices: &[u32]) -> IndexWord {
        IndexWord(indices.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32 + self.0.iter().sum::<u32>()
    }

    /// All nonempty index words of exact `degree`, ordered by length and
    /// then lexicographically.
    pub fn all_of_degree(degree: u32) -> Vec<IndexWord> {
        let mut out = Vec::new();
        for r in 1..=degree {
            let mut words = Vec::new();
            fill(degree - r, r as usize, &mut Vec::new(), &mut words);
            words.sort();
            out.extend(words.into_iter().map(IndexWord));
        }
        out
    }

    /// All nonempty index words with degree `1..=max_degree`, ordered by
    /// degree, then length, then lexicographically.
    pub fn up_to_degree(max_degree: u32) -> Vec<IndexWord> {
        (1..=max_degree).flat_map(IndexWord::all_of_degree).collect()
    }
}

fn fill(rest: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if slots == 0 {
        if rest == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for x in 0..=rest {
        cur.push(x);
        fill(rest - x, slots - 1, cur, out);
        cur.pop();
    }
}

impl fmt::Display for IndexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `I_{l_1..l_r}` as a combination of delta values.
///
/// Sums over `0 <= m_j <= l_j + m_{j-1}` (`j < r`, `m_0 = 0`) of
/// `prod_{j>=2} C(l_j + m_{j-1}, l_j)` times the delta value whose parts, read
/// from `j = r` down to `j = 1`, are `l_j + m_{j-1} - m_j + 1` (with `m_r = 0`).
pub fn iint_to_sym(ix: &IndexWord) -> SymExpr {
    let l = &ix.0;
    let r = l.len();
    if r == 0 {
        return SymExpr::one();
    }
    let mut out = SymExpr::zero();
    let mut m = vec![0u32; r + 1]; // m[0] = m[r] = 0
    accumulate(l, 1, &mut m, BigInt::from(1), &mut out);
    out
}

fn accumulate(l: &[u32], j: usize, m: &mut Vec<u32>, weight: BigInt, out: &mut SymExpr) {
    let r = l.len();
    if j == r {
        let parts: Vec<u32> = (1..=r)
            .rev()
            .map(|k| l[k - 1] + m[k - 1] - m[k] + 1)
            .collect();
        let delta = SymExpr::delta(&parts).expect("parts are positive");
        let last = binomial(BigInt::from(l[r - 1] + m[r - 1]), BigInt::from(l[r - 1]));
        out.add_scaled(&delta, &BigRational::from_integer(weight * last));
        return;
    }
    // choose m_j in 0..=l_j + m_{j-1}; factor C(l_j + m_{j-1}, l_j) belongs to j >= 2
    let factor = if j >= 2 {
        binomial(BigInt::from(l[j - 1] + m[j - 1]), BigInt::from(l[j - 1]))
    } else {
        BigInt::from(1)
    };
    let bound = l[j - 1] + m[j - 1];
    for mj in 0..=bound {
        m[j] = mj;
        accumulate(l, j + 1, m, &weight * &factor, out);
    }
    m[j] = 0;
}

fn iint_cache() -> &'static Mutex<HashMap<IndexWord, SymExpr>> {
    static CACHE: OnceLock<Mutex<HashMap<IndexWord, SymExpr>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized [`iint_to_sym`].
pub fn iint_cached(ix: &IndexWord) -> SymExpr {
    if let Some(v) = iint_cache().lock().expect("cache lock").get(ix) {
        return v.clone();
    }
    let v = iint_to_sym(ix);
    iint_cache()
        .lock()
        .expect("cache lock")
        .insert(ix.clone(), v.clone());
    v
}

/// `Xi_{actor, argument}` truncated at `order`; `actor = B` gives `Xi_{B,A}`.
pub fn xi_series(actor: Letter, order: usize) -> NCSeries {
    let argument = actor.other();
    let ads: Vec<WordPoly> = (0..order)
        .map(|m| ad_power_poly(actor, argument, m))
        .collect();
    let mut series = NCSeries::unit(order);
    let mut prefix = Vec::new();
    let mut unit_poly = WordPoly::new();
    unit_poly.insert(Word::empty(), BigInt::from(1));
    extend_xi(order, &ads, &mut prefix, &unit_poly, &mut series);
    series
}

fn extend_xi(
    budget: usize,
    ads: &[WordPoly],
    prefix: &mut Vec<u32>,
    poly: &WordPoly,
    series: &mut NCSeries,
) {
    for l in 0..budget {
        // each factor ad^l(argument) has degree l + 1
        if l + 1 > budget {
            break;
        }
        prefix.push(l as u32);
        let next = wordpoly_mul(poly, &ads[l]);
        let coeff = iint_cached(&IndexWord(prefix.clone()));
        for (w, k) in &next {
            series.add_term(*w, &coeff.scale(&BigRational::from_integer(k.clone())));
        }
        extend_xi(budget - l - 1, ads, prefix, &next, series);
        prefix.pop();
    }
}

/// The associator truncated at degree `order`, delta-value form.
pub fn phi_delta(order: usize) -> NCSeries {
    let left = exp_letter(Letter::B, 1, order);
    let xi_ba = xi_series(Letter::B, order);
    let xi_ab_inv = xi_series(Letter::A, order)
        .inverse()
        .expect("Xi has constant term 1");
    let right = exp_letter(Letter::A, -1, order);
    left.mul(&xi_ba)
        .and_then(|s| s.mul(&xi_ab_inv))
        .and_then(|s| s.mul(&right))
        .expect("all factors share the truncation order")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symring::{rat, Generator};

    fn d(p: &[u32]) -> SymExpr {
        SymExpr::delta(p).unwrap()
    }
    fn c() -> SymExpr {
        SymExpr::log2()
    }
    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn iint_examples() {
        assert_eq!(iint_to_sym(&IndexWord::new(&[0, 0, 0])), c().pow(3).scale(&rat(1, 6)));
        assert_eq!(iint_to_sym(&IndexWord::new(&[2])), d(&[3]));
        assert_eq!(
            iint_to_sym(&IndexWord::new(&[1, 1])),
            d(&[2, 2]).add(&d(&[3, 1]).scale(&rat(2, 1)))
        );
        assert_eq!(iint_to_sym(&IndexWord::new(&[])), SymExpr::one());
    }

    #[test]
    fn iint_two_index_special_case() {
        // I_{l1 l2} = sum_{m=0}^{l1} C(l2+m, l2) delta_{l2+m+1, l1-m+1}
        for l1 in 0..4u32 {
            for l2 in 0..4u32 {
                let mut expected = SymExpr::zero();
                for m in 0..=l1 {
                    let b = binomial(BigInt::from(l2 + m), BigInt::from(l2));
                    expected.add_scaled(&d(&[l2 + m + 1, l1 - m + 1]), &BigRational::from_integer(b));
                }
                assert_eq!(iint_to_sym(&IndexWord::new(&[l1, l2])), expected);
            }
        }
    }

    #[test]
    fn known_small_integrals() {
        assert_eq!(iint_to_sym(&IndexWord::new(&[0, 1])), d(&[2, 1]));
        assert_eq!(iint_to_sym(&IndexWord::new(&[1, 0])), d(&[1, 2]).add(&d(&[2, 1])));
        assert_eq!(iint_to_sym(&IndexWord::new(&[0, 3])), d(&[4, 1]));
        assert_eq!(iint_to_sym(&IndexWord::new(&[0, 0, 2])), d(&[3, 1, 1]));
    }

    #[test]
    fn all_zero_indices_are_log_powers() {
        let mut fact = 1i64;
        for r in 1..=8usize {
            fact *= r as i64;
            let ix = IndexWord(vec![0; r]);
            assert_eq!(iint_to_sym(&ix), c().pow(r as u32).scale(&rat(1, fact)));
        }
    }

    #[test]
    fn iint_weight_is_degree() {
        for ix in IndexWord::up_to_degree(6) {
            assert_eq!(iint_to_sym(&ix).weight().unwrap(), ix.degree(), "{}", ix);
        }
    }

    #[test]
    fn index_word_enumeration() {
        let words: Vec<String> = IndexWord::up_to_degree(3).iter().map(|x| x.to_string()).collect();
        assert_eq!(words, ["[0]", "[1]", "[0,0]", "[2]", "[0,1]", "[1,0]", "[0,0,0]"]);
        for d in 1..=8 {
            assert_eq!(IndexWord::all_of_degree(d).len(), 1 << (d - 1));
        }
    }

    #[test]
    fn xi_examples() {
        let xi1 = xi_series(Letter::B, 1);
        let mut expected = NCSeries::unit(1);
        expected.add_term(w("A"), &c());
        assert_eq!(xi1, expected);

        let xi2 = xi_series(Letter::B, 2);
        let mut expected = NCSeries::unit(2);
        expected.add_term(w("A"), &c());
        expected.add_term(w("AA"), &c().pow(2).scale(&rat(1, 2)));
        expected.add_term(w("BA"), &d(&[2]));
        expected.add_term(w("AB"), &d(&[2]).neg());
        assert_eq!(xi2, expected);

        let xi = xi_series(Letter::B, 6);
        for k in 1..=6 {
            assert!(xi.coeff(&Word::power(Letter::B, k)).unwrap().is_zero());
        }
        assert_eq!(xi_series(Letter::A, 5), xi_series(Letter::B, 5).swap());
        for (_, coeff) in xi.terms() {
            assert!(coeff
                .generators()
                .iter()
                .all(|g| matches!(g, Generator::Log2 | Generator::Delta(_))));
        }
    }

    #[test]
    fn phi_delta_low_orders() {
        let phi = phi_delta(2);
        assert_eq!(phi.coeff(&Word::empty()).unwrap(), SymExpr::one());
        assert!(phi.coeff(&w("A")).unwrap().is_zero());
        assert!(phi.coeff(&w("B")).unwrap().is_zero());
        let k = c().pow(2).add(&d(&[2]).scale(&rat(2, 1)));
        assert_eq!(phi.coeff(&w("BA")).unwrap(), k);
        assert_eq!(phi.coeff(&w("AB")).unwrap(), k.neg());
        assert!(phi.coeff(&w("AA")).unwrap().is_zero());
        assert!(phi.coeff(&w("BB")).unwrap().is_zero());
        assert_eq!(phi_delta(0), NCSeries::unit(0));
    }

    #[test]
    fn phi_delta_is_swap_inverse_exactly() {
        for n in 0..=5 {
            let phi = phi_delta(n);
            assert_eq!(phi.mul(&phi.swap()).unwrap(), NCSeries::unit(n), "order {}", n);
        }
    }

    #[test]
    fn grading_holds() {
        assert!(phi_delta(6).check_weight_grading().is_ok());
        assert!(xi_series(Letter::B, 6).check_weight_grading().is_ok());
    }
}
