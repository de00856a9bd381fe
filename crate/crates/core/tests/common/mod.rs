//! Fixtures shared by the integration tests: the target relations in the
//! forms printed in the paper, and independent numeric oracles.
#![allow(dead_code)]

use assoclab::delta_side::{iint_to_sym, IndexWord};
use assoclab::symring::{rat, SymExpr};
use astro_float::{BigFloat, Consts, Radix, RoundingMode};

pub fn z(p: &[u32]) -> SymExpr {
    SymExpr::zeta(p).unwrap()
}

pub fn d(p: &[u32]) -> SymExpr {
    SymExpr::delta(p).unwrap()
}

pub fn c() -> SymExpr {
    SymExpr::log2()
}

pub fn i(p: &[u32]) -> SymExpr {
    iint_to_sym(&IndexWord::new(p))
}

/// `sum q_k e_k` with `q_k = n/m`.
pub fn lin(terms: &[(i64, i64, SymExpr)]) -> SymExpr {
    terms
        .iter()
        .fold(SymExpr::zero(), |acc, (n, m, e)| acc.add(&e.scale(&rat(*n, *m))))
}

/// `lhs - rhs`.
pub fn eq(lhs: SymExpr, rhs: SymExpr) -> SymExpr {
    lhs.sub(&rhs)
}

pub fn euler() -> SymExpr {
    eq(z(&[2]), lin(&[(2, 1, d(&[2])), (1, 1, c().pow(2))]))
}

/// Hoelder convolution `zeta_{n+2} = delta_{2,1^n} + sum_r c^{n+2-r}/(n+2-r)! delta_r`.
pub fn hoelder(n: u32) -> SymExpr {
    let mut parts = vec![2];
    parts.extend(std::iter::repeat_n(1, n as usize));
    let mut rhs = d(&parts);
    let mut fact = 1i64;
    for r in (1..=n + 2).rev() {
        let k = n + 2 - r;
        if k > 0 {
            fact *= k as i64;
        }
        rhs = rhs.add(&c().pow(k).mul(&d(&[r])).scale(&rat(1, fact)));
    }
    eq(z(&[n + 2]), rhs)
}

pub fn zeta3_convolution() -> SymExpr {
    eq(
        z(&[3]),
        lin(&[(1, 1, d(&[2, 1])), (1, 2, c().pow(3)), (1, 1, d(&[2]).mul(&c())), (1, 1, d(&[3]))]),
    )
}

pub fn zeta4_convolution() -> SymExpr {
    eq(
        z(&[4]),
        lin(&[
            (1, 1, d(&[2, 1, 1])),
            (1, 6, c().pow(4)),
            (1, 2, d(&[2]).mul(&c().pow(2))),
            (1, 1, d(&[3]).mul(&c())),
            (1, 1, d(&[4])),
        ]),
    )
}

/// The introduction's fourth-order relation, exactly as printed there.
pub fn order_four_as_printed() -> SymExpr {
    eq(
        z(&[4]).scale(&rat(1, 4)),
        lin(&[(2, 1, d(&[3, 1])), (1, 1, d(&[2, 1]).mul(&c())), (1, 4, c().pow(4))]),
    )
}

/// The same relation as derived in the relations section: `2c` instead of `c`.
pub fn order_four_derived() -> SymExpr {
    eq(
        lin(&[(2, 1, c().mul(&d(&[2, 1]))), (2, 1, d(&[3, 1])), (1, 4, c().pow(4))]),
        z(&[4]).scale(&rat(1, 4)),
    )
}

pub fn zeta5_convolution() -> SymExpr {
    eq(
        z(&[5]),
        lin(&[
            (1, 1, d(&[2, 1, 1, 1])),
            (1, 24, c().pow(5)),
            (1, 6, d(&[2]).mul(&c().pow(3))),
            (1, 2, d(&[3]).mul(&c().pow(2))),
            (1, 1, d(&[4]).mul(&c())),
            (1, 1, d(&[5])),
        ]),
    )
}

pub fn zeta41_relation() -> SymExpr {
    eq(
        z(&[4, 1]),
        lin(&[
            (1, 1, d(&[4, 1])),
            (1, 1, d(&[3, 1]).mul(&c())),
            (1, 2, d(&[2, 1]).mul(&c().pow(2))),
            (1, 1, d(&[3, 1, 1])),
            (1, 1, d(&[2, 1, 1]).mul(&c())),
            (1, 12, c().pow(5)),
        ]),
    )
}

pub fn zeta2_delta21_relation() -> SymExpr {
    let bracket = lin(&[(1, 2, c().pow(2)), (1, 1, z(&[2]))]);
    let paren = lin(&[(1, 2, d(&[2]).pow(2)), (1, 1, d(&[3, 1]))]);
    eq(
        lin(&[(3, 1, z(&[4, 1])), (1, 1, z(&[3, 2]))]),
        lin(&[
            (1, 1, d(&[3, 2])),
            (3, 1, d(&[4, 1])),
            (1, 1, paren.mul(&c())),
            (1, 1, bracket.mul(&d(&[2, 1]))),
            (-3, 1, d(&[3, 1, 1])),
            (-2, 1, d(&[2, 2, 1])),
            (-1, 1, d(&[2, 1, 2])),
            (1, 4, z(&[2]).mul(&c().pow(3))),
        ]),
    )
}

/// First fifth-order output relation of the hand expansion, in `I` symbols.
pub fn new_relation_1() -> SymExpr {
    eq(
        lin(&[
            (1, 1, i(&[0, 3])),
            (1, 1, c().mul(&i(&[0, 2]))),
            (1, 2, c().pow(2).mul(&i(&[0, 1]))),
            (1, 1, i(&[0, 0, 2])),
            (1, 1, c().mul(&i(&[0, 0, 1]))),
            (1, 12, c().pow(5)),
        ]),
        lin(&[(2, 1, z(&[5])), (-1, 1, z(&[3]).mul(&z(&[2])))]),
    )
}

pub fn middle_relation() -> SymExpr {
    eq(
        lin(&[
            (1, 1, i(&[4])),
            (1, 1, c().mul(&i(&[3]))),
            (1, 2, c().pow(2).mul(&i(&[2]))),
            (1, 6, c().pow(3).mul(&i(&[1]))),
            (1, 1, i(&[0, 0, 0, 1])),
            (1, 24, c().pow(5)),
        ]),
        z(&[5]),
    )
}

pub fn new_relation_2() -> SymExpr {
    let bracket = lin(&[(1, 2, c().pow(2)), (1, 1, z(&[2]))]);
    eq(
        lin(&[
            (1, 1, i(&[1, 2])),
            (1, 2, c().mul(&i(&[1]).pow(2))),
            (1, 1, c().mul(&i(&[0, 2]))),
            (1, 1, bracket.mul(&i(&[0, 1]))),
            (1, 1, i(&[0, 0, 2])),
            (-1, 1, i(&[1, 0, 1])),
            (-1, 1, i(&[0, 1, 1])),
            (1, 4, c().pow(3).mul(&z(&[2]))),
        ]),
        z(&[5]).scale(&rat(1, 2)),
    )
}

/// The first "revealed importance" relation for `delta_{4,1}`.
pub fn delta41_as_printed() -> SymExpr {
    lin(&[
        (1, 1, d(&[4, 1])),
        (-1, 1, c().mul(&d(&[4]))),
        (-125, 64, z(&[5])),
        (-47, 48, c().pow(2).mul(&z(&[3]))),
        (47, 48, z(&[2]).mul(&z(&[3]))),
        (9, 8, c().mul(&z(&[4]))),
        (5, 18, c().pow(3).mul(&z(&[2]))),
        (-13, 360, c().pow(5)),
    ])
}

const RM: RoundingMode = RoundingMode::ToEven;
/// Fixed-point scale of the brute-force delta oracle: values are integers times 2^-110.
pub const ORACLE_BITS: u32 = 110;
pub const ORACLE_N1: u64 = 100;

/// Brute-force `sum_{N1 >= n_1 > ... > n_k >= 1} 2^{-n_1} / prod n_i^{s_i}` in
/// i128 fixed point; every tuple is visited.
pub fn brute_delta_fixed(parts: &[u32]) -> i128 {
    fn rec(parts: &[u32], below: u64, t: i128) -> i128 {
        let Some((&s, rest)) = parts.split_first() else {
            return t;
        };
        let mut total = 0i128;
        for n in 1..below {
            let v = t / (n as i128).pow(s);
            if v == 0 {
                continue;
            }
            total += rec(rest, n, v);
        }
        total
    }
    let (&s1, rest) = parts.split_first().unwrap();
    let mut total = 0i128;
    for n1 in 1..=ORACLE_N1 {
        let t = (1i128 << (ORACLE_BITS - n1 as u32)) / (n1 as i128).pow(s1);
        total += rec(rest, n1, t);
    }
    total
}

pub fn fixed_to_bigfloat(x: i128, p: usize) -> BigFloat {
    let mut cc = Consts::new().unwrap();
    let n = BigFloat::parse(&x.to_string(), Radix::Dec, p, RM, &mut cc);
    let scale = BigFloat::from(2u64).powi(ORACLE_BITS as usize, p, RM);
    n.div(&scale, p, RM)
}

/// `|a - b| < 10^{-k}`.
pub fn within(a: &BigFloat, b: &BigFloat, k: u32) -> bool {
    let p = 512;
    let bound = BigFloat::from(10u64).powi(k as usize, p, RM).reciprocal(p, RM);
    a.sub(b, p, RM).abs().cmp(&bound).map(|o| o < 0).unwrap()
}

pub fn pi_squared_over_6(p: usize) -> BigFloat {
    let mut cc = Consts::new().unwrap();
    let pi = cc.pi(p, RM);
    pi.mul(&pi, p, RM).div(&BigFloat::from(6u64), p, RM)
}

/// Truncated nested sum `sum_{N >= n_1 > ... > n_k} prod n_i^{-s_i}` in f64,
/// with a rigorous bound on the omitted tail.
pub fn zeta_f64_with_tail(parts: &[u32], n: usize) -> (f64, f64) {
    let k = parts.len();
    let mut level: Vec<f64> = (0..=n)
        .map(|m| if m == 0 { 0.0 } else { (m as f64).powi(-(parts[k - 1] as i32)) })
        .collect();
    for j in (0..k - 1).rev() {
        let mut next = vec![0.0; n + 1];
        let mut prefix = 0.0;
        for m in 1..=n {
            next[m] = prefix * (m as f64).powi(-(parts[j] as i32));
            prefix += level[m];
        }
        level = next;
    }
    let value: f64 = level.iter().sum();
    // inner sums are at most H(m-1)^{k-1}/(k-1)! <= (1 + ln m)^{k-1}/(k-1)!, so the
    // tail is bounded by the integral of (1 + ln x)^{k-1} x^{-s_1} over [n, inf)
    // (the integrand is decreasing there)
    let kk = (k - 1) as i32;
    let a = (parts[0] - 1) as f64;
    let t0 = (n as f64).ln();
    let mut fact_k = 1.0;
    for q in 1..=kk {
        fact_k *= q as f64;
    }
    let mut integral = 0.0;
    let mut falling = 1.0;
    for j in 0..=kk {
        integral += falling * (1.0 + t0).powi(kk - j) / a.powi(j + 1);
        falling *= (kk - j) as f64;
    }
    integral *= (-a * t0).exp();
    (value, integral / fact_k + 1e-12)
}
