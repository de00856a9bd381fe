//! Invariant checks run by `assoclab selftest`.

use std::fmt;

use crate::delta_side::{iint_to_sym, phi_delta, xi_series, IndexWord};
use crate::freealg::{ad_power, exp_letter, Letter, NCSeries, Word};
use crate::mzv_side::{enumerate_pq, phi_mzv};
use crate::numeric::{Evaluator, Precision, Verdict};
use crate::relations::{extract_relations, reduce, shuffle, standard_aux, ReduceOptions, RelationSpace};
use crate::symring::{rat, Composition, SymExpr};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{} {}", tag, self.name)
        } else {
            write!(f, "{} {}: {}", tag, self.name, self.detail)
        }
    }
}

fn check(name: &'static str, result: Result<(), String>) -> Check {
    match result {
        Ok(()) => Check {
            name,
            passed: true,
            detail: String::new(),
        },
        Err(detail) => Check {
            name,
            passed: false,
            detail,
        },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn log_powers() -> Result<(), String> {
    let mut fact = 1i64;
    for r in 1..=8u32 {
        fact *= r as i64;
        let got = iint_to_sym(&IndexWord(vec![0; r as usize]));
        let want = SymExpr::log2().pow(r).scale(&rat(1, fact));
        ensure(got == want, || format!("I_0^{} = {}", r, got))?;
    }
    Ok(())
}

fn iint_weights() -> Result<(), String> {
    for ix in IndexWord::up_to_degree(6) {
        let w = iint_to_sym(&ix).weight().map_err(|e| e.to_string())?;
        ensure(w == ix.degree(), || format!("I{} has weight {}", ix, w))?;
    }
    Ok(())
}

fn shuffle_counts() -> Result<(), String> {
    for n in 0..=8usize {
        for k in 0..=n {
            let u = IndexWord((0..k as u32).collect());
            let v = IndexWord((10..10 + (n - k) as u32).collect());
            let total: u64 = shuffle(&u, &v).values().sum();
            let binom = (0..k as u64).fold(1u64, |acc, i| acc * (n as u64 - i) / (i + 1));
            ensure(total == binom, || format!("|{} sh {}| = {}", u, v, total))?;
        }
    }
    Ok(())
}

fn enumeration_counts() -> Result<(), String> {
    for r in 2..=10u64 {
        let want: u64 = (1..=r / 2)
            .map(|g| (0..2 * g - 1).fold(1u64, |acc, i| acc * (r - 1 - i) / (i + 1)))
            .sum();
        let got = enumerate_pq(r as u32).len() as u64;
        ensure(got == want, || format!("r = {}: {} compositions", r, got))?;
    }
    Ok(())
}

fn grading() -> Result<(), String> {
    phi_mzv(6)
        .check_weight_grading()
        .map_err(|(w, e)| format!("phi_mzv at {}: {}", w, e))?;
    phi_delta(6)
        .check_weight_grading()
        .map_err(|(w, e)| format!("phi_delta at {}: {}", w, e))
}

fn delta_inverse() -> Result<(), String> {
    for n in 0..=5 {
        let phi = phi_delta(n);
        let prod = phi.mul(&phi.swap()).map_err(|e| e.to_string())?;
        ensure(prod == NCSeries::unit(n), || format!("order {}", n))?;
    }
    Ok(())
}

fn mzv_inverse() -> Result<(), String> {
    let rels = extract_relations(&phi_mzv(5), &phi_delta(5)).map_err(|e| e.to_string())?;
    let mut space = RelationSpace::new(&rels, &standard_aux(5), ReduceOptions::default());
    let phi = phi_mzv(5);
    let prod = phi.mul(&phi.swap()).map_err(|e| e.to_string())?;
    for (w, e) in prod.terms() {
        if w.degree() == 0 {
            ensure(*e == SymExpr::one(), || format!("constant term {}", e))?;
            continue;
        }
        let m = space.membership(e).map_err(|e| e.to_string())?;
        ensure(m.holds(), || format!("word {} leaves {}", w, m.remainder))?;
    }
    Ok(())
}

fn letter(l: Letter, order: usize) -> NCSeries {
    NCSeries::monomial(order, Word::letter(l), SymExpr::one())
}

fn commutator(a: &NCSeries, b: &NCSeries) -> Result<NCSeries, String> {
    let ab = a.mul(b).map_err(|e| e.to_string())?;
    let ba = b.mul(a).map_err(|e| e.to_string())?;
    ab.sub(&ba).map_err(|e| e.to_string())
}

/// `psi^{BA} = exp(cB) Xi_{B,A}`, `psi^{AB}` its swap; `omega_i` is the
/// degree-`i` part of their difference.
fn omega_oracle() -> Result<(), String> {
    let n = 3;
    let psi_ba = exp_letter(Letter::B, 1, n)
        .mul(&xi_series(Letter::B, n))
        .map_err(|e| e.to_string())?;
    let psi_ab = psi_ba.swap();
    let omega = psi_ba.sub(&psi_ab).map_err(|e| e.to_string())?;
    let phi = phi_delta(n);
    let c = SymExpr::log2();
    let d = |p: &[u32]| SymExpr::delta(p).expect("positive parts");

    let x = ad_power(Letter::B, Letter::A, 1).truncate(n);
    let phi2 = phi.homogeneous_part(2);
    ensure(phi2 == omega.homogeneous_part(2), || "phi_2 != omega_2".into())?;
    let k2 = c.pow(2).add(&d(&[2]).scale(&rat(2, 1)));
    ensure(phi2 == x.scale(&k2), || format!("phi_2 = {}", phi2))?;

    let big_c = letter(Letter::A, n).add(&letter(Letter::B, n)).map_err(|e| e.to_string())?;
    let phi2_c = phi2.mul(&big_c.scale(&c)).map_err(|e| e.to_string())?;
    let phi3 = phi.homogeneous_part(3);
    let want = omega.homogeneous_part(3).sub(&phi2_c).map_err(|e| e.to_string())?;
    ensure(phi3 == want, || "phi_3 != omega_3 - phi_2 C".into())?;

    // closed form, after c delta_2 = 2 delta_{2,1} + delta_{1,2}
    let k3 = [c.mul(&d(&[2])), c.pow(3).scale(&rat(1, 2)), d(&[3]), d(&[2, 1])]
        .iter()
        .fold(SymExpr::zero(), |a, b| a.add(b));
    let closed = commutator(&big_c, &x)?.scale(&k3);
    let shuffle_rel = c.mul(&d(&[2])).sub(&d(&[2, 1]).scale(&rat(2, 1))).sub(&d(&[1, 2]));
    let diff = phi3.sub(&closed).map_err(|e| e.to_string())?;
    for (w, e) in diff.terms() {
        ensure(e.normalized() == shuffle_rel.normalized(), || {
            format!("phi_3 at {} differs by {}", w, e)
        })?;
    }
    Ok(())
}

fn reduce_idempotent() -> Result<(), String> {
    let rels = extract_relations(&phi_mzv(4), &phi_delta(4)).map_err(|e| e.to_string())?;
    let aux = standard_aux(4);
    let once = reduce(&rels, &aux);
    let twice = reduce(&once, &aux);
    let same = once.len() == twice.len() && once.iter().zip(&twice).all(|(a, b)| a.expr == b.expr);
    ensure(same, || "second pass changed the output".into())
}

fn numeric_checks() -> Result<(), String> {
    let ev = Evaluator::new(Precision::digits(40).map_err(|e| e.to_string())?);
    for order in 2..=5 {
        let rels = extract_relations(&phi_mzv(order), &phi_delta(order)).map_err(|e| e.to_string())?;
        for r in rels.iter().chain(standard_aux(order as u32).iter()) {
            let (res, verdict) = ev.verify_relation(r);
            ensure(verdict == Verdict::Pass, || format!("{} ({}) residual {}", r, r.provenance, res))?;
        }
    }
    for w in 2..=6u32 {
        for pq in enumerate_pq(w) {
            let a = ev.eval_zeta(&pq.zeta_index()).map_err(|e| e.to_string())?;
            let b = ev.eval_zeta(&pq.dual().zeta_index()).map_err(|e| e.to_string())?;
            ensure(a.sub(&b).abs_below_pow10(40), || format!("duality at {}", pq.zeta_index()))?;
        }
    }
    let ones = Composition::new(vec![1]).map_err(|e| e.to_string())?;
    ensure(ev.eval_delta(&ones).sub(&ev.ln2()).abs_below_pow10(40), || "delta_1 != ln 2".into())
}

/// Runs every check; the run passes iff all checks pass.
pub fn run_all() -> Vec<Check> {
    vec![
        check("iint of zero indices is c^r/r!", log_powers()),
        check("iint weight equals degree", iint_weights()),
        check("shuffle counts are binomial", shuffle_counts()),
        check("(p,q) enumeration counts", enumeration_counts()),
        check("weight grading of both series", grading()),
        check("phi_delta inverse property", delta_inverse()),
        check("phi_mzv inverse property modulo relations", mzv_inverse()),
        check("omega oracle at degrees 2 and 3", omega_oracle()),
        check("reduce is idempotent", reduce_idempotent()),
        check("numeric certification at 40 digits", numeric_checks()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_all() {
            assert!(c.passed, "{}", c);
        }
    }
}
