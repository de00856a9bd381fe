//! Relation sets and their exact reduction.
//!
//! Relations are homogeneous [`SymExpr`]s asserted to vanish. Sources are
//! series comparison, shuffles of the `I` integrals, MZV duality and a table
//! of classical closed forms. [`reduce`] puts a set into reduced row-echelon
//! form per weight, eliminating the largest monomial first.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::delta_side::{iint_cached, IndexWord};
use crate::freealg::{AlgebraError, NCSeries, Word};
use crate::mzv_side::enumerate_pq;
use crate::symring::{rat, Composition, Generator, Monomial, SymError, SymExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Coefficient of `word` in the difference of two series truncated at `order`.
    Comparison { order: usize, word: Word },
    /// `I_u I_v` against the sum over shuffles of `u` and `v`.
    Shuffle { u: IndexWord, v: IndexWord },
    /// The same shuffle identity with every delta value replaced by the MZV
    /// of the same index; only formed when all indices are admissible.
    ZetaShuffle { u: IndexWord, v: IndexWord },
    Duality { comp: Composition },
    KnownValue { name: String },
    /// Output row of [`reduce`]; indices into the `rels` and `aux` inputs
    /// that took part in producing it.
    Reduced { rels: Vec<usize>, aux: Vec<usize> },
}

impl Provenance {
    pub fn to_json(&self) -> Value {
        match self {
            Provenance::Comparison { order, word } => {
                json!({"kind": "comparison", "order": order, "word": word.to_string()})
            }
            Provenance::Shuffle { u, v } => {
                json!({"kind": "shuffle", "u": u.0, "v": v.0})
            }
            Provenance::ZetaShuffle { u, v } => {
                json!({"kind": "zeta-shuffle", "u": u.0, "v": v.0})
            }
            Provenance::Duality { comp } => {
                json!({"kind": "duality", "comp": comp.parts()})
            }
            Provenance::KnownValue { name } => json!({"kind": "known", "name": name}),
            Provenance::Reduced { rels, aux } => {
                json!({"kind": "reduced", "rels": rels, "aux": aux})
            }
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Comparison { order, word } => write!(f, "comparison(order {}, {})", order, word),
            Provenance::Shuffle { u, v } => write!(f, "shuffle({}, {})", u, v),
            Provenance::ZetaShuffle { u, v } => write!(f, "zeta-shuffle({}, {})", u, v),
            Provenance::Duality { comp } => write!(f, "duality({})", comp),
            Provenance::KnownValue { name } => write!(f, "known({})", name),
            Provenance::Reduced { rels, aux } => {
                write!(f, "reduced({} rels, {} aux)", rels.len(), aux.len())
            }
        }
    }
}

/// A nonzero homogeneous expression asserted to be 0, scaled so that its
/// leading monomial has coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub expr: SymExpr,
    pub weight: u32,
    pub provenance: Provenance,
}

impl Relation {
    /// `Ok(None)` when `expr` is zero.
    pub fn new(expr: SymExpr, provenance: Provenance) -> Result<Option<Relation>, SymError> {
        if expr.is_zero() {
            return Ok(None);
        }
        let weight = expr.weight()?;
        Ok(Some(Relation {
            expr: expr.normalized(),
            weight,
            provenance,
        }))
    }

    pub fn latex(&self) -> String {
        format!("{} = 0", self.expr.latex())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "weight": self.weight,
            "provenance": self.provenance.to_json(),
            "lhs": self.expr.to_string(),
            "latex": self.latex(),
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.expr)
    }
}

pub fn relations_to_json(rels: &[Relation]) -> Value {
    Value::Array(rels.iter().map(Relation::to_json).collect())
}

/// Order-preserving interleavings of `u` and `v`, with multiplicity.
pub fn shuffle(u: &IndexWord, v: &IndexWord) -> BTreeMap<IndexWord, u64> {
    let mut out = BTreeMap::new();
    let mut cur = Vec::with_capacity(u.len() + v.len());
    interleave(&u.0, &v.0, &mut cur, &mut out);
    out
}

fn interleave(u: &[u32], v: &[u32], cur: &mut Vec<u32>, out: &mut BTreeMap<IndexWord, u64>) {
    if u.is_empty() || v.is_empty() {
        let mut w = cur.clone();
        w.extend_from_slice(u);
        w.extend_from_slice(v);
        *out.entry(IndexWord(w)).or_insert(0) += 1;
        return;
    }
    cur.push(u[0]);
    interleave(&u[1..], v, cur, out);
    cur.pop();
    cur.push(v[0]);
    interleave(u, &v[1..], cur, out);
    cur.pop();
}

fn shuffle_defect(u: &IndexWord, v: &IndexWord) -> SymExpr {
    let mut e = iint_cached(u).mul(&iint_cached(v));
    for (w, k) in shuffle(u, v) {
        e.add_scaled(&iint_cached(&w), &BigRational::from_integer(BigInt::from(-(k as i64))));
    }
    e
}

fn index_word_pairs(max_weight: u32) -> Vec<(IndexWord, IndexWord)> {
    let words = IndexWord::up_to_degree(max_weight.saturating_sub(1));
    let mut out = Vec::new();
    for (i, u) in words.iter().enumerate() {
        for v in &words[i..] {
            if u.degree() + v.degree() <= max_weight {
                out.push((u.clone(), v.clone()));
            }
        }
    }
    out
}

fn push_unique(out: &mut Vec<Relation>, seen: &mut HashSet<SymExpr>, rel: Option<Relation>) {
    if let Some(rel) = rel {
        if seen.insert(rel.expr.clone()) {
            out.push(rel);
        }
    }
}

/// Shuffle relations among delta values for all unordered pairs of nonempty
/// index words of total weight at most `max_weight`.
pub fn shuffle_relations(max_weight: u32) -> Vec<Relation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (u, v) in index_word_pairs(max_weight) {
        let rel = Relation::new(shuffle_defect(&u, &v), Provenance::Shuffle { u, v })
            .expect("shuffle defects are homogeneous");
        push_unique(&mut out, &mut seen, rel);
    }
    out
}

/// Replaces every delta value by the MZV with the same index; `None` if a
/// non-admissible index or a power of `c` occurs.
fn delta_to_zeta(e: &SymExpr) -> Option<SymExpr> {
    let mut out = SymExpr::zero();
    for (m, q) in e.terms() {
        let mut factors = Vec::new();
        for (g, k) in m.factors() {
            match g {
                Generator::Delta(comp) if comp.is_admissible() => {
                    factors.push((Generator::Zeta(comp.clone()), *k))
                }
                _ => return None,
            }
        }
        out.add_term(Monomial::from_factors(factors), q.clone());
    }
    Some(out)
}

/// Shuffle relations carried over to MZVs. Restricted to pairs whose last
/// indices are both positive, which makes every delta index admissible.
pub fn zeta_shuffle_relations(max_weight: u32) -> Vec<Relation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (u, v) in index_word_pairs(max_weight) {
        if u.0.last() == Some(&0) || v.0.last() == Some(&0) {
            continue;
        }
        let Some(e) = delta_to_zeta(&shuffle_defect(&u, &v)) else {
            continue;
        };
        let rel = Relation::new(e, Provenance::ZetaShuffle { u, v }).expect("homogeneous");
        push_unique(&mut out, &mut seen, rel);
    }
    out
}

/// `zeta(w) - zeta(dual w)` for every non-self-dual admissible index of
/// weight at most `max_weight`, one relation per dual pair.
pub fn duality_relations(max_weight: u32) -> Vec<Relation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for r in 2..=max_weight {
        for pq in enumerate_pq(r) {
            let dual = pq.dual();
            if dual == pq {
                continue;
            }
            let comp = pq.zeta_index();
            let e = SymExpr::generator(Generator::Zeta(comp.clone()))
                .sub(&SymExpr::generator(Generator::Zeta(dual.zeta_index())));
            let rel = Relation::new(e, Provenance::Duality { comp }).expect("homogeneous");
            push_unique(&mut out, &mut seen, rel);
        }
    }
    out
}

/// Closed form of `Li_{1,...,1}(-1,...,-1)` (`n` ones) in `c` and single zeta values.
pub fn alt_ones(n: u32) -> SymExpr {
    // x_k = -Li_k((-1)^k) / k
    let x: Vec<SymExpr> = (0..=n)
        .map(|k| match k {
            0 => SymExpr::zero(),
            1 => SymExpr::log2(),
            k if k % 2 == 1 => {
                let q = BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(2).pow(k - 1));
                z(&[k]).scale(&(q / BigInt::from(k)))
            }
            k => z(&[k]).scale(&rat(-1, k as i64)),
        })
        .collect();
    let mut out = SymExpr::zero();
    partitions(n, 1, &x, SymExpr::one(), &mut out);
    if n % 2 == 1 {
        out = out.neg();
    }
    out
}

fn partitions(rest: u32, k: u32, x: &[SymExpr], acc: SymExpr, out: &mut SymExpr) {
    if rest == 0 {
        *out = out.add(&acc);
        return;
    }
    if k > rest {
        return;
    }
    let mut term = acc;
    let mut j = 0u32;
    loop {
        partitions(rest - j * k, k + 1, x, term.clone(), out);
        j += 1;
        if j * k > rest {
            break;
        }
        term = term.mul(&x[k as usize]).scale(&rat(1, j as i64));
    }
}

fn z(p: &[u32]) -> SymExpr {
    SymExpr::zeta(p).expect("admissible")
}

fn d(p: &[u32]) -> SymExpr {
    SymExpr::delta(p).expect("positive parts")
}

/// Classical closed forms: Euler, Landen, low-depth delta values, two
/// alternating-ones values, three MZV evaluations and one stuffle instance.
pub fn known_values() -> Vec<Relation> {
    let c = SymExpr::log2();
    let c2 = c.pow(2);
    let c3 = c.pow(3);
    let c4 = c.pow(4);
    let q = |n, m| rat(n, m);
    let sum = |parts: &[SymExpr]| parts.iter().fold(SymExpr::zero(), |a, b| a.add(b));
    let table: Vec<(&str, SymExpr, SymExpr)> = vec![
        ("euler", d(&[2]), z(&[2]).sub(&c2).scale(&q(1, 2))),
        (
            "landen",
            d(&[3]),
            sum(&[
                z(&[3]).scale(&q(7, 8)),
                z(&[2]).mul(&c).scale(&q(-1, 2)),
                c3.scale(&q(1, 6)),
            ]),
        ),
        ("delta21", d(&[2, 1]), z(&[3]).scale(&q(1, 8)).sub(&c3.scale(&q(1, 6)))),
        (
            "delta12",
            d(&[1, 2]),
            sum(&[
                c.mul(&z(&[2])).scale(&q(1, 2)),
                c3.scale(&q(-1, 6)),
                z(&[3]).scale(&q(-1, 4)),
            ]),
        ),
        (
            "delta31",
            d(&[3, 1]),
            sum(&[
                z(&[4]).scale(&q(1, 8)),
                c.mul(&z(&[3])).scale(&q(-1, 8)),
                c4.scale(&q(1, 24)),
            ]),
        ),
        ("delta22", d(&[2, 2]), alt_ones(4)),
        ("delta122", d(&[1, 2, 2]), alt_ones(5).neg()),
        ("zeta31", z(&[3, 1]), z(&[4]).scale(&q(1, 4))),
        ("zeta41", z(&[4, 1]), z(&[5]).scale(&q(2, 1)).sub(&z(&[2]).mul(&z(&[3])))),
        (
            "zeta32",
            z(&[3, 2]),
            z(&[3]).mul(&z(&[2])).scale(&q(3, 1)).sub(&z(&[5]).scale(&q(11, 2))),
        ),
        ("stuffle23", z(&[2]).mul(&z(&[3])), sum(&[z(&[2, 3]), z(&[3, 2]), z(&[5])])),
    ];
    table
        .into_iter()
        .filter_map(|(name, lhs, rhs)| {
            Relation::new(lhs.sub(&rhs), Provenance::KnownValue { name: name.to_string() })
                .expect("table entries are homogeneous")
        })
        .collect()
}

/// Relations `coeff(s1, w) - coeff(s2, w) = 0` for words of degree 2 and up.
/// Relations equal after normalization are kept once, with the smallest word.
pub fn extract_relations(s1: &NCSeries, s2: &NCSeries) -> Result<Vec<Relation>, AlgebraError> {
    if s1.order() != s2.order() {
        return Err(AlgebraError::OrderMismatch(s1.order(), s2.order()));
    }
    let diff = s1.sub(s2)?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    // terms are visited in word order, so the first witness is the smallest
    for (w, e) in diff.terms() {
        if w.degree() < 2 {
            continue;
        }
        let rel = Relation::new(
            e.clone(),
            Provenance::Comparison {
                order: w.degree(),
                word: *w,
            },
        )?;
        push_unique(&mut out, &mut seen, rel);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Also use products of lower-weight relations with monomials, so the
    /// reduction works in the ideal the relations generate rather than in
    /// their linear span.
    pub closure: bool,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { closure: true }
    }
}

#[derive(Clone, Debug, Default)]
struct Deps(Vec<u64>);

impl Deps {
    fn single(i: usize) -> Deps {
        let mut d = Deps(vec![0; i / 64 + 1]);
        d.0[i / 64] |= 1 << (i % 64);
        d
    }

    fn union(&mut self, other: &Deps) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, word) in self.0.iter().enumerate() {
            for b in 0..64 {
                if word >> b & 1 == 1 {
                    out.push(i * 64 + b);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Row {
    expr: SymExpr,
    deps: Deps,
    primary: bool,
}

#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<Row>,
    pivots: BTreeMap<Monomial, usize>,
}

impl Echelon {
    /// Clears every pivot monomial strictly below `below` (all of them when
    /// `None`), largest first.
    fn reduce(&self, e: &mut SymExpr, below: Option<&Monomial>, deps: &mut Deps) {
        let mut cursor = below.cloned();
        loop {
            let hit = {
                let map = e.term_map();
                let mut iter: Box<dyn Iterator<Item = (&Monomial, &BigRational)>> = match &cursor {
                    None => Box::new(map.iter().rev()),
                    Some(m) => Box::new(map.range(..m.clone()).rev()),
                };
                iter.find(|(m, _)| self.pivots.contains_key(*m))
                    .map(|(m, q)| (m.clone(), q.clone()))
            };
            let Some((m, q)) = hit else { break };
            let row = &self.rows[self.pivots[&m]];
            e.add_scaled(&row.expr, &-q);
            deps.union(&row.deps);
            cursor = Some(m);
        }
    }

    fn insert(&mut self, mut e: SymExpr, mut deps: Deps, primary: bool) {
        self.reduce(&mut e, None, &mut deps);
        let Some((lead, _)) = e.leading_term() else { return };
        let lead = lead.clone();
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(Row {
            expr: e.normalized(),
            deps,
            primary,
        });
    }
}

/// Result of testing an expression against a [`RelationSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    /// Normal form of the expression; zero iff it lies in the space.
    pub remainder: SymExpr,
    /// Indices into `rels` whose rows took part in the elimination.
    pub rels: Vec<usize>,
    /// Indices into `aux` whose rows took part in the elimination.
    pub aux: Vec<usize>,
}

impl Membership {
    pub fn holds(&self) -> bool {
        self.remainder.is_zero()
    }
}

/// Echelon forms of `rels` together with `aux`, built lazily per weight.
pub struct RelationSpace {
    aux: Vec<Relation>,
    rels: Vec<Relation>,
    options: ReduceOptions,
    classes: HashMap<u32, Echelon>,
    multipliers: HashMap<u32, Vec<Monomial>>,
}

impl RelationSpace {
    pub fn new(rels: &[Relation], aux: &[Relation], options: ReduceOptions) -> RelationSpace {
        RelationSpace {
            aux: aux.to_vec(),
            rels: rels.to_vec(),
            options,
            classes: HashMap::new(),
            multipliers: HashMap::new(),
        }
    }

    fn multipliers(&mut self, k: u32) -> Vec<Monomial> {
        self.multipliers
            .entry(k)
            .or_insert_with(|| monomials_of_weight(k))
            .clone()
    }

    fn rows_for(&mut self, rel: &Relation, weight: u32) -> Vec<SymExpr> {
        if rel.weight == weight {
            vec![rel.expr.clone()]
        } else if self.options.closure && rel.weight < weight {
            self.multipliers(weight - rel.weight)
                .iter()
                .map(|m| rel.expr.mul_monomial(m))
                .collect()
        } else {
            Vec::new()
        }
    }

    fn class(&mut self, weight: u32) -> &Echelon {
        if !self.classes.contains_key(&weight) {
            let mut ech = Echelon::default();
            let n_aux = self.aux.len();
            for i in 0..n_aux {
                let rel = self.aux[i].clone();
                for e in self.rows_for(&rel, weight) {
                    ech.insert(e, Deps::single(i), false);
                }
            }
            // lower-weight rels first, so that primary pivots are the ones
            // new at this weight
            for pass in [false, true] {
                for i in 0..self.rels.len() {
                    let rel = self.rels[i].clone();
                    if (rel.weight == weight) != pass {
                        continue;
                    }
                    for e in self.rows_for(&rel, weight) {
                        ech.insert(e, Deps::single(n_aux + i), pass);
                    }
                }
            }
            self.classes.insert(weight, ech);
        }
        &self.classes[&weight]
    }

    fn split_deps(&self, deps: &Deps) -> (Vec<usize>, Vec<usize>) {
        let n_aux = self.aux.len();
        let (aux, rels): (Vec<usize>, Vec<usize>) = deps.indices().into_iter().partition(|&i| i < n_aux);
        (rels.into_iter().map(|i| i - n_aux).collect(), aux)
    }

    /// Normal form of `expr` modulo the space. Constants and zero are
    /// reduced as they are.
    pub fn membership(&mut self, expr: &SymExpr) -> Result<Membership, SymError> {
        let weight = expr.weight()?;
        let mut e = expr.clone();
        let mut deps = Deps::default();
        self.class(weight).reduce(&mut e, None, &mut deps);
        let (rels, aux) = self.split_deps(&deps);
        Ok(Membership {
            remainder: e,
            rels,
            aux,
        })
    }

    /// Fully reduced rows whose pivots first appear among the `rels` of
    /// that weight, over all weights present in `rels`.
    pub fn reduced_relations(&mut self) -> Vec<Relation> {
        let weights: BTreeSet<u32> = self.rels.iter().map(|r| r.weight).collect();
        let mut out = Vec::new();
        for w in weights {
            let ech = self.class(w).clone();
            let mut primary: Vec<&Row> = ech.rows.iter().filter(|r| r.primary).collect();
            primary.sort_by(|a, b| a.expr.leading_term().cmp(&b.expr.leading_term()));
            for row in primary {
                let mut e = row.expr.clone();
                let mut deps = row.deps.clone();
                let lead = e.leading_term().map(|(m, _)| m.clone());
                ech.reduce(&mut e, lead.as_ref(), &mut deps);
                let (rels, aux) = self.split_deps(&deps);
                out.push(Relation {
                    expr: e,
                    weight: w,
                    provenance: Provenance::Reduced { rels, aux },
                });
            }
        }
        out
    }
}

/// All monomials of weight `k` in `c`, admissible MZVs and delta values
/// (all-ones deltas excluded, they are powers of `c`).
pub fn monomials_of_weight(k: u32) -> Vec<Monomial> {
    let mut gens = Vec::new();
    for w in 1..=k {
        if w == 1 {
            gens.push(Generator::Log2);
        }
        for comp in Composition::all_of_weight(w) {
            if comp.is_admissible() {
                gens.push(Generator::Zeta(comp.clone()));
            }
            if !comp.is_all_ones() {
                gens.push(Generator::Delta(comp));
            }
        }
    }
    gens.sort();
    let mut out = Vec::new();
    multisets(k, &gens, 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn multisets(rest: u32, gens: &[Generator], start: usize, cur: &mut Vec<Generator>, out: &mut Vec<Monomial>) {
    if rest == 0 {
        let mut counts: BTreeMap<Generator, u32> = BTreeMap::new();
        for g in cur.iter() {
            *counts.entry(g.clone()).or_insert(0) += 1;
        }
        out.push(Monomial::from_factors(counts));
        return;
    }
    for i in start..gens.len() {
        let w = gens[i].weight();
        if w <= rest {
            cur.push(gens[i].clone());
            multisets(rest - w, gens, i, cur, out);
            cur.pop();
        }
    }
}

/// Reduced row-echelon generators of the new relations in `rels` modulo
/// `aux`, using the default options.
pub fn reduce(rels: &[Relation], aux: &[Relation]) -> Vec<Relation> {
    reduce_with(rels, aux, ReduceOptions::default())
}

pub fn reduce_with(rels: &[Relation], aux: &[Relation], options: ReduceOptions) -> Vec<Relation> {
    RelationSpace::new(rels, aux, options).reduced_relations()
}

/// The standard auxiliary set up to `max_weight`: delta shuffles, MZV
/// shuffles, duality and the known values of weight at most `max_weight`.
pub fn standard_aux(max_weight: u32) -> Vec<Relation> {
    let mut aux = shuffle_relations(max_weight);
    aux.extend(zeta_shuffle_relations(max_weight));
    aux.extend(duality_relations(max_weight));
    aux.extend(known_values().into_iter().filter(|r| r.weight <= max_weight));
    aux
}
