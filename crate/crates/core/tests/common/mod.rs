//! Independent reference implementations used as test oracles.
//!
//! Polynomials are maps from fully bracketed term text to coefficients, and
//! linear algebra is dense Gaussian elimination. Nothing here goes through the
//! shape/word encoding or the sparse echelon code under test.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use magma_forge::io::parse_poly;
use magma_forge::magma::unembed;
use magma_forge::{Alphabet, MagmaTerm, Polynomial};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Term text with its own printer, independent of the crate's.
pub fn term_text(t: &MagmaTerm, names: &[String]) -> String {
    match t {
        MagmaTerm::Leaf(i) => names[*i as usize].clone(),
        MagmaTerm::Node(l, r) => format!("({},{})", term_text(l, names), term_text(r, names)),
    }
}

pub fn leaves(term: &str) -> usize {
    term.matches(',').count() + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StrPoly(pub BTreeMap<String, Q>);

impl StrPoly {
    pub fn term(t: &str) -> Self {
        Self::from_pairs([(t.to_string(), q(1))])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, Q)>) -> Self {
        let mut out = StrPoly::default();
        for (t, c) in pairs {
            out.add_term(t, c);
        }
        out
    }

    fn add_term(&mut self, t: String, c: Q) {
        let e = self.0.entry(t).or_insert_with(Q::zero);
        *e += c;
        let zero = e.is_zero();
        if zero {
            self.0.retain(|_, v| !v.is_zero());
        }
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        let names = p.alphabet().symbols().to_vec();
        Self::from_pairs(
            p.terms().map(|(code, c)| (term_text(&unembed(code).unwrap(), &names), c.clone())),
        )
    }

    pub fn to_poly(&self, alphabet: &Arc<Alphabet>) -> Polynomial {
        let mut p = Polynomial::zero(alphabet);
        for (t, c) in &self.0 {
            let m = parse_poly(t, alphabet).unwrap().scale(c);
            p = &p + &m;
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &StrPoly) -> StrPoly {
        let mut out = self.clone();
        for (t, c) in &other.0 {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> StrPoly {
        if c.is_zero() {
            return StrPoly::default();
        }
        StrPoly(self.0.iter().map(|(t, x)| (t.clone(), x * c)).collect())
    }

    pub fn mul(&self, other: &StrPoly) -> StrPoly {
        let mut out = StrPoly::default();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                out.add_term(format!("({a},{b})"), x * y);
            }
        }
        out
    }

    /// Part made of terms with exactly `d` leaves.
    pub fn part(&self, d: usize) -> StrPoly {
        StrPoly(self.0.iter().filter(|(t, _)| leaves(t) == d).map(|(t, c)| (t.clone(), c.clone())).collect())
    }

    pub fn degrees(&self) -> BTreeSet<usize> {
        self.0.keys().map(|t| leaves(t)).collect()
    }
}

/// Split `(l,r)` at its top-level comma.
fn split_top(t: &str) -> Option<(&str, &str)> {
    let inner = t.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&inner[..i], &inner[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Evaluate an `X1, X2, ...` term at `images`.
pub fn eval_term(t: &str, images: &[StrPoly]) -> StrPoly {
    match split_top(t) {
        Some((l, r)) => eval_term(l, images).mul(&eval_term(r, images)),
        None => {
            let i: usize = t.trim_start_matches('X').parse().expect("indeterminate name");
            images[i - 1].clone()
        }
    }
}

pub fn substitute(p: &StrPoly, images: &[StrPoly]) -> StrPoly {
    let mut out = StrPoly::default();
    for (t, c) in &p.0 {
        out = out.add(&eval_term(t, images).scale(c));
    }
    out
}

/// All terms with `n` leaves over `names`, by direct recursion.
pub fn all_terms(names: &[&str], n: usize) -> Vec<String> {
    if n == 1 {
        return names.iter().map(|s| s.to_string()).collect();
    }
    let mut out = Vec::new();
    for a in 1..n {
        for l in all_terms(names, a) {
            for r in all_terms(names, n - a) {
                out.push(format!("({l},{r})"));
            }
        }
    }
    out
}

/// Terms in `X1..Xn` grouped by weight, leaf `Xi` weighing `weights[i-1]`.
pub fn weighted_terms(weights: &[usize], dmax: usize) -> Vec<Vec<String>> {
    let mut by_weight: Vec<Vec<String>> = vec![Vec::new(); dmax + 1];
    for w in 1..=dmax {
        let mut here: Vec<String> =
            weights.iter().enumerate().filter(|(_, &x)| x == w).map(|(i, _)| format!("X{}", i + 1)).collect();
        for a in 1..w {
            for l in &by_weight[a] {
                for r in &by_weight[w - a] {
                    here.push(format!("({l},{r})"));
                }
            }
        }
        by_weight[w] = here;
    }
    by_weight
}

/// Dense rank by fraction-exact Gaussian elimination.
pub fn dense_rank(vs: &[StrPoly]) -> usize {
    let cols: Vec<&String> = vs.iter().flat_map(|v| v.0.keys()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut rows: Vec<Vec<Q>> = vs
        .iter()
        .map(|v| cols.iter().map(|c| v.0.get(*c).cloned().unwrap_or_else(Q::zero)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols.len() {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = Q::one() / rows[rank][col].clone();
        let pivot: Vec<Q> = rows[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for c in col..cols.len() {
                    row[c] -= &f * &pivot[c];
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

pub fn in_span(basis: &[StrPoly], v: &StrPoly) -> bool {
    let mut all = basis.to_vec();
    let r = dense_rank(&all);
    all.push(v.clone());
    dense_rank(&all) == r
}

/// Brute-force slices of the subalgebra generated by homogeneous `gens`:
/// evaluate every generator word of the right weight.
pub fn naive_slice(gens: &[StrPoly], degree: usize) -> Vec<StrPoly> {
    let weights: Vec<usize> = gens.iter().map(|g| *g.degrees().iter().next_back().unwrap()).collect();
    let terms = weighted_terms(&weights, degree);
    terms[degree].iter().map(|t| eval_term(t, gens)).collect()
}

/// First monomial, in the order given, whose evaluation depends on earlier ones.
pub fn first_dependent(columns: &[String], images: &[StrPoly]) -> Option<String> {
    let mut seen: Vec<StrPoly> = Vec::new();
    for c in columns {
        let v = eval_term(c, images);
        if in_span(&seen, &v) {
            return Some(c.clone());
        }
        seen.push(v);
    }
    None
}

pub fn alphabet(n: usize) -> Arc<Alphabet> {
    Arc::new(Alphabet::standard(n))
}

pub fn term_strategy(symbols: u16, max_leaves: u32) -> impl Strategy<Value = MagmaTerm> {
    let leaf = (0..symbols).prop_map(MagmaTerm::Leaf);
    leaf.prop_recursive(max_leaves.saturating_sub(1), max_leaves * 2, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| MagmaTerm::node(l, r))
    })
    .prop_filter("degree bound", move |t| t.degree() <= max_leaves)
}

pub fn coeff_strategy() -> impl Strategy<Value = Q> {
    (-5i64..=5, 1i64..=3).prop_filter("nonzero", |(n, _)| *n != 0).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

/// Random polynomial as (term, coefficient) pairs.
pub fn poly_strategy(symbols: u16, max_leaves: u32, max_terms: usize) -> impl Strategy<Value = Vec<(MagmaTerm, Q)>> {
    prop::collection::vec((term_strategy(symbols, max_leaves), coeff_strategy()), 0..=max_terms)
}

pub fn build(alphabet: &Arc<Alphabet>, pairs: &[(MagmaTerm, Q)]) -> Polynomial {
    let mut p = Polynomial::zero(alphabet);
    for (t, c) in pairs {
        p = &p + &Polynomial::from_term(alphabet, t).scale(c);
    }
    p
}

pub fn build_str(alphabet: &Arc<Alphabet>, pairs: &[(MagmaTerm, Q)]) -> StrPoly {
    let names = alphabet.symbols().to_vec();
    StrPoly::from_pairs(pairs.iter().map(|(t, c)| (term_text(t, &names), c.clone())))
}
