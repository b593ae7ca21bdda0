//! Algebraic independence of finite sets of polynomials, up to a degree bound.
//!
//! A set `p_1, ..., p_n` is independent when no nonzero `P` in the free
//! algebra on `X_1, ..., X_n` satisfies `P(p_1, ..., p_n) = 0`. The search
//! weights `X_i` by `deg p_i` and looks for such `P` among polynomials of
//! weight at most the bound.
//!
//! Homogeneous inputs are searched degree by degree: the image of the
//! weight-`d` part is spanned by the inputs of degree `d` and by products of
//! lower image slices. Lower slices being injective images, products of their
//! bases stay independent, so a relation at weight `d` can only come from an
//! input of degree `d` falling into the span of the rest. Past the largest
//! input degree no input is left to fall anywhere, and the search is complete.
//!
//! Inhomogeneous inputs evaluate every weighted monomial and eliminate
//! jointly in monomial order.

use std::sync::Arc;

use crate::algebra::{Evaluator, Polynomial, SubstitutionMap};
use crate::error::{Error, Result};
use crate::kurosh::product_rows;
use crate::linalg::{min_leading_element, EchelonBasis};
use crate::magma::{Alphabet, MonomialCode};
use crate::Budget;

/// Outcome of an independence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndependenceVerdict {
    /// No relation of weight at most the bound.
    IndependentUpTo(u32),
    /// A nonzero relation, monic at its largest monomial.
    Dependent { witness: Polynomial },
    /// Distinct leading forms with no relation among them; independent at every degree.
    ReducedCertified,
}

impl IndependenceVerdict {
    pub fn is_independent(&self) -> bool {
        !matches!(self, IndependenceVerdict::Dependent { .. })
    }

    pub fn witness(&self) -> Option<&Polynomial> {
        match self {
            IndependenceVerdict::Dependent { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn bound(&self) -> Option<u32> {
        match self {
            IndependenceVerdict::IndependentUpTo(b) => Some(*b),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            IndependenceVerdict::IndependentUpTo(_) => "independent_up_to",
            IndependenceVerdict::Dependent { .. } => "dependent",
            IndependenceVerdict::ReducedCertified => "reduced_certified",
        }
    }
}

fn validate(ps: &[Polynomial]) -> Result<()> {
    if ps.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (i, p) in ps.iter().enumerate() {
        if p.is_zero() {
            return Err(Error::ZeroInput(i));
        }
        if !p.same_alphabet(&ps[0]) {
            return Err(Error::AlphabetMismatch);
        }
    }
    Ok(())
}

fn indeterminates(n: usize) -> Arc<Alphabet> {
    Arc::new(Alphabet::indeterminates(n))
}

fn dependent(witness: Polynomial, ps: &[Polynomial]) -> Result<IndependenceVerdict> {
    let map = SubstitutionMap::new(ps.to_vec())?;
    if witness.is_zero() || !witness.substitute(&map)?.is_zero() {
        return Err(Error::Invariant(format!("relation witness `{witness}` does not vanish")));
    }
    Ok(IndependenceVerdict::Dependent { witness })
}

/// Search for a polynomial relation of weight at most `dmax` among `ps`.
///
/// A witness is monic at its largest monomial, and that monomial is as small
/// as possible: among relations of the first failing weight for homogeneous
/// inputs, among all relations within the bound otherwise.
pub fn relation_search(ps: &[Polynomial], dmax: u32, budget: &Budget) -> Result<IndependenceVerdict> {
    validate(ps)?;
    for i in 0..ps.len() {
        if let Some(j) = (0..i).find(|&j| ps[j] == ps[i]) {
            return Err(Error::DuplicateInput(j, i));
        }
    }
    let needed = ps.iter().filter_map(Polynomial::degree).max().expect("nonzero inputs");
    if dmax < needed {
        return Err(Error::BoundTooSmall { bound: dmax, needed });
    }
    if ps.iter().all(Polynomial::is_homogeneous) {
        graded_search(ps, dmax, budget)
    } else {
        joint_search(ps, dmax, budget)
    }
}

fn graded_search(ps: &[Polynomial], dmax: u32, budget: &Budget) -> Result<IndependenceVerdict> {
    let xs = indeterminates(ps.len());
    let top = ps.iter().filter_map(Polynomial::degree).max().expect("nonzero inputs");
    let mut slices: Vec<EchelonBasis<Polynomial>> = vec![EchelonBasis::with_degree(0)];
    for d in 1..=top {
        let mut slice = EchelonBasis::from_reduced_rows(Some(d), product_rows(&slices, d, budget)?);
        let mut kernel = Vec::new();
        for (i, p) in ps.iter().enumerate().filter(|(_, p)| p.degree() == Some(d)) {
            let x = Polynomial::symbol(&xs, i as u16);
            let (rest, preimage) = slice.reduce_tracked(p.clone(), x);
            if rest.is_zero() {
                kernel.push(preimage);
            } else {
                slice.insert_tracked(rest, preimage)?;
            }
        }
        if let Some(witness) = min_leading_element(kernel) {
            return dependent(witness, ps);
        }
        slices.push(slice);
    }
    Ok(IndependenceVerdict::IndependentUpTo(dmax))
}

/// Monomials in the indeterminates whose weight (sum of leaf weights) is at most `dmax`.
fn weighted_monomials(weights: &[u32], dmax: u32, budget: &Budget) -> Result<Vec<MonomialCode>> {
    let d = dmax as usize;
    let mut counts = vec![0u128; d + 1];
    for w in 1..=d {
        let leaves = weights.iter().filter(|&&x| x as usize == w).count() as u128;
        let products: u128 = (1..w).map(|a| counts[a].saturating_mul(counts[w - a])).fold(0, u128::saturating_add);
        counts[w] = leaves.saturating_add(products);
    }
    let total = counts.iter().fold(0u128, |a, &b| a.saturating_add(b));
    budget.check(total, || format!("relation search to weight {dmax}"))?;
    let mut by_weight: Vec<Vec<MonomialCode>> = vec![Vec::new(); d + 1];
    for w in 1..=d {
        let mut here: Vec<MonomialCode> = weights
            .iter()
            .enumerate()
            .filter(|(_, &x)| x as usize == w)
            .map(|(i, _)| MonomialCode::leaf(i as u16))
            .collect();
        for a in 1..w {
            for l in &by_weight[a] {
                for r in &by_weight[w - a] {
                    here.push(crate::magma::graft(l, r));
                }
            }
        }
        by_weight[w] = here;
    }
    let mut all: Vec<MonomialCode> = by_weight.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

fn joint_search(ps: &[Polynomial], dmax: u32, budget: &Budget) -> Result<IndependenceVerdict> {
    let xs = indeterminates(ps.len());
    let weights: Vec<u32> = ps.iter().map(|p| p.degree().expect("nonzero")).collect();
    let monomials = weighted_monomials(&weights, dmax, budget)?;
    let map = SubstitutionMap::new(ps.to_vec())?;
    let mut eval = Evaluator::new(&map);
    let mut image: EchelonBasis<Polynomial> = EchelonBasis::unrestricted();
    for m in monomials {
        let value = (*eval.eval(&m)?).clone();
        let x = Polynomial::monomial(&xs, m, crate::algebra::rational(1));
        let (rest, preimage) = image.reduce_tracked(value, x);
        if rest.is_zero() {
            return dependent(preimage, ps);
        }
        image.insert_tracked(rest, preimage)?;
    }
    Ok(IndependenceVerdict::IndependentUpTo(dmax))
}

/// Linear independence check for homogeneous polynomials of one degree.
///
/// Such a set is independent exactly when it is linearly independent, so the
/// answer holds at every degree.
pub fn same_degree_fast_path(hs: &[Polynomial]) -> Result<IndependenceVerdict> {
    validate(hs)?;
    let degree = hs[0].degree().expect("nonzero");
    for (i, h) in hs.iter().enumerate() {
        if !h.is_homogeneous() {
            return Err(Error::NotHomogeneous(i));
        }
        if h.degree() != Some(degree) {
            return Err(Error::MixedDegrees);
        }
    }
    let xs = indeterminates(hs.len());
    let mut basis: EchelonBasis<Polynomial> = EchelonBasis::with_degree(degree);
    for (i, h) in hs.iter().enumerate() {
        let (rest, preimage) = basis.reduce_tracked(h.clone(), Polynomial::symbol(&xs, i as u16));
        if rest.is_zero() {
            return dependent(preimage, hs);
        }
        basis.insert_tracked(rest, preimage)?;
    }
    Ok(IndependenceVerdict::ReducedCertified)
}

/// Whether `ps` is a reduced set: leading forms pairwise distinct and free of
/// relations. Leading forms are homogeneous, so the relation check at the
/// largest input degree is already complete.
pub fn check_reduced(ps: &[Polynomial], dmax: u32, budget: &Budget) -> Result<bool> {
    validate(ps)?;
    let forms: Vec<Polynomial> = ps.iter().map(|p| p.leading_form()).collect::<Result<_>>()?;
    for i in 0..forms.len() {
        if forms[..i].contains(&forms[i]) {
            return Ok(false);
        }
    }
    let mut degrees: Vec<u32> = forms.iter().filter_map(Polynomial::degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    for d in degrees {
        let class: Vec<Polynomial> = forms.iter().filter(|f| f.degree() == Some(d)).cloned().collect();
        if !same_degree_fast_path(&class)?.is_independent() {
            return Ok(false);
        }
    }
    Ok(relation_search(&forms, dmax, budget)?.is_independent())
}

/// Independence with the reduced-set shortcut: when the leading forms are
/// distinct and independent the set is independent at every degree;
/// otherwise fall back to [`relation_search`].
pub fn is_reduced(ps: &[Polynomial], dmax: u32, budget: &Budget) -> Result<IndependenceVerdict> {
    if check_reduced(ps, dmax, budget)? {
        Ok(IndependenceVerdict::ReducedCertified)
    } else {
        relation_search(ps, dmax, budget)
    }
}
