//! Exact sparse linear algebra over the rationals on vectors indexed by
//! monomial codes.
//!
//! An [`EchelonBasis`] is kept in reduced echelon form: every row is monic at
//! its pivot, the pivot is the row's smallest monomial in canonical order, and
//! no pivot occurs in any other row. Because of that, the coordinates of a
//! vector of the span are just its coefficients at the pivots.
//!
//! Rows may carry a *companion* value that undergoes the same linear row
//! operations. Companions record where a row came from: a preimage polynomial
//! in the indeterminates, or a lift inside a subalgebra.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{Polynomial, Rational};
use crate::error::{Error, Result};
use crate::magma::MonomialCode;

/// A polynomial used as a vector; inside a graded basis all its keys share one degree.
pub type SparseVector = Polynomial;

/// Data carried alongside basis rows through row operations.
pub trait Companion: Clone + Send + Sync {
    /// `self += c * other`
    fn add_scaled(&mut self, c: &Rational, other: &Self);
    fn scale(&mut self, c: &Rational);
    /// Companion of the product of two rows.
    fn product(&self, other: &Self) -> Self;
}

impl Companion for () {
    fn add_scaled(&mut self, _: &Rational, _: &Self) {}
    fn scale(&mut self, _: &Rational) {}
    fn product(&self, _: &Self) -> Self {}
}

impl Companion for Polynomial {
    fn add_scaled(&mut self, c: &Rational, other: &Self) {
        Polynomial::add_scaled(self, c, other)
    }

    fn scale(&mut self, c: &Rational) {
        self.scale_in_place(c)
    }

    fn product(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }
}

#[derive(Clone, Debug)]
struct Row<C> {
    vector: SparseVector,
    companion: C,
}

#[derive(Clone, Debug)]
pub struct EchelonBasis<C = ()> {
    degree: Option<u32>,
    graded: bool,
    rows: BTreeMap<MonomialCode, Row<C>>,
}

impl<C> PartialEq for EchelonBasis<C> {
    /// Reduced echelon form is unique, so equal row sets mean equal spans.
    fn eq(&self, other: &Self) -> bool {
        self.rows.len() == other.rows.len()
            && self.rows.values().zip(other.rows.values()).all(|(a, b)| a.vector == b.vector)
    }
}

impl<C> Default for EchelonBasis<C> {
    fn default() -> Self {
        EchelonBasis { degree: None, graded: true, rows: BTreeMap::new() }
    }
}

impl<C: Companion> EchelonBasis<C> {
    /// Empty basis of a single degree slice; the degree is fixed by the first row.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_degree(degree: u32) -> Self {
        EchelonBasis { degree: Some(degree), graded: true, rows: BTreeMap::new() }
    }

    /// Empty basis that accepts vectors with terms of several degrees.
    pub fn unrestricted() -> Self {
        EchelonBasis { degree: None, graded: false, rows: BTreeMap::new() }
    }

    /// Assemble a basis from rows already in reduced echelon form.
    pub(crate) fn from_reduced_rows(degree: Option<u32>, rows: Vec<(SparseVector, C)>) -> Self {
        let rows: BTreeMap<_, _> = rows
            .into_iter()
            .map(|(vector, companion)| {
                let pivot = vector.min_monomial().expect("rows are nonzero").0.clone();
                (pivot, Row { vector, companion })
            })
            .collect();
        let basis = EchelonBasis { degree, graded: true, rows };
        debug_assert!(basis.is_reduced());
        basis
    }

    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows in increasing pivot order.
    pub fn rows(&self) -> impl ExactSizeIterator<Item = &SparseVector> {
        self.rows.values().map(|r| &r.vector)
    }

    pub fn pivots(&self) -> impl ExactSizeIterator<Item = &MonomialCode> {
        self.rows.keys()
    }

    pub fn companions(&self) -> impl ExactSizeIterator<Item = &C> {
        self.rows.values().map(|r| &r.companion)
    }

    /// `(row, companion)` pairs in pivot order.
    pub fn entries(&self) -> impl ExactSizeIterator<Item = (&SparseVector, &C)> {
        self.rows.values().map(|r| (&r.vector, &r.companion))
    }

    fn check(&mut self, v: &SparseVector, commit: bool) -> Result<()> {
        if !self.graded || v.is_zero() {
            return Ok(());
        }
        let d = v.degree().expect("nonzero");
        if v.min_degree() != Some(d) {
            return Err(Error::MixedDegrees);
        }
        match self.degree {
            Some(expected) if expected != d => Err(Error::DegreeMismatch { expected, found: d }),
            Some(_) => Ok(()),
            None => {
                if commit {
                    self.degree = Some(d);
                }
                Ok(())
            }
        }
    }

    /// Normal form of `v` modulo the span, with the companion following along.
    pub fn reduce_tracked(&self, mut v: SparseVector, mut companion: C) -> (SparseVector, C) {
        let hits: Vec<(MonomialCode, Rational)> = v
            .terms()
            .filter(|(code, _)| self.rows.contains_key(*code))
            .map(|(code, c)| (code.clone(), c.clone()))
            .collect();
        for (pivot, c) in hits {
            let row = &self.rows[&pivot];
            let neg = -c;
            v.add_scaled(&neg, &row.vector);
            companion.add_scaled(&neg, &row.companion);
        }
        (v, companion)
    }

    /// Coordinates of `v` in terms of the rows, meaningful when `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVector) -> Vec<(&SparseVector, &C, Rational)> {
        v.terms()
            .filter_map(|(code, c)| self.rows.get(code).map(|r| (&r.vector, &r.companion, c.clone())))
            .collect()
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        let mut r = v.clone();
        for (row, _, c) in self.coordinates(v) {
            r.add_scaled(&-c, row);
        }
        r.is_zero()
    }

    /// Reduce `v`; when something survives, normalize it, clear its pivot from
    /// the other rows and add it. Returns the new row as it was inserted.
    pub fn insert_tracked(&mut self, v: SparseVector, companion: C) -> Result<Option<(SparseVector, C)>> {
        self.check(&v, true)?;
        let (mut r, mut c) = self.reduce_tracked(v, companion);
        let Some((pivot, lead)) = r.min_monomial().map(|(p, l)| (p.clone(), l.clone())) else {
            return Ok(None);
        };
        if !lead.is_one() {
            let inv = lead.recip();
            r.scale_in_place(&inv);
            c.scale(&inv);
        }
        for row in self.rows.values_mut() {
            if let Some(k) = row.vector.coeff(&pivot).cloned() {
                let neg = -k;
                row.vector.add_scaled(&neg, &r);
                row.companion.add_scaled(&neg, &c);
            }
        }
        self.rows.insert(pivot, Row { vector: r.clone(), companion: c.clone() });
        Ok(Some((r, c)))
    }

    /// Invariant check: monic pivots, pivot is the smallest key, pivots appear in no other row.
    pub fn is_reduced(&self) -> bool {
        self.rows.iter().all(|(pivot, row)| {
            matches!(row.vector.min_monomial(), Some((p, c)) if p == pivot && c.is_one())
                && self
                    .rows
                    .keys()
                    .filter(|q| *q != pivot)
                    .all(|q| row.vector.coeff(q).is_none())
        })
    }

    pub fn without_companions(&self) -> EchelonBasis {
        EchelonBasis {
            degree: self.degree,
            graded: self.graded,
            rows: self
                .rows
                .iter()
                .map(|(k, r)| (k.clone(), Row { vector: r.vector.clone(), companion: () }))
                .collect(),
        }
    }
}

impl EchelonBasis {
    pub fn insert(&mut self, v: SparseVector) -> Result<Option<SparseVector>> {
        Ok(self.insert_tracked(v, ())?.map(|(r, _)| r))
    }
}

/// Reduced echelon basis of the span of `vs` (which must share one degree).
pub fn echelonize(vs: &[SparseVector]) -> Result<EchelonBasis> {
    let mut basis = EchelonBasis::new();
    for v in vs {
        basis.insert(v.clone())?;
    }
    Ok(basis)
}

/// Normal form of `v` modulo the span of `basis`; zero exactly when `v` is in the span.
pub fn reduce<C: Companion>(v: &SparseVector, basis: &EchelonBasis<C>) -> Result<SparseVector> {
    if let (Some(expected), Some(found)) = (basis.degree, v.degree()) {
        if basis.graded && (expected != found || v.min_degree() != Some(found)) {
            return Err(Error::DegreeMismatch { expected, found });
        }
    }
    let mut out = v.clone();
    for (row, _, c) in basis.coordinates(v) {
        out.add_scaled(&-c, row);
    }
    Ok(out)
}

/// Extend `core` by `candidates` in input order. Returns the grown basis and
/// the normalized remainders of the candidates that enlarged the span.
pub fn extend_basis(
    core: &EchelonBasis,
    candidates: &[SparseVector],
) -> Result<(EchelonBasis, Vec<SparseVector>)> {
    let (basis, added) = extend_tracked(core, candidates.iter().map(|v| (v.clone(), ())))?;
    Ok((basis, added.into_iter().map(|(v, _)| v).collect()))
}

/// A grown basis with the rows it gained.
pub type Extension<C> = (EchelonBasis<C>, Vec<(SparseVector, C)>);

pub fn extend_tracked<C: Companion>(
    core: &EchelonBasis<C>,
    candidates: impl IntoIterator<Item = (SparseVector, C)>,
) -> Result<Extension<C>> {
    let mut basis = core.clone();
    let mut added = Vec::new();
    for (v, c) in candidates {
        if let Some(new_row) = basis.insert_tracked(v, c)? {
            added.push(new_row);
        }
    }
    Ok((basis, added))
}

/// Rank of a list of same-degree vectors.
pub fn rank(vs: &[SparseVector]) -> Result<usize> {
    Ok(echelonize(vs)?.rank())
}

/// Nonzero element of `span(vs)` whose largest monomial is smallest, scaled
/// to be monic there. `None` when the span is zero.
///
/// Making the largest monomials of a spanning set pairwise distinct exposes
/// every achievable largest monomial; the element with the smallest one is
/// then unique up to scaling.
pub(crate) fn min_leading_element(vs: impl IntoIterator<Item = Polynomial>) -> Option<Polynomial> {
    let mut by_lead: BTreeMap<MonomialCode, Polynomial> = BTreeMap::new();
    for mut v in vs {
        while let Some((lead, c)) = v.max_monomial().map(|(m, c)| (m.clone(), c.clone())) {
            match by_lead.get(&lead) {
                Some(w) => {
                    let k = c / w.coeff(&lead).expect("lead present");
                    v.add_scaled(&-k, w);
                }
                None => {
                    by_lead.insert(lead, v);
                    break;
                }
            }
        }
    }
    let (lead, mut v) = by_lead.into_iter().next()?;
    let c = v.coeff(&lead).expect("lead present").clone();
    if !c.is_zero() {
        v.scale_in_place(&c.recip());
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_poly;
    use crate::magma::Alphabet;
    use std::sync::Arc;

    fn setup() -> impl Fn(&str) -> Polynomial {
        let a = Arc::new(Alphabet::standard(2));
        move |s| parse_poly(s, &a).unwrap()
    }

    #[test]
    fn proportional_vectors_have_rank_one() {
        let p = setup();
        assert_eq!(rank(&[p("(z1,z2)"), p("2*(z1,z2)")]).unwrap(), 1);
    }

    #[test]
    fn rows_are_reduced_and_monic() {
        let p = setup();
        let b = echelonize(&[p("2*(z1,z1) + (z1,z2)"), p("(z1,z1) - (z2,z2)"), p("(z2,z1)")]).unwrap();
        assert_eq!(b.rank(), 3);
        assert!(b.is_reduced());
        let pivots: Vec<_> = b.pivots().cloned().collect();
        assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        let again = echelonize(&b.rows().cloned().collect::<Vec<_>>()).unwrap();
        assert_eq!(again, b);
    }

    #[test]
    fn mixed_degrees_rejected() {
        let p = setup();
        assert_eq!(echelonize(&[p("z1 + (z1,z1)")]).unwrap_err(), Error::MixedDegrees);
        assert!(matches!(
            echelonize(&[p("z1"), p("(z1,z1)")]),
            Err(Error::DegreeMismatch { expected: 1, found: 2 })
        ));
        let mut free = EchelonBasis::<()>::unrestricted();
        assert!(free.insert(p("z1 + (z1,z1)")).unwrap().is_some());
        assert!(free.insert(p("z1")).unwrap().is_some());
        assert_eq!(free.rank(), 2);
    }

    #[test]
    fn reduce_examples() {
        let p = setup();
        let b = echelonize(&[p("(z1,z2) + (z2,z2)"), p("(z2,z1)")]).unwrap();
        assert!(reduce(&p("3*(z1,z2) + 3*(z2,z2) - (z2,z1)"), &b).unwrap().is_zero());
        let b = echelonize(&[p("(z1,z2)")]).unwrap();
        assert_eq!(reduce(&p("(z1,z1)"), &b).unwrap(), p("(z1,z1)"));
        assert!(reduce(&p("z1"), &b).is_err());
    }

    #[test]
    fn extend_examples() {
        let p = setup();
        let (b, added) = extend_basis(&EchelonBasis::new(), &[p("2*(z1,z2) + (z2,z2)")]).unwrap();
        assert_eq!(added, [p("(z1,z2) + 1/2*(z2,z2)")]);
        assert_eq!(b.rank(), 1);

        let core = echelonize(&[p("(z1,z1)")]).unwrap();
        let (b, added) = extend_basis(&core, &[p("(z1,z1) + (z2,z2)")]).unwrap();
        assert_eq!(added, [p("(z2,z2)")]);
        assert_eq!(b.rank(), 2);

        let (b2, added) = extend_basis(&b, &[p("3*(z1,z1) - (z2,z2)")]).unwrap();
        assert!(added.is_empty());
        assert_eq!(b2, b);
    }

    #[test]
    fn companions_follow_row_operations() {
        let p = setup();
        let mut b = EchelonBasis::<Polynomial>::new();
        let x = Arc::new(Alphabet::indeterminates(3));
        let xs: Vec<Polynomial> = (0..3).map(|i| Polynomial::symbol(&x, i)).collect();
        b.insert_tracked(p("(z1,z1) + (z1,z2)"), xs[0].clone()).unwrap();
        b.insert_tracked(p("(z1,z2)"), xs[1].clone()).unwrap();
        let (r, c) = b.reduce_tracked(p("2*(z1,z1) + 5*(z1,z2)"), xs[2].clone());
        assert!(r.is_zero());
        assert_eq!(c, parse_poly("X3 - 2*X1 - 3*X2", &x).unwrap());
    }

    #[test]
    fn min_leading_element_picks_smallest_top() {
        let x = Arc::new(Alphabet::indeterminates(3));
        let q = |s| parse_poly(s, &x).unwrap();
        let got = min_leading_element([q("(X1,X1) + X2"), q("2*(X1,X1) + X3 - X1")]).unwrap();
        assert_eq!(got, q("X3 - X1 - 2*X2"));
    }
}
