//! Sparse polynomials in the free non-associative algebra over the rationals.
//!
//! A [`Polynomial`] maps monomial codes to nonzero rational coefficients. The
//! map is kept sorted in canonical monomial order (degree, shape, word). That
//! order is a convention of this crate; nothing in the algebra depends on it
//! beyond making printing, pivoting and basis selection deterministic.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::magma::{embed, Alphabet, MagmaTerm, MonomialCode, Shape};

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Clone)]
pub struct Polynomial {
    alphabet: Arc<Alphabet>,
    terms: BTreeMap<MonomialCode, Rational>,
}

impl Polynomial {
    pub fn zero(alphabet: &Arc<Alphabet>) -> Self {
        Polynomial { alphabet: alphabet.clone(), terms: BTreeMap::new() }
    }

    pub fn monomial(alphabet: &Arc<Alphabet>, code: MonomialCode, coeff: Rational) -> Self {
        let mut p = Self::zero(alphabet);
        if !coeff.is_zero() {
            p.terms.insert(code, coeff);
        }
        p
    }

    pub fn from_term(alphabet: &Arc<Alphabet>, term: &MagmaTerm) -> Self {
        Self::monomial(alphabet, embed(term), Rational::one())
    }

    /// The degree-one polynomial for the symbol at `index`.
    pub fn symbol(alphabet: &Arc<Alphabet>, index: u16) -> Self {
        Self::monomial(alphabet, MonomialCode::leaf(index), Rational::one())
    }

    /// Sum of the given terms; repeated codes accumulate and zeros are pruned.
    pub fn from_terms<I>(alphabet: &Arc<Alphabet>, terms: I) -> Self
    where
        I: IntoIterator<Item = (MonomialCode, Rational)>,
    {
        let mut p = Self::zero(alphabet);
        for (code, coeff) in terms {
            p.add_term(code, coeff);
        }
        p
    }

    pub(crate) fn add_term(&mut self, code: MonomialCode, coeff: Rational) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(code) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn same_alphabet(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet
    }

    fn check_alphabet(&self, other: &Polynomial) -> Result<()> {
        if self.same_alphabet(other) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomial terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MonomialCode, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, code: &MonomialCode) -> Option<&Rational> {
        self.terms.get(code)
    }

    /// Degree of the highest-degree monomial term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(MonomialCode::degree)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(MonomialCode::degree)
    }

    /// Nonzero with all terms of one degree.
    pub fn is_homogeneous(&self) -> bool {
        !self.is_zero() && self.degree() == self.min_degree()
    }

    /// Smallest monomial in canonical order (the echelon pivot position).
    pub fn min_monomial(&self) -> Option<(&MonomialCode, &Rational)> {
        self.terms.iter().next()
    }

    /// Largest monomial in canonical order.
    pub fn max_monomial(&self) -> Option<(&MonomialCode, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_alphabet(other)?;
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), other);
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_alphabet(other)?;
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_alphabet(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        let mut out = self.clone();
        out.scale_in_place(c);
        out
    }

    pub(crate) fn scale_in_place(&mut self, c: &Rational) {
        if c.is_zero() {
            self.terms.clear();
        } else if !c.is_one() {
            for v in self.terms.values_mut() {
                *v *= c;
            }
        }
    }

    /// `self += c * other`, without an alphabet check.
    pub(crate) fn add_scaled(&mut self, c: &Rational, other: &Polynomial) {
        if c.is_zero() {
            return;
        }
        for (code, v) in &other.terms {
            self.add_term(code.clone(), c * v);
        }
    }

    /// Bilinear product. Grafting is injective, so distinct pairs of terms
    /// never collide and no accumulation is needed.
    pub(crate) fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                terms.push((MonomialCode::graft(a, b), ca * cb));
            }
        }
        Polynomial { alphabet: self.alphabet.clone(), terms: terms.into_iter().collect() }
    }

    /// Homogeneous component of degree `n`.
    pub fn pi_n(&self, n: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(c, _)| c.degree() == n)
            .map(|(c, v)| (c.clone(), v.clone()))
            .collect();
        Polynomial { alphabet: self.alphabet.clone(), terms }
    }

    /// All nonzero homogeneous components, keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (c, v) in &self.terms {
            out.entry(c.degree())
                .or_insert_with(|| Polynomial::zero(&self.alphabet))
                .terms
                .insert(c.clone(), v.clone());
        }
        out
    }

    /// The highest-degree nonzero homogeneous component.
    pub fn leading_form(&self) -> Result<Polynomial> {
        let d = self.degree().ok_or(Error::ZeroPolynomial("leading form"))?;
        Ok(self.pi_n(d))
    }

    /// Partition of the degree-`n` component by product type.
    pub fn product_type_split(&self, n: u32) -> BTreeMap<Shape, Polynomial> {
        let mut out: BTreeMap<Shape, Polynomial> = BTreeMap::new();
        for (c, v) in self.terms.iter().filter(|(c, _)| c.degree() == n) {
            out.entry(c.shape().clone())
                .or_insert_with(|| Polynomial::zero(&self.alphabet))
                .terms
                .insert(c.clone(), v.clone());
        }
        out
    }

    /// Image under the algebra homomorphism sending `Xi` to `images[i]`.
    pub fn substitute(&self, map: &SubstitutionMap) -> Result<Polynomial> {
        let mut eval = Evaluator::new(map);
        let mut out = Polynomial::zero(map.target_alphabet());
        for (code, c) in &self.terms {
            let image = eval.eval(code)?;
            out.add_scaled(c, &image);
        }
        Ok(out)
    }

    pub(crate) fn into_terms(self) -> BTreeMap<MonomialCode, Rational> {
        self.terms
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.same_alphabet(other)
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::print_poly(self))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::print_poly(self))
    }
}

// Operator forms panic on an alphabet mismatch; the named methods return it
// as an error instead.
impl ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs).expect("alphabet mismatch")
    }
}

impl ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs).expect("alphabet mismatch")
    }
}

impl ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs).expect("alphabet mismatch")
    }
}

impl ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

/// Images of the indeterminates `X1, ..., Xn`.
#[derive(Clone, Debug)]
pub struct SubstitutionMap {
    images: Vec<Polynomial>,
}

impl SubstitutionMap {
    pub fn new(images: Vec<Polynomial>) -> Result<Self> {
        let first = images.first().ok_or(Error::EmptyInput)?;
        if images.iter().any(|p| !p.same_alphabet(first)) {
            return Err(Error::AlphabetMismatch);
        }
        Ok(SubstitutionMap { images })
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn target_alphabet(&self) -> &Arc<Alphabet> {
        self.images[0].alphabet()
    }
}

/// Bottom-up evaluation of monomials under a substitution, memoized per
/// distinct sub-monomial.
pub(crate) struct Evaluator<'a> {
    map: &'a SubstitutionMap,
    memo: HashMap<MonomialCode, Arc<Polynomial>>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(map: &'a SubstitutionMap) -> Self {
        Evaluator { map, memo: HashMap::new() }
    }

    pub(crate) fn eval(&mut self, code: &MonomialCode) -> Result<Arc<Polynomial>> {
        if let Some(p) = self.memo.get(code) {
            return Ok(p.clone());
        }
        let value = match code.split() {
            None => {
                let i = code.as_leaf().expect("unsplittable codes are leaves") as usize;
                let image = self.map.images.get(i).ok_or(Error::UncoveredIndeterminate {
                    index: i + 1,
                    available: self.map.images.len(),
                })?;
                Arc::new(image.clone())
            }
            Some((l, r)) => {
                let l = self.eval(&l)?;
                let r = self.eval(&r)?;
                Arc::new(l.mul_unchecked(&r))
            }
        };
        self.memo.insert(code.clone(), value.clone());
        Ok(value)
    }
}

/// Reduced echelon basis of the degree-`d` component of the subalgebra
/// generated by homogeneous `generators`.
pub fn subalgebra_membership_slice(generators: &[Polynomial], d: u32) -> Result<EchelonBasis> {
    let sub = crate::kurosh::graded_slices(generators, d, &crate::Budget::default())?;
    Ok(sub.slice(d).cloned().unwrap_or_else(|| EchelonBasis::with_degree(d)))
}
