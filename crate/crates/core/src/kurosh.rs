//! Graded components of finitely generated subalgebras and extraction of
//! free generating sets.
//!
//! For homogeneous generators the degree-`d` component of the generated
//! subalgebra is spanned by the generators of degree `d` together with all
//! products `u * v` where `u`, `v` run over bases of the components of degrees
//! `a` and `d - a`. Products of reduced echelon rows are again a reduced
//! echelon family (grafting is injective and monotone in both arguments), so
//! only the generators ever need elimination.
//!
//! Extraction walks the degrees upward: at degree `k` the component `B_k` of
//! the algebra generated by the generators chosen so far is extended to the
//! component `W_k` of the target algebra, and the vectors that extend it
//! become new generators. Inhomogeneous input is handled through leading
//! forms: the set is first brought into reduced form by top-degree
//! cancellation, the homogeneous construction runs on the algebra of leading
//! forms, and every chosen leading form is lifted back to an element of the
//! subalgebra that has it as leading form.
//!
//! Every result is truncated at a degree bound and says so.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::independence::{self, IndependenceVerdict};
use crate::linalg::{extend_tracked, Companion, EchelonBasis, SparseVector};
use crate::Budget;

/// Degree slices of the subalgebra generated by homogeneous polynomials.
#[derive(Clone, Debug)]
pub struct GradedSubalgebra {
    generators: Vec<Polynomial>,
    slices: BTreeMap<u32, EchelonBasis>,
    bound: u32,
}

impl GradedSubalgebra {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Reduced echelon basis of the degree-`d` component, for `d <= bound`.
    pub fn slice(&self, d: u32) -> Option<&EchelonBasis> {
        self.slices.get(&d)
    }

    /// Dimensions of the components of degree `1..=bound`.
    pub fn dims(&self) -> Vec<usize> {
        (1..=self.bound).map(|d| self.slices.get(&d).map_or(0, EchelonBasis::rank)).collect()
    }

    /// Whether a homogeneous element of degree at most `bound` lies in the subalgebra.
    pub fn contains(&self, p: &Polynomial) -> bool {
        if p.is_zero() {
            return true;
        }
        p.homogeneous_components()
            .iter()
            .all(|(d, part)| self.slices.get(d).is_some_and(|s| s.contains(part)))
    }
}

/// Products of all row pairs from slices `a` and `d - a`, for every split `a`.
/// `slices[k]` holds degree `k`; index 0 is unused.
pub(crate) fn product_rows<C: Companion>(
    slices: &[EchelonBasis<C>],
    d: u32,
    budget: &Budget,
) -> Result<Vec<(SparseVector, C)>> {
    let d = d as usize;
    let count: u128 = (1..d).map(|a| slices[a].rank() as u128 * slices[d - a].rank() as u128).sum();
    budget.check(count, || format!("degree-{d} product slice"))?;
    let pairs: Vec<(&SparseVector, &C, &SparseVector, &C)> = (1..d)
        .flat_map(|a| {
            slices[a].entries().flat_map(move |(u, cu)| {
                slices[d - a].entries().map(move |(v, cv)| (u, cu, v, cv))
            })
        })
        .collect();
    Ok(pairs
        .into_par_iter()
        .map(|(u, cu, v, cv)| (u.mul_unchecked(v), cu.product(cv)))
        .collect())
}

/// Degree-`d` slice: products of lower slices, extended by `generators` (all of degree `d`).
pub(crate) fn build_slice<C: Companion>(
    slices: &[EchelonBasis<C>],
    d: u32,
    generators: impl IntoIterator<Item = (SparseVector, C)>,
    budget: &Budget,
) -> Result<EchelonBasis<C>> {
    let mut slice = EchelonBasis::from_reduced_rows(Some(d), product_rows(slices, d, budget)?);
    for (g, c) in generators {
        slice.insert_tracked(g, c)?;
    }
    Ok(slice)
}

/// Slices `0..=bound` (index 0 empty) of the algebra generated by homogeneous `generators`.
pub(crate) fn slices_from<C: Companion>(
    generators: &[(SparseVector, C)],
    bound: u32,
    budget: &Budget,
) -> Result<Vec<EchelonBasis<C>>> {
    let mut slices = vec![EchelonBasis::with_degree(0)];
    for d in 1..=bound {
        let gens = generators.iter().filter(|(g, _)| g.degree() == Some(d)).cloned();
        let slice = build_slice(&slices, d, gens, budget)?;
        slices.push(slice);
    }
    Ok(slices)
}

fn check_homogeneous(ps: &[Polynomial]) -> Result<()> {
    for (i, p) in ps.iter().enumerate() {
        if p.is_zero() {
            return Err(Error::ZeroInput(i));
        }
        if !p.is_homogeneous() {
            return Err(Error::NotHomogeneous(i));
        }
        if !p.same_alphabet(&ps[0]) {
            return Err(Error::AlphabetMismatch);
        }
    }
    Ok(())
}

/// Dynamic programme over degrees `1..=bound` for the subalgebra generated by
/// homogeneous `generators`. Generators above the bound do not affect the result.
pub fn graded_slices(generators: &[Polynomial], bound: u32, budget: &Budget) -> Result<GradedSubalgebra> {
    check_homogeneous(generators)?;
    let tagged: Vec<(SparseVector, ())> = generators.iter().map(|g| (g.clone(), ())).collect();
    let slices = slices_from(&tagged, bound, budget)?;
    Ok(GradedSubalgebra {
        generators: generators.to_vec(),
        slices: slices.into_iter().enumerate().skip(1).map(|(d, s)| (d as u32, s)).collect(),
        bound,
    })
}

/// Certificates attached to a [`FreeGeneratorReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificates {
    /// Independence verdict for the returned generators.
    pub independence: IndependenceVerdict,
    /// The returned generators reproduce the target slices at every degree up to the bound.
    pub generation: bool,
    /// The generators were checked to be a reduced set (distinct, independent leading forms).
    pub reduced: bool,
}

/// A free generating set, certified up to `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGeneratorReport {
    pub generators: Vec<Polynomial>,
    pub degrees: Vec<u32>,
    pub seed_retained: Vec<Polynomial>,
    pub bound: u32,
    pub certificates: Certificates,
}

/// The degree-by-degree extension step shared by both extraction paths.
///
/// `targets[k]` is the degree-`k` slice of the target algebra. Returns the new
/// generators in the order they were chosen.
fn extend_generators<C: Companion>(
    targets: &[EchelonBasis<C>],
    seed: &[(SparseVector, C)],
    bound: u32,
    budget: &Budget,
) -> Result<Vec<(SparseVector, C)>> {
    let mut chosen: Vec<EchelonBasis<C>> = vec![EchelonBasis::with_degree(0)];
    let mut added_all = Vec::new();
    for k in 1..=bound {
        let seeds = seed.iter().filter(|(s, _)| s.degree() == Some(k)).cloned();
        let core = build_slice(&chosen, k, seeds, budget)?;
        let target = &targets[k as usize];
        let (grown, added) = extend_tracked(&core, target.entries().map(|(v, c)| (v.clone(), c.clone())))?;
        if grown.rank() != target.rank() {
            return Err(Error::Invariant(format!(
                "degree-{k} slice of the partial generating set is not contained in the target"
            )));
        }
        added_all.extend(added);
        chosen.push(grown);
    }
    Ok(added_all)
}

fn max_degree(ps: &[Polynomial]) -> u32 {
    ps.iter().filter_map(Polynomial::degree).max().unwrap_or(0)
}

/// Free generating set of the subalgebra generated by homogeneous `generators`,
/// containing `seed`, certified up to `bound`.
pub fn extract_free_generators(
    generators: &[Polynomial],
    bound: u32,
    seed: &[Polynomial],
    budget: &Budget,
) -> Result<FreeGeneratorReport> {
    check_homogeneous(generators)?;
    check_homogeneous(seed)?;
    if let (Some(g), Some(s)) = (generators.first(), seed.first()) {
        if !g.same_alphabet(s) {
            return Err(Error::AlphabetMismatch);
        }
    }
    let needed = max_degree(generators).max(max_degree(seed));
    if bound < needed {
        return Err(Error::BoundTooSmall { bound, needed });
    }
    let target = graded_slices(generators, bound, budget)?;
    let targets: Vec<EchelonBasis> = std::iter::once(EchelonBasis::with_degree(0))
        .chain((1..=bound).map(|d| target.slices[&d].clone()))
        .collect();

    if !seed.is_empty() {
        for (i, s) in seed.iter().enumerate() {
            if !target.contains(s) {
                return Err(Error::SeedNotInSubalgebra(i));
            }
        }
        let seed_bound = max_degree(seed);
        if let IndependenceVerdict::Dependent { witness } =
            independence::relation_search(seed, seed_bound, budget)?
        {
            return Err(Error::SeedDependent(witness.to_string()));
        }
        let seed_algebra = graded_slices(seed, seed_bound, budget)?;
        for d in 1..=seed_bound {
            let mine = seed_algebra.slice(d).expect("within bound");
            if let Some(row) = target.slices[&d].rows().find(|r| !mine.contains(r)) {
                return Err(Error::SeedHypothesis { degree: d, element: row.to_string() });
            }
        }
    }

    let seed_pairs: Vec<(SparseVector, ())> = seed.iter().map(|s| (s.clone(), ())).collect();
    let added = extend_generators(&targets, &seed_pairs, bound, budget)?;
    let mut result: Vec<Polynomial> = seed.to_vec();
    result.extend(added.into_iter().map(|(v, _)| v));

    let independence = if result.is_empty() {
        IndependenceVerdict::IndependentUpTo(bound)
    } else {
        independence::relation_search(&result, bound, budget)?
    };
    if !independence.is_independent() {
        return Err(Error::Invariant(format!("extracted generators are dependent: {independence:?}")));
    }
    let regenerated = graded_slices(&result, bound, budget)?;
    let generation = (1..=bound).all(|d| regenerated.slice(d) == target.slice(d));
    if !generation {
        return Err(Error::Invariant("extracted generators do not regenerate the subalgebra".into()));
    }
    Ok(FreeGeneratorReport {
        degrees: result.iter().map(|p| p.degree().expect("nonzero")).collect(),
        generators: result,
        seed_retained: seed.to_vec(),
        bound,
        certificates: Certificates { independence, generation, reduced: true },
    })
}

/// Leading-form slices of the subalgebra generated by a reduced set.
///
/// Each row of slice `d` is a leading form of degree `d`; its companion is an
/// element of the subalgebra of degree exactly `d` with that leading form.
struct LeadingForms<'b> {
    reduced: Vec<(usize, Polynomial)>,
    slices: Vec<EchelonBasis<Polynomial>>,
    budget: &'b Budget,
}

impl<'b> LeadingForms<'b> {
    fn new(budget: &'b Budget) -> Self {
        LeadingForms { reduced: Vec::new(), slices: vec![EchelonBasis::with_degree(0)], budget }
    }

    /// Builder for a set already known to be reduced.
    fn of_reduced(set: &[Polynomial], budget: &'b Budget) -> Self {
        let mut lf = Self::new(budget);
        lf.reduced = set.iter().cloned().enumerate().collect();
        lf.reduced.sort_by_key(|(i, p)| (p.degree(), *i));
        lf
    }

    fn ensure(&mut self, d: u32) -> Result<()> {
        while self.slices.len() <= d as usize {
            let k = self.slices.len() as u32;
            let gens: Vec<(SparseVector, Polynomial)> = self
                .reduced
                .iter()
                .filter(|(_, p)| p.degree() == Some(k))
                .map(|(_, p)| (p.pi_n(k), p.clone()))
                .collect();
            let slice = build_slice(&self.slices, k, gens, self.budget)?;
            self.slices.push(slice);
        }
        Ok(())
    }

    fn slice(&mut self, d: u32) -> Result<&EchelonBasis<Polynomial>> {
        self.ensure(d)?;
        Ok(&self.slices[d as usize])
    }

    /// Cancel leading forms against the slices until the top is irreducible or
    /// nothing is left. The result differs from `p` by an element of the
    /// subalgebra.
    fn top_reduce(&mut self, mut p: Polynomial) -> Result<Polynomial> {
        while let Some(d) = p.degree() {
            let top = p.pi_n(d);
            let (rest, lifted) = self.slice(d)?.reduce_tracked(top, p);
            if !rest.is_zero() {
                return Ok(lifted);
            }
            p = lifted;
        }
        Ok(p)
    }

    /// Bring `generators` into reduced form by cancelling leading forms.
    ///
    /// Candidates are processed in increasing degree. A candidate whose top
    /// survives joins the set; when cancellation pushed it below elements
    /// already accepted, those elements are re-queued so that acceptance
    /// always happens in nondecreasing degree.
    fn absorb(&mut self, generators: &[Polynomial]) -> Result<()> {
        let mut queue: BTreeMap<(u32, usize), Polynomial> = generators
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_zero())
            .map(|(i, g)| ((g.degree().expect("nonzero"), i), g.clone()))
            .collect();
        while let Some(((_, seq), g)) = queue.pop_first() {
            let g = self.top_reduce(g)?;
            let Some(d) = g.degree() else { continue };
            let cut = self.reduced.partition_point(|(_, p)| p.degree() <= Some(d));
            for (s, p) in self.reduced.drain(cut..) {
                queue.insert((p.degree().expect("nonzero"), s), p);
            }
            let lead = g.pi_n(d).min_monomial().map(|(_, c)| c.recip()).expect("nonzero");
            self.reduced.push((seq, g.scale(&lead)));
            self.slices.truncate(d as usize);
        }
        Ok(())
    }

    fn set(&self) -> Vec<Polynomial> {
        self.reduced.iter().map(|(_, p)| p.clone()).collect()
    }
}

/// Free generating set for the subalgebra generated by arbitrary `generators`,
/// obtained by lifting a free generating set of its leading-form algebra.
///
/// `seed` must be reduced; it is kept verbatim and its leading forms seed the
/// homogeneous construction.
pub fn lift_leading_forms(
    generators: &[Polynomial],
    bound: u32,
    seed: &[Polynomial],
    budget: &Budget,
) -> Result<FreeGeneratorReport> {
    let all: Vec<&Polynomial> = generators.iter().chain(seed).collect();
    for (i, p) in all.iter().enumerate() {
        if p.is_zero() {
            return Err(Error::ZeroInput(i));
        }
        if !p.same_alphabet(all[0]) {
            return Err(Error::AlphabetMismatch);
        }
    }
    let needed = max_degree(generators).max(max_degree(seed));
    if bound < needed {
        return Err(Error::BoundTooSmall { bound, needed });
    }
    let seed_bound = max_degree(seed);
    if !seed.is_empty() && !independence::check_reduced(seed, seed_bound, budget)? {
        return Err(Error::SeedNotReduced(
            "leading forms are repeated or algebraically dependent".into(),
        ));
    }

    let mut forms = LeadingForms::new(budget);
    forms.absorb(generators)?;

    if !seed.is_empty() {
        for (i, s) in seed.iter().enumerate() {
            if !forms.top_reduce(s.clone())?.is_zero() {
                return Err(Error::SeedNotInSubalgebra(i));
            }
        }
        let mut seed_forms = LeadingForms::of_reduced(seed, budget);
        for d in 1..=seed_bound {
            let mine = seed_forms.slice(d)?.without_companions();
            let theirs = forms.slice(d)?;
            if let Some((_, lift)) = theirs.entries().find(|(row, _)| !mine.contains(row)) {
                return Err(Error::SeedHypothesis { degree: d, element: lift.to_string() });
            }
        }
    }

    forms.ensure(bound)?;
    let targets = &forms.slices[..=bound as usize];
    let seed_pairs: Vec<(SparseVector, Polynomial)> = seed
        .iter()
        .map(|s| (s.leading_form().expect("nonzero"), s.clone()))
        .collect();
    let added = extend_generators(targets, &seed_pairs, bound, budget)?;
    let mut result: Vec<Polynomial> = seed.to_vec();
    result.extend(added.into_iter().map(|(_, lift)| lift));

    let reduced = result.is_empty() || independence::check_reduced(&result, bound, budget)?;
    if !reduced {
        return Err(Error::Invariant("lifted generators are not reduced".into()));
    }
    let mut regenerated = LeadingForms::of_reduced(&result, budget);
    let mut generation = true;
    for d in 1..=bound {
        generation &= *regenerated.slice(d)? == forms.slices[d as usize];
    }
    for p in forms.set() {
        generation &= regenerated.top_reduce(p)?.is_zero();
    }
    if !generation {
        return Err(Error::Invariant("lifted generators do not regenerate the subalgebra".into()));
    }
    Ok(FreeGeneratorReport {
        degrees: result.iter().map(|p| p.degree().expect("nonzero")).collect(),
        generators: result,
        seed_retained: seed.to_vec(),
        bound,
        certificates: Certificates {
            independence: IndependenceVerdict::ReducedCertified,
            generation,
            reduced,
        },
    })
}

/// Reduced set generating the same subalgebra as `generators`, obtained by
/// top-degree cancellation.
pub fn reduce_generating_set(generators: &[Polynomial], budget: &Budget) -> Result<Vec<Polynomial>> {
    let mut forms = LeadingForms::new(budget);
    forms.absorb(generators)?;
    Ok(forms.set())
}

/// Leading-form slices `1..=bound` of the subalgebra generated by `generators`.
pub fn leading_form_slices(
    generators: &[Polynomial],
    bound: u32,
    budget: &Budget,
) -> Result<BTreeMap<u32, EchelonBasis>> {
    let mut forms = LeadingForms::new(budget);
    forms.absorb(generators)?;
    forms.ensure(bound)?;
    Ok((1..=bound).map(|d| (d, forms.slices[d as usize].without_companions())).collect())
}

/// Whether `p` lies in the subalgebra generated by `generators`.
pub fn subalgebra_contains(generators: &[Polynomial], p: &Polynomial, budget: &Budget) -> Result<bool> {
    let mut forms = LeadingForms::new(budget);
    forms.absorb(generators)?;
    Ok(forms.top_reduce(p.clone())?.is_zero())
}
