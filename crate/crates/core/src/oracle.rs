//! Randomized and exhaustive self-checks, plus the random families they use.
//!
//! Every property draws from its own ChaCha stream derived from the configured
//! seed, so reports are reproducible byte for byte and adding a property does
//! not perturb the others.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{rational, Polynomial, SubstitutionMap};
use crate::error::{Error, Result};
use crate::independence::{check_reduced, relation_search, IndependenceVerdict};
use crate::io::{print_code, print_poly, print_term};
use crate::kurosh::{extract_free_generators, graded_slices, lift_leading_forms};
use crate::linalg::{echelonize, rank, EchelonBasis};
use crate::magma::{
    embed, monomial_count, monomials_of_degree, shapes_of_degree, terms_of_degree, unembed,
    words_of_degree, Alphabet, MagmaTerm, MonomialCode, Shape, Word,
};
use crate::Budget;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub alphabet_size: usize,
    pub bound: u32,
    pub seed: u64,
    /// Random instances per randomized property.
    pub trials: usize,
    pub budget: Budget,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { alphabet_size: 2, bound: 6, seed: 0, trials: 20, budget: Budget::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub checked: u64,
    pub counterexample: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub config: OracleConfig,
    pub properties: Vec<PropertyResult>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "alphabet_size": self.config.alphabet_size,
            "bound": self.config.bound,
            "seed": self.config.seed,
            "trials": self.config.trials,
            "passed": self.passed(),
            "properties": self.properties.iter().map(|p| json!({
                "name": p.name,
                "checked": p.checked,
                "passed": p.passed(),
                "counterexample": p.counterexample,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Tally for one property: counts checks and keeps the first failure.
struct Tally {
    name: &'static str,
    checked: u64,
    counterexample: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, checked: 0, counterexample: None }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn done(self) -> PropertyResult {
        PropertyResult { name: self.name, checked: self.checked, counterexample: self.counterexample }
    }
}

fn stream(seed: u64, property: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(property);
    rng
}

pub fn oracle_suite(config: &OracleConfig) -> Result<OracleReport> {
    if config.alphabet_size == 0 || config.bound == 0 {
        return Err(Error::InvalidAlphabet("alphabet size and bound must be positive".into()));
    }
    let alphabet = Arc::new(Alphabet::standard(config.alphabet_size));
    let budget = &config.budget;
    let bound = config.bound;
    for d in 1..=bound {
        budget.check(monomial_count(alphabet.len(), d), || format!("degree-{d} term slice"))?;
    }

    let mut properties = Vec::new();
    properties.extend(embedding_checks(&alphabet, bound));
    properties.push(graft_cancellation(&alphabet, bound.min(6)));
    properties.push(word_cancellation(alphabet.len(), bound.min(6)));
    properties.push(shape_counts(bound + 1));
    properties.push(free_algebra_dims(&alphabet, bound, budget)?);
    properties.push(product_types_under_substitution(&alphabet, bound.min(4), &mut stream(config.seed, 1)));
    properties.push(homogeneous_substitution(&alphabet, config.trials, &mut stream(config.seed, 2)));
    properties.push(product_type_rank(&alphabet, config.trials, &mut stream(config.seed, 3))?);
    properties.push(same_degree_independence(&alphabet, bound, config.trials, budget, &mut stream(config.seed, 4))?);
    properties.push(reduced_set_independence(&alphabet, bound, config.trials, budget, &mut stream(config.seed, 5))?);
    properties.push(free_generator_extraction(&alphabet, bound, config.trials, budget, &mut stream(config.seed, 6))?);
    properties.push(leading_form_lift(&alphabet, bound, config.trials, budget, &mut stream(config.seed, 7))?);
    Ok(OracleReport { config: config.clone(), properties })
}

fn embedding_checks(alphabet: &Alphabet, bound: u32) -> [PropertyResult; 2] {
    let mut injective = Tally::new("embedding_injective");
    let mut degrees = Tally::new("degree_triple");
    for d in 1..=bound {
        let mut seen: HashMap<MonomialCode, MagmaTerm> = HashMap::new();
        for t in terms_of_degree(alphabet, d) {
            let code = embed(&t);
            let round = unembed(&code);
            injective.check(round.as_ref() == Ok(&t), || format!("unembed(embed({})) differs", print_term(&t, alphabet)));
            let clash = seen.insert(code.clone(), t.clone());
            injective.check(clash.is_none(), || {
                format!("{} and {} share a code", print_term(&t, alphabet), print_term(&clash.unwrap(), alphabet))
            });
            let ok = t.degree() == d && code.shape().degree() == d && code.word().degree() == d;
            degrees.check(ok, || format!("degrees disagree on {}", print_term(&t, alphabet)));
        }
    }
    [injective.done(), degrees.done()]
}

fn codes_up_to(alphabet: &Alphabet, bound: u32) -> Vec<MonomialCode> {
    (1..=bound).flat_map(|d| monomials_of_degree(alphabet, d)).collect()
}

fn graft_cancellation(alphabet: &Alphabet, bound: u32) -> PropertyResult {
    let mut tally = Tally::new("graft_cancellative");
    let codes = codes_up_to(alphabet, bound.saturating_sub(1));
    let mut seen: HashMap<MonomialCode, (&MonomialCode, &MonomialCode)> = HashMap::new();
    for l in &codes {
        for r in codes.iter().filter(|r| l.degree() + r.degree() <= bound) {
            let g = MonomialCode::graft(l, r);
            let back = g.split();
            tally.check(back.as_ref() == Some(&(l.clone(), r.clone())), || {
                format!("split of graft({}, {}) differs", print_code(l, alphabet), print_code(r, alphabet))
            });
            if let Some((l2, r2)) = seen.insert(g, (l, r)) {
                tally.check(false, || {
                    format!(
                        "graft({}, {}) = graft({}, {})",
                        print_code(l, alphabet),
                        print_code(r, alphabet),
                        print_code(l2, alphabet),
                        print_code(r2, alphabet)
                    )
                });
            }
        }
    }
    tally.done()
}

fn word_cancellation(symbols: usize, bound: u32) -> PropertyResult {
    let mut tally = Tally::new("word_cancellative");
    let words: Vec<Word> = (1..bound).flat_map(|d| words_of_degree(symbols, d)).collect();
    let mut seen: HashMap<(Word, u32), (&Word, &Word)> = HashMap::new();
    for u in &words {
        for v in words.iter().filter(|v| u.degree() + v.degree() <= bound) {
            let key = (u.concat(v), u.degree());
            if let Some((u2, v2)) = seen.insert(key, (u, v)) {
                tally.check(false, || format!("{u:?}{v:?} = {u2:?}{v2:?} with equal left lengths"));
            } else {
                tally.check(true, String::new);
            }
        }
    }
    tally.done()
}

/// Catalan numbers by the convolution recurrence, independent of the closed form.
fn catalan_recurrence(n: usize) -> Vec<u128> {
    let mut c = vec![1u128];
    for k in 1..=n {
        c.push((0..k).map(|i| c[i] * c[k - 1 - i]).sum());
    }
    c
}

fn shape_counts(bound: u32) -> PropertyResult {
    let mut tally = Tally::new("shape_counts");
    let expected = catalan_recurrence(bound as usize);
    for n in 1..=bound {
        let shapes = shapes_of_degree(n);
        let distinct: HashSet<&Shape> = shapes.iter().collect();
        let ok = shapes.len() as u128 == expected[n as usize - 1] && distinct.len() == shapes.len();
        tally.check(ok, || format!("degree {n}: {} shapes, expected {}", shapes.len(), expected[n as usize - 1]));
    }
    tally.done()
}

fn free_algebra_dims(alphabet: &Arc<Alphabet>, bound: u32, budget: &Budget) -> Result<PropertyResult> {
    let mut tally = Tally::new("free_algebra_dims");
    let expected = catalan_recurrence(bound as usize);
    let letters: Vec<Polynomial> = (0..alphabet.len() as u16).map(|i| Polynomial::symbol(alphabet, i)).collect();
    let dims = graded_slices(&letters, bound, budget)?.dims();
    for (i, &dim) in dims.iter().enumerate() {
        let want = (alphabet.len() as u128).pow(i as u32 + 1) * expected[i];
        tally.check(dim as u128 == want, || format!("degree {}: dimension {dim}, expected {want}", i + 1));
    }
    let one = Arc::new(Alphabet::standard(1));
    for k in 2..=3u32 {
        let g = [Polynomial::from_term(&one, &MagmaTerm::left_comb(0, k))];
        let top = bound.max(k);
        let dims = graded_slices(&g, top, budget)?.dims();
        for (i, &dim) in dims.iter().enumerate() {
            let d = i as u32 + 1;
            let want = if d.is_multiple_of(k) { expected[(d / k) as usize - 1] } else { 0 };
            tally.check(dim as u128 == want, || format!("generator of degree {k}, degree {d}: dimension {dim}, expected {want}"));
        }
    }
    Ok(tally.done())
}

fn product_types_under_substitution<R: Rng>(alphabet: &Alphabet, bound: u32, rng: &mut R) -> PropertyResult {
    let mut tally = Tally::new("product_type_substitution");
    let xs = Alphabet::indeterminates(2);
    let ms: Vec<MagmaTerm> = (1..=bound).flat_map(|d| terms_of_degree(&xs, d)).collect();
    for m in &ms {
        for m2 in &ms {
            let k = rng.gen_range(1..=3);
            let args: Vec<MagmaTerm> = (0..2).map(|_| random_term(rng, alphabet.len(), k)).collect();
            let ok = crate::magma::product_type_respects_substitution(m, m2, &args) == Ok(true);
            tally.check(ok, || {
                format!(
                    "M = {}, M' = {}, args = [{}, {}]",
                    print_term(m, &xs),
                    print_term(m2, &xs),
                    print_term(&args[0], alphabet),
                    print_term(&args[1], alphabet)
                )
            });
        }
    }
    tally.done()
}

fn homogeneous_substitution<R: Rng>(alphabet: &Arc<Alphabet>, trials: usize, rng: &mut R) -> PropertyResult {
    let mut tally = Tally::new("homogeneous_substitution");
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let xs = Arc::new(Alphabet::indeterminates(n));
        let deg_m = rng.gen_range(1..=5);
        let m = Polynomial::monomial(&xs, random_code(rng, n, deg_m), rational(1));
        let k = rng.gen_range(1..=3);
        let images: Vec<Polynomial> = (0..n).map(|_| random_homogeneous(rng, alphabet, k, 3)).collect();
        let value = SubstitutionMap::new(images.clone()).and_then(|map| m.substitute(&map));
        let ok = matches!(&value, Ok(v) if v.is_homogeneous() && v.degree() == Some(k * deg_m));
        tally.check(ok, || format!("M = {m}, images = [{}]", join(&images)));
    }
    tally.done()
}

fn join(ps: &[Polynomial]) -> String {
    ps.iter().map(print_poly).collect::<Vec<_>>().join("; ")
}

/// Evaluations of every monomial with the given shape at `images`.
pub fn shape_evaluations(shape: &Shape, images: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let xs = Arc::new(Alphabet::indeterminates(images.len()));
    let map = SubstitutionMap::new(images.to_vec())?;
    words_of_degree(images.len(), shape.degree())
        .into_iter()
        .map(|w| {
            let code = MonomialCode::new(shape.clone(), w)?;
            Polynomial::monomial(&xs, code, rational(1)).substitute(&map)
        })
        .collect()
}

/// Rank of vectors that may live in different degrees.
fn mixed_rank(vs: &[Polynomial]) -> Result<usize> {
    let mut basis = EchelonBasis::unrestricted();
    for v in vs {
        basis.insert(v.clone())?;
    }
    Ok(basis.rank())
}

fn product_type_rank<R: Rng>(alphabet: &Arc<Alphabet>, trials: usize, rng: &mut R) -> Result<PropertyResult> {
    let mut tally = Tally::new("product_type_rank");
    let z3 = Arc::new(Alphabet::standard(3));
    let example = vec![
        crate::io::parse_poly("(z1,z2)", &z3)?,
        crate::io::parse_poly("((z3,z3),z2)", &z3)?,
    ];
    let square = embed(&MagmaTerm::node(MagmaTerm::Leaf(0), MagmaTerm::Leaf(0)));
    let evals = shape_evaluations(square.shape(), &example)?;
    let r = mixed_rank(&evals)?;
    tally.check(r == 4, || format!("illustration products have rank {r}"));
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let Some(images) = random_independent_family(rng, alphabet, k, n) else { continue };
        let j = rng.gen_range(1..=3);
        let shape = random_shape(rng, j);
        let evals = shape_evaluations(&shape, &images)?;
        let r = rank(&evals)?;
        let want = n.pow(j);
        tally.check(r == want, || format!("shape {shape}, images [{}]: rank {r}, expected {want}", join(&images)));
    }
    Ok(tally.done())
}

fn same_degree_independence<R: Rng>(
    alphabet: &Arc<Alphabet>,
    bound: u32,
    trials: usize,
    budget: &Budget,
    rng: &mut R,
) -> Result<PropertyResult> {
    let mut tally = Tally::new("same_degree_independence");
    for _ in 0..trials {
        let k = rng.gen_range(1..=3.min(bound));
        let n = rng.gen_range(1..=3);
        let Some(family) = random_independent_family(rng, alphabet, k, n) else { continue };
        let v = relation_search(&family, bound, budget)?;
        tally.check(v == IndependenceVerdict::IndependentUpTo(bound), || format!("[{}] gave {v:?}", join(&family)));
    }
    Ok(tally.done())
}

fn reduced_set_independence<R: Rng>(
    alphabet: &Arc<Alphabet>,
    bound: u32,
    trials: usize,
    budget: &Budget,
    rng: &mut R,
) -> Result<PropertyResult> {
    let mut tally = Tally::new("reduced_set_independence");
    let top = bound.min(3);
    for _ in 0..trials {
        let set = random_reduced_set(rng, alphabet, top, 3, budget)?;
        let v = relation_search(&set, bound, budget)?;
        tally.check(v.is_independent(), || format!("[{}] gave {v:?}", join(&set)));
    }
    Ok(tally.done())
}

fn free_generator_extraction<R: Rng>(
    alphabet: &Arc<Alphabet>,
    bound: u32,
    trials: usize,
    budget: &Budget,
    rng: &mut R,
) -> Result<PropertyResult> {
    let mut tally = Tally::new("free_generator_extraction");
    for _ in 0..trials {
        let g = random_homogeneous_generators(rng, alphabet, bound.min(3), 3);
        let outcome = extract_free_generators(&g, bound, &[], budget);
        if let Err(Error::BudgetExceeded { .. }) = outcome {
            return outcome.map(|_| unreachable!());
        }
        let ok = matches!(&outcome, Ok(r) if r.certificates.generation && r.certificates.independence.is_independent());
        tally.check(ok, || format!("G = [{}]: {outcome:?}", join(&g)));
    }
    Ok(tally.done())
}

fn leading_form_lift<R: Rng>(
    alphabet: &Arc<Alphabet>,
    bound: u32,
    trials: usize,
    budget: &Budget,
    rng: &mut R,
) -> Result<PropertyResult> {
    let mut tally = Tally::new("leading_form_lift");
    let bound = bound.clamp(3, 5);
    for _ in 0..trials {
        let g = random_inhomogeneous_generators(rng, alphabet, 3, 3);
        let outcome = lift_leading_forms(&g, bound, &[], budget);
        if let Err(Error::BudgetExceeded { .. }) = outcome {
            return outcome.map(|_| unreachable!());
        }
        let ok = match &outcome {
            Ok(r) => {
                r.certificates.generation
                    && (r.generators.is_empty() || check_reduced(&r.generators, bound, budget)?)
            }
            Err(_) => false,
        };
        tally.check(ok, || format!("G = [{}]: {outcome:?}", join(&g)));
    }
    Ok(tally.done())
}

/// Planar binary tree with `n` leaves; the left size is uniform at each node.
pub fn random_shape<R: Rng>(rng: &mut R, n: u32) -> Shape {
    if n <= 1 {
        return Shape::leaf();
    }
    let a = rng.gen_range(1..n);
    let l = random_shape(rng, a);
    Shape::graft(&l, &random_shape(rng, n - a))
}

pub fn random_code<R: Rng>(rng: &mut R, symbols: usize, n: u32) -> MonomialCode {
    let shape = random_shape(rng, n);
    let word = Word::new((0..n).map(|_| rng.gen_range(0..symbols) as u16)).expect("n >= 1");
    MonomialCode::new(shape, word).expect("degrees agree")
}

pub fn random_term<R: Rng>(rng: &mut R, symbols: usize, n: u32) -> MagmaTerm {
    unembed(&random_code(rng, symbols, n)).expect("degrees agree")
}

fn random_coeff<R: Rng>(rng: &mut R) -> crate::Rational {
    let mut c = rng.gen_range(-4..=4);
    if c == 0 {
        c = 1;
    }
    if rng.gen_bool(0.2) {
        crate::Rational::new(c.into(), rng.gen_range(2..=3).into())
    } else {
        rational(c)
    }
}

/// Nonzero homogeneous polynomial of degree `degree` with at most `max_terms` terms.
pub fn random_homogeneous<R: Rng>(rng: &mut R, alphabet: &Arc<Alphabet>, degree: u32, max_terms: usize) -> Polynomial {
    loop {
        let terms = rng.gen_range(1..=max_terms);
        let p = Polynomial::from_terms(
            alphabet,
            (0..terms).map(|_| (random_code(rng, alphabet.len(), degree), random_coeff(rng))),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_of_random_degree<R: Rng>(rng: &mut R, alphabet: &Arc<Alphabet>, max_degree: u32) -> Polynomial {
    let d = rng.gen_range(1..=max_degree);
    random_homogeneous(rng, alphabet, d, 3)
}

/// `size` linearly independent homogeneous polynomials of one degree, or
/// `None` when the degree-`degree` space is too small.
pub fn random_independent_family<R: Rng>(
    rng: &mut R,
    alphabet: &Arc<Alphabet>,
    degree: u32,
    size: usize,
) -> Option<Vec<Polynomial>> {
    if monomial_count(alphabet.len(), degree) < size as u128 {
        return None;
    }
    loop {
        let family: Vec<Polynomial> = (0..size).map(|_| random_homogeneous(rng, alphabet, degree, 3)).collect();
        if echelonize(&family).map(|b| b.rank()) == Ok(size) {
            return Some(family);
        }
    }
}

/// Random polynomial with components of degree below `below`; may be zero.
fn random_tail<R: Rng>(rng: &mut R, alphabet: &Arc<Alphabet>, below: u32) -> Polynomial {
    let mut p = Polynomial::zero(alphabet);
    for d in 1..below {
        if rng.gen_bool(0.5) {
            p = &p + &random_homogeneous(rng, alphabet, d, 2);
        }
    }
    p
}

/// Random reduced set: leading forms distinct and free of relations, with
/// random lower-degree tails.
pub fn random_reduced_set<R: Rng>(
    rng: &mut R,
    alphabet: &Arc<Alphabet>,
    max_degree: u32,
    max_size: usize,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    loop {
        let size = rng.gen_range(1..=max_size);
        let forms: Vec<Polynomial> =
            (0..size).map(|_| random_of_random_degree(rng, alphabet, max_degree)).collect();
        let distinct = (0..size).all(|i| !forms[..i].contains(&forms[i]));
        if !distinct {
            continue;
        }
        let top = forms.iter().filter_map(Polynomial::degree).max().expect("nonempty");
        if !relation_search(&forms, top, budget)?.is_independent() {
            continue;
        }
        return Ok(forms
            .into_iter()
            .map(|f| {
                let d = f.degree().expect("nonzero");
                &f + &random_tail(rng, alphabet, d)
            })
            .collect());
    }
}

/// Between 1 and `max_size` nonzero homogeneous polynomials of degree at most `max_degree`.
pub fn random_homogeneous_generators<R: Rng>(
    rng: &mut R,
    alphabet: &Arc<Alphabet>,
    max_degree: u32,
    max_size: usize,
) -> Vec<Polynomial> {
    let size = rng.gen_range(1..=max_size);
    (0..size).map(|_| random_of_random_degree(rng, alphabet, max_degree)).collect()
}

/// Between 1 and `max_size` polynomials of degree at most `max_degree`, at least one inhomogeneous.
pub fn random_inhomogeneous_generators<R: Rng>(
    rng: &mut R,
    alphabet: &Arc<Alphabet>,
    max_degree: u32,
    max_size: usize,
) -> Vec<Polynomial> {
    let size = rng.gen_range(1..=max_size);
    let mut gens: Vec<Polynomial> = (0..size)
        .map(|_| {
            let d = rng.gen_range(1..=max_degree);
            &random_homogeneous(rng, alphabet, d, 2) + &random_tail(rng, alphabet, d)
        })
        .collect();
    if gens.iter().all(Polynomial::is_homogeneous) {
        let d = rng.gen_range(2..=max_degree.max(2));
        let low_degree = rng.gen_range(1..d);
        let low = random_homogeneous(rng, alphabet, low_degree, 2);
        gens[0] = &random_homogeneous(rng, alphabet, d, 2) + &low;
    }
    gens.shuffle(rng);
    gens
}
