//! Free magma terms and their (product type, sequence type) encoding.
//!
//! A term of the free magma over an alphabet is a planar full binary tree
//! whose leaves carry symbols. [`embed`] sends it to a [`MonomialCode`]: the
//! bare tree skeleton as a preorder bitstring ([`Shape`]) together with the
//! left-to-right leaf word ([`Word`]). The map is an injective magma morphism
//! when codes are multiplied by [`MonomialCode::graft`], and [`unembed`]
//! inverts it on codes whose two halves have equal degree.

use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A finite, ordered set of distinct symbol names.
///
/// The position of a symbol is its index everywhere else in the crate, and
/// that order drives every lexicographic comparison on words.
#[derive(Clone)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, u16>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must be nonempty".into()));
        }
        if symbols.len() > u16::MAX as usize {
            return Err(Error::InvalidAlphabet("too many symbols".into()));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if !is_symbol_name(s) {
                return Err(Error::InvalidAlphabet(format!("`{s}` is not a valid symbol name")));
            }
            if index.insert(s.clone(), i as u16).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    /// `z1, ..., zn`.
    pub fn standard(n: usize) -> Self {
        Self::numbered("z", n)
    }

    /// The indeterminates `X1, ..., Xn` used on the left side of a substitution.
    pub fn indeterminates(n: usize) -> Self {
        Self::numbered("X", n)
    }

    fn numbered(prefix: &str, n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("{prefix}{i}"))).expect("generated names are valid")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, index: u16) -> &str {
        &self.symbols[index as usize]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<u16> {
        self.index.get(name).copied()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.symbols).finish()
    }
}

/// `[A-Za-z][A-Za-z0-9_]*`
pub fn is_symbol_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An element of the free magma: a planar binary tree with symbol-labelled leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MagmaTerm {
    Leaf(u16),
    Node(Box<MagmaTerm>, Box<MagmaTerm>),
}

impl MagmaTerm {
    pub fn node(left: MagmaTerm, right: MagmaTerm) -> Self {
        MagmaTerm::Node(Box::new(left), Box::new(right))
    }

    /// Number of leaves.
    pub fn degree(&self) -> u32 {
        match self {
            MagmaTerm::Leaf(_) => 1,
            MagmaTerm::Node(l, r) => l.degree() + r.degree(),
        }
    }

    /// Largest leaf index, used for arity checks.
    pub fn max_symbol(&self) -> u16 {
        match self {
            MagmaTerm::Leaf(s) => *s,
            MagmaTerm::Node(l, r) => l.max_symbol().max(r.max_symbol()),
        }
    }

    /// Replace every leaf `Xi` by `args[i]`.
    pub fn substitute(&self, args: &[MagmaTerm]) -> Result<MagmaTerm> {
        match self {
            MagmaTerm::Leaf(i) => args.get(*i as usize).cloned().ok_or_else(|| {
                Error::Arity(format!("X{} used but only {} argument(s) given", i + 1, args.len()))
            }),
            MagmaTerm::Node(l, r) => Ok(MagmaTerm::node(l.substitute(args)?, r.substitute(args)?)),
        }
    }

    /// Left comb `(((a,a),a),...)` with `n` leaves of symbol `a`.
    pub fn left_comb(symbol: u16, n: u32) -> Self {
        assert!(n >= 1);
        (1..n).fold(MagmaTerm::Leaf(symbol), |acc, _| MagmaTerm::node(acc, MagmaTerm::Leaf(symbol)))
    }
}

type Bits = SmallVec<[u64; 1]>;

/// A leaf-unlabelled planar full binary tree, stored as its preorder bitstring
/// (`1` = internal node, `0` = leaf), packed most significant bit first.
///
/// A shape of degree `n` has `2n - 1` bits. Shapes order by degree and then by
/// bitstring, which is plain lexicographic order once the degree is fixed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    degree: u32,
    bits: Bits,
}

struct BitWriter {
    words: Bits,
    len: usize,
}

impl BitWriter {
    fn with_capacity(bits: usize) -> Self {
        BitWriter { words: SmallVec::with_capacity(bits.div_ceil(64)), len: 0 }
    }

    /// Append the top `take` bits of `chunk`; the remaining bits must be zero.
    fn push_chunk(&mut self, chunk: u64, take: usize) {
        let off = self.len % 64;
        if off == 0 {
            self.words.push(chunk);
        } else {
            *self.words.last_mut().expect("nonempty when offset is nonzero") |= chunk >> off;
            if off + take > 64 {
                self.words.push(chunk << (64 - off));
            }
        }
        self.len += take;
    }

    fn push(&mut self, bit: bool) {
        self.push_chunk(if bit { 1 << 63 } else { 0 }, 1);
    }

    fn append(&mut self, shape: &Shape) {
        let mut remaining = shape.len();
        for &word in &shape.bits {
            let take = remaining.min(64);
            self.push_chunk(word, take);
            remaining -= take;
        }
    }
}

impl Shape {
    /// The single-leaf shape `X`, bitstring `0`.
    pub fn leaf() -> Self {
        let mut w = BitWriter::with_capacity(1);
        w.push(false);
        Shape { degree: 1, bits: w.words }
    }

    /// `(left, right)`: bitstring `1 ++ left ++ right`.
    pub fn graft(left: &Shape, right: &Shape) -> Self {
        let mut w = BitWriter::with_capacity(1 + left.len() + right.len());
        w.push(true);
        w.append(left);
        w.append(right);
        Shape { degree: left.degree + right.degree, bits: w.words }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of bits, `2 * degree - 1`.
    pub fn len(&self) -> usize {
        2 * self.degree as usize - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_leaf(&self) -> bool {
        self.degree == 1
    }

    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.len());
        (self.bits[i / 64] >> (63 - i % 64)) & 1 == 1
    }

    pub fn parse(text: &str) -> Result<Self> {
        let invalid = || Error::InvalidShape(text.to_string());
        let mut w = BitWriter::with_capacity(text.len());
        let mut open: i64 = 1;
        let mut leaves = 0u32;
        for c in text.chars() {
            if open == 0 {
                return Err(invalid());
            }
            match c {
                '1' => {
                    open += 1;
                    w.push(true);
                }
                '0' => {
                    open -= 1;
                    leaves += 1;
                    w.push(false);
                }
                _ => return Err(invalid()),
            }
        }
        if open != 0 {
            return Err(invalid());
        }
        Ok(Shape { degree: leaves, bits: w.words })
    }

    fn sub_shape(&self, start: usize, len: usize) -> Shape {
        let mut w = BitWriter::with_capacity(len);
        let mut leaves = 0;
        for i in start..start + len {
            let b = self.bit(i);
            leaves += u32::from(!b);
            w.push(b);
        }
        Shape { degree: leaves, bits: w.words }
    }

    /// The two subtrees of a non-leaf shape.
    pub fn split(&self) -> Option<(Shape, Shape)> {
        if self.is_leaf() {
            return None;
        }
        let mut open = 1i64;
        let mut end = 1;
        while open > 0 {
            open += if self.bit(end) { 1 } else { -1 };
            end += 1;
        }
        let left = self.sub_shape(1, end - 1);
        let right = self.sub_shape(end, self.len() - end);
        Some((left, right))
    }

    /// Render as a parenthesized product of `X`s, e.g. `(X,(X,X))`.
    pub fn to_term_string(&self) -> String {
        let mut out = String::with_capacity(4 * self.degree as usize);
        fn go(s: &Shape, out: &mut String) {
            match s.split() {
                None => out.push('X'),
                Some((l, r)) => {
                    out.push('(');
                    go(&l, out);
                    out.push(',');
                    go(&r, out);
                    out.push(')');
                }
            }
        }
        go(self, &mut out);
        out
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Shape({self})")
    }
}

/// A nonempty word over the alphabet (element of the free semigroup).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word(SmallVec<[u16; 8]>);

impl Word {
    pub fn new(symbols: impl IntoIterator<Item = u16>) -> Option<Self> {
        let seq: SmallVec<[u16; 8]> = symbols.into_iter().collect();
        (!seq.is_empty()).then_some(Word(seq))
    }

    pub fn letter(symbol: u16) -> Self {
        Word(smallvec::smallvec![symbol])
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn symbols(&self) -> &[u16] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut seq = SmallVec::with_capacity(self.0.len() + other.0.len());
        seq.extend_from_slice(&self.0);
        seq.extend_from_slice(&other.0);
        Word(seq)
    }

    /// Symbols joined by `.`.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        let names: Vec<&str> = self.0.iter().map(|&s| alphabet.symbol(s)).collect();
        names.join(".")
    }
}

/// Image of a term under the embedding: its product type and sequence type.
///
/// Codes order by degree, then shape bitstring, then word; this is the
/// canonical monomial order used for printing, pivoting and basis selection.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialCode {
    shape: Shape,
    word: Word,
}

impl MonomialCode {
    pub fn new(shape: Shape, word: Word) -> Result<Self> {
        if shape.degree() != word.degree() {
            return Err(Error::DegreeMismatch { expected: shape.degree(), found: word.degree() });
        }
        Ok(MonomialCode { shape, word })
    }

    pub fn leaf(symbol: u16) -> Self {
        MonomialCode { shape: Shape::leaf(), word: Word::letter(symbol) }
    }

    /// Product of two codes: shapes graft under a new root, words concatenate.
    pub fn graft(left: &MonomialCode, right: &MonomialCode) -> Self {
        MonomialCode {
            shape: Shape::graft(&left.shape, &right.shape),
            word: left.word.concat(&right.word),
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn degree(&self) -> u32 {
        self.shape.degree
    }

    /// Inverse of [`MonomialCode::graft`] for non-leaf codes.
    pub fn split(&self) -> Option<(MonomialCode, MonomialCode)> {
        let (ls, rs) = self.shape.split()?;
        let cut = ls.degree() as usize;
        let syms = self.word.symbols();
        let lw = Word(SmallVec::from_slice(&syms[..cut]));
        let rw = Word(SmallVec::from_slice(&syms[cut..]));
        Some((MonomialCode { shape: ls, word: lw }, MonomialCode { shape: rs, word: rw }))
    }

    /// The leaf symbol when this is a degree-one code.
    pub fn as_leaf(&self) -> Option<u16> {
        self.shape.is_leaf().then(|| self.word.symbols()[0])
    }

    /// Left factor degree, the split point of the top-level product.
    pub fn left_degree(&self) -> Option<u32> {
        self.shape.split().map(|(l, _)| l.degree())
    }
}

impl fmt::Debug for MonomialCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.shape, self.word.symbols())
    }
}

pub fn degree(term: &MagmaTerm) -> u32 {
    term.degree()
}

/// The injective morphism `term -> (product type, sequence type)`.
pub fn embed(term: &MagmaTerm) -> MonomialCode {
    match term {
        MagmaTerm::Leaf(a) => MonomialCode::leaf(*a),
        MagmaTerm::Node(l, r) => MonomialCode::graft(&embed(l), &embed(r)),
    }
}

/// Rebuild the term with the given code.
pub fn unembed(code: &MonomialCode) -> Result<MagmaTerm> {
    if code.shape.degree() != code.word.degree() {
        return Err(Error::DegreeMismatch {
            expected: code.shape.degree(),
            found: code.word.degree(),
        });
    }
    fn go(shape: &Shape, syms: &mut std::slice::Iter<'_, u16>) -> MagmaTerm {
        match shape.split() {
            None => MagmaTerm::Leaf(*syms.next().expect("degrees agree")),
            Some((l, r)) => {
                let left = go(&l, syms);
                MagmaTerm::node(left, go(&r, syms))
            }
        }
    }
    Ok(go(&code.shape, &mut code.word.symbols().iter()))
}

pub fn graft(left: &MonomialCode, right: &MonomialCode) -> MonomialCode {
    MonomialCode::graft(left, right)
}

/// Catalan number `C_n`, saturating.
pub fn catalan(n: u32) -> u128 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c.saturating_mul(2 * (2 * k + 1)) / (k + 2);
    }
    c
}

/// Number of degree-`n` monomials over `symbols` letters: `symbols^n * C_{n-1}`.
pub fn monomial_count(symbols: usize, n: u32) -> u128 {
    if n == 0 {
        return 0;
    }
    (symbols as u128).saturating_pow(n).saturating_mul(catalan(n - 1))
}

/// All shapes of degree `n`, in lexicographic bitstring order.
pub fn shapes_of_degree(n: u32) -> Vec<Shape> {
    if n == 0 {
        return Vec::new();
    }
    let mut table: Vec<Vec<Shape>> = vec![Vec::new(), vec![Shape::leaf()]];
    for d in 2..=n as usize {
        let mut level = Vec::new();
        for a in 1..d {
            for l in &table[a] {
                for r in &table[d - a] {
                    level.push(Shape::graft(l, r));
                }
            }
        }
        level.sort();
        table.push(level);
    }
    table.swap_remove(n as usize)
}

/// All words of length `n` over `symbols` letters, lexicographically.
pub fn words_of_degree(symbols: usize, n: u32) -> Vec<Word> {
    assert!(symbols <= u16::MAX as usize);
    if n == 0 || symbols == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = vec![0u16; n as usize];
    loop {
        out.push(Word(SmallVec::from_slice(&current)));
        let mut i = current.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            current[i] += 1;
            if (current[i] as usize) < symbols {
                break;
            }
            current[i] = 0;
        }
    }
}

/// All degree-`n` codes over `alphabet`, in canonical order.
pub fn monomials_of_degree(alphabet: &Alphabet, n: u32) -> Vec<MonomialCode> {
    let words = words_of_degree(alphabet.len(), n);
    shapes_of_degree(n)
        .into_iter()
        .flat_map(|shape| {
            words.iter().map(move |w| MonomialCode { shape: shape.clone(), word: w.clone() })
        })
        .collect()
}

/// All terms of degree `n`, in the canonical order of their codes.
pub fn terms_of_degree(alphabet: &Alphabet, n: u32) -> Vec<MagmaTerm> {
    monomials_of_degree(alphabet, n)
        .iter()
        .map(|c| unembed(c).expect("enumerated codes are consistent"))
        .collect()
}

/// Checks that distinct product types stay distinct after substituting
/// arguments of one common degree into two monomials.
///
/// Returns `true` when the implication holds (it always should).
pub fn product_type_respects_substitution(
    m: &MagmaTerm,
    m_prime: &MagmaTerm,
    args: &[MagmaTerm],
) -> Result<bool> {
    let needed = m.max_symbol().max(m_prime.max_symbol()) as usize + 1;
    if args.len() < needed {
        return Err(Error::Arity(format!(
            "monomials use {needed} indeterminate(s), {} argument(s) given",
            args.len()
        )));
    }
    if let Some(first) = args.first() {
        let d = first.degree();
        if let Some(bad) = args.iter().find(|a| a.degree() != d) {
            return Err(Error::DegreeMismatch { expected: d, found: bad.degree() });
        }
    }
    if embed(m).shape == embed(m_prime).shape {
        return Ok(true);
    }
    let lhs = embed(&m.substitute(args)?);
    let rhs = embed(&m_prime.substitute(args)?);
    Ok(lhs.shape != rhs.shape)
}
