//! Text and JSON forms of terms, polynomials, verdicts and reports.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! term       := symbol | "(" term "," term ")"
//! poly       := "0" | ["-"] signed ( ("+" | "-") signed )*
//! signed     := [rational "*"] term
//! rational   := digits [ "/" digits ]
//! ```
//!
//! Printing lists monomials from the largest down in canonical order (leading
//! term first) and omits unit coefficients, so `parse_poly(print_poly(p)) == p`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{Polynomial, Rational};
use crate::error::{Error, Result};
use crate::independence::IndependenceVerdict;
use crate::kurosh::FreeGeneratorReport;
use crate::magma::{embed, unembed, Alphabet, MagmaTerm, MonomialCode, Shape, Word};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, alphabet: &'a Alphabet) -> Self {
        Parser { src: src.as_bytes(), pos: 0, alphabet }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn term(&mut self) -> Result<MagmaTerm> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let left = self.term()?;
                self.expect(b',')?;
                let right = self.term()?;
                self.expect(b')')?;
                Ok(MagmaTerm::node(left, right))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                self.alphabet
                    .index_of(name)
                    .map(MagmaTerm::Leaf)
                    .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
            }
            _ => Err(self.err("expected a symbol or `(`")),
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(text.parse().expect("digits parse"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(Error::Syntax { position: at, message: "zero denominator".into() });
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    /// One summand; `None` stands for a literal zero.
    fn signed(&mut self) -> Result<Option<(Rational, MagmaTerm)>> {
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let c = self.rational()?;
            if self.peek() == Some(b'*') {
                self.pos += 1;
                return Ok(Some((c, self.term()?)));
            }
            if c.is_zero() {
                return Ok(None);
            }
            return Err(self.err("expected `*` after a nonzero coefficient"));
        }
        Ok(Some((Rational::one(), self.term()?)))
    }

    fn poly(&mut self, alphabet: &Arc<Alphabet>) -> Result<Polynomial> {
        let mut p = Polynomial::zero(alphabet);
        let mut negative = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negative = true;
        }
        loop {
            if let Some((c, t)) = self.signed()? {
                let c = if negative { -c } else { c };
                p.add_term(embed(&t), c);
            }
            match self.peek() {
                None => return Ok(p),
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(_) => return Err(self.err("expected `+`, `-` or end of input")),
            }
            self.pos += 1;
        }
    }
}

pub fn parse_term(s: &str, alphabet: &Alphabet) -> Result<MagmaTerm> {
    let mut p = Parser::new(s, alphabet);
    let t = p.term()?;
    if !p.at_end() {
        return Err(p.err("trailing input after term"));
    }
    Ok(t)
}

pub fn print_term(t: &MagmaTerm, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    write_term(t, alphabet, &mut out);
    out
}

fn write_term(t: &MagmaTerm, alphabet: &Alphabet, out: &mut String) {
    match t {
        MagmaTerm::Leaf(s) => out.push_str(alphabet.symbol(*s)),
        MagmaTerm::Node(l, r) => {
            out.push('(');
            write_term(l, alphabet, out);
            out.push(',');
            write_term(r, alphabet, out);
            out.push(')');
        }
    }
}

pub fn print_code(code: &MonomialCode, alphabet: &Alphabet) -> String {
    print_term(&unembed(code).expect("codes are consistent"), alphabet)
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let mut negative = false;
    let body = match s.trim().strip_prefix('-') {
        Some(rest) => {
            negative = true;
            rest
        }
        None => s.trim(),
    };
    let dummy = Alphabet::standard(1);
    let mut p = Parser::new(body, &dummy);
    let r = p.rational()?;
    if !p.at_end() {
        return Err(p.err("trailing input after rational"));
    }
    Ok(if negative { -r } else { r })
}

pub fn print_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_poly(s: &str, alphabet: &Arc<Alphabet>) -> Result<Polynomial> {
    Parser::new(s, alphabet).poly(alphabet)
}

pub fn print_poly(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (code, c)) in p.terms().rev().enumerate() {
        match (i, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = c.abs();
        if !mag.is_one() {
            out.push_str(&print_rational(&mag));
            out.push('*');
        }
        out.push_str(&print_code(code, p.alphabet()));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    shape: String,
    word: Vec<String>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    alphabet: Vec<String>,
    terms: Vec<TermJson>,
}

pub fn poly_to_json(p: &Polynomial) -> Value {
    let a = p.alphabet();
    let doc = PolyJson {
        alphabet: a.symbols().to_vec(),
        terms: p
            .terms()
            .map(|(code, c)| TermJson {
                shape: code.shape().to_string(),
                word: code.word().symbols().iter().map(|&s| a.symbol(s).to_string()).collect(),
                coeff: format!("{}/{}", c.numer(), c.denom()),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("plain data serializes")
}

fn json_error(e: impl std::fmt::Display) -> Error {
    Error::Syntax { position: 0, message: format!("invalid JSON polynomial: {e}") }
}

pub fn poly_from_json(v: &Value) -> Result<Polynomial> {
    let doc: PolyJson = serde_json::from_value(v.clone()).map_err(json_error)?;
    let alphabet = Arc::new(Alphabet::new(doc.alphabet)?);
    let mut p = Polynomial::zero(&alphabet);
    for t in doc.terms {
        let shape = Shape::parse(&t.shape)?;
        let symbols = t
            .word
            .iter()
            .map(|s| alphabet.index_of(s).ok_or_else(|| Error::UnknownSymbol(s.clone())))
            .collect::<Result<Vec<u16>>>()?;
        let word = Word::new(symbols).ok_or_else(|| json_error("empty word"))?;
        let code = MonomialCode::new(shape, word)?;
        p.add_term(code, parse_rational(&t.coeff)?);
    }
    Ok(p)
}

/// Symbol names occurring in `text`, in natural order (`z2` before `z10`).
pub fn infer_alphabet<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<Alphabet> {
    let mut names = BTreeSet::new();
    for text in texts {
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_alphabetic() {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                names.insert(text[start..i].to_string());
            } else {
                i += 1;
            }
        }
    }
    let mut names: Vec<String> = names.into_iter().collect();
    names.sort_by_cached_key(|s| natural_key(s));
    Alphabet::new(names)
}

fn natural_key(s: &str) -> (String, u128, String) {
    let digits = s.bytes().rev().take_while(u8::is_ascii_digit).count();
    let (stem, num) = s.split_at(s.len() - digits);
    (stem.to_string(), num.parse().unwrap_or(0), s.to_string())
}

/// Parse an input file of polynomials.
///
/// Text form: one polynomial per line, `#` starts a comment, and an optional
/// first line `alphabet: a, b, c` fixes the alphabet (otherwise it is the set
/// of symbols used, in natural order). JSON form: either a list of JSON
/// polynomials or `{"alphabet": [...], "polynomials": ["text", ...]}`.
pub fn read_polynomials(text: &str) -> Result<(Arc<Alphabet>, Vec<Polynomial>)> {
    read_polynomials_over(text, None)
}

/// Like [`read_polynomials`], but a file without its own alphabet is read over
/// `alphabet`, and one with its own must agree with it.
pub fn read_polynomials_over(
    text: &str,
    alphabet: Option<&Arc<Alphabet>>,
) -> Result<(Arc<Alphabet>, Vec<Polynomial>)> {
    let (own, polys) = read_any(text, alphabet)?;
    match alphabet {
        Some(a) if **a != *own => Err(Error::AlphabetMismatch),
        Some(a) => Ok((a.clone(), polys.into_iter().map(|p| rebind(p, a)).collect())),
        None => Ok((own, polys)),
    }
}

fn read_any(text: &str, fallback: Option<&Arc<Alphabet>>) -> Result<(Arc<Alphabet>, Vec<Polynomial>)> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        return read_json(trimmed, fallback);
    }
    let mut header: Option<Vec<String>> = None;
    let mut lines: Vec<(usize, &str)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("alphabet:") {
            if header.is_some() || !lines.is_empty() {
                return Err(Error::Syntax {
                    position: 0,
                    message: format!("line {}: alphabet header must come first", n + 1),
                });
            }
            header = Some(rest.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
            continue;
        }
        lines.push((n + 1, line));
    }
    let alphabet = match (header, fallback) {
        (Some(symbols), _) => Arc::new(Alphabet::new(symbols)?),
        (None, Some(a)) => a.clone(),
        (None, None) => Arc::new(infer_alphabet(lines.iter().map(|(_, l)| *l))?),
    };
    let polys = lines
        .iter()
        .map(|&(n, line)| {
            parse_poly(line, &alphabet).map_err(|e| match e {
                Error::Syntax { position, message } => {
                    Error::Syntax { position, message: format!("line {n}: {message}") }
                }
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((alphabet, polys))
}

fn read_json(text: &str, fallback: Option<&Arc<Alphabet>>) -> Result<(Arc<Alphabet>, Vec<Polynomial>)> {
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    match v {
        Value::Array(items) => {
            let polys = items.iter().map(poly_from_json).collect::<Result<Vec<_>>>()?;
            let Some(first) = polys.first() else {
                return fallback.map(|a| (a.clone(), Vec::new())).ok_or(Error::EmptyInput);
            };
            let alphabet = first.alphabet().clone();
            if polys.iter().any(|p| !p.same_alphabet(&polys[0])) {
                return Err(Error::AlphabetMismatch);
            }
            let polys = polys.into_iter().map(|p| rebind(p, &alphabet)).collect();
            Ok((alphabet, polys))
        }
        Value::Object(map) => {
            let texts: Vec<String> = serde_json::from_value(map.get("polynomials").cloned().unwrap_or(Value::Null))
                .map_err(json_error)?;
            let alphabet = match (map.get("alphabet"), fallback) {
                (Some(a), _) => Arc::new(Alphabet::new(
                    serde_json::from_value::<Vec<String>>(a.clone()).map_err(json_error)?,
                )?),
                (None, Some(a)) => a.clone(),
                (None, None) => Arc::new(infer_alphabet(texts.iter().map(String::as_str))?),
            };
            let polys = texts.iter().map(|t| parse_poly(t, &alphabet)).collect::<Result<Vec<_>>>()?;
            Ok((alphabet, polys))
        }
        _ => Err(json_error("expected a list or an object")),
    }
}

/// Same polynomial, sharing `alphabet`'s allocation.
fn rebind(p: Polynomial, alphabet: &Arc<Alphabet>) -> Polynomial {
    Polynomial::from_terms(alphabet, p.into_terms())
}

pub fn verdict_to_json(v: &IndependenceVerdict) -> Value {
    let mut out = json!({ "status": v.status(), "bound": v.bound() });
    if let Some(w) = v.witness() {
        out["witness"] = Value::String(print_poly(w));
    }
    out
}

pub fn report_to_json(r: &FreeGeneratorReport) -> Value {
    let texts = |ps: &[Polynomial]| ps.iter().map(print_poly).collect::<Vec<_>>();
    json!({
        "generators": texts(&r.generators),
        "degrees": r.degrees,
        "seed_retained": texts(&r.seed_retained),
        "bound": r.bound,
        "certificates": {
            "independence": verdict_to_json(&r.certificates.independence),
            "generation": r.certificates.generation,
            "reduced": r.certificates.reduced,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Arc<Alphabet> {
        Arc::new(Alphabet::standard(n))
    }

    #[test]
    fn term_round_trip_and_whitespace() {
        let a = z(3);
        let t = parse_term(" ( z1 ,( z2,z3 ) ) ", &a).unwrap();
        assert_eq!(print_term(&t, &a), "(z1,(z2,z3))");
        assert_eq!(t.degree(), 3);
    }

    #[test]
    fn term_errors() {
        let a = z(2);
        assert_eq!(parse_term("z3", &a).unwrap_err(), Error::UnknownSymbol("z3".into()));
        assert!(matches!(parse_term("(z1,z2", &a), Err(Error::Syntax { position: 6, .. })));
        assert!(matches!(parse_term("(z1 z2)", &a), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(parse_term("z1 z2", &a), Err(Error::Syntax { .. })));
    }

    #[test]
    fn poly_printing() {
        let a = z(2);
        let p = parse_poly("-(z2,z1) + 3/6*(z1,z2) + z1 - 2*z1", &a).unwrap();
        assert_eq!(print_poly(&p), "-(z2,z1) + 1/2*(z1,z2) - z1");
        assert_eq!(print_poly(&parse_poly("z1 - z1", &a).unwrap()), "0");
        assert_eq!(parse_poly("0", &a).unwrap(), Polynomial::zero(&a));
        assert!(parse_poly("3", &a).is_err());
        assert!(parse_poly("1/0*z1", &a).is_err());
    }

    #[test]
    fn poly_round_trip() {
        let a = z(2);
        for s in ["z1", "-z1 + 4*(z1,(z2,z1))", "1/3*((z1,z2),z2) - 7/2*(z2,(z1,z2))"] {
            let p = parse_poly(s, &a).unwrap();
            assert_eq!(parse_poly(&print_poly(&p), &a).unwrap(), p);
            assert_eq!(poly_from_json(&poly_to_json(&p)).unwrap(), p);
        }
    }

    #[test]
    fn json_layout() {
        let a = z(2);
        let p = parse_poly("4*(z1,z2)", &a).unwrap();
        assert_eq!(
            poly_to_json(&p),
            json!({"alphabet": ["z1", "z2"], "terms": [{"shape": "100", "word": ["z1", "z2"], "coeff": "4/1"}]})
        );
    }

    #[test]
    fn input_files() {
        let (a, ps) = read_polynomials("# demo\nz10 + z2\n\n(z2,z1)  # tail\n").unwrap();
        assert_eq!(a.symbols(), ["z1", "z2", "z10"]);
        assert_eq!(ps.len(), 2);
        let (a, ps) = read_polynomials("alphabet: x, y\n(y,x)\n").unwrap();
        assert_eq!(a.symbols(), ["x", "y"]);
        assert_eq!(print_poly(&ps[0]), "(y,x)");
        let err = read_polynomials("alphabet: x\n(x,\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { ref message, .. } if message.starts_with("line 2")));
        let (_, ps) = read_polynomials(r#"{"alphabet": ["a","b"], "polynomials": ["(a,b)", "b"]}"#).unwrap();
        assert_eq!(ps.len(), 2);
        let z3 = z(3);
        let (a, ps) = read_polynomials_over("z2\n", Some(&z3)).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(ps[0], Polynomial::symbol(&z3, 1));
        assert_eq!(read_polynomials_over("alphabet: z1\nz1\n", Some(&z3)).unwrap_err(), Error::AlphabetMismatch);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-6/4").unwrap(), Rational::new((-3).into(), 2.into()));
        assert_eq!(print_rational(&parse_rational("6/3").unwrap()), "2");
        assert!(parse_rational("1/").is_err());
    }
}
