use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use magma_forge::independence::{check_reduced, is_reduced, relation_search, same_degree_fast_path};
use magma_forge::io::{
    infer_alphabet, parse_poly, parse_term, poly_to_json, print_poly, print_term, read_polynomials,
    read_polynomials_over, report_to_json, verdict_to_json,
};
use magma_forge::kurosh::{extract_free_generators, lift_leading_forms};
use magma_forge::magma::{embed, monomial_count, monomials_of_degree, shapes_of_degree, unembed};
use magma_forge::oracle::{oracle_suite, OracleConfig};
use magma_forge::{Alphabet, Budget, Error, IndependenceVerdict, MonomialCode, Polynomial, Shape, SubstitutionMap, Word};

#[derive(Parser)]
#[command(name = "magma-forge", version, about = "Free magmas and free non-associative algebras over Q")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit aligned text instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    text: bool,
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for internal parallelism; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Monomial budget; overrides MAGMA_FORGE_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Comma-separated alphabet for command-line terms and polynomials.
    #[arg(long, global = true, value_delimiter = ',')]
    alphabet: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a term as (shape, word), or decode with --shape/--word.
    Embed {
        term: Option<String>,
        #[arg(long, requires = "word", conflicts_with = "term")]
        shape: Option<String>,
        /// Symbols joined by `.`.
        #[arg(long, requires = "shape")]
        word: Option<String>,
    },
    /// Substitute polynomials for the indeterminates X1, X2, ... of a polynomial.
    Eval {
        /// Polynomial in X1..Xn.
        poly: String,
        /// Image of the next indeterminate (repeatable).
        #[arg(long = "image")]
        images: Vec<String>,
        /// File with one image per line.
        #[arg(long = "images")]
        images_file: Option<PathBuf>,
    },
    /// Homogeneous components, or the product-type split of one component.
    Project {
        poly: String,
        #[arg(long, conflicts_with = "split")]
        degree: Option<u32>,
        #[arg(long)]
        split: Option<u32>,
    },
    /// Check algebraic independence up to a weight bound.
    Indep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        dmax: u32,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Extract a free generating set of the generated subalgebra.
    Kurosh {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        bound: u32,
        #[arg(long)]
        seed: Option<PathBuf>,
        /// Accept inhomogeneous generators (leading-form lift).
        #[arg(long)]
        inhomogeneous: bool,
    },
    /// Run the randomized and exhaustive self-checks.
    Oracle {
        #[arg(long, default_value_t = 2)]
        alphabet_size: usize,
        #[arg(long, default_value_t = 6)]
        bound: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// List the monomials (or shapes) of one degree.
    Enumerate {
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 1)]
        alphabet_size: usize,
        #[arg(long)]
        shapes: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Exhaustive,
    Reduced,
}

enum Failure {
    Engine(Error),
    Io(String),
    Check(String, u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Outcome = Result<(Value, String), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let budget = cli.global.budget.map_or_else(Budget::from_env, Budget::new);
    match run(&cli.command, &cli.global, &budget) {
        Ok((json, text)) => {
            if cli.global.text {
                print!("{text}");
            } else {
                println!("{}", serde_json::to_string_pretty(&json).expect("values serialize"));
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg, code)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: &Command, global: &Global, budget: &Budget) -> Outcome {
    match command {
        Command::Embed { term, shape, word } => embed_cmd(global, term.as_deref(), shape.as_deref(), word.as_deref()),
        Command::Eval { poly, images, images_file } => eval_cmd(global, poly, images, images_file.as_deref()),
        Command::Project { poly, degree, split } => project_cmd(global, poly, *degree, *split),
        Command::Indep { input, dmax, mode } => indep_cmd(input, *dmax, *mode, budget),
        Command::Kurosh { input, bound, seed, inhomogeneous } => {
            kurosh_cmd(input, *bound, seed.as_deref(), *inhomogeneous, budget)
        }
        Command::Oracle { alphabet_size, bound, seed, trials } => {
            let config = OracleConfig {
                alphabet_size: *alphabet_size,
                bound: *bound,
                seed: *seed,
                trials: *trials,
                budget: *budget,
            };
            let report = oracle_suite(&config)?;
            let mut text = String::new();
            for p in &report.properties {
                let status = if p.passed() { "pass" } else { "FAIL" };
                text.push_str(&format!("{:<28} {status}  {:>8} checks\n", p.name, p.checked));
                if let Some(c) = &p.counterexample {
                    text.push_str(&format!("    counterexample: {c}\n"));
                }
            }
            if !report.passed() {
                let failed: Vec<&str> =
                    report.properties.iter().filter(|p| !p.passed()).map(|p| p.name).collect();
                eprint!("{text}");
                return Err(Failure::Check(format!("oracle properties failed: {}", failed.join(", ")), 5));
            }
            Ok((report.to_json(), text))
        }
        Command::Enumerate { degree, alphabet_size, shapes } => enumerate_cmd(global, *degree, *alphabet_size, *shapes, budget),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// The alphabet given by `--alphabet`, or the symbols occurring in `texts`.
fn alphabet_for<'a>(global: &Global, texts: impl IntoIterator<Item = &'a str>) -> Result<Arc<Alphabet>, Error> {
    match &global.alphabet {
        Some(symbols) => Alphabet::new(symbols.iter().map(|s| s.trim().to_string())).map(Arc::new),
        None => infer_alphabet(texts).map(Arc::new),
    }
}

fn code_json(code: &MonomialCode, alphabet: &Alphabet) -> Value {
    json!({
        "term": print_term(&unembed(code).expect("consistent code"), alphabet),
        "degree": code.degree(),
        "shape": code.shape().to_string(),
        "word": code.word().render(alphabet),
    })
}

fn code_text(code: &MonomialCode, alphabet: &Alphabet) -> String {
    format!(
        "term    {}\ndegree  {}\nshape   {}\nword    {}\n",
        print_term(&unembed(code).expect("consistent code"), alphabet),
        code.degree(),
        code.shape(),
        code.word().render(alphabet)
    )
}

fn embed_cmd(global: &Global, term: Option<&str>, shape: Option<&str>, word: Option<&str>) -> Outcome {
    let code_and_alphabet = match (term, shape, word) {
        (Some(t), _, _) => {
            let alphabet = alphabet_for(global, [t])?;
            (embed(&parse_term(t, &alphabet)?), alphabet)
        }
        (None, Some(s), Some(w)) => {
            let alphabet = alphabet_for(global, [w])?;
            let symbols = w
                .split('.')
                .map(|s| alphabet.index_of(s.trim()).ok_or_else(|| Error::UnknownSymbol(s.trim().to_string())))
                .collect::<Result<Vec<u16>, Error>>()?;
            let word = Word::new(symbols).ok_or_else(|| Error::Syntax { position: 0, message: "empty word".into() })?;
            (MonomialCode::new(Shape::parse(s)?, word)?, alphabet)
        }
        _ => return Err(Failure::Io("give a term, or both --shape and --word".into())),
    };
    let (code, alphabet) = code_and_alphabet;
    Ok((code_json(&code, &alphabet), code_text(&code, &alphabet)))
}

fn poly_value(p: &Polynomial) -> Value {
    json!({ "text": print_poly(p), "degree": p.degree(), "json": poly_to_json(p) })
}

fn eval_cmd(global: &Global, poly: &str, images: &[String], images_file: Option<&Path>) -> Outcome {
    let mut texts: Vec<String> = images.to_vec();
    let file_images = match images_file {
        Some(path) => Some(read_file(path)?),
        None => None,
    };
    let mut image_polys = match &file_images {
        Some(content) if texts.is_empty() && global.alphabet.is_none() => read_polynomials(content)?.1,
        Some(content) => {
            let alphabet = alphabet_for(global, texts.iter().map(String::as_str).chain([content.as_str()]))?;
            read_polynomials_over(content, Some(&alphabet))?.1
        }
        None => Vec::new(),
    };
    if !texts.is_empty() {
        let alphabet = match image_polys.first() {
            Some(p) => p.alphabet().clone(),
            None => alphabet_for(global, texts.iter().map(String::as_str))?,
        };
        let parsed = texts.drain(..).map(|t| parse_poly(&t, &alphabet)).collect::<Result<Vec<_>, _>>()?;
        image_polys = parsed.into_iter().chain(image_polys).collect();
    }
    let map = SubstitutionMap::new(image_polys)?;
    let xs = Arc::new(Alphabet::indeterminates(map.images().len()));
    let p = parse_poly(poly, &xs)?;
    let result = p.substitute(&map)?;
    let text = format!("{}\n", print_poly(&result));
    Ok((poly_value(&result), text))
}

fn project_cmd(global: &Global, poly: &str, degree: Option<u32>, split: Option<u32>) -> Outcome {
    let alphabet = alphabet_for(global, [poly])?;
    let p = parse_poly(poly, &alphabet)?;
    if let Some(n) = split {
        let parts = p.product_type_split(n);
        let mut text = String::new();
        let mut items = Vec::new();
        for (shape, part) in &parts {
            text.push_str(&format!("{:<16} {}\n", shape.to_term_string(), print_poly(part)));
            items.push(json!({ "shape": shape.to_string(), "product_type": shape.to_term_string(), "component": poly_value(part) }));
        }
        return Ok((json!({ "degree": n, "split": items }), text));
    }
    let components: Vec<(u32, Polynomial)> = match degree {
        Some(n) => vec![(n, p.pi_n(n))],
        None => p.homogeneous_components().into_iter().collect(),
    };
    let mut text = String::new();
    let mut items = Vec::new();
    for (n, part) in &components {
        text.push_str(&format!("{n:>4}  {}\n", print_poly(part)));
        items.push(json!({ "degree": n, "component": poly_value(part) }));
    }
    Ok((json!({ "components": items }), text))
}

fn verdict_text(v: &IndependenceVerdict) -> String {
    match v {
        IndependenceVerdict::IndependentUpTo(b) => format!("independent up to weight {b}\n"),
        IndependenceVerdict::Dependent { witness } => format!("dependent\nwitness  {}\n", print_poly(witness)),
        IndependenceVerdict::ReducedCertified => "independent (reduced set, certified at every degree)\n".into(),
    }
}

fn indep_cmd(input: &Path, dmax: u32, mode: Mode, budget: &Budget) -> Outcome {
    let (_, ps) = read_polynomials(&read_file(input)?)?;
    let verdict = match mode {
        Mode::Exhaustive => relation_search(&ps, dmax, budget)?,
        Mode::Reduced => {
            if !check_reduced(&ps, dmax, budget)? {
                return Err(Failure::Check(
                    "input is not a reduced set (leading forms repeat or are dependent)".into(),
                    4,
                ));
            }
            IndependenceVerdict::ReducedCertified
        }
        Mode::Auto => {
            let one_degree = ps.iter().all(Polynomial::is_homogeneous)
                && ps.iter().all(|p| p.degree() == ps.first().and_then(Polynomial::degree));
            if one_degree && !ps.is_empty() && ps.iter().all(|p| !p.is_zero()) {
                same_degree_fast_path(&ps)?
            } else {
                is_reduced(&ps, dmax, budget)?
            }
        }
    };
    Ok((verdict_to_json(&verdict), verdict_text(&verdict)))
}

fn kurosh_cmd(input: &Path, bound: u32, seed: Option<&Path>, inhomogeneous: bool, budget: &Budget) -> Outcome {
    let (alphabet, gens) = read_polynomials(&read_file(input)?)?;
    let seed = match seed {
        Some(path) => read_polynomials_over(&read_file(path)?, Some(&alphabet))?.1,
        None => Vec::new(),
    };
    let homogeneous = gens.iter().chain(&seed).all(Polynomial::is_homogeneous);
    let report = if inhomogeneous {
        lift_leading_forms(&gens, bound, &seed, budget)?
    } else if !homogeneous {
        let i = gens.iter().position(|p| !p.is_homogeneous());
        return Err(match i {
            Some(i) => Error::NotHomogeneous(i).into(),
            None => Failure::Check("seed is not homogeneous; pass --inhomogeneous".into(), 4),
        });
    } else {
        extract_free_generators(&gens, bound, &seed, budget)?
    };
    let mut text = format!("free generators (certified up to degree {})\n", report.bound);
    for (p, d) in report.generators.iter().zip(&report.degrees) {
        text.push_str(&format!("{d:>4}  {}\n", print_poly(p)));
    }
    text.push_str(&format!(
        "independence  {}\ngeneration    {}\nreduced       {}\n",
        report.certificates.independence.status(),
        report.certificates.generation,
        report.certificates.reduced
    ));
    Ok((report_to_json(&report), text))
}

fn enumerate_cmd(global: &Global, degree: u32, alphabet_size: usize, shapes: bool, budget: &Budget) -> Outcome {
    if degree == 0 {
        return Err(Error::Syntax { position: 0, message: "degree must be positive".into() }.into());
    }
    if shapes {
        budget.check(magma_forge::magma::catalan(degree - 1), || format!("degree-{degree} shape list"))?;
        let list = shapes_of_degree(degree);
        let text: String = list.iter().map(|s| format!("{s:<20} {}\n", s.to_term_string())).collect();
        let items: Vec<Value> =
            list.iter().map(|s| json!({ "shape": s.to_string(), "product_type": s.to_term_string() })).collect();
        return Ok((json!({ "degree": degree, "count": items.len(), "shapes": items }), text));
    }
    let alphabet = match &global.alphabet {
        Some(_) => alphabet_for(global, [])?,
        None => Arc::new(Alphabet::standard(alphabet_size)),
    };
    budget.check(monomial_count(alphabet.len(), degree), || format!("degree-{degree} monomial list"))?;
    let codes = monomials_of_degree(&alphabet, degree);
    let text: String = codes
        .iter()
        .map(|c| format!("{:<20} {:<24} {}\n", c.shape().to_string(), c.word().render(&alphabet), print_term(&unembed(c).expect("consistent"), &alphabet)))
        .collect();
    let items: Vec<Value> = codes.iter().map(|c| code_json(c, &alphabet)).collect();
    Ok((json!({ "degree": degree, "count": items.len(), "monomials": items }), text))
}
