//! Free magmas and free non-associative algebras over the rationals.
//!
//! Terms of the free magma are encoded by their bracket shape and leaf word
//! ([`magma`]); polynomials are sparse rational combinations of such codes
//! ([`algebra`]); linear algebra happens on graded slices in reduced echelon
//! form ([`linalg`]). On top of that sit the relation search for algebraic
//! independence ([`independence`]) and the construction of free generating
//! sets of finitely generated subalgebras ([`kurosh`]).

pub mod algebra;
pub mod error;
pub mod independence;
pub mod io;
pub mod kurosh;
pub mod linalg;
pub mod magma;
pub mod oracle;

pub use algebra::{Polynomial, Rational, SubstitutionMap};
pub use error::{Error, Result};
pub use independence::{is_reduced, relation_search, same_degree_fast_path, IndependenceVerdict};
pub use kurosh::{extract_free_generators, graded_slices, lift_leading_forms, FreeGeneratorReport};
pub use linalg::{EchelonBasis, SparseVector};
pub use magma::{Alphabet, MagmaTerm, MonomialCode, Shape, Word};

/// Upper bound on the number of monomials (or basis products) a single
/// enumeration may touch before it gives up with [`Error::BudgetExceeded`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(u64);

impl Budget {
    pub const DEFAULT: u64 = 1_000_000;
    pub const ENV: &'static str = "MAGMA_FORGE_BUDGET";

    pub fn new(cap: u64) -> Self {
        Budget(cap)
    }

    pub fn cap(&self) -> u64 {
        self.0
    }

    /// The default, overridden by `MAGMA_FORGE_BUDGET` when it holds a number.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map_or_else(Self::default, Budget)
    }

    pub fn check(&self, size: u128, what: impl FnOnce() -> String) -> Result<()> {
        if size > self.0 as u128 {
            Err(Error::BudgetExceeded { what: what(), size, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget(Self::DEFAULT)
    }
}
