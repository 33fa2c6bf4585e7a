//! Folding of nearest-neighbour configuration spaces on bipartite graphs,
//! together with exact rational algebra for Markov and Gibbs cocycles.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line front end live in the `hcfold-cli` crate.
//!
//! A typical pipeline:
//!
//! ```
//! use hcfold::{graph::Graph, space::ConfigSpace, cocycle, folding};
//!
//! let domain = Graph::cycle(4);
//! let target = Graph::path_power(5, 2);
//! let space = ConfigSpace::hom(&domain, &target, hcfold::DEFAULT_CAP).unwrap();
//! let report = cocycle::is_hammersley_clifford(&space).unwrap();
//! assert!(report.holds);
//! let seq = folding::fold_sequence(&space).unwrap();
//! assert_eq!(seq.terminal.len(), 1);
//! ```
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
mod label;
mod linalg;

pub mod cocycle;
pub mod folding;
pub mod graph;
pub mod interaction;
pub mod measure;
pub mod space;

pub use error::{Error, Result};
pub use label::Label;

/// Exact rationals used for every cocycle value, weight and potential.
pub type Q = num_rational::BigRational;

/// Default cap on enumeration work (candidate assignments explored).
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Parse `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    use core::str::FromStr;
    let s = s.trim();
    let q = match s.split_once('/') {
        Some((n, d)) => {
            let n = num_bigint::BigInt::from_str(n.trim()).ok()?;
            let d = num_bigint::BigInt::from_str(d.trim()).ok()?;
            if num_traits::Zero::is_zero(&d) {
                return None;
            }
            Q::new(n, d)
        }
        None => Q::from_integer(num_bigint::BigInt::from_str(s).ok()?),
    };
    Some(q)
}

/// Format a rational as `"p/q"`, always with an explicit denominator.
pub fn format_rational(q: &Q) -> alloc::string::String {
    alloc::format!("{}/{}", q.numer(), q.denom())
}
