//! Fixed-point, well-ordering and maximality constructions on finite
//! preorders, each producing a checkable witness, plus definition-level
//! brute-force oracles to test them against.
//!
//! Everything is built on one recursion ([`recursion::construct_m`]): given
//! a family `S` of subsets and `phi: S -> E` with `phi(X) not in X`, it grows
//! the unique well-ordered `M` with `phi(<x) = x` for each `x in M` and
//! `M not in S`. Choosing `S` and `phi` appropriately yields Zermelo's
//! well-ordering from a choice function, the non-injectivity of any map
//! `P(E) -> E`, fixed points of inflationary maps, and maximal elements.

pub mod check;
pub mod constructions;
pub mod equivalence;
pub mod oracle;
pub mod order;
pub mod recursion;
pub mod subset;

pub use check::Check;
pub use order::{Chain, OrderError, Preorder, DEFAULT_EXHAUSTIVE_BOUND};
pub use recursion::{
    construct_m, merge_chains, verify_tb_conditions, PhiSpec, TBWitness, TablePhi,
};
pub use subset::Subset;
