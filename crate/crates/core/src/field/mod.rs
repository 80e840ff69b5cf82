//! Prime fields, small extension fields `F_p[x]/(m)`, exact rationals, and
//! exhaustive root finding.

mod element;
mod prime;
mod rational;
mod roots;

pub use element::{Field, FieldElement, MAX_DEGREE};
pub use prime::{is_prime, primes_excluding, Prime};
pub use rational::{reduce_rational, ExactRational};
pub use roots::{evaluate, find_roots, find_roots_bounded, DEFAULT_ROOT_DEGREE_BOUND};
