//! Hyperfocused and generalized hyperfocused arcs in PG(2, q), q = 2^r,
//! together with the 1-factorization machinery used to classify small ones.

pub mod arcs;
pub mod blocking;
pub mod gf2;
pub mod onefact;
pub mod projplane;
