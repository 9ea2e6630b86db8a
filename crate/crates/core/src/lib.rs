//! Exact computations with partial abelian monoids, labeled interval
//! configurations, and the scanning and fiber maps built on them.

pub mod fibers;
pub mod intervals;
pub mod labeled;
pub mod pam;
pub mod rational;
pub mod scanning;
pub mod tensor;
