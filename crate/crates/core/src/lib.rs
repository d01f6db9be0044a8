//! Split-octonion arithmetic with a reduced-multiplication product.
//!
//! The schoolbook product of two split-octonions costs 64 multiplications and
//! 56 additions. [`schedule::fast_mul`] computes the same product with 28
//! multiplications and 92 additions (plus a fixed number of power-of-two
//! shifts), by factoring the right-multiplication matrix into butterflies,
//! symmetric Toeplitz blocks and a sparse correction.
//!
//! Everything is generic over [`scalars::ScalarRing`], so the same code is
//! checked over exact rationals, instrumented counting scalars, and symbolic
//! polynomials; see [`verify`].

pub mod batch;
pub mod cli;
pub mod octonion;
pub mod scalars;
pub mod schedule;
pub mod verify;

pub use octonion::{
    build_coeff_matrix, conjugate, direct_mul, matvec, quadratic_form, table_mul, BasisProduct,
    CayleyTable, CoeffMatrix8, SplitOctonion,
};
pub use scalars::{with_counting, Counted, OpCounts, Polynomial16, Rational, ScalarRing};
pub use schedule::{apply, fast_mul, prepare, schedule_as_data, MulSchedule, PreparedMultiplier};
