//! Scalar abstraction for the sparse matrix core.
//!
//! One trait covers both arithmetic domains of the crate: exact integers
//! (lattice operators, where every add/mul is overflow-checked) and floats or
//! complex floats (spectral work, where the native ops are already total).
//! Implementations override nothing except the two checked hooks.

use num_complex::Complex;
use num_traits::{Num, NumAssign};

/// Ring scalar usable as a matrix entry.
///
/// `add_exact` / `mul_exact` are the only arithmetic the matrix layer calls,
/// so instantiating with an integer type gives overflow-checked lattice
/// algebra for free while floats keep their native semantics.
pub trait Scalar: Num + NumAssign + Copy + PartialEq + std::fmt::Debug + 'static {
    fn add_exact(self, other: Self) -> Self {
        self + other
    }

    fn mul_exact(self, other: Self) -> Self {
        self * other
    }

    fn neg_exact(self) -> Self;
}

impl Scalar for i64 {
    fn add_exact(self, other: Self) -> Self {
        self.checked_add(other)
            .expect("integer overflow in lattice arithmetic (add)")
    }

    fn mul_exact(self, other: Self) -> Self {
        self.checked_mul(other)
            .expect("integer overflow in lattice arithmetic (mul)")
    }

    fn neg_exact(self) -> Self {
        self.checked_neg()
            .expect("integer overflow in lattice arithmetic (neg)")
    }
}

impl Scalar for i128 {
    fn add_exact(self, other: Self) -> Self {
        self.checked_add(other)
            .expect("integer overflow in lattice arithmetic (add)")
    }

    fn mul_exact(self, other: Self) -> Self {
        self.checked_mul(other)
            .expect("integer overflow in lattice arithmetic (mul)")
    }

    fn neg_exact(self) -> Self {
        self.checked_neg()
            .expect("integer overflow in lattice arithmetic (neg)")
    }
}

impl Scalar for f64 {
    fn neg_exact(self) -> Self {
        -self
    }
}

impl Scalar for f32 {
    fn neg_exact(self) -> Self {
        -self
    }
}

impl Scalar for Complex<f64> {
    fn neg_exact(self) -> Self {
        -self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_ops_are_exact() {
        assert_eq!(3i64.add_exact(4), 7);
        assert_eq!((-3i64).mul_exact(5), -15);
        assert_eq!(7i64.neg_exact(), -7);
    }

    #[test]
    #[should_panic(expected = "integer overflow")]
    fn integer_overflow_panics() {
        i64::MAX.add_exact(1);
    }

    #[test]
    fn float_ops_pass_through() {
        assert_eq!(1.5f64.mul_exact(2.0), 3.0);
        assert_eq!(1.5f64.neg_exact(), -1.5);
    }
}
