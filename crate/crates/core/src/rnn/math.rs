//! Scalar helpers shared by the network code.

use num_traits::Float;

/// Numeric literal cast; panics only on values unrepresentable in T, which
/// never happens for the constants used here.
pub fn lit<T: Float>(x: f64) -> T {
    T::from(x).expect("constant representable in float type")
}

pub fn sigmoid<T: Float>(x: T) -> T {
    T::one() / (T::one() + (-x).exp())
}
