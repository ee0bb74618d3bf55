//! Dense complex matrix exponential by Taylor series with scaling and squaring.

use ndarray::Array2;
use num_complex::Complex64 as C64;

/// The scaled matrix has 1-norm at most this before the series is summed.
pub const SQUARING_THRESHOLD: f64 = 0.5;

const MAX_TERMS: usize = 40;

/// Maximum absolute column sum.
pub fn norm1(a: &Array2<C64>) -> f64 {
    a.columns().into_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(A)` for a square matrix.
///
/// `A` is divided by `2^s` so that `‖A/2^s‖₁ <= 0.5`. The series is then
/// summed until the next term is below double precision relative to the
/// partial sum, and the result is squared `s` times.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = norm1(a);
    let s = if norm > SQUARING_THRESHOLD {
        (norm / SQUARING_THRESHOLD).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / 2f64.powi(s));

    let mut sum = Array2::<C64>::eye(n);
    let mut term = Array2::<C64>::eye(n);
    for k in 1..=MAX_TERMS {
        term = term.dot(&scaled).mapv(|z| z / k as f64);
        sum += &term;
        if norm1(&term) <= f64::EPSILON * norm1(&sum) {
            break;
        }
    }
    for _ in 0..s {
        sum = sum.dot(&sum);
    }
    sum
}
