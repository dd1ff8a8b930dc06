//! Seeded sampling helpers. Every randomized routine in the crate takes an
//! explicit 64-bit seed and goes through [`rng`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{c, condition_number, orthonormalize, ComplexMatrix, ComplexVector, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real and imaginary parts uniform on [-1, 1].
pub fn complex(rng: &mut SeededRng) -> C64 {
    c(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

pub fn matrix(rows: usize, cols: usize, rng: &mut SeededRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex(rng))
}

/// A nonzero random vector.
pub fn state(n: usize, rng: &mut SeededRng) -> ComplexVector {
    loop {
        let v = ComplexVector::from_fn(n, |_, _| complex(rng));
        if v.norm() > 1e-3 {
            return v;
        }
    }
}

pub fn unitary(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    loop {
        let cols: Vec<ComplexVector> = (0..n).map(|_| state(n, rng)).collect();
        let q = orthonormalize(&cols, 1e-6);
        if q.len() == n {
            return ComplexMatrix::from_columns(&q);
        }
    }
}

/// A random matrix with condition number below `max_condition`.
pub fn invertible(n: usize, max_condition: f64, rng: &mut SeededRng) -> ComplexMatrix {
    loop {
        let m = matrix(n, n, rng);
        if condition_number(&m).is_ok_and(|k| k < max_condition) {
            return m;
        }
    }
}

/// `count` distinct reals uniform on [-1, 1], at least `min_gap` apart.
pub fn distinct_reals(count: usize, min_gap: f64, rng: &mut SeededRng) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..count).map(|_| rng.random_range(-1.0..=1.0)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            return v;
        }
    }
}

pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..=hi)
}
