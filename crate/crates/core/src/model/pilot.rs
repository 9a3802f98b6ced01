use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;

/// `B` mutually orthogonal pilot sequences of length `B`, each with squared
/// norm `B`. Built from the discrete Fourier basis, so every entry has unit
/// magnitude and any `B >= 1` is admissible.
#[derive(Debug, Clone, Serialize)]
pub struct PilotBook<T> {
    len: usize,
    sequences: Vec<Vec<Complex<T>>>,
}

impl<T: Real> PilotBook<T> {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::domain("make_pilot_book", "pilot length must be at least 1"));
        }
        let two_pi = T::TAU();
        let n = T::from_usize_lossy(len);
        let sequences = (0..len)
            .map(|b| {
                (0..len)
                    .map(|t| {
                        // reduce the phase index first so the angle stays in [0, 2pi)
                        let idx = (b * t) % len;
                        Complex::from_polar(T::one(), two_pi * T::from_usize_lossy(idx) / n)
                    })
                    .collect()
            })
            .collect();
        Ok(Self { len, sequences })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sequence(&self, b: usize) -> &[Complex<T>] {
        &self.sequences[b]
    }

    pub fn sequences(&self) -> &[Vec<Complex<T>>] {
        &self.sequences
    }

    /// Gram matrix `G[a][b] = v_a^H v_b`.
    pub fn gram(&self) -> Vec<Vec<Complex<T>>> {
        self.sequences
            .iter()
            .map(|va| {
                self.sequences
                    .iter()
                    .map(|vb| va.iter().zip(vb).map(|(x, y)| x.conj() * y).sum())
                    .collect()
            })
            .collect()
    }
}

/// Builds the pilot book of length `len`.
pub fn make_pilot_book<T: Real>(len: usize) -> Result<PilotBook<T>> {
    PilotBook::new(len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pilot_is_one() {
        let book = make_pilot_book::<f64>(1).unwrap();
        assert_eq!(book.sequence(0), &[Complex::new(1.0, 0.0)]);
    }

    #[test]
    fn zero_length_rejected() {
        assert!(make_pilot_book::<f64>(0).is_err());
    }

    fn assert_scaled_identity(book: &PilotBook<f64>, tol: f64) -> f64 {
        let b = book.len() as f64;
        let mut worst_off = 0.0f64;
        for (i, row) in book.gram().iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                if i == j {
                    assert!((g.re - b).abs() <= tol && g.im.abs() <= tol, "diag {i}: {g}");
                } else {
                    worst_off = worst_off.max(g.norm());
                    assert!(g.norm() <= tol, "({i},{j}) = {g}");
                }
            }
        }
        worst_off
    }

    #[test]
    fn gram_is_scaled_identity() {
        for len in [1, 2, 3, 4, 7, 16, 30, 60, 97] {
            let book = make_pilot_book::<f64>(len).unwrap();
            assert_scaled_identity(&book, 1e-9 * len as f64);
            for s in book.sequences() {
                assert!(s.iter().all(|x| (x.norm() - 1.0).abs() < 1e-14));
            }
        }
    }

    #[test]
    fn sixty_pilots_off_diagonal_below_1e7() {
        let book = make_pilot_book::<f64>(60).unwrap();
        let worst = assert_scaled_identity(&book, 1e-7);
        assert!(worst < 1e-7);
    }

    #[test]
    fn four_pilots_gram_exact() {
        let book = make_pilot_book::<f64>(4).unwrap();
        assert_scaled_identity(&book, 1e-12);
    }

    #[test]
    fn single_precision_book_is_orthogonal() {
        let book = make_pilot_book::<f32>(16).unwrap();
        for (i, row) in book.gram().iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                let target = if i == j { 16.0 } else { 0.0 };
                assert!((g.re - target).abs() < 1e-4 && g.im.abs() < 1e-4);
            }
        }
    }
}
