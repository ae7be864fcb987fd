//! Basic Euclidean operations on dense vectors.
//!
//! Vectors are plain `Vec<f64>` / `&[f64]`; all entries are expected to be
//! finite. The inner product is the standard dot product, which also fixes
//! the Euclidean norm used by every decomposition engine.

use crate::error::{Error, Result};

/// Standard dot product `⟨u, v⟩`.
pub fn inner(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(u.iter().zip(v).map(|(a, b)| a * b).sum())
}

/// Euclidean norm `‖v‖₂`.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Squared Euclidean norm.
pub fn norm2_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

pub fn add(u: &[f64], v: &[f64]) -> Vec<f64> {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub(u: &[f64], v: &[f64]) -> Vec<f64> {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn scale(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| s * x).collect()
}

/// `u + s·v`.
pub fn axpy(u: &[f64], s: f64, v: &[f64]) -> Vec<f64> {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a + s * b).collect()
}

pub fn is_zero(v: &[f64]) -> bool {
    v.iter().all(|&x| x == 0.0)
}

/// Checks that all entries are finite, which every engine assumes.
pub fn validate_finite(v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite entry in vector".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_orthogonal() {
        assert_eq!(inner(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn inner_hand_value() {
        // value reused by the ellipse gallery decomposition check
        assert_eq!(inner(&[2.0, 1.0], &[1.0, 2.0]).unwrap(), 4.0);
    }

    #[test]
    fn inner_self_is_squared_length() {
        assert_eq!(inner(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]).unwrap(), 3.0);
    }

    #[test]
    fn inner_rejects_mismatched_dims() {
        assert!(inner(&[1.0], &[1.0, 2.0]).is_err());
    }
}
