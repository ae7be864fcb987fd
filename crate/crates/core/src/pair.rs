//! The dual-norm-pair abstraction and decomposition certificates.
//!
//! A [`NormPair`] provides two norms `‖·‖_X` and `‖·‖_Y` that are dual to
//! each other with respect to the standard inner product, a Euclidean
//! projection onto X-balls, and duality witnesses in both directions. Every
//! engine in this crate works against this trait alone.

use crate::error::{Error, Result};
use crate::space::{inner, is_zero, norm2_sq, sub};

/// A pair of mutually dual norms on `ℝ^dim` with projection and duality
/// witness capabilities.
///
/// Invariants expected of implementations (property-tested):
/// - `norm_x` and `norm_y` are norms;
/// - generalized Cauchy–Schwarz: `⟨u,v⟩ ≤ norm_x(u)·norm_y(v)`;
/// - `proj_x(c, r)` is the Euclidean projection of `c` onto the X-ball of
///   radius `r`;
/// - `dual_argmax(g)` returns `w` with `‖w‖_X = 1` and `⟨g,w⟩ = ‖g‖_Y`;
/// - `dual_argmax_y(g)` returns `w` with `‖w‖_Y = 1` and `⟨g,w⟩ = ‖g‖_X`.
pub trait NormPair {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn norm_x(&self, v: &[f64]) -> f64;
    fn norm_y(&self, v: &[f64]) -> f64;

    /// Euclidean projection of `c` onto `{v : ‖v‖_X ≤ radius}`.
    fn proj_x(&self, c: &[f64], radius: f64) -> Vec<f64>;

    /// An X-unit vector attaining the dual characterization of `‖g‖_Y`.
    /// For polyhedral norms ties are broken deterministically (the
    /// lexicographically smallest optimal vertex).
    fn dual_argmax(&self, g: &[f64]) -> Vec<f64>;

    /// A Y-unit vector attaining `‖g‖_X` (the swapped-role witness).
    fn dual_argmax_y(&self, g: &[f64]) -> Vec<f64>;

    /// `shrink_X(c, x) = c − proj_X(c, x)`, the residual of the projection.
    fn shrink_x(&self, c: &[f64], radius: f64) -> Vec<f64> {
        sub(c, &self.proj_x(c, radius))
    }
}

/// A split `c = a + b` together with its norms and duality-gap certificate.
///
/// `gap = ‖a‖_X·‖b‖_Y − ⟨a,b⟩` is nonnegative up to rounding; `gap ≈ 0`
/// certifies that the split is an X2-decomposition.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// `‖a‖_X`
    pub x: f64,
    /// `‖b‖_Y`
    pub y: f64,
    /// `‖a‖_X·‖b‖_Y − ⟨a,b⟩`
    pub gap: f64,
    pub certified: bool,
}

impl Decomposition {
    /// Reconstructs the original vector `a + b`.
    pub fn reconstruct(&self) -> Vec<f64> {
        crate::space::add(&self.a, &self.b)
    }
}

/// Slope `μ_XY(v) = ‖v‖_Y / ‖v‖_X` of a nonzero vector.
pub fn slope_mu(pair: &dyn NormPair, v: &[f64]) -> Result<f64> {
    if is_zero(v) {
        return Err(Error::ZeroVector);
    }
    Ok(pair.norm_y(v) / pair.norm_x(v))
}

/// Tests `‖v‖₂² = ‖v‖_X·‖v‖_Y` within a relative tolerance. Unitangent
/// vectors have a single-segment Pareto frontier.
pub fn is_unitangent(pair: &dyn NormPair, v: &[f64], tol: f64) -> Result<bool> {
    if is_zero(v) {
        return Err(Error::ZeroVector);
    }
    let e2 = norm2_sq(v);
    Ok((e2 - pair.norm_x(v) * pair.norm_y(v)).abs() <= tol * e2)
}

/// Fills in the duality-gap certificate for a candidate split `c = a + b`.
/// The split is certified as an X2-decomposition when
/// `gap ≤ tol·(1 + ‖a‖_X‖b‖_Y)`.
pub fn check_x2(pair: &dyn NormPair, a: &[f64], b: &[f64], tol: f64) -> Result<Decomposition> {
    let x = pair.norm_x(a);
    let y = pair.norm_y(b);
    let gap = x * y - inner(a, b)?;
    Ok(Decomposition {
        a: a.to_vec(),
        b: b.to_vec(),
        x,
        y,
        gap,
        certified: gap <= tol * (1.0 + x * y),
    })
}

/// Geometric sparseness counts with the dimension bound `n + 1`.
#[derive(Debug, Clone, Copy)]
pub struct SparsenessReport {
    pub gsparse_x: usize,
    pub gsparse_y: usize,
    /// `dim + 1`, the bound satisfied by any X2-decomposition.
    pub bound: usize,
}

/// Closed-form geometric sparseness measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsparseTag {
    /// `ℓ1`-side sparseness: the number of nonzero entries.
    L1X,
    /// `ℓ∞`-side sparseness: `1 + #{i : |v_i| ≠ max|v|}`.
    L1Y,
    /// Total-variation side: `#{i : v_i ≠ v_{i+1}} + 1`.
    TvY,
}

/// Evaluates the closed-form geometric sparseness for the supported norm
/// tags. Generic facial-cone dimensions are intentionally not computed.
pub fn gsparse(tag: GsparseTag, v: &[f64]) -> Result<usize> {
    if is_zero(v) {
        return Err(Error::ZeroVector);
    }
    match tag {
        GsparseTag::L1X => Ok(v.iter().filter(|&&x| x != 0.0).count()),
        GsparseTag::L1Y => {
            let max = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            Ok(1 + v.iter().filter(|&&x| x.abs() != max).count())
        }
        GsparseTag::TvY => Ok(1 + v.windows(2).filter(|w| w[0] != w[1]).count()),
    }
}

/// Lexicographic minimum of a set of candidate vectors; used to break ties
/// between optimal vertices of polyhedral balls deterministically.
pub(crate) fn lex_min(candidates: Vec<Vec<f64>>) -> Vec<f64> {
    candidates
        .into_iter()
        .min_by(|a, b| {
            for (x, y) in a.iter().zip(b.iter()) {
                match x.partial_cmp(y).expect("finite entries") {
                    std::cmp::Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            std::cmp::Ordering::Equal
        })
        .expect("at least one candidate")
}
