//! Exact engine for the `ℓ1`/`ℓ∞` dual pair.
//!
//! Everything here is closed-form: entrywise soft thresholding, the exact
//! piecewise-linear frontier with breakpoints at the distinct magnitudes of
//! the input, and the exact slope decomposition by magnitude levels.

use crate::error::{Error, Result};
use crate::pair::{lex_min, Decomposition, NormPair};
use crate::pareto::{CurveKind, Orientation, ParetoCurve, SlopeDecomposition};
use crate::space::is_zero;

/// The `ℓ1`/`ℓ∞` pair on `ℝ^n` with `‖·‖_X = ‖·‖₁`.
#[derive(Debug, Clone)]
pub struct L1Pair {
    n: usize,
}

pub fn l1_pair(n: usize) -> L1Pair {
    assert!(n >= 1, "dimension must be positive");
    L1Pair { n }
}

impl NormPair for L1Pair {
    fn name(&self) -> &str {
        "l1"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn norm_x(&self, v: &[f64]) -> f64 {
        v.iter().map(|x| x.abs()).sum()
    }

    fn norm_y(&self, v: &[f64]) -> f64 {
        v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    fn proj_x(&self, c: &[f64], radius: f64) -> Vec<f64> {
        project_l1_ball(c, radius)
    }

    fn dual_argmax(&self, g: &[f64]) -> Vec<f64> {
        // vertices of the l1 ball attaining the sup-norm of g
        let max = self.norm_y(g);
        let mut candidates = Vec::new();
        for (i, &gi) in g.iter().enumerate() {
            if gi.abs() == max {
                let mut w = vec![0.0; g.len()];
                w[i] = if gi < 0.0 { -1.0 } else { 1.0 };
                candidates.push(w);
            }
        }
        lex_min(candidates)
    }

    fn dual_argmax_y(&self, g: &[f64]) -> Vec<f64> {
        // sign vertex of the sup-norm ball; zeros get -1 (lex-smallest)
        g.iter().map(|&x| if x > 0.0 { 1.0 } else { -1.0 }).collect()
    }
}

/// Exact Euclidean projection onto the `ℓ1` ball of the given radius, by the
/// standard sort-and-threshold rule.
pub fn project_l1_ball(c: &[f64], radius: f64) -> Vec<f64> {
    if radius <= 0.0 {
        return vec![0.0; c.len()];
    }
    let l1: f64 = c.iter().map(|x| x.abs()).sum();
    if l1 <= radius {
        return c.to_vec();
    }
    let mut mags: Vec<f64> = c.iter().map(|x| x.abs()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (k, &u) in mags.iter().enumerate() {
        cum += u;
        let t = (cum - radius) / (k as f64 + 1.0);
        if k + 1 == mags.len() || mags[k + 1] <= t {
            tau = t;
            break;
        }
    }
    c.iter()
        .map(|&x| x.signum() * (x.abs() - tau).max(0.0))
        .collect()
}

/// Entrywise soft thresholding at level `y`: `b_i = sgn(c_i)·min(|c_i|, y)`
/// and `a = c − b`. The returned certificate gap is exactly zero.
pub fn soft_threshold(c: &[f64], y: f64) -> Result<Decomposition> {
    if y < 0.0 {
        return Err(Error::RadiusOutOfRange {
            radius: y,
            max: f64::INFINITY,
        });
    }
    let b: Vec<f64> = c.iter().map(|&x| x.signum() * x.abs().min(y)).collect();
    let a: Vec<f64> = c.iter().zip(&b).map(|(x, bi)| x - bi).collect();
    let x_norm: f64 = a.iter().map(|v| v.abs()).sum();
    let y_norm = b.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    Ok(Decomposition {
        a,
        b,
        x: x_norm,
        y: y_norm,
        gap: 0.0,
        certified: true,
    })
}

/// Distinct magnitude levels `λ_1 > … > λ_r > 0` with multiplicities.
/// Ties are merged by exact float equality.
#[derive(Debug, Clone)]
pub struct L1SlopeLevels {
    pub lambdas: Vec<f64>,
    pub mults: Vec<usize>,
}

pub fn magnitude_levels(c: &[f64]) -> Result<L1SlopeLevels> {
    if is_zero(c) {
        return Err(Error::ZeroVector);
    }
    let mut mags: Vec<f64> = c.iter().map(|x| x.abs()).filter(|&x| x > 0.0).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut lambdas = Vec::new();
    let mut mults = Vec::new();
    for m in mags {
        if lambdas.last() == Some(&m) {
            *mults.last_mut().unwrap() += 1;
        } else {
            lambdas.push(m);
            mults.push(1);
        }
    }
    Ok(L1SlopeLevels { lambdas, mults })
}

/// Exact frontier of `c` under the `ℓ1`/`ℓ∞` pair, as the piecewise-linear
/// curve `x(y) = Σ_i max(|c_i| − y, 0)` with breakpoints at the distinct
/// magnitudes. Points are stored sorted by increasing `x`.
pub fn l1_frontier(c: &[f64]) -> ParetoCurve {
    let eval = |y: f64| -> f64 { c.iter().map(|&x| (x.abs() - y).max(0.0)).sum() };
    let mut points = Vec::new();
    match magnitude_levels(c) {
        Ok(levels) => {
            points.push((0.0, levels.lambdas[0]));
            for k in 1..levels.lambdas.len() {
                let y = levels.lambdas[k];
                points.push((eval(y), y));
            }
            points.push((eval(0.0), 0.0));
        }
        Err(_) => points.push((0.0, 0.0)),
    }
    ParetoCurve::from_points(CurveKind::Frontier, Orientation::XOfY, points)
}

/// Exact slope decomposition of a nonzero vector by its magnitude levels.
pub fn l1_slope_decomposition(c: &[f64]) -> Result<SlopeDecomposition> {
    let levels = magnitude_levels(c)?;
    let r = levels.lambdas.len();
    let mut components = Vec::with_capacity(r);
    let mut xs = Vec::with_capacity(r);
    let mut ys = Vec::with_capacity(r);
    let mut slopes = Vec::with_capacity(r);
    let mut cum_mult = 0usize;
    for i in 0..r {
        let lam = levels.lambdas[i];
        let next = if i + 1 < r { levels.lambdas[i + 1] } else { 0.0 };
        cum_mult += levels.mults[i];
        let comp: Vec<f64> = c
            .iter()
            .map(|&x| if x.abs() >= lam { x.signum() * (lam - next) } else { 0.0 })
            .collect();
        xs.push(cum_mult as f64 * (lam - next));
        ys.push(lam - next);
        slopes.push(1.0 / cum_mult as f64);
        components.push(comp);
    }
    Ok(SlopeDecomposition {
        components,
        xs,
        ys,
        slopes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{norm2_sq, sub};

    const C: [f64; 7] = [-1.0, 2.0, 4.0, 1.0, -2.0, 1.0, -1.0];

    #[test]
    fn norms_of_reference_vector() {
        let pair = l1_pair(7);
        assert_eq!(pair.norm_x(&C), 12.0);
        assert_eq!(pair.norm_y(&C), 4.0);
    }

    #[test]
    fn ball_projection_spike() {
        assert_eq!(project_l1_ball(&[3.0, 0.0], 1.0), vec![1.0, 0.0]);
    }

    #[test]
    fn ball_projection_matches_reference_split() {
        // radius 3.5 keeps exactly the soft-threshold tail at level 1.5
        let a = project_l1_ball(&C, 3.5);
        let expected = [0.0, 0.5, 2.5, 0.0, -0.5, 0.0, 0.0];
        for (got, want) in a.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-12, "{:?}", a);
        }
    }

    #[test]
    fn soft_threshold_reference_values() {
        let d = soft_threshold(&C, 1.5).unwrap();
        let expected_a = [0.0, 0.5, 2.5, 0.0, -0.5, 0.0, 0.0];
        let expected_b = [-1.0, 1.5, 1.5, 1.0, -1.5, 1.0, -1.0];
        for (got, want) in d.a.iter().zip(expected_a.iter()) {
            assert_eq!(got, want);
        }
        for (got, want) in d.b.iter().zip(expected_b.iter()) {
            assert_eq!(got, want);
        }
        assert_eq!(d.x, 3.5);
        assert_eq!(d.gap, 0.0);
    }

    #[test]
    fn soft_threshold_extremes() {
        let d0 = soft_threshold(&C, 0.0).unwrap();
        assert_eq!(d0.a, C.to_vec());
        let dbig = soft_threshold(&C, 10.0).unwrap();
        assert!(dbig.a.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn frontier_reference_points() {
        let curve = l1_frontier(&C);
        let expected = [(0.0, 4.0), (2.0, 2.0), (5.0, 1.0), (12.0, 0.0)];
        assert_eq!(curve.points.len(), 4);
        for ((x, y), (ex, ey)) in curve.points.iter().zip(expected.iter()) {
            assert_eq!(x, ex);
            assert_eq!(y, ey);
        }
    }

    #[test]
    fn frontier_of_spike_is_segment() {
        let curve = l1_frontier(&[1.0, 0.0, 0.0]);
        assert_eq!(curve.points, vec![(0.0, 1.0), (1.0, 0.0)]);
    }

    #[test]
    fn frontier_area_is_half_squared_length() {
        let curve = l1_frontier(&C);
        assert!((curve.trapezoid_area() - 14.0).abs() < 1e-12);
        assert_eq!(norm2_sq(&C), 28.0);
    }

    #[test]
    fn slope_decomposition_reference_components() {
        let sd = l1_slope_decomposition(&C).unwrap();
        assert_eq!(sd.components.len(), 3);
        assert_eq!(sd.components[0], vec![0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(sd.components[1], vec![0.0, 1.0, 1.0, 0.0, -1.0, 0.0, 0.0]);
        assert_eq!(
            sd.components[2],
            vec![-1.0, 1.0, 1.0, 1.0, -1.0, 1.0, -1.0]
        );
        assert_eq!(sd.xs, vec![2.0, 3.0, 7.0]);
        assert_eq!(sd.ys, vec![2.0, 1.0, 1.0]);
    }

    #[test]
    fn slope_decomposition_merges_ties() {
        let sd = l1_slope_decomposition(&[2.0, -2.0]).unwrap();
        assert_eq!(sd.components.len(), 1);
        assert_eq!(sd.slopes, vec![0.5]);
        let single = l1_slope_decomposition(&[5.0, 0.0]).unwrap();
        assert_eq!(single.components, vec![vec![5.0, 0.0]]);
    }

    #[test]
    fn slope_gram_identity_exact() {
        let sd = l1_slope_decomposition(&C).unwrap();
        let pair = l1_pair(7);
        for i in 0..sd.components.len() {
            for j in i..sd.components.len() {
                let ip: f64 = sd.components[i]
                    .iter()
                    .zip(&sd.components[j])
                    .map(|(a, b)| a * b)
                    .sum();
                let want = pair.norm_x(&sd.components[i]) * pair.norm_y(&sd.components[j]);
                assert_eq!(ip, want, "components {} {}", i, j);
            }
        }
    }

    #[test]
    fn projection_residual_matches_soft_threshold() {
        // closed-form b from soft threshold equals c - proj at matching radius
        let d = soft_threshold(&C, 1.5).unwrap();
        let a = project_l1_ball(&C, d.x);
        let b = sub(&C, &a);
        for (got, want) in b.iter().zip(d.b.iter()) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
