//! Closed-form 2D norm pairs used as test fixtures.
//!
//! The ellipse pair is a pair of quadratic norms whose frontier and
//! sub-frontier differ; the skew pair is a polyhedral pair whose
//! singular-value region has a negative-width bar. Both supply exact
//! Euclidean projections (1D root finding for the ellipse, edge projection
//! for the polygon).

use crate::pair::{lex_min, NormPair};
use crate::space::norm2_sq;

/// Quadratic-norm pair: `‖z‖_X = √(z₁²/2 + 2 z₂²)` and its dual
/// `‖z‖_Y = √(2 z₁² + z₂²/2)`.
#[derive(Debug, Clone)]
pub struct EllipsePair;

pub fn gallery_ellipse_pair() -> EllipsePair {
    EllipsePair
}

const ELLIPSE_Q: [f64; 2] = [0.5, 2.0];

impl NormPair for EllipsePair {
    fn name(&self) -> &str {
        "gallery-ellipse"
    }

    fn dim(&self) -> usize {
        2
    }

    fn norm_x(&self, v: &[f64]) -> f64 {
        (ELLIPSE_Q[0] * v[0] * v[0] + ELLIPSE_Q[1] * v[1] * v[1]).sqrt()
    }

    fn norm_y(&self, v: &[f64]) -> f64 {
        (v[0] * v[0] / ELLIPSE_Q[0] + v[1] * v[1] / ELLIPSE_Q[1]).sqrt()
    }

    fn proj_x(&self, c: &[f64], radius: f64) -> Vec<f64> {
        if radius <= 0.0 {
            return vec![0.0, 0.0];
        }
        if self.norm_x(c) <= radius {
            return c.to_vec();
        }
        // z(λ) = (I + λQ)⁻¹ c lies on the boundary for the unique λ > 0
        let ellipse_val = |lam: f64| {
            let z0 = c[0] / (1.0 + lam * ELLIPSE_Q[0]);
            let z1 = c[1] / (1.0 + lam * ELLIPSE_Q[1]);
            ELLIPSE_Q[0] * z0 * z0 + ELLIPSE_Q[1] * z1 * z1 - radius * radius
        };
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        while ellipse_val(hi) > 0.0 {
            hi *= 2.0;
            if hi > 1e18 {
                break;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ellipse_val(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lam = 0.5 * (lo + hi);
        vec![
            c[0] / (1.0 + lam * ELLIPSE_Q[0]),
            c[1] / (1.0 + lam * ELLIPSE_Q[1]),
        ]
    }

    fn dual_argmax(&self, g: &[f64]) -> Vec<f64> {
        if norm2_sq(g) == 0.0 {
            return vec![(2.0f64).sqrt(), 0.0];
        }
        // Q⁻¹g scaled to the X-unit sphere
        let w = [g[0] / ELLIPSE_Q[0], g[1] / ELLIPSE_Q[1]];
        let nx = self.norm_x(&w);
        vec![w[0] / nx, w[1] / nx]
    }

    fn dual_argmax_y(&self, g: &[f64]) -> Vec<f64> {
        if norm2_sq(g) == 0.0 {
            return vec![1.0 / (2.0f64).sqrt(), 0.0];
        }
        let w = [g[0] * ELLIPSE_Q[0], g[1] * ELLIPSE_Q[1]];
        let ny = self.norm_y(&w);
        vec![w[0] / ny, w[1] / ny]
    }
}

/// Polyhedral pair: `‖c‖_X = max(|c₂|, |2c₂ − c₁|)` with dual
/// `‖c‖_Y = max(|c₁ + c₂|, |3c₁ + c₂|)`.
#[derive(Debug, Clone)]
pub struct SkewPair;

pub fn gallery_skew_pair() -> SkewPair {
    SkewPair
}

/// Unit-ball vertices of the X-norm, in counterclockwise order.
const SKEW_X_VERTICES: [[f64; 2]; 4] = [[3.0, 1.0], [1.0, 1.0], [-3.0, -1.0], [-1.0, -1.0]];
/// Unit-ball vertices of the Y-norm.
const SKEW_Y_VERTICES: [[f64; 2]; 4] = [[0.0, 1.0], [-1.0, 2.0], [0.0, -1.0], [1.0, -2.0]];

impl NormPair for SkewPair {
    fn name(&self) -> &str {
        "gallery-skew"
    }

    fn dim(&self) -> usize {
        2
    }

    fn norm_x(&self, v: &[f64]) -> f64 {
        v[1].abs().max((2.0 * v[1] - v[0]).abs())
    }

    fn norm_y(&self, v: &[f64]) -> f64 {
        (v[0] + v[1]).abs().max((3.0 * v[0] + v[1]).abs())
    }

    fn proj_x(&self, c: &[f64], radius: f64) -> Vec<f64> {
        if radius <= 0.0 {
            return vec![0.0, 0.0];
        }
        if self.norm_x(c) <= radius {
            return c.to_vec();
        }
        project_polygon(c, &SKEW_X_VERTICES, radius)
    }

    fn dual_argmax(&self, g: &[f64]) -> Vec<f64> {
        argmax_vertex(g, &SKEW_X_VERTICES)
    }

    fn dual_argmax_y(&self, g: &[f64]) -> Vec<f64> {
        argmax_vertex(g, &SKEW_Y_VERTICES)
    }
}

/// Best vertex of `±vertices` for the functional `⟨g, ·⟩`, lex-smallest on
/// ties.
fn argmax_vertex(g: &[f64], vertices: &[[f64; 2]]) -> Vec<f64> {
    let signed: Vec<[f64; 2]> = vertices
        .iter()
        .flat_map(|v| [[v[0], v[1]], [-v[0], -v[1]]])
        .collect();
    let best = signed
        .iter()
        .map(|w| g[0] * w[0] + g[1] * w[1])
        .fold(f64::NEG_INFINITY, f64::max);
    let candidates: Vec<Vec<f64>> = signed
        .iter()
        .filter(|w| g[0] * w[0] + g[1] * w[1] >= best - 1e-12 * (1.0 + best.abs()))
        .map(|w| w.to_vec())
        .collect();
    lex_min(candidates)
}

/// Euclidean projection of `c` onto a convex polygon with the given unit
/// vertices scaled by `radius` (projection onto every edge, closest wins).
fn project_polygon(c: &[f64], vertices: &[[f64; 2]], radius: f64) -> Vec<f64> {
    let n = vertices.len();
    let mut best = vec![0.0, 0.0];
    let mut best_d = f64::INFINITY;
    for i in 0..n {
        let p = [radius * vertices[i][0], radius * vertices[i][1]];
        let q = [
            radius * vertices[(i + 1) % n][0],
            radius * vertices[(i + 1) % n][1],
        ];
        let cand = project_segment(c, &p, &q);
        let d = (cand[0] - c[0]).powi(2) + (cand[1] - c[1]).powi(2);
        if d < best_d {
            best_d = d;
            best = cand;
        }
    }
    best
}

fn project_segment(c: &[f64], p: &[f64; 2], q: &[f64; 2]) -> Vec<f64> {
    let d = [q[0] - p[0], q[1] - p[1]];
    let len_sq = d[0] * d[0] + d[1] * d[1];
    if len_sq == 0.0 {
        return p.to_vec();
    }
    let t = (((c[0] - p[0]) * d[0] + (c[1] - p[1]) * d[1]) / len_sq).clamp(0.0, 1.0);
    vec![p[0] + t * d[0], p[1] + t * d[1]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{inner, norm2, sub};

    #[test]
    fn ellipse_norm_values() {
        let pair = gallery_ellipse_pair();
        assert!((pair.norm_x(&[3.0, 3.0]) - 22.5f64.sqrt()).abs() < 1e-12);
        assert!((pair.norm_y(&[3.0, 3.0]) - 22.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn skew_norm_values() {
        let pair = gallery_skew_pair();
        assert_eq!(pair.norm_x(&[3.0, 12.0]), 21.0);
        assert_eq!(pair.norm_y(&[3.0, 12.0]), 21.0);
    }

    #[test]
    fn skew_vertices_have_unit_norms() {
        let pair = gallery_skew_pair();
        for v in &SKEW_X_VERTICES {
            assert!((pair.norm_x(&v.to_vec()) - 1.0).abs() < 1e-15);
        }
        for v in &SKEW_Y_VERTICES {
            assert!((pair.norm_y(&v.to_vec()) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ellipse_projection_matches_x2_parametrization() {
        // the decomposition (4−2t, 2/t−1) + (2t−1, 4−2/t) of (3,3) is an
        // X2-split, so its a-part is the ball projection at radius ‖a‖_X
        let pair = gallery_ellipse_pair();
        let c = [3.0, 3.0];
        for &t in &[0.5, 0.8, 1.0, 1.3, 1.7, 2.0] {
            let a = [4.0 - 2.0 * t, 2.0 / t - 1.0];
            let x = pair.norm_x(&a);
            let p = pair.proj_x(&c, x);
            assert!(
                (p[0] - a[0]).abs() < 1e-9 && (p[1] - a[1]).abs() < 1e-9,
                "t={t} p={p:?} a={a:?}"
            );
            let b = sub(&c, &a);
            let gap = x * pair.norm_y(&b) - inner(&a, &b).unwrap();
            assert!(gap.abs() < 1e-12, "t={t} gap={gap}");
        }
    }

    #[test]
    fn projections_beat_boundary_grid_search() {
        // dense sweep along the ball boundary cannot get closer than the
        // computed projection (up to grid resolution)
        let cases = [
            ([3.0, 3.0], 1.7f64),
            ([-2.0, 5.0], 0.9),
            ([4.0, -1.0], 2.3),
        ];
        let pair = gallery_ellipse_pair();
        for (c, r) in cases {
            let p = pair.proj_x(&c, r);
            let d_proj = norm2(&sub(&c, &p));
            let mut d_grid = f64::INFINITY;
            for i in 0..20000 {
                let th = 2.0 * std::f64::consts::PI * i as f64 / 20000.0;
                let z = [r * (2.0f64).sqrt() * th.cos(), r / (2.0f64).sqrt() * th.sin()];
                d_grid = d_grid.min(norm2(&sub(&c, &z)));
            }
            assert!(d_proj <= d_grid + 1e-6, "proj {d_proj} grid {d_grid}");
        }
        let pair = gallery_skew_pair();
        for (c, r) in cases {
            let p = pair.proj_x(&c, r);
            let d_proj = norm2(&sub(&c, &p));
            let mut d_grid = f64::INFINITY;
            for i in 0..4 {
                for k in 0..=5000 {
                    let t = k as f64 / 5000.0;
                    let a = SKEW_X_VERTICES[i];
                    let b = SKEW_X_VERTICES[(i + 1) % 4];
                    let z = [
                        r * (a[0] + t * (b[0] - a[0])),
                        r * (a[1] + t * (b[1] - a[1])),
                    ];
                    d_grid = d_grid.min(norm2(&sub(&c, &z)));
                }
            }
            assert!(d_proj <= d_grid + 1e-6, "proj {d_proj} grid {d_grid}");
        }
    }

    #[test]
    fn dual_argmax_attains_both_pairs() {
        let vectors = [[1.0, 2.0], [-3.0, 0.5], [0.0, -2.0], [4.0, 4.0]];
        let pairs: [&dyn NormPair; 2] = [&EllipsePair, &SkewPair];
        for pair in pairs {
            for g in &vectors {
                let w = pair.dual_argmax(g);
                assert!(
                    (pair.norm_x(&w) - 1.0).abs() < 1e-10,
                    "{} x-unit at {g:?}: {w:?}",
                    pair.name()
                );
                assert!(
                    (inner(g, &w).unwrap() - pair.norm_y(g)).abs() < 1e-10,
                    "{} y-attainment at {g:?}: got {} want {}",
                    pair.name(),
                    inner(g, &w).unwrap(),
                    pair.norm_y(g)
                );
                let w = pair.dual_argmax_y(g);
                assert!(
                    (pair.norm_y(&w) - 1.0).abs() < 1e-10,
                    "{} y-unit at {g:?}: {w:?}",
                    pair.name()
                );
                assert!(
                    (inner(g, &w).unwrap() - pair.norm_x(g)).abs() < 1e-10,
                    "{} x-attainment at {g:?}: got {} want {}",
                    pair.name(),
                    inner(g, &w).unwrap(),
                    pair.norm_x(g)
                );
            }
        }
    }
}
