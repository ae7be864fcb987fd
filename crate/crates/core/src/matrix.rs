//! Nuclear/spectral dual pair for real matrices via an in-repo one-sided
//! Jacobi SVD.
//!
//! Jacobi sweeps run in a fixed cyclic order until every pair of columns is
//! numerically orthogonal, which keeps results bit-stable across runs. The
//! soft/hard thresholding operators, the exact frontier and the matrix slope
//! decomposition all reuse the grouped factorization.

use crate::error::{Error, Result};
use crate::pair::{Decomposition, NormPair};
use crate::pareto::{CurveKind, Orientation, ParetoCurve, SlopeDecomposition, SVRegion};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(rows * cols, data.len(), "shape does not match data length");
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn scaled(&self, s: f64) -> Mat {
        Mat::new(self.rows, self.cols, self.data.iter().map(|x| s * x).collect())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Singular values grouped into multiplicity classes, with the factor
/// columns needed to rebuild `A = W · diag(σ) · Uᵀ`.
#[derive(Debug, Clone)]
pub struct SvGroups {
    /// Strictly decreasing distinct singular values (zeros excluded).
    pub lambdas: Vec<f64>,
    pub mults: Vec<usize>,
    /// All singular values, descending, including zeros.
    pub singular_values: Vec<f64>,
    /// Left factor, `rows × k`.
    pub w: Mat,
    /// Right factor, `cols × k`.
    pub u: Mat,
}

impl SvGroups {
    pub fn rank(&self) -> usize {
        self.lambdas
            .iter()
            .zip(&self.mults)
            .map(|(_, m)| m)
            .sum()
    }

    /// Rebuilds `W · diag(f(σ_i)) · Uᵀ` for a transformed spectrum.
    pub fn rebuild(&self, spectrum: &[f64]) -> Mat {
        let rows = self.w.rows();
        let cols = self.u.rows();
        let k = spectrum.len();
        let mut out = Mat::zeros(rows, cols);
        for t in 0..k {
            let s = spectrum[t];
            if s == 0.0 {
                continue;
            }
            for i in 0..rows {
                let wi = self.w[(i, t)] * s;
                if wi == 0.0 {
                    continue;
                }
                for j in 0..cols {
                    out[(i, j)] += wi * self.u[(j, t)];
                }
            }
        }
        out
    }
}

const JACOBI_TOL: f64 = 1e-12;
const GROUP_REL_TOL: f64 = 1e-8;

/// One-sided Jacobi SVD. Always converges; singular values within a relative
/// gap of `1e-8` are grouped into one multiplicity class.
pub fn svd(a: &Mat) -> SvGroups {
    // work on the tall orientation so column rotations see >= as many rows
    if a.rows < a.cols {
        let g = svd(&a.transpose());
        return SvGroups {
            lambdas: g.lambdas,
            mults: g.mults,
            singular_values: g.singular_values,
            w: g.u,
            u: g.w,
        };
    }
    let m = a.rows;
    let n = a.cols;
    let mut b = a.clone();
    let mut v = Mat::identity(n);
    let scale = a.frobenius();
    if scale == 0.0 || n == 0 {
        return SvGroups {
            lambdas: Vec::new(),
            mults: Vec::new(),
            singular_values: vec![0.0; n],
            w: Mat::zeros(m, n),
            u: Mat::zeros(n, n),
        };
    }
    let thresh = JACOBI_TOL * scale * scale;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    let bp = b[(i, p)];
                    let bq = b[(i, q)];
                    app += bp * bp;
                    aqq += bq * bq;
                    apq += bp * bq;
                }
                if apq.abs() <= thresh.min(JACOBI_TOL * (app * aqq).sqrt()) {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cos = 1.0 / (1.0 + t * t).sqrt();
                let sin = cos * t;
                for i in 0..m {
                    let bp = b[(i, p)];
                    let bq = b[(i, q)];
                    b[(i, p)] = cos * bp - sin * bq;
                    b[(i, q)] = sin * bp + cos * bq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = cos * vp - sin * vq;
                    v[(i, q)] = sin * vp + cos * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    // column norms are the singular values; sort descending
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| b[(i, j)] * b[(i, j)]).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&p, &q| norms[q].partial_cmp(&norms[p]).unwrap().then(p.cmp(&q)));

    let mut w = Mat::zeros(m, n);
    let mut u = Mat::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (t, &j) in order.iter().enumerate() {
        let s = norms[j];
        singular_values.push(s);
        if s > 0.0 {
            for i in 0..m {
                w[(i, t)] = b[(i, j)] / s;
            }
        }
        for i in 0..n {
            u[(i, t)] = v[(i, j)];
        }
    }
    // group values with small relative gaps
    let mut lambdas = Vec::new();
    let mut mults: Vec<usize> = Vec::new();
    for &s in &singular_values {
        if s <= GROUP_REL_TOL * singular_values[0].max(1e-300) {
            continue;
        }
        match lambdas.last() {
            Some(&last) if (last - s) <= GROUP_REL_TOL * last => {
                *mults.last_mut().unwrap() += 1;
            }
            _ => {
                lambdas.push(s);
                mults.push(1);
            }
        }
    }
    SvGroups {
        lambdas,
        mults,
        singular_values,
        w,
        u,
    }
}

/// The nuclear/spectral pair on `rows × cols` matrices, flattened row-major.
#[derive(Debug, Clone)]
pub struct NuclearSpectralPair {
    rows: usize,
    cols: usize,
}

pub fn nuclear_spectral_pair(rows: usize, cols: usize) -> NuclearSpectralPair {
    assert!(rows >= 1 && cols >= 1);
    NuclearSpectralPair { rows, cols }
}

impl NuclearSpectralPair {
    fn as_mat(&self, v: &[f64]) -> Mat {
        Mat::new(self.rows, self.cols, v.to_vec())
    }
}

impl NormPair for NuclearSpectralPair {
    fn name(&self) -> &str {
        "matrix"
    }

    fn dim(&self) -> usize {
        self.rows * self.cols
    }

    fn norm_x(&self, v: &[f64]) -> f64 {
        svd(&self.as_mat(v)).singular_values.iter().sum()
    }

    fn norm_y(&self, v: &[f64]) -> f64 {
        svd(&self.as_mat(v))
            .singular_values
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    fn proj_x(&self, c: &[f64], radius: f64) -> Vec<f64> {
        if radius <= 0.0 {
            return vec![0.0; c.len()];
        }
        let g = svd(&self.as_mat(c));
        let nuclear: f64 = g.singular_values.iter().sum();
        if nuclear <= radius {
            return c.to_vec();
        }
        let spectrum = crate::l1::project_l1_ball(&g.singular_values, radius);
        g.rebuild(&spectrum).into_data()
    }

    fn dual_argmax(&self, g: &[f64]) -> Vec<f64> {
        // rank-one top singular pair: nuclear-unit, attains the spectral norm
        let f = svd(&self.as_mat(g));
        let mut out = Mat::zeros(self.rows, self.cols);
        if f.singular_values.first().copied().unwrap_or(0.0) > 0.0 {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    out[(i, j)] = f.w[(i, 0)] * f.u[(j, 0)];
                }
            }
        } else {
            out[(0, 0)] = 1.0;
        }
        out.into_data()
    }

    fn dual_argmax_y(&self, g: &[f64]) -> Vec<f64> {
        // W·E·Uᵀ with E the identity block on the numerical rank:
        // spectral-unit, attains the nuclear norm
        let f = svd(&self.as_mat(g));
        let top = f.singular_values.first().copied().unwrap_or(0.0);
        let mut out = Mat::zeros(self.rows, self.cols);
        if top > 0.0 {
            let spectrum: Vec<f64> = f
                .singular_values
                .iter()
                .map(|&s| if s > 1e-12 * top { 1.0 } else { 0.0 })
                .collect();
            out = f.rebuild(&spectrum);
        } else {
            out[(0, 0)] = 1.0;
        }
        out.into_data()
    }
}

/// Soft thresholding of the spectrum: singular values above `y` shift down
/// by `y`, the rest move into the residual.
pub fn sv_soft_threshold(c: &Mat, y: f64) -> Result<Decomposition> {
    if y < 0.0 {
        return Err(Error::RadiusOutOfRange {
            radius: y,
            max: f64::INFINITY,
        });
    }
    let g = svd(c);
    let shifted: Vec<f64> = g
        .singular_values
        .iter()
        .map(|&s| (s - y).max(0.0))
        .collect();
    let a = g.rebuild(&shifted);
    let b_spec: Vec<f64> = g.singular_values.iter().map(|&s| s.min(y)).collect();
    let b = g.rebuild(&b_spec);
    let x: f64 = shifted.iter().sum();
    let y_val = b_spec.first().copied().unwrap_or(0.0);
    let ip: f64 = shifted
        .iter()
        .zip(&b_spec)
        .map(|(sa, sb)| sa * sb)
        .sum();
    Ok(Decomposition {
        a: a.into_data(),
        b: b.into_data(),
        x,
        y: y_val,
        gap: x * y_val - ip,
        certified: (x * y_val - ip).abs() <= 1e-9 * (1.0 + x * y_val),
    })
}

/// Hard thresholding: the truncated SVD keeping singular values above `y`.
pub fn sv_hard_threshold(c: &Mat, y: f64) -> Result<Mat> {
    if y < 0.0 {
        return Err(Error::RadiusOutOfRange {
            radius: y,
            max: f64::INFINITY,
        });
    }
    let g = svd(c);
    let kept: Vec<f64> = g
        .singular_values
        .iter()
        .map(|&s| if s > y { s } else { 0.0 })
        .collect();
    Ok(g.rebuild(&kept))
}

/// Exact slope decomposition of a nonzero matrix from its grouped SVD:
/// the j-th component is `(λ_j − λ_{j+1})` times the rank-`k_j` partial
/// isometry of the leading singular subspaces.
pub fn matrix_slope_decomposition(c: &Mat) -> Result<SlopeDecomposition> {
    let g = svd(c);
    if g.lambdas.is_empty() {
        return Err(Error::ZeroVector);
    }
    let r = g.lambdas.len();
    let mut components = Vec::with_capacity(r);
    let mut xs = Vec::with_capacity(r);
    let mut ys = Vec::with_capacity(r);
    let mut slopes = Vec::with_capacity(r);
    let mut k = 0usize;
    for j in 0..r {
        k += g.mults[j];
        let next = if j + 1 < r { g.lambdas[j + 1] } else { 0.0 };
        let gap = g.lambdas[j] - next;
        let spectrum: Vec<f64> = (0..g.singular_values.len())
            .map(|t| if t < k { gap } else { 0.0 })
            .collect();
        components.push(g.rebuild(&spectrum).into_data());
        xs.push(k as f64 * gap);
        ys.push(gap);
        slopes.push(1.0 / k as f64);
    }
    Ok(SlopeDecomposition {
        components,
        xs,
        ys,
        slopes,
    })
}

/// Exact piecewise-linear frontier `x(y) = Σ m_i·max(λ_i − y, 0)`.
pub fn matrix_frontier(c: &Mat) -> ParetoCurve {
    let g = svd(c);
    let eval = |y: f64| -> f64 {
        g.lambdas
            .iter()
            .zip(&g.mults)
            .map(|(&l, &m)| m as f64 * (l - y).max(0.0))
            .sum()
    };
    let mut points = Vec::new();
    if g.lambdas.is_empty() {
        points.push((0.0, 0.0));
    } else {
        points.push((0.0, g.lambdas[0]));
        for k in 1..g.lambdas.len() {
            points.push((eval(g.lambdas[k]), g.lambdas[k]));
        }
        points.push((eval(0.0), 0.0));
    }
    ParetoCurve::from_points(CurveKind::Frontier, Orientation::XOfY, points)
}

/// Exact singular-value region: bars `(λ_i, m_i)`.
pub fn matrix_sv_region(c: &Mat) -> SVRegion {
    let g = svd(c);
    let bars: Vec<(f64, f64)> = g
        .lambdas
        .iter()
        .zip(&g.mults)
        .map(|(&l, &m)| (l, m as f64))
        .collect();
    let total_area = bars.iter().map(|&(l, m)| l * m).sum();
    SVRegion {
        bars: Some(bars),
        sampled: Vec::new(),
        total_area,
    }
}
