//! Pushforward (quotient) norm pairs built from a linear map and a base
//! pair, and the denoising problems they power: LASSO, basis-pursuit
//! denoising, the Dantzig selector, 2D total variation, trend filtering and
//! masked low-rank completion.
//!
//! The workhorse is [`ista_proj`]: iterative shrinkage-thresholding for the
//! Euclidean projection onto `{D e : ‖e‖_X̄ ≤ x}`, terminated by the duality
//! certificate `⟨De, c−De⟩ > δ·‖e‖_X̄·‖D*(c−De)‖_Ȳ`.

use crate::error::{Error, Result};
use crate::l1::{l1_pair, L1Pair};
use crate::matrix::{nuclear_spectral_pair, Mat, NuclearSpectralPair};
use crate::pair::{check_x2, Decomposition, NormPair};
use crate::simplex::{min_l1_preimage, min_linf_preimage, LpProblem};
use crate::space::{axpy, inner, norm2, sub};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// A linear map with its adjoint.
pub trait LinearMap {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn apply(&self, v: &[f64]) -> Vec<f64>;
    fn adjoint(&self, w: &[f64]) -> Vec<f64>;
}

/// Dense row-major map `out_dim × in_dim`.
#[derive(Debug, Clone)]
pub struct DenseMap {
    mat: Mat,
}

impl DenseMap {
    pub fn new(mat: Mat) -> Self {
        DenseMap { mat }
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn rows_as_vecs(&self) -> Vec<Vec<f64>> {
        (0..self.mat.rows())
            .map(|i| (0..self.mat.cols()).map(|j| self.mat[(i, j)]).collect())
            .collect()
    }
}

impl LinearMap for DenseMap {
    fn in_dim(&self) -> usize {
        self.mat.cols()
    }

    fn out_dim(&self) -> usize {
        self.mat.rows()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.mat.cols());
        (0..self.mat.rows())
            .map(|i| (0..self.mat.cols()).map(|j| self.mat[(i, j)] * v[j]).sum())
            .collect()
    }

    fn adjoint(&self, w: &[f64]) -> Vec<f64> {
        assert_eq!(w.len(), self.mat.rows());
        (0..self.mat.cols())
            .map(|j| (0..self.mat.rows()).map(|i| self.mat[(i, j)] * w[i]).sum())
            .collect()
    }
}

/// Rank by Gaussian elimination with partial pivoting.
pub fn rank(mat: &Mat, tol: f64) -> usize {
    let mut a = mat.clone();
    let (m, n) = (a.rows(), a.cols());
    let mut rank = 0;
    let mut row = 0;
    for col in 0..n {
        if row >= m {
            break;
        }
        let mut piv = row;
        for i in row + 1..m {
            if a[(i, col)].abs() > a[(piv, col)].abs() {
                piv = i;
            }
        }
        if a[(piv, col)].abs() <= tol {
            continue;
        }
        for j in 0..n {
            let tmp = a[(row, j)];
            a[(row, j)] = a[(piv, j)];
            a[(piv, j)] = tmp;
        }
        for i in 0..m {
            if i != row && a[(i, col)] != 0.0 {
                let f = a[(i, col)] / a[(row, col)];
                for j in 0..n {
                    a[(i, j)] -= f * a[(row, j)];
                }
            }
        }
        row += 1;
        rank += 1;
    }
    rank
}

/// Power-iteration estimate of the spectral norm (fixed seed, 20 sweeps),
/// padded by 2% so the rescaled map stays inside the unit spectral ball.
pub fn op_norm_bound(map: &dyn LinearMap) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let mut v: Vec<f64> = (0..map.in_dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut sigma = 0.0;
    for _ in 0..20 {
        let w = map.apply(&v);
        sigma = norm2(&w);
        let back = map.adjoint(&w);
        let n = norm2(&back);
        if n == 0.0 {
            return 1.0;
        }
        v = back.iter().map(|x| x / n).collect();
    }
    (sigma.max(1e-12)) * 1.02
}

/// How an ISTA projection run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IstaCertificate {
    /// `⟨De, c−De⟩ > δ·‖e‖_X̄·‖D*(c−De)‖_Ȳ` at exit.
    Gap { lhs: f64, rhs: f64 },
    /// Residual vanished: `c` lies inside the ball.
    Interior,
    /// Radius was zero.
    ZeroRadius,
}

#[derive(Debug, Clone)]
pub struct IstaResult {
    /// Coefficients `e` in the domain of `D`.
    pub coefficients: Vec<f64>,
    /// The projection `De`.
    pub point: Vec<f64>,
    pub iterations: usize,
    pub certificate: IstaCertificate,
}

pub const ISTA_MAX_ITERS: usize = 100_000;
/// Accuracy flag of the certificate; the closer to 1, the more accurate.
pub const ISTA_DEFAULT_DELTA: f64 = 0.999;
/// Tight certificate used by the norm-pair projection paths, where the
/// projection accuracy scales like `√(1 − δ)`.
pub const ISTA_TIGHT_DELTA: f64 = 1.0 - 1e-9;

/// Euclidean projection of `c` onto `{D e : ‖e‖_X̄ ≤ x}` by projected
/// gradient steps `e ← proj_X̄(2·D*(c−De) + e, x)`. Requires the singular
/// values of `D` inside `[0, 1]` (rescale first) and `0 < delta < 1`.
pub fn ista_proj(
    map: &dyn LinearMap,
    base: &dyn NormPair,
    c: &[f64],
    x: f64,
    delta: f64,
) -> Result<IstaResult> {
    if !(0.0..1.0).contains(&delta) || delta == 0.0 {
        return Err(Error::InvalidInput("delta must be in (0, 1)".into()));
    }
    if x < 0.0 {
        return Err(Error::RadiusOutOfRange {
            radius: x,
            max: f64::INFINITY,
        });
    }
    if x == 0.0 {
        return Ok(IstaResult {
            coefficients: vec![0.0; map.in_dim()],
            point: vec![0.0; map.out_dim()],
            iterations: 0,
            certificate: IstaCertificate::ZeroRadius,
        });
    }
    let c_scale = 1.0 + norm2(c);
    let mut e = vec![0.0; map.in_dim()];
    for it in 0..ISTA_MAX_ITERS {
        let a = map.apply(&e);
        let r = sub(c, &a);
        if norm2(&r) <= 1e-13 * c_scale {
            return Ok(IstaResult {
                coefficients: e,
                point: a,
                iterations: it,
                certificate: IstaCertificate::Interior,
            });
        }
        let back = map.adjoint(&r);
        let lhs = inner(&a, &r)?;
        let rhs = delta * base.norm_x(&e) * base.norm_y(&back);
        if it > 0 && lhs > rhs {
            return Ok(IstaResult {
                coefficients: e,
                point: a,
                iterations: it,
                certificate: IstaCertificate::Gap { lhs, rhs },
            });
        }
        e = base.proj_x(&axpy(&e, 2.0, &back), x);
    }
    Err(Error::IterationCap(ISTA_MAX_ITERS))
}

const LP_ENTRY_CAP: usize = 400;

/// Quotient pair over a surjective dense map with the `ℓ1` base:
/// `‖c‖_X = min{‖v‖₁ : Dv = c}` and `‖c‖_Y = ‖D*c‖_∞`.
#[derive(Debug, Clone)]
pub struct QuotientPair {
    map: DenseMap,
    scaled: Mat,
    scale: f64,
    base: L1Pair,
    delta: f64,
}

pub fn quotient_pair(d: Mat) -> Result<QuotientPair> {
    QuotientPair::new(d, ISTA_TIGHT_DELTA)
}

impl QuotientPair {
    pub fn new(d: Mat, delta: f64) -> Result<Self> {
        let out = d.rows();
        let r = rank(&d, 1e-10);
        if r < out {
            return Err(Error::RankDeficient {
                rank: r,
                required: out,
            });
        }
        let map = DenseMap::new(d.clone());
        let scale = op_norm_bound(&map);
        let scaled = d.scaled(1.0 / scale);
        let base = l1_pair(d.cols());
        Ok(QuotientPair {
            map,
            scaled,
            scale,
            base,
            delta,
        })
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn map(&self) -> &DenseMap {
        &self.map
    }

    fn lp_exact(&self) -> bool {
        self.map.mat().rows() * self.map.mat().cols() <= LP_ENTRY_CAP
    }

    /// Coefficient-space projection: also returns `e` with `De = proj`.
    pub fn proj_with_coefficients(&self, c: &[f64], radius: f64) -> Result<IstaResult> {
        // D/s with radius s·x spans the same ball as D with radius x
        let scaled_map = DenseMap::new(self.scaled.clone());
        let mut res = ista_proj(&scaled_map, &self.base, c, radius * self.scale, self.delta)?;
        res.coefficients.iter_mut().for_each(|v| *v /= self.scale);
        Ok(res)
    }
}

impl NormPair for QuotientPair {
    fn name(&self) -> &str {
        "quotient-l1"
    }

    fn dim(&self) -> usize {
        self.map.out_dim()
    }

    fn norm_x(&self, v: &[f64]) -> f64 {
        if self.lp_exact() {
            min_l1_preimage(&self.rows_cache(), v)
                .map(|(_, n)| n)
                .unwrap_or(f64::NAN)
        } else {
            // certified upper bound: smallest radius whose ball projection
            // reproduces v
            let mut hi = self.base.norm_x(&self.map.adjoint(v)) * self.map.in_dim() as f64;
            if hi == 0.0 {
                return 0.0;
            }
            let mut lo = 0.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let res = self.proj_with_coefficients(v, mid).expect("ista");
                if norm2(&sub(v, &res.point)) <= 1e-9 * (1.0 + norm2(v)) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        }
    }

    fn norm_y(&self, v: &[f64]) -> f64 {
        self.map
            .adjoint(v)
            .iter()
            .fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    fn proj_x(&self, c: &[f64], radius: f64) -> Vec<f64> {
        if radius <= 0.0 {
            return vec![0.0; c.len()];
        }
        self.proj_with_coefficients(c, radius)
            .map(|r| r.point)
            .expect("ista projection failed")
    }

    fn dual_argmax(&self, g: &[f64]) -> Vec<f64> {
        // lift the base witness through the map
        let w_bar = self.base.dual_argmax(&self.map.adjoint(g));
        self.map.apply(&w_bar)
    }

    fn dual_argmax_y(&self, g: &[f64]) -> Vec<f64> {
        // dual of the basis-pursuit program: max ⟨g,w⟩ with ‖D*w‖_∞ ≤ 1
        let n = self.map.out_dim();
        let m = self.map.in_dim();
        // variables: w = p − q (2n), slack rows for ±(D*w) ≤ 1 (2m)
        let cols = 2 * n + 2 * m;
        let mut lp = LpProblem::new(cols);
        let mut obj = vec![0.0; cols];
        for i in 0..n {
            obj[i] = -g[i];
            obj[n + i] = g[i];
        }
        lp.set_objective(&obj);
        for j in 0..m {
            for (sign, offset) in [(1.0, 0), (-1.0, 1)] {
                let mut row = vec![0.0; cols];
                for i in 0..n {
                    row[i] = sign * self.map.mat()[(i, j)];
                    row[n + i] = -sign * self.map.mat()[(i, j)];
                }
                row[2 * n + 2 * j + offset] = 1.0;
                lp.add_eq(row, 1.0);
            }
        }
        let sol = lp.solve().expect("dual witness LP");
        (0..n).map(|i| sol.x[i] - sol.x[n + i]).collect()
    }
}

impl QuotientPair {
    fn rows_cache(&self) -> Vec<Vec<f64>> {
        self.map.rows_as_vecs()
    }
}

/// LASSO: `min ‖c − Av‖₂` under `‖v‖₁ ≤ x`, returned as the certified
/// decomposition of `c` under the quotient pair of `A`.
pub fn lasso(a: &Mat, c: &[f64], x: f64) -> Result<Decomposition> {
    let pair = quotient_pair(a.clone())?;
    let res = pair.proj_with_coefficients(c, x)?;
    let b = sub(c, &res.point);
    check_x2(&pair, &res.point, &b, 1e-6)
}

/// Basis-pursuit denoising: `min ‖v‖₁` under `‖Av − c‖₂ ≤ y`, via bisection
/// of the radius against the residual level.
pub fn bpdn(a: &Mat, c: &[f64], y: f64) -> Result<Decomposition> {
    let c2 = norm2(c);
    if y > c2 + 1e-12 * (1.0 + c2) {
        return Err(Error::RadiusOutOfRange { radius: y, max: c2 });
    }
    let pair = quotient_pair(a.clone())?;
    if y >= c2 {
        return check_x2(&pair, &vec![0.0; c.len()], c, 1e-6);
    }
    let mut lo = 0.0f64;
    let mut hi = pair.norm_x(c);
    let mut best = pair.proj_x(c, hi);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        let p = pair.proj_x(c, mid);
        let resid = norm2(&sub(c, &p));
        if resid <= y {
            best = p;
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let b = sub(c, &best);
    check_x2(&pair, &best, &b, 1e-6)
}

const DANTZIG_ENTRY_CAP: usize = 400;

/// Dantzig selector: `min ‖v‖₁` under `‖A*(Av − c)‖_∞ ≤ y`, solved as a
/// dense LP at desk scale.
pub fn dantzig(a: &Mat, c: &[f64], y: f64) -> Result<Vec<f64>> {
    if y < 0.0 {
        return Err(Error::RadiusOutOfRange {
            radius: y,
            max: f64::INFINITY,
        });
    }
    let (n, m) = (a.rows(), a.cols());
    if n * m > DANTZIG_ENTRY_CAP {
        return Err(Error::SizeCap {
            got: n * m,
            cap: DANTZIG_ENTRY_CAP,
        });
    }
    let ata = a.transpose().matmul(a);
    let atc = DenseMap::new(a.transpose().clone()).apply(c);
    // variables: v = p − q (2m) and slacks for the 2m band rows
    let cols = 2 * m + 2 * m;
    let mut lp = LpProblem::new(cols);
    lp.set_objective(
        &(0..cols)
            .map(|j| if j < 2 * m { 1.0 } else { 0.0 })
            .collect::<Vec<_>>(),
    );
    for i in 0..m {
        for (sign, offset) in [(1.0, 0usize), (-1.0, 1usize)] {
            let mut row = vec![0.0; cols];
            for j in 0..m {
                row[j] = sign * ata[(i, j)];
                row[m + j] = -sign * ata[(i, j)];
            }
            row[2 * m + 2 * i + offset] = 1.0;
            lp.add_eq(row, y + sign * atc[i]);
        }
    }
    let sol = lp.solve()?;
    Ok((0..m).map(|j| sol.x[j] - sol.x[m + j]).collect())
}

// ---------------------------------------------------------------------------
// 2D total variation

/// Forward differences of an image: `(d, e)` with `d_{i,j} = c_{i,j} −
/// c_{i,j+1}` (size `m×(n−1)`) and `e_{i,j} = c_{i,j} − c_{i+1,j}`
/// (size `(m−1)×n`).
pub fn grad2d(img: &Mat) -> (Mat, Mat) {
    let (m, n) = (img.rows(), img.cols());
    let mut d = Mat::zeros(m, n.saturating_sub(1));
    let mut e = Mat::zeros(m.saturating_sub(1), n);
    for i in 0..m {
        for j in 0..n.saturating_sub(1) {
            d[(i, j)] = img[(i, j)] - img[(i, j + 1)];
        }
    }
    for i in 0..m.saturating_sub(1) {
        for j in 0..n {
            e[(i, j)] = img[(i, j)] - img[(i + 1, j)];
        }
    }
    (d, e)
}

/// Adjoint of [`grad2d`] with zero boundary conventions.
pub fn grad2d_adjoint(d: &Mat, e: &Mat) -> Mat {
    let m = e.rows() + 1;
    let n = d.cols() + 1;
    let mut out = Mat::zeros(m, n);
    let dd = |i: usize, j: usize| -> f64 {
        if j < d.cols() {
            d[(i, j)]
        } else {
            0.0
        }
    };
    let ee = |i: usize, j: usize| -> f64 {
        if i < e.rows() {
            e[(i, j)]
        } else {
            0.0
        }
    };
    for i in 0..m {
        for j in 0..n {
            let mut v = dd(i, j) + ee(i, j);
            if j > 0 {
                v -= dd(i, j - 1);
            }
            if i > 0 {
                v -= ee(i - 1, j);
            }
            out[(i, j)] = v;
        }
    }
    out
}

/// Anisotropic total variation `‖F c‖₁` of an image.
pub fn tv2d_norm(img: &Mat) -> f64 {
    let (d, e) = grad2d(img);
    d.data().iter().map(|x| x.abs()).sum::<f64>() + e.data().iter().map(|x| x.abs()).sum::<f64>()
}

/// Number of 4-connected constant regions minus one.
pub fn gsparse_2d(img: &Mat) -> Result<usize> {
    let (m, n) = (img.rows(), img.cols());
    let first = img[(0, 0)];
    if img.data().iter().all(|&x| x == first) {
        return Err(Error::InvalidInput(
            "constant image has no geometric sparsity".into(),
        ));
    }
    let mut seen = vec![false; m * n];
    let mut regions = 0usize;
    let mut stack = Vec::new();
    for start in 0..m * n {
        if seen[start] {
            continue;
        }
        regions += 1;
        stack.push(start);
        seen[start] = true;
        while let Some(p) = stack.pop() {
            let (i, j) = (p / n, p % n);
            let v = img[(i, j)];
            let mut push = |q: usize, w: f64| {
                if !seen[q] && w == v {
                    seen[q] = true;
                    stack.push(q);
                }
            };
            if i > 0 {
                push(p - n, img[(i - 1, j)]);
            }
            if i + 1 < m {
                push(p + n, img[(i + 1, j)]);
            }
            if j > 0 {
                push(p - 1, img[(i, j - 1)]);
            }
            if j + 1 < n {
                push(p + 1, img[(i, j + 1)]);
            }
        }
    }
    Ok(regions - 1)
}

const TV2D_LP_CAP: usize = 144;

/// The 2D total-variation pair on zero-mean `rows × cols` images
/// (flattened row-major): `‖c‖_X = ‖F c‖₁` and
/// `‖c‖_Y = min{‖(d,e)‖_∞ : F*(d,e) = c}`.
#[derive(Debug, Clone)]
pub struct Tv2dPair {
    rows: usize,
    cols: usize,
    fstar: DenseMap,
    scale: f64,
    delta: f64,
}

pub fn tv2d_pair(rows: usize, cols: usize) -> Result<Tv2dPair> {
    if rows * cols > TV2D_LP_CAP {
        return Err(Error::SizeCap {
            got: rows * cols,
            cap: TV2D_LP_CAP,
        });
    }
    if rows * cols < 2 {
        return Err(Error::InvalidInput("image too small".into()));
    }
    // dense matrix of F*: (rows·cols) × (#d + #e)
    let nd = rows * (cols - 1);
    let ne = (rows - 1) * cols;
    let mut f = Mat::zeros(rows * cols, nd + ne);
    for t in 0..nd + ne {
        let mut w = vec![0.0; nd + ne];
        w[t] = 1.0;
        let d = Mat::new(rows, cols - 1, w[..nd].to_vec());
        let e = Mat::new(rows - 1, cols, w[nd..].to_vec());
        let col = grad2d_adjoint(&d, &e);
        for (i, &v) in col.data().iter().enumerate() {
            f[(i, t)] = v;
        }
    }
    let fstar = DenseMap::new(f);
    let scale = op_norm_bound(&fstar);
    Ok(Tv2dPair {
        rows,
        cols,
        fstar,
        scale,
        delta: ISTA_TIGHT_DELTA,
    })
}

impl Tv2dPair {
    fn zero_mean(&self, v: &[f64]) -> Vec<f64> {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| x - mean).collect()
    }

    fn as_mat(&self, v: &[f64]) -> Mat {
        Mat::new(self.rows, self.cols, v.to_vec())
    }

    /// Projection onto the pushforward Y-ball `{F*w : ‖w‖_∞ ≤ level}`.
    fn proj_y_ball(&self, c: &[f64], level: f64) -> Vec<f64> {
        if level <= 0.0 {
            return vec![0.0; c.len()];
        }
        let scaled = DenseMap::new(self.fstar.mat().scaled(1.0 / self.scale));
        let base = LinfPair {
            n: self.fstar.in_dim(),
        };
        ista_proj(&scaled, &base, c, level * self.scale, self.delta)
            .expect("ista on the Y ball")
            .point
    }
}

impl NormPair for Tv2dPair {
    fn name(&self) -> &str {
        "tv2d"
    }

    fn dim(&self) -> usize {
        self.rows * self.cols
    }

    fn norm_x(&self, v: &[f64]) -> f64 {
        tv2d_norm(&self.as_mat(&self.zero_mean(v)))
    }

    fn norm_y(&self, v: &[f64]) -> f64 {
        let c = self.zero_mean(v);
        if c.iter().all(|&x| x == 0.0) {
            return 0.0;
        }
        let rows = self.fstar.rows_as_vecs();
        min_linf_preimage(&rows, &c).expect("image is zero-mean").1
    }

    fn proj_x(&self, c: &[f64], radius: f64) -> Vec<f64> {
        let c = self.zero_mean(c);
        if radius <= 0.0 {
            return vec![0.0; c.len()];
        }
        if self.norm_x(&c) <= radius {
            return c;
        }
        // bisect the residual level; the a-side of each split is the
        // projection at its own radius
        let mut lo = 0.0;
        let mut hi = self.norm_y(&c);
        let mut best = vec![0.0; c.len()];
        for _ in 0..50 {
            let level = 0.5 * (lo + hi);
            let q = self.proj_y_ball(&c, level);
            let a = sub(&c, &q);
            let x_val = self.norm_x(&a);
            if x_val <= radius {
                best = a;
                hi = level;
                if radius - x_val <= 1e-9 * (1.0 + radius) {
                    break;
                }
            } else {
                lo = level;
            }
        }
        best
    }

    fn dual_argmax(&self, g: &[f64]) -> Vec<f64> {
        // max ⟨g,u⟩ subject to ‖Fu‖₁ ≤ 1, as a dense LP
        let g = self.zero_mean(g);
        let mn = self.rows * self.cols;
        let ng = self.fstar.in_dim();
        // variables: u = p − q (2mn), t (ng), slacks for ±(Fu) ≤ t (2ng)
        let cols = 2 * mn + ng + 2 * ng;
        let mut lp = LpProblem::new(cols);
        let mut obj = vec![0.0; cols];
        for i in 0..mn {
            obj[i] = -g[i];
            obj[mn + i] = g[i];
        }
        lp.set_objective(&obj);
        // F = (F*)ᵀ
        for r in 0..ng {
            for (sign, offset) in [(1.0, 0usize), (-1.0, 1usize)] {
                let mut row = vec![0.0; cols];
                for i in 0..mn {
                    let f_ri = self.fstar.mat()[(i, r)];
                    row[i] = sign * f_ri;
                    row[mn + i] = -sign * f_ri;
                }
                row[2 * mn + r] = -1.0;
                row[2 * mn + ng + 2 * r + offset] = 1.0;
                lp.add_eq(row, 0.0);
            }
        }
        // Σ t = 1
        let mut row = vec![0.0; cols];
        for r in 0..ng {
            row[2 * mn + r] = 1.0;
        }
        lp.add_eq(row, 1.0);
        let sol = lp.solve().expect("tv2d dual witness LP");
        (0..mn).map(|i| sol.x[i] - sol.x[mn + i]).collect()
    }

    fn dual_argmax_y(&self, g: &[f64]) -> Vec<f64> {
        // F* of the sign pattern of F g
        let g = self.zero_mean(g);
        let (d, e) = grad2d(&self.as_mat(&g));
        let sgn = |m: &Mat| -> Mat {
            Mat::new(
                m.rows(),
                m.cols(),
                m.data()
                    .iter()
                    .map(|&x| if x > 0.0 { 1.0 } else { -1.0 })
                    .collect(),
            )
        };
        grad2d_adjoint(&sgn(&d), &sgn(&e)).into_data()
    }
}

/// The `ℓ∞`/`ℓ1` pair (swapped roles of the `ℓ1` pair); base pair for the
/// 2D-TV Y-ball projections.
#[derive(Debug, Clone)]
struct LinfPair {
    n: usize,
}

impl NormPair for LinfPair {
    fn name(&self) -> &str {
        "linf"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn norm_x(&self, v: &[f64]) -> f64 {
        v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    fn norm_y(&self, v: &[f64]) -> f64 {
        v.iter().map(|x| x.abs()).sum()
    }

    fn proj_x(&self, c: &[f64], radius: f64) -> Vec<f64> {
        c.iter().map(|&x| x.clamp(-radius, radius)).collect()
    }

    fn dual_argmax(&self, g: &[f64]) -> Vec<f64> {
        g.iter().map(|&x| if x > 0.0 { 1.0 } else { -1.0 }).collect()
    }

    fn dual_argmax_y(&self, g: &[f64]) -> Vec<f64> {
        crate::l1::l1_pair(self.n).dual_argmax(g)
    }
}

// ---------------------------------------------------------------------------
// Trend filtering

/// Applies the k-th discrete derivative (k-fold forward difference).
pub fn diff_k(v: &[f64], k: usize) -> Vec<f64> {
    let mut cur = v.to_vec();
    for _ in 0..k {
        cur = crate::tv1d::diff(&cur);
    }
    cur
}

/// Trend-filter pair of order `k` on the moment-zero subspace
/// `V ⊂ ℝ^{n+k}`: `‖v‖_X = ‖D^{(k)} v‖₁` realized as the quotient norm of
/// the `ℓ1` base through the section `S = (D^{(k)}|_V)^{-1}`.
#[derive(Debug, Clone)]
pub struct TrendFilterPair {
    n: usize,
    k: usize,
    /// Orthonormal basis of the kernel of `D^{(k)}` (discrete polynomials).
    kernel_basis: Vec<Vec<f64>>,
    /// Dense section matrix `(n+k) × n`, mapping derivatives back into `V`.
    section: DenseMap,
    scale: f64,
    delta: f64,
}

pub fn trend_filter_pair(n: usize, k: usize) -> Result<TrendFilterPair> {
    if k < 1 || n < 1 {
        return Err(Error::InvalidInput("need n >= 1 and k >= 1".into()));
    }
    let len = n + k;
    // orthonormalize the polynomial kernel i^d, d = 0..k-1
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for d in 0..k {
        let mut v: Vec<f64> = (0..len).map(|i| ((i + 1) as f64).powi(d as i32)).collect();
        for q in &basis {
            let ip = inner(&v, q).unwrap();
            v = axpy(&v, -ip, q);
        }
        let nv = norm2(&v);
        basis.push(v.iter().map(|x| x / nv).collect());
    }
    let project = |v: &[f64]| -> Vec<f64> {
        let mut out = v.to_vec();
        for q in &basis {
            let ip = inner(&out, q).unwrap();
            out = axpy(&out, -ip, q);
        }
        out
    };
    // section columns: integrate the unit impulses k times, then project
    let mut s = Mat::zeros(len, n);
    for j in 0..n {
        let mut col = vec![0.0; n];
        col[j] = 1.0;
        for _ in 0..k {
            // a preimage under diff: cumulative sums anchored at zero
            col = crate::tv1d::cumsum_lift(&col);
        }
        let col = project(&col);
        for (i, &v) in col.iter().enumerate() {
            s[(i, j)] = v;
        }
    }
    let section = DenseMap::new(s);
    let scale = op_norm_bound(&section);
    Ok(TrendFilterPair {
        n,
        k,
        kernel_basis: basis,
        section,
        scale,
        delta: ISTA_TIGHT_DELTA,
    })
}

impl TrendFilterPair {
    /// Orthogonal projection onto the moment-zero subspace `V`.
    pub fn project_domain(&self, v: &[f64]) -> Vec<f64> {
        let mut out = v.to_vec();
        for q in &self.kernel_basis {
            let ip = inner(&out, q).unwrap();
            out = axpy(&out, -ip, q);
        }
        out
    }

    pub fn order(&self) -> usize {
        self.k
    }
}

impl NormPair for TrendFilterPair {
    fn name(&self) -> &str {
        "trend"
    }

    fn dim(&self) -> usize {
        self.n + self.k
    }

    fn norm_x(&self, v: &[f64]) -> f64 {
        diff_k(&self.project_domain(v), self.k)
            .iter()
            .map(|x| x.abs())
            .sum()
    }

    fn norm_y(&self, v: &[f64]) -> f64 {
        self.section
            .adjoint(&self.project_domain(v))
            .iter()
            .fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    fn proj_x(&self, c: &[f64], radius: f64) -> Vec<f64> {
        let c = self.project_domain(c);
        if radius <= 0.0 {
            return vec![0.0; c.len()];
        }
        let scaled = DenseMap::new(self.section.mat().scaled(1.0 / self.scale));
        let base = l1_pair(self.n);
        ista_proj(&scaled, &base, &c, radius * self.scale, self.delta)
            .expect("trend filter ista")
            .point
    }

    fn dual_argmax(&self, g: &[f64]) -> Vec<f64> {
        let g = self.project_domain(g);
        let w_bar = l1_pair(self.n).dual_argmax(&self.section.adjoint(&g));
        self.section.apply(&w_bar)
    }

    fn dual_argmax_y(&self, g: &[f64]) -> Vec<f64> {
        // (D^{(k)})* applied to the sign pattern of D^{(k)} g stays in V
        let g = self.project_domain(g);
        let signs: Vec<f64> = diff_k(&g, self.k)
            .iter()
            .map(|&x| if x > 0.0 { 1.0 } else { -1.0 })
            .collect();
        let mut out = signs;
        for _ in 0..self.k {
            out = crate::tv1d::diff_adjoint(&out);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Masked low-rank completion

/// Entrywise mask projector, scaled by `gain` so the singular values stay
/// strictly inside the unit interval required by the ISTA iteration.
#[derive(Debug, Clone)]
pub struct MaskMap {
    observed: Vec<bool>,
    gain: f64,
}

impl MaskMap {
    pub fn new(observed: Vec<bool>) -> Self {
        MaskMap {
            observed,
            gain: 1.0,
        }
    }

    fn with_gain(observed: Vec<bool>, gain: f64) -> Self {
        MaskMap { observed, gain }
    }

    /// The unscaled projection onto the observed support.
    pub fn keep_observed(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .zip(&self.observed)
            .map(|(&x, &keep)| if keep { x } else { 0.0 })
            .collect()
    }
}

impl LinearMap for MaskMap {
    fn in_dim(&self) -> usize {
        self.observed.len()
    }

    fn out_dim(&self) -> usize {
        self.observed.len()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .zip(&self.observed)
            .map(|(&x, &keep)| if keep { self.gain * x } else { 0.0 })
            .collect()
    }

    fn adjoint(&self, w: &[f64]) -> Vec<f64> {
        self.apply(w)
    }
}

/// The masked-completion pair on observed-support matrices:
/// `‖c‖_X = min{‖M‖_* : M observed-equal to c}` and `‖c‖_Y = ‖π(c)‖_σ`.
/// X-norm values are certified ISTA upper bounds; desk scale only.
#[derive(Debug, Clone)]
pub struct MatrixCompletionPair {
    rows: usize,
    cols: usize,
    mask: MaskMap,
    base: NuclearSpectralPair,
    delta: f64,
}

const MASK_GAIN: f64 = 1.0 / 1.02;

pub fn matrix_completion_pair(rows: usize, cols: usize, observed: Vec<bool>) -> Result<MatrixCompletionPair> {
    if observed.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            expected: rows * cols,
            got: observed.len(),
        });
    }
    Ok(MatrixCompletionPair {
        rows,
        cols,
        mask: MaskMap::with_gain(observed, MASK_GAIN),
        base: nuclear_spectral_pair(rows, cols),
        delta: ISTA_TIGHT_DELTA,
    })
}

impl NormPair for MatrixCompletionPair {
    fn name(&self) -> &str {
        "matrix-completion"
    }

    fn dim(&self) -> usize {
        self.rows * self.cols
    }

    fn norm_x(&self, v: &[f64]) -> f64 {
        let v = self.mask.keep_observed(v);
        if v.iter().all(|&x| x == 0.0) {
            return 0.0;
        }
        let mut hi = self.base.norm_x(&v);
        let mut lo = 0.0;
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            let p = ista_proj(&self.mask, &self.base, &v, mid / MASK_GAIN, self.delta)
                .map(|r| r.point)
                .unwrap_or_else(|_| vec![0.0; v.len()]);
            if norm2(&sub(&v, &p)) <= 1e-7 * (1.0 + norm2(&v)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    fn norm_y(&self, v: &[f64]) -> f64 {
        self.base.norm_y(&self.mask.keep_observed(v))
    }

    fn proj_x(&self, c: &[f64], radius: f64) -> Vec<f64> {
        let c = self.mask.keep_observed(c);
        if radius <= 0.0 {
            return vec![0.0; c.len()];
        }
        ista_proj(&self.mask, &self.base, &c, radius / MASK_GAIN, self.delta)
            .expect("mask ista")
            .point
    }

    fn dual_argmax(&self, g: &[f64]) -> Vec<f64> {
        // the mask is a contraction of the nuclear ball, so the base witness
        // restricted to the observed support attains the value
        self.mask
            .keep_observed(&self.base.dual_argmax(&self.mask.keep_observed(g)))
    }

    fn dual_argmax_y(&self, g: &[f64]) -> Vec<f64> {
        self.mask
            .keep_observed(&self.base.dual_argmax_y(&self.mask.keep_observed(g)))
    }
}
