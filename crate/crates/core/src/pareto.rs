//! Generic Pareto-curve engines over any [`NormPair`].
//!
//! The sub-frontier `h` is traced with the pair's Euclidean ball projection
//! alone. The frontier `f` needs its own solver: Frank–Wolfe driven by the
//! dual-argmax linear minimization oracle, warm-started at the projection
//! (so `f ≤ h` holds by construction), with a projected-subgradient polish
//! for polyhedral pairs where Frank–Wolfe stalls.

use crate::error::{Error, Result};
use crate::pair::{check_x2, Decomposition, NormPair};
use crate::space::{axpy, inner, is_zero, norm2_sq, scale, sub};

/// Whether a curve claims frontier (convex) or sub-frontier shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Frontier,
    Subfrontier,
}

/// Which coordinate was swept when producing the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    YOfX,
    XOfY,
}

/// A sampled or exact monotone curve in the `(‖a‖_X, ‖b‖_Y)` plane.
/// Points are kept sorted by increasing `x` (decreasing `y`).
#[derive(Debug, Clone)]
pub struct ParetoCurve {
    pub kind: CurveKind,
    pub orientation: Orientation,
    pub points: Vec<(f64, f64)>,
    /// Indices of slope-change points, when known exactly.
    pub breakpoints: Option<Vec<usize>>,
    /// Grid indices where the frontier solver failed to certify convergence.
    pub unconverged: Vec<usize>,
}

impl ParetoCurve {
    pub fn from_points(
        kind: CurveKind,
        orientation: Orientation,
        mut points: Vec<(f64, f64)>,
    ) -> Self {
        points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        ParetoCurve {
            kind,
            orientation,
            points,
            breakpoints: None,
            unconverged: Vec::new(),
        }
    }

    pub fn x_max(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.0)
    }

    pub fn y_max(&self) -> f64 {
        self.points.first().map_or(0.0, |p| p.1)
    }

    /// Piecewise-linear interpolation of `y` at `x`, clamped to the ends.
    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.points;
        if pts.is_empty() {
            return 0.0;
        }
        if x <= pts[0].0 {
            return pts[0].1;
        }
        if x >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        let idx = pts.partition_point(|p| p.0 < x);
        let (x0, y0) = pts[idx - 1];
        let (x1, y1) = pts[idx];
        if x1 == x0 {
            return y0.min(y1);
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Trapezoid area under the curve.
    pub fn trapezoid_area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
            .sum()
    }

    /// Checks monotonicity and, for frontier curves, discrete convexity.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for w in self.points.windows(2) {
            if w[1].0 < w[0].0 - tol || w[1].1 > w[0].1 + tol {
                return Err(Error::InvalidInput(
                    "curve is not decreasing".into(),
                ));
            }
        }
        if self.kind == CurveKind::Frontier {
            for w in self.points.windows(3) {
                let dx1 = w[1].0 - w[0].0;
                let dx2 = w[2].0 - w[1].0;
                if dx1 > 0.0 && dx2 > 0.0 {
                    let s1 = (w[1].1 - w[0].1) / dx1;
                    let s2 = (w[2].1 - w[1].1) / dx2;
                    if s2 < s1 - tol {
                        return Err(Error::InvalidInput("frontier is not convex".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Ordered slope components `c = c_1 + … + c_r` with strictly decreasing
/// slopes and the Gram identity `⟨c_i, c_j⟩ = x_i·y_j` for `i ≤ j`.
#[derive(Debug, Clone)]
pub struct SlopeDecomposition {
    pub components: Vec<Vec<f64>>,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl SlopeDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn reconstruct(&self) -> Vec<f64> {
        let dim = self.components[0].len();
        let mut acc = vec![0.0; dim];
        for comp in &self.components {
            for (a, c) in acc.iter_mut().zip(comp) {
                *a += c;
            }
        }
        acc
    }

    /// Largest relative violation of `⟨c_i, c_j⟩ = x_i y_j` over `i ≤ j`.
    pub fn gram_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.len() {
            for j in i..self.len() {
                let ip = inner(&self.components[i], &self.components[j]).unwrap();
                let want = self.xs[i] * self.ys[j];
                worst = worst.max((ip - want).abs() / (1.0 + want.abs()));
            }
        }
        worst
    }

    /// The frontier vertices `(x_1+…+x_i, y_{i+1}+…+y_r)`, `i = 0..r`.
    pub fn frontier_points(&self) -> Vec<(f64, f64)> {
        let r = self.len();
        let mut pts = Vec::with_capacity(r + 1);
        let mut x_acc = 0.0;
        for i in 0..=r {
            let y_tail: f64 = self.ys[i..].iter().sum();
            pts.push((x_acc, y_tail));
            if i < r {
                x_acc += self.xs[i];
            }
        }
        pts
    }

    /// Exact frontier curve implied by the decomposition.
    pub fn frontier_curve(&self) -> ParetoCurve {
        ParetoCurve::from_points(CurveKind::Frontier, Orientation::YOfX, self.frontier_points())
    }

    /// Singular-value bars `(λ_i, m_i)`: heights are tail sums of the
    /// component Y-norms and widths are increments of `μ_YX`.
    pub fn sv_bars(&self) -> Vec<(f64, f64)> {
        let r = self.len();
        let mut bars = Vec::with_capacity(r);
        let mut prev_mu = 0.0;
        for i in 0..r {
            let lam: f64 = self.ys[i..].iter().sum();
            let mu = self.xs[i] / self.ys[i];
            bars.push((lam, mu - prev_mu));
            prev_mu = mu;
        }
        bars
    }
}

/// The singular-value region: exact bars when available, and a sampled
/// boundary `x(y) = −d h_XY/dy` otherwise.
#[derive(Debug, Clone)]
pub struct SVRegion {
    /// `(height λ_i, width m_i)`; widths may be negative for non-tight inputs.
    pub bars: Option<Vec<(f64, f64)>>,
    /// Sampled `(y, x(y))` boundary.
    pub sampled: Vec<(f64, f64)>,
    /// Region area; equals `‖c‖_X` up to solver tolerance.
    pub total_area: f64,
}

impl SVRegion {
    /// `∫ 2y dA` over the region; equals `‖c‖₂²` up to tolerance.
    pub fn second_moment(&self) -> f64 {
        if let Some(bars) = &self.bars {
            bars.iter().map(|&(lam, m)| m * lam * lam).sum()
        } else {
            // trapezoid in y against the sampled widths
            self.sampled
                .windows(2)
                .map(|w| {
                    let (y0, x0) = w[0];
                    let (y1, x1) = w[1];
                    (y1 - y0) * (y0 * x0 + y1 * x1)
                })
                .sum()
        }
    }
}

/// Outcome of comparing frontier against sub-frontier on a grid.
#[derive(Debug, Clone)]
pub struct TightnessReport {
    pub sup_gap: f64,
    pub area_h: f64,
    pub area_f: f64,
    pub tight: bool,
}

/// Measured and expected areas for the four sub-frontier area identities.
#[derive(Debug, Clone)]
pub struct AreaReport {
    pub total: f64,
    pub total_expected: f64,
    pub right_of_x0: f64,
    pub right_expected: f64,
    pub above_y0: f64,
    pub above_expected: f64,
    pub rectangle: f64,
    pub rectangle_expected: f64,
}

impl AreaReport {
    pub fn max_relative_error(&self) -> f64 {
        let rel = |got: f64, want: f64| (got - want).abs() / (1.0 + want.abs());
        rel(self.total, self.total_expected)
            .max(rel(self.right_of_x0, self.right_expected))
            .max(rel(self.above_y0, self.above_expected))
            .max(rel(self.rectangle, self.rectangle_expected))
    }
}

/// Uniform grid of `n + 1` points over `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|i| a + (b - a) * i as f64 / n as f64)
        .collect()
}

pub const DEFAULT_GRID: usize = 256;
const FW_MAX_ITERS: usize = 500;
const FW_GAP_TOL: f64 = 1e-7;
const SUBGRAD_ITERS: usize = 2000;
const BISECT_ITERS: usize = 200;

/// Solves `min ‖c − a‖₂` over `‖a‖_X ≤ x`: `a` is the ball projection and
/// the residual pairs with it into an X2-decomposition.
pub fn solve_m2x(pair: &dyn NormPair, c: &[f64], x: f64) -> Result<Decomposition> {
    let cx = pair.norm_x(c);
    if !(0.0..=cx * (1.0 + 1e-9) + 1e-12).contains(&x) {
        return Err(Error::RadiusOutOfRange { radius: x, max: cx });
    }
    let a = pair.proj_x(c, x);
    let b = sub(c, &a);
    check_x2(pair, &a, &b, 1e-9)
}

/// Finds the X2-decomposition with `‖b‖_Y = y` by bisecting the radius of
/// the strictly decreasing map `x ↦ ‖c − proj_X(c, x)‖_Y`.
pub fn proj_y_radius(pair: &dyn NormPair, c: &[f64], y: f64, tol: f64) -> Result<Decomposition> {
    let cy = pair.norm_y(c);
    if !(0.0..=cy * (1.0 + 1e-9) + 1e-12).contains(&y) {
        return Err(Error::RadiusOutOfRange { radius: y, max: cy });
    }
    let cx = pair.norm_x(c);
    if y >= cy {
        return solve_m2x(pair, c, 0.0);
    }
    let residual_y = |x: f64| pair.norm_y(&sub(c, &pair.proj_x(c, x)));
    let (mut lo, mut hi) = (0.0f64, cx);
    if residual_y(lo) < y - tol.max(1e-12) * (1.0 + cy) {
        return Err(Error::BisectionBracket);
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..BISECT_ITERS {
        mid = 0.5 * (lo + hi);
        let val = residual_y(mid);
        if (val - y).abs() <= tol {
            break;
        }
        if val > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    solve_m2x(pair, c, mid)
}

/// Samples the Pareto sub-frontier `h_YX` at the given radii.
pub fn subfrontier(pair: &dyn NormPair, c: &[f64], grid: &[f64]) -> Result<ParetoCurve> {
    if is_zero(c) {
        return Ok(ParetoCurve::from_points(
            CurveKind::Subfrontier,
            Orientation::YOfX,
            vec![(0.0, 0.0)],
        ));
    }
    let cx = pair.norm_x(c);
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        if !(0.0..=cx * (1.0 + 1e-9) + 1e-12).contains(&x) {
            return Err(Error::RadiusOutOfRange { radius: x, max: cx });
        }
        let a = pair.proj_x(c, x);
        points.push((x, pair.norm_y(&sub(c, &a))));
    }
    Ok(ParetoCurve::from_points(
        CurveKind::Subfrontier,
        Orientation::YOfX,
        points,
    ))
}

/// One frontier solve: `min ‖c − a‖_Y` over `‖a‖_X ≤ x`. Returns the best
/// value found and whether the duality gap certified convergence.
fn min_y_at_radius(pair: &dyn NormPair, c: &[f64], x: f64) -> (f64, bool) {
    if x <= 0.0 {
        return (pair.norm_y(c), true);
    }
    let mut a = pair.proj_x(c, x);
    let mut best = pair.norm_y(&sub(c, &a));
    let scale_tol = FW_GAP_TOL * (1.0 + pair.norm_y(c));
    let mut converged = false;
    let mut stall = 0usize;

    for _ in 0..FW_MAX_ITERS {
        let r = sub(c, &a);
        if norm2_sq(&r) <= 1e-28 * (1.0 + norm2_sq(c)) {
            return (0.0, true);
        }
        let u = pair.dual_argmax(&r);
        let s = scale(&pair.dual_argmax(&u), x);
        let gap = inner(&u, &s).unwrap() - inner(&u, &a).unwrap();
        if gap <= scale_tol {
            converged = true;
            break;
        }
        // exact-ish line search on the convex section γ ↦ ‖c − a − γ(s−a)‖_Y
        let dir = sub(&s, &a);
        let value = |g: f64| pair.norm_y(&sub(&r, &scale(&dir, g)));
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..60 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if value(m1) <= value(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let gamma = 0.5 * (lo + hi);
        let cand = value(gamma);
        if cand < best - 1e-15 * (1.0 + best) {
            best = cand;
            a = axpy(&a, gamma, &dir);
            stall = 0;
        } else {
            stall += 1;
            if stall >= 3 {
                break;
            }
        }
    }
    if converged {
        return (best, true);
    }
    // projected subgradient polish for polyhedral pairs where FW stalls
    let mut a_best = a.clone();
    let diam = 2.0 * x.max(1e-12);
    for t in 0..SUBGRAD_ITERS {
        let r = sub(c, &a);
        if norm2_sq(&r) <= 1e-28 * (1.0 + norm2_sq(c)) {
            return (0.0, true);
        }
        let u = pair.dual_argmax(&r);
        let eta = diam / ((t + 1) as f64).sqrt();
        a = pair.proj_x(&axpy(&a, eta, &u), x);
        let val = pair.norm_y(&sub(c, &a));
        if val < best {
            best = val;
            a_best = a.clone();
        }
    }
    let _ = a_best;
    (best, false)
}

/// Samples the Pareto frontier `f_YX` at the given radii.
pub fn frontier(pair: &dyn NormPair, c: &[f64], grid: &[f64]) -> Result<ParetoCurve> {
    if is_zero(c) {
        return Ok(ParetoCurve::from_points(
            CurveKind::Frontier,
            Orientation::YOfX,
            vec![(0.0, 0.0)],
        ));
    }
    let cx = pair.norm_x(c);
    let mut points = Vec::with_capacity(grid.len());
    let mut unconverged = Vec::new();
    for (i, &x) in grid.iter().enumerate() {
        if !(0.0..=cx * (1.0 + 1e-9) + 1e-12).contains(&x) {
            return Err(Error::RadiusOutOfRange { radius: x, max: cx });
        }
        let (y, ok) = min_y_at_radius(pair, c, x);
        if !ok {
            unconverged.push(i);
        }
        points.push((x, y));
    }
    let mut curve = ParetoCurve::from_points(CurveKind::Frontier, Orientation::YOfX, points);
    curve.unconverged = unconverged;
    Ok(curve)
}

/// Compares frontier and sub-frontier on a shared grid and checks the area
/// identity for `h`.
pub fn tightness_test(
    pair: &dyn NormPair,
    c: &[f64],
    grid: &[f64],
    tol: f64,
) -> Result<TightnessReport> {
    let h = subfrontier(pair, c, grid)?;
    let f = frontier(pair, c, grid)?;
    let sup_gap = h
        .points
        .iter()
        .zip(&f.points)
        .map(|(ph, pf)| ph.1 - pf.1)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(TightnessReport {
        sup_gap,
        area_h: h.trapezoid_area(),
        area_f: f.trapezoid_area(),
        tight: sup_gap <= tol,
    })
}

/// Flags the slope changes of a sampled function: returns cluster centers
/// where consecutive secant slopes jump by more than `slope_tol`.
fn detect_breakpoints(samples: &[(f64, f64)], slope_tol: f64) -> Vec<f64> {
    let n = samples.len();
    let mut out: Vec<f64> = Vec::new();
    if n < 3 {
        return out;
    }
    let slope = |i: usize| -> f64 {
        (samples[i + 1].1 - samples[i].1) / (samples[i + 1].0 - samples[i].0)
    };
    let mut i = 0;
    while i + 2 < n {
        if (slope(i + 1) - slope(i)).abs() > slope_tol {
            // cluster consecutive flags around one kink
            let start = i;
            while i + 3 < n && (slope(i + 2) - slope(i + 1)).abs() > slope_tol {
                i += 1;
            }
            out.push(0.5 * (samples[start + 1].0 + samples[i + 1].0));
            i += 2;
        } else {
            i += 1;
        }
    }
    out
}

/// Sharpens a kink estimate of a piecewise-linear function by intersecting
/// least-squares lines fitted on guarded windows left and right of the
/// candidate; the window shrinks tenfold per level.
fn refine_breakpoint(
    f: &dyn Fn(f64) -> f64,
    z0: f64,
    half_width: f64,
    domain: (f64, f64),
    levels: usize,
) -> f64 {
    let mut z = z0;
    let mut h = half_width;
    for _ in 0..levels {
        let fit = |lo: f64, hi: f64| -> Option<(f64, f64)> {
            let lo = lo.max(domain.0);
            let hi = hi.min(domain.1);
            if hi - lo <= 0.0 {
                return None;
            }
            let pts: Vec<(f64, f64)> = (0..6)
                .map(|i| {
                    let x = lo + (hi - lo) * i as f64 / 5.0;
                    (x, f(x))
                })
                .collect();
            let (s, _) = least_squares_line(&pts);
            let a = pts.iter().map(|p| p.1 - s * p.0).sum::<f64>() / pts.len() as f64;
            Some((s, a))
        };
        let Some((sl, al)) = fit(z - h, z - 0.4 * h) else { break };
        let Some((sr, ar)) = fit(z + 0.4 * h, z + h) else { break };
        if (sr - sl).abs() < 1e-14 {
            break;
        }
        let z_new = (al - ar) / (sr - sl);
        if !z_new.is_finite() || (z_new - z).abs() > h {
            break;
        }
        z = z_new.clamp(domain.0, domain.1);
        h /= 10.0;
    }
    z
}

/// Extracts the slope decomposition of a tight vector from breakpoints of
/// the piecewise-linear sub-frontier.
pub fn slope_decomposition(
    pair: &dyn NormPair,
    c: &[f64],
    tol: f64,
) -> Result<SlopeDecomposition> {
    if is_zero(c) {
        return Err(Error::ZeroVector);
    }
    let cx = pair.norm_x(c);
    let cy = pair.norm_y(c);
    let tight_tol = tol.max(1e-9) * (1.0 + cy);
    let grid = uniform_grid(0.0, cx, DEFAULT_GRID);
    let report = tightness_test(pair, c, &grid, tight_tol)?;
    if !report.tight {
        return Err(Error::NotTight {
            sup_gap: report.sup_gap,
            tol: tight_tol,
        });
    }

    // unitangent fast path: single linear segment
    if crate::pair::is_unitangent(pair, c, 1e-10)? {
        return Ok(SlopeDecomposition {
            components: vec![c.to_vec()],
            xs: vec![cx],
            ys: vec![cy],
            slopes: vec![cy / cx],
        });
    }

    let h_at = |x: f64| pair.norm_y(&sub(c, &pair.proj_x(c, x)));
    let h_samples: Vec<(f64, f64)> = grid.iter().map(|&x| (x, h_at(x))).collect();
    let slope_tol = 1e-5 * cy / cx;
    let coarse = detect_breakpoints(&h_samples, slope_tol);

    let dx = cx / DEFAULT_GRID as f64;
    let mut breaks: Vec<f64> = coarse
        .into_iter()
        .map(|z| refine_breakpoint(&h_at, z, 2.5 * dx, (0.0, cx), 4))
        .collect();
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() < dx / 100.0);
    breaks.retain(|&z| z > dx / 100.0 && z < cx - dx / 100.0);
    breaks.push(cx);

    let mut components = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut slopes = Vec::new();
    let mut prev = vec![0.0; c.len()];
    for &z in &breaks {
        let cur = pair.proj_x(c, z);
        let comp = sub(&cur, &prev);
        let x_i = pair.norm_x(&comp);
        let y_i = pair.norm_y(&comp);
        if x_i <= 1e-12 * (1.0 + cx) {
            prev = cur;
            continue;
        }
        xs.push(x_i);
        ys.push(y_i);
        slopes.push(y_i / x_i);
        components.push(comp);
        prev = cur;
    }
    let sd = SlopeDecomposition {
        components,
        xs,
        ys,
        slopes,
    };
    for w in sd.slopes.windows(2) {
        if w[1] >= w[0] - 1e-12 {
            return Err(Error::BreakpointUnstable(format!(
                "slopes not strictly decreasing: {:?}",
                sd.slopes
            )));
        }
    }
    let gram = sd.gram_residual();
    if gram > tol.max(1e-7) {
        return Err(Error::BreakpointUnstable(format!(
            "Gram residual {gram:.3e} exceeds tolerance"
        )));
    }
    Ok(sd)
}

/// Computes the singular-value region of `c`. When `c` is tight the exact
/// bars come from the slope decomposition; otherwise the region boundary is
/// extracted from the sampled inverse sub-frontier `h_XY`, with exact bars
/// emitted when that function is piecewise linear.
pub fn sv_region(pair: &dyn NormPair, c: &[f64], grid_size: usize) -> Result<SVRegion> {
    if is_zero(c) {
        return Ok(SVRegion {
            bars: Some(Vec::new()),
            sampled: Vec::new(),
            total_area: 0.0,
        });
    }
    let cy = pair.norm_y(c);
    let n = grid_size.max(16);
    let ys = uniform_grid(0.0, cy, n);
    // h_XY(y): radius of the X2-decomposition with residual level y
    let mut hxy = Vec::with_capacity(ys.len());
    for &y in &ys {
        let d = proj_y_radius(pair, c, y.min(cy), 1e-10 * (1.0 + cy))?;
        hxy.push((y, d.x));
    }
    let mut sampled = Vec::with_capacity(ys.len().saturating_sub(2));
    for i in 1..hxy.len() - 1 {
        let (y0, x0) = hxy[i - 1];
        let (y1, _) = hxy[i];
        let (y2, x2) = hxy[i + 1];
        sampled.push((y1, -(x2 - x0) / (y2 - y0)));
    }
    let total_area = hxy.first().map_or(0.0, |p| p.1) - hxy.last().map_or(0.0, |p| p.1);

    // exact bars from the slope decomposition when tight
    if let Ok(sd) = slope_decomposition(pair, c, 1e-6) {
        return Ok(SVRegion {
            bars: Some(sd.sv_bars()),
            sampled,
            total_area,
        });
    }

    // otherwise try a piecewise-linear read of h_XY
    let hxy_at = |y: f64| {
        proj_y_radius(pair, c, y.clamp(0.0, cy), 1e-11 * (1.0 + cy))
            .map(|d| d.x)
            .unwrap_or(f64::NAN)
    };
    let slope_tol = 1e-5 * hxy[0].1 / cy;
    let dy = cy / n as f64;
    let mut breaks: Vec<f64> = detect_breakpoints(&hxy, slope_tol)
        .into_iter()
        .map(|z| refine_breakpoint(&hxy_at, z, 2.5 * dy, (0.0, cy), 3))
        .collect();
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() < dy / 10.0);
    breaks.retain(|&z| z > dy / 10.0 && z < cy - dy / 10.0);

    // slab slopes via least squares over interior samples
    let mut edges = vec![0.0];
    edges.extend(breaks.iter().copied());
    edges.push(cy);
    let mut widths = Vec::new();
    let mut linear = true;
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let pts: Vec<(f64, f64)> = hxy
            .iter()
            .filter(|p| p.0 > lo + dy * 0.6 && p.0 < hi - dy * 0.6)
            .copied()
            .collect();
        if pts.len() < 2 {
            // slab narrower than the grid: fall back to secant through edges
            let x_lo = interp(&hxy, lo);
            let x_hi = interp(&hxy, hi);
            widths.push(-(x_hi - x_lo) / (hi - lo));
            continue;
        }
        let (s, resid) = least_squares_line(&pts);
        if resid > 1e-4 * (1.0 + hxy[0].1) {
            linear = false;
        }
        widths.push(-s);
    }
    let bars = if linear {
        // bars from the top: widths accumulate downward
        let mut bars = Vec::new();
        let mut prev = 0.0;
        for (i, w) in widths.iter().enumerate().rev() {
            let top = edges[i + 1];
            bars.push((top, w - prev));
            prev = *w;
        }
        Some(bars)
    } else {
        None
    };
    Ok(SVRegion {
        bars,
        sampled,
        total_area,
    })
}

fn interp(samples: &[(f64, f64)], x: f64) -> f64 {
    let idx = samples.partition_point(|p| p.0 < x);
    if idx == 0 {
        return samples[0].1;
    }
    if idx >= samples.len() {
        return samples[samples.len() - 1].1;
    }
    let (x0, y0) = samples[idx - 1];
    let (x1, y1) = samples[idx];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Fits `y = a + s·x`; returns `(s, max residual)`.
fn least_squares_line(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let s = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - s * mx;
    let resid = pts
        .iter()
        .map(|p| (p.1 - a - s * p.0).abs())
        .fold(0.0f64, f64::max);
    (s, resid)
}

/// Verifies the four area identities of the sub-frontier at the split `x0`.
pub fn area_checks(
    pair: &dyn NormPair,
    c: &[f64],
    x0: f64,
    grid_size: usize,
) -> Result<AreaReport> {
    let cx = pair.norm_x(c);
    if !(0.0..=cx * (1.0 + 1e-9) + 1e-12).contains(&x0) {
        return Err(Error::RadiusOutOfRange { radius: x0, max: cx });
    }
    let mut grid = uniform_grid(0.0, cx, grid_size.max(2));
    if grid.iter().all(|&x| (x - x0).abs() > 1e-15) {
        grid.push(x0);
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    let h = subfrontier(pair, c, &grid)?;
    let d = solve_m2x(pair, c, x0)?;
    let y0 = d.y;
    let total = h.trapezoid_area();
    let right: f64 = h
        .points
        .windows(2)
        .filter(|w| w[0].0 >= x0 - 1e-15)
        .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
        .sum();
    let above: f64 = h
        .points
        .windows(2)
        .filter(|w| w[1].0 <= x0 + 1e-15)
        .map(|w| 0.5 * ((w[0].1 - y0) + (w[1].1 - y0)) * (w[1].0 - w[0].0))
        .sum();
    Ok(AreaReport {
        total,
        total_expected: 0.5 * norm2_sq(c),
        right_of_x0: right,
        right_expected: 0.5 * norm2_sq(&d.b),
        above_y0: above,
        above_expected: 0.5 * norm2_sq(&d.a),
        rectangle: x0 * y0,
        rectangle_expected: inner(&d.a, &d.b)?,
    })
}

/// Concatenation `u ⋆ v`: `u` lifted by `v(0)`, then `v` shifted right by
/// the width of `u`. Both curves must decrease to zero.
pub fn concat_curves(u: &ParetoCurve, v: &ParetoCurve) -> Result<ParetoCurve> {
    for (name, curve) in [("u", u), ("v", v)] {
        if curve.points.is_empty() {
            return Err(Error::InvalidInput(format!("curve {name} is empty")));
        }
        let terminal = curve.points.last().unwrap().1;
        if terminal.abs() > 1e-7 * (1.0 + curve.y_max()) {
            return Err(Error::InvalidInput(format!(
                "curve {name} does not terminate at zero (y = {terminal})"
            )));
        }
    }
    let t = u.x_max();
    let v0 = v.y_max();
    let mut points: Vec<(f64, f64)> = u.points.iter().map(|&(x, y)| (x, y + v0)).collect();
    for &(x, y) in &v.points {
        points.push((x + t, y));
    }
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // the junction point appears from both halves
    points.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    Ok(ParetoCurve::from_points(u.kind, u.orientation, points))
}
