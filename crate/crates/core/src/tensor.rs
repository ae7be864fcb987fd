//! Desk-scale tensor norms: spectral values by multi-start alternating
//! rank-1 ascent, closed-form symmetric and combinatorial families, and the
//! conversion from diagonal singular value decompositions to slope
//! decompositions.
//!
//! The nuclear norm of an arbitrary tensor is NP-hard and is not computed
//! here; only families with closed forms (or two-sided certificates) carry
//! nuclear values.

use crate::error::{Error, Result};
use crate::pareto::{CurveKind, Orientation, ParetoCurve, SlopeDecomposition, SVRegion};
use crate::space::norm2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const TENSOR_SIZE_CAP: usize = 10_000;
pub const DEFAULT_STARTS: usize = 64;
pub const DEFAULT_ITERS: usize = 200;
const ASCENT_TOL: f64 = 1e-12;

/// Dense tensor with row-major strides.
#[derive(Debug, Clone)]
pub struct Tensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if size != data.len() {
            return Err(Error::DimensionMismatch {
                expected: size,
                got: data.len(),
            });
        }
        if size > TENSOR_SIZE_CAP {
            return Err(Error::SizeCap {
                got: size,
                cap: TENSOR_SIZE_CAP,
            });
        }
        Ok(Tensor { dims, data })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let size = dims.iter().product();
        Tensor::new(dims, vec![0.0; size])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn ways(&self) -> usize {
        self.dims.len()
    }

    pub fn euclid(&self) -> f64 {
        norm2(&self.data)
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for (d, &i) in idx.iter().enumerate() {
            flat = flat * self.dims[d] + i;
        }
        flat
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let f = self.flat_index(idx);
        self.data[f] = v;
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.flat_index(idx)]
    }

    /// `⟨T, u₁⊗…⊗u_d⟩`.
    pub fn inner_simple(&self, factors: &[Vec<f64>]) -> f64 {
        let mut acc = 0.0;
        let mut idx = vec![0usize; self.dims.len()];
        for (flat, &v) in self.data.iter().enumerate() {
            if v != 0.0 {
                decode(flat, &self.dims, &mut idx);
                let mut p = v;
                for (m, f) in factors.iter().enumerate() {
                    p *= f[idx[m]];
                }
                acc += p;
            }
        }
        acc
    }

    /// Contraction against all factors except `mode`, producing the vector
    /// whose inner product with `u_mode` is `⟨T, ⊗u⟩`.
    pub fn contract_all_but(&self, factors: &[Vec<f64>], mode: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dims[mode]];
        let mut idx = vec![0usize; self.dims.len()];
        for (flat, &v) in self.data.iter().enumerate() {
            if v != 0.0 {
                decode(flat, &self.dims, &mut idx);
                let mut p = v;
                for (m, f) in factors.iter().enumerate() {
                    if m != mode {
                        p *= f[idx[m]];
                    }
                }
                out[idx[mode]] += p;
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Tensor, s: f64) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }
}

fn decode(mut flat: usize, dims: &[usize], idx: &mut [usize]) {
    for d in (0..dims.len()).rev() {
        idx[d] = flat % dims[d];
        flat /= dims[d];
    }
}

/// A simple (rank-one) tensor given by its factor vectors.
#[derive(Debug, Clone)]
pub struct SimpleTensor {
    pub factors: Vec<Vec<f64>>,
}

impl SimpleTensor {
    pub fn new(factors: Vec<Vec<f64>>) -> Self {
        SimpleTensor { factors }
    }

    pub fn unit(factors: Vec<Vec<f64>>) -> Self {
        let factors = factors
            .into_iter()
            .map(|f| {
                let n = norm2(&f);
                f.iter().map(|x| x / n).collect()
            })
            .collect();
        SimpleTensor { factors }
    }

    pub fn to_dense(&self) -> Result<Tensor> {
        let dims: Vec<usize> = self.factors.iter().map(|f| f.len()).collect();
        let mut t = Tensor::zeros(dims.clone())?;
        let mut idx = vec![0usize; dims.len()];
        for flat in 0..t.data.len() {
            decode(flat, &dims, &mut idx);
            let mut p = 1.0;
            for (m, f) in self.factors.iter().enumerate() {
                p *= f[idx[m]];
            }
            t.data[flat] = p;
        }
        Ok(t)
    }

    pub fn euclid(&self) -> f64 {
        self.factors.iter().map(|f| norm2(f)).product()
    }
}

/// Spectral norm estimate by alternating rank-1 power iteration over
/// deterministic seeded starts. The returned witness is a unit simple
/// tensor certifying the value as a lower bound.
pub fn spectral_norm(
    t: &Tensor,
    starts: usize,
    iters: usize,
    seed: u64,
) -> Result<(f64, SimpleTensor)> {
    if t.data.len() > TENSOR_SIZE_CAP {
        return Err(Error::SizeCap {
            got: t.data.len(),
            cap: TENSOR_SIZE_CAP,
        });
    }
    let d = t.ways();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_val = 0.0f64;
    let mut best: Option<Vec<Vec<f64>>> = None;
    for _ in 0..starts.max(1) {
        let mut factors: Vec<Vec<f64>> = t
            .dims
            .iter()
            .map(|&n| {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let nv = norm2(&v).max(1e-12);
                v.iter().map(|x| x / nv).collect()
            })
            .collect();
        let mut prev = f64::NEG_INFINITY;
        let mut val = 0.0;
        for _ in 0..iters.max(1) {
            for mode in 0..d {
                let g = t.contract_all_but(&factors, mode);
                let n = norm2(&g);
                if n > 1e-300 {
                    factors[mode] = g.iter().map(|x| x / n).collect();
                    val = n;
                }
            }
            if (val - prev).abs() <= ASCENT_TOL * (1.0 + val) {
                break;
            }
            prev = val;
        }
        let attained = t.inner_simple(&factors).abs();
        if attained > best_val {
            best_val = attained;
            best = Some(factors);
        }
    }
    let witness = SimpleTensor::new(best.unwrap_or_else(|| {
        t.dims
            .iter()
            .map(|&n| {
                let mut v = vec![0.0; n];
                v[0] = 1.0;
                v
            })
            .collect()
    }));
    Ok((best_val, witness))
}

// ---------------------------------------------------------------------------
// The symmetric one-parameter family on 2×2×2

/// `f_t = e₂⊗e₁⊗e₁ + e₁⊗e₂⊗e₁ + e₁⊗e₁⊗e₂ + t·e₂⊗e₂⊗e₂`.
pub fn ft_tensor(t: f64) -> Tensor {
    let mut out = Tensor::zeros(vec![2, 2, 2]).unwrap();
    out.set(&[1, 0, 0], 1.0);
    out.set(&[0, 1, 0], 1.0);
    out.set(&[0, 0, 1], 1.0);
    out.set(&[1, 1, 1], t);
    out
}

/// Closed-form `(spectral, nuclear, euclidean)` norms of `f_t`.
pub fn ft_norms(t: f64) -> (f64, f64, f64) {
    let sigma = if (-1.0..=2.0).contains(&t) {
        2.0 / (3.0 - t).sqrt()
    } else {
        t.abs()
    };
    let nuclear = if t <= 1.0 / 3.0 {
        3.0 - t
    } else {
        (1.0 + t).powf(1.5) / t.sqrt()
    };
    let euclid = (3.0 + t * t).sqrt();
    (sigma, nuclear, euclid)
}

/// The two-piece closed-form sub-frontier of `f₀` in the
/// (nuclear, spectral) plane: linear on `t ∈ [0, ⅓]`, curved on
/// `t ∈ [⅓, ½]`.
pub fn ft_subfrontier(samples_per_piece: usize) -> ParetoCurve {
    let n = samples_per_piece.max(2);
    let mut points = Vec::with_capacity(2 * n + 2);
    for i in 0..=n {
        let t = (1.0 / 3.0) * i as f64 / n as f64;
        points.push(((3.0 - t) / (t + 1.0), t / (1.0 + t)));
    }
    for i in 1..=n {
        let t = 1.0 / 3.0 + (0.5 - 1.0 / 3.0) * i as f64 / n as f64;
        let x = (1.0 - 2.0 * t) * (1.0 + t).powf(1.5) / ((1.0 - t).powi(2) * t.sqrt());
        let y = 2.0 * t.powf(2.5) / ((1.0 - t).powi(2) * (1.0 + t).sqrt());
        points.push((x, y));
    }
    ParetoCurve::from_points(CurveKind::Subfrontier, Orientation::XOfY, points)
}

/// Sampled singular-value region of `f₀` obtained by numerically
/// differentiating the closed-form sub-frontier.
pub fn ft0_sv_region(grid: usize) -> SVRegion {
    let curve = ft_subfrontier(4000);
    // x as a function of y via the monotone parametrization
    let mut by_y: Vec<(f64, f64)> = curve.points.iter().map(|&(x, y)| (y, x)).collect();
    by_y.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let y_max = by_y.last().unwrap().0;
    let x_at = |y: f64| -> f64 {
        let idx = by_y.partition_point(|p| p.0 < y);
        if idx == 0 {
            return by_y[0].1;
        }
        if idx >= by_y.len() {
            return by_y[by_y.len() - 1].1;
        }
        let (y0, x0) = by_y[idx - 1];
        let (y1, x1) = by_y[idx];
        x0 + (x1 - x0) * (y - y0) / (y1 - y0)
    };
    let n = grid.max(16);
    let mut sampled = Vec::with_capacity(n - 1);
    for i in 1..n {
        let y = y_max * i as f64 / n as f64;
        let h = y_max / n as f64;
        sampled.push((y, -(x_at(y + h) - x_at(y - h)) / (2.0 * h)));
    }
    SVRegion {
        bars: None,
        sampled,
        total_area: x_at(0.0) - x_at(y_max),
    }
}

// ---------------------------------------------------------------------------
// Diagonal SVD to slope decomposition

/// A diagonal singular value decomposition: `T = Σ λ_i v_i` over
/// 2-orthogonal unit simple tensors, grouped by repeated values.
#[derive(Debug, Clone)]
pub struct Dsvd {
    /// Strictly decreasing distinct values.
    pub lambdas: Vec<f64>,
    pub mults: Vec<usize>,
    /// Terms in group order: `mults[0]` tensors for `lambdas[0]`, then …
    pub terms: Vec<SimpleTensor>,
}

/// Converts a DSVD into the slope decomposition
/// `u_i = (λ_i − λ_{i+1})·(w_1 + … + w_i)` with `w_i` the group sums.
pub fn dsvd_to_slope(dsvd: &Dsvd) -> Result<SlopeDecomposition> {
    let r = dsvd.lambdas.len();
    if r == 0 || dsvd.mults.len() != r {
        return Err(Error::InvalidInput("empty or inconsistent DSVD".into()));
    }
    if dsvd.terms.len() != dsvd.mults.iter().sum::<usize>() {
        return Err(Error::InvalidInput(
            "terms do not match the multiplicities".into(),
        ));
    }
    for w in dsvd.lambdas.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::InvalidInput(
                "singular values must be strictly decreasing".into(),
            ));
        }
    }
    if dsvd.lambdas[r - 1] <= 0.0 {
        return Err(Error::InvalidInput("singular values must be positive".into()));
    }
    for term in &dsvd.terms {
        if (term.euclid() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput("terms must be unit simple tensors".into()));
        }
    }
    let dims: Vec<usize> = dsvd.terms[0].factors.iter().map(|f| f.len()).collect();
    // group sums w_i
    let mut groups = Vec::with_capacity(r);
    let mut offset = 0;
    for &m in &dsvd.mults {
        let mut w = Tensor::zeros(dims.clone())?;
        for term in &dsvd.terms[offset..offset + m] {
            w.add_scaled(&term.to_dense()?, 1.0);
        }
        groups.push(w);
        offset += m;
    }
    let mut components = Vec::with_capacity(r);
    let mut xs = Vec::with_capacity(r);
    let mut ys = Vec::with_capacity(r);
    let mut slopes = Vec::with_capacity(r);
    let mut partial = Tensor::zeros(dims)?;
    let mut k = 0usize;
    for i in 0..r {
        partial.add_scaled(&groups[i], 1.0);
        k += dsvd.mults[i];
        let next = if i + 1 < r { dsvd.lambdas[i + 1] } else { 0.0 };
        let gap = dsvd.lambdas[i] - next;
        let comp: Vec<f64> = partial.data().iter().map(|&v| gap * v).collect();
        components.push(comp);
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

// ---------------------------------------------------------------------------
// Group algebra tensors

/// Exact frontier of the group-algebra multiplication tensor of a finite
/// group of order `n = Σ m_d·d²`, given the irreducible dimensions and their
/// multiplicities: singular values `√(n/d)` with multiplicities `m_d·d³`.
pub fn group_algebra_frontier(dim_mults: &[(usize, usize)]) -> Result<ParetoCurve> {
    let (lambdas, mults) = group_algebra_spectrum(dim_mults)?;
    let eval = |y: f64| -> f64 {
        lambdas
            .iter()
            .zip(&mults)
            .map(|(&l, &m)| m * (l - y).max(0.0))
            .sum()
    };
    let mut points = vec![(0.0, lambdas[0])];
    for k in 1..lambdas.len() {
        points.push((eval(lambdas[k]), lambdas[k]));
    }
    points.push((eval(0.0), 0.0));
    Ok(ParetoCurve::from_points(
        CurveKind::Frontier,
        Orientation::XOfY,
        points,
    ))
}

/// Exact singular-value bars `(√(n/d), m_d·d³)` of the group-algebra tensor.
pub fn group_algebra_sv_region(dim_mults: &[(usize, usize)]) -> Result<SVRegion> {
    let (lambdas, mults) = group_algebra_spectrum(dim_mults)?;
    let bars: Vec<(f64, f64)> = lambdas.iter().copied().zip(mults.iter().copied()).collect();
    let total_area = bars.iter().map(|&(l, m)| l * m).sum();
    Ok(SVRegion {
        bars: Some(bars),
        sampled: Vec::new(),
        total_area,
    })
}

fn group_algebra_spectrum(dim_mults: &[(usize, usize)]) -> Result<(Vec<f64>, Vec<f64>)> {
    if dim_mults.is_empty() {
        return Err(Error::InvalidInput("no irreducible dimensions".into()));
    }
    let n: usize = dim_mults.iter().map(|&(d, m)| m * d * d).sum();
    if dim_mults.iter().any(|&(d, m)| d == 0 || m == 0) {
        return Err(Error::InvalidInput("dimensions and counts must be positive".into()));
    }
    let mut spec: Vec<(f64, f64)> = dim_mults
        .iter()
        .map(|&(d, m)| ((n as f64 / d as f64).sqrt(), (m * d * d * d) as f64))
        .collect();
    spec.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    Ok(spec.into_iter().unzip())
}

// ---------------------------------------------------------------------------
// Reference unitangent tensors

/// A constructed tensor together with its reference norm values.
#[derive(Debug, Clone)]
pub struct ReferenceTensor {
    pub tensor: Tensor,
    pub sigma: f64,
    pub nuclear: f64,
    pub euclid_sq: f64,
    pub name: String,
}

/// Matrix-multiplication tensor in `ℝ^{pq} ⊗ ℝ^{qr} ⊗ ℝ^{rp}`:
/// spectral 1, nuclear `pqr`.
pub fn tpqr(p: usize, q: usize, r: usize) -> Result<ReferenceTensor> {
    let dims = vec![p * q, q * r, r * p];
    let mut t = Tensor::zeros(dims)?;
    for i in 0..p {
        for j in 0..q {
            for k in 0..r {
                t.set(&[i * q + j, j * r + k, k * p + i], 1.0);
            }
        }
    }
    Ok(ReferenceTensor {
        tensor: t,
        sigma: 1.0,
        nuclear: (p * q * r) as f64,
        euclid_sq: (p * q * r) as f64,
        name: format!("T_{{{p},{q},{r}}}"),
    })
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, sign: &mut f64, out: &mut Vec<(Vec<usize>, f64)>) {
        if k == 1 {
            out.push((perm.clone(), *sign));
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, sign, out);
            if k % 2 == 0 {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
            *sign = -*sign;
        }
    }
    let mut sign = 1.0;
    heap(n, &mut perm, &mut sign, &mut out);
    out
}

/// Determinant tensor in `(ℝ^n)^{⊗n}`: spectral 1, nuclear `n!`.
pub fn det_tensor(n: usize) -> Result<ReferenceTensor> {
    let t = sum_over_permutations(n, true)?;
    let fact: usize = (1..=n).product();
    Ok(ReferenceTensor {
        tensor: t,
        sigma: 1.0,
        nuclear: fact as f64,
        euclid_sq: fact as f64,
        name: format!("det_{n}"),
    })
}

/// Permanent tensor in `(ℝ^n)^{⊗n}`: spectral `n!/n^{n/2}`, nuclear
/// `n^{n/2}`.
pub fn perm_tensor(n: usize) -> Result<ReferenceTensor> {
    let t = sum_over_permutations(n, false)?;
    let fact: usize = (1..=n).product();
    let half_power = (n as f64).powf(n as f64 / 2.0);
    Ok(ReferenceTensor {
        tensor: t,
        sigma: fact as f64 / half_power,
        nuclear: half_power,
        euclid_sq: fact as f64,
        name: format!("perm_{n}"),
    })
}

fn sum_over_permutations(n: usize, signed: bool) -> Result<Tensor> {
    if n < 2 {
        return Err(Error::InvalidInput("need n >= 2".into()));
    }
    let size = (n as f64).powi(n as i32);
    if size > TENSOR_SIZE_CAP as f64 {
        return Err(Error::SizeCap {
            got: size as usize,
            cap: TENSOR_SIZE_CAP,
        });
    }
    let mut t = Tensor::zeros(vec![n; n])?;
    for (perm, sign) in permutations(n) {
        t.set(&perm, if signed { sign } else { 1.0 });
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// t-orthogonality

/// Maximizes `Σ_i |⟨v_i, w⟩|^{2/t}` over simple unit tensors `w` by
/// multi-start projected ascent. This is a necessary-condition check for
/// `t`-orthogonality: `pass` means no violation was found, not a proof.
pub fn t_orthogonality_check(
    vs: &[SimpleTensor],
    t: f64,
    starts: usize,
    seed: u64,
) -> Result<(f64, bool)> {
    if vs.is_empty() {
        return Err(Error::InvalidInput("no tensors given".into()));
    }
    if t < 1.0 {
        return Err(Error::InvalidInput("t must be at least 1".into()));
    }
    let d = vs[0].factors.len();
    let dims: Vec<usize> = vs[0].factors.iter().map(|f| f.len()).collect();
    let power = 2.0 / t;
    let objective = |w: &[Vec<f64>]| -> f64 {
        vs.iter()
            .map(|v| {
                let p: f64 = v
                    .factors
                    .iter()
                    .zip(w)
                    .map(|(vf, wf)| crate::space::inner(vf, wf).unwrap())
                    .product();
                p.abs().powf(power)
            })
            .sum()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    // ascend from every input tensor plus random starts
    let mut start_points: Vec<Vec<Vec<f64>>> = vs.iter().map(|v| v.factors.clone()).collect();
    for _ in 0..starts {
        start_points.push(
            dims.iter()
                .map(|&n| {
                    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let nv = norm2(&v).max(1e-12);
                    v.iter().map(|x| x / nv).collect()
                })
                .collect(),
        );
    }
    for mut w in start_points {
        let mut prev = f64::NEG_INFINITY;
        for _ in 0..DEFAULT_ITERS {
            for mode in 0..d {
                // gradient of the objective with respect to w[mode]
                let mut grad = vec![0.0; dims[mode]];
                for v in vs {
                    let mut partial = 1.0;
                    let mut full = 1.0;
                    for (m, (vf, wf)) in v.factors.iter().zip(&w).enumerate() {
                        let ip = crate::space::inner(vf, wf).unwrap();
                        full *= ip;
                        if m != mode {
                            partial *= ip;
                        }
                    }
                    let mag = full.abs().max(1e-14);
                    let coeff = power * mag.powf(power - 1.0) * full.signum() * partial;
                    for (g, vf) in grad.iter_mut().zip(&v.factors[mode]) {
                        *g += coeff * vf;
                    }
                }
                let gn = norm2(&grad);
                if gn > 1e-14 {
                    // damped fixed-point step keeps the ascent stable
                    let blended: Vec<f64> = w[mode]
                        .iter()
                        .zip(&grad)
                        .map(|(x, g)| 0.5 * x + 0.5 * g / gn)
                        .collect();
                    let bn = norm2(&blended).max(1e-14);
                    w[mode] = blended.iter().map(|x| x / bn).collect();
                }
            }
            let val = objective(&w);
            if (val - prev).abs() <= ASCENT_TOL * (1.0 + val) {
                break;
            }
            prev = val;
        }
        best = best.max(objective(&w));
    }
    Ok((best, best <= 1.0 + 1e-6))
}
