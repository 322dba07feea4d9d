use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::simplex;

/// Node counts up to this use every node pair as a Hölder constraint.
pub const ALL_PAIRS_MAX_NODES: usize = 64;
const NEAREST: usize = 8;
const LONG_RANGE: usize = 64;
const PAIR_SEED: u64 = 0x5eed_c0de;

/// Lattice discretization of the closed unit ball carrying the kernel class.
#[derive(Debug, Clone)]
pub struct KernelGrid {
    alpha: f64,
    resolution: usize,
    dim: usize,
    spacing: f64,
    nodes: Vec<[f64; 2]>,
    weights: Vec<f64>,
    bounds: Vec<f64>,
    holder: Vec<f64>,
}

impl KernelGrid {
    pub fn new(alpha: f64, resolution: usize, dim: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must be in (0,1], got {alpha}")));
        }
        if resolution < 9 || resolution % 2 == 0 {
            return Err(Error::InvalidParameter(format!("kernel resolution must be odd and >= 9, got {resolution}")));
        }
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidParameter(format!("dimension must be 1 or 2, got {dim}")));
        }
        let half = (resolution as i64 - 1) / 2;
        let spacing = 2.0 / (resolution - 1) as f64;
        let mut nodes = Vec::new();
        let ys: Vec<i64> = if dim == 1 { vec![0] } else { (-half..=half).collect() };
        for i in -half..=half {
            for &j in &ys {
                let z = [i as f64 * spacing, j as f64 * spacing];
                if i * i + j * j <= half * half {
                    nodes.push(z);
                }
            }
        }
        let w = spacing.powi(dim as i32);
        let bounds = nodes.iter().map(|z| (1.0 - norm(z)).max(0.0).powf(alpha)).collect();
        let holder = nodes.iter().flat_map(|a| nodes.iter().map(move |b| dist(a, b).powf(alpha))).collect();
        Ok(Self { alpha, resolution, dim, spacing, weights: vec![w; nodes.len()], nodes, bounds, holder })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The implied bound (1-|z|)^α on |θ(z)|.
    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// |z_i - z_j|^α.
    pub fn holder_distance(&self, i: usize, j: usize) -> f64 {
        self.holder[i * self.nodes.len() + j]
    }

    pub fn weighted_mean(&self, theta: &[f64]) -> f64 {
        theta.iter().zip(&self.weights).map(|(t, w)| t * w).sum()
    }

    /// Largest ratio of a kernel's Hölder increments and bound values to
    /// their limits, over all node pairs.
    pub fn holder_ratio(&self, theta: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            let b = self.bounds[i];
            if b > 0.0 {
                worst = worst.max(theta[i].abs() / b);
            } else if theta[i] != 0.0 {
                return f64::INFINITY;
            }
            let row = &self.holder[i * self.len()..i * self.len() + i];
            for (tj, d) in theta[..i].iter().zip(row) {
                worst = worst.max((theta[i] - tj).abs() / d);
            }
        }
        worst
    }

    /// Largest amount by which a kernel breaks any constraint of the class,
    /// including the mean-zero equality.
    pub fn violation(&self, theta: &[f64]) -> f64 {
        let mut worst = self.weighted_mean(theta).abs();
        for i in 0..self.len() {
            worst = worst.max(theta[i].abs() - self.bounds[i]);
            for j in 0..i {
                worst = worst.max((theta[i] - theta[j]).abs() - self.holder_distance(i, j));
            }
        }
        worst.max(0.0)
    }
}

fn norm(z: &[f64; 2]) -> f64 {
    (z[0] * z[0] + z[1] * z[1]).sqrt()
}

fn dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// The linear program max Σθᵢcᵢ over the discretized class, stored in its
/// dual form `min dᵀy, Gᵀy + aη = c, y ≥ 0` so that the equality rows are
/// the (few) free nodes and the many Hölder pairs become columns.
#[derive(Debug, Clone)]
pub struct KernelLp {
    kernel: KernelGrid,
    active: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    matrix: Vec<f64>,
    cost: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct KernelOptimum {
    pub value: f64,
    /// Maximizing kernel over all nodes of the kernel grid.
    pub theta: Vec<f64>,
    pub pivots: usize,
}

impl KernelLp {
    pub fn new(kernel: &KernelGrid) -> Self {
        let active: Vec<usize> = (0..kernel.len()).filter(|&i| kernel.bounds[i] > 0.0).collect();
        let pairs = pair_set(kernel, &active);
        let rows = active.len();
        let cols = 2 * pairs.len() + 2 * rows + 2;
        let mut matrix = vec![0.0; rows * cols];
        let mut cost = Vec::with_capacity(cols);
        let mut col = 0;
        for &(a, b) in &pairs {
            let d = kernel.holder_distance(active[a], active[b]);
            for s in [1.0, -1.0] {
                matrix[a * cols + col] = s;
                matrix[b * cols + col] = -s;
                cost.push(d);
                col += 1;
            }
        }
        for r in 0..rows {
            for s in [1.0, -1.0] {
                matrix[r * cols + col] = s;
                cost.push(kernel.bounds[active[r]]);
                col += 1;
            }
        }
        for s in [1.0, -1.0] {
            for r in 0..rows {
                matrix[r * cols + col] = s * kernel.weights[active[r]];
            }
            cost.push(0.0);
            col += 1;
        }
        Self { kernel: kernel.clone(), active, pairs, matrix, cost }
    }

    pub fn kernel(&self) -> &KernelGrid {
        &self.kernel
    }

    /// Constraint pairs as indices into the kernel grid's nodes.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|&(a, b)| (self.active[a], self.active[b])).collect()
    }

    pub fn uses_all_pairs(&self) -> bool {
        let n = self.active.len();
        self.pairs.len() == n * (n - 1) / 2
    }

    /// max Σθᵢcᵢ over the class; equals max |Σθᵢcᵢ| by symmetry.
    pub fn maximize(&self, c: &[f64]) -> Result<KernelOptimum> {
        let mut theta = vec![0.0; self.kernel.len()];
        let rhs: Vec<f64> = self.active.iter().map(|&i| c[i]).collect();
        if rhs.iter().all(|v| *v == 0.0) {
            return Ok(KernelOptimum { value: 0.0, theta, pivots: 0 });
        }
        let sol = simplex::minimize(&self.matrix, &rhs, &self.cost)?;
        for (k, &i) in self.active.iter().enumerate() {
            theta[i] = sol.duals[k];
        }
        Ok(KernelOptimum { value: sol.value.max(0.0), theta, pivots: sol.pivots })
    }
}

fn pair_set(kernel: &KernelGrid, active: &[usize]) -> Vec<(usize, usize)> {
    let n = active.len();
    if n <= ALL_PAIRS_MAX_NODES {
        return (0..n).flat_map(|a| (0..a).map(move |b| (a, b))).collect();
    }
    let mut set = std::collections::BTreeSet::new();
    for a in 0..n {
        let mut others: Vec<(f64, usize)> = (0..n)
            .filter(|&b| b != a)
            .map(|b| (dist(&kernel.nodes[active[a]], &kernel.nodes[active[b]]), b))
            .collect();
        others.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for &(_, b) in others.iter().take(NEAREST) {
            set.insert((a.max(b), a.min(b)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PAIR_SEED);
    let mut candidates: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (0..a).map(move |b| (a, b))).filter(|p| !set.contains(p)).collect();
    candidates.sort_by(|x, y| {
        let dx = dist(&kernel.nodes[active[x.0]], &kernel.nodes[active[x.1]]);
        let dy = dist(&kernel.nodes[active[y.0]], &kernel.nodes[active[y.1]]);
        dy.total_cmp(&dx)
    });
    // long-range pairs drawn from the farther half of the remaining pairs
    candidates.truncate(candidates.len().div_ceil(2));
    candidates.shuffle(&mut rng);
    set.extend(candidates.into_iter().take(LONG_RANGE));
    set.into_iter().collect()
}

/// Fitted constant of the decay-weighted Hölder bound
/// |θ(x₁)-θ(x₂)| ≤ C |x₁-x₂|^α [(1+|x₁|)^{-n-ε} + (1+|x₂|)^{-n-ε}]
/// over a set of kernels.
pub fn kernel_decay_check(kernel: &KernelGrid, kernels: &[Vec<f64>], epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("decay exponent must be positive, got {epsilon}")));
    }
    let n = kernel.dim() as f64;
    let decay: Vec<f64> = kernel.nodes().iter().map(|z| (1.0 + norm(z)).powf(-n - epsilon)).collect();
    let mut worst: f64 = 0.0;
    for theta in kernels {
        for i in 0..kernel.len() {
            for j in 0..i {
                let den = kernel.holder_distance(i, j) * (decay[i] + decay[j]);
                worst = worst.max((theta[i] - theta[j]).abs() / den);
            }
        }
    }
    if !worst.is_finite() {
        return Err(Error::InvalidParameter("decay check produced a non-finite constant".into()));
    }
    Ok(worst)
}
