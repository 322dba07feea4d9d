//! Finite inner approximations of the kernel class: every vector returned is
//! feasible, so the best dictionary value is a certified lower bound for the
//! exact supremum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::kernel::KernelGrid;
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0xd1c7;

#[derive(Debug, Clone)]
pub struct Dictionary {
    kernel: KernelGrid,
    kernels: Vec<Vec<f64>>,
    requested: usize,
}

/// Maps a raw profile into the class: subtracts the weighted mean times a
/// fixed corrector and rescales so the largest constraint ratio is exactly 1.
struct Normalizer<'a> {
    kernel: &'a KernelGrid,
    corrector: Vec<f64>,
}

impl<'a> Normalizer<'a> {
    fn new(kernel: &'a KernelGrid) -> Self {
        let mut corrector = kernel.bounds().to_vec();
        let mass = kernel.weighted_mean(&corrector);
        corrector.iter_mut().for_each(|v| *v /= mass);
        Self { kernel, corrector }
    }

    fn finish(&self, mut theta: Vec<f64>) -> Option<Vec<f64>> {
        let mean = self.kernel.weighted_mean(&theta);
        for (t, c) in theta.iter_mut().zip(&self.corrector) {
            *t -= mean * c;
        }
        let ratio = self.kernel.holder_ratio(&theta);
        if !(ratio > 1e-12) || !ratio.is_finite() {
            return None;
        }
        theta.iter_mut().for_each(|v| *v /= ratio);
        Some(theta)
    }
}

fn bump(kernel: &KernelGrid, a: &[f64; 2], s: f64) -> Vec<f64> {
    let alpha = kernel.alpha();
    let raw: Vec<f64> = kernel
        .nodes()
        .iter()
        .zip(kernel.bounds())
        .map(|(z, b)| (1.0 - dist(z, a) / s).max(0.0).powf(alpha) * b)
        .collect();
    let mass = kernel.weighted_mean(&raw);
    if mass > 0.0 { raw.iter().map(|v| v / mass).collect() } else { raw }
}

fn dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> [f64; 2] {
    loop {
        let p = [rng.gen_range(-1.0..1.0), if dim == 2 { rng.gen_range(-1.0..1.0) } else { 0.0 }];
        if p[0] * p[0] + p[1] * p[1] < 1.0 {
            return p;
        }
    }
}

fn random_width(rng: &mut ChaCha8Rng, lo: f64) -> f64 {
    (rng.gen_range(lo.ln()..0.0f64)).exp()
}

/// Difference of two normalized bump profiles.
fn bump_pair(kernel: &KernelGrid, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let lo = kernel.spacing();
    let p = bump(kernel, &random_point(rng, kernel.dim()), random_width(rng, lo));
    let q = bump(kernel, &random_point(rng, kernel.dim()), random_width(rng, lo));
    p.iter().zip(&q).map(|(a, b)| a - b).collect()
}

/// Difference of two Hölder cones (s^α - |z-a|^α)₊ capped by the boundary bound.
fn cone_pair(kernel: &KernelGrid, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let alpha = kernel.alpha();
    let lo = kernel.spacing();
    let cone = |a: [f64; 2], s: f64| -> Vec<f64> {
        kernel
            .nodes()
            .iter()
            .zip(kernel.bounds())
            .map(|(z, b)| (s.powf(alpha) - dist(z, &a).powf(alpha)).max(0.0).min(*b))
            .collect()
    };
    let (a1, s1) = (random_point(rng, kernel.dim()), random_width(rng, lo));
    let (a2, s2) = (random_point(rng, kernel.dim()), random_width(rng, lo));
    let p = cone(a1, s1);
    let q = cone(a2, s2);
    let (mp, mq) = (kernel.weighted_mean(&p), kernel.weighted_mean(&q));
    if mq <= 0.0 {
        return p;
    }
    p.iter().zip(&q).map(|(a, b)| a - b * mp / mq).collect()
}

/// Smallest class member above prescribed values at a few anchors:
/// min_j (v_j + |z-a_j|^α), clipped to the boundary bound.
fn envelope(kernel: &KernelGrid, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let alpha = kernel.alpha();
    let k = rng.gen_range(1..=6);
    let anchors: Vec<([f64; 2], f64)> = (0..k)
        .map(|_| {
            let a = random_point(rng, kernel.dim());
            let b = (1.0 - (a[0] * a[0] + a[1] * a[1]).sqrt()).powf(alpha);
            (a, rng.gen_range(-b..b))
        })
        .collect();
    kernel
        .nodes()
        .iter()
        .zip(kernel.bounds())
        .map(|(z, b)| {
            let up = anchors.iter().map(|(a, v)| v + dist(z, a).powf(alpha)).fold(f64::INFINITY, f64::min);
            up.clamp(-b, *b)
        })
        .collect()
}

impl Dictionary {
    /// Differences of translated bump profiles, mean-projected and rescaled.
    pub fn bumps(kernel: &KernelGrid, size: usize, seed: u64) -> Result<Self> {
        Self::generate(kernel, size, seed, |k, rng, _| bump_pair(k, rng))
    }

    /// A larger mixture: bump differences, Hölder-cone differences and
    /// anchor envelopes (one third each).
    pub fn refined(kernel: &KernelGrid, size: usize, seed: u64) -> Result<Self> {
        Self::generate(kernel, size, seed, |k, rng, i| match i % 3 {
            0 => bump_pair(k, rng),
            1 => cone_pair(k, rng),
            _ => envelope(k, rng),
        })
    }

    fn generate(
        kernel: &KernelGrid,
        size: usize,
        seed: u64,
        draw: impl Fn(&KernelGrid, &mut ChaCha8Rng, usize) -> Vec<f64>,
    ) -> Result<Self> {
        if size < 8 {
            return Err(Error::InvalidParameter(format!("dictionary size must be at least 8, got {size}")));
        }
        let norm = Normalizer::new(kernel);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut kernels = Vec::with_capacity(size);
        let mut i = 0;
        while kernels.len() < size && i < 4 * size {
            if let Some(theta) = norm.finish(draw(kernel, &mut rng, i)) {
                kernels.push(theta);
            }
            i += 1;
        }
        Ok(Self { kernel: kernel.clone(), kernels, requested: size })
    }

    pub fn from_kernels(kernel: &KernelGrid, kernels: Vec<Vec<f64>>) -> Result<Self> {
        if kernels.iter().any(|k| k.len() != kernel.len()) {
            return Err(Error::InvalidParameter("kernel length does not match the kernel grid".into()));
        }
        let requested = kernels.len();
        Ok(Self { kernel: kernel.clone(), kernels, requested })
    }

    pub fn kernel_grid(&self) -> &KernelGrid {
        &self.kernel
    }

    pub fn kernels(&self) -> &[Vec<f64>] {
        &self.kernels
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    /// How many requested kernels could not be produced (degenerate draws).
    pub fn shortfall(&self) -> usize {
        self.requested.saturating_sub(self.kernels.len())
    }

    /// max_d |Σᵢ θ_d,ᵢ cᵢ|.
    pub fn best(&self, c: &[f64]) -> f64 {
        self.kernels
            .iter()
            .map(|k| k.iter().zip(c).map(|(a, b)| a * b).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }
}

/// Result of adaptively refining a dictionary toward one objective.
#[derive(Debug, Clone)]
pub struct RefinedBound {
    pub value: f64,
    pub kernel: Vec<f64>,
    /// Kernels examined, pool included.
    pub examined: usize,
}

/// Certified lower bound for max |Σθᵢcᵢ| by local refinement of the best
/// pool kernel. Each move carves a Hölder cusp down into the current kernel,
/// min(θ, θ(a) - δ + |z-a|^α), or pushes one up, max(θ, θ(a) + δ - |z-a|^α);
/// both keep the Hölder bound, and the result is mean-projected and
/// rescaled like every dictionary member. Improving moves are kept.
pub fn refined_lower_bound(pool: &Dictionary, c: &[f64], moves: usize, seed: u64) -> RefinedBound {
    let kernel = &pool.kernel;
    let norm = Normalizer::new(kernel);
    let dot = |t: &[f64]| t.iter().zip(c).map(|(a, b)| a * b).sum::<f64>();
    let mut cur = vec![0.0; kernel.len()];
    let mut best = 0.0;
    for k in &pool.kernels {
        let v = dot(k);
        if v.abs() > best {
            best = v.abs();
            cur = k.iter().map(|x| x * v.signum()).collect();
        }
    }
    let n = kernel.len();
    let alpha = kernel.alpha();
    let steps = [0.3, 0.1, 0.03, 0.01, 0.003];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut examined = pool.len();
    for _ in 0..moves {
        let a = rng.gen_range(0..n);
        let za = kernel.nodes()[a];
        let d = steps[rng.gen_range(0..steps.len())];
        let up = rng.gen_bool(0.5);
        let level = cur[a];
        let raw: Vec<f64> = kernel
            .nodes()
            .iter()
            .zip(kernel.bounds())
            .zip(&cur)
            .map(|((z, b), &v)| {
                let cone = dist(z, &za).powf(alpha);
                let moved = if up { v.max(level + d - cone) } else { v.min(level - d + cone) };
                moved.clamp(-b, *b)
            })
            .collect();
        examined += 1;
        if let Some(theta) = norm.finish(raw) {
            let v = dot(&theta);
            if v > best {
                best = v;
                cur = theta;
            }
        }
    }
    RefinedBound { value: best, kernel: cur, examined }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outputs_are_feasible() {
        for (alpha, m, dim) in [(0.5, 41, 1), (1.0, 21, 1), (0.5, 9, 2)] {
            let k = KernelGrid::new(alpha, m, dim).unwrap();
            for d in [Dictionary::bumps(&k, 128, 1).unwrap(), Dictionary::refined(&k, 300, 2).unwrap()] {
                assert_eq!(d.shortfall(), 0);
                for theta in d.kernels() {
                    assert!(k.weighted_mean(theta).abs() < 1e-9);
                    assert!(k.holder_ratio(theta) <= 1.0 + 1e-9);
                    assert!(k.violation(theta) < 1e-9);
                }
            }
        }
    }

    #[test]
    fn deterministic_and_size_checked() {
        let k = KernelGrid::new(0.5, 21, 1).unwrap();
        let a = Dictionary::bumps(&k, 16, 7).unwrap();
        let b = Dictionary::bumps(&k, 16, 7).unwrap();
        assert_eq!(a.kernels(), b.kernels());
        assert!(Dictionary::bumps(&k, 4, 7).is_err());
    }
}
