//! Luxembourg-type gauges on balls and the space norms built from them:
//! Musielak-Orlicz Morrey, weighted Orlicz-Morrey, Campanato (plain and
//! star), BMO, classical Morrey and the global L^φ norm.
//!
//! Every "sup over all balls" is a maximum over the [`BallFamily`] carried by
//! the [`SpaceSpec`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Ball, BallFamily, Grid, GridFunction};
use crate::growth::{Conjugator, GrowthFunction, OuterFunction, Weight, YoungFunction};

const MAX_ITER: usize = 200;
const REL_WIDTH: f64 = 1e-14;

/// Solves `modular(μ) = 1` for a continuous strictly decreasing modular by
/// bisection in log scale, starting from `[1e-12·scale, 1e12·scale]` and
/// widening by decades when that bracket misses.
pub fn gauge(modular: impl Fn(f64) -> f64, scale: f64) -> Result<f64> {
    let mut lo = 1e-12 * scale;
    let mut hi = 1e12 * scale;
    let mut widen = 0;
    while modular(lo) < 1.0 {
        lo *= 1e-10;
        widen += 1;
        if widen > 28 || lo == 0.0 {
            return Err(Error::LuxembourgBracket);
        }
    }
    while modular(hi) > 1.0 {
        hi *= 1e10;
        widen += 1;
        if widen > 28 || !hi.is_finite() {
            return Err(Error::LuxembourgBracket);
        }
    }
    for _ in 0..MAX_ITER {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        let v = modular(mid);
        if !v.is_finite() && v.is_nan() {
            return Err(Error::LuxembourgBracket);
        }
        if v > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 <= REL_WIDTH {
            break;
        }
    }
    Ok((lo * hi).sqrt())
}

struct BallSample {
    idx: Vec<usize>,
    coords: Vec<[f64; 2]>,
    dv: f64,
}

impl BallSample {
    fn new(grid: &Grid, ball: &Ball) -> Result<Self> {
        let idx = grid.indices_in_ball(ball);
        if idx.is_empty() {
            return Err(Error::BallOffGrid);
        }
        let coords = idx.iter().map(|&i| grid.coord(i)).collect();
        Ok(Self { idx, coords, dv: grid.cell_volume() })
    }

    fn measure(&self) -> f64 {
        self.idx.len() as f64 * self.dv
    }

    fn values<'a>(&'a self, f: &'a GridFunction) -> impl Iterator<Item = f64> + 'a {
        self.idx.iter().map(move |&i| f.values()[i])
    }
}

/// φ(B,t) = ∫_B φ(x,t) dx.
pub fn growth_measure(phi: &GrowthFunction, grid: &Grid, ball: &Ball, t: f64) -> Result<f64> {
    let s = BallSample::new(grid, ball)?;
    Ok(s.coords.iter().map(|x| phi.eval(x, t)).sum::<f64>() * s.dv)
}

/// ‖f‖_{φ,B}: the μ with (1/φ(B,1)) ∫_B φ(x,|f|/μ) dx = 1.
pub fn luxembourg_norm_ball(f: &GridFunction, phi: &GrowthFunction, ball: &Ball) -> Result<f64> {
    let s = BallSample::new(f.grid(), ball)?;
    let absf: Vec<f64> = s.values(f).map(f64::abs).collect();
    let m = absf.iter().cloned().fold(0.0, f64::max);
    if m == 0.0 {
        return Ok(0.0);
    }
    let normalizer: f64 = s.coords.iter().map(|x| phi.eval(x, 1.0)).sum::<f64>() * s.dv;
    gauge(
        |mu| {
            s.coords.iter().zip(&absf).map(|(x, &v)| phi.eval(x, v / mu)).sum::<f64>() * s.dv / normalizer
        },
        m,
    )
}

/// The ball modular (1/φ(B,1)) ∫_B φ(x,|f|/μ) dx, exposed for unit-ball checks.
pub fn ball_modular(f: &GridFunction, phi: &GrowthFunction, ball: &Ball, mu: f64) -> Result<f64> {
    let s = BallSample::new(f.grid(), ball)?;
    let normalizer: f64 = s.coords.iter().map(|x| phi.eval(x, 1.0)).sum::<f64>() * s.dv;
    Ok(s.coords.iter().zip(s.values(f)).map(|(x, v)| phi.eval(x, v.abs() / mu)).sum::<f64>() * s.dv / normalizer)
}

enum PointwiseConjugate<'a> {
    Uniform(Conjugator<Box<dyn Fn(f64) -> f64 + 'a>>),
    PerPoint(Vec<Conjugator<Box<dyn Fn(f64) -> f64 + 'a>>>),
}

impl<'a> PointwiseConjugate<'a> {
    fn new(psi: &'a GrowthFunction, coords: &'a [[f64; 2]], uniform: bool) -> Self {
        if uniform {
            let x = coords[0];
            Self::Uniform(Conjugator::new(Box::new(move |t| psi.eval(&x, t))))
        } else {
            Self::PerPoint(
                coords
                    .iter()
                    .map(|x| {
                        let x = *x;
                        Conjugator::new(Box::new(move |t| psi.eval(&x, t)) as Box<dyn Fn(f64) -> f64>)
                    })
                    .collect(),
            )
        }
    }

    fn eval(&self, k: usize, s: f64) -> Result<f64> {
        match self {
            Self::Uniform(c) => c.eval(s),
            Self::PerPoint(cs) => cs[k].eval(s),
        }
    }
}

/// ‖g‖_{ψ̃,B}: the μ with (1/φ(B,1)) ∫_B ψ̃(x,|g|/μ) φ(x,1) dx = 1.
pub fn complementary_norm_ball(g: &GridFunction, phi: &GrowthFunction, ball: &Ball) -> Result<f64> {
    let s = BallSample::new(g.grid(), ball)?;
    let absg: Vec<f64> = s.values(g).map(f64::abs).collect();
    let m = absg.iter().cloned().fold(0.0, f64::max);
    if m == 0.0 {
        return Ok(0.0);
    }
    let psi = phi.normalized_psi();
    let conj = PointwiseConjugate::new(&psi, &s.coords, phi.normalized_is_uniform());
    let weights: Vec<f64> = s.coords.iter().map(|x| phi.eval(x, 1.0)).collect();
    let normalizer: f64 = weights.iter().sum::<f64>() * s.dv;
    let failure = std::cell::RefCell::new(None);
    let mu = gauge(
        |mu| {
            let mut acc = 0.0;
            for (k, (&v, &w)) in absg.iter().zip(&weights).enumerate() {
                match conj.eval(k, v / mu) {
                    Ok(c) => acc += c * w,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        return f64::INFINITY;
                    }
                }
            }
            acc * s.dv / normalizer
        },
        m,
    );
    match mu {
        Ok(mu) => Ok(mu),
        Err(e) => Err(failure.into_inner().unwrap_or(e)),
    }
}

/// The complementary ball modular at a given μ.
pub fn complementary_ball_modular(g: &GridFunction, phi: &GrowthFunction, ball: &Ball, mu: f64) -> Result<f64> {
    let s = BallSample::new(g.grid(), ball)?;
    let psi = phi.normalized_psi();
    let mut acc = 0.0;
    let mut normalizer = 0.0;
    for (x, v) in s.coords.iter().zip(s.values(g)) {
        let w = phi.eval(x, 1.0);
        acc += Conjugator::new(|t| psi.eval(x, t)).eval(v.abs() / mu)? * w;
        normalizer += w;
    }
    Ok(acc / normalizer)
}

/// ‖f‖_{L^φ}: the μ with ∫ φ(x,|f|/μ) dx = 1 over the whole grid.
pub fn luxembourg_norm_global(f: &GridFunction, phi: &GrowthFunction) -> Result<f64> {
    let g = f.grid();
    let m = f.max_abs();
    if m == 0.0 {
        return Ok(0.0);
    }
    let coords: Vec<[f64; 2]> = g.coords().collect();
    let dv = g.cell_volume();
    gauge(
        |mu| coords.iter().zip(f.values()).map(|(x, v)| phi.eval(x, v.abs() / mu)).sum::<f64>() * dv,
        m,
    )
}

/// ‖χ_B‖_{L^φ}: the μ with ∫_B φ(x,1/μ) dx = 1.
pub fn chi_ball_norm(phi: &GrowthFunction, grid: &Grid, ball: &Ball) -> Result<f64> {
    let s = BallSample::new(grid, ball)?;
    gauge(|mu| s.coords.iter().map(|x| phi.eval(x, 1.0 / mu)).sum::<f64>() * s.dv, 1.0)
}

/// (|B|^{-κ} ∫_B |f|^p)^{1/p} on one ball.
pub fn classical_morrey_ball(f: &GridFunction, p: f64, kappa: f64, ball: &Ball) -> Result<f64> {
    let s = BallSample::new(f.grid(), ball)?;
    let integral: f64 = s.values(f).map(|v| v.abs().powf(p)).sum::<f64>() * s.dv;
    Ok((s.measure().powf(-kappa) * integral).powf(1.0 / p))
}

pub fn classical_morrey_norm(f: &GridFunction, p: f64, kappa: f64, balls: &BallFamily) -> Result<f64> {
    SpaceSpec::classical_morrey(p, kappa, balls.clone())?.norm(f)
}

/// (1/|B| ∫_B |b - b_B|^p)^{1/p} on one ball.
pub fn oscillation_ball(b: &GridFunction, p: f64, ball: &Ball) -> Result<f64> {
    let s = BallSample::new(b.grid(), ball)?;
    let n = s.idx.len() as f64;
    let mean = s.values(b).sum::<f64>() / n;
    Ok((s.values(b).map(|v| (v - mean).abs().powf(p)).sum::<f64>() / n).powf(1.0 / p))
}

/// sup over the family of the L^p mean oscillation.
pub fn oscillation_norm(b: &GridFunction, p: f64, balls: &BallFamily) -> Result<f64> {
    let vals: Result<Vec<f64>> = balls.balls().par_iter().map(|ball| oscillation_ball(b, p, ball)).collect();
    Ok(vals?.into_iter().fold(0.0, f64::max))
}

pub fn bmo_norm(b: &GridFunction, balls: &BallFamily) -> Result<f64> {
    oscillation_norm(b, 1.0, balls)
}

/// Ratio of (1/φ(B,1)) ∫_B |f||g| φ(x,1) dx to ‖f‖_{φ,B} ‖g‖_{ψ̃,B}; at most 2.
pub fn generalized_holder_check(f: &GridFunction, g: &GridFunction, phi: &GrowthFunction, ball: &Ball) -> Result<f64> {
    let s = BallSample::new(f.grid(), ball)?;
    let mut lhs = 0.0;
    let mut normalizer = 0.0;
    for ((x, a), b) in s.coords.iter().zip(s.values(f)).zip(s.values(g)) {
        let w = phi.eval(x, 1.0);
        lhs += a.abs() * b.abs() * w;
        normalizer += w;
    }
    lhs /= normalizer;
    if lhs == 0.0 {
        return Ok(0.0);
    }
    let nf = luxembourg_norm_ball(f, phi, ball)?;
    let ng = complementary_norm_ball(g, phi, ball)?;
    Ok(lhs / (nf * ng))
}

#[derive(Debug, Clone)]
pub enum SpaceKind {
    MusielakMorrey { phi: GrowthFunction, outer: OuterFunction },
    WeightedOrliczMorrey { young: YoungFunction, weight: Weight, outer: OuterFunction },
    Campanato { phi: GrowthFunction, q: f64 },
    CampanatoStar { phi: GrowthFunction, q: f64 },
    Bmo,
    ClassicalMorrey { p: f64, kappa: f64 },
    LPhi { phi: GrowthFunction },
}

impl SpaceKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::MusielakMorrey { .. } => "musielak_morrey",
            Self::WeightedOrliczMorrey { .. } => "weighted_orlicz_morrey",
            Self::Campanato { .. } => "campanato",
            Self::CampanatoStar { .. } => "campanato_star",
            Self::Bmo => "bmo",
            Self::ClassicalMorrey { .. } => "classical_morrey",
            Self::LPhi { .. } => "l_phi",
        }
    }
}

/// A function space: its defining data and the ball family its norm ranges over.
#[derive(Debug, Clone)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    pub balls: BallFamily,
}

impl SpaceSpec {
    pub fn new(kind: SpaceKind, balls: BallFamily) -> Result<Self> {
        match &kind {
            SpaceKind::Campanato { q, .. } | SpaceKind::CampanatoStar { q, .. } if !(*q >= 1.0 && q.is_finite()) => {
                return Err(Error::InvalidParameter(format!("Campanato exponent q must be in [1, inf), got {q}")));
            }
            SpaceKind::ClassicalMorrey { p, kappa } if !(*p >= 1.0 && (0.0..1.0).contains(kappa)) => {
                return Err(Error::InvalidParameter(format!(
                    "classical Morrey needs p >= 1 and kappa in [0,1), got p={p}, kappa={kappa}"
                )));
            }
            _ => {}
        }
        Ok(Self { kind, balls })
    }

    pub fn musielak_morrey(phi: GrowthFunction, outer: OuterFunction, balls: BallFamily) -> Result<Self> {
        Self::new(SpaceKind::MusielakMorrey { phi, outer }, balls)
    }

    pub fn weighted_orlicz_morrey(
        young: YoungFunction,
        weight: Weight,
        outer: OuterFunction,
        balls: BallFamily,
    ) -> Result<Self> {
        Self::new(SpaceKind::WeightedOrliczMorrey { young, weight, outer }, balls)
    }

    pub fn campanato(phi: GrowthFunction, q: f64, balls: BallFamily) -> Result<Self> {
        Self::new(SpaceKind::Campanato { phi, q }, balls)
    }

    pub fn campanato_star(phi: GrowthFunction, q: f64, balls: BallFamily) -> Result<Self> {
        Self::new(SpaceKind::CampanatoStar { phi, q }, balls)
    }

    pub fn bmo(balls: BallFamily) -> Self {
        Self { kind: SpaceKind::Bmo, balls }
    }

    pub fn classical_morrey(p: f64, kappa: f64, balls: BallFamily) -> Result<Self> {
        Self::new(SpaceKind::ClassicalMorrey { p, kappa }, balls)
    }

    pub fn l_phi(phi: GrowthFunction, balls: BallFamily) -> Self {
        Self { kind: SpaceKind::LPhi { phi }, balls }
    }

    /// Value of the norm's inner expression on a single ball.
    pub fn ball_value(&self, f: &GridFunction, ball: &Ball) -> Result<f64> {
        let grid = f.grid();
        match &self.kind {
            SpaceKind::MusielakMorrey { phi, outer } => {
                let lux = luxembourg_norm_ball(f, phi, ball)?;
                if lux == 0.0 {
                    return Ok(0.0);
                }
                Ok(outer.eval_at(&ball.center, growth_measure(phi, grid, ball, 1.0)?) * lux)
            }
            SpaceKind::WeightedOrliczMorrey { young, weight, outer } => {
                weighted_orlicz_ball(f, young, weight, outer, ball)
            }
            SpaceKind::Campanato { phi, q } => campanato_ball(f, phi, *q, ball, false),
            SpaceKind::CampanatoStar { phi, q } => campanato_ball(f, phi, *q, ball, true),
            SpaceKind::Bmo => oscillation_ball(f, 1.0, ball),
            SpaceKind::ClassicalMorrey { p, kappa } => classical_morrey_ball(f, *p, *kappa, ball),
            SpaceKind::LPhi { .. } => Err(Error::InvalidParameter("L^φ has no per-ball expression".into())),
        }
    }

    /// Per-ball values in family order (a single entry for L^φ).
    pub fn ball_values(&self, f: &GridFunction) -> Result<Vec<f64>> {
        if let SpaceKind::LPhi { phi } = &self.kind {
            return Ok(vec![luxembourg_norm_global(f, phi)?]);
        }
        self.balls.balls().par_iter().map(|b| self.ball_value(f, b)).collect()
    }

    pub fn norm(&self, f: &GridFunction) -> Result<f64> {
        Ok(self.ball_values(f)?.into_iter().fold(0.0, f64::max))
    }
}

fn weighted_orlicz_ball(
    f: &GridFunction,
    young: &YoungFunction,
    weight: &Weight,
    outer: &OuterFunction,
    ball: &Ball,
) -> Result<f64> {
    let s = BallSample::new(f.grid(), ball)?;
    let absf: Vec<f64> = s.values(f).map(f64::abs).collect();
    let m = absf.iter().cloned().fold(0.0, f64::max);
    if m == 0.0 {
        return Ok(0.0);
    }
    let ws: Vec<f64> = s.coords.iter().map(|x| weight.at(x)).collect();
    let wb = ws.iter().sum::<f64>() * s.dv;
    let normalizer = wb * outer.eval_at(&ball.center, wb);
    gauge(
        |mu| absf.iter().zip(&ws).map(|(&v, &w)| young.eval(v / mu) * w).sum::<f64>() * s.dv / normalizer,
        m,
    )
}

fn campanato_ball(f: &GridFunction, phi: &GrowthFunction, q: f64, ball: &Ball, star: bool) -> Result<f64> {
    let s = BallSample::new(f.grid(), ball)?;
    let chi = gauge(|mu| s.coords.iter().map(|x| phi.eval(x, 1.0 / mu)).sum::<f64>() * s.dv, 1.0)?;
    let level = 1.0 / chi;
    let center = if star {
        s.values(f).fold(f64::INFINITY, f64::min)
    } else {
        s.values(f).sum::<f64>() / s.idx.len() as f64
    };
    let integral: f64 = s
        .coords
        .iter()
        .zip(s.values(f))
        .map(|(x, v)| {
            let w = phi.eval(x, level);
            ((v - center).abs() / w).powf(q) * w
        })
        .sum::<f64>()
        * s.dv;
    Ok(integral.powf(1.0 / q) / chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::log_space;
    use rand::{Rng, SeedableRng};

    fn grid() -> Grid {
        Grid::interval(-1.0, 1.0, 257).unwrap()
    }

    #[test]
    fn luxembourg_constant_and_power_cases() {
        let g = grid();
        let phi = GrowthFunction::power(2.0).unwrap();
        let b = Ball::new(&[0.1], 0.3);
        let c = GridFunction::constant(g, 1.7);
        assert!((luxembourg_norm_ball(&c, &phi, &b).unwrap() - 1.7).abs() < 1e-12);

        // f(x) = x on B = (0,1): ((1/|B|)∫ x^2)^{1/2} = 1/√3 in the limit
        let g = Grid::new(&[1.0 / 2048.0], &[1024], 1.0 / 1024.0).unwrap();
        let f = GridFunction::from_fn(g, |x| x[0]).unwrap();
        let b = Ball::new(&[0.5], 0.5);
        let v = luxembourg_norm_ball(&f, &phi, &b).unwrap();
        let discrete = (f.values().iter().map(|x| x * x).sum::<f64>() / 1024.0).sqrt();
        assert!((v - discrete).abs() < 1e-12);
        assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-6);

        assert_eq!(luxembourg_norm_ball(&GridFunction::zeros(grid()), &phi, &b).unwrap(), 0.0);
    }

    #[test]
    fn unit_ball_property() {
        let g = grid();
        let f = GridFunction::from_fn(g, |x| (3.0 * x[0]).sin() + 0.2).unwrap();
        let w = Weight::new(GridFunction::from_fn(g, |x| 1.0 + x[0] * x[0]).unwrap()).unwrap();
        for phi in [
            GrowthFunction::power(1.5).unwrap(),
            GrowthFunction::weighted_power(w.clone(), 3.0).unwrap(),
            GrowthFunction::weighted_orlicz(w, YoungFunction::sum_of_powers(vec![(1.0, 2.0), (1.0, 3.0)]).unwrap())
                .unwrap(),
        ] {
            let b = Ball::new(&[0.2], 0.5);
            let mu = luxembourg_norm_ball(&f, &phi, &b).unwrap();
            assert!((ball_modular(&f, &phi, &b, mu).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn homogeneity_and_monotonicity() {
        let g = grid();
        let f = GridFunction::from_fn(g, |x| x[0].cos() * x[0]).unwrap();
        let bigger = f.map(|v| 1.5 * v.abs() + 0.1).unwrap();
        let phi = GrowthFunction::orlicz(YoungFunction::sum_of_powers(vec![(1.0, 2.0), (0.5, 3.5)]).unwrap()).unwrap();
        let b = Ball::new(&[-0.2], 0.6);
        let base = luxembourg_norm_ball(&f, &phi, &b).unwrap();
        for c in [0.5, 2.0, 10.0] {
            let v = luxembourg_norm_ball(&f.scaled(c), &phi, &b).unwrap();
            assert!((v / (c * base) - 1.0).abs() < 1e-8);
        }
        assert!(luxembourg_norm_ball(&bigger, &phi, &b).unwrap() >= base);
    }

    #[test]
    fn quasi_triangle_constant_is_stable() {
        let g = grid();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let phi = GrowthFunction::power(0.5).unwrap();
        let mut ks = Vec::new();
        for _ in 0..100 {
            let f = GridFunction::new(g, (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
            let h = GridFunction::new(g, (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
            let b = Ball::new(&[rng.gen_range(-0.8..0.8)], rng.gen_range(0.05..0.5));
            let sum = f.zip_with(&h, |a, c| a + c).unwrap();
            let lhs = luxembourg_norm_ball(&sum, &phi, &b).unwrap();
            let rhs = luxembourg_norm_ball(&f, &phi, &b).unwrap() + luxembourg_norm_ball(&h, &phi, &b).unwrap();
            ks.push(lhs / rhs);
        }
        // for p = 1/2 the gauge is a quasi-norm with constant at most 2^{1/p - 1} = 2
        let k = ks.iter().cloned().fold(0.0, f64::max);
        assert!(k <= 2.0 && k > 0.0);
        let convex = GrowthFunction::power(2.0).unwrap();
        let f = GridFunction::from_fn(g, |x| x[0]).unwrap();
        let h = GridFunction::from_fn(g, |x| 1.0 - x[0] * x[0]).unwrap();
        let b = Ball::new(&[0.0], 0.9);
        let lhs = luxembourg_norm_ball(&f.zip_with(&h, |a, c| a + c).unwrap(), &convex, &b).unwrap();
        let rhs = luxembourg_norm_ball(&f, &convex, &b).unwrap() + luxembourg_norm_ball(&h, &convex, &b).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn complementary_norm_cases() {
        let g = grid();
        let phi = GrowthFunction::power(2.0).unwrap();
        let b = Ball::new(&[0.0], 0.5);
        let c = GridFunction::constant(g, 3.0);
        let v = complementary_norm_ball(&c, &phi, &b).unwrap();
        assert!((v - 1.5).abs() < 1e-8);
        assert_eq!(complementary_norm_ball(&GridFunction::zeros(g), &phi, &b).unwrap(), 0.0);
        let f = GridFunction::from_fn(g, |x| x[0].exp()).unwrap();
        let mu = complementary_norm_ball(&f, &phi, &b).unwrap();
        assert!((complementary_ball_modular(&f, &phi, &b, mu).unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn global_norm_cases() {
        let g = Grid::new(&[1.0 / 512.0], &[512], 1.0 / 256.0).unwrap(); // midpoints of (0,2)
        let chi = GridFunction::from_fn(g, |x| if x[0] < 1.0 { 1.0 } else { 0.0 }).unwrap();
        let sq = GrowthFunction::power(2.0).unwrap();
        assert!((luxembourg_norm_global(&chi, &sq).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(luxembourg_norm_global(&GridFunction::zeros(g), &sq).unwrap(), 0.0);
        let two = Weight::new(GridFunction::constant(g, 2.0)).unwrap();
        let weighted = GrowthFunction::weighted_power(two, 2.0).unwrap();
        let f = GridFunction::from_fn(g, |x| x[0].sin()).unwrap();
        let l2 = luxembourg_norm_global(&f, &sq).unwrap();
        let oracle = (f.values().iter().map(|v| v * v).sum::<f64>() * g.spacing()).sqrt();
        assert!((l2 - oracle).abs() < 1e-12);
        assert!((luxembourg_norm_global(&f, &weighted).unwrap() - 2f64.sqrt() * oracle).abs() < 1e-12);
    }

    #[test]
    fn chi_ball_norm_cases() {
        let g = Grid::new(&[1.0 / 512.0], &[1024], 1.0 / 256.0).unwrap(); // midpoints of (0,4)
        let unit = Ball::new(&[0.5], 0.5);
        let four = Ball::new(&[2.0], 2.0);
        let p3 = GrowthFunction::power(3.0).unwrap();
        assert!((chi_ball_norm(&p3, &g, &unit).unwrap() - 1.0).abs() < 1e-12);
        let sq = GrowthFunction::power(2.0).unwrap();
        let mu = chi_ball_norm(&sq, &g, &four).unwrap();
        assert!((mu - 2.0).abs() < 1e-12);
        assert!((growth_measure(&sq, &g, &four, 1.0 / mu).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn morrey_coincides_with_classical() {
        let g = grid();
        let fam = BallFamily::default_for(&g);
        let f = GridFunction::from_fn(g, |x| (x[0].abs().max(g.spacing())).powf(-0.25)).unwrap();
        let mo = SpaceSpec::musielak_morrey(GrowthFunction::power(2.0).unwrap(), OuterFunction::Power(0.25), fam.clone())
            .unwrap();
        let classical = classical_morrey_norm(&f, 2.0, 0.5, &fam).unwrap();
        assert!((mo.norm(&f).unwrap() / classical - 1.0).abs() < 1e-8);
        assert_eq!(mo.norm(&GridFunction::zeros(g)).unwrap(), 0.0);
    }

    #[test]
    fn morrey_singular_member_is_scale_stable() {
        // f = |x|^{-(1-κ)/p} has the same classical Morrey value on every
        // origin-centered ball
        let n = 4096;
        let h = 2.0 / n as f64;
        let g = Grid::new(&[-1.0 + h / 2.0], &[n], h).unwrap();
        let (p, kappa) = (2.0, 0.5);
        let f = GridFunction::from_fn(g, |x| x[0].abs().powf(-(1.0 - kappa) / p)).unwrap();
        let vals: Vec<f64> = [16.0, 64.0, 256.0, 1024.0]
            .iter()
            .map(|k| classical_morrey_ball(&f, p, kappa, &Ball::new(&[0.0], k * h)).unwrap())
            .collect();
        let (lo, hi) = (vals.iter().cloned().fold(f64::INFINITY, f64::min), vals.iter().cloned().fold(0.0, f64::max));
        assert!(hi / lo < 1.1, "{vals:?}");
    }

    #[test]
    fn classical_morrey_closed_forms() {
        let g = grid();
        let fam = BallFamily::default_for(&g);
        let c = GridFunction::constant(g, 2.0);
        for kappa in [0.0, 0.3, 0.75] {
            let v = classical_morrey_norm(&c, 2.0, kappa, &fam).unwrap();
            let oracle = fam
                .balls()
                .iter()
                .map(|b| 2.0 * crate::grid::ball_measure(&g, b).unwrap().powf((1.0 - kappa) / 2.0))
                .fold(0.0, f64::max);
            assert!((v - oracle).abs() < 1e-12 * oracle);
        }
        // κ = 0: the largest ball carries the sup of the L^p ball norms
        let f = GridFunction::from_fn(g, |x| x[0].sin()).unwrap();
        let v = classical_morrey_norm(&f, 2.0, 0.0, &fam).unwrap();
        let direct = fam
            .balls()
            .iter()
            .map(|b| (crate::grid::integrate_ball(&f.map(|v| v * v).unwrap(), b).unwrap()).sqrt())
            .fold(0.0, f64::max);
        assert!((v - direct).abs() < 1e-12);
        assert_eq!(classical_morrey_norm(&GridFunction::zeros(g), 2.0, 0.5, &fam).unwrap(), 0.0);
        assert!(classical_morrey_norm(&f, 0.5, 0.1, &fam).is_err());
    }

    #[test]
    fn weighted_orlicz_reductions() {
        let g = grid();
        let fam = BallFamily::default_for(&g);
        let unit = Weight::unit(g);
        let young = YoungFunction::power(2.0).unwrap();
        let spec = SpaceSpec::weighted_orlicz_morrey(young.clone(), unit.clone(), OuterFunction::Power(-1.0), fam.clone())
            .unwrap();
        let f = GridFunction::from_fn(g, |x| x[0] * x[0] - 0.3).unwrap();
        let direct = fam
            .balls()
            .iter()
            .map(|b| (crate::grid::integrate_ball(&f.map(|v| v * v).unwrap(), b).unwrap()).sqrt())
            .fold(0.0, f64::max);
        assert!((spec.norm(&f).unwrap() / direct - 1.0).abs() < 1e-8);

        let w = Weight::new(GridFunction::from_fn(g, |x| 1.0 + 0.5 * x[0]).unwrap()).unwrap();
        let mixed = YoungFunction::sum_of_powers(vec![(1.0, 2.0), (1.0, 3.0)]).unwrap();
        let outer = OuterFunction::Power(-0.5);
        let spec = SpaceSpec::weighted_orlicz_morrey(mixed.clone(), w.clone(), outer.clone(), fam.clone()).unwrap();
        let c = GridFunction::constant(g, 0.8);
        let vals = spec.ball_values(&c).unwrap();
        for (b, v) in fam.balls().iter().zip(vals) {
            let wb = w.measure(b).unwrap();
            let oracle = 0.8 / mixed.inverse(outer.eval(wb));
            assert!((v / oracle - 1.0).abs() < 1e-9);
        }
        assert_eq!(spec.norm(&GridFunction::zeros(g)).unwrap(), 0.0);
    }

    #[test]
    fn campanato_cases() {
        let g = grid();
        let fam = BallFamily::default_for(&g);
        let phi = GrowthFunction::power(1.0).unwrap();
        let camp = SpaceSpec::campanato(phi.clone(), 2.0, fam.clone()).unwrap();
        assert_eq!(camp.norm(&GridFunction::constant(g, 4.0)).unwrap(), 0.0);
        let f = GridFunction::from_fn(g, |x| (2.0 * x[0]).sin() + x[0].abs()).unwrap();
        let a = camp.norm(&f).unwrap();
        let b = camp.norm(&f.add_constant(7.5)).unwrap();
        assert!((a - b).abs() < 1e-10 * a);
        assert!(SpaceSpec::campanato(phi.clone(), 0.5, fam.clone()).is_err());

        // q = 1, φ = t: mean |f - f_B| ≤ 2 mean (f - ess inf) per ball
        let c1 = SpaceSpec::campanato(phi.clone(), 1.0, fam.clone()).unwrap();
        let s1 = SpaceSpec::campanato_star(phi, 1.0, fam.clone()).unwrap();
        let lhs = c1.ball_values(&f).unwrap();
        let rhs = s1.ball_values(&f).unwrap();
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!(*l <= 2.0 * r + 1e-12);
        }
    }

    #[test]
    fn campanato_with_phi_t_is_mean_oscillation() {
        let g = grid();
        let fam = BallFamily::default_for(&g);
        let f = GridFunction::from_fn(g, |x| x[0].powi(3)).unwrap();
        let camp = SpaceSpec::campanato(GrowthFunction::power(1.0).unwrap(), 2.0, fam.clone()).unwrap();
        let osc = oscillation_norm(&f, 2.0, &fam).unwrap();
        assert!((camp.norm(&f).unwrap() / osc - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bmo_cases() {
        let g = Grid::new(&[1.0 / 4096.0], &[2048], 1.0 / 2048.0).unwrap();
        let balls: Vec<Ball> = [0.03125, 0.0625, 0.125, 0.25, 0.5].iter().map(|&r| Ball::new(&[0.5], r)).collect();
        let fam = BallFamily::from_balls(balls.clone()).unwrap();
        assert_eq!(bmo_norm(&GridFunction::constant(g, 2.0), &fam).unwrap(), 0.0);
        let f = GridFunction::from_fn(g, |x| x[0]).unwrap();
        for b in &balls {
            let v = oscillation_ball(&f, 1.0, b).unwrap();
            assert!((v - b.radius / 2.0).abs() < 2.0 * g.spacing());
        }
        assert!((bmo_norm(&f, &fam).unwrap() - 0.25).abs() < 2.0 * g.spacing());
    }

    #[test]
    fn bmo_log_is_refinement_stable() {
        let mut vals = Vec::new();
        let mut g = Grid::interval(-1.0, 1.0, 257).unwrap();
        for _ in 0..3 {
            let h = g.spacing();
            let b = GridFunction::from_fn(g, |x| -(x[0].abs().max(h)).ln()).unwrap();
            let fam = BallFamily::dyadic(&g, 4, 1.0 / 64.0).unwrap();
            vals.push(bmo_norm(&b, &fam).unwrap());
            g = g.refined();
        }
        let (lo, hi) = (vals.iter().cloned().fold(f64::INFINITY, f64::min), vals.iter().cloned().fold(0.0, f64::max));
        assert!(hi / lo < 1.1, "{vals:?}");
    }

    #[test]
    fn generalized_holder_equality_and_bound() {
        let g = grid();
        let phi = GrowthFunction::power(2.0).unwrap();
        let one = GridFunction::constant(g, 1.0);
        let b = Ball::new(&[0.0], 0.5);
        assert!((generalized_holder_check(&one, &one, &phi, &b).unwrap() - 2.0).abs() < 1e-8);
        assert_eq!(generalized_holder_check(&GridFunction::zeros(g), &one, &phi, &b).unwrap(), 0.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let f = GridFunction::new(g, (0..g.len()).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap();
            let h = GridFunction::new(g, (0..g.len()).map(|_| rng.gen_range(0.0..1.0)).collect()).unwrap();
            let b = Ball::new(&[rng.gen_range(-0.8..0.8)], rng.gen_range(0.05..0.6));
            assert!(generalized_holder_check(&f, &h, &phi, &b).unwrap() <= 2.0 + 1e-6);
        }
    }

    #[test]
    fn john_nirenberg_on_log_corpus() {
        let g = Grid::interval(-1.0, 1.0, 1025).unwrap();
        let h = g.spacing();
        let fam = BallFamily::default_for(&g);
        let mut worst: f64 = 0.0;
        for a in log_space(0.25, 4.0, 5) {
            let b = GridFunction::from_fn(g, |x| a * -((x[0] - 0.1).abs().max(h)).ln()).unwrap();
            worst = worst.max(oscillation_norm(&b, 2.0, &fam).unwrap() / bmo_norm(&b, &fam).unwrap());
        }
        assert!(worst.is_finite() && worst < 8.0);
    }

    #[test]
    fn variable_outer_function_uses_center() {
        use std::sync::Arc;
        let g = grid();
        let fam = BallFamily::default_for(&g);
        let phi = GrowthFunction::power(2.0).unwrap();
        let fixed = SpaceSpec::musielak_morrey(phi.clone(), OuterFunction::Power(0.25), fam.clone()).unwrap();
        let var = SpaceSpec::musielak_morrey(phi, OuterFunction::VariablePower(Arc::new(|_| 0.25)), fam).unwrap();
        let f = GridFunction::from_fn(g, |x| x[0].cos()).unwrap();
        assert_eq!(fixed.norm(&f).unwrap(), var.norm(&f).unwrap());
    }
}
