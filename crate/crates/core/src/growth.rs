//! Growth functions φ(x,t), Young functions Φ(t), outer functions φ(t) and
//! the numerical checks attached to them: uniform type constants,
//! complementary functions, Muckenhoupt and reverse-Hölder constants, and the
//! integral conditions on outer functions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Ball, BallFamily, Grid, GridFunction};

/// Strictly positive weight sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight(GridFunction);

impl Weight {
    pub fn new(values: GridFunction) -> Result<Self> {
        if values.values().iter().any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidParameter("weight must be strictly positive".into()));
        }
        Ok(Self(values))
    }

    pub fn unit(grid: Grid) -> Self {
        Self(GridFunction::constant(grid, 1.0))
    }

    pub fn at(&self, x: &[f64; 2]) -> f64 {
        self.0.at(x)
    }

    pub fn function(&self) -> &GridFunction {
        &self.0
    }

    /// w(B) = ∫_B w.
    pub fn measure(&self, ball: &Ball) -> Result<f64> {
        crate::grid::integrate_ball(&self.0, ball)
    }
}

type YoungFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum YoungKind {
    /// t^p
    Power(f64),
    /// Σ c_k t^{e_k}
    SumOfPowers(Vec<(f64, f64)>),
    Custom(YoungFn),
}

impl fmt::Debug for YoungKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power(p) => write!(f, "Power({p})"),
            Self::SumOfPowers(terms) => write!(f, "SumOfPowers({terms:?})"),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Convex Young function with declared lower/upper type exponents.
#[derive(Debug, Clone)]
pub struct YoungFunction {
    pub kind: YoungKind,
    pub p0: f64,
    pub p1: f64,
}

impl YoungFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("Young power needs p > 1, got {p}")));
        }
        Ok(Self { kind: YoungKind::Power(p), p0: p, p1: p })
    }

    pub fn sum_of_powers(terms: Vec<(f64, f64)>) -> Result<Self> {
        if terms.is_empty() || terms.iter().any(|&(c, e)| !(c > 0.0) || !(e > 1.0)) {
            return Err(Error::InvalidParameter(
                "sum of powers needs positive coefficients and exponents > 1".into(),
            ));
        }
        let p0 = terms.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
        let p1 = terms.iter().map(|t| t.1).fold(0.0, f64::max);
        Ok(Self { kind: YoungKind::SumOfPowers(terms), p0, p1 })
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static, p0: f64, p1: f64) -> Result<Self> {
        if !(1.0 < p0 && p0 <= p1 && p1.is_finite()) {
            return Err(Error::InvalidParameter(format!("need 1 < p0 <= p1 < inf, got ({p0}, {p1})")));
        }
        Ok(Self { kind: YoungKind::Custom(Arc::new(f)), p0, p1 })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            YoungKind::Power(p) => t.powf(*p),
            YoungKind::SumOfPowers(terms) => terms.iter().map(|&(c, e)| c * t.powf(e)).sum(),
            YoungKind::Custom(f) => f(t),
        }
    }

    /// Φ^{-1}(r) by bisection.
    pub fn inverse(&self, r: f64) -> f64 {
        young_inverse(|t| self.eval(t), r)
    }

    /// Φ̃(s) = sup_{t>0} {st - Φ(t)}.
    pub fn complementary(&self, s: f64) -> Result<f64> {
        Conjugator::new(|t| self.eval(t)).eval(s)
    }

    /// Φ̃^{-1}(r), inverting the numerically computed complementary function.
    pub fn complementary_inverse(&self, r: f64) -> Result<f64> {
        let conj = Conjugator::new(|t| self.eval(t));
        let mut err = None;
        let v = young_inverse(
            |s| match conj.eval(s) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::INFINITY
                }
            },
            r,
        );
        match err {
            Some(e) if !v.is_finite() => Err(e),
            _ => Ok(v),
        }
    }

    pub fn as_power(&self) -> Option<f64> {
        match self.kind {
            YoungKind::Power(p) => Some(p),
            _ => None,
        }
    }
}

/// Smallest `t >= 0` with `f(t) = r` for continuous increasing `f` with
/// `f(0) = 0`; the bracket grows geometrically from `[0, 1]`.
pub fn young_inverse(mut f: impl FnMut(f64) -> f64, r: f64) -> f64 {
    if !(r > 0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut grow = 0;
    while f(hi) < r {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 2100 {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Legendre-type supremum `s ↦ sup_{t>0} {st - ψ(t)}` over a geometric
/// t-lattice on [1e-8, 1e8] (64 points per decade) with golden-section
/// refinement around the lattice maximizer.
pub struct Conjugator<F> {
    psi: F,
    ts: Vec<f64>,
    psis: Vec<f64>,
}

impl<F: Fn(f64) -> f64> Conjugator<F> {
    pub const PER_DECADE: usize = 64;
    pub const LOG10_MIN: f64 = -8.0;
    pub const LOG10_MAX: f64 = 8.0;

    pub fn new(psi: F) -> Self {
        let n = ((Self::LOG10_MAX - Self::LOG10_MIN) as usize) * Self::PER_DECADE;
        let ts: Vec<f64> = (0..=n)
            .map(|j| 10f64.powf(Self::LOG10_MIN + j as f64 / Self::PER_DECADE as f64))
            .collect();
        let psis = ts.iter().map(|&t| psi(t)).collect();
        Self { psi, ts, psis }
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        if s < 0.0 {
            return Err(Error::InvalidParameter(format!("complementary needs s >= 0, got {s}")));
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        let n = self.ts.len();
        let mut best = 0usize;
        let mut best_v = f64::NEG_INFINITY;
        for j in 0..n {
            let v = s * self.ts[j] - self.psis[j];
            if v > best_v {
                best_v = v;
                best = j;
            }
        }
        if best == n - 1 && best_v > s * self.ts[n - 2] - self.psis[n - 2] && best_v > 0.0 {
            return Err(Error::ComplementaryDiverges(s));
        }
        let lo = self.ts[best.saturating_sub(1)];
        let hi = self.ts[(best + 1).min(n - 1)];
        let refined = golden_max(|t| s * t - (self.psi)(t), lo, hi, 1e-8);
        Ok(best_v.max(refined).max(0.0))
    }
}

/// Golden-section maximization of a unimodal function on `[a, b]` to
/// relative tolerance `rel` in the argument; returns the best value seen.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, rel: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.max(fd);
    for _ in 0..200 {
        if (b - a) <= rel * b.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            best = best.max(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            best = best.max(fd);
        }
    }
    best
}

type GrowthFn = Arc<dyn Fn(&[f64; 2], f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum GrowthKind {
    /// t^p
    Power(f64),
    /// w(x) t^p
    WeightedPower { weight: Weight, p: f64 },
    /// w(x) Φ(t)
    WeightedOrlicz { weight: Weight, young: YoungFunction },
    /// c Φ(t), independent of x
    Orlicz { young: YoungFunction, scale: f64 },
    Custom(GrowthFn),
}

impl fmt::Debug for GrowthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power(p) => write!(f, "Power({p})"),
            Self::WeightedPower { p, .. } => write!(f, "WeightedPower({p})"),
            Self::WeightedOrlicz { young, .. } => write!(f, "WeightedOrlicz({:?})", young.kind),
            Self::Orlicz { young, scale } => write!(f, "Orlicz({:?}, {scale})", young.kind),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyTag {
    Power,
    WeightedPower,
    WeightedOrlicz,
    Custom,
}

/// Musielak-Orlicz growth function with declared uniform type exponents and
/// Muckenhoupt class exponent.
#[derive(Debug, Clone)]
pub struct GrowthFunction {
    pub kind: GrowthKind,
    pub p0: f64,
    pub p1: f64,
    pub muckenhoupt_q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeBound {
    Lower,
    Upper,
}

impl GrowthFunction {
    fn checked(kind: GrowthKind, p0: f64, p1: f64, q: f64) -> Result<Self> {
        if !(0.0 < p0 && p0 <= p1 && p1.is_finite()) {
            return Err(Error::InvalidParameter(format!("need 0 < p0 <= p1 < inf, got ({p0}, {p1})")));
        }
        if !(q >= 1.0) {
            return Err(Error::InvalidParameter(format!("Muckenhoupt exponent must be >= 1, got {q}")));
        }
        Ok(Self { kind, p0, p1, muckenhoupt_q: q })
    }

    pub fn power(p: f64) -> Result<Self> {
        Self::checked(GrowthKind::Power(p), p, p, p.max(1.0))
    }

    pub fn weighted_power(weight: Weight, p: f64) -> Result<Self> {
        Self::checked(GrowthKind::WeightedPower { weight, p }, p, p, p.max(1.0))
    }

    pub fn weighted_orlicz(weight: Weight, young: YoungFunction) -> Result<Self> {
        let (p0, p1) = (young.p0, young.p1);
        Self::checked(GrowthKind::WeightedOrlicz { weight, young }, p0, p1, p0)
    }

    pub fn orlicz(young: YoungFunction) -> Result<Self> {
        let (p0, p1) = (young.p0, young.p1);
        Self::checked(GrowthKind::Orlicz { young, scale: 1.0 }, p0, p1, p0)
    }

    pub fn custom(
        f: impl Fn(&[f64; 2], f64) -> f64 + Send + Sync + 'static,
        p0: f64,
        p1: f64,
        muckenhoupt_q: f64,
    ) -> Result<Self> {
        Self::checked(GrowthKind::Custom(Arc::new(f)), p0, p1, muckenhoupt_q)
    }

    pub fn with_muckenhoupt(mut self, q: f64) -> Self {
        self.muckenhoupt_q = q;
        self
    }

    pub fn family(&self) -> FamilyTag {
        match self.kind {
            GrowthKind::Power(_) => FamilyTag::Power,
            GrowthKind::WeightedPower { .. } => FamilyTag::WeightedPower,
            GrowthKind::WeightedOrlicz { .. } | GrowthKind::Orlicz { .. } => FamilyTag::WeightedOrlicz,
            GrowthKind::Custom(_) => FamilyTag::Custom,
        }
    }

    #[inline]
    pub fn eval(&self, x: &[f64; 2], t: f64) -> f64 {
        match &self.kind {
            GrowthKind::Power(p) => t.powf(*p),
            GrowthKind::WeightedPower { weight, p } => weight.at(x) * t.powf(*p),
            GrowthKind::WeightedOrlicz { weight, young } => weight.at(x) * young.eval(t),
            GrowthKind::Orlicz { young, scale } => scale * young.eval(t),
            GrowthKind::Custom(f) => f(x, t),
        }
    }

    /// Whether ψ = φ/φ(·,1) is the same function at every x.
    pub fn normalized_is_uniform(&self) -> bool {
        !matches!(self.kind, GrowthKind::Custom(_))
    }

    /// ψ(x,t) = φ(x,t)/φ(x,1).
    pub fn normalized_psi(&self) -> GrowthFunction {
        let kind = match &self.kind {
            GrowthKind::Power(p) | GrowthKind::WeightedPower { p, .. } => GrowthKind::Power(*p),
            GrowthKind::WeightedOrlicz { young, .. } | GrowthKind::Orlicz { young, .. } => {
                GrowthKind::Orlicz { young: young.clone(), scale: 1.0 / young.eval(1.0) }
            }
            GrowthKind::Custom(f) => {
                let f = f.clone();
                GrowthKind::Custom(Arc::new(move |x, t| f(x, t) / f(x, 1.0)))
            }
        };
        GrowthFunction { kind, p0: self.p0, p1: self.p1, muckenhoupt_q: self.muckenhoupt_q }
    }

    /// ψ̃(x,s) = sup_{t>0} {st - ψ(x,t)} for the normalized ψ of `self`.
    pub fn complementary(&self, x: &[f64; 2], s: f64) -> Result<f64> {
        let psi = self.normalized_psi();
        Conjugator::new(|t| psi.eval(x, t)).eval(s)
    }

    /// Largest φ(x,st)/(s^p φ(x,t)) over the sample lattice, p = p₀ for the
    /// lower type (s ≤ 1) and p₁ for the upper type (s ≥ 1).
    pub fn type_constant(&self, which: TypeBound, sample: &TypeSample) -> Result<f64> {
        let (p, ss) = match which {
            TypeBound::Lower => (self.p0, &sample.s_lower),
            TypeBound::Upper => (self.p1, &sample.s_upper),
        };
        let mut worst: f64 = 0.0;
        for x in &sample.xs {
            for &t in &sample.ts {
                let base = self.eval(x, t);
                for &s in ss {
                    let ratio = self.eval(x, s * t) / (s.powf(p) * base);
                    if !ratio.is_finite() {
                        return Err(Error::TypeViolation { x: x.to_vec(), s, t });
                    }
                    worst = worst.max(ratio);
                }
            }
        }
        Ok(worst)
    }

    /// Checks φ(x,0)=0, positivity and strict monotonicity on the sample.
    pub fn check_invariants(&self, sample: &TypeSample) -> Result<()> {
        for x in &sample.xs {
            if self.eval(x, 0.0) != 0.0 {
                return Err(Error::InvalidParameter(format!("φ(x,0) != 0 at x={x:?}")));
            }
            let mut prev = 0.0;
            for &t in &sample.ts {
                let v = self.eval(x, t);
                if !(v > prev) || !v.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "φ(x,·) not strictly increasing/positive at x={x:?}, t={t}"
                    )));
                }
                prev = v;
            }
        }
        Ok(())
    }
}

/// Sample lattice for type-constant fitting.
#[derive(Debug, Clone)]
pub struct TypeSample {
    pub xs: Vec<[f64; 2]>,
    pub ts: Vec<f64>,
    pub s_lower: Vec<f64>,
    pub s_upper: Vec<f64>,
}

pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

impl TypeSample {
    /// `per_decade` lattice points per decade for t ∈ [1e-4, 1e4] and
    /// s ∈ [1e-4, 1] (lower) or [1, 1e4] (upper).
    pub fn new(xs: Vec<[f64; 2]>, per_decade: usize) -> Self {
        Self {
            xs,
            ts: log_space(1e-4, 1e4, 8 * per_decade + 1),
            s_lower: log_space(1e-4, 1.0, 4 * per_decade + 1),
            s_upper: log_space(1.0, 1e4, 4 * per_decade + 1),
        }
    }

    pub fn for_grid(grid: &Grid, stride: usize, per_decade: usize) -> Self {
        let xs = (0..grid.len()).step_by(stride.max(1)).map(|i| grid.coord(i)).collect();
        Self::new(xs, per_decade)
    }
}

/// max_x ψ̃(x,1) over the sample points.
pub fn complementary_bounded_at_one(phi: &GrowthFunction, xs: &[[f64; 2]]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    if phi.normalized_is_uniform() {
        return phi.complementary(&[0.0, 0.0], 1.0);
    }
    for x in xs {
        worst = worst.max(phi.complementary(x, 1.0)?);
    }
    Ok(worst)
}

/// Per-ball ℙA_q expression at level t.
pub fn muckenhoupt_ball_value(phi: &GrowthFunction, q: f64, grid: &Grid, ball: &Ball, t: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidParameter(format!("Muckenhoupt exponent must be >= 1, got {q}")));
    }
    let idx = grid.indices_in_ball(ball);
    if idx.is_empty() {
        return Err(Error::BallOffGrid);
    }
    let dv = grid.cell_volume();
    let measure = idx.len() as f64 * dv;
    let vals: Vec<f64> = idx.iter().map(|&i| phi.eval(&grid.coord(i), t)).collect();
    let direct: f64 = vals.iter().sum::<f64>() * dv;
    if q == 1.0 {
        let ess_sup_inv = vals.iter().map(|v| 1.0 / v).fold(0.0, f64::max);
        return Ok(direct / measure * ess_sup_inv);
    }
    let dual_exp = 1.0 / (q - 1.0);
    let dual: f64 = vals.iter().map(|v| v.powf(-dual_exp)).sum::<f64>() * dv;
    Ok(direct / measure.powf(q) * dual.powf(q - 1.0))
}

/// Largest ℙA_q expression over the balls and t-lattice.
pub fn muckenhoupt_constant(
    phi: &GrowthFunction,
    q: f64,
    grid: &Grid,
    balls: &BallFamily,
    ts: &[f64],
) -> Result<f64> {
    use rayon::prelude::*;
    let per_ball: Result<Vec<f64>> = balls
        .balls()
        .par_iter()
        .map(|b| {
            let mut m: f64 = 0.0;
            for &t in ts {
                m = m.max(muckenhoupt_ball_value(phi, q, grid, b, t)?);
            }
            Ok(m)
        })
        .collect();
    Ok(per_ball?.into_iter().fold(0.0, f64::max))
}

/// max over balls of (avg w^r)^{1/r} / avg w.
pub fn reverse_holder_constant(w: &Weight, r_exp: f64, balls: &BallFamily) -> Result<f64> {
    if !(r_exp > 1.0) {
        return Err(Error::InvalidParameter(format!("reverse Hölder exponent must exceed 1, got {r_exp}")));
    }
    let f = w.function();
    let mut worst: f64 = 0.0;
    for b in balls.balls() {
        let idx = f.grid().indices_in_ball(b);
        if idx.is_empty() {
            return Err(Error::BallOffGrid);
        }
        let n = idx.len() as f64;
        let avg = idx.iter().map(|&i| f.values()[i]).sum::<f64>() / n;
        let avg_r = idx.iter().map(|&i| f.values()[i].powf(r_exp)).sum::<f64>() / n;
        worst = worst.max(avg_r.powf(1.0 / r_exp) / avg);
    }
    Ok(worst)
}

type OuterFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type VariableFn = Arc<dyn Fn(&[f64; 2]) -> f64 + Send + Sync>;

/// Outer function t ↦ φ(t) used to weight ball sizes in Morrey-type norms.
#[derive(Clone)]
pub enum OuterFunction {
    /// t^s (s may be negative)
    Power(f64),
    /// log(e + t)
    LogE,
    Constant(f64),
    /// min(1, 1/t)
    MinOneInv,
    /// t^{λ(c)} with the exponent depending on the ball center c
    VariablePower(VariableFn),
    Custom(OuterFn),
}

impl fmt::Debug for OuterFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power(s) => write!(f, "Power({s})"),
            Self::LogE => write!(f, "LogE"),
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::MinOneInv => write!(f, "MinOneInv"),
            Self::VariablePower(_) => write!(f, "VariablePower"),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl OuterFunction {
    pub fn eval(&self, t: f64) -> f64 {
        self.eval_at(&[0.0, 0.0], t)
    }

    /// φ(c, t); only the variable family depends on `center`.
    pub fn eval_at(&self, center: &[f64; 2], t: f64) -> f64 {
        match self {
            Self::Power(s) => t.powf(*s),
            Self::LogE => (std::f64::consts::E + t).ln(),
            Self::Constant(c) => *c,
            Self::MinOneInv => (1.0 / t).min(1.0),
            Self::VariablePower(l) => t.powf(l(center)),
            Self::Custom(f) => f(t),
        }
    }

    pub fn as_power(&self) -> Option<f64> {
        match self {
            Self::Power(s) => Some(*s),
            Self::Constant(_) => Some(0.0),
            _ => None,
        }
    }
}

/// Empirical constant of an integral condition, `INFINITY` when the improper
/// integral was detected to diverge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralCheck {
    pub constant: f64,
    pub converged: bool,
}

impl IntegralCheck {
    pub fn passes(&self, cap: f64) -> bool {
        self.converged && self.constant <= cap
    }
}

const QUAD_PER_DECADE: usize = 256;
const DIVERGENCE_DECADES: f64 = 3.0;
const DIVERGENCE_REL: f64 = 1e-3;

/// ∫_r^R g(t) dt/t by the trapezoid rule in u = ln t; also returns the
/// integral up to R / 10^3 for the divergence test.
fn log_trapezoid(g: impl Fn(f64) -> f64, r: f64, upper: f64) -> (f64, f64) {
    let (a, b) = (r.ln(), upper.ln());
    let decades = (b - a) / std::f64::consts::LN_10;
    let n = ((decades * QUAD_PER_DECADE as f64).ceil() as usize).max(8);
    let du = (b - a) / n as f64;
    let cut = b - DIVERGENCE_DECADES * std::f64::consts::LN_10;
    let mut total = 0.0;
    let mut before_cut = 0.0;
    let mut prev = g(r);
    for i in 1..=n {
        let u = a + du * i as f64;
        let cur = g(u.exp());
        let piece = 0.5 * (prev + cur) * du;
        total += piece;
        if u <= cut {
            before_cut += piece;
        }
        prev = cur;
    }
    (total, before_cut)
}

fn improper_log_integral(
    g: impl Fn(f64) -> f64,
    r: f64,
    r_max: f64,
    analytic_tail: Option<f64>,
) -> (f64, bool) {
    let upper = 1e8 * r_max;
    let (total, before_cut) = log_trapezoid(g, r, upper);
    match analytic_tail {
        Some(tail) => (total + tail, tail.is_finite()),
        None => {
            let converged = total > 0.0 && (total - before_cut) / total <= DIVERGENCE_REL;
            (total, converged)
        }
    }
}

/// max_r φ(r) ∫_r^∞ dt/(φ(t) t) for a nondecreasing outer function.
pub fn phi_dini_check(phi: &OuterFunction, r_list: &[f64]) -> IntegralCheck {
    let r_max = r_list.iter().cloned().fold(0.0, f64::max);
    let upper = 1e8 * r_max;
    let mut worst: f64 = 0.0;
    for &r in r_list {
        let tail = phi.as_power().map(|s| if s > 0.0 { upper.powf(-s) / s } else { f64::INFINITY });
        let (integral, ok) = improper_log_integral(|t| 1.0 / phi.eval(t), r, r_max, tail);
        if !ok {
            return IntegralCheck { constant: f64::INFINITY, converged: false };
        }
        worst = worst.max(phi.eval(r) * integral);
    }
    IntegralCheck { constant: worst, converged: true }
}

/// Constants of the two conditions on a nonincreasing outer function:
/// `∫_r^∞ φ(t)/t dt ≤ C φ(r)` and `φ(r) r ≤ C φ(s) s` for r ≤ s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecreasingCheck {
    pub integral: IntegralCheck,
    pub monotone: f64,
}

pub fn phi_decreasing_check(phi: &OuterFunction, r_list: &[f64]) -> DecreasingCheck {
    let r_max = r_list.iter().cloned().fold(0.0, f64::max);
    let upper = 1e8 * r_max;
    let mut worst: f64 = 0.0;
    let mut converged = true;
    for &r in r_list {
        let tail = phi.as_power().map(|s| if s < 0.0 { upper.powf(s) / -s } else { f64::INFINITY });
        let (integral, ok) = improper_log_integral(|t| phi.eval(t), r, r_max, tail);
        if !ok {
            converged = false;
            worst = f64::INFINITY;
            break;
        }
        worst = worst.max(integral / phi.eval(r));
    }
    let mut mono: f64 = 0.0;
    for &r in r_list {
        for &s in r_list {
            if r <= s {
                mono = mono.max(phi.eval(r) * r / (phi.eval(s) * s));
            }
        }
    }
    DecreasingCheck { integral: IntegralCheck { constant: worst, converged }, monotone: mono }
}

/// max_r ∫_r^∞ Φ^{-1}(φ(t)) dt/t / Φ^{-1}(φ(r)).
pub fn phi_inverse_composite_check(young: &YoungFunction, phi: &OuterFunction, r_list: &[f64]) -> IntegralCheck {
    let r_max = r_list.iter().cloned().fold(0.0, f64::max);
    let upper = 1e8 * r_max;
    let analytic = match (young.as_power(), phi.as_power()) {
        (Some(p), Some(s)) => Some((p, s)),
        _ => None,
    };
    let mut worst: f64 = 0.0;
    for &r in r_list {
        let tail = analytic.map(|(p, s)| {
            let e = s / p;
            if e < 0.0 {
                upper.powf(e) / -e
            } else {
                f64::INFINITY
            }
        });
        let (integral, ok) = improper_log_integral(|t| young.inverse(phi.eval(t)), r, r_max, tail);
        if !ok {
            return IntegralCheck { constant: f64::INFINITY, converged: false };
        }
        worst = worst.max(integral / young.inverse(phi.eval(r)));
    }
    IntegralCheck { constant: worst, converged: true }
}
