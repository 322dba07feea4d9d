//! Square functions as quadratures over the discretized upper half-space.
//!
//! With geometric levels t_k and widths Δ_k = t_k(ρ-1):
//!
//! * S_{α,β}(f)(x)² = Σ_k Σ_{|y-x|<βt_k} A(y,t_k)² hⁿ Δ_k / t_k^{n+1}
//! * g_α(f)(x)²     = Σ_k A(x,t_k)² Δ_k / t_k
//! * g*_{λ,α}(f)(x)² = Σ_k Σ_y (t_k/(t_k+|x-y|))^{λn} A(y,t_k)² hⁿ Δ_k / t_k^{n+1}
//!
//! The y-sums run over the base grid, so cones are truncated to the box.

use rayon::prelude::*;

use super::field::{a_alpha_field, AField, CommutatorField, Supremum};
use crate::error::{Error, Result};
use crate::grid::{Ball, Grid, GridFunction, HalfSpaceGrid};

/// g* cells whose weight falls below this fraction of the maximal weight are dropped.
pub const DEFAULT_WEIGHT_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeParams {
    pub beta: f64,
    pub lambda: f64,
    pub weight_floor: f64,
}

impl Default for ConeParams {
    fn default() -> Self {
        Self { beta: 1.0, lambda: 4.0, weight_floor: DEFAULT_WEIGHT_FLOOR }
    }
}

impl ConeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) || !(self.lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "aperture and lambda must be positive, got beta={} lambda={}",
                self.beta, self.lambda
            )));
        }
        if !(0.0..=1e-6).contains(&self.weight_floor) {
            return Err(Error::InvalidParameter(format!("weight floor must be in [0, 1e-6], got {}", self.weight_floor)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    SAlpha,
    SAlphaBeta { beta: f64 },
    GAlpha,
    GStar { lambda: f64 },
    CommutatorS,
    CommutatorG,
    CommutatorGStar { lambda: f64 },
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SAlpha => "s_alpha",
            Self::SAlphaBeta { .. } => "sab",
            Self::GAlpha => "g_alpha",
            Self::GStar { .. } => "g_star",
            Self::CommutatorS => "comm_s",
            Self::CommutatorG => "comm_g",
            Self::CommutatorGStar { .. } => "comm_gstar",
        }
    }

    pub fn is_commutator(&self) -> bool {
        matches!(self, Self::CommutatorS | Self::CommutatorG | Self::CommutatorGStar { .. })
    }
}

fn area_sum(
    grid: &Grid,
    levels: &[f64],
    widths: &[f64],
    x: &[f64; 2],
    beta: f64,
    mut value: impl FnMut(usize, usize) -> Result<f64>,
) -> Result<f64> {
    let n = grid.dim() as i32;
    let hn = grid.cell_volume();
    let mut total = 0.0;
    for (k, (&t, &dt)) in levels.iter().zip(widths).enumerate() {
        let mut level = 0.0;
        let mut err = None;
        grid.for_each_in_ball(&Ball { center: *x, radius: beta * t }, |y, _| {
            if err.is_none() {
                match value(k, y) {
                    Ok(a) => level += a * a,
                    Err(e) => err = Some(e),
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        total += level * hn * dt / t.powi(n + 1);
    }
    Ok(total.sqrt())
}

fn vertical_sum(levels: &[f64], widths: &[f64], mut value: impl FnMut(usize) -> Result<f64>) -> Result<f64> {
    let mut total = 0.0;
    for (k, (&t, &dt)) in levels.iter().zip(widths).enumerate() {
        let a = value(k)?;
        total += a * a * dt / t;
    }
    Ok(total.sqrt())
}

fn gstar_sum(
    grid: &Grid,
    levels: &[f64],
    widths: &[f64],
    x: &[f64; 2],
    lambda: f64,
    floor: f64,
    mut value: impl FnMut(usize, usize) -> Result<f64>,
) -> Result<f64> {
    let n = grid.dim() as i32;
    let ln = lambda * n as f64;
    let hn = grid.cell_volume();
    let reach = if floor > 0.0 { floor.powf(-1.0 / ln) - 1.0 } else { f64::INFINITY };
    let mut total = 0.0;
    for (k, (&t, &dt)) in levels.iter().zip(widths).enumerate() {
        let radius = (reach * t).min(2.0 * grid.diameter() + t);
        let mut level = 0.0;
        let mut err = None;
        grid.for_each_in_ball(&Ball { center: *x, radius }, |y, d| {
            if err.is_some() {
                return;
            }
            let w = (t / (t + d)).powf(ln);
            if w < floor {
                return;
            }
            match value(k, y) {
                Ok(a) => level += w * a * a,
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        total += level * hn * dt / t.powi(n + 1);
    }
    Ok(total.sqrt())
}

fn per_point(grid: &Grid, f: impl Fn(usize) -> Result<f64> + Sync + Send) -> Result<GridFunction> {
    let values = (0..grid.len()).into_par_iter().map(f).collect::<Result<Vec<f64>>>()?;
    GridFunction::new(*grid, values)
}

impl AField {
    /// S_{α,β} from a precomputed field.
    pub fn s_beta(&self, beta: f64) -> Result<GridFunction> {
        let g = *self.grid();
        per_point(&g, |p| area_sum(&g, self.levels(), self.widths(), &g.coord(p), beta, |k, y| Ok(self.get(k, y))))
    }

    pub fn g(&self) -> Result<GridFunction> {
        let g = *self.grid();
        per_point(&g, |p| vertical_sum(self.levels(), self.widths(), |k| Ok(self.get(k, p))))
    }

    pub fn g_star(&self, lambda: f64, floor: f64) -> Result<GridFunction> {
        let g = *self.grid();
        per_point(&g, |p| {
            gstar_sum(&g, self.levels(), self.widths(), &g.coord(p), lambda, floor, |k, y| Ok(self.get(k, y)))
        })
    }
}

impl CommutatorField {
    pub fn s_beta(&self, b: &GridFunction, beta: f64) -> Result<GridFunction> {
        let g = *self.grid();
        per_point(&g, |p| {
            let bx = b.values()[p];
            area_sum(&g, self.levels(), self.widths(), &g.coord(p), beta, |k, y| self.value(k, y, bx))
        })
    }

    pub fn g(&self, b: &GridFunction) -> Result<GridFunction> {
        let g = *self.grid();
        per_point(&g, |p| {
            let bx = b.values()[p];
            vertical_sum(self.levels(), self.widths(), |k| self.value(k, p, bx))
        })
    }

    pub fn g_star(&self, b: &GridFunction, lambda: f64, floor: f64) -> Result<GridFunction> {
        let g = *self.grid();
        per_point(&g, |p| {
            let bx = b.values()[p];
            gstar_sum(&g, self.levels(), self.widths(), &g.coord(p), lambda, floor, |k, y| self.value(k, y, bx))
        })
    }
}

/// Evaluation context for the intrinsic operators on one grid.
#[derive(Debug, Clone)]
pub struct Intrinsic {
    sup: Supremum,
    hs: HalfSpaceGrid,
    weight_floor: f64,
}

impl Intrinsic {
    pub fn new(sup: Supremum, hs: HalfSpaceGrid) -> Result<Self> {
        if sup.kernel().dim() != hs.base().dim() {
            return Err(Error::InvalidParameter("kernel and grid dimensions differ".into()));
        }
        Ok(Self { sup, hs, weight_floor: DEFAULT_WEIGHT_FLOOR })
    }

    pub fn with_weight_floor(mut self, floor: f64) -> Result<Self> {
        ConeParams { weight_floor: floor, ..Default::default() }.validate()?;
        self.weight_floor = floor;
        Ok(self)
    }

    pub fn supremum(&self) -> &Supremum {
        &self.sup
    }

    pub fn half_space(&self) -> &HalfSpaceGrid {
        &self.hs
    }

    pub fn alpha(&self) -> f64 {
        self.sup.kernel().alpha()
    }

    pub fn field(&self, f: &GridFunction) -> Result<AField> {
        a_alpha_field(f, &self.sup, &self.hs)
    }

    pub fn commutator_field(&self, b: &GridFunction, f: &GridFunction) -> Result<CommutatorField> {
        CommutatorField::new(b, f, &self.sup, &self.hs)
    }

    pub fn s_alpha(&self, f: &GridFunction) -> Result<GridFunction> {
        self.field(f)?.s_beta(1.0)
    }

    pub fn s_alpha_beta(&self, f: &GridFunction, beta: f64) -> Result<GridFunction> {
        ConeParams { beta, ..Default::default() }.validate()?;
        self.field(f)?.s_beta(beta)
    }

    pub fn g_alpha(&self, f: &GridFunction) -> Result<GridFunction> {
        self.field(f)?.g()
    }

    pub fn g_star(&self, f: &GridFunction, lambda: f64) -> Result<GridFunction> {
        ConeParams { lambda, ..Default::default() }.validate()?;
        self.field(f)?.g_star(lambda, self.weight_floor)
    }

    pub fn commutator_s(&self, b: &GridFunction, f: &GridFunction) -> Result<GridFunction> {
        self.commutator_field(b, f)?.s_beta(b, 1.0)
    }

    pub fn commutator_g(&self, b: &GridFunction, f: &GridFunction) -> Result<GridFunction> {
        self.commutator_field(b, f)?.g(b)
    }

    pub fn commutator_gstar(&self, b: &GridFunction, f: &GridFunction, lambda: f64) -> Result<GridFunction> {
        ConeParams { lambda, ..Default::default() }.validate()?;
        self.commutator_field(b, f)?.g_star(b, lambda, self.weight_floor)
    }

    /// Applies an operator; commutators need the symbol `b`.
    pub fn apply(&self, op: OperatorKind, f: &GridFunction, b: Option<&GridFunction>) -> Result<GridFunction> {
        let symbol = || b.ok_or_else(|| Error::InvalidParameter(format!("{} needs a symbol b", op.name())));
        match op {
            OperatorKind::SAlpha => self.s_alpha(f),
            OperatorKind::SAlphaBeta { beta } => self.s_alpha_beta(f, beta),
            OperatorKind::GAlpha => self.g_alpha(f),
            OperatorKind::GStar { lambda } => self.g_star(f, lambda),
            OperatorKind::CommutatorS => self.commutator_s(symbol()?, f),
            OperatorKind::CommutatorG => self.commutator_g(symbol()?, f),
            OperatorKind::CommutatorGStar { lambda } => self.commutator_gstar(symbol()?, f, lambda),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intrinsic::KernelGrid;

    fn setup(n: usize, m: usize, alpha: f64) -> (Grid, Intrinsic) {
        let g = Grid::interval(-1.0, 1.0, n).unwrap();
        let k = KernelGrid::new(alpha, m, 1).unwrap();
        (g, Intrinsic::new(Supremum::dictionary(&k).unwrap(), HalfSpaceGrid::default_for(g)).unwrap())
    }

    #[test]
    fn beta_one_reduces_to_s_alpha_and_aperture_is_monotone() {
        let (g, op) = setup(65, 21, 1.0);
        let f = GridFunction::from_fn(g, |x| (1.0 - 2.0 * x[0].abs()).max(0.0)).unwrap();
        let field = op.field(&f).unwrap();
        assert_eq!(field.s_beta(1.0).unwrap(), op.s_alpha(&f).unwrap());
        let mut prev = field.s_beta(1.0).unwrap();
        for beta in [1.5, 2.0, 4.0] {
            let next = field.s_beta(beta).unwrap();
            for (a, b) in prev.values().iter().zip(next.values()) {
                assert!(b >= a);
            }
            prev = next;
        }
    }

    #[test]
    fn dilation_symmetry() {
        // f_δ(x) = f(2x) on a box half as wide with half the spacing maps
        // every cell of the quadrature onto a cell of the original one
        let k = KernelGrid::new(1.0, 21, 1).unwrap();
        let sup = Supremum::dictionary(&k).unwrap();
        let g = Grid::interval(-1.0, 1.0, 65).unwrap();
        let gd = Grid::interval(-0.5, 0.5, 65).unwrap();
        let prof = |x: f64| (1.0 - (x - 0.1).abs() / 0.4).max(0.0);
        let f = GridFunction::from_fn(g, |x| prof(x[0])).unwrap();
        let fd = GridFunction::from_fn(gd, |x| prof(2.0 * x[0])).unwrap();
        let s = Intrinsic::new(sup.clone(), HalfSpaceGrid::default_for(g)).unwrap().s_alpha(&f).unwrap();
        let sd = Intrinsic::new(sup, HalfSpaceGrid::default_for(gd)).unwrap().s_alpha(&fd).unwrap();
        for i in 8..57 {
            let (a, b) = (s.values()[i], sd.values()[i]);
            assert!((a - b).abs() <= 0.05 * a.max(1e-12), "{i}: {a} vs {b}");
        }
    }

    #[test]
    fn g_star_with_large_lambda_is_dominated_by_s() {
        let (g, op) = setup(65, 21, 1.0);
        let f = GridFunction::from_fn(g, |x| (5.0 * x[0]).sin() * (1.0 - x[0] * x[0])).unwrap();
        let field = op.field(&f).unwrap();
        let s = field.s_beta(1.0).unwrap();
        let gs = field.g_star(10.0, DEFAULT_WEIGHT_FLOOR).unwrap();
        let gs4 = field.g_star(4.0, DEFAULT_WEIGHT_FLOOR).unwrap();
        // one-sided: the weight is at most 1 on the cone and decays fast outside
        for ((a, b), c) in s.values().iter().zip(gs.values()).zip(gs4.values()) {
            assert!(*b <= 2.0 * a);
            assert!(c >= b);
        }
    }

    #[test]
    fn commutator_with_constant_symbol_vanishes() {
        let (g, op) = setup(33, 11, 0.5);
        let f = GridFunction::from_fn(g, |x| x[0].cos()).unwrap();
        let b = GridFunction::constant(g, 3.0);
        for v in [
            op.commutator_s(&b, &f).unwrap(),
            op.commutator_g(&b, &f).unwrap(),
            op.commutator_gstar(&b, &f, 4.0).unwrap(),
        ] {
            assert!(v.max_abs() <= 1e-10);
        }
        let zero = GridFunction::zeros(g);
        let b = GridFunction::from_fn(g, |x| x[0]).unwrap();
        assert_eq!(op.commutator_g(&b, &zero).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn support_locality() {
        let (g, op) = setup(129, 11, 1.0);
        let hs = HalfSpaceGrid::with_max(g, HalfSpaceGrid::DEFAULT_RATIO, 0.1).unwrap();
        let op = Intrinsic::new(op.supremum().clone(), hs).unwrap();
        let f = GridFunction::from_fn(g, |x| if x[0] > 0.6 { (x[0] - 0.6) * 3.0 } else { 0.0 }).unwrap();
        let s = op.s_alpha_beta(&f, 2.0).unwrap();
        let tmax = op.half_space().t_max();
        for (x, v) in g.coords().zip(s.values()) {
            if x[0] + 3.0 * tmax + g.spacing() < 0.6 {
                assert_eq!(*v, 0.0);
            }
        }
        assert!(s.max_abs() > 0.0);
    }

    #[test]
    fn missing_symbol_is_an_error() {
        let (g, op) = setup(17, 9, 1.0);
        assert!(op.apply(OperatorKind::CommutatorS, &GridFunction::zeros(g), None).is_err());
    }
}
