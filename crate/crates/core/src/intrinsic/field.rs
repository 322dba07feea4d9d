use rayon::prelude::*;

use super::dictionary::{Dictionary, DEFAULT_SEED};
use super::kernel::{KernelGrid, KernelLp};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction, HalfSpaceGrid};

/// Default number of kernels in dictionary mode.
pub const DEFAULT_DICTIONARY_SIZE: usize = 128;

/// How the supremum over the kernel class is evaluated for one objective.
#[derive(Debug, Clone)]
pub enum Supremum {
    /// Exact optimum of the kernel LP.
    Lp(KernelLp),
    /// Best member of a fixed feasible dictionary (a lower bound).
    Dictionary(Dictionary),
}

impl Supremum {
    pub fn lp(kernel: &KernelGrid) -> Self {
        Self::Lp(KernelLp::new(kernel))
    }

    /// The default dictionary: the mixed family with 128 kernels.
    pub fn dictionary(kernel: &KernelGrid) -> Result<Self> {
        Ok(Self::Dictionary(Dictionary::refined(kernel, DEFAULT_DICTIONARY_SIZE, DEFAULT_SEED)?))
    }

    pub fn kernel(&self) -> &KernelGrid {
        match self {
            Self::Lp(lp) => lp.kernel(),
            Self::Dictionary(d) => d.kernel_grid(),
        }
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            Self::Lp(_) => "lp",
            Self::Dictionary(_) => "dict",
        }
    }

    /// sup over the class of |Σθᵢcᵢ|.
    pub fn eval(&self, c: &[f64]) -> Result<f64> {
        match self {
            Self::Lp(lp) => Ok(lp.maximize(c)?.value),
            Self::Dictionary(d) => Ok(d.best(c)),
        }
    }
}

fn check_scale(grid: &Grid, t: f64) -> Result<()> {
    let h = grid.spacing();
    if t < h * (1.0 - 1e-12) {
        return Err(Error::ScaleBelowSpacing { t, h });
    }
    Ok(())
}

/// Off-lattice samples f(y - t zᵢ) at every kernel node.
pub fn kernel_samples(f: &GridFunction, y: &[f64; 2], t: f64, kernel: &KernelGrid) -> Vec<f64> {
    let g = f.grid();
    kernel.nodes().iter().map(|z| g.interpolate(f.values(), &[y[0] - t * z[0], y[1] - t * z[1]])).collect()
}

/// Objective coefficients cᵢ = f(y - t zᵢ)·m(y - t zᵢ)·wᵢ of the kernel LP.
///
/// The change of variables z → y - t z absorbs the t^{-n} of the dilated
/// kernel θ_t, so no scale factor appears here.
pub fn objective(
    f: &GridFunction,
    y: &[f64; 2],
    t: f64,
    kernel: &KernelGrid,
    multiplier: Option<&GridFunction>,
) -> Result<Vec<f64>> {
    check_scale(f.grid(), t)?;
    let mut c = kernel_samples(f, y, t, kernel);
    if let Some(m) = multiplier {
        for (ci, mi) in c.iter_mut().zip(kernel_samples(m, y, t, kernel)) {
            *ci *= mi;
        }
    }
    for (ci, w) in c.iter_mut().zip(kernel.weights()) {
        *ci *= w;
    }
    Ok(c)
}

/// A_α(f)(y,t) by exact LP.
pub fn kernel_lp_max(
    f: &GridFunction,
    y: &[f64; 2],
    t: f64,
    lp: &KernelLp,
    multiplier: Option<&GridFunction>,
) -> Result<f64> {
    Ok(lp.maximize(&objective(f, y, t, lp.kernel(), multiplier)?)?.value)
}

/// Values of A_α(f) on every (y, t_k) of a half-space grid.
#[derive(Debug, Clone)]
pub struct AField {
    grid: Grid,
    levels: Vec<f64>,
    widths: Vec<f64>,
    values: Vec<f64>,
}

impl AField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn get(&self, level: usize, point: usize) -> f64 {
        self.values[level * self.grid.len() + point]
    }

    pub fn level(&self, level: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[level * n..(level + 1) * n]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }
}

fn level_data(hs: &HalfSpaceGrid) -> (Vec<f64>, Vec<f64>) {
    let levels = hs.levels().to_vec();
    let widths = (0..levels.len()).map(|k| hs.level_width(k)).collect();
    (levels, widths)
}

/// A_α(f)(y,t) on every cell of `hs`; cells are independent and solved in parallel.
pub fn a_alpha_field(f: &GridFunction, sup: &Supremum, hs: &HalfSpaceGrid) -> Result<AField> {
    let grid = *f.grid();
    if hs.base() != &grid {
        return Err(Error::InvalidGrid("half-space grid does not match the function's grid".into()));
    }
    let (levels, widths) = level_data(hs);
    let n = grid.len();
    let values = (0..levels.len() * n)
        .into_par_iter()
        .map(|cell| {
            let (k, p) = (cell / n, cell % n);
            sup.eval(&objective(f, &grid.coord(p), levels[k], sup.kernel(), None)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(AField { grid, levels, widths, values })
}

/// Per-vertex A-values for the commutator with symbol b: for a vertex x,
/// A^x(y,t) = sup_θ |Σ θᵢ f(zᵢ)(b(x) - b(zᵢ)) wᵢ| with zᵢ = y - t·nodeᵢ.
#[derive(Debug, Clone)]
pub enum CommutatorField {
    /// Dictionary mode: per cell and kernel, u = Σθ f w and v = Σθ f b w, so
    /// that A^x = max_d |b(x) u_d - v_d| costs one pass over the dictionary.
    Dictionary { grid: Grid, levels: Vec<f64>, widths: Vec<f64>, size: usize, u: Vec<f64>, v: Vec<f64> },
    /// LP mode: one LP per (vertex, cell).
    Lp { grid: Grid, levels: Vec<f64>, widths: Vec<f64>, f: GridFunction, b: GridFunction, lp: KernelLp },
}

impl CommutatorField {
    pub fn new(b: &GridFunction, f: &GridFunction, sup: &Supremum, hs: &HalfSpaceGrid) -> Result<Self> {
        let grid = *f.grid();
        if b.grid() != &grid || hs.base() != &grid {
            return Err(Error::InvalidGrid("commutator inputs live on different grids".into()));
        }
        let (levels, widths) = level_data(hs);
        for &t in &levels {
            check_scale(&grid, t)?;
        }
        match sup {
            Supremum::Lp(lp) => {
                Ok(Self::Lp { grid, levels, widths, f: f.clone(), b: b.clone(), lp: lp.clone() })
            }
            Supremum::Dictionary(d) => {
                let kernel = d.kernel_grid();
                let n = grid.len();
                let size = d.len();
                let per_cell: Vec<(Vec<f64>, Vec<f64>)> = (0..levels.len() * n)
                    .into_par_iter()
                    .map(|cell| {
                        let (k, p) = (cell / n, cell % n);
                        let y = grid.coord(p);
                        let fs = kernel_samples(f, &y, levels[k], kernel);
                        let bs = kernel_samples(b, &y, levels[k], kernel);
                        let cf: Vec<f64> = fs.iter().zip(kernel.weights()).map(|(a, w)| a * w).collect();
                        let cfb: Vec<f64> = cf.iter().zip(&bs).map(|(a, b)| a * b).collect();
                        let dot = |t: &[f64], c: &[f64]| t.iter().zip(c).map(|(a, b)| a * b).sum::<f64>();
                        let u = d.kernels().iter().map(|t| dot(t, &cf)).collect();
                        let v = d.kernels().iter().map(|t| dot(t, &cfb)).collect();
                        (u, v)
                    })
                    .collect();
                let mut u = Vec::with_capacity(per_cell.len() * size);
                let mut v = Vec::with_capacity(per_cell.len() * size);
                for (a, b) in per_cell {
                    u.extend(a);
                    v.extend(b);
                }
                Ok(Self::Dictionary { grid, levels, widths, size, u, v })
            }
        }
    }

    pub fn grid(&self) -> &Grid {
        match self {
            Self::Dictionary { grid, .. } | Self::Lp { grid, .. } => grid,
        }
    }

    pub fn levels(&self) -> &[f64] {
        match self {
            Self::Dictionary { levels, .. } | Self::Lp { levels, .. } => levels,
        }
    }

    pub fn widths(&self) -> &[f64] {
        match self {
            Self::Dictionary { widths, .. } | Self::Lp { widths, .. } => widths,
        }
    }

    /// A^x(y_point, t_level) for a vertex where b(x) = `bx`.
    pub fn value(&self, level: usize, point: usize, bx: f64) -> Result<f64> {
        match self {
            Self::Dictionary { grid, size, u, v, .. } => {
                let off = (level * grid.len() + point) * size;
                Ok(u[off..off + size]
                    .iter()
                    .zip(&v[off..off + size])
                    .map(|(a, b)| (bx * a - b).abs())
                    .fold(0.0, f64::max))
            }
            Self::Lp { grid, levels, f, b, lp, .. } => {
                let mult = b.map(|v| bx - v)?;
                kernel_lp_max(f, &grid.coord(point), levels[level], lp, Some(&mult))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_below_spacing_is_rejected() {
        let g = Grid::interval(-1.0, 1.0, 33).unwrap();
        let f = GridFunction::from_fn(g, |x| x[0]).unwrap();
        let k = KernelGrid::new(1.0, 9, 1).unwrap();
        let lp = KernelLp::new(&k);
        assert!(matches!(
            kernel_lp_max(&f, &[0.0; 2], g.spacing() / 2.0, &lp, None),
            Err(Error::ScaleBelowSpacing { .. })
        ));
        assert!(kernel_lp_max(&f, &[0.0; 2], g.spacing(), &lp, None).is_ok());
    }

    #[test]
    fn constants_vanish_and_dictionary_is_below_lp() {
        let g = Grid::interval(-1.0, 1.0, 33).unwrap();
        let k = KernelGrid::new(0.5, 21, 1).unwrap();
        let lp = KernelLp::new(&k);
        let c = GridFunction::constant(g, 2.5);
        assert!(kernel_lp_max(&c, &[0.1, 0.0], 0.3, &lp, None).unwrap() < 1e-10);
        let f = GridFunction::from_fn(g, |x| (3.0 * x[0]).sin()).unwrap();
        let d = Dictionary::refined(&k, 64, 3).unwrap();
        for (y, t) in [(0.0, 0.0625), (0.3, 0.5), (-0.5, 1.0)] {
            let obj = objective(&f, &[y, 0.0], t, &k, None).unwrap();
            let exact = lp.maximize(&obj).unwrap().value;
            for theta in d.kernels() {
                let v: f64 = theta.iter().zip(&obj).map(|(a, b)| a * b).sum();
                assert!(v.abs() <= exact + 1e-9);
            }
        }
    }

    #[test]
    fn field_is_zero_for_zero_input() {
        let g = Grid::interval(-1.0, 1.0, 17).unwrap();
        let hs = HalfSpaceGrid::default_for(g);
        let k = KernelGrid::new(1.0, 9, 1).unwrap();
        for sup in [Supremum::lp(&k), Supremum::dictionary(&k).unwrap()] {
            let field = a_alpha_field(&GridFunction::zeros(g), &sup, &hs).unwrap();
            assert_eq!(field.max(), 0.0);
        }
    }

    #[test]
    fn commutator_modes_agree_with_direct_objective() {
        let g = Grid::interval(-1.0, 1.0, 17).unwrap();
        let hs = HalfSpaceGrid::default_for(g);
        let k = KernelGrid::new(1.0, 9, 1).unwrap();
        let f = GridFunction::from_fn(g, |x| (1.0 - x[0].abs()).max(0.0)).unwrap();
        let b = GridFunction::from_fn(g, |x| x[0]).unwrap();
        let dict = Dictionary::refined(&k, 32, 1).unwrap();
        let field = CommutatorField::new(&b, &f, &Supremum::Dictionary(dict.clone()), &hs).unwrap();
        let lp_field = CommutatorField::new(&b, &f, &Supremum::lp(&k), &hs).unwrap();
        let (level, point, bx) = (3, 5, 0.25);
        let mult = b.map(|v| bx - v).unwrap();
        let obj = objective(&f, &g.coord(point), hs.levels()[level], &k, Some(&mult)).unwrap();
        assert!((field.value(level, point, bx).unwrap() - dict.best(&obj)).abs() < 1e-12);
        let exact = KernelLp::new(&k).maximize(&obj).unwrap().value;
        assert!((lp_field.value(level, point, bx).unwrap() - exact).abs() < 1e-12);
        assert!(dict.best(&obj) <= exact + 1e-9);
    }
}
