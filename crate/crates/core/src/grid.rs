//! Uniform grids in one or two dimensions, functions sampled on them, balls,
//! midpoint quadrature and the discretized upper half-space.
//!
//! Points are stored x-major: in 2D the flat index of `(ix, iy)` is
//! `ix * ny + iy`, which is also the row order of the CSV format.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Uniform grid on a box in R^1 or R^2 with identical spacing on every axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    lower: [f64; 2],
    points: [usize; 2],
    spacing: f64,
}

impl Grid {
    pub fn new(lower: &[f64], points: &[usize], spacing: f64) -> Result<Self> {
        let dim = lower.len();
        if !(1..=2).contains(&dim) || points.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "dimension must be 1 or 2 (got lower={lower:?}, points={points:?})"
            )));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        if points.iter().any(|&n| n < 2) {
            return Err(Error::InvalidGrid("at least two points per axis".into()));
        }
        if lower.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidGrid("non-finite lower corner".into()));
        }
        let mut lo = [0.0; 2];
        let mut np = [1usize; 2];
        lo[..dim].copy_from_slice(lower);
        np[..dim].copy_from_slice(points);
        Ok(Self { dim, lower: lo, points: np, spacing })
    }

    /// Grid on `[a, b]` with `n` points including both endpoints.
    pub fn interval(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(b > a) {
            return Err(Error::InvalidGrid(format!("bad interval [{a}, {b}] with {n} points")));
        }
        Self::new(&[a], &[n], (b - a) / (n - 1) as f64)
    }

    /// Grid on the square `[a, b]^2` with `n` points per axis.
    pub fn square(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(b > a) {
            return Err(Error::InvalidGrid(format!("bad square [{a}, {b}]^2 with {n} points")));
        }
        Self::new(&[a, a], &[n, n], (b - a) / (n - 1) as f64)
    }

    /// Same box, spacing halved.
    pub fn refined(&self) -> Self {
        let mut g = *self;
        for k in 0..self.dim {
            g.points[k] = 2 * self.points[k] - 1;
        }
        g.spacing = self.spacing / 2.0;
        g
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower[..self.dim]
    }

    pub fn points_per_axis(&self) -> &[usize] {
        &self.points[..self.dim]
    }

    pub fn upper(&self, axis: usize) -> f64 {
        self.lower[axis] + (self.points[axis] - 1) as f64 * self.spacing
    }

    pub fn len(&self) -> usize {
        self.points[0] * self.points[1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// h^n, the midpoint-rule weight of a single grid point.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    /// Euclidean diameter of the box.
    pub fn diameter(&self) -> f64 {
        (0..self.dim)
            .map(|k| ((self.points[k] - 1) as f64 * self.spacing).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix * self.points[1] + iy
    }

    /// Coordinates of point `idx`; unused trailing axes are 0.
    pub fn coord(&self, idx: usize) -> [f64; 2] {
        let (ix, iy) = (idx / self.points[1], idx % self.points[1]);
        [
            self.lower[0] + ix as f64 * self.spacing,
            if self.dim == 2 { self.lower[1] + iy as f64 * self.spacing } else { 0.0 },
        ]
    }

    pub fn coords(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.len()).map(move |i| self.coord(i))
    }

    pub fn distance(&self, a: &[f64; 2], b: &[f64; 2]) -> f64 {
        let dx = a[0] - b[0];
        if self.dim == 1 {
            dx.abs()
        } else {
            let dy = a[1] - b[1];
            (dx * dx + dy * dy).sqrt()
        }
    }

    /// Flat indices of grid points strictly inside `ball`.
    pub fn indices_in_ball(&self, ball: &Ball) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_in_ball(ball, |idx, _| out.push(idx));
        out
    }

    /// Calls `visit(index, distance to center)` for every grid point strictly
    /// inside `ball`, in index order.
    pub fn for_each_in_ball(&self, ball: &Ball, mut visit: impl FnMut(usize, f64)) {
        let range = |k: usize| -> Option<(usize, usize)> {
            let c = ball.center[k];
            let lo = ((c - ball.radius - self.lower[k]) / self.spacing).ceil().max(0.0);
            let hi = ((c + ball.radius - self.lower[k]) / self.spacing)
                .floor()
                .min((self.points[k] - 1) as f64);
            (lo <= hi).then_some((lo as usize, hi as usize))
        };
        let Some((x0, x1)) = range(0) else { return };
        let (y0, y1) = if self.dim == 2 {
            match range(1) {
                Some(r) => r,
                None => return,
            }
        } else {
            (0, 0)
        };
        for ix in x0..=x1 {
            for iy in y0..=y1 {
                let idx = self.index(ix, iy);
                let d = self.distance(&self.coord(idx), &ball.center);
                if d < ball.radius {
                    visit(idx, d);
                }
            }
        }
    }

    /// Multilinear interpolation of grid values at an arbitrary point. Outside
    /// the box the nearest boundary value is used (constant extension).
    pub fn interpolate(&self, values: &[f64], p: &[f64; 2]) -> f64 {
        let axis = |k: usize| -> (usize, f64) {
            let n = self.points[k];
            let u = ((p[k] - self.lower[k]) / self.spacing).clamp(0.0, (n - 1) as f64);
            let i = (u.floor() as usize).min(n - 2);
            (i, u - i as f64)
        };
        let (ix, fx) = axis(0);
        if self.dim == 1 {
            values[ix] * (1.0 - fx) + values[ix + 1] * fx
        } else {
            let (iy, fy) = axis(1);
            let v00 = values[self.index(ix, iy)];
            let v01 = values[self.index(ix, iy + 1)];
            let v10 = values[self.index(ix + 1, iy)];
            let v11 = values[self.index(ix + 1, iy + 1)];
            (v00 * (1.0 - fy) + v01 * fy) * (1.0 - fx) + (v10 * (1.0 - fy) + v11 * fy) * fx
        }
    }
}

/// Real values sampled at every point of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite value at point {i}")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = grid.coords().map(|c| f(&c[..grid.dim()])).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self { grid, values: vec![c; grid.len()] }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn abs(&self) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v.abs()).collect() }
    }

    pub fn add_constant(&self, c: f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v + c).collect() }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("grid mismatch".into()));
        }
        Self::new(
            self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn at(&self, p: &[f64; 2]) -> f64 {
        self.grid.interpolate(&self.values, p)
    }

    /// Writes `x[,y],value` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = String::new();
        buf.push_str(if self.grid.dim == 1 { "x,value\n" } else { "x,y,value\n" });
        for (i, &v) in self.values.iter().enumerate() {
            let c = self.grid.coord(i);
            if self.grid.dim == 1 {
                let _ = writeln!(buf, "{},{}", fmt17(c[0]), fmt17(v));
            } else {
                let _ = writeln!(buf, "{},{},{}", fmt17(c[0]), fmt17(c[1]), fmt17(v));
            }
        }
        w.write_all(buf.as_bytes())?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| Error::Csv("empty input".into()))??;
        let dim = match header.trim() {
            "x,value" => 1,
            "x,y,value" => 2,
            other => return Err(Error::Csv(format!("unexpected header `{other}`"))),
        };
        let mut rows: Vec<[f64; 3]> = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != dim + 1 {
                return Err(Error::Csv(format!("line {}: expected {} fields", lineno + 2, dim + 1)));
            }
            let mut row = [0.0; 3];
            for (k, f) in fields.iter().enumerate() {
                row[k] = f
                    .trim()
                    .parse()
                    .map_err(|e| Error::Csv(format!("line {}: {e}", lineno + 2)))?;
            }
            rows.push(row);
        }
        let axis_values = |k: usize| -> Vec<f64> {
            let mut v: Vec<f64> = rows.iter().map(|r| r[k]).collect();
            v.sort_by(|a, b| a.total_cmp(b));
            v.dedup();
            v
        };
        let xs = axis_values(0);
        if xs.len() < 2 {
            return Err(Error::Csv("need at least two distinct x values".into()));
        }
        let mut lower = vec![xs[0]];
        let mut points = vec![xs.len()];
        let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        if dim == 2 {
            let ys = axis_values(1);
            lower.push(ys[0]);
            points.push(ys.len());
        }
        let grid = Grid::new(&lower, &points, h)?;
        if rows.len() != grid.len() {
            return Err(Error::Csv(format!(
                "{} rows do not fill a {:?} grid",
                rows.len(),
                grid.points_per_axis()
            )));
        }
        for (i, r) in rows.iter().enumerate() {
            let c = grid.coord(i);
            for k in 0..dim {
                if (c[k] - r[k]).abs() > 1e-6 * h {
                    return Err(Error::Csv(format!("row {i} is off the uniform lattice")));
                }
            }
        }
        GridFunction::new(grid, rows.into_iter().map(|r| r[dim]).collect())
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}

/// Formats with 17 significant digits, enough to round-trip any finite f64.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Open Euclidean ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Ball {
    pub fn new(center: &[f64], radius: f64) -> Self {
        let mut c = [0.0; 2];
        c[..center.len()].copy_from_slice(center);
        Self { center: c, radius }
    }

    pub fn dilated(&self, factor: f64) -> Self {
        Self { center: self.center, radius: self.radius * factor }
    }
}

/// Finite family of balls standing in for "all balls".
#[derive(Debug, Clone, PartialEq)]
pub struct BallFamily {
    balls: Vec<Ball>,
    pub center_stride: usize,
    pub r_min: f64,
}

impl BallFamily {
    /// Centers on every `stride`-th grid point along each axis, radii
    /// `r_min * 2^k` up to half the box diameter.
    pub fn dyadic(grid: &Grid, stride: usize, r_min: f64) -> Result<Self> {
        if stride == 0 || !(r_min >= grid.spacing() * (1.0 - 1e-12)) {
            return Err(Error::InvalidParameter(format!(
                "ball family needs stride >= 1 and r_min >= h (stride={stride}, r_min={r_min})"
            )));
        }
        let r_max = grid.diameter() / 2.0;
        let mut radii = Vec::new();
        let mut r = r_min;
        while r <= r_max * (1.0 + 1e-12) {
            radii.push(r);
            r *= 2.0;
        }
        if radii.is_empty() {
            radii.push(r_min);
        }
        let np = grid.points_per_axis();
        let mut balls = Vec::new();
        let ys: Vec<usize> = if grid.dim() == 2 { (0..np[1]).step_by(stride).collect() } else { vec![0] };
        for ix in (0..np[0]).step_by(stride) {
            for &iy in &ys {
                let c = grid.coord(grid.index(ix, iy));
                for &r in &radii {
                    balls.push(Ball { center: c, radius: r });
                }
            }
        }
        Ok(Self { balls, center_stride: stride, r_min })
    }

    /// Centers on every 4th grid point, radii {2h, 4h, ..., diam/2}.
    pub fn default_for(grid: &Grid) -> Self {
        Self::dyadic(grid, 4, 2.0 * grid.spacing()).expect("default ball family parameters are valid")
    }

    pub fn from_balls(balls: Vec<Ball>) -> Result<Self> {
        if balls.is_empty() {
            return Err(Error::InvalidParameter("empty ball family".into()));
        }
        let r_min = balls.iter().map(|b| b.radius).fold(f64::INFINITY, f64::min);
        Ok(Self { balls, center_stride: 0, r_min })
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }
}

/// Midpoint-rule integral of `f` over the grid points inside `ball`.
pub fn integrate_ball(f: &GridFunction, ball: &Ball) -> Result<f64> {
    let idx = f.grid().indices_in_ball(ball);
    if idx.is_empty() {
        return Err(Error::BallOffGrid);
    }
    Ok(idx.iter().map(|&i| f.values()[i]).sum::<f64>() * f.grid().cell_volume())
}

/// Measure of the grid points inside `ball`.
pub fn ball_measure(grid: &Grid, ball: &Ball) -> Result<f64> {
    let n = grid.indices_in_ball(ball).len();
    if n == 0 {
        return Err(Error::BallOffGrid);
    }
    Ok(n as f64 * grid.cell_volume())
}

pub fn mean_on_ball(f: &GridFunction, ball: &Ball) -> Result<f64> {
    let idx = f.grid().indices_in_ball(ball);
    if idx.is_empty() {
        return Err(Error::BallOffGrid);
    }
    Ok(idx.iter().map(|&i| f.values()[i]).sum::<f64>() / idx.len() as f64)
}

pub fn ess_inf_on_ball(f: &GridFunction, ball: &Ball) -> Result<f64> {
    f.grid()
        .indices_in_ball(ball)
        .iter()
        .map(|&i| f.values()[i])
        .reduce(f64::min)
        .ok_or(Error::BallOffGrid)
}

/// Geometric scale levels `h, h*rho, ...` over a spatial grid, the last one at
/// least the box diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpaceGrid {
    base: Grid,
    levels: Vec<f64>,
    ratio: f64,
}

impl HalfSpaceGrid {
    pub const DEFAULT_RATIO: f64 = 1.189_207_115_002_721; // 2^(1/4)

    pub fn new(base: Grid, ratio: f64) -> Result<Self> {
        Self::with_max(base, ratio, base.diameter())
    }

    pub fn with_max(base: Grid, ratio: f64, t_max: f64) -> Result<Self> {
        if !(ratio > 1.0) {
            return Err(Error::InvalidParameter(format!("level ratio must exceed 1, got {ratio}")));
        }
        let h = base.spacing();
        let mut levels = vec![h];
        let mut k = 1;
        while *levels.last().unwrap() < t_max {
            levels.push(h * ratio.powi(k));
            k += 1;
        }
        Ok(Self { base, levels, ratio })
    }

    pub fn default_for(base: Grid) -> Self {
        Self::new(base, Self::DEFAULT_RATIO).expect("default ratio is valid")
    }

    pub fn base(&self) -> &Grid {
        &self.base
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn t_max(&self) -> f64 {
        *self.levels.last().unwrap()
    }

    /// Width of the t-interval attached to level `k`: t_{k+1} - t_k, with the
    /// geometric progression continued past the last level.
    pub fn level_width(&self, k: usize) -> f64 {
        self.levels[k] * (self.ratio - 1.0)
    }
}
