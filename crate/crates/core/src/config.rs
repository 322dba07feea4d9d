//! Flat `key = value` run configuration with `#` comments. Unknown keys and
//! out-of-range values are rejected with `Error::Config`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{BallFamily, Grid, GridFunction};
use crate::growth::{GrowthFunction, OuterFunction, Weight, YoungFunction};
use crate::intrinsic::Intrinsic;
use crate::norms::SpaceSpec;
use crate::verify::SuiteParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Power,
    WeightedPower,
    WeightedOrlicz,
    /// Unweighted Orlicz function Σ cᵢ t^{eᵢ} from `young_terms`.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterKind {
    Power,
    Log,
    Constant,
    MinOneInv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub points: usize,
    pub lower: f64,
    pub upper: f64,
    pub family: Family,
    pub p: f64,
    pub weight_csv: Option<PathBuf>,
    /// Terms (c, e) of Σ c t^e for the Orlicz families.
    pub young_terms: Vec<(f64, f64)>,
    pub outer: OuterKind,
    pub outer_s: f64,
    pub space: String,
    pub q: f64,
    pub kappa: f64,
    pub r_exp: f64,
    pub ball_stride: usize,
    pub ball_r_min: Option<f64>,
    pub alpha: f64,
    pub kernel_m: Option<usize>,
    pub lp: bool,
    pub dict_size: usize,
    pub dict_seed: u64,
    pub lambda: Option<f64>,
    pub beta: f64,
    pub young_p: f64,
    pub outer_decay: f64,
    pub campanato_p: f64,
    pub campanato_q: f64,
    pub cap: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub strict: bool,
    /// Directory that relative paths in the file are resolved against.
    pub base_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SuiteParams::default();
        Self {
            dim: 1,
            points: 257,
            lower: -1.0,
            upper: 1.0,
            family: Family::Power,
            p: s.growth_p,
            weight_csv: None,
            young_terms: vec![(1.0, 2.0)],
            outer: OuterKind::Power,
            outer_s: s.outer_s,
            space: "musielak_morrey".into(),
            q: 2.0,
            kappa: 0.5,
            r_exp: 2.0,
            ball_stride: 4,
            ball_r_min: None,
            alpha: s.alpha,
            kernel_m: None,
            lp: false,
            dict_size: s.dictionary_size,
            dict_seed: s.dictionary_seed,
            lambda: None,
            beta: 1.0,
            young_p: s.young_p,
            outer_decay: s.outer_decay,
            campanato_p: s.campanato_p,
            campanato_q: s.campanato_q,
            cap: s.cap,
            seed: s.corpus_seed,
            out_dir: PathBuf::from("ilp_out"),
            strict: false,
            base_dir: PathBuf::from("."),
        }
    }
}

pub const KEYS: &[&str] = &[
    "dim",
    "points",
    "lower",
    "upper",
    "family",
    "p",
    "weight_csv",
    "young_terms",
    "outer",
    "outer_s",
    "space",
    "q",
    "kappa",
    "r_exp",
    "ball_stride",
    "ball_r_min",
    "alpha",
    "kernel_m",
    "mode",
    "dict_size",
    "dict_seed",
    "lambda",
    "beta",
    "young_p",
    "outer_decay",
    "campanato_p",
    "campanato_q",
    "cap",
    "seed",
    "out_dir",
    "strict",
];

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
}

fn terms(v: &str) -> Result<Vec<(f64, f64)>> {
    v.split(',')
        .map(|t| {
            let (c, e) = t
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("young_terms: expected coef:exponent, got '{t}'")))?;
            Ok((num("young_terms", c.trim())?, num("young_terms", e.trim())?))
        })
        .collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            c.set(k.trim(), v.trim())?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut c = Self::parse(&text)?;
        c.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(c)
    }

    /// Sets one key; call `validate` after a batch of changes.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "dim" => self.dim = num(key, v)?,
            "points" => self.points = num(key, v)?,
            "lower" => self.lower = num(key, v)?,
            "upper" => self.upper = num(key, v)?,
            "family" => {
                self.family = match v {
                    "power" => Family::Power,
                    "weighted_power" => Family::WeightedPower,
                    "weighted_orlicz" => Family::WeightedOrlicz,
                    "custom" => Family::Custom,
                    _ => return Err(Error::Config(format!("family: unknown '{v}'"))),
                }
            }
            "p" => self.p = num(key, v)?,
            "weight_csv" => self.weight_csv = Some(PathBuf::from(v)),
            "young_terms" => self.young_terms = terms(v)?,
            "outer" => {
                self.outer = match v {
                    "power" => OuterKind::Power,
                    "log" => OuterKind::Log,
                    "const" => OuterKind::Constant,
                    "min_one_inv" => OuterKind::MinOneInv,
                    _ => return Err(Error::Config(format!("outer: unknown '{v}'"))),
                }
            }
            "outer_s" => self.outer_s = num(key, v)?,
            "space" => self.space = v.to_string(),
            "q" => self.q = num(key, v)?,
            "kappa" => self.kappa = num(key, v)?,
            "r_exp" => self.r_exp = num(key, v)?,
            "ball_stride" => self.ball_stride = num(key, v)?,
            "ball_r_min" => self.ball_r_min = Some(num(key, v)?),
            "alpha" => self.alpha = num(key, v)?,
            "kernel_m" => self.kernel_m = Some(num(key, v)?),
            "mode" => {
                self.lp = match v {
                    "lp" => true,
                    "dict" => false,
                    _ => return Err(Error::Config(format!("mode: expected lp or dict, got '{v}'"))),
                }
            }
            "dict_size" => self.dict_size = num(key, v)?,
            "dict_seed" => self.dict_seed = num(key, v)?,
            "lambda" => self.lambda = Some(num(key, v)?),
            "beta" => self.beta = num(key, v)?,
            "young_p" => self.young_p = num(key, v)?,
            "outer_decay" => self.outer_decay = num(key, v)?,
            "campanato_p" => self.campanato_p = num(key, v)?,
            "campanato_q" => self.campanato_q = num(key, v)?,
            "cap" => self.cap = num(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "out_dir" => self.out_dir = PathBuf::from(v),
            "strict" => self.strict = num(key, v)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(1..=2).contains(&self.dim) {
            return bad(format!("dim must be 1 or 2, got {}", self.dim));
        }
        if self.points < 9 {
            return bad(format!("points must be at least 9, got {}", self.points));
        }
        if !(self.upper > self.lower) {
            return bad("upper must exceed lower".into());
        }
        if !(self.p > 0.0) || !(self.young_p > 1.0) {
            return bad("p must be positive and young_p above 1".into());
        }
        if self.young_terms.iter().any(|&(c, e)| !(c > 0.0) || !(e >= 1.0)) {
            return bad("young_terms need positive coefficients and exponents >= 1".into());
        }
        if !(self.q >= 1.0) || !(self.campanato_q >= 1.0) || !(self.campanato_p > 0.0) {
            return bad("q and campanato_q must be >= 1, campanato_p positive".into());
        }
        if !(0.0..1.0).contains(&self.kappa) {
            return bad(format!("kappa must be in [0,1), got {}", self.kappa));
        }
        if !(self.r_exp > 1.0) {
            return bad(format!("r_exp must exceed 1, got {}", self.r_exp));
        }
        if self.ball_stride == 0 {
            return bad("ball_stride must be positive".into());
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must be in (0,1], got {}", self.alpha));
        }
        if let Some(m) = self.kernel_m {
            if m < 9 || m % 2 == 0 {
                return bad(format!("kernel_m must be odd and >= 9, got {m}"));
            }
        }
        if self.dict_size < 8 {
            return bad(format!("dict_size must be at least 8, got {}", self.dict_size));
        }
        if self.lambda.is_some_and(|l| !(l > 0.0)) || !(self.beta > 0.0) {
            return bad("lambda and beta must be positive".into());
        }
        if !(self.outer_decay < 0.0) {
            return bad(format!("outer_decay must be negative, got {}", self.outer_decay));
        }
        if !(self.cap > 0.0) {
            return bad("cap must be positive".into());
        }
        Ok(())
    }

    /// Key-value dump that parses back to the same configuration.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let family = match self.family {
            Family::Power => "power",
            Family::WeightedPower => "weighted_power",
            Family::WeightedOrlicz => "weighted_orlicz",
            Family::Custom => "custom",
        };
        let outer = match self.outer {
            OuterKind::Power => "power",
            OuterKind::Log => "log",
            OuterKind::Constant => "const",
            OuterKind::MinOneInv => "min_one_inv",
        };
        let terms: Vec<String> = self.young_terms.iter().map(|(c, e)| format!("{c}:{e}")).collect();
        let _ = writeln!(s, "dim = {}\npoints = {}\nlower = {}\nupper = {}", self.dim, self.points, self.lower, self.upper);
        let _ = writeln!(s, "family = {family}\np = {}\nyoung_terms = {}", self.p, terms.join(","));
        if let Some(w) = &self.weight_csv {
            let _ = writeln!(s, "weight_csv = {}", w.display());
        }
        let _ = writeln!(s, "outer = {outer}\nouter_s = {}\nspace = {}", self.outer_s, self.space);
        let _ = writeln!(s, "q = {}\nkappa = {}\nr_exp = {}\nball_stride = {}", self.q, self.kappa, self.r_exp, self.ball_stride);
        if let Some(r) = self.ball_r_min {
            let _ = writeln!(s, "ball_r_min = {r}");
        }
        let _ = writeln!(s, "alpha = {}\nmode = {}", self.alpha, if self.lp { "lp" } else { "dict" });
        if let Some(m) = self.kernel_m {
            let _ = writeln!(s, "kernel_m = {m}");
        }
        let _ = writeln!(s, "dict_size = {}\ndict_seed = {}", self.dict_size, self.dict_seed);
        if let Some(l) = self.lambda {
            let _ = writeln!(s, "lambda = {l}");
        }
        let _ = writeln!(s, "beta = {}\nyoung_p = {}\nouter_decay = {}", self.beta, self.young_p, self.outer_decay);
        let _ = writeln!(s, "campanato_p = {}\ncampanato_q = {}\ncap = {}", self.campanato_p, self.campanato_q, self.cap);
        let _ = writeln!(s, "seed = {}\nout_dir = {}\nstrict = {}", self.seed, self.out_dir.display(), self.strict);
        s
    }

    pub fn grid(&self) -> Result<Grid> {
        if self.dim == 1 {
            Grid::interval(self.lower, self.upper, self.points)
        } else {
            Grid::square(self.lower, self.upper, self.points)
        }
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() { p.to_path_buf() } else { self.base_dir.join(p) }
    }

    /// The weight from `weight_csv`, which must live on `grid`.
    pub fn weight(&self, grid: &Grid) -> Result<Weight> {
        let Some(path) = &self.weight_csv else {
            return Ok(Weight::unit(*grid));
        };
        let path = self.resolve(path);
        let f = GridFunction::load_csv(&path)
            .map_err(|e| Error::Config(format!("weight_csv {}: {e}", path.display())))?;
        if f.grid().points_per_axis() != grid.points_per_axis() || f.grid().dim() != grid.dim() {
            return Err(Error::Config("weight_csv grid differs from the input grid".into()));
        }
        Weight::new(GridFunction::new(*grid, f.into_values())?)
    }

    pub fn young(&self) -> Result<YoungFunction> {
        match self.young_terms.as_slice() {
            [(c, e)] if *c == 1.0 => YoungFunction::power(*e),
            t => YoungFunction::sum_of_powers(t.to_vec()),
        }
    }

    pub fn growth(&self, grid: &Grid) -> Result<GrowthFunction> {
        match self.family {
            Family::Power => GrowthFunction::power(self.p),
            Family::WeightedPower => GrowthFunction::weighted_power(self.weight(grid)?, self.p),
            Family::WeightedOrlicz => GrowthFunction::weighted_orlicz(self.weight(grid)?, self.young()?),
            Family::Custom => GrowthFunction::orlicz(self.young()?),
        }
    }

    pub fn outer_function(&self) -> OuterFunction {
        match self.outer {
            OuterKind::Power => OuterFunction::Power(self.outer_s),
            OuterKind::Log => OuterFunction::LogE,
            OuterKind::Constant => OuterFunction::Constant(1.0),
            OuterKind::MinOneInv => OuterFunction::MinOneInv,
        }
    }

    pub fn balls(&self, grid: &Grid) -> Result<BallFamily> {
        BallFamily::dyadic(grid, self.ball_stride, self.ball_r_min.unwrap_or(2.0 * grid.spacing()))
    }

    /// Space named by `space` (or the `space` key) over `balls`.
    pub fn space(&self, name: &str, grid: &Grid, balls: BallFamily) -> Result<SpaceSpec> {
        match name {
            "musielak_morrey" => SpaceSpec::musielak_morrey(self.growth(grid)?, self.outer_function(), balls),
            "weighted_orlicz_morrey" => {
                SpaceSpec::weighted_orlicz_morrey(self.young()?, self.weight(grid)?, self.outer_function(), balls)
            }
            "campanato" => SpaceSpec::campanato(self.growth(grid)?, self.q, balls),
            "campanato_star" => SpaceSpec::campanato_star(self.growth(grid)?, self.q, balls),
            "bmo" => Ok(SpaceSpec::bmo(balls)),
            "classical_morrey" => SpaceSpec::classical_morrey(self.p, self.kappa, balls),
            "l_phi" => Ok(SpaceSpec::l_phi(self.growth(grid)?, balls)),
            _ => Err(Error::Config(format!("unknown space '{name}'"))),
        }
    }

    pub fn suite_params(&self) -> SuiteParams {
        SuiteParams {
            alpha: self.alpha,
            kernel_resolution: self.kernel_m,
            lp: self.lp,
            dictionary_size: self.dict_size,
            dictionary_seed: self.dict_seed,
            lambda: self.lambda,
            growth_p: self.p,
            outer_s: self.outer_s,
            young_p: self.young_p,
            outer_decay: self.outer_decay,
            campanato_p: self.campanato_p,
            campanato_q: self.campanato_q,
            ball_stride: Some(self.ball_stride),
            ball_r_min: self.ball_r_min,
            cap: self.cap,
            corpus_seed: self.seed,
        }
    }

    pub fn intrinsic(&self, grid: &Grid) -> Result<Intrinsic> {
        self.suite_params().intrinsic(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_round_trips() {
        let c = RunConfig::parse("# demo\npoints = 65   # coarse\nmode = lp\nlambda=6\nyoung_terms = 1:2, 0.5:3\n").unwrap();
        assert_eq!(c.points, 65);
        assert!(c.lp);
        assert_eq!(c.lambda, Some(6.0));
        assert_eq!(c.young_terms, vec![(1.0, 2.0), (0.5, 3.0)]);
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_ranges() {
        for text in ["colour = red", "alpha = 1.5", "kernel_m = 10", "kappa = 1", "dim = 3", "mode = exact", "points"] {
            assert!(matches!(RunConfig::parse(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn shipped_config_is_the_default() {
        let text = include_str!("../../../configs/default.conf");
        assert_eq!(RunConfig::parse(text).unwrap(), RunConfig::default());
    }

    #[test]
    fn defaults_match_suite_defaults() {
        let c = RunConfig::default();
        let mut s = c.suite_params();
        s.ball_stride = None;
        assert_eq!(s, SuiteParams::default());
    }

    #[test]
    fn builds_every_space() {
        let c = RunConfig::parse("points = 33").unwrap();
        let g = c.grid().unwrap();
        let f = GridFunction::from_fn(g, |x| x[0].sin()).unwrap();
        for name in
            ["musielak_morrey", "weighted_orlicz_morrey", "campanato", "campanato_star", "bmo", "classical_morrey", "l_phi"]
        {
            let s = c.space(name, &g, c.balls(&g).unwrap()).unwrap();
            assert!(s.norm(&f).unwrap().is_finite());
        }
        assert!(c.space("hardy", &g, c.balls(&g).unwrap()).is_err());
    }
}
