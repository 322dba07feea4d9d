//! Hypothesis checklists: every theorem suite runs only when each of its
//! checks passes, and every check reports the constant it fitted.

use std::fmt;

use crate::error::Result;
use crate::grid::{BallFamily, Grid, GridFunction};
use crate::growth::{
    log_space, muckenhoupt_constant, phi_decreasing_check, phi_dini_check, GrowthFunction, OuterFunction,
    TypeBound, TypeSample, Weight, YoungFunction,
};
use crate::norms::bmo_norm;

/// Default cap on fitted constants: anything above it is treated as "not
/// finite at the resolved scales".
pub const DEFAULT_CAP: f64 = 1e4;

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub check: String,
    pub param: String,
    pub constant: f64,
    pub pass: bool,
}

impl HypothesisCheck {
    fn new(check: &str, param: impl Into<String>, constant: f64, pass: bool) -> Self {
        Self { check: check.to_string(), param: param.into(), constant, pass }
    }

    fn capped(check: &str, param: impl Into<String>, constant: f64, cap: f64) -> Self {
        Self::new(check, param, constant, constant.is_finite() && constant <= cap)
    }
}

impl fmt::Display for HypothesisCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "pass" } else { "fail" };
        write!(f, "{} [{}] = {} ({verdict})", self.check, self.param, self.constant)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &HypothesisCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, check: &str) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| c.check == check)
    }

    fn push(&mut self, c: HypothesisCheck) {
        self.checks.push(c);
    }
}

/// Lower end of the admissible λ range, min{max{base, p₁}, 3 + 2α/n}.
/// The modular estimate uses base 2, the Morrey-space estimates base 3.
pub fn lambda_threshold(base: f64, p1: f64, alpha: f64, dim: usize) -> f64 {
    base.max(p1).min(3.0 + 2.0 * alpha / dim as f64)
}

/// Scales at which the outer-function integral conditions are sampled.
pub fn default_r_list() -> Vec<f64> {
    log_space(1e-4, 1e4, 33)
}

/// Inputs shared by the checklist builders.
pub struct Checklist<'a> {
    pub grid: &'a Grid,
    pub balls: &'a BallFamily,
    pub cap: f64,
    report: HypothesisReport,
}

impl<'a> Checklist<'a> {
    pub fn new(grid: &'a Grid, balls: &'a BallFamily, cap: f64) -> Self {
        Self { grid, balls, cap, report: HypothesisReport::default() }
    }

    pub fn finish(self) -> HypothesisReport {
        self.report
    }

    fn sample(&self) -> TypeSample {
        let stride = (self.grid.len() / 16).max(1);
        TypeSample::for_grid(self.grid, stride, 4)
    }

    fn centers(&self) -> Vec<[f64; 2]> {
        self.sample().xs
    }

    /// Declared type exponents, their fitted constants and p₀ > 1.
    pub fn growth_types(&mut self, phi: &GrowthFunction, need_p0_above_one: bool) -> Result<()> {
        let sample = self.sample();
        let lower = phi.type_constant(TypeBound::Lower, &sample)?;
        let upper = phi.type_constant(TypeBound::Upper, &sample)?;
        self.report.push(HypothesisCheck::capped("lower_type", format!("p0={}", phi.p0), lower, self.cap));
        self.report.push(HypothesisCheck::capped("upper_type", format!("p1={}", phi.p1), upper, self.cap));
        if need_p0_above_one {
            self.report.push(HypothesisCheck::new("p0_above_one", format!("p0={}", phi.p0), phi.p0, phi.p0 > 1.0));
        }
        Ok(())
    }

    /// Young function types, checked through the unweighted Orlicz growth function.
    pub fn young_types(&mut self, young: &YoungFunction) -> Result<()> {
        let phi = GrowthFunction::orlicz(young.clone())?;
        self.growth_types(&phi, true)
    }

    /// ℙA_q constant of φ over the ball family and a t-lattice.
    pub fn muckenhoupt(&mut self, phi: &GrowthFunction, q: f64) -> Result<()> {
        let ts = log_space(1e-4, 1e4, 9);
        let c = muckenhoupt_constant(phi, q, self.grid, self.balls, &ts)?;
        self.report.push(HypothesisCheck::capped("muckenhoupt", format!("q={q}"), c, self.cap));
        Ok(())
    }

    /// A_q constant of a weight, via the growth function w(x)·t.
    pub fn weight_class(&mut self, weight: &Weight, q: f64) -> Result<()> {
        let phi = GrowthFunction::weighted_power(weight.clone(), 1.0)?;
        let c = muckenhoupt_constant(&phi, q, self.grid, self.balls, &[1.0])?;
        self.report.push(HypothesisCheck::capped("weight_class", format!("q={q}"), c, self.cap));
        Ok(())
    }

    /// ∫_r^∞ dt/(φ(t)t) ≲ 1/φ(r), and for variable families also φ(x,r) ≲ φ(x,s), r ≤ s,
    /// at sample centers.
    pub fn dini(&mut self, outer: &OuterFunction, variable: bool) {
        let r_list = default_r_list();
        if !variable {
            let c = phi_dini_check(outer, &r_list);
            self.report.push(HypothesisCheck::new("dini", "r in [1e-4,1e4]", c.constant, c.passes(self.cap)));
            return;
        }
        let mut worst: f64 = 0.0;
        let mut ok = true;
        for x in self.centers() {
            let c = phi_dini_check(&frozen(outer, x), &r_list);
            ok &= c.passes(self.cap);
            worst = worst.max(c.constant);
        }
        self.report.push(HypothesisCheck::new("dini", "per center", worst, ok));
        let mono = self.pair_max(outer, |phi_r, phi_s, _, _| phi_r / phi_s);
        self.report.push(HypothesisCheck::capped("almost_increasing", "per center", mono, self.cap));
    }

    /// ∫_r^∞ φ(t)/t dt ≲ φ(r) and φ(r)r ≲ φ(s)s, r ≤ s; variable families also
    /// need φ(x,s) ≲ φ(x,r).
    pub fn decreasing(&mut self, outer: &OuterFunction, variable: bool) {
        let r_list = default_r_list();
        let centers = if variable { self.centers() } else { vec![[0.0; 2]] };
        let mut integral: f64 = 0.0;
        let mut monotone: f64 = 0.0;
        let mut ok = true;
        for x in centers {
            let c = phi_decreasing_check(&frozen(outer, x), &r_list);
            ok &= c.integral.passes(self.cap);
            integral = integral.max(c.integral.constant);
            monotone = monotone.max(c.monotone);
        }
        self.report.push(HypothesisCheck::new("decay_integral", "r in [1e-4,1e4]", integral, ok));
        self.report.push(HypothesisCheck::capped("r_phi_almost_increasing", "r <= s", monotone, self.cap));
        if variable {
            let dec = self.pair_max(outer, |phi_r, phi_s, _, _| phi_s / phi_r);
            self.report.push(HypothesisCheck::capped("almost_decreasing", "per center", dec, self.cap));
        }
    }

    /// max over centers and r ≤ s of `ratio(φ(x,r), φ(x,s), r, s)`.
    fn pair_max(&self, outer: &OuterFunction, ratio: impl Fn(f64, f64, f64, f64) -> f64) -> f64 {
        let r_list = default_r_list();
        let mut worst: f64 = 0.0;
        for x in self.centers() {
            for (i, &r) in r_list.iter().enumerate() {
                for &s in &r_list[i..] {
                    worst = worst.max(ratio(outer.eval_at(&x, r), outer.eval_at(&x, s), r, s));
                }
            }
        }
        worst
    }

    pub fn lambda(&mut self, lambda: f64, threshold: f64) {
        self.report.push(HypothesisCheck::new("lambda", format!("threshold={threshold}"), lambda, lambda > threshold));
    }

    /// n(p/p₀ - 1) < α.
    pub fn index(&mut self, p: f64, p0: f64, alpha: f64, dim: usize) {
        let v = dim as f64 * (p / p0 - 1.0);
        self.report.push(HypothesisCheck::new("index", format!("alpha={alpha}"), v, v < alpha));
    }

    /// p ≤ q' for q > 1; q = 1 needs p₁ ≤ 1 instead.
    pub fn exponent_relation(&mut self, p: f64, q: f64, p1: f64) {
        if q > 1.0 {
            let q_dual = q / (q - 1.0);
            self.report.push(HypothesisCheck::new("p_le_q_dual", format!("q'={q_dual}"), p, p <= q_dual));
        } else {
            self.report.push(HypothesisCheck::new("p1_le_one", "q=1", p1, p1 <= 1.0));
        }
    }

    /// The commutator symbol has finite BMO norm.
    pub fn symbol(&mut self, b: &GridFunction) -> Result<()> {
        let c = bmo_norm(b, self.balls)?;
        self.report.push(HypothesisCheck::capped("symbol_bmo", "b", c, self.cap));
        Ok(())
    }
}

/// The outer function with its center argument fixed at `x`.
fn frozen(outer: &OuterFunction, x: [f64; 2]) -> OuterFunction {
    match outer {
        OuterFunction::VariablePower(l) => OuterFunction::Power(l(&x)),
        OuterFunction::Custom(_) => {
            let o = outer.clone();
            OuterFunction::Custom(std::sync::Arc::new(move |t| o.eval_at(&x, t)))
        }
        _ => outer.clone(),
    }
}
