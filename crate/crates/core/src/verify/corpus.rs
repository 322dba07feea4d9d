//! The fixed analytic test-function corpus.
//!
//! Members are defined in coordinates relative to the grid box (`u = (x-c)/L`
//! with `c` the box center and `L` its half-width), so regenerating the corpus
//! on a refined grid samples the same functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::grid::{Grid, GridFunction};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberKind {
    Constant,
    Indicator,
    Tent,
    Power,
    Oscillation,
    Log,
    Random,
    Smooth,
}

#[derive(Debug, Clone)]
pub struct CorpusMember {
    pub name: String,
    pub kind: MemberKind,
    pub function: GridFunction,
}

impl CorpusMember {
    /// Belongs to BMO with a norm that stays bounded under refinement.
    pub fn is_bmo(&self) -> bool {
        self.kind != MemberKind::Power
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    seed: u64,
    members: Vec<CorpusMember>,
}

struct Frame {
    center: [f64; 2],
    half: f64,
    h: f64,
    dim: usize,
}

impl Frame {
    fn new(grid: &Grid) -> Self {
        let dim = grid.dim();
        let mut center = [0.0; 2];
        let mut half = f64::INFINITY;
        for (k, c) in center.iter_mut().enumerate().take(dim) {
            *c = 0.5 * (grid.lower()[k] + grid.upper(k));
            half = half.min(0.5 * (grid.upper(k) - grid.lower()[k]));
        }
        Self { center, half, h: grid.spacing(), dim }
    }

    fn u(&self, x: &[f64]) -> [f64; 2] {
        let mut u = [0.0; 2];
        for k in 0..self.dim {
            u[k] = (x[k] - self.center[k]) / self.half;
        }
        u
    }

    fn r(u: &[f64; 2], at: [f64; 2]) -> f64 {
        ((u[0] - at[0]).powi(2) + (u[1] - at[1]).powi(2)).sqrt()
    }

    /// Physical distance to a point given in relative coordinates, clamped at h.
    fn clamped(&self, u: &[f64; 2], at: [f64; 2]) -> f64 {
        (Self::r(u, at) * self.half).max(self.h)
    }
}

fn random_piecewise(rng: &mut ChaCha8Rng, dim: usize) -> impl Fn(&[f64; 2]) -> f64 {
    if dim == 1 {
        let mut cuts: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
        cuts.sort_by(f64::total_cmp);
        let vals: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Box::new(move |u: &[f64; 2]| vals[cuts.iter().filter(|c| **c <= u[0]).count()]) as Box<dyn Fn(&[f64; 2]) -> f64>
    } else {
        let vals: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Box::new(move |u: &[f64; 2]| {
            let cell = |v: f64| (((v + 1.0) * 2.0).floor().clamp(0.0, 3.0)) as usize;
            vals[cell(u[0]) * 4 + cell(u[1])]
        })
    }
}

impl Corpus {
    pub fn standard(grid: &Grid) -> Result<Self> {
        Self::with_seed(grid, DEFAULT_SEED)
    }

    pub fn with_seed(grid: &Grid, seed: u64) -> Result<Self> {
        let fr = Frame::new(grid);
        let n = grid.dim() as f64;
        let e1 = |a: f64| [a, 0.0];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut defs: Vec<(&str, MemberKind, Box<dyn Fn(&[f64; 2]) -> f64>)> = vec![
            ("const_one", MemberKind::Constant, Box::new(|_| 1.0)),
            ("const_neg", MemberKind::Constant, Box::new(|_| -2.5)),
            ("indicator_center", MemberKind::Indicator, Box::new(|u| f64::from(Frame::r(u, [0.0; 2]) < 0.5))),
            ("indicator_offset", MemberKind::Indicator, Box::new(move |u| f64::from(Frame::r(u, e1(0.3)) < 0.25))),
            (
                "indicator_annulus",
                MemberKind::Indicator,
                Box::new(|u| {
                    let r = Frame::r(u, [0.0; 2]);
                    f64::from(r > 0.3 && r < 0.6)
                }),
            ),
            ("tent_center", MemberKind::Tent, Box::new(|u| (1.0 - Frame::r(u, [0.0; 2]) / 0.5).max(0.0))),
            ("tent_wide", MemberKind::Tent, Box::new(move |u| (1.0 - Frame::r(u, e1(-0.2)) / 0.8).max(0.0))),
            ("step", MemberKind::Indicator, Box::new(|u| if u[0] < 0.0 { -1.0 } else { 1.0 })),
        ];
        let fr_ref = &fr;
        defs.push(("power_quarter", MemberKind::Power, Box::new(move |u| fr_ref.clamped(u, [0.0; 2]).powf(-n / 4.0))));
        defs.push(("power_eighth", MemberKind::Power, Box::new(move |u| fr_ref.clamped(u, e1(0.25)).powf(-n / 8.0))));
        defs.push(("log_center", MemberKind::Log, Box::new(move |u| -fr_ref.clamped(u, [0.0; 2]).ln())));
        defs.push(("log_offset", MemberKind::Log, Box::new(move |u| -fr_ref.clamped(u, e1(0.4)).ln())));
        defs.push((
            "log_bump",
            MemberKind::Log,
            Box::new(move |u| -fr_ref.clamped(u, e1(-0.3)).ln() * (1.0 - Frame::r(u, e1(-0.3))).max(0.0)),
        ));
        defs.push((
            "oscillation_low",
            MemberKind::Oscillation,
            Box::new(|u| (6.0 * u[0]).sin() * (1.0 - Frame::r(u, [0.0; 2]).powi(2)).max(0.0).powi(2)),
        ));
        defs.push((
            "oscillation_high",
            MemberKind::Oscillation,
            Box::new(|u| (15.0 * u[0] + 0.5).sin() * (1.0 - Frame::r(u, [0.0; 2]).powi(2)).max(0.0).powi(2)),
        ));
        defs.push(("gaussian", MemberKind::Smooth, Box::new(|u| (-8.0 * Frame::r(u, [0.0; 2]).powi(2)).exp())));
        defs.push(("abs", MemberKind::Smooth, Box::new(|u| Frame::r(u, [0.0; 2]))));
        defs.push(("ramp", MemberKind::Smooth, Box::new(|u| u[0])));
        defs.push(("cubic", MemberKind::Smooth, Box::new(|u| u[0].powi(3) - u[0])));
        for name in ["random_0", "random_1", "random_2"] {
            defs.push((name, MemberKind::Random, Box::new(random_piecewise(&mut rng, grid.dim()))));
        }
        let members = defs
            .into_iter()
            .map(|(name, kind, f)| {
                Ok(CorpusMember { name: name.to_string(), kind, function: GridFunction::from_fn(*grid, |x| f(&fr.u(x)))? })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { seed, members })
    }

    pub fn from_members(seed: u64, members: Vec<CorpusMember>) -> Self {
        Self { seed, members }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn members(&self) -> &[CorpusMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&CorpusMember> {
        self.members.iter().find(|m| m.name == name)
    }

    pub fn nonconstant(&self) -> impl Iterator<Item = &CorpusMember> {
        self.members.iter().filter(|m| m.kind != MemberKind::Constant)
    }

    /// Keeps only the members accepted by `keep`.
    pub fn filtered(&self, keep: impl Fn(&CorpusMember) -> bool) -> Self {
        Self { seed: self.seed, members: self.members.iter().filter(|m| keep(m)).cloned().collect() }
    }

    /// SHA-256 over member names and the bit patterns of their values.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.seed.to_le_bytes());
        for m in &self.members {
            h.update(m.name.as_bytes());
            h.update([0]);
            for v in m.function.values() {
                h.update(v.to_bits().to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }
}
