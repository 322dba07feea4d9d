//! How close finite kernel dictionaries get to the exact kernel LP.

use intrinsic_lp::grid::{Grid, GridFunction};
use intrinsic_lp::intrinsic::{kernel_lp_max, objective, refined_lower_bound, Dictionary, KernelGrid, KernelLp};
use intrinsic_lp::verify::Corpus;

fn fractions(dict: &Dictionary, lp: &KernelLp, kernel: &KernelGrid) -> Vec<f64> {
    let grid = Grid::interval(-1.0, 1.0, 257).unwrap();
    let corpus = Corpus::standard(&grid).unwrap();
    let mut out: Vec<f64> = corpus
        .nonconstant()
        .take(20)
        .map(|m| {
            let c = objective(&m.function, &[0.0, 0.0], 1.0, kernel, None).unwrap();
            let v = kernel_lp_max(&m.function, &[0.0, 0.0], 1.0, lp, None).unwrap();
            dict.best(&c) / v
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

#[test]
fn bump_dictionary_reaches_about_half_of_the_lp() {
    // A 0.9 fraction is out of reach for bump differences; the median sits near 0.56.
    let kernel = KernelGrid::new(0.5, 41, 1).unwrap();
    let lp = KernelLp::new(&kernel);
    let fr = fractions(&Dictionary::bumps(&kernel, 128, 0xd1c7).unwrap(), &lp, &kernel);
    let median = 0.5 * (fr[9] + fr[10]);
    assert!(fr.iter().all(|&x| x > 0.0 && x <= 1.0 + 1e-9), "{fr:?}");
    assert!((0.45..0.7).contains(&median), "median {median}");
}

#[test]
fn mixed_dictionary_beats_bumps() {
    let kernel = KernelGrid::new(0.5, 41, 1).unwrap();
    let lp = KernelLp::new(&kernel);
    let bumps = fractions(&Dictionary::bumps(&kernel, 128, 0xd1c7).unwrap(), &lp, &kernel);
    let mixed = fractions(&Dictionary::refined(&kernel, 128, 0xd1c7).unwrap(), &lp, &kernel);
    assert!(mixed[10] > bumps[10], "{} vs {}", mixed[10], bumps[10]);
}

#[test]
fn sign_function_lp_matches_refined_oracle() {
    let grid = Grid::interval(-1.0, 1.0, 257).unwrap();
    let f = GridFunction::from_fn(grid, |x| x[0].signum()).unwrap();
    let kernel = KernelGrid::new(1.0, 41, 1).unwrap();
    let lp = KernelLp::new(&kernel);
    let c = objective(&f, &[0.0, 0.0], 1.0, &kernel, None).unwrap();
    let v = kernel_lp_max(&f, &[0.0, 0.0], 1.0, &lp, None).unwrap();
    let pool = Dictionary::refined(&kernel, 2000, 0x5eed).unwrap();
    let oracle = refined_lower_bound(&pool, &c, 8000, 17);
    assert_eq!(oracle.examined, 10_000);
    assert!(v >= oracle.value - 1e-12 && v <= 1.05 * oracle.value, "lp {v} oracle {}", oracle.value);
}
