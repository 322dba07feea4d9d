//! Morrey-type norms of a few model functions on [-1, 1].
//!
//! Run with `cargo run --release --example morrey_norms`.

use intrinsic_lp::grid::{BallFamily, Grid, GridFunction};
use intrinsic_lp::growth::{GrowthFunction, OuterFunction, Weight, YoungFunction};
use intrinsic_lp::norms::SpaceSpec;

fn main() -> intrinsic_lp::Result<()> {
    let grid = Grid::interval(-1.0, 1.0, 257)?;
    let balls = BallFamily::default_for(&grid);

    let phi = GrowthFunction::power(2.0)?;
    let spaces = [
        SpaceSpec::musielak_morrey(phi.clone(), OuterFunction::Power(0.25), balls.clone())?,
        SpaceSpec::classical_morrey(2.0, 0.5, balls.clone())?,
        SpaceSpec::weighted_orlicz_morrey(
            YoungFunction::sum_of_powers(vec![(1.0, 2.0), (1.0, 3.0)])?,
            Weight::unit(grid.clone()),
            OuterFunction::Power(0.25),
            balls.clone(),
        )?,
        SpaceSpec::campanato(phi.clone(), 2.0, balls.clone())?,
        SpaceSpec::bmo(balls.clone()),
    ];

    let functions = [
        ("one", GridFunction::constant(grid.clone(), 1.0)),
        ("tent", GridFunction::from_fn(grid.clone(), |x| (1.0 - 2.0 * x[0].abs()).max(0.0))?),
        ("log", GridFunction::from_fn(grid.clone(), |x| (x[0].abs() + 1e-3).ln())?),
        ("step", GridFunction::from_fn(grid.clone(), |x| if x[0] > 0.0 { 1.0 } else { 0.0 })?),
    ];

    print!("{:8}", "");
    for s in &spaces {
        print!("{:>24}", s.kind.name());
    }
    println!();
    for (name, f) in &functions {
        print!("{name:8}");
        for s in &spaces {
            print!("{:>24.6}", s.norm(f)?);
        }
        println!();
    }
    Ok(())
}
