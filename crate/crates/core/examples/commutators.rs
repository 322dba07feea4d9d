//! Commutators with a logarithmic BMO symbol. A constant symbol gives zero.
//!
//! Run with `cargo run --release --example commutators`.

use intrinsic_lp::grid::{BallFamily, Grid, GridFunction};
use intrinsic_lp::norms::bmo_norm;
use intrinsic_lp::verify::SuiteParams;

fn main() -> intrinsic_lp::Result<()> {
    let grid = Grid::interval(-1.0, 1.0, 129)?;
    let op = SuiteParams::default().intrinsic(&grid)?;
    let f = GridFunction::from_fn(grid.clone(), |x| (-8.0 * x[0] * x[0]).exp())?;
    let b = GridFunction::from_fn(grid.clone(), |x| (x[0].abs() + 1e-2).ln())?;
    println!("symbol BMO norm {:.4}", bmo_norm(&b, &BallFamily::default_for(&grid))?);

    let cs = op.commutator_s(&b, &f)?;
    let cg = op.commutator_g(&b, &f)?;
    let cgs = op.commutator_gstar(&b, &f, 4.0)?;
    println!("max [b,S]   {:.6}", cs.max_abs());
    println!("max [b,g]   {:.6}", cg.max_abs());
    println!("max [b,g*]  {:.6}", cgs.max_abs());

    let flat = GridFunction::constant(grid.clone(), 3.0);
    println!("max [3,S]   {:.3e}", op.commutator_s(&flat, &f)?.max_abs());
    let shifted = b.add_constant(5.0);
    let diff = op.commutator_s(&shifted, &f)?.zip_with(&cs, |a, c| a - c)?;
    println!("symbol shift changes [b,S] by {:.3e}", diff.max_abs());
    Ok(())
}
