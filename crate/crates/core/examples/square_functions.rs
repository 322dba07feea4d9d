//! Intrinsic square functions of a step function, with the aperture
//! growth of S and the domination of g* by apertures.
//!
//! Run with `cargo run --release --example square_functions`.

use intrinsic_lp::grid::{Grid, GridFunction};
use intrinsic_lp::verify::{aperture_slope, gstar_domination, SuiteParams};

fn main() -> intrinsic_lp::Result<()> {
    let grid = Grid::interval(-1.0, 1.0, 129)?;
    let op = SuiteParams::default().intrinsic(&grid)?;
    let f = GridFunction::from_fn(grid.clone(), |x| if x[0] > 0.0 { 1.0 } else { -1.0 })?;

    let s = op.s_alpha(&f)?;
    let s2 = op.s_alpha_beta(&f, 2.0)?;
    let g = op.g_alpha(&f)?;
    let gs = op.g_star(&f, 4.0)?;
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "x", "S", "S_2", "g", "g*_4");
    for i in (0..grid.len()).step_by(8) {
        let x = grid.coord(i)[0];
        println!(
            "{x:>8.3} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            s.values()[i],
            s2.values()[i],
            g.values()[i],
            gs.values()[i]
        );
    }

    println!("\naperture slope {:.4}", aperture_slope(&op, &f, 4)?);
    for lambda in [4.0, 6.0] {
        println!("g* domination ratio at lambda {lambda}: {:.4}", gstar_domination(&op, &f, lambda, 5)?);
    }
    Ok(())
}
