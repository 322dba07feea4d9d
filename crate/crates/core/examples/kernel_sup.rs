//! The kernel supremum by exact LP against a dictionary lower bound.
//!
//! Run with `cargo run --release --example kernel_sup`.

use intrinsic_lp::grid::{Grid, GridFunction};
use intrinsic_lp::intrinsic::{kernel_lp_max, objective, refined_lower_bound, Dictionary, KernelGrid, KernelLp};
use std::time::Instant;

fn main() -> intrinsic_lp::Result<()> {
    let grid = Grid::interval(-1.0, 1.0, 257)?;
    let f = GridFunction::from_fn(grid, |x| (3.0 * x[0]).sin() + if x[0] > 0.2 { 1.0 } else { 0.0 })?;
    let y = [0.1, 0.0];

    for alpha in [0.5, 1.0] {
        let kernel = KernelGrid::new(alpha, 41, 1)?;
        let lp = KernelLp::new(&kernel);
        let dict = Dictionary::refined(&kernel, 128, 0xd1c7)?;
        let pool = Dictionary::refined(&kernel, 2000, 7)?;
        println!("alpha = {alpha}");
        for t in [0.05, 0.2, 0.5] {
            let c = objective(&f, &y, t, &kernel, None)?;
            let start = Instant::now();
            let exact = kernel_lp_max(&f, &y, t, &lp, None)?;
            let lp_time = start.elapsed();
            let lower = dict.best(&c);
            let refined = refined_lower_bound(&pool, &c, 8000, 11).value;
            println!(
                "  t = {t:<5} lp {exact:.6} ({:.1} ms)  dictionary {lower:.6}  refined {refined:.6}",
                lp_time.as_secs_f64() * 1e3
            );
        }
    }
    Ok(())
}
