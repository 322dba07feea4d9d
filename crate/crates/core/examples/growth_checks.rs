//! Structural checks on growth functions, weights and outer functions.
//!
//! Run with `cargo run --release --example growth_checks`.

use intrinsic_lp::grid::{BallFamily, Grid, GridFunction};
use intrinsic_lp::growth::{
    log_space, muckenhoupt_constant, phi_decreasing_check, phi_dini_check, reverse_holder_constant, GrowthFunction,
    OuterFunction, TypeBound, TypeSample, Weight, YoungFunction,
};

fn main() -> intrinsic_lp::Result<()> {
    let grid = Grid::interval(-1.0, 1.0, 257)?;
    let balls = BallFamily::default_for(&grid);
    let sample = TypeSample::for_grid(&grid, 32, 4);

    let young = YoungFunction::sum_of_powers(vec![(1.0, 2.0), (1.0, 3.0)])?;
    let phi = GrowthFunction::orlicz(young.clone())?;
    println!("t^2 + t^3 lower type constant {:.4}", phi.type_constant(TypeBound::Lower, &sample)?);
    println!("t^2 + t^3 upper type constant {:.4}", phi.type_constant(TypeBound::Upper, &sample)?);

    println!("\n{:>10} {:>14} {:>10}", "r", "inv * conj inv", "2r");
    for r in log_space(1e-3, 1e3, 7) {
        let a = young.inverse(r);
        let b = young.complementary_inverse(r)?;
        println!("{r:>10.3e} {:>14.5e} {:>10.3e}", a * b, 2.0 * r);
    }

    let ts = log_space(1e-2, 1e2, 9);
    for (name, s) in [("|x|^0.5", 0.5), ("|x|^-0.5", -0.5), ("|x|^-1", -1.0)] {
        let w = Weight::new(GridFunction::from_fn(grid.clone(), |x| (x[0].abs() + 1e-3).powf(s))?)?;
        let wphi = GrowthFunction::weighted_power(w.clone(), 2.0)?;
        let aq = muckenhoupt_constant(&wphi, 2.0, &grid, &balls, &ts)?;
        let rh = reverse_holder_constant(&w, 2.0, &balls)?;
        println!("{name:10} A_2 {aq:>12.4} reverse Holder {rh:>10.4}");
    }

    let r_list = log_space(1e-4, 1e4, 33);
    for (name, outer) in [
        ("r^0.25", OuterFunction::Power(0.25)),
        ("r^-0.5", OuterFunction::Power(-0.5)),
        ("log(e+r)", OuterFunction::LogE),
    ] {
        let dini = phi_dini_check(&outer, &r_list);
        let dec = phi_decreasing_check(&outer, &r_list);
        println!(
            "{name:10} dini {:>10.4} decay {:>10.4} monotone {:.4}",
            dini.constant, dec.integral.constant, dec.monotone
        );
    }
    Ok(())
}
