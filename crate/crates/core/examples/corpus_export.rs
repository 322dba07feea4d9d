//! Lists the test corpus with its hash and writes each member as CSV.
//!
//! Run with `cargo run --release --example corpus_export [out_dir]`.

use intrinsic_lp::grid::{BallFamily, Grid};
use intrinsic_lp::norms::bmo_norm;
use intrinsic_lp::verify::Corpus;
use std::path::PathBuf;

fn main() -> intrinsic_lp::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("ilp_corpus"));
    std::fs::create_dir_all(&out)?;
    let grid = Grid::interval(-1.0, 1.0, 257)?;
    let balls = BallFamily::default_for(&grid);
    let corpus = Corpus::standard(&grid)?;
    println!("{} members, sha256 {}", corpus.len(), corpus.hash());
    for m in corpus.members() {
        let bmo = bmo_norm(&m.function, &balls)?;
        println!("{:20} {:12} sup {:>9.4} bmo {:>9.4}", m.name, format!("{:?}", m.kind), m.function.max_abs(), bmo);
        m.function.save_csv(out.join(format!("{}.csv", m.name)))?;
    }
    Ok(())
}
