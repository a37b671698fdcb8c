//! Build R^Λ_n, list its ψ-basis and check the graded ranks.
//!
//! `cargo run --release --example rank -- 3 0,1 3`

use std::sync::Arc;

use klr_core::affine_algebra::Klr;
use klr_core::cyclotomic::CyclotomicAlgebra;
use klr_core::quiver::{Multicharge, QuiverData};

fn main() -> klr_core::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let e: u32 = args.first().map_or(Ok(3), |s| s.parse()).expect("e");
    let n: usize = args.get(2).map_or(Ok(3), |s| s.parse()).expect("n");
    let q = QuiverData::new(e)?;
    let charge = Multicharge::parse(&q, args.get(1).map_or("0", String::as_str))?;
    let alg = CyclotomicAlgebra::new(Arc::new(Klr::new(q)), charge, n)?;
    for b in &alg.basis()?.elements {
        println!("{b}  degree {}", b.degree);
    }
    let report = alg.verify_rank()?;
    println!("rank {} of expected {}: {}", report.rank_total, report.expected, if report.ok { "ok" } else { "MISMATCH" });
    Ok(())
}
