//! The sharp-threshold effect: EXIT transitions narrow as the block length
//! grows, and for rate-1/2 Reed-Muller codes the transition sits at
//! p = 1 - R = 0.5.
//!
//! ```bash
//! cargo run --release --example sharp_threshold
//! ```

use ecclab::exit::{
    exit_exact_all, exit_mc, sharp_threshold_inequality_check, threshold_width_curve,
    threshold_width_exact, ExitTarget, SharpThresholdReport,
};
use ecclab::field::{rm_generator, RmCode};
use ecclab::map_erasure::BinaryLinearCode;

fn rm(m: u32, r: u32) -> BinaryLinearCode {
    BinaryLinearCode::new(rm_generator(&RmCode::new(2, m, r).unwrap()).unwrap()).unwrap()
}

fn main() {
    // Exact transition of the [8,4] code.
    let small = rm(3, 1);
    let polys = exit_exact_all(&small).unwrap();
    let exact = threshold_width_exact(&polys, 0.1).unwrap();
    println!(
        "RM(2,3,1) exact: p_0.1 = {:.4}, p_0.9 = {:.4}, width = {:.4}",
        exact.p_low, exact.p_high, exact.width
    );

    // Monte Carlo transition of the [32,16] code.
    let large = rm(5, 2);
    let grid: Vec<f64> = (1..=19).map(|t| 0.05 * t as f64).collect();
    let curve = exit_mc(&large, ExitTarget::Average, &grid, 20_000, 0xC0DE5).unwrap();
    let mc = threshold_width_curve(&curve, 0.1).unwrap();
    let crossing = threshold_width_curve(&curve, 0.5).unwrap();
    println!(
        "RM(2,5,2) Monte Carlo: p_0.1 = {:.4}, p_0.9 = {:.4}, width = {:.4}",
        mc.p_low, mc.p_high, mc.width
    );
    println!(
        "half-level crossing at p = {:.4} (capacity-achieving codes put it at 1 - R = 0.5)",
        crossing.p_low
    );
    println!(
        "width shrinks with block length: {:.4} -> {:.4}",
        exact.width, mc.width
    );

    // The inequality driving the effect needs equal influences; a dictator
    // pattern set fails the hypothesis.
    let grid: Vec<f64> = (1..=19).map(|t| 0.05 * t as f64).collect();
    match sharp_threshold_inequality_check(&small, 0, &grid).unwrap() {
        SharpThresholdReport::Feasible { constant } => {
            println!("RM(2,3,1): h' >= C log2(N) h (1-h) holds with C = {constant:.4}")
        }
        other => println!("RM(2,3,1): {other:?}"),
    }
    let dictator = BinaryLinearCode::new(
        ecclab::gf2::GF2Matrix::from_rows(&[vec![1, 1, 0]]).unwrap(),
    )
    .unwrap();
    match sharp_threshold_inequality_check(&dictator, 0, &grid).unwrap() {
        SharpThresholdReport::NotApplicable { coordinates } => println!(
            "dictator-style code: influences of coordinates {:?} differ, theorem not applicable",
            coordinates
        ),
        other => println!("dictator-style code: {other:?}"),
    }
}
