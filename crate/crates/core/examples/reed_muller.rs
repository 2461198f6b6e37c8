//! Reed-Muller codes: evaluation-order conventions, generator matrices, and
//! exhaustive distance checks.
//!
//! ```bash
//! cargo run --release --example reed_muller
//! ```

use ecclab::field::{rm_encode, rm_generator, rm_monomials, RmCode};
use ecclab::gf2::format_matrix_text;
use ecclab::map_erasure::BinaryLinearCode;

fn main() {
    let code = RmCode::new(2, 3, 1).unwrap();
    println!(
        "RM(2, m=3, r=1): block length {}, monomial basis {:?}",
        code.block_length(),
        rm_monomials(3, 1)
    );

    // f = X1 + X3 evaluated over all of F_2^3 in counting order.
    let values = rm_encode(
        &code,
        &[(vec![1, 0, 0], 1), (vec![0, 0, 1], 1)],
    )
    .unwrap();
    println!("evaluations of X1 + X3: {values:?}");

    let generator = rm_generator(&code).unwrap();
    println!("generator matrix:\n{}", format_matrix_text(&generator));

    let linear = BinaryLinearCode::new(generator).unwrap();
    println!(
        "dimension {} (= 1 + 3), exhaustive minimum distance {}",
        linear.dimension(),
        linear.min_distance_exhaustive().unwrap()
    );

    // Each order sits inside the next: RM(2,3,r) row spaces are nested.
    for r in 0..3u32 {
        let low = rm_generator(&RmCode::new(2, 3, r).unwrap()).unwrap();
        let high = rm_generator(&RmCode::new(2, 3, r + 1).unwrap()).unwrap();
        let nested = high.stack(&low).unwrap().rank() == high.rank();
        println!("RM(2,3,{r}) inside RM(2,3,{})? {nested}", r + 1);
    }
}
