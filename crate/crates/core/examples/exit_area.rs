//! Exact EXIT functions: weight-count polynomials, the area theorem, and the
//! Margulis-Russo identity.
//!
//! ```bash
//! cargo run --release --example exit_area
//! ```

use ecclab::exit::{area, average_area, exit_exact, exit_exact_all, influence, russo_check};
use ecclab::field::{rm_generator, RmCode};
use ecclab::gf2::GF2Matrix;
use ecclab::map_erasure::BinaryLinearCode;

fn main() {
    let repetition =
        BinaryLinearCode::new(GF2Matrix::from_rows(&[vec![1, 1, 1]]).unwrap()).unwrap();
    let spc = BinaryLinearCode::new(
        GF2Matrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap(),
    )
    .unwrap();
    let rm31 = BinaryLinearCode::new(
        rm_generator(&RmCode::new(2, 3, 1).unwrap()).unwrap(),
    )
    .unwrap();

    for (name, code) in [("repetition [3,1]", &repetition), ("parity check [3,2]", &spc)] {
        let poly = exit_exact(code, 0).unwrap();
        println!(
            "{name}: weight counts {:?}, h(0.5) = {}, exact area = {} (rate {}/{})",
            poly.weight_counts(),
            poly.eval(0.5),
            area(&poly),
            code.dimension(),
            code.block_length()
        );
    }

    // For a 2-transitive code every bit has the same EXIT function, and each
    // one integrates to the rate.
    let polys = exit_exact_all(&rm31).unwrap();
    let all_equal = polys
        .iter()
        .all(|p| p.weight_counts() == polys[0].weight_counts());
    println!(
        "\nRM(2,3,1): all 8 EXIT functions equal? {all_equal}; average area = {}",
        average_area(&polys)
    );

    // Margulis-Russo: the slope of the EXIT curve is the total influence.
    for p in [0.25, 0.5, 0.75] {
        let report = russo_check(&rm31, 0, p).unwrap();
        let single = influence(&rm31, 0, 1, p).unwrap().influence;
        println!(
            "p = {p}: derivative-vs-influence residual {:.2e}, per-coordinate influence {single:.6}",
            report.residual
        );
    }
}
