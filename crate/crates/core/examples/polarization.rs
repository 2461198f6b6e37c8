//! Watching the synthesized channels split into near-perfect and
//! near-useless ones as the recursion deepens.
//!
//! ```bash
//! cargo run --release --example polarization
//! ```

use ecclab::polar::{bec_profile, construct_bec, polarization_fraction};

fn main() {
    let eps = 0.5;

    println!("exact Bhattacharyya recursion at eps = {eps}, n = 2:");
    let profile = bec_profile(eps, 2).unwrap();
    for (i, (z, c)) in profile.z().iter().zip(profile.capacities()).enumerate() {
        println!("  channel {:>2}: Z = {z:.4}  I = {c:.4}", i + 1);
    }

    println!("\nfraction of channels with I > 0.99 / I < 0.01:");
    for n in [4, 8, 12, 16, 20] {
        let (good, bad) = polarization_fraction(eps, n, 0.01).unwrap();
        let middle = 1.0 - good - bad;
        println!(
            "  N = 2^{n:<2}  good {good:.4}  bad {bad:.4}  undecided {middle:.4}"
        );
    }
    println!("both fractions approach I(W) = {} as N grows.", 1.0 - eps);

    // How fast the selected channels improve: worst Z inside a rate-0.3
    // information set, rescaled by N^(5/4).
    println!("\nworst selected Z at rate 0.3, normalized by N^(-5/4):");
    for n in [10u32, 12, 14, 16, 18, 20] {
        let block = 1usize << n;
        let profile = bec_profile(eps, n).unwrap();
        let code = construct_bec(eps, n, (0.3 * block as f64).ceil() as usize).unwrap();
        let worst = code
            .info_set()
            .iter()
            .map(|&i| profile.z()[i])
            .fold(0.0f64, f64::max);
        let normalized = worst * (block as f64).powf(1.25);
        println!("  n = {n:<2}  max Z = {worst:.3e}  x N^(5/4) = {normalized:.4}");
    }
}
