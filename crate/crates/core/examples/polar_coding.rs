//! A complete polar-code round trip: construction, encoding, transmission
//! over a simulated erasure channel, and successive-cancellation decoding.
//!
//! ```bash
//! cargo run --release --example polar_coding
//! ```

use ecclab::cli::seed_stream;
use ecclab::gf2::BitVector;
use ecclab::polar::{
    bec_profile, construct_bec, encode, sc_decode_bec, union_bound, BecSymbol,
};

fn main() {
    let eps = 0.4;
    let n = 8;
    let block = 1usize << n;
    let k = block / 2;

    let code = construct_bec(eps, n, k).unwrap();
    let profile = bec_profile(eps, n).unwrap();
    println!(
        "constructed ({block}, {k}) code at eps = {eps}; union bound on block error: {:.5}",
        union_bound(&profile, code.info_set())
    );

    let mut rng = seed_stream(0xC0DE5, 0);
    let trials = 20_000;
    let mut block_errors = 0u64;
    let mut info_bit_errors = 0u64;
    for _ in 0..trials {
        let info = BitVector::from_bits((0..k).map(|_| rng.next_bit() as u8));
        let u = code.assemble_input(&info).unwrap();
        let x = encode(n, &u).unwrap();
        let received: Vec<BecSymbol> = (0..block)
            .map(|j| {
                if rng.next_f64() < eps {
                    BecSymbol::Erasure
                } else {
                    BecSymbol::from_bit(x.get(j))
                }
            })
            .collect();
        let decoded = sc_decode_bec(&code, &received).unwrap();
        let wrong = code
            .info_set()
            .iter()
            .filter(|&&i| decoded.get(i) != u.get(i))
            .count() as u64;
        info_bit_errors += wrong;
        block_errors += u64::from(wrong > 0);
    }
    println!(
        "simulated {trials} transmissions: block error rate {:.5}, info-bit error rate {:.6}",
        block_errors as f64 / trials as f64,
        info_bit_errors as f64 / (trials as f64 * k as f64),
    );

    // The same channel at rate above capacity is hopeless.
    let greedy = construct_bec(eps, n, (0.8 * block as f64) as usize).unwrap();
    println!(
        "at rate 0.8 > capacity {:.1}, the union bound is already {:.3}",
        1.0 - eps,
        union_bound(&profile, greedy.info_set())
    );
}
