//! Reed-Solomon encoding and Berlekamp-Welch decoding over a small prime
//! field.
//!
//! ```bash
//! cargo run --release --example reed_solomon
//! ```

use ecclab::field::{
    berlekamp_welch, rs_encode, rs_min_distance_exhaustive, vandermonde, PrimeField, RsCode,
};

fn main() {
    let field = PrimeField::new(7).unwrap();
    let code = RsCode::with_consecutive_points(field, 7, 2).unwrap();
    println!(
        "RS over GF(7): n = {}, k = {}, exhaustive minimum distance = {}",
        code.block_length(),
        code.dimension(),
        rs_min_distance_exhaustive(&code).unwrap()
    );
    println!("Vandermonde generator: {:?}", vandermonde(&code));

    let message = [1u64, 1]; // f(X) = 1 + X
    let mut word = rs_encode(&code, &message).unwrap();
    println!("message {message:?} encodes to {word:?}");

    word[2] = (word[2] + 2) % 7;
    word[5] = (word[5] + 4) % 7;
    println!("corrupting two positions: {word:?}");
    let decoded = berlekamp_welch(&code, &word, 2).unwrap();
    println!("Berlekamp-Welch recovers coefficients {:?}", decoded.coefficients());

    // Three errors exceed the unique-decoding radius (n - k) / 2 = 2; the
    // decoder either fails or lands on a different codeword, and a budget
    // above the radius is rejected outright.
    word[0] = (word[0] + 1) % 7;
    match berlekamp_welch(&code, &word, 2) {
        Ok(poly) => println!("three errors: decoded to {:?} (a different codeword)", poly.coefficients()),
        Err(e) => println!("three errors: {e}"),
    }
    match berlekamp_welch(&code, &word, 3) {
        Err(e) => println!("budget 3 rejected: {e}"),
        Ok(_) => unreachable!("2e <= n - k is enforced"),
    }
}
