//! Bit-MAP and block-MAP decoding over the erasure channel: filled-in bits,
//! residual erasures, and the bad-pattern sets behind them.
//!
//! ```bash
//! cargo run --release --example erasure_map_decoding
//! ```

use ecclab::gf2::GF2Matrix;
use ecclab::map_erasure::{
    bit_map_decode, block_map_decode, omega_membership, BinaryLinearCode, BlockMapResult,
    ErasurePattern, ReceivedWord, RxSymbol,
};

fn show(symbols: &[RxSymbol]) -> String {
    symbols
        .iter()
        .map(|s| match s {
            RxSymbol::Zero => '0',
            RxSymbol::One => '1',
            RxSymbol::Erased => '*',
        })
        .collect()
}

fn main() {
    // Single parity check on three bits: x3 = x1 + x2.
    let spc = BinaryLinearCode::new(
        GF2Matrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap(),
    )
    .unwrap();

    let one_erasure = ReceivedWord::new(vec![RxSymbol::One, RxSymbol::Zero, RxSymbol::Erased]);
    println!(
        "SPC received {} -> bit-MAP {}",
        show(one_erasure.symbols()),
        show(&bit_map_decode(&spc, &one_erasure).unwrap())
    );

    let two_erasures = ReceivedWord::new(vec![RxSymbol::One, RxSymbol::Erased, RxSymbol::Erased]);
    println!(
        "SPC received {} -> bit-MAP {} (two codewords remain consistent)",
        show(two_erasures.symbols()),
        show(&bit_map_decode(&spc, &two_erasures).unwrap())
    );
    match block_map_decode(&spc, &two_erasures).unwrap() {
        BlockMapResult::Codeword(w) => println!("block-MAP: {w:?}"),
        BlockMapResult::Erased => println!("block-MAP: erasure"),
    }

    // The bad-pattern set of bit 1 (0-based 0): erasing which other
    // coordinates destroys indirect recovery?
    println!("\nbad patterns for bit 1 of the SPC code:");
    for pattern in [vec![], vec![1], vec![2], vec![1, 2]] {
        let member = omega_membership(&spc, 0, &ErasurePattern::new(pattern.clone())).unwrap();
        println!("  erased {{{pattern:?}}} -> unrecoverable: {member}");
    }

    // Repetition code: any single surviving symbol pins the codeword.
    let repetition =
        BinaryLinearCode::new(GF2Matrix::from_rows(&[vec![1, 1, 1]]).unwrap()).unwrap();
    let received = ReceivedWord::new(vec![RxSymbol::Erased, RxSymbol::Erased, RxSymbol::One]);
    match block_map_decode(&repetition, &received).unwrap() {
        BlockMapResult::Codeword(w) => {
            println!("\nrepetition received {} -> {w:?}", show(received.symbols()))
        }
        BlockMapResult::Erased => unreachable!("one symbol survives"),
    }
}
