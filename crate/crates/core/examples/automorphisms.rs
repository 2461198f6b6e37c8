//! Code automorphisms: checking permutations, constructing affine
//! 2-transitivity witnesses, and searching exhaustively at small block
//! lengths.
//!
//! ```bash
//! cargo run --release --example automorphisms
//! ```

use ecclab::field::{rm_generator, RmCode};
use ecclab::gf2::GF2Matrix;
use ecclab::map_erasure::BinaryLinearCode;
use ecclab::polar::construct_bec;
use ecclab::transitivity::{
    is_automorphism, rm_affine_witness, two_transitive_search, CoordinatePermutation,
    SearchOutcome,
};

fn main() {
    let rm31 = BinaryLinearCode::new(
        rm_generator(&RmCode::new(2, 3, 1).unwrap()).unwrap(),
    )
    .unwrap();

    // Hand-picked permutation in cycle notation.
    let swap = CoordinatePermutation::from_cycle_notation("(2 3)(6 7)", 8).unwrap();
    println!(
        "(2 3)(6 7) preserves RM(2,3,1)? {}",
        is_automorphism(&rm31, &swap).unwrap()
    );

    // Affine witnesses pin any pair onto any pair.
    let witness = rm_affine_witness(3, (0, 1), (5, 2)).unwrap();
    println!(
        "affine witness sending points (1,2) -> (6,3): {} verified: {}",
        witness.to_cycle_notation(),
        is_automorphism(&rm31, &witness).unwrap()
    );

    // Exhaustive search agrees and is definitive at N <= 8.
    match two_transitive_search(&rm31, (0, 1), (5, 2), 0).unwrap() {
        SearchOutcome::Found(perm) => {
            println!("exhaustive search found: {}", perm.to_cycle_notation())
        }
        other => println!("exhaustive search: {other:?}"),
    }

    // A code with a distinguished coordinate has no witness at all.
    let rigid = BinaryLinearCode::new(GF2Matrix::from_rows(&[vec![1, 0, 0]]).unwrap()).unwrap();
    match two_transitive_search(&rigid, (0, 1), (1, 2), 0).unwrap() {
        SearchOutcome::NoneExhaustive => {
            println!("code {{000, 100}}: no automorphism moves coordinate 1 (proved exhaustively)")
        }
        other => println!("code {{000, 100}}: {other:?}"),
    }

    // Whether polar codes are 2-transitive is left open by the construction
    // itself: probe a (8, 4) code empirically.
    let polar = BinaryLinearCode::new(construct_bec(0.5, 3, 4).unwrap().generator_rows()).unwrap();
    println!("\npolar (8,4) code at eps = 0.5: probing pinned automorphisms");
    for (pins_from, pins_to) in [((0, 1), (1, 0)), ((0, 1), (2, 5)), ((3, 7), (7, 3))] {
        match two_transitive_search(&polar, pins_from, pins_to, 0).unwrap() {
            SearchOutcome::Found(perm) => println!(
                "  {pins_from:?} -> {pins_to:?}: witness {}",
                perm.to_cycle_notation()
            ),
            SearchOutcome::NoneExhaustive => {
                println!("  {pins_from:?} -> {pins_to:?}: none exists")
            }
            SearchOutcome::Inconclusive => unreachable!("N = 8 is exhaustive"),
        }
    }
}
