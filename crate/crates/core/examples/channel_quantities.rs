//! Channel functionals: Bhattacharyya parameter, symmetric capacity, and
//! symmetry witnesses.
//!
//! ```bash
//! cargo run --release --example channel_quantities
//! ```

use ecclab::channels::{
    bhattacharyya, find_symmetry_involution, make_channel, symmetric_capacity, ChannelKind,
    DiscreteMemorylessChannel,
};

fn describe(name: &str, ch: &DiscreteMemorylessChannel) {
    let z = bhattacharyya(ch);
    let i = symmetric_capacity(ch);
    let witness = match find_symmetry_involution(ch).unwrap() {
        Some(perm) => format!("{perm:?}"),
        None => "none".to_string(),
    };
    println!("{name:<12} Z = {z:.6}  I = {i:.6}  symmetry witness: {witness}");
    // The two quantities pin each other down:
    let lower = (2.0 / (1.0 + z)).log2();
    let upper = (1.0 - z * z).max(0.0).sqrt();
    println!("{:<12} capacity bounds: {lower:.6} <= I <= {upper:.6}", "");
}

fn main() {
    describe("noiseless", &make_channel(ChannelKind::Noiseless).unwrap());
    describe("BEC(0.3)", &make_channel(ChannelKind::Bec(0.3)).unwrap());
    describe("BSC(0.11)", &make_channel(ChannelKind::Bsc(0.11)).unwrap());
    describe("BSC(0.5)", &make_channel(ChannelKind::Bsc(0.5)).unwrap());

    // A Z-channel is not symmetric: no involution of the outputs swaps the
    // roles of the two inputs.
    let z_channel =
        DiscreteMemorylessChannel::from_table([vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
    describe("Z-channel", &z_channel);
}
