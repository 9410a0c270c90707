//! Encode payloads with a random GF(2) matrix and decode them incrementally.

use allcast::{DecoderState, Gf2Matrix, Gf2Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let n = 32;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let payloads: Vec<u64> = (0..n).map(|_| rng.random()).collect();

    let mut decoder = DecoderState::new(n);
    let mut received = 0;
    while !decoder.is_full_rank() {
        let row = Gf2Vector::from_bits(n, (0..n).map(|_| rng.random_bool(0.5)));
        let coded = row.select_xor(&payloads);
        received += 1;
        if decoder.insert_with_payload(row, coded).unwrap() {
            println!("row {received:>2}: rank {}", decoder.rank());
        }
    }
    let decoded = decoder.solve().unwrap();
    println!("{received} rows for {n} unknowns, decoded correctly: {}", decoded == payloads);

    let m = Gf2Matrix::from_str_rows(&["1100", "0110", "0011", "1001"]).unwrap();
    println!("rank of the 4-cycle incidence matrix: {} (transpose {})", m.rank(), m.transpose().rank());
    println!("kernel contains 1111: {}", m.annihilates(&Gf2Vector::ones(4)).unwrap());
}
