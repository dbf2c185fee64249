//! Fixtures shared by the benchmarks.

use juoan2_core::block::extend_block;
use juoan2_core::{encrypt_block, Ciphertext, KeyMaterial, NoiseVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// A key and `count` ciphertexts of random padded blocks under it.
pub fn ciphertexts(n_payload: usize, count: usize, seed: u64) -> (KeyMaterial, Vec<Ciphertext>) {
    let mut rng = rng(seed);
    let km = KeyMaterial::generate(n_payload, &mut rng).expect("valid width");
    let cts = (0..count)
        .map(|_| {
            let payload: Vec<bool> = (0..n_payload).map(|_| rng.gen()).collect();
            let block = extend_block(&payload, &mut rng).expect("valid width");
            let noise = NoiseVector::random(km.public().n_tilde(), &mut rng);
            encrypt_block(km.public(), &block, &noise).expect("nonzero block")
        })
        .collect();
    (km, cts)
}
