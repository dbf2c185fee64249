//! JUOAN2 knapsack public-key encryption and a cryptanalysis workbench.
//!
//! The scheme hides an extra superincreasing sequence behind the transform
//! `C_i = (A_i + W·ℓ(i))·δ mod M` and encrypts by anomalous subset sums
//! (subset sums whose terms carry a running multiplicity). The
//! [`cryptanalysis`] module measures knapsack densities, runs exact LLL
//! reduction against attack lattices and brute-forces small instances.

pub mod bigmath;
pub mod block;
pub mod codec;
pub mod cryptanalysis;
pub mod decrypt;
pub mod encrypt;
pub mod error;
pub mod keygen;
pub mod sequence;
pub mod vectors;

pub use block::{compute_l, extend_block, BitBlock, NoiseVector};
pub use decrypt::{decrypt_block, decrypt_block_parallel, decrypt_message, greedy_decompose, Decryption, Policy};
pub use encrypt::{encrypt_block, encrypt_message, Ciphertext, EncryptedMessage};
pub use error::{Error, Result};
pub use keygen::{keygen, BlockLayout, KeyMaterial, LeverPermutation, PrivateKey, PublicKey};
pub use sequence::{check_property1, gen_extra_superincreasing, validate_extra_superincreasing, ExtraSuperincreasing};
