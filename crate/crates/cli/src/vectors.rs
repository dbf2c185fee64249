use std::fmt::Display;
use std::io::Write;

use anyhow::Result;
use num_bigint::BigUint;

use crate::args::VectorSet;
use juoan2_core::block::format_bits;
use juoan2_core::decrypt::{greedy_decompose, strip_delta};
use juoan2_core::vectors::appendix_a as va;
use juoan2_core::{compute_l, decrypt_block, encrypt_block, Policy};

struct Report<'a, W: Write> {
    out: &'a mut W,
    ok: bool,
}

impl<W: Write> Report<'_, W> {
    fn check<T: Display + PartialEq>(&mut self, label: &str, got: T, want: T) -> Result<()> {
        if got == want {
            writeln!(self.out, "{label} = {got} ok")?;
        } else {
            self.ok = false;
            writeln!(self.out, "{label} = {got} MISMATCH (expected {want})")?;
        }
        Ok(())
    }
}

fn list<T: Display>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Replays the worked example and reports whether every value matched.
pub fn run<W: Write>(set: VectorSet, out: &mut W) -> Result<bool> {
    match set {
        VectorSet::AppendixA => appendix_a(out),
    }
}

fn appendix_a<W: Write>(out: &mut W) -> Result<bool> {
    let km = va::key_material();
    let (pk, sk) = (km.public(), km.private());
    let mut r = Report { out, ok: true };
    writeln!(r.out, "A = {}", list(&va::A))?;
    writeln!(r.out, "M = {} W = {} delta = {} lever = {}", va::M, va::W, va::DELTA, list(&va::LEVER))?;
    r.check("C", list(pk.weights()), list(&va::C))?;
    r.check("-W", sk.neg_w().to_string(), va::NEG_W.to_string())?;
    r.check("delta^-1", sk.delta_inv().to_string(), va::DELTA_INV.to_string())?;

    let block = va::block();
    let noise = va::noise();
    r.check("L", list(&compute_l(block.bits())), list(&va::L))?;
    let ct = encrypt_block(pk, &block, &noise)?;
    r.check("S", ct.value().clone(), BigUint::from(va::CIPHERTEXT))?;
    let s0 = strip_delta(sk, &ct)?;
    r.check("S0", s0.clone(), BigUint::from(va::S0))?;

    // The encryptor knows which lever multiples it added: k = Σ κ_i·ℓ(i).
    let l = compute_l(block.bits());
    let k: u64 = (0..block.n_total())
        .filter(|&i| block.bits()[i] || noise.bits()[i])
        .map(|i| l[i] as u64 * km.lever().values()[i] as u64)
        .sum();
    r.check("k", k, va::K)?;
    let target = (&s0 + sk.neg_w() * k) % sk.modulus();
    r.check("target", target.clone(), BigUint::from(va::TARGET))?;
    let d = greedy_decompose(sk.sequence(), &target);
    let trace: Vec<String> = d.steps.iter().map(|s| format!("{}:{:?}:{}", s.position, s.branch, s.residual)).collect();
    let want: Vec<String> = va::TRACE.iter().map(|(p, b, res)| format!("{p}:{b:?}:{res}")).collect();
    r.check("trace", trace.join(" "), want.join(" "))?;
    r.check("greedy bits", format_bits(&d.bits), va::PLAINTEXT.to_string())?;

    let blind = decrypt_block(sk, &ct, Policy::FirstSuccess)?;
    r.check("decrypt k", blind.trace.k, va::K)?;
    r.check("decrypt bits", blind.block.to_string(), va::PLAINTEXT.to_string())?;
    let audit = decrypt_block(sk, &ct, Policy::Audit)?;
    let ks: Vec<u64> = audit.candidates.iter().map(|c| c.k).collect();
    writeln!(r.out, "audit candidates = {} k = [{}]", ks.len(), list(&ks))?;
    let ok = r.ok;
    writeln!(r.out, "{}", if ok { "all values match" } else { "some values do not match" })?;
    Ok(ok)
}
