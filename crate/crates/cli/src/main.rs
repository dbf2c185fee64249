mod args;
mod vectors;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use args::{AttackArgs, Cli, Command, DecryptArgs, DensityArgs, EncryptArgs, ExperimentKind, KeygenArgs, OracleArgs};
use juoan2_core::block::{format_bits, parse_bits, BitBlock, NoiseVector};
use juoan2_core::codec::{
    decode_ciphertext, decode_key, decode_private_key, decode_public_key, encode_ciphertext, encode_private_key,
    encode_public_key,
};
use juoan2_core::cryptanalysis::attack::assp_attack;
use juoan2_core::cryptanalysis::density::{assp_density_bits, ssp_density_bits};
use juoan2_core::cryptanalysis::experiment::{run_assp_experiment, run_ssp_experiment, success_rate, write_csv};
use juoan2_core::cryptanalysis::oracle::brute_force_assp;
use juoan2_core::decrypt::decrypt_message_with_jobs;
use juoan2_core::{
    decrypt_block, decrypt_block_parallel, encrypt_block, encrypt_message, BlockLayout, Ciphertext, Error, KeyMaterial,
    Policy, PrivateKey, PublicKey,
};

/// Bad input that clap cannot catch; reported with exit status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn rng_from_seed(seed: Option<&str>) -> Result<ChaCha20Rng> {
    let Some(seed) = seed else { return Ok(ChaCha20Rng::from_entropy()) };
    let digits = seed.strip_prefix("0x").unwrap_or(seed);
    let padded = if digits.len() % 2 == 1 { format!("0{digits}") } else { digits.to_string() };
    let bytes = hex::decode(&padded).map_err(|_| usage(format!("seed {seed:?} is not hex")))?;
    if bytes.is_empty() || bytes.len() > 32 {
        return Err(usage("seed must be 1 to 32 bytes of hex"));
    }
    let mut full = [0u8; 32];
    full[32 - bytes.len()..].copy_from_slice(&bytes);
    Ok(ChaCha20Rng::from_seed(full))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_public(path: &Path) -> Result<PublicKey> {
    decode_public_key(&read_text(path)?).with_context(|| format!("loading {}", path.display()))
}

fn load_private(path: &Path) -> Result<PrivateKey> {
    let text = read_text(path)?;
    let key = decode_key(&text).with_context(|| format!("loading {}", path.display()))?;
    for w in key.warnings() {
        eprintln!("warning: {w}");
    }
    decode_private_key(&text).with_context(|| format!("loading {}", path.display()))
}

fn with_ext(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn keygen(a: KeygenArgs) -> Result<()> {
    if a.n < 4 || a.n % 2 == 1 {
        return Err(usage(format!("-n must be even and at least 4, got {}", a.n)));
    }
    let mut rng = rng_from_seed(a.seed.as_deref())?;
    let km = KeyMaterial::generate(a.n, &mut rng)?;
    let (pub_path, prv_path) = (with_ext(&a.out, "pub"), with_ext(&a.out, "prv"));
    fs::write(&pub_path, encode_public_key(km.public())).with_context(|| format!("writing {}", pub_path.display()))?;
    fs::write(&prv_path, encode_private_key(km.private()))
        .with_context(|| format!("writing {}", prv_path.display()))?;
    println!(
        "wrote {} and {} (n~ = {}, lg M = {})",
        pub_path.display(),
        prv_path.display(),
        km.public().n_tilde(),
        km.public().modulus().bits()
    );
    Ok(())
}

fn parse_bit_arg(name: &str, s: &str) -> Result<Vec<bool>> {
    parse_bits(s).map_err(|_| usage(format!("--{name} must be a 0/1 string")))
}

fn encrypt(a: EncryptArgs) -> Result<()> {
    let pk = load_public(&a.public)?;
    let mut rng = rng_from_seed(a.seed.as_deref())?;
    if let Some(block) = &a.block {
        let bits = parse_bit_arg("block", block)?;
        let n_payload = match pk.layout() {
            BlockLayout::Raw => bits.len(),
            BlockLayout::Padded => pk.n_payload(),
        };
        if bits.len() != pk.n_tilde() {
            return Err(usage(format!("--block needs {} bits, got {}", pk.n_tilde(), bits.len())));
        }
        let block = BitBlock::new(bits, n_payload)?;
        let noise = match &a.noise {
            Some(s) => NoiseVector::new(parse_bit_arg("noise", s)?),
            None => NoiseVector::random(pk.n_tilde(), &mut rng),
        };
        let ct = encrypt_block(&pk, &block, &noise)?;
        println!("{}", ct.value());
        return Ok(());
    }
    let input = a.input.as_deref().expect("clap requires --in without --block");
    let out = a.out.as_deref().ok_or_else(|| usage("--out is required with --in"))?;
    let message = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let ct = encrypt_message(&pk, &message, &mut rng)?;
    fs::write(out, encode_ciphertext(&ct)?).with_context(|| format!("writing {}", out.display()))?;
    println!("{} blocks", ct.blocks.len());
    Ok(())
}

fn invalid_ciphertext(e: impl std::fmt::Display) -> anyhow::Error {
    anyhow!("invalid ciphertext: {e}")
}

fn decrypt(a: DecryptArgs) -> Result<()> {
    let sk = load_private(&a.private)?;
    let jobs = a.jobs as usize;
    if let Some(block) = &a.block {
        let value: BigUint = block.parse().map_err(|_| usage("--block must be a decimal integer"))?;
        let ct = Ciphertext(value);
        let d = if a.audit { decrypt_block(&sk, &ct, Policy::Audit) } else { decrypt_block_parallel(&sk, &ct, jobs) }
            .map_err(|e| match e {
            Error::InvalidCiphertext => anyhow!("invalid ciphertext"),
            e => invalid_ciphertext(e),
        })?;
        println!("{}", d.block);
        println!("k={} s0={} target={}", d.trace.k, d.trace.s0, d.trace.target);
        if a.audit {
            println!("candidates={}", d.candidates.len());
            for c in &d.candidates {
                println!("  k={} bits={}", c.k, c.block);
            }
        }
        return Ok(());
    }
    let input = a.input.as_deref().expect("clap requires --in without --block");
    let out = a.out.as_deref().ok_or_else(|| usage("--out is required with --in"))?;
    let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let msg = decode_ciphertext(&bytes).map_err(invalid_ciphertext)?;
    if a.audit {
        for (i, ct) in msg.blocks.iter().enumerate() {
            match decrypt_block(&sk, ct, Policy::Audit) {
                Ok(d) => {
                    let ks: Vec<String> = d.candidates.iter().map(|c| c.k.to_string()).collect();
                    println!("block {i}: candidates={} k=[{}]", d.candidates.len(), ks.join(","));
                }
                Err(e) => println!("block {i}: {e}"),
            }
        }
    }
    let plain = decrypt_message_with_jobs(&sk, &msg, jobs).map_err(invalid_ciphertext)?;
    fs::write(out, &plain).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn density(a: DensityArgs) -> Result<()> {
    let report = if a.assp { assp_density_bits(a.n, a.lg_m) } else { ssp_density_bits(a.n, a.lg_m) }
        .map_err(|e| usage(e.to_string()))?;
    println!("{report}");
    Ok(())
}

fn attack(a: AttackArgs) -> Result<()> {
    let mut rng = rng_from_seed(a.seed.as_deref())?;
    if let Some(kind) = a.experiment {
        let records = match kind {
            ExperimentKind::Ssp => run_ssp_experiment(a.n, a.density, a.instances, a.trials, &mut rng),
            ExperimentKind::Assp => run_assp_experiment(a.n, a.instances, a.trials, &mut rng),
        }
        .map_err(|e| usage(e.to_string()))?;
        match &a.csv {
            Some(path) => {
                let file = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
                write_csv(file, &records)?;
            }
            None => write_csv(io::stdout().lock(), &records)?,
        }
        eprintln!("success rate {:.3} over {} instances", success_rate(&records), records.len());
        return Ok(());
    }
    let pk = load_public(a.public.as_deref().expect("clap requires --pub"))?;
    let ct_path = a.ct.as_deref().ok_or_else(|| usage("--ct is required with --pub"))?;
    let bytes = fs::read(ct_path).with_context(|| format!("reading {}", ct_path.display()))?;
    let msg = decode_ciphertext(&bytes).map_err(invalid_ciphertext)?;
    let mut failures = 0;
    for (i, ct) in msg.blocks.iter().enumerate() {
        match assp_attack(&pk, ct.value(), a.trials, &mut rng)? {
            Some(rec) => println!("block {i}: recovered {}", format_bits(&rec.bits)),
            None => {
                failures += 1;
                println!("block {i}: failed");
            }
        }
    }
    if failures > 0 {
        bail!("attack failed on {failures} of {} blocks", msg.blocks.len());
    }
    Ok(())
}

fn oracle(a: OracleArgs) -> Result<()> {
    let pk = load_public(&a.public)?;
    let target: BigUint = a.target.parse().map_err(|_| usage("--S must be a decimal integer"))?;
    let patterns = brute_force_assp(&pk, &target)?;
    println!("patterns={}", patterns.len());
    for p in &patterns {
        let inc: Vec<String> = p.included.iter().map(usize::to_string).collect();
        println!("b={} noise={{{}}}", format_bits(&p.bits), inc.join(","));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Keygen(a) => keygen(a)?,
        Command::Encrypt(a) => encrypt(a)?,
        Command::Decrypt(a) => decrypt(a)?,
        Command::Density(a) => density(a)?,
        Command::Attack(a) => attack(a)?,
        Command::Oracle(a) => oracle(a)?,
        Command::Vectors(a) => return vectors::run(a.set, &mut io::stdout().lock()),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = io::stdout().flush();
            if let Some(u) = e.downcast_ref::<UsageError>() {
                eprintln!("error: {u}");
                eprintln!("run with --help for usage");
                return ExitCode::from(2);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
