//! Text key files and binary ciphertext files.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bigmath::to_hex;
use crate::encrypt::{Ciphertext, EncryptedMessage};
use crate::error::{Error, Result};
use crate::keygen::{modulus_in_bit_range, PrivateKey, PublicKey};
use crate::sequence::{first_violation, ExtraSuperincreasing};

pub const PUBLIC_MAGIC: &str = "JUOAN2 PUBLIC KEY v1";
pub const PRIVATE_MAGIC: &str = "JUOAN2 PRIVATE KEY v1";
pub const CIPHERTEXT_MAGIC: &[u8; 4] = b"J2CT";
pub const CIPHERTEXT_VERSION: u8 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KeyFile {
    Public(PublicKey),
    Private(PrivateKey),
}

impl KeyFile {
    pub fn modulus(&self) -> &BigUint {
        match self {
            KeyFile::Public(k) => k.modulus(),
            KeyFile::Private(k) => k.modulus(),
        }
    }

    pub fn n_tilde(&self) -> usize {
        match self {
            KeyFile::Public(k) => k.n_tilde(),
            KeyFile::Private(k) => k.n_tilde(),
        }
    }

    /// Non-fatal findings, currently only an out-of-range `⌈lg M⌉`.
    pub fn warnings(&self) -> Vec<String> {
        if modulus_in_bit_range(self.modulus(), self.n_tilde()) {
            Vec::new()
        } else {
            vec![format!("modulus bit length outside the recommended range for n~ = {}", self.n_tilde())]
        }
    }
}

fn hex_list(values: &[BigUint]) -> String {
    values.iter().map(to_hex).collect::<Vec<_>>().join(",")
}

pub fn encode_public_key(pk: &PublicKey) -> String {
    format!(
        "{PUBLIC_MAGIC}\nn={}\nnp={}\nM={}\nC={}\n",
        pk.n_tilde(),
        pk.n_payload(),
        to_hex(pk.modulus()),
        hex_list(pk.weights())
    )
}

pub fn encode_private_key(sk: &PrivateKey) -> String {
    format!(
        "{PRIVATE_MAGIC}\nn={}\nnp={}\nM={}\nA={}\nNW={}\nDI={}\n",
        sk.n_tilde(),
        sk.n_payload(),
        to_hex(sk.modulus()),
        hex_list(sk.sequence().terms()),
        to_hex(sk.neg_w()),
        to_hex(sk.delta_inv())
    )
}

pub fn encode_key(key: &KeyFile) -> String {
    match key {
        KeyFile::Public(k) => encode_public_key(k),
        KeyFile::Private(k) => encode_private_key(k),
    }
}

fn decode_err(msg: impl Into<String>) -> Error {
    Error::Decode(msg.into())
}

fn parse_hex(field: &str, s: &str) -> Result<BigUint> {
    let canonical = !s.is_empty()
        && s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
        && (s == "0" || !s.starts_with('0'));
    if !canonical {
        return Err(decode_err(format!("field {field}: non-canonical hex {s:?}")));
    }
    BigUint::parse_bytes(s.as_bytes(), 16).ok_or_else(|| decode_err(format!("field {field}: bad hex")))
}

fn parse_dec(field: &str, s: &str) -> Result<usize> {
    let canonical = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if !canonical {
        return Err(decode_err(format!("field {field}: non-canonical decimal {s:?}")));
    }
    s.parse().map_err(|_| decode_err(format!("field {field}: value out of range")))
}

fn parse_hex_list(field: &str, s: &str, expected: usize) -> Result<Vec<BigUint>> {
    let values = s.split(',').map(|v| parse_hex(field, v)).collect::<Result<Vec<_>>>()?;
    if values.len() != expected {
        return Err(decode_err(format!("field {field}: expected {expected} values, got {}", values.len())));
    }
    Ok(values)
}

struct Lines<'a> {
    iter: std::slice::Iter<'a, &'a str>,
}

impl<'a> Lines<'a> {
    fn field(&mut self, name: &str) -> Result<&'a str> {
        let line = self.iter.next().ok_or_else(|| decode_err(format!("missing field {name}")))?;
        line.strip_prefix(name)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| decode_err(format!("expected field {name}, found {line:?}")))
    }
}

/// Strict inverse of [`encode_key`]. Key invariants are re-validated; an
/// unusual modulus size is logged and reported by [`KeyFile::warnings`].
pub fn decode_key(text: &str) -> Result<KeyFile> {
    let body = text.strip_suffix('\n').ok_or_else(|| decode_err("missing final newline"))?;
    if body.contains('\r') {
        return Err(decode_err("carriage return in key file"));
    }
    let lines: Vec<&str> = body.split('\n').collect();
    let (magic, rest) = lines.split_first().expect("split yields at least one item");
    let mut it = Lines { iter: rest.iter() };
    let n = parse_dec("n", it.field("n")?)?;
    if n == 0 {
        return Err(decode_err("field n: must be positive"));
    }
    let np = parse_dec("np", it.field("np")?)?;
    let m = parse_hex("M", it.field("M")?)?;
    let key = match *magic {
        PUBLIC_MAGIC => {
            let c = parse_hex_list("C", it.field("C")?, n)?;
            KeyFile::Public(PublicKey::new(c, m, np).map_err(|e| decode_err(e.to_string()))?)
        }
        PRIVATE_MAGIC => {
            let a = parse_hex_list("A", it.field("A")?, n)?;
            if let Some(index) = first_violation(&a) {
                return Err(decode_err(format!("A is not extra superincreasing at position {index}")));
            }
            let seq = ExtraSuperincreasing::new(a).map_err(|e| decode_err(e.to_string()))?;
            let nw = parse_hex("NW", it.field("NW")?)?;
            let di = parse_hex("DI", it.field("DI")?)?;
            KeyFile::Private(PrivateKey::new(seq, nw, di, m, np).map_err(|e| decode_err(e.to_string()))?)
        }
        _ => return Err(decode_err("unrecognized header")),
    };
    if it.iter.next().is_some() {
        return Err(decode_err("trailing data after key fields"));
    }
    for w in key.warnings() {
        log::warn!("{w}");
    }
    Ok(key)
}

pub fn decode_public_key(text: &str) -> Result<PublicKey> {
    match decode_key(text)? {
        KeyFile::Public(k) => Ok(k),
        KeyFile::Private(_) => Err(decode_err("expected a public key, found a private key")),
    }
}

pub fn decode_private_key(text: &str) -> Result<PrivateKey> {
    match decode_key(text)? {
        KeyFile::Private(k) => Ok(k),
        KeyFile::Public(_) => Err(decode_err("expected a private key, found a public key")),
    }
}

pub fn encode_ciphertext(msg: &EncryptedMessage) -> Result<Vec<u8>> {
    let too_big = |what: &str| Error::InvalidParameter(format!("{what} does not fit the ciphertext format"));
    let np = u32::try_from(msg.n_payload).map_err(|_| too_big("n_payload"))?;
    let count = u32::try_from(msg.block_count).map_err(|_| too_big("block count"))?;
    let mut out = Vec::with_capacity(13 + msg.blocks.len() * 8);
    out.extend_from_slice(CIPHERTEXT_MAGIC);
    out.push(CIPHERTEXT_VERSION);
    out.extend_from_slice(&np.to_be_bytes());
    out.extend_from_slice(&count.to_be_bytes());
    for ct in &msg.blocks {
        let bytes = if ct.value().is_zero() { Vec::new() } else { ct.value().to_bytes_be() };
        let len = u16::try_from(bytes.len()).map_err(|_| too_big("block value"))?;
        out.extend_from_slice(&len.to_be_bytes());
        out.extend_from_slice(&bytes);
    }
    Ok(out)
}

struct Reader<'a> {
    data: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.data.len() < n {
            return Err(decode_err(format!("truncated ciphertext: {what}")));
        }
        let (head, tail) = self.data.split_at(n);
        self.data = tail;
        Ok(head)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4, what)?.try_into().expect("four bytes")))
    }
}

/// Strict inverse of [`encode_ciphertext`]. Values are range-checked against
/// the modulus only at decryption time.
pub fn decode_ciphertext(data: &[u8]) -> Result<EncryptedMessage> {
    let mut r = Reader { data };
    if r.take(4, "magic")? != CIPHERTEXT_MAGIC {
        return Err(decode_err("bad ciphertext magic"));
    }
    let version = r.take(1, "version")?[0];
    if version != CIPHERTEXT_VERSION {
        return Err(decode_err(format!("unsupported ciphertext version {version}")));
    }
    let n_payload = r.u32("n_payload")? as usize;
    let count = r.u32("block count")? as usize;
    let mut blocks = Vec::with_capacity(count.min(r.data.len() / 2));
    for i in 0..count {
        let len = u16::from_be_bytes(r.take(2, "block length")?.try_into().expect("two bytes")) as usize;
        let bytes = r.take(len, "block value")?;
        if bytes.first() == Some(&0) {
            return Err(decode_err(format!("block {i}: leading zero byte")));
        }
        blocks.push(Ciphertext(BigUint::from_bytes_be(bytes)));
    }
    if !r.data.is_empty() {
        return Err(decode_err("trailing data after ciphertext blocks"));
    }
    Ok(EncryptedMessage::new(n_payload, blocks))
}
