use std::io::Write;

use flate2::write::DeflateEncoder;
use flate2::Compression;

/// Fixed header charged on top of the compressed payload: the bit length
/// of the input as a 64-bit field.
pub const PROXY_HEADER_BITS: usize = 64;

/// Upper-bound stand-in for description length: DEFLATE (level 9) of the
/// bits packed MSB-first into bytes, in bits, plus [`PROXY_HEADER_BITS`].
///
/// Only ever an upper bound on how short a description can be; never use
/// it to certify incompressibility.
pub fn proxy_upper_bound(x: &[bool]) -> usize {
    let mut bytes = vec![0u8; x.len().div_ceil(8)];
    for (i, &b) in x.iter().enumerate() {
        if b {
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
    }
    let mut enc = DeflateEncoder::new(Vec::new(), Compression::new(9));
    enc.write_all(&bytes).expect("in-memory write");
    let compressed = enc.finish().expect("in-memory write");
    PROXY_HEADER_BITS + 8 * compressed.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_a_floor() {
        assert!(proxy_upper_bound(&[]) >= PROXY_HEADER_BITS);
        assert!(proxy_upper_bound(&[true]) >= PROXY_HEADER_BITS);
    }

    #[test]
    fn deterministic() {
        let x: Vec<bool> = (0..500).map(|i| (i * 7919) % 13 < 5).collect();
        assert_eq!(proxy_upper_bound(&x), proxy_upper_bound(&x.clone()));
    }

    #[test]
    fn long_zero_run_compresses() {
        let zeros = vec![false; 10_000];
        let v = proxy_upper_bound(&zeros);
        assert!(v < 10_000, "{v}");
        // recorded once: 1250 zero bytes deflate to a handful of bytes
        assert!(v <= PROXY_HEADER_BITS + 8 * 24, "{v}");
    }
}
