//! The fixed element pairing.
//!
//! Everything in this crate that needs to pack two naturals into one —
//! copy tags, composite universes, symbol ids — uses the Cantor pairing
//! below, so dumps are reproducible bit for bit:
//!
//! ```text
//! encode_pair(a, b) = (a + b)(a + b + 1)/2 + b
//! ```
//!
//! It is a bijection from pairs of naturals onto the naturals with
//! `encode_pair(0, 0) = 0`, strictly monotone in each argument.

/// Element code. All universes are sets of these.
pub type Code = u64;

/// Cantor pairing. Panics if the result exceeds the machine word; all
/// desk-scale inputs stay far below that.
pub fn encode_pair(a: Code, b: Code) -> Code {
    let a = a as u128;
    let b = b as u128;
    let s = a + b;
    let code = s * (s + 1) / 2 + b;
    Code::try_from(code).expect("pair code exceeds u64")
}

/// Inverse of [`encode_pair`].
pub fn decode_pair(code: Code) -> (Code, Code) {
    // Largest s with s(s+1)/2 <= code.
    let z = code as u128;
    let s = ((8 * z + 1).isqrt() - 1) / 2;
    let t = s * (s + 1) / 2;
    let b = z - t;
    let a = s - b;
    (a as Code, b as Code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn base_case() {
        assert_eq!(encode_pair(0, 0), 0);
    }

    #[test]
    fn one_zero_and_zero_one_are_distinct() {
        let p = encode_pair(1, 0);
        let q = encode_pair(0, 1);
        assert_ne!(p, q);
        assert_eq!(decode_pair(p), (1, 0));
        assert_eq!(decode_pair(q), (0, 1));
    }

    #[test]
    fn monotone_in_each_argument() {
        for a in 0..20u64 {
            for b in 0..20u64 {
                assert!(encode_pair(a + 1, b) > encode_pair(a, b));
                assert!(encode_pair(a, b + 1) > encode_pair(a, b));
            }
        }
    }

    #[test]
    fn surjective_on_prefix() {
        // Every code below 1000 decodes and re-encodes to itself.
        for code in 0..1000u64 {
            let (a, b) = decode_pair(code);
            assert_eq!(encode_pair(a, b), code);
        }
    }

    proptest! {
        #[test]
        fn round_trip(a in 0u64..1_000_000, b in 0u64..1_000_000) {
            let (a2, b2) = decode_pair(encode_pair(a, b));
            prop_assert_eq!((a2, b2), (a, b));
        }
    }
}
