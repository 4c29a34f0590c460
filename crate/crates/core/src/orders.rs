//! Computable copies of `(omega, <)` that encode a set.
//!
//! Fix a total injective computable enumeration `x_0, x_1, ...` of an
//! infinite set `X`. The order `<_X` places the evens in their usual order
//! and slots the odd `2n+1` into the gap right after `2 x_n`:
//!
//! ```text
//! 2n <_X 2m  (n < m),    2 x_n  <_X  2n+1  <_X  2 x_n + 2.
//! ```
//!
//! The generators determine a unique total order:
//! evens compare as their halves; `2n+1 <_X 2m` iff `x_n < m`;
//! `2m <_X 2n+1` iff `m <= x_n`; odds compare as their `x` values.
//! The result has order type omega, and the unique isomorphism from
//! `(omega, <)` carries exactly the information in `X`: it can be computed
//! from a membership oracle for `X`, and membership in `X` can be read off
//! the isomorphism by checking whether the gap `(2k, 2k+2)` is filled.

use std::sync::Arc;

use crate::error::StructureError;
use crate::fuel::Fuel;
use crate::iso::LazyIso;
use crate::oracle::{IsoOracle, SetOracle};
use crate::pairing::Code;
use crate::presentation::{Presentation, Universe};
use crate::signature::{Signature, SymbolFamily, SymbolId};

/// A fixed total computable injective enumeration `n -> x_n`.
#[derive(Clone)]
pub struct CeEnumeration {
    at: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
}

impl CeEnumeration {
    pub fn new(at: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        CeEnumeration { at: Arc::new(at) }
    }

    pub fn at(&self, n: u64) -> u64 {
        (self.at)(n)
    }

    /// Check injectivity on the first `k` indices.
    pub fn check_injective_prefix(&self, k: u64) -> Result<(), StructureError> {
        let mut seen = std::collections::BTreeMap::new();
        for n in 0..k {
            let v = self.at(n);
            if let Some(prev) = seen.insert(v, n) {
                return Err(StructureError::invariant(format!(
                    "enumeration repeats value {v} at indices {prev} and {n}"
                )));
            }
        }
        Ok(())
    }
}

/// The total order `<_X` on codes, from the generator closure above.
pub fn less_x(e: &CeEnumeration, a: Code, b: Code) -> bool {
    if a == b {
        return false;
    }
    match (a % 2 == 0, b % 2 == 0) {
        (true, true) => a < b,
        (false, false) => e.at((a - 1) / 2) < e.at((b - 1) / 2),
        // odd 2n+1 below even 2m iff x_n < m
        (false, true) => e.at((a - 1) / 2) < b / 2,
        // even 2m below odd 2n+1 iff m <= x_n
        (true, false) => a / 2 <= e.at((b - 1) / 2),
    }
}

pub fn lt_sym() -> SymbolId {
    SymbolId::new(0, 0)
}

/// `(omega, <_X)` as a presentation.
pub fn order_x(e: &CeEnumeration) -> Presentation {
    let e = e.clone();
    let sig = Signature::new(vec![SymbolFamily::finite("lt", 2, 1, true)]);
    Presentation::new(sig, Universe::all(), move |sym, t| {
        sym == lt_sym() && less_x(&e, t[0], t[1])
    })
}

/// Number of members of `X` strictly below `bound`, by oracle queries
/// `0, 1, ..., bound-1`.
fn count_below(oracle: &SetOracle, bound: u64) -> u64 {
    (0..bound).filter(|&k| oracle.query(k)).count() as u64
}

/// Position of the even `2m` in the `<_X` order.
fn rank_of_even(oracle: &SetOracle, m: u64) -> u64 {
    m + count_below(oracle, m)
}

/// Position of the odd sitting in the gap after `2v` (requires `v` in `X`).
fn rank_of_gap(oracle: &SetOracle, v: u64) -> u64 {
    v + count_below(oracle, v) + 1
}

/// The unique isomorphism `(omega, <) -> (omega, <_X)`, computed with
/// membership queries to the `X`-oracle only (plus the computable
/// enumeration itself). Evaluating at `n` queries membership only for
/// naturals `<= n`.
pub fn unique_iso_to_order_x(oracle: &SetOracle, e: &CeEnumeration) -> LazyIso {
    let fwd_oracle = oracle.clone();
    let fwd_enum = e.clone();
    let bwd_oracle = oracle.clone();
    let bwd_enum = e.clone();
    LazyIso::new(
        move |n, fuel| {
            // The element of rank n is an even 2m with m + |X below m| = n,
            // or the odd filling the gap after some 2v with v in X.
            for m in 0..=n {
                if rank_of_even(&fwd_oracle, m) == n {
                    return Ok(2 * m);
                }
            }
            for v in 0..n {
                if fwd_oracle.query(v) && rank_of_gap(&fwd_oracle, v) == n {
                    // v is in X, so the enumeration search below halts.
                    let mut j = 0;
                    loop {
                        fuel.spend(1, "inverting the enumeration")?;
                        if fwd_enum.at(j) == v {
                            return Ok(2 * j + 1);
                        }
                        j += 1;
                    }
                }
            }
            Err(StructureError::invariant(format!(
                "no element of rank {n}; oracle and enumeration disagree"
            )))
        },
        move |y, _fuel| {
            // The inverse is the rank function.
            if y % 2 == 0 {
                Ok(rank_of_even(&bwd_oracle, y / 2))
            } else {
                let v = bwd_enum.at((y - 1) / 2);
                Ok(rank_of_gap(&bwd_oracle, v))
            }
        },
    )
}

/// Decide `k in X` using the isomorphism oracle alone: the gap `(2k, 2k+2)`
/// contains an element exactly when the ranks of its ends differ by two.
pub fn decode_x_from_iso(
    f_oracle: &IsoOracle,
    k: u64,
    fuel: &mut Fuel,
) -> Result<bool, StructureError> {
    let low = f_oracle.inverse(2 * k, fuel)?;
    let high = f_oracle.inverse(2 * k + 2, fuel)?;
    Ok(high == low + 2)
}

/// A named infinite set with both faces the tests need: the fixed
/// enumeration (defines `<_X`) and a decidable membership stand-in (plays
/// the oracle).
#[derive(Clone)]
pub struct OrderSet {
    pub name: String,
    pub enumeration: CeEnumeration,
    membership: Arc<dyn Fn(u64) -> bool + Send + Sync>,
}

impl OrderSet {
    pub fn new(
        name: &str,
        enumeration: CeEnumeration,
        membership: impl Fn(u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        OrderSet {
            name: name.to_string(),
            enumeration,
            membership: Arc::new(membership),
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        (self.membership)(v)
    }

    /// A fresh logged oracle session for this set.
    pub fn oracle(&self) -> SetOracle {
        let membership = self.membership.clone();
        SetOracle::new(move |v| membership(v))
    }

    pub fn order(&self) -> Presentation {
        order_x(&self.enumeration)
    }
}

fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= v {
        if v % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn nth_prime(n: u64) -> u64 {
    let mut count = 0;
    let mut v = 1;
    loop {
        v += 1;
        if is_prime(v) {
            if count == n {
                return v;
            }
            count += 1;
        }
    }
}

/// The built-in sets: `evens`, `squares`, `primes`.
pub fn builtin_set(name: &str) -> Option<OrderSet> {
    match name {
        "evens" => Some(OrderSet::new(
            "evens",
            CeEnumeration::new(|n| 2 * n),
            |v| v % 2 == 0,
        )),
        "squares" => Some(OrderSet::new(
            "squares",
            CeEnumeration::new(|n| n * n),
            |v| {
                let r = v.isqrt();
                r * r == v
            },
        )),
        "primes" => Some(OrderSet::new(
            "primes",
            CeEnumeration::new(nth_prime),
            is_prime,
        )),
        _ => None,
    }
}

/// The first `n` codes in `<_X` order, by selection sort over a large
/// enough window. Small-n utility for dumps and tests.
pub fn order_prefix(e: &CeEnumeration, n: u64) -> Vec<Code> {
    // Every element of rank < n lies below 2n + 2 among the evens, and odds
    // of small rank have small x-values; scanning codes below 4n + 4 covers
    // both comfortably at desk scale.
    let window: Vec<Code> = (0..4 * n + 4).collect();
    let mut sorted = window;
    sorted.sort_by(|&a, &b| {
        if less_x(e, a, b) {
            std::cmp::Ordering::Less
        } else if a == b {
            std::cmp::Ordering::Equal
        } else {
            std::cmp::Ordering::Greater
        }
    });
    sorted.truncate(n as usize);
    sorted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::QueryRecord;

    #[test]
    fn evens_generators_hold() {
        let e = CeEnumeration::new(|n| 2 * n);
        // 2n <_X 2m for n < m, independent of the enumeration.
        assert!(less_x(&e, 6, 10));
        assert!(!less_x(&e, 10, 6));
        // 2 x_n <_X 2n+1 <_X 2 x_n + 2.
        for n in 0..20u64 {
            let xn = e.at(n);
            assert!(less_x(&e, 2 * xn, 2 * n + 1));
            assert!(less_x(&e, 2 * n + 1, 2 * xn + 2));
        }
    }

    #[test]
    fn first_element_with_large_x0() {
        // x_0 = 7: the odd 1 sits between 14 and 16.
        let e = CeEnumeration::new(|n| n + 7);
        assert!(less_x(&e, 14, 1));
        assert!(less_x(&e, 1, 16));
        assert!(!less_x(&e, 16, 1));
    }

    #[test]
    fn strict_total_order_exhaustive() {
        for name in ["evens", "squares", "primes"] {
            let set = builtin_set(name).unwrap();
            let e = &set.enumeration;
            let n = 50u64;
            for a in 0..n {
                assert!(!less_x(e, a, a));
                for b in 0..n {
                    if a != b {
                        assert!(less_x(e, a, b) != less_x(e, b, a), "{name}: {a} {b}");
                    }
                    for c in 0..n {
                        if less_x(e, a, b) && less_x(e, b, c) {
                            assert!(less_x(e, a, c), "{name}: {a} {b} {c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn order_type_omega_at_desk_scale() {
        // Every element of 0..N has finitely many predecessors within a
        // window of 0..2N+2.
        let set = builtin_set("squares").unwrap();
        let e = &set.enumeration;
        let n = 25u64;
        for a in 0..n {
            let preds = (0..2 * n + 2).filter(|&b| less_x(e, b, a)).count();
            assert!(preds < (2 * n + 2) as usize);
        }
    }

    #[test]
    fn evens_prefix_matches_expected() {
        let e = CeEnumeration::new(|n| 2 * n);
        assert_eq!(
            order_prefix(&e, 11),
            vec![0, 1, 2, 4, 3, 6, 8, 5, 10, 12, 7]
        );
    }

    #[test]
    fn unique_iso_prefix_for_evens() {
        let set = builtin_set("evens").unwrap();
        let oracle = set.oracle();
        let iso = unique_iso_to_order_x(&oracle, &set.enumeration);
        let mut fuel = Fuel::default();
        let images: Vec<Code> = (0..6)
            .map(|n| iso.apply(n, &mut fuel).unwrap())
            .collect();
        assert_eq!(images, vec![0, 1, 2, 4, 3, 6]);
    }

    #[test]
    fn iso_is_strictly_increasing() {
        for name in ["evens", "squares", "primes"] {
            let set = builtin_set(name).unwrap();
            let oracle = set.oracle();
            let iso = unique_iso_to_order_x(&oracle, &set.enumeration);
            let mut fuel = Fuel::default();
            let mut prev = iso.apply(0, &mut fuel).unwrap();
            for n in 1..50u64 {
                let next = iso.apply(n, &mut fuel).unwrap();
                assert!(
                    less_x(&set.enumeration, prev, next),
                    "{name}: f({}) !<_X f({n})",
                    n - 1
                );
                prev = next;
            }
        }
    }

    #[test]
    fn iso_round_trips_with_inverse() {
        let set = builtin_set("primes").unwrap();
        let oracle = set.oracle();
        let iso = unique_iso_to_order_x(&oracle, &set.enumeration);
        let mut fuel = Fuel::default();
        for n in 0..40u64 {
            let y = iso.apply(n, &mut fuel).unwrap();
            assert_eq!(iso.inverse_apply(y, &mut fuel).unwrap(), n);
        }
    }

    #[test]
    fn iso_queries_stay_below_the_bound() {
        let set = builtin_set("squares").unwrap();
        let oracle = set.oracle();
        let iso = unique_iso_to_order_x(&oracle, &set.enumeration);
        let mut fuel = Fuel::default();
        let n = 30u64;
        iso.apply(n, &mut fuel).unwrap();
        let log = oracle.session().log();
        assert!(!log.is_empty());
        for rec in log {
            match rec {
                QueryRecord::Membership { arg, .. } => assert!(arg <= n + 1),
                other => panic!("unexpected oracle use: {other:?}"),
            }
        }
    }

    #[test]
    fn decode_round_trip_for_builtins() {
        for name in ["evens", "squares", "primes"] {
            let set = builtin_set(name).unwrap();
            let oracle = set.oracle();
            let iso = unique_iso_to_order_x(&oracle, &set.enumeration);
            let f_oracle = IsoOracle::new(iso);
            let mut fuel = Fuel::default();
            for k in 0..=25u64 {
                let decoded = decode_x_from_iso(&f_oracle, k, &mut fuel).unwrap();
                assert_eq!(decoded, set.contains(k), "{name} at {k}");
            }
        }
    }

    #[test]
    fn decode_for_evens_spot_values() {
        let set = builtin_set("evens").unwrap();
        let oracle = set.oracle();
        let iso = unique_iso_to_order_x(&oracle, &set.enumeration);
        let f_oracle = IsoOracle::new(iso);
        let mut fuel = Fuel::default();
        assert!(!decode_x_from_iso(&f_oracle, 3, &mut fuel).unwrap());
        assert!(decode_x_from_iso(&f_oracle, 4, &mut fuel).unwrap());
    }

    #[test]
    fn decoder_touches_only_the_iso_oracle() {
        let set = builtin_set("evens").unwrap();
        let oracle = set.oracle();
        let iso = unique_iso_to_order_x(&oracle, &set.enumeration);
        let f_oracle = IsoOracle::new(iso);
        let mut fuel = Fuel::default();
        decode_x_from_iso(&f_oracle, 7, &mut fuel).unwrap();
        let log = f_oracle.session().log();
        // Exactly the two rank queries, nothing else.
        assert_eq!(log.len(), 2);
        assert!(matches!(log[0], QueryRecord::Inverse { arg: 14, .. }));
        assert!(matches!(log[1], QueryRecord::Inverse { arg: 16, .. }));
    }

    #[test]
    fn injectivity_check() {
        let good = CeEnumeration::new(|n| 3 * n + 1);
        assert!(good.check_injective_prefix(100).is_ok());
        let bad = CeEnumeration::new(|n| n / 2);
        assert!(bad.check_injective_prefix(10).is_err());
    }
}
