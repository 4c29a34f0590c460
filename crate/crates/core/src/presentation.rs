//! Lazily presented relational structures.
//!
//! A [`Presentation`] is the executable form of a computable atomic diagram:
//! a decidable universe of natural-number codes, plus a total, deterministic
//! relation evaluator. Universes may be infinite; nothing here ever
//! materializes one. Searches over a universe go through [`Universe::scan_from`]
//! and spend fuel, so a wrong promise surfaces as a diagnosable error rather
//! than divergence.

use std::sync::Arc;

use crate::error::StructureError;
use crate::fuel::Fuel;
use crate::pairing::{decode_pair, encode_pair, Code};
use crate::signature::{Signature, SymbolId};

/// What is known about how far a universe reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extent {
    /// Promised infinite: scanning past any point eventually finds a member.
    Infinite,
    /// All members are `<=` this code; scanning past it may stop.
    MaxCode(Code),
    /// No promise either way (e.g. the base of a decomposed copy).
    /// Scans can never prove exhaustion, only run out of fuel.
    Unknown,
}

type ContainsFn = dyn Fn(Code) -> bool + Send + Sync;

/// A decidable set of codes with an extent promise.
#[derive(Clone)]
pub struct Universe {
    contains: Arc<ContainsFn>,
    extent: Extent,
}

impl Universe {
    pub fn new(extent: Extent, contains: impl Fn(Code) -> bool + Send + Sync + 'static) -> Self {
        Universe {
            contains: Arc::new(contains),
            extent,
        }
    }

    /// All naturals.
    pub fn all() -> Self {
        Universe::new(Extent::Infinite, |_| true)
    }

    /// An explicit finite set.
    pub fn finite(codes: impl IntoIterator<Item = Code>) -> Self {
        let set: std::collections::BTreeSet<Code> = codes.into_iter().collect();
        let max = set.iter().next_back().copied().unwrap_or(0);
        Universe::new(Extent::MaxCode(max), move |c| set.contains(&c))
    }

    pub fn contains(&self, code: Code) -> bool {
        (self.contains)(code)
    }

    pub fn extent(&self) -> Extent {
        self.extent
    }

    /// First member `>= from`, or `Ok(None)` when the extent proves there is
    /// none. Spends one fuel unit per candidate tested.
    pub fn scan_from(&self, from: Code, fuel: &mut Fuel) -> Result<Option<Code>, StructureError> {
        let mut c = from;
        loop {
            if let Extent::MaxCode(max) = self.extent {
                if c > max {
                    return Ok(None);
                }
            }
            fuel.spend(1, "scanning a universe")?;
            if (self.contains)(c) {
                return Ok(Some(c));
            }
            c = c
                .checked_add(1)
                .ok_or(StructureError::FuelExhausted {
                    context: "scanning past the last representable code",
                })?;
        }
    }

    /// The first `n` members in increasing order (fewer if the universe is
    /// exhausted first).
    pub fn first_n(&self, n: u64, fuel: &mut Fuel) -> Result<Vec<Code>, StructureError> {
        let mut out = Vec::new();
        let mut from = 0;
        for _ in 0..n {
            match self.scan_from(from, fuel)? {
                Some(c) => {
                    out.push(c);
                    from = match c.checked_add(1) {
                        Some(next) => next,
                        None => break,
                    };
                }
                None => break,
            }
        }
        Ok(out)
    }
}

impl std::fmt::Debug for Universe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Universe").field("extent", &self.extent).finish()
    }
}

type HoldsFn = dyn Fn(SymbolId, &[Code]) -> bool + Send + Sync;

/// A computable relational structure presented by evaluators.
///
/// Invariants the constructors maintain:
/// - `holds` is pure and deterministic,
/// - `holds` returns `false` (never diverges, never errors) on tuples of the
///   wrong length, on symbols outside the signature, and on tuples containing
///   non-universe codes.
#[derive(Clone)]
pub struct Presentation {
    signature: Signature,
    universe: Universe,
    holds: Arc<HoldsFn>,
}

impl Presentation {
    pub fn new(
        signature: Signature,
        universe: Universe,
        holds: impl Fn(SymbolId, &[Code]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Presentation {
            signature,
            universe,
            holds: Arc::new(holds),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Relation query. Rejects (returns `false` for) wrong arities, unknown
    /// symbols, and tuples not inside the universe.
    pub fn holds(&self, sym: SymbolId, tuple: &[Code]) -> bool {
        let Some(fam) = self.signature.family_of(sym) else {
            return false;
        };
        if tuple.len() != fam.arity as usize {
            return false;
        }
        if !tuple.iter().all(|&c| self.universe.contains(c)) {
            return false;
        }
        (self.holds)(sym, tuple)
    }

    /// Same query, but metered: spends one fuel unit.
    pub fn holds_fueled(
        &self,
        sym: SymbolId,
        tuple: &[Code],
        fuel: &mut Fuel,
    ) -> Result<bool, StructureError> {
        fuel.spend(1, "evaluating a relation")?;
        Ok(self.holds(sym, tuple))
    }
}

impl std::fmt::Debug for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Presentation")
            .field("signature", &self.signature)
            .field("universe", &self.universe)
            .finish()
    }
}

/// A copy of `inner` relabelled onto the disjoint universe
/// `{ encode_pair(tag, a) : a in inner }`.
#[derive(Clone, Debug)]
pub struct TaggedCopy {
    pub tag: Code,
    pub inner: Presentation,
}

impl TaggedCopy {
    pub fn new(tag: Code, inner: Presentation) -> Self {
        TaggedCopy { tag, inner }
    }

    /// Code of the inner element `a` inside this copy.
    pub fn code_of(&self, a: Code) -> Code {
        encode_pair(self.tag, a)
    }

    /// Inner element of a copy code, if the tag matches.
    pub fn element_of(&self, code: Code) -> Option<Code> {
        let (tag, a) = decode_pair(code);
        (tag == self.tag).then_some(a)
    }

    /// The relabelled copy as a presentation in its own right.
    pub fn presentation(&self) -> Presentation {
        let tag = self.tag;
        let inner = self.inner.clone();
        let inner_universe = self.inner.universe().clone();
        let extent = match inner_universe.extent() {
            Extent::Infinite => Extent::Infinite,
            // encode_pair is monotone in its second argument.
            Extent::MaxCode(m) => Extent::MaxCode(encode_pair(tag, m)),
            Extent::Unknown => Extent::Unknown,
        };
        let universe = Universe::new(extent, move |c| {
            let (t, a) = decode_pair(c);
            t == tag && inner_universe.contains(a)
        });
        Presentation::new(self.inner.signature().clone(), universe, move |sym, tuple| {
            let mut unwrapped = Vec::with_capacity(tuple.len());
            for &c in tuple {
                let (t, a) = decode_pair(c);
                if t != tag {
                    return false;
                }
                unwrapped.push(a);
            }
            inner.holds(sym, &unwrapped)
        })
    }
}

/// Re-tag a copy: the same inner presentation under a new tag, together with
/// the transport isomorphism `(tag, a) -> (new_tag, a)`. The transport is
/// uniformly computable in both tags.
pub fn retag_copy(src: &TaggedCopy, new_tag: Code) -> (TaggedCopy, crate::iso::LazyIso) {
    let old_tag = src.tag;
    let transport = transport_iso(old_tag, new_tag);
    (TaggedCopy::new(new_tag, src.inner.clone()), transport)
}

/// The transport isomorphism `(from, a) -> (to, a)` between two tags.
pub fn transport_iso(from: Code, to: Code) -> crate::iso::LazyIso {
    crate::iso::LazyIso::new(
        move |c, _| {
            let (t, a) = decode_pair(c);
            if t != from {
                return Err(StructureError::TagMismatch {
                    expected: from,
                    found: t,
                });
            }
            Ok(encode_pair(to, a))
        },
        move |c, _| {
            let (t, a) = decode_pair(c);
            if t != to {
                return Err(StructureError::TagMismatch {
                    expected: to,
                    found: t,
                });
            }
            Ok(encode_pair(from, a))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn scan_respects_max_code() {
        let u = Universe::finite([2, 5, 9]);
        let mut fuel = Fuel::new(100);
        assert_eq!(u.scan_from(0, &mut fuel).unwrap(), Some(2));
        assert_eq!(u.scan_from(3, &mut fuel).unwrap(), Some(5));
        assert_eq!(u.scan_from(10, &mut fuel).unwrap(), None);
        assert_eq!(u.first_n(10, &mut Fuel::new(100)).unwrap(), vec![2, 5, 9]);
    }

    #[test]
    fn scan_exhausts_fuel_instead_of_diverging() {
        let u = Universe::new(Extent::Unknown, |_| false);
        let mut fuel = Fuel::new(50);
        assert!(matches!(
            u.scan_from(0, &mut fuel),
            Err(StructureError::FuelExhausted { .. })
        ));
    }

    #[test]
    fn holds_rejects_wrong_arity_and_foreign_codes() {
        let p = zoo::omega_order();
        let lt = SymbolId::new(0, 0);
        assert!(p.holds(lt, &[1, 2]));
        assert!(!p.holds(lt, &[1]));
        assert!(!p.holds(lt, &[1, 2, 3]));
        assert!(!p.holds(SymbolId::new(1, 0), &[1, 2]));
    }

    #[test]
    fn retag_to_same_tag_is_identity_transport() {
        let copy = TaggedCopy::new(5, zoo::omega_order());
        let (same, transport) = retag_copy(&copy, 5);
        assert_eq!(same.tag, 5);
        let mut fuel = Fuel::default();
        for a in 0..20 {
            let c = copy.code_of(a);
            assert_eq!(transport.apply(c, &mut fuel).unwrap(), c);
        }
    }

    #[test]
    fn transport_round_trips_and_rejects_foreign_tags() {
        let copy = TaggedCopy::new(2, zoo::omega_order());
        let (moved, transport) = retag_copy(&copy, 9);
        let mut fuel = Fuel::default();
        for a in 0..100 {
            let c = copy.code_of(a);
            let image = transport.apply(c, &mut fuel).unwrap();
            assert_eq!(image, moved.code_of(a));
            assert_eq!(transport.inverse_apply(image, &mut fuel).unwrap(), c);
        }
        let foreign = encode_pair(3, 0);
        assert!(matches!(
            transport.apply(foreign, &mut fuel),
            Err(StructureError::TagMismatch { .. })
        ));
    }

    #[test]
    fn tagged_copy_is_disjoint_and_faithful() {
        let a = TaggedCopy::new(3, zoo::omega_order());
        let b = TaggedCopy::new(4, zoo::omega_order());
        let pa = a.presentation();
        let pb = b.presentation();
        let mut fuel = Fuel::new(10_000);
        let firsts_a = pa.universe().first_n(5, &mut fuel).unwrap();
        for &c in &firsts_a {
            assert!(!pb.universe().contains(c));
        }
        let lt = SymbolId::new(0, 0);
        assert!(pa.holds(lt, &[a.code_of(0), a.code_of(7)]));
        assert!(!pa.holds(lt, &[a.code_of(7), a.code_of(0)]));
        // Mixed tags never stand in a relation.
        assert!(!pa.holds(lt, &[a.code_of(0), b.code_of(7)]));
    }
}
