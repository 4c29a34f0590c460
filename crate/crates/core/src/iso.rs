//! Query-driven bijections between presentations.
//!
//! A [`LazyIso`] is evaluated pointwise, one code at a time, and memoizes
//! the answers it has produced. The memo also keeps an image index per
//! direction, so a non-injective or inconsistent underlying map is reported
//! as an invariant violation as soon as it becomes observable.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::error::StructureError;
use crate::fuel::Fuel;
use crate::pairing::Code;

type MapFn = dyn Fn(Code, &mut Fuel) -> Result<Code, StructureError> + Send + Sync;

#[derive(Default)]
struct Memo {
    map: BTreeMap<Code, Code>,
    image_index: BTreeMap<Code, Code>,
}

impl Memo {
    fn record(&mut self, x: Code, y: Code) -> Result<(), StructureError> {
        if let Some(&prev) = self.image_index.get(&y) {
            if prev != x {
                return Err(StructureError::invariant(format!(
                    "map sends both {prev} and {x} to {y}"
                )));
            }
        }
        self.map.insert(x, y);
        self.image_index.insert(y, x);
        Ok(())
    }
}

struct IsoInner {
    forward: Box<MapFn>,
    backward: Box<MapFn>,
    fwd_memo: Mutex<Memo>,
    bwd_memo: Mutex<Memo>,
}

/// A memoized, pointwise-evaluable bijection.
///
/// The two closures must not call back into the `LazyIso` they belong to;
/// composing or inverting *other* isomorphisms is fine.
#[derive(Clone)]
pub struct LazyIso {
    inner: Arc<IsoInner>,
}

impl LazyIso {
    pub fn new(
        forward: impl Fn(Code, &mut Fuel) -> Result<Code, StructureError> + Send + Sync + 'static,
        backward: impl Fn(Code, &mut Fuel) -> Result<Code, StructureError> + Send + Sync + 'static,
    ) -> Self {
        LazyIso {
            inner: Arc::new(IsoInner {
                forward: Box::new(forward),
                backward: Box::new(backward),
                fwd_memo: Mutex::new(Memo::default()),
                bwd_memo: Mutex::new(Memo::default()),
            }),
        }
    }

    /// Wrap a pair of total computable maps.
    pub fn from_bijection(
        forward: impl Fn(Code) -> Code + Send + Sync + 'static,
        backward: impl Fn(Code) -> Code + Send + Sync + 'static,
    ) -> Self {
        LazyIso::new(
            move |c, _| Ok(forward(c)),
            move |c, _| Ok(backward(c)),
        )
    }

    pub fn identity() -> Self {
        LazyIso::from_bijection(|c| c, |c| c)
    }

    pub fn apply(&self, x: Code, fuel: &mut Fuel) -> Result<Code, StructureError> {
        if let Some(&y) = self.inner.fwd_memo.lock().unwrap().map.get(&x) {
            return Ok(y);
        }
        let y = (self.inner.forward)(x, fuel)?;
        let mut memo = self.inner.fwd_memo.lock().unwrap();
        memo.record(x, y)?;
        // Cross-check against anything the other direction already answered:
        // an earlier inverse_apply(y) must have produced x, and an earlier
        // inverse answer of x must have been for the query y.
        let bwd = self.inner.bwd_memo.lock().unwrap();
        if let Some(&back) = bwd.map.get(&y) {
            if back != x {
                return Err(StructureError::invariant(format!(
                    "apply({x}) = {y} but inverse_apply({y}) = {back}"
                )));
            }
        }
        if let Some(&query) = bwd.image_index.get(&x) {
            if query != y {
                return Err(StructureError::invariant(format!(
                    "apply({x}) = {y} but inverse_apply({query}) = {x}"
                )));
            }
        }
        Ok(y)
    }

    pub fn inverse_apply(&self, y: Code, fuel: &mut Fuel) -> Result<Code, StructureError> {
        if let Some(&x) = self.inner.bwd_memo.lock().unwrap().map.get(&y) {
            return Ok(x);
        }
        let x = (self.inner.backward)(y, fuel)?;
        let mut memo = self.inner.bwd_memo.lock().unwrap();
        memo.record(y, x)?;
        let fwd = self.inner.fwd_memo.lock().unwrap();
        if let Some(&image) = fwd.map.get(&x) {
            if image != y {
                return Err(StructureError::invariant(format!(
                    "inverse_apply({y}) = {x} but apply({x}) = {image}"
                )));
            }
        }
        if let Some(&query) = fwd.image_index.get(&y) {
            if query != x {
                return Err(StructureError::invariant(format!(
                    "inverse_apply({y}) = {x} but apply({query}) = {y}"
                )));
            }
        }
        Ok(x)
    }

    /// The same bijection, reversed.
    pub fn inverted(&self) -> LazyIso {
        let fwd = self.clone();
        let bwd = self.clone();
        LazyIso::new(
            move |c, fuel| fwd.inverse_apply(c, fuel),
            move |c, fuel| bwd.apply(c, fuel),
        )
    }

    /// `self` after `first` (i.e. `x -> self(first(x))`).
    pub fn compose_after(&self, first: &LazyIso) -> LazyIso {
        let outer_f = self.clone();
        let inner_f = first.clone();
        let outer_b = self.clone();
        let inner_b = first.clone();
        LazyIso::new(
            move |c, fuel| {
                let mid = inner_f.apply(c, fuel)?;
                outer_f.apply(mid, fuel)
            },
            move |c, fuel| {
                let mid = outer_b.inverse_apply(c, fuel)?;
                inner_b.inverse_apply(mid, fuel)
            },
        )
    }
}

impl std::fmt::Debug for LazyIso {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fwd = self.inner.fwd_memo.lock().unwrap().map.len();
        let bwd = self.inner.bwd_memo.lock().unwrap().map.len();
        write!(f, "LazyIso {{ memoized: {fwd} forward, {bwd} backward }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memoized_answers_are_stable() {
        let calls = Arc::new(Mutex::new(0u32));
        let count = calls.clone();
        let iso = LazyIso::new(
            move |c, _| {
                *count.lock().unwrap() += 1;
                Ok(c + 10)
            },
            |c, _| Ok(c - 10),
        );
        let mut fuel = Fuel::default();
        assert_eq!(iso.apply(5, &mut fuel).unwrap(), 15);
        assert_eq!(iso.apply(5, &mut fuel).unwrap(), 15);
        assert_eq!(*calls.lock().unwrap(), 1);
        assert_eq!(iso.inverse_apply(15, &mut fuel).unwrap(), 5);
    }

    #[test]
    fn non_injective_map_is_reported() {
        let iso = LazyIso::from_bijection(|_| 7, |c| c);
        let mut fuel = Fuel::default();
        iso.apply(0, &mut fuel).unwrap();
        assert!(matches!(
            iso.apply(1, &mut fuel),
            Err(StructureError::InvariantViolation(_))
        ));
    }

    #[test]
    fn inconsistent_inverse_is_reported() {
        let iso = LazyIso::new(|c, _| Ok(c + 1), |c, _| Ok(c + 1));
        let mut fuel = Fuel::default();
        assert_eq!(iso.apply(3, &mut fuel).unwrap(), 4);
        assert!(matches!(
            iso.inverse_apply(4, &mut fuel),
            Err(StructureError::InvariantViolation(_))
        ));
    }

    #[test]
    fn inversion_and_composition() {
        let shift = LazyIso::from_bijection(|c| c + 3, |c| c - 3);
        let double_shift = shift.compose_after(&shift);
        let mut fuel = Fuel::default();
        assert_eq!(double_shift.apply(1, &mut fuel).unwrap(), 7);
        assert_eq!(double_shift.inverse_apply(7, &mut fuel).unwrap(), 1);
        let back = shift.inverted();
        assert_eq!(back.apply(10, &mut fuel).unwrap(), 7);
    }
}
