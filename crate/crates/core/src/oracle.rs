//! Oracle sessions: the operational carrier of Turing reductions.
//!
//! A reduction procedure receives an oracle handle instead of the object it
//! is reducing to; the session records every query, in order, so tests can
//! audit *what* was consulted and *how much*. "This map is computable from
//! that one" becomes: the procedure closes only over the oracle handle, and
//! its log confirms the discipline.

use std::sync::{Arc, Mutex};

use crate::error::StructureError;
use crate::fuel::Fuel;
use crate::iso::LazyIso;
use crate::pairing::Code;
use crate::presentation::Presentation;

/// One recorded oracle query with its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryRecord {
    /// Set-membership question.
    Membership { arg: u64, answer: bool },
    /// Forward function-oracle question.
    Apply { arg: Code, answer: Code },
    /// Inverse function-oracle question.
    Inverse { arg: Code, answer: Code },
}

/// Append-only query log shared by the oracle front-ends below.
#[derive(Debug, Default)]
pub struct OracleSession {
    log: Mutex<Vec<QueryRecord>>,
}

impl OracleSession {
    pub fn new() -> Arc<Self> {
        Arc::new(OracleSession::default())
    }

    fn record(&self, rec: QueryRecord) {
        self.log.lock().unwrap().push(rec);
    }

    pub fn log(&self) -> Vec<QueryRecord> {
        self.log.lock().unwrap().clone()
    }

    pub fn len(&self) -> usize {
        self.log.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Membership oracle for a set of naturals.
#[derive(Clone)]
pub struct SetOracle {
    membership: Arc<dyn Fn(u64) -> bool + Send + Sync>,
    session: Arc<OracleSession>,
}

impl SetOracle {
    pub fn new(membership: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        SetOracle {
            membership: Arc::new(membership),
            session: OracleSession::new(),
        }
    }

    pub fn query(&self, n: u64) -> bool {
        let answer = (self.membership)(n);
        self.session.record(QueryRecord::Membership { arg: n, answer });
        answer
    }

    pub fn session(&self) -> Arc<OracleSession> {
        self.session.clone()
    }
}

/// Function oracle over a lazy isomorphism: answers `f(n)` and `f^{-1}(m)`.
#[derive(Clone)]
pub struct IsoOracle {
    iso: LazyIso,
    session: Arc<OracleSession>,
}

impl IsoOracle {
    pub fn new(iso: LazyIso) -> Self {
        IsoOracle {
            iso,
            session: OracleSession::new(),
        }
    }

    pub fn apply(&self, x: Code, fuel: &mut Fuel) -> Result<Code, StructureError> {
        let answer = self.iso.apply(x, fuel)?;
        self.session.record(QueryRecord::Apply { arg: x, answer });
        Ok(answer)
    }

    pub fn inverse(&self, y: Code, fuel: &mut Fuel) -> Result<Code, StructureError> {
        let answer = self.iso.inverse_apply(y, fuel)?;
        self.session.record(QueryRecord::Inverse { arg: y, answer });
        Ok(answer)
    }

    pub fn session(&self) -> Arc<OracleSession> {
        self.session.clone()
    }
}

/// Wrap an isomorphism so every pointwise query goes through a logged
/// session. The wrapper memoizes like any lazy isomorphism, so the log
/// records first-time queries.
pub fn logged_iso(iso: &LazyIso) -> (LazyIso, Arc<OracleSession>) {
    let fwd = IsoOracle::new(iso.clone());
    let bwd = fwd.clone();
    let session = fwd.session();
    let wrapped = LazyIso::new(
        move |c, fuel| fwd.apply(c, fuel),
        move |c, fuel| bwd.inverse(c, fuel),
    );
    (wrapped, session)
}

/// Counters for relation and universe queries against a wrapped presentation.
#[derive(Debug, Default)]
pub struct QueryCounter {
    pub holds: std::sync::atomic::AtomicU64,
    pub contains: std::sync::atomic::AtomicU64,
}

impl QueryCounter {
    pub fn holds_count(&self) -> u64 {
        self.holds.load(std::sync::atomic::Ordering::SeqCst)
    }

    pub fn contains_count(&self) -> u64 {
        self.contains.load(std::sync::atomic::Ordering::SeqCst)
    }

    pub fn total(&self) -> u64 {
        self.holds_count() + self.contains_count()
    }
}

/// Wrap a presentation so every evaluator query is counted. Used by the
/// use-discipline audits: hand the wrapped copy to a procedure and assert
/// afterwards that it was (or was not) consulted.
pub fn counted_presentation(p: &Presentation) -> (Presentation, Arc<QueryCounter>) {
    use std::sync::atomic::Ordering;
    let counter = Arc::new(QueryCounter::default());
    let holds_counter = counter.clone();
    let contains_counter = counter.clone();
    let inner = p.clone();
    let inner_universe = p.universe().clone();
    let universe = crate::presentation::Universe::new(inner_universe.extent(), move |c| {
        contains_counter.contains.fetch_add(1, Ordering::SeqCst);
        inner_universe.contains(c)
    });
    let wrapped = Presentation::new(p.signature().clone(), universe, move |sym, tuple| {
        holds_counter.holds.fetch_add(1, Ordering::SeqCst);
        inner.holds(sym, tuple)
    });
    (wrapped, counter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn membership_log_preserves_order() {
        let oracle = SetOracle::new(|n| n % 2 == 0);
        assert!(oracle.query(4));
        assert!(!oracle.query(7));
        assert!(oracle.query(4));
        let log = oracle.session().log();
        assert_eq!(
            log,
            vec![
                QueryRecord::Membership { arg: 4, answer: true },
                QueryRecord::Membership { arg: 7, answer: false },
                QueryRecord::Membership { arg: 4, answer: true },
            ]
        );
    }

    #[test]
    fn counted_presentation_counts() {
        let (p, counter) = counted_presentation(&zoo::omega_order());
        assert_eq!(counter.total(), 0);
        p.holds(zoo::lt_sym(), &[0, 1]);
        p.universe().contains(3);
        // The holds call also checks universe membership of the tuple.
        assert_eq!(counter.holds_count(), 1);
        assert!(counter.contains_count() >= 1);
    }
}
