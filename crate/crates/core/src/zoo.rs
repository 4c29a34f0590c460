//! Named built-in structures used by the CLI verbs and the test suites.

use crate::pairing::Code;
use crate::presentation::{Presentation, Universe};
use crate::signature::{Signature, SymbolFamily, SymbolId};

/// Symbol id of the order relation in the order presentations below.
pub fn lt_sym() -> SymbolId {
    SymbolId::new(0, 0)
}

fn order_signature() -> Signature {
    Signature::new(vec![SymbolFamily::finite("lt", 2, 1, true)])
}

/// The standard order `(omega, <)` on codes.
pub fn omega_order() -> Presentation {
    Presentation::new(order_signature(), Universe::all(), |sym, t| {
        sym == lt_sym() && t[0] < t[1]
    })
}

/// Signed value of a code under the zig-zag coding `0, -1, 1, -2, 2, ...`.
pub fn int_of_code(c: Code) -> i64 {
    if c % 2 == 0 {
        (c / 2) as i64
    } else {
        -(((c + 1) / 2) as i64)
    }
}

/// The order `(Z, <)` under the zig-zag coding.
pub fn int_order() -> Presentation {
    Presentation::new(order_signature(), Universe::all(), |sym, t| {
        sym == lt_sym() && int_of_code(t[0]) < int_of_code(t[1])
    })
}

/// A finite directed graph on the codes `0..n` with one binary edge family.
pub fn finite_digraph(n: Code, edges: &[(Code, Code)]) -> Presentation {
    let edges: std::collections::BTreeSet<(Code, Code)> = edges.iter().copied().collect();
    let sig = Signature::new(vec![SymbolFamily::finite("E", 2, 1, true)]);
    Presentation::new(sig, Universe::finite(0..n), move |sym, t| {
        sym == SymbolId::new(0, 0) && edges.contains(&(t[0], t[1]))
    })
}

/// The three-point base graph with edges
/// `{(0,1), (1,0), (0,2), (1,2)}`: `2` is fixed by every automorphism,
/// `0` and `1` may swap.
pub fn three_point_base() -> Presentation {
    finite_digraph(3, &[(0, 1), (1, 0), (0, 2), (1, 2)])
}

/// A finite linear order on the codes `0..n`.
pub fn finite_order(n: Code) -> Presentation {
    let sig = order_signature();
    Presentation::new(sig, Universe::finite(0..n), |sym, t| {
        sym == lt_sym() && t[0] < t[1]
    })
}

/// The three-point base with one copy of `(omega, <)` at 0 and at 1 and a
/// copy of `(Z, <)` at 2, glued with the attachment edge.
pub fn figure_one_composite() -> crate::composite::CompositeStructure {
    let family = crate::composite::UniformFamily::new(
        order_signature(),
        |x| x < 3,
        |x| match x {
            0 | 1 => omega_order(),
            _ => int_order(),
        },
    );
    crate::composite::compose(&three_point_base(), &family)
        .expect("built-in composite is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_order_around_zero() {
        // codes 0,1,2,3,4 are 0,-1,1,-2,2
        assert_eq!(int_of_code(0), 0);
        assert_eq!(int_of_code(1), -1);
        assert_eq!(int_of_code(2), 1);
        assert_eq!(int_of_code(3), -2);
        assert_eq!(int_of_code(4), 2);
        let z = int_order();
        assert!(z.holds(lt_sym(), &[1, 0]));
        assert!(z.holds(lt_sym(), &[3, 1]));
        assert!(!z.holds(lt_sym(), &[2, 0]));
    }

    #[test]
    fn three_point_base_edges() {
        let s = three_point_base();
        let e = SymbolId::new(0, 0);
        assert!(s.holds(e, &[0, 1]));
        assert!(s.holds(e, &[1, 0]));
        assert!(s.holds(e, &[0, 2]));
        assert!(s.holds(e, &[1, 2]));
        assert!(!s.holds(e, &[2, 0]));
        assert!(!s.holds(e, &[2, 1]));
        assert!(!s.holds(e, &[0, 3]));
    }
}
