//! Finite truncations of presentations, their text dump format, and DOT
//! export. Truncations are what the brute-force oracle and all golden-file
//! comparisons operate on.

use std::collections::BTreeSet;

use crate::error::StructureError;
use crate::fuel::Fuel;
use crate::pairing::Code;
use crate::presentation::Presentation;
use crate::signature::{RelationSymbol, SigPrefix, Signature, SymbolId};

/// An explicit finite relational structure: element codes plus a closed list
/// of facts. Everything not listed is false.
#[derive(Clone, Debug)]
pub struct FinitePresentation {
    /// Strictly increasing element codes.
    pub elements: Vec<Code>,
    /// All facts among `elements`, keyed by symbol.
    pub facts: BTreeSet<(SymbolId, Vec<Code>)>,
    /// The symbol prefix the facts were collected over.
    pub symbols: Vec<RelationSymbol>,
}

/// Equality is extensional: same elements, same facts. The symbol prefix is
/// bookkeeping.
impl PartialEq for FinitePresentation {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.facts == other.facts
    }
}
impl Eq for FinitePresentation {}

impl FinitePresentation {
    pub fn new(
        mut elements: Vec<Code>,
        facts: impl IntoIterator<Item = (SymbolId, Vec<Code>)>,
        symbols: Vec<RelationSymbol>,
    ) -> Self {
        elements.sort_unstable();
        elements.dedup();
        FinitePresentation {
            elements,
            facts: facts.into_iter().collect(),
            symbols,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn has_fact(&self, sym: SymbolId, tuple: &[Code]) -> bool {
        self.facts.contains(&(sym, tuple.to_vec()))
    }

    /// Relabel every element through `f` (which must be injective on the
    /// elements). Facts move along.
    pub fn map_elements(&self, f: impl Fn(Code) -> Code) -> FinitePresentation {
        let elements: Vec<Code> = self.elements.iter().map(|&c| f(c)).collect();
        let facts = self
            .facts
            .iter()
            .map(|(sym, tuple)| (*sym, tuple.iter().map(|&c| f(c)).collect()));
        FinitePresentation::new(elements, facts, self.symbols.clone())
    }

    /// Line-oriented dump: one `elements:` header, then one line per fact,
    /// lines sorted lexicographically.
    pub fn to_text(&self) -> String {
        let codes: Vec<String> = self.elements.iter().map(|c| c.to_string()).collect();
        let mut lines: Vec<String> = self
            .facts
            .iter()
            .map(|(sym, tuple)| {
                let args: Vec<String> = tuple.iter().map(|c| c.to_string()).collect();
                format!("R{}.{}({})", sym.family, sym.index, args.join(" "))
            })
            .collect();
        lines.sort();
        let mut out = format!("elements: {}\n", codes.join(" "));
        for line in lines {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// DOT export of the binary facts. Directed families render as arrows,
    /// undirected ones as plain edges (each undirected fact emitted once).
    /// Families are colored by index into a fixed palette.
    pub fn to_dot(&self, sig: &Signature, name: &str) -> String {
        const PALETTE: [&str; 6] = ["red", "blue", "green", "orange", "purple", "brown"];
        let mut out = format!("digraph \"{name}\" {{\n");
        for &e in &self.elements {
            out.push_str(&format!("  n{e} [label=\"{e}\"];\n"));
        }
        let mut lines = Vec::new();
        for (sym, tuple) in &self.facts {
            if tuple.len() != 2 {
                continue;
            }
            let directed = sig.family_of(*sym).map(|f| f.directed).unwrap_or(true);
            let color = PALETTE[(sym.index as usize) % PALETTE.len()];
            let label = sig
                .family_of(*sym)
                .map(|f| format!("{}{}", f.name, sym.index))
                .unwrap_or_else(|| format!("R{}.{}", sym.family, sym.index));
            let (u, v) = (tuple[0], tuple[1]);
            if directed {
                lines.push(format!(
                    "  n{u} -> n{v} [color={color}, label=\"{label}\"];\n"
                ));
            } else if u <= v {
                lines.push(format!(
                    "  n{u} -> n{v} [dir=none, color={color}, label=\"{label}\"];\n"
                ));
            }
        }
        lines.sort();
        lines.dedup();
        for line in lines {
            out.push_str(&line);
        }
        out.push_str("}\n");
        out
    }
}

/// Truncate `p` to its first `bound` universe codes, collecting every fact
/// among them over the symbol prefix.
pub fn restrict_to_finite(
    p: &Presentation,
    bound: u64,
    prefix: &SigPrefix,
    fuel: &mut Fuel,
) -> Result<FinitePresentation, StructureError> {
    if bound == 0 {
        return Err(StructureError::InvalidArgument(
            "truncation bound must be at least 1".into(),
        ));
    }
    let symbols = p.signature().prefix_symbols(prefix)?;
    let elements = p.universe().first_n(bound, fuel)?;
    let mut facts = BTreeSet::new();
    if elements.is_empty() {
        return Ok(FinitePresentation {
            elements,
            facts,
            symbols,
        });
    }
    for sym in &symbols {
        let arity = sym.arity as usize;
        let mut tuple = vec![0usize; arity];
        loop {
            let codes: Vec<Code> = tuple.iter().map(|&i| elements[i]).collect();
            if p.holds_fueled(sym.id, &codes, fuel)? {
                facts.insert((sym.id, codes));
            }
            // Advance the mixed-radix counter over element indices.
            let mut pos = arity;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < elements.len() {
                    break;
                }
                tuple[pos] = 0;
            }
            if tuple.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    Ok(FinitePresentation {
        elements,
        facts,
        symbols,
    })
}

/// Check a lazy map against a truncation: restrict `from` to its first
/// `bound` codes and verify that the map is injective there and that every
/// prefix-symbol fact is preserved and reflected on the mapped tuples.
pub fn iso_preserves_on_truncation(
    rho: &crate::iso::LazyIso,
    from: &Presentation,
    to: &Presentation,
    bound: u64,
    prefix: &SigPrefix,
    fuel: &mut Fuel,
) -> Result<bool, StructureError> {
    let fin = restrict_to_finite(from, bound, prefix, fuel)?;
    let mut image = std::collections::BTreeMap::new();
    let mut seen = BTreeSet::new();
    for &c in &fin.elements {
        let img = rho.apply(c, fuel)?;
        if !to.universe().contains(img) || !seen.insert(img) {
            return Ok(false);
        }
        image.insert(c, img);
    }
    for sym in &fin.symbols {
        let arity = sym.arity as usize;
        let mut ok = true;
        for_each_tuple(&fin.elements, arity, |tuple| {
            let mapped: Vec<Code> = tuple.iter().map(|c| image[c]).collect();
            if fin.has_fact(sym.id, tuple) != to.holds(sym.id, &mapped) {
                ok = false;
            }
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Visit every tuple of the given arity over `elements`.
pub fn for_each_tuple(elements: &[Code], arity: usize, mut visit: impl FnMut(&[Code])) {
    if elements.is_empty() {
        return;
    }
    let mut idx = vec![0usize; arity];
    loop {
        let tuple: Vec<Code> = idx.iter().map(|&i| elements[i]).collect();
        visit(&tuple);
        let mut pos = arity;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < elements.len() {
                break;
            }
            idx[pos] = 0;
        }
        if idx.iter().all(|&i| i == 0) {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::SymbolFamily;
    use crate::zoo;

    #[test]
    fn omega_order_bound_three() {
        let p = zoo::omega_order();
        let fin =
            restrict_to_finite(&p, 3, &SigPrefix::finite_only(), &mut Fuel::default()).unwrap();
        assert_eq!(fin.elements, vec![0, 1, 2]);
        let lt = zoo::lt_sym();
        let expected: BTreeSet<_> = [
            (lt, vec![0, 1]),
            (lt, vec![0, 2]),
            (lt, vec![1, 2]),
        ]
        .into_iter()
        .collect();
        assert_eq!(fin.facts, expected);
    }

    #[test]
    fn re_restricting_is_direct_restricting() {
        let p = zoo::omega_order();
        let prefix = SigPrefix::finite_only();
        let at_eight = restrict_to_finite(&p, 8, &prefix, &mut Fuel::default()).unwrap();
        let at_three = restrict_to_finite(&p, 3, &prefix, &mut Fuel::default()).unwrap();
        // Re-restrict by hand: keep the first 3 elements and facts among them.
        let kept: Vec<Code> = at_eight.elements[..3].to_vec();
        let facts: Vec<_> = at_eight
            .facts
            .iter()
            .filter(|(_, t)| t.iter().all(|c| kept.contains(c)))
            .cloned()
            .collect();
        let rebuilt = FinitePresentation::new(kept, facts, at_eight.symbols.clone());
        assert_eq!(rebuilt, at_three);
    }

    #[test]
    fn unbounded_infinite_family_is_an_error() {
        let sig = Signature::new(vec![SymbolFamily::infinite("E", 2, false)]);
        let p = Presentation::new(sig, crate::presentation::Universe::all(), |_, _| false);
        assert!(matches!(
            restrict_to_finite(&p, 3, &SigPrefix::finite_only(), &mut Fuel::default()),
            Err(StructureError::UnboundedSignature { family: 0 })
        ));
    }

    #[test]
    fn text_format_is_sorted_and_stable() {
        let p = zoo::three_point_base();
        let fin =
            restrict_to_finite(&p, 3, &SigPrefix::finite_only(), &mut Fuel::default()).unwrap();
        assert_eq!(
            fin.to_text(),
            "elements: 0 1 2\nR0.0(0 1)\nR0.0(0 2)\nR0.0(1 0)\nR0.0(1 2)\n"
        );
    }

    #[test]
    fn dot_export_directed_and_undirected() {
        let p = zoo::three_point_base();
        let fin =
            restrict_to_finite(&p, 3, &SigPrefix::finite_only(), &mut Fuel::default()).unwrap();
        let dot = fin.to_dot(p.signature(), "base");
        assert!(dot.contains("n0 -> n1"));
        assert!(!dot.contains("dir=none"));
        let sig = Signature::new(vec![SymbolFamily::finite("E", 2, 1, false)]);
        let undirected = fin.to_dot(&sig, "base");
        assert!(undirected.contains("dir=none"));
    }
}
