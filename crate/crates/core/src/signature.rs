//! Relational signatures.
//!
//! A signature is a finite list of symbol *families*; each family fixes an
//! arity and contains either finitely many or infinitely many indexed
//! symbols (the hypercube needs one `E_i` and one `D_i` per dimension).
//! A concrete relation symbol is a `(family, index)` pair, flattened to a
//! single natural through the fixed pairing when a flat id is needed.

use std::sync::Arc;

use crate::error::StructureError;
use crate::pairing::{decode_pair, encode_pair, Code};

/// Identity of one relation symbol: which family, which index within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId {
    pub family: u32,
    pub index: u64,
}

impl SymbolId {
    pub fn new(family: u32, index: u64) -> Self {
        SymbolId { family, index }
    }

    /// Flat natural code of this symbol, via the fixed pairing.
    pub fn code(self) -> Code {
        encode_pair(self.family as u64, self.index)
    }

    pub fn from_code(code: Code) -> Self {
        let (family, index) = decode_pair(code);
        SymbolId {
            family: family as u32,
            index,
        }
    }
}

/// A relation symbol together with its arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationSymbol {
    pub id: SymbolId,
    pub arity: u32,
}

/// One indexed family of relation symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolFamily {
    /// Display name ("mu", "E", "D", "lt", ...). Not part of the dump format.
    pub name: String,
    pub arity: u32,
    /// Number of indices, or `None` for an infinite family.
    pub index_count: Option<u64>,
    /// Whether binary facts of this family are directed (affects DOT export
    /// only).
    pub directed: bool,
}

impl SymbolFamily {
    pub fn finite(name: &str, arity: u32, index_count: u64, directed: bool) -> Self {
        SymbolFamily {
            name: name.to_string(),
            arity,
            index_count: Some(index_count),
            directed,
        }
    }

    pub fn infinite(name: &str, arity: u32, directed: bool) -> Self {
        SymbolFamily {
            name: name.to_string(),
            arity,
            index_count: None,
            directed,
        }
    }
}

/// How a composite signature is laid out: family 0 is the attachment edge,
/// the next `base_families` entries come from the base structure, the rest
/// from the components. Carried so decomposition can split a signature back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositeLayout {
    pub base_families: u32,
    pub component_families: u32,
}

/// A relational signature: finite list of families, symbol lookup by id.
#[derive(Clone)]
pub struct Signature {
    families: Arc<Vec<SymbolFamily>>,
    composite_layout: Option<CompositeLayout>,
}

impl Signature {
    pub fn new(families: Vec<SymbolFamily>) -> Self {
        Signature {
            families: Arc::new(families),
            composite_layout: None,
        }
    }

    pub fn with_layout(families: Vec<SymbolFamily>, layout: CompositeLayout) -> Self {
        Signature {
            families: Arc::new(families),
            composite_layout: Some(layout),
        }
    }

    pub fn families(&self) -> &[SymbolFamily] {
        &self.families
    }

    pub fn composite_layout(&self) -> Option<CompositeLayout> {
        self.composite_layout
    }

    /// Family record for `id`, or `None` if the id falls outside the
    /// signature. Total and deterministic.
    pub fn family_of(&self, id: SymbolId) -> Option<&SymbolFamily> {
        let fam = self.families.get(id.family as usize)?;
        match fam.index_count {
            Some(count) if id.index >= count => None,
            _ => Some(fam),
        }
    }

    pub fn symbol(&self, id: SymbolId) -> Option<RelationSymbol> {
        self.family_of(id).map(|fam| RelationSymbol {
            id,
            arity: fam.arity,
        })
    }

    pub fn contains(&self, id: SymbolId) -> bool {
        self.family_of(id).is_some()
    }

    /// All symbols of the prefix: finite families in full, infinite families
    /// up to the prefix bound. Errors if an infinite family has no bound.
    pub fn prefix_symbols(&self, prefix: &SigPrefix) -> Result<Vec<RelationSymbol>, StructureError> {
        let mut out = Vec::new();
        for (f, fam) in self.families.iter().enumerate() {
            let count = match fam.index_count {
                Some(count) => count,
                None => prefix
                    .bound_for(f as u32)
                    .ok_or(StructureError::UnboundedSignature { family: f as u32 })?,
            };
            for index in 0..count {
                out.push(RelationSymbol {
                    id: SymbolId::new(f as u32, index),
                    arity: fam.arity,
                });
            }
        }
        Ok(out)
    }
}

impl std::fmt::Debug for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Signature")
            .field("families", &self.families)
            .field("composite_layout", &self.composite_layout)
            .finish()
    }
}

/// A finite symbol prefix for truncations: an index bound applied to every
/// infinite family, with optional per-family overrides.
#[derive(Debug, Clone, Default)]
pub struct SigPrefix {
    default_bound: Option<u64>,
    per_family: Vec<(u32, u64)>,
}

impl SigPrefix {
    /// No bounds at all; only valid for signatures with finite families.
    pub fn finite_only() -> Self {
        SigPrefix::default()
    }

    /// Bound every infinite family at `bound` indices.
    pub fn depth(bound: u64) -> Self {
        SigPrefix {
            default_bound: Some(bound),
            per_family: Vec::new(),
        }
    }

    pub fn with_family_bound(mut self, family: u32, bound: u64) -> Self {
        self.per_family.push((family, bound));
        self
    }

    fn bound_for(&self, family: u32) -> Option<u64> {
        self.per_family
            .iter()
            .find(|(f, _)| *f == family)
            .map(|(_, b)| *b)
            .or(self.default_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(vec![
            SymbolFamily::infinite("E", 2, false),
            SymbolFamily::finite("lt", 2, 1, true),
        ])
    }

    #[test]
    fn lookup_is_total() {
        let s = sig();
        assert!(s.contains(SymbolId::new(0, 12345)));
        assert!(s.contains(SymbolId::new(1, 0)));
        assert!(!s.contains(SymbolId::new(1, 1)));
        assert!(!s.contains(SymbolId::new(2, 0)));
    }

    #[test]
    fn symbol_id_code_round_trip() {
        for family in 0..5u32 {
            for index in 0..5u64 {
                let id = SymbolId::new(family, index);
                assert_eq!(SymbolId::from_code(id.code()), id);
            }
        }
    }

    #[test]
    fn prefix_requires_bound_for_infinite_family() {
        let s = sig();
        assert!(matches!(
            s.prefix_symbols(&SigPrefix::finite_only()),
            Err(StructureError::UnboundedSignature { family: 0 })
        ));
        let syms = s.prefix_symbols(&SigPrefix::depth(3)).unwrap();
        // E_0..E_2 plus lt.
        assert_eq!(syms.len(), 4);
        assert!(syms.iter().all(|r| r.arity == 2));
    }
}
