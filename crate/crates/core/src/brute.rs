//! Brute-force isomorphism search on finite truncations.
//!
//! This is the independent oracle the rest of the crate is checked against:
//! a plain backtracking search over partial bijections with fact-consistency
//! pruning, no cleverness shared with any of the lazy machinery.

use std::collections::{BTreeMap, BTreeSet};

use crate::finite::FinitePresentation;
use crate::pairing::Code;
use crate::signature::SymbolId;

/// A finite bijection, domain code to image code.
pub type Bijection = BTreeMap<Code, Code>;

struct Side {
    elements: Vec<Code>,
    /// Facts as index tuples, per symbol.
    facts: BTreeMap<SymbolId, BTreeSet<Vec<usize>>>,
    /// For each element index, the facts it participates in.
    facts_at: Vec<Vec<(SymbolId, Vec<usize>)>>,
    /// Per-element degree fingerprint: (symbol, position) -> count.
    degree: Vec<BTreeMap<(SymbolId, usize), usize>>,
}

impl Side {
    fn build(fp: &FinitePresentation) -> Side {
        let index_of: BTreeMap<Code, usize> = fp
            .elements
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        let n = fp.elements.len();
        let mut facts: BTreeMap<SymbolId, BTreeSet<Vec<usize>>> = BTreeMap::new();
        let mut facts_at: Vec<Vec<(SymbolId, Vec<usize>)>> = vec![Vec::new(); n];
        let mut degree: Vec<BTreeMap<(SymbolId, usize), usize>> = vec![BTreeMap::new(); n];
        for (sym, tuple) in &fp.facts {
            let idx_tuple: Vec<usize> = tuple.iter().map(|c| index_of[c]).collect();
            for (pos, &i) in idx_tuple.iter().enumerate() {
                *degree[i].entry((*sym, pos)).or_insert(0) += 1;
            }
            for &i in idx_tuple.iter().collect::<BTreeSet<_>>() {
                facts_at[i].push((*sym, idx_tuple.clone()));
            }
            facts.entry(*sym).or_default().insert(idx_tuple);
        }
        Side {
            elements: fp.elements.clone(),
            facts,
            facts_at,
            degree,
        }
    }

    fn has(&self, sym: SymbolId, tuple: &[usize]) -> bool {
        self.facts
            .get(&sym)
            .map(|set| set.contains(tuple))
            .unwrap_or(false)
    }
}

struct Search {
    left: Side,
    right: Side,
    /// image[i] = Some(j) when left element i is mapped to right element j.
    image: Vec<Option<usize>>,
    preimage: Vec<Option<usize>>,
    found: Vec<Bijection>,
}

impl Search {
    /// Check every fact (on both sides) that becomes fully decided by the
    /// assignment `i -> j`.
    fn consistent(&self, i: usize, j: usize) -> bool {
        for (sym, tuple) in &self.left.facts_at[i] {
            let mut mapped = Vec::with_capacity(tuple.len());
            let mut decided = true;
            for &t in tuple {
                let img = if t == i { Some(j) } else { self.image[t] };
                match img {
                    Some(m) => mapped.push(m),
                    None => {
                        decided = false;
                        break;
                    }
                }
            }
            if decided && !self.right.has(*sym, &mapped) {
                return false;
            }
        }
        for (sym, tuple) in &self.right.facts_at[j] {
            let mut mapped = Vec::with_capacity(tuple.len());
            let mut decided = true;
            for &t in tuple {
                let pre = if t == j { Some(i) } else { self.preimage[t] };
                match pre {
                    Some(m) => mapped.push(m),
                    None => {
                        decided = false;
                        break;
                    }
                }
            }
            if decided && !self.left.has(*sym, &mapped) {
                return false;
            }
        }
        true
    }

    fn extend(&mut self, i: usize) {
        let n = self.left.elements.len();
        if i == n {
            let map: Bijection = (0..n)
                .map(|k| {
                    (
                        self.left.elements[k],
                        self.right.elements[self.image[k].unwrap()],
                    )
                })
                .collect();
            self.found.push(map);
            return;
        }
        // Candidates in increasing right-element order keeps the output in
        // lexicographic order of the induced image sequence.
        for j in 0..n {
            if self.preimage[j].is_some() {
                continue;
            }
            if self.left.degree[i] != self.right.degree[j] {
                continue;
            }
            if !self.consistent(i, j) {
                continue;
            }
            self.image[i] = Some(j);
            self.preimage[j] = Some(i);
            self.extend(i + 1);
            self.image[i] = None;
            self.preimage[j] = None;
        }
    }
}

/// All relation-preserving-and-reflecting bijections between two finite
/// presentations, in lexicographic order of the induced image sequence.
/// Empty when the structures are not isomorphic.
pub fn brute_force_isomorphisms(
    f1: &FinitePresentation,
    f2: &FinitePresentation,
) -> Vec<Bijection> {
    if f1.elements.len() != f2.elements.len() {
        return Vec::new();
    }
    let left = Side::build(f1);
    let right = Side::build(f2);
    let n = left.elements.len();
    let mut search = Search {
        left,
        right,
        image: vec![None; n],
        preimage: vec![None; n],
        found: Vec::new(),
    };
    search.extend(0);
    search.found
}

/// Fact-by-fact check that `map` preserves and reflects every listed fact.
pub fn is_isomorphism(f1: &FinitePresentation, f2: &FinitePresentation, map: &Bijection) -> bool {
    if map.len() != f1.elements.len() || f1.elements.len() != f2.elements.len() {
        return false;
    }
    let values: BTreeSet<Code> = map.values().copied().collect();
    if values.len() != map.len() || !f2.elements.iter().all(|c| values.contains(c)) {
        return false;
    }
    for (sym, tuple) in &f1.facts {
        let mapped: Vec<Code> = tuple.iter().map(|c| map[c]).collect();
        if !f2.has_fact(*sym, &mapped) {
            return false;
        }
    }
    let inverse: BTreeMap<Code, Code> = map.iter().map(|(&a, &b)| (b, a)).collect();
    for (sym, tuple) in &f2.facts {
        let mapped: Vec<Code> = tuple.iter().map(|c| inverse[c]).collect();
        if !f1.has_fact(*sym, &mapped) {
            return false;
        }
    }
    true
}
