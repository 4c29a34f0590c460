//! Deterministic pseudo-random sampling for property checks.
//!
//! All randomized verification in the crate and in the CLI goes through
//! this generator, so identical seeds give byte-identical runs on every
//! platform.

use crate::composite::{compose, CompositeStructure, UniformFamily};
use crate::presentation::Presentation;
use crate::zoo;

/// SplitMix64.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-enough value in `0..n` for sampling purposes.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// A random finite composite: a base digraph on at most `max_base` points,
/// each carrying a small random digraph component, everything within
/// `max_total` elements.
pub fn random_finite_composite(
    rng: &mut SplitMix64,
    max_base: u64,
    max_total: u64,
) -> CompositeStructure {
    let nb = 1 + rng.below(max_base);
    let mut base_edges = Vec::new();
    for i in 0..nb {
        for j in 0..nb {
            if i != j && rng.chance(1, 2) {
                base_edges.push((i, j));
            }
        }
    }
    let base = zoo::finite_digraph(nb, &base_edges);

    let mut budget = max_total.saturating_sub(nb).max(nb);
    let mut components: Vec<Presentation> = Vec::new();
    for _ in 0..nb {
        let remaining_slots = nb - components.len() as u64;
        let avail = (budget / remaining_slots).max(1).min(3);
        let size = 1 + rng.below(avail);
        budget = budget.saturating_sub(size);
        let mut edges = Vec::new();
        for i in 0..size {
            for j in 0..size {
                if i != j && rng.chance(1, 3) {
                    edges.push((i, j));
                }
            }
        }
        components.push(zoo::finite_digraph(size, &edges));
    }

    let sig = components[0].signature().clone();
    let family = UniformFamily::new(
        sig,
        move |x| x < nb,
        move |x| components[x as usize].clone(),
    );
    compose(&base, &family).expect("random finite composite is well formed")
}

/// Sample a hypercube element with bounded dimensional content: vertices
/// with masks below `2^max_dim`, faces of dimension below `max_dim`.
pub fn random_h_element(rng: &mut SplitMix64, max_dim: u32) -> crate::hypercube::HElement {
    use crate::hypercube::HElement;
    if rng.chance(3, 5) {
        HElement::Vertex(rng.below(1 << max_dim))
    } else {
        HElement::Face(rng.below(max_dim as u64), rng.below(2) as u8)
    }
}

/// Sample a finite set of dimensions as a mask below `2^max_dim`.
pub fn random_mask(rng: &mut SplitMix64, max_dim: u32) -> u64 {
    rng.below(1 << max_dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuel::Fuel;

    #[test]
    fn same_seed_same_stream() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn random_composites_are_finite_and_lawful() {
        for seed in 0..10u64 {
            let mut rng = SplitMix64::new(seed);
            let c = random_finite_composite(&mut rng, 3, 12);
            let mut fuel = Fuel::default();
            let elems = c
                .combined()
                .universe()
                .first_n(100, &mut fuel)
                .expect("finite composite enumerates");
            assert!(!elems.is_empty());
            assert!(elems.len() <= 15);
            for &z in &elems {
                let t = c.mu_target(z).unwrap();
                assert!(c.combined().holds(crate::composite::mu_sym(), &[z, t]));
            }
        }
    }
}
