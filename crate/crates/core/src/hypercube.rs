//! The infinite-dimensional hypercube with labelled faces.
//!
//! Elements are either finite subsets of the naturals (vertices) or pairs
//! `(i, a)` with `a < 2` (the two opposing hyperfaces of dimension `i`).
//! Undirected edges `E_i` connect vertices differing exactly in `i`;
//! directed edges `D_i` point from each vertex to the face of dimension `i`
//! it lies on.
//!
//! Vertices are represented as bitmasks, which caps desk-scale vertices at
//! machine-word dimensions; faces carry arbitrary dimension indices. The
//! canonical code of a vertex with mask `m` is `2m`; the face `(i, a)` gets
//! `2(2i + a) + 1`.
//!
//! The structure is rigid once the image of the empty set is pinned: every
//! automorphism is "symmetric difference with a fixed finite set" on
//! vertices and the matching bit-flip on faces. [`recover_iso`] turns that
//! into an algorithm: given any lawful copy and the image of the empty set,
//! it rebuilds the full isomorphism by edge-walking, one query at a time.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::brute::{brute_force_isomorphisms, Bijection};
use crate::error::StructureError;
use crate::finite::restrict_to_finite;
use crate::fuel::Fuel;
use crate::iso::LazyIso;
use crate::pairing::Code;
use crate::presentation::{Extent, Presentation, Universe};
use crate::signature::{SigPrefix, Signature, SymbolFamily, SymbolId};

/// Largest usable dimension index for vertices (bitmask representation).
pub const MAX_DIM: u64 = 64;

/// Default cap on the truncation depth accepted by the brute-force
/// automorphism enumeration.
pub const DEFAULT_BRUTE_LIMIT: u32 = 4;

/// An element of the hypercube structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HElement {
    /// A finite set of naturals, as a bitmask.
    Vertex(u64),
    /// The face `(dimension, side)` with `side < 2`.
    Face(u64, u8),
}

impl HElement {
    /// Canonical code: vertices on the evens, faces on the odds.
    pub fn code(&self) -> Code {
        match *self {
            HElement::Vertex(mask) => {
                assert!(mask <= Code::MAX / 2, "vertex mask too large to code");
                2 * mask
            }
            HElement::Face(i, a) => 2 * (2 * i + a as u64) + 1,
        }
    }

    pub fn from_code(code: Code) -> HElement {
        if code % 2 == 0 {
            HElement::Vertex(code / 2)
        } else {
            let k = (code - 1) / 2;
            HElement::Face(k / 2, (k % 2) as u8)
        }
    }

    pub fn is_vertex(&self) -> bool {
        matches!(self, HElement::Vertex(_))
    }

    /// Build a vertex from listed elements.
    pub fn vertex_of(elems: &[u64]) -> HElement {
        let mut mask = 0u64;
        for &e in elems {
            assert!(e < MAX_DIM, "vertex element {e} out of mask range");
            mask |= 1 << e;
        }
        HElement::Vertex(mask)
    }
}

impl std::fmt::Display for HElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            HElement::Vertex(mask) => {
                let elems: Vec<String> = (0..MAX_DIM)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| i.to_string())
                    .collect();
                write!(f, "{{{}}}", elems.join(","))
            }
            HElement::Face(i, a) => write!(f, "({i},{a})"),
        }
    }
}

/// Characteristic value `X(i)` of a mask, 0 for dimensions beyond the mask
/// range (finite sets never contain them).
fn mask_bit(mask: u64, i: u64) -> u8 {
    if i < MAX_DIM {
        ((mask >> i) & 1) as u8
    } else {
        0
    }
}

/// `E_i(x, y)`: both vertices, differing exactly in dimension `i`.
pub fn h_e_rel(i: u64, x: &HElement, y: &HElement) -> bool {
    match (x, y) {
        (HElement::Vertex(a), HElement::Vertex(b)) => i < MAX_DIM && a ^ b == 1 << i,
        _ => false,
    }
}

/// `D_i(x, f)`: `x` a vertex lying on the face `f = (i, a)`.
pub fn h_d_rel(i: u64, x: &HElement, f: &HElement) -> bool {
    match (x, f) {
        (HElement::Vertex(mask), HElement::Face(j, a)) => *j == i && mask_bit(*mask, i) == *a,
        _ => false,
    }
}

/// The automorphism determined by a finite set: symmetric difference on
/// vertices, bit-flip on faces of dimensions inside the set.
pub fn h_apply(x_mask: u64, z: &HElement) -> HElement {
    match *z {
        HElement::Vertex(m) => HElement::Vertex(x_mask ^ m),
        HElement::Face(i, a) => HElement::Face(i, a ^ mask_bit(x_mask, i)),
    }
}

/// Composition law on defining sets: symmetric difference.
pub fn h_compose(x_mask: u64, y_mask: u64) -> u64 {
    x_mask ^ y_mask
}

pub fn e_sym(i: u64) -> SymbolId {
    SymbolId::new(0, i)
}

pub fn d_sym(i: u64) -> SymbolId {
    SymbolId::new(1, i)
}

pub fn h_signature() -> Signature {
    Signature::new(vec![
        SymbolFamily::infinite("E", 2, false),
        SymbolFamily::infinite("D", 2, true),
    ])
}

fn h_holds(sym: SymbolId, tuple: &[Code]) -> bool {
    let x = HElement::from_code(tuple[0]);
    let y = HElement::from_code(tuple[1]);
    match sym.family {
        0 => h_e_rel(sym.index, &x, &y),
        1 => h_d_rel(sym.index, &x, &y),
        _ => false,
    }
}

/// The canonical copy: universe is all of the naturals (every even code is
/// a vertex, every odd code a face).
pub fn canonical() -> Presentation {
    Presentation::new(h_signature(), Universe::all(), h_holds)
}

/// The depth-`n` truncation: vertices inside `{0..n-1}`, faces of the first
/// `n` dimensions, same relations. Has `2^n + 2n` elements.
pub fn truncation(n: u32) -> Presentation {
    assert!(n > 0 && n < 63, "truncation depth out of range");
    let vertex_bound = 1u64 << n;
    let max_code = (2 * (vertex_bound - 1)).max(2 * (2 * (n as u64 - 1) + 1) + 1);
    let universe = Universe::new(Extent::MaxCode(max_code), move |c| {
        match HElement::from_code(c) {
            HElement::Vertex(m) => m < vertex_bound,
            HElement::Face(i, _) => i < n as u64,
        }
    });
    Presentation::new(h_signature(), universe, h_holds)
}

/// Brute-force enumeration of the automorphisms of the depth-`n`
/// truncation, as finite bijections on canonical codes.
pub fn enumerate_automorphisms_finite(
    n: u32,
    limit: u32,
    fuel: &mut Fuel,
) -> Result<Vec<Bijection>, StructureError> {
    if n == 0 || n > limit {
        return Err(StructureError::InvalidArgument(format!(
            "truncation depth {n} outside the brute-force limit 1..={limit}"
        )));
    }
    let trunc = truncation(n);
    let size = (1u64 << n) + 2 * n as u64;
    let fin = restrict_to_finite(&trunc, size, &SigPrefix::depth(n as u64), fuel)?;
    Ok(brute_force_isomorphisms(&fin, &fin))
}

/// Match a truncation automorphism against the reflection calculus: returns
/// the defining mask if the bijection acts as symmetric difference with it
/// everywhere, `None` otherwise.
pub fn match_to_h_x(map: &Bijection) -> Option<u64> {
    let empty = HElement::Vertex(0).code();
    let image = *map.get(&empty)?;
    let HElement::Vertex(x_mask) = HElement::from_code(image) else {
        return None;
    };
    for (&c, &img) in map {
        let expected = h_apply(x_mask, &HElement::from_code(c)).code();
        if img != expected {
            return None;
        }
    }
    Some(x_mask)
}

/// A computable permutation of the codes: rotate every length-`block`
/// interval `[k*block, (k+1)*block)` by `shift`. Used as reproducible
/// ground truth for scrambled copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockRotation {
    pub block: u64,
    pub shift: u64,
}

impl BlockRotation {
    pub fn new(block: u64, shift: u64) -> Result<Self, StructureError> {
        if block == 0 {
            return Err(StructureError::InvalidArgument(
                "block length must be positive".into(),
            ));
        }
        Ok(BlockRotation {
            block,
            shift: shift % block,
        })
    }

    /// The three rotations used as documented test permutations.
    pub fn standard() -> [BlockRotation; 3] {
        [
            BlockRotation { block: 5, shift: 2 },
            BlockRotation { block: 7, shift: 3 },
            BlockRotation { block: 16, shift: 5 },
        ]
    }

    pub fn apply(&self, c: Code) -> Code {
        let start = c - c % self.block;
        start + (c - start + self.shift) % self.block
    }

    pub fn invert(&self, c: Code) -> Code {
        let start = c - c % self.block;
        start + (c - start + self.block - self.shift) % self.block
    }

    pub fn as_iso(&self) -> LazyIso {
        let fwd = *self;
        let bwd = *self;
        LazyIso::from_bijection(move |c| fwd.apply(c), move |c| bwd.invert(c))
    }

    pub fn name(&self) -> String {
        format!("block:{}:{}", self.block, self.shift)
    }
}

/// The canonical copy with its codes scrambled by `perm`; `perm` is then the
/// (unique) isomorphism from the canonical copy sending the empty set to
/// `perm(0)`.
pub fn scrambled_copy(perm: BlockRotation) -> Presentation {
    Presentation::new(h_signature(), Universe::all(), move |sym, tuple| {
        h_holds(sym, &[perm.invert(tuple[0]), perm.invert(tuple[1])])
    })
}

/// What kind of element a code plays in a copy of the hypercube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementRole {
    VertexRole,
    FaceRole { dim: u64 },
}

/// Lazily extended cache of a universe's elements in increasing order.
struct UniverseCache {
    universe: Universe,
    elems: Vec<Code>,
    next_from: Option<Code>,
}

impl UniverseCache {
    fn new(universe: Universe) -> Self {
        UniverseCache {
            universe,
            elems: Vec::new(),
            next_from: Some(0),
        }
    }

    /// The `k`-th universe element, or `None` when the universe provably
    /// has fewer.
    fn get(&mut self, k: usize, fuel: &mut Fuel) -> Result<Option<Code>, StructureError> {
        while self.elems.len() <= k {
            let Some(from) = self.next_from else {
                return Ok(None);
            };
            match self.universe.scan_from(from, fuel)? {
                Some(c) => {
                    self.elems.push(c);
                    self.next_from = c.checked_add(1);
                }
                None => {
                    self.next_from = None;
                    return Ok(None);
                }
            }
        }
        Ok(Some(self.elems[k]))
    }
}

/// Stream of `(element position, dimension)` pairs ordered by
/// `position + weight(dimension)`, one pair per `next`. With weight `j`
/// this is the plain anti-diagonal order, good for faces whose witnesses
/// appear early; with weight `2^j` it reaches the deep witnesses of
/// `(j, 1)`-faces (position about `2^(j+1)`) after only about `j * 2^j`
/// pairs instead of `4^j`.
struct PairStream {
    exponential: bool,
    cost: u64,
    j: u64,
}

impl PairStream {
    fn new(exponential: bool) -> Self {
        PairStream {
            exponential,
            cost: 0,
            j: 0,
        }
    }

    fn weight(&self, j: u64) -> u64 {
        if self.exponential {
            1u64 << j.min(62)
        } else {
            j
        }
    }

    fn next(&mut self) -> (usize, u64) {
        loop {
            let j = self.j;
            let w = self.weight(j);
            if w <= self.cost {
                self.j += 1;
                return ((self.cost - w) as usize, j);
            }
            self.cost += 1;
            self.j = 0;
        }
    }
}

/// Classify an element of a promised copy by dovetailing two semi-decidable
/// searches: an outgoing `D_0`-edge exists only at vertices, an incoming
/// `D_j`-edge only at faces of dimension `j`. On a genuine copy exactly one
/// search halts; the shared fuel bounds both.
pub fn classify_element(
    copy: &Presentation,
    g: Code,
    fuel: &mut Fuel,
) -> Result<ElementRole, StructureError> {
    let mut cache = UniverseCache::new(copy.universe().clone());
    let d0 = d_sym(0);
    let mut shallow = PairStream::new(false);
    let mut deep = PairStream::new(true);
    let mut vertex_candidate = 0usize;
    loop {
        fuel.spend(1, "classifying an element")?;
        // Search (a): an outgoing D_0-edge from g.
        if let Some(y) = cache.get(vertex_candidate, fuel)? {
            vertex_candidate += 1;
            if copy.holds_fueled(d0, &[g, y], fuel)? {
                return Ok(ElementRole::VertexRole);
            }
        }
        // Search (b): an incoming D_j-edge into g, one candidate pair from
        // each of the two schedules.
        for stream in [&mut shallow, &mut deep] {
            let (m, j) = stream.next();
            if let Some(x) = cache.get(m, fuel)? {
                if copy.holds_fueled(d_sym(j), &[x, g], fuel)? {
                    return Ok(ElementRole::FaceRole { dim: j });
                }
            }
        }
    }
}

struct RecoverState {
    copy: Presentation,
    image_of_empty: Code,
    vertex_images: Mutex<BTreeMap<u64, Code>>,
    face_images: Mutex<BTreeMap<(u64, u8), Code>>,
    /// Reverse index over everything assigned so far, for injectivity.
    assigned: Mutex<BTreeMap<Code, HElement>>,
}

impl RecoverState {
    fn record(&self, z: HElement, image: Code) -> Result<(), StructureError> {
        let mut assigned = self.assigned.lock().unwrap();
        if let Some(prev) = assigned.get(&image) {
            if *prev != z {
                return Err(StructureError::invariant(format!(
                    "copy maps both {prev} and {z} to {image}; not a lawful copy"
                )));
            }
        }
        assigned.insert(image, z);
        Ok(())
    }

    /// First universe element y with `holds(sym, (from, y))`.
    fn unique_successor(
        &self,
        sym: SymbolId,
        from: Code,
        fuel: &mut Fuel,
    ) -> Result<Code, StructureError> {
        let mut c = 0;
        loop {
            match self.copy.universe().scan_from(c, fuel)? {
                Some(y) => {
                    if self.copy.holds_fueled(sym, &[from, y], fuel)? {
                        return Ok(y);
                    }
                    c = y + 1;
                }
                None => {
                    return Err(StructureError::invariant(format!(
                        "no successor under R{}.{} from {from}; not a lawful copy",
                        sym.family, sym.index
                    )))
                }
            }
        }
    }

    /// Image of the vertex with the given mask, walking edges for the
    /// elements of the set in increasing order and reusing memoized
    /// prefixes.
    fn vertex_image(&self, mask: u64, fuel: &mut Fuel) -> Result<Code, StructureError> {
        if mask == 0 {
            return Ok(self.image_of_empty);
        }
        if let Some(&img) = self.vertex_images.lock().unwrap().get(&mask) {
            return Ok(img);
        }
        // Strip the largest element: the prefix along the increasing walk.
        let top = 63 - mask.leading_zeros() as u64;
        let prefix = mask & !(1 << top);
        let prefix_img = self.vertex_image(prefix, fuel)?;
        let img = self.unique_successor(e_sym(top), prefix_img, fuel)?;
        self.record(HElement::Vertex(mask), img)?;
        self.vertex_images.lock().unwrap().insert(mask, img);
        Ok(img)
    }

    /// Image of the face `(i, a)`: the unique D_i-successor of the image of
    /// the empty set (for `a = 0`) or of the singleton `{i}` (for `a = 1`).
    fn face_image(&self, i: u64, a: u8, fuel: &mut Fuel) -> Result<Code, StructureError> {
        if let Some(&img) = self.face_images.lock().unwrap().get(&(i, a)) {
            return Ok(img);
        }
        let from = if a == 0 {
            self.vertex_image(0, fuel)?
        } else {
            if i >= MAX_DIM {
                return Err(StructureError::InvalidArgument(format!(
                    "dimension {i} beyond the mask range"
                )));
            }
            self.vertex_image(1 << i, fuel)?
        };
        let img = self.unique_successor(d_sym(i), from, fuel)?;
        self.record(HElement::Face(i, a), img)?;
        self.face_images.lock().unwrap().insert((i, a), img);
        Ok(img)
    }

    fn forward(&self, code: Code, fuel: &mut Fuel) -> Result<Code, StructureError> {
        match HElement::from_code(code) {
            HElement::Vertex(mask) => self.vertex_image(mask, fuel),
            HElement::Face(i, a) => self.face_image(i, a, fuel),
        }
    }

    fn backward(&self, image: Code, fuel: &mut Fuel) -> Result<Code, StructureError> {
        match classify_element(&self.copy, image, fuel)? {
            ElementRole::FaceRole { dim } => {
                for a in 0..2u8 {
                    if self.face_image(dim, a, fuel)? == image {
                        return Ok(HElement::Face(dim, a).code());
                    }
                }
                Err(StructureError::invariant(format!(
                    "{image} classified as a face of dimension {dim} but matches neither side"
                )))
            }
            ElementRole::VertexRole => {
                // Bit-probe the preimage: the copy has a D_i-edge from the
                // image to the image of face (i, 0) exactly when i is not in
                // the preimage set.
                let mut mask = 0u64;
                for i in 0..MAX_DIM {
                    let face0 = self.face_image(i, 0, fuel)?;
                    if !self.copy.holds_fueled(d_sym(i), &[image, face0], fuel)? {
                        mask |= 1 << i;
                    }
                }
                let check = self.vertex_image(mask, fuel)?;
                if check != image {
                    return Err(StructureError::invariant(format!(
                        "bit-probed preimage of {image} walks to {check}; not a lawful copy"
                    )));
                }
                Ok(HElement::Vertex(mask).code())
            }
        }
    }
}

/// Rebuild the isomorphism from the canonical copy to `copy` that sends the
/// empty set to `image_of_empty`. The given fuel pays for the eager check
/// that `image_of_empty` is a vertex; each later query carries its own.
pub fn recover_iso(
    copy: &Presentation,
    image_of_empty: Code,
    fuel: &mut Fuel,
) -> Result<LazyIso, StructureError> {
    if !copy.universe().contains(image_of_empty) {
        return Err(StructureError::NotInUniverse(image_of_empty));
    }
    match classify_element(copy, image_of_empty, fuel)? {
        ElementRole::VertexRole => {}
        ElementRole::FaceRole { dim } => {
            return Err(StructureError::invariant(format!(
                "image of the empty set classifies as a face of dimension {dim}"
            )))
        }
    }
    let state = Arc::new(RecoverState {
        copy: copy.clone(),
        image_of_empty,
        vertex_images: Mutex::new(BTreeMap::new()),
        face_images: Mutex::new(BTreeMap::new()),
        assigned: Mutex::new(BTreeMap::from([(
            image_of_empty,
            HElement::Vertex(0),
        )])),
    });
    let fwd_state = state.clone();
    let bwd_state = state;
    Ok(LazyIso::new(
        move |c, fuel| fwd_state.forward(c, fuel),
        move |c, fuel| bwd_state.backward(c, fuel),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn element_codes_are_bijective_on_a_prefix() {
        for code in 0..500u64 {
            assert_eq!(HElement::from_code(code).code(), code);
        }
        assert_eq!(HElement::Vertex(0).code(), 0);
        assert_eq!(HElement::Face(0, 0).code(), 1);
        assert_eq!(HElement::Face(0, 1).code(), 3);
        assert_eq!(HElement::vertex_of(&[0, 1]).code(), 6);
    }

    #[test]
    fn e_rel_examples() {
        let v = |elems: &[u64]| HElement::vertex_of(elems);
        assert!(h_e_rel(0, &v(&[1]), &v(&[0, 1])));
        assert!(h_e_rel(0, &v(&[0, 1]), &v(&[1])));
        assert!(!h_e_rel(1, &v(&[]), &v(&[0])));
        assert!(h_e_rel(0, &v(&[]), &v(&[0])));
        for mask in 0..16u64 {
            for i in 0..5 {
                assert!(!h_e_rel(i, &HElement::Vertex(mask), &HElement::Vertex(mask)));
            }
        }
        assert!(!h_e_rel(0, &v(&[]), &HElement::Face(0, 0)));
    }

    #[test]
    fn d_rel_examples() {
        let empty = HElement::Vertex(0);
        let zero = HElement::vertex_of(&[0]);
        assert!(h_d_rel(0, &empty, &HElement::Face(0, 0)));
        assert!(!h_d_rel(0, &zero, &HElement::Face(0, 0)));
        assert!(h_d_rel(0, &zero, &HElement::Face(0, 1)));
        for i in 0..5u64 {
            for j in 0..5u64 {
                if i != j {
                    for a in 0..2u8 {
                        assert!(!h_d_rel(i, &zero, &HElement::Face(j, a)));
                    }
                }
            }
        }
    }

    #[test]
    fn h_apply_examples() {
        // h with the empty set is the identity.
        for code in 0..100u64 {
            let z = HElement::from_code(code);
            assert_eq!(h_apply(0, &z), z);
        }
        let x = 1u64; // the set {0}
        assert_eq!(h_apply(x, &HElement::Vertex(0)), HElement::Vertex(1));
        assert_eq!(h_apply(x, &HElement::Face(0, 0)), HElement::Face(0, 1));
        assert_eq!(h_apply(x, &HElement::Face(1, 1)), HElement::Face(1, 1));
        // {1,2} applied to {2} gives {1}.
        assert_eq!(
            h_apply(0b110, &HElement::Vertex(0b100)),
            HElement::Vertex(0b010)
        );
    }

    #[test]
    fn compose_is_symmetric_difference() {
        // {1,2,4} xor {2,3} = {1,3,4}
        assert_eq!(h_compose(0b10110, 0b01100), 0b11010);
        for x in 0..32u64 {
            assert_eq!(h_compose(x, x), 0);
        }
    }

    #[test]
    fn composition_law_pointwise() {
        for x in 0..8u64 {
            for y in 0..8u64 {
                for code in 0..40u64 {
                    let z = HElement::from_code(code);
                    assert_eq!(
                        h_apply(x, &h_apply(y, &z)),
                        h_apply(h_compose(x, y), &z)
                    );
                }
            }
        }
    }

    #[test]
    fn h_x_preserves_relations() {
        let h = canonical();
        for x in [0u64, 1, 0b101, 0b110] {
            for c1 in 0..30u64 {
                for c2 in 0..30u64 {
                    for i in 0..4u64 {
                        let mapped1 = h_apply(x, &HElement::from_code(c1)).code();
                        let mapped2 = h_apply(x, &HElement::from_code(c2)).code();
                        assert_eq!(
                            h.holds(e_sym(i), &[c1, c2]),
                            h.holds(e_sym(i), &[mapped1, mapped2])
                        );
                        assert_eq!(
                            h.holds(d_sym(i), &[c1, c2]),
                            h.holds(d_sym(i), &[mapped1, mapped2])
                        );
                    }
                }
            }
        }
    }

    /// The depth-3 truncation matches the textbook 3-cube picture: 12
    /// undirected dimension edges, 24 face-pointer edges.
    #[test]
    fn depth_three_truncation_is_the_three_cube() {
        let trunc = truncation(3);
        let fin = restrict_to_finite(
            &trunc,
            14,
            &SigPrefix::depth(3),
            &mut Fuel::default(),
        )
        .unwrap();
        assert_eq!(fin.elements.len(), 14);

        let v = |elems: &[u64]| HElement::vertex_of(elems).code();
        let f = |i: u64, a: u8| HElement::Face(i, a).code();

        // Dimension edges of the 3-cube.
        let e_edges: Vec<(u64, Code, Code)> = vec![
            (0, v(&[]), v(&[0])),
            (1, v(&[]), v(&[1])),
            (2, v(&[]), v(&[2])),
            (1, v(&[0]), v(&[0, 1])),
            (2, v(&[0]), v(&[0, 2])),
            (0, v(&[1]), v(&[0, 1])),
            (2, v(&[1]), v(&[1, 2])),
            (0, v(&[2]), v(&[0, 2])),
            (1, v(&[2]), v(&[1, 2])),
            (2, v(&[0, 1]), v(&[0, 1, 2])),
            (1, v(&[0, 2]), v(&[0, 1, 2])),
            (0, v(&[1, 2]), v(&[0, 1, 2])),
        ];
        let mut expected: BTreeSet<(SymbolId, Vec<Code>)> = BTreeSet::new();
        for (i, a, b) in &e_edges {
            expected.insert((e_sym(*i), vec![*a, *b]));
            expected.insert((e_sym(*i), vec![*b, *a]));
        }
        // Every vertex points at its three faces.
        for mask in 0..8u64 {
            for i in 0..3u64 {
                let a = ((mask >> i) & 1) as u8;
                expected.insert((d_sym(i), vec![2 * mask, f(i, a)]));
            }
        }
        assert_eq!(fin.facts, expected);
    }

    #[test]
    fn automorphism_counts_at_small_depths() {
        let mut fuel = Fuel::new(10_000_000);
        for (n, expected) in [(1u32, 2usize), (2, 4), (3, 8)] {
            let autos = enumerate_automorphisms_finite(n, 4, &mut fuel).unwrap();
            assert_eq!(autos.len(), expected, "depth {n}");
            let mut masks = BTreeSet::new();
            for auto in &autos {
                let mask = match_to_h_x(auto).expect("every automorphism is a reflection");
                assert!(mask < 1 << n);
                masks.insert(mask);
            }
            assert_eq!(masks.len(), expected);
        }
        assert!(enumerate_automorphisms_finite(5, 4, &mut fuel).is_err());
    }

    #[test]
    fn classify_canonical_elements() {
        let h = canonical();
        let mut fuel = Fuel::default();
        let vertex = HElement::vertex_of(&[1, 2]).code();
        assert_eq!(
            classify_element(&h, vertex, &mut fuel).unwrap(),
            ElementRole::VertexRole
        );
        let face = HElement::Face(3, 1).code();
        assert_eq!(
            classify_element(&h, face, &mut fuel).unwrap(),
            ElementRole::FaceRole { dim: 3 }
        );
    }

    #[test]
    fn classify_scrambled_matches_ground_truth() {
        for perm in BlockRotation::standard() {
            let copy = scrambled_copy(perm);
            let mut fuel = Fuel::default();
            for code in 0..40u64 {
                let role = classify_element(&copy, perm.apply(code), &mut fuel).unwrap();
                match HElement::from_code(code) {
                    HElement::Vertex(_) => assert_eq!(role, ElementRole::VertexRole),
                    HElement::Face(i, _) => {
                        assert_eq!(role, ElementRole::FaceRole { dim: i })
                    }
                }
            }
        }
    }

    #[test]
    fn recover_identity_on_canonical() {
        let h = canonical();
        let iso = recover_iso(&h, 0, &mut Fuel::default()).unwrap();
        let mut fuel = Fuel::new(10_000_000);
        for code in 0..60u64 {
            assert_eq!(iso.apply(code, &mut fuel).unwrap(), code);
        }
        for code in 0..30u64 {
            assert_eq!(iso.inverse_apply(code, &mut fuel).unwrap(), code);
        }
    }

    #[test]
    fn recover_reflection_on_canonical() {
        let h = canonical();
        // Image of the empty set is the vertex {0}.
        let iso = recover_iso(&h, HElement::vertex_of(&[0]).code(), &mut Fuel::default()).unwrap();
        let mut fuel = Fuel::new(10_000_000);
        for code in 0..60u64 {
            let expected = h_apply(1, &HElement::from_code(code)).code();
            assert_eq!(iso.apply(code, &mut fuel).unwrap(), expected);
        }
    }

    #[test]
    fn recover_rejects_a_face_start() {
        let h = canonical();
        let err = recover_iso(&h, HElement::Face(0, 0).code(), &mut Fuel::default());
        assert!(matches!(err, Err(StructureError::InvariantViolation(_))));
    }

    #[test]
    fn recover_scrambled_copies() {
        for perm in BlockRotation::standard() {
            let copy = scrambled_copy(perm);
            let iso = recover_iso(&copy, perm.apply(0), &mut Fuel::default()).unwrap();
            let mut fuel = Fuel::new(100_000_000);
            for code in 0..60u64 {
                assert_eq!(
                    iso.apply(code, &mut fuel).unwrap(),
                    perm.apply(code),
                    "{} at {code}",
                    perm.name()
                );
            }
            for code in 0..40u64 {
                assert_eq!(
                    iso.inverse_apply(perm.apply(code), &mut fuel).unwrap(),
                    code
                );
            }
        }
    }
}
