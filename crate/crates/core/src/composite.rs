//! Composition of a base structure with a uniformly computable family of
//! component copies, and the glue/split calculus of isomorphisms between
//! composites.
//!
//! A composite attaches the component `A_x` to every base point `x` through
//! a directed edge relation `mu`: every element has exactly one outgoing
//! `mu`-edge, landing on a base point, and base points are exactly the
//! `mu`-self-looped elements. No relation crosses component boundaries, so
//! an isomorphism between composites is precisely a base isomorphism glued
//! with one component isomorphism per base point.
//!
//! Universe coding: base point `x` becomes `pair(0, x)`; the element of the
//! component at `x` with tagged code `t = pair(x, a)` becomes `pair(1, t)`.
//! Signature layout: family 0 is `mu`, base families follow shifted by one,
//! component families follow the base families.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::brute::{brute_force_isomorphisms, Bijection};
use crate::error::StructureError;
use crate::finite::restrict_to_finite;
use crate::fuel::Fuel;
use crate::iso::LazyIso;
use crate::pairing::{decode_pair, encode_pair, Code};
use crate::presentation::{Extent, Presentation, TaggedCopy, Universe};
use crate::signature::{CompositeLayout, SigPrefix, Signature, SymbolFamily, SymbolId};

/// The attachment edge: always family 0, index 0 in a composite signature.
pub fn mu_sym() -> SymbolId {
    SymbolId::new(0, 0)
}

/// A uniformly computable family of component copies indexed by base codes.
/// The member at `x` is tagged with `x`, which keeps distinct members'
/// universes disjoint.
#[derive(Clone)]
pub struct UniformFamily {
    index_contains: Arc<dyn Fn(Code) -> bool + Send + Sync>,
    member: Arc<dyn Fn(Code) -> TaggedCopy + Send + Sync>,
    component_signature: Signature,
}

impl UniformFamily {
    /// Family whose member at `x` is `inner(x)` tagged with `x`. All members
    /// must share `component_signature`.
    pub fn new(
        component_signature: Signature,
        index_contains: impl Fn(Code) -> bool + Send + Sync + 'static,
        inner: impl Fn(Code) -> Presentation + Send + Sync + 'static,
    ) -> Self {
        UniformFamily {
            index_contains: Arc::new(index_contains),
            member: Arc::new(move |x| TaggedCopy::new(x, inner(x))),
            component_signature,
        }
    }

    pub fn index_contains(&self, x: Code) -> bool {
        (self.index_contains)(x)
    }

    pub fn member(&self, x: Code) -> TaggedCopy {
        (self.member)(x)
    }

    pub fn component_signature(&self) -> &Signature {
        &self.component_signature
    }
}

/// Where a composite code lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositePoint {
    Base(Code),
    /// Component element: which base index, and the inner (untagged) code.
    Component { index: Code, element: Code },
}

/// A base structure composed with a family of components.
#[derive(Clone)]
pub struct CompositeStructure {
    base: Presentation,
    family: UniformFamily,
    combined: Presentation,
    layout: CompositeLayout,
}

/// Code of the base point `x` inside a composite.
pub fn base_code(x: Code) -> Code {
    encode_pair(0, x)
}

/// Code of the component element with tagged code `t = pair(x, a)`.
pub fn component_code(tagged: Code) -> Code {
    encode_pair(1, tagged)
}

/// Decode a composite code into its side, without universe checks.
pub fn decode_composite(c: Code) -> Option<CompositePoint> {
    let (side, rest) = decode_pair(c);
    match side {
        0 => Some(CompositePoint::Base(rest)),
        1 => {
            let (index, element) = decode_pair(rest);
            Some(CompositePoint::Component { index, element })
        }
        _ => None,
    }
}

impl CompositeStructure {
    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn family(&self) -> &UniformFamily {
        &self.family
    }

    pub fn combined(&self) -> &Presentation {
        &self.combined
    }

    pub fn layout(&self) -> CompositeLayout {
        self.layout
    }

    /// Combined symbol for a base symbol.
    pub fn base_symbol(&self, sym: SymbolId) -> SymbolId {
        SymbolId::new(sym.family + 1, sym.index)
    }

    /// Combined symbol for a component symbol.
    pub fn component_symbol(&self, sym: SymbolId) -> SymbolId {
        SymbolId::new(sym.family + 1 + self.layout.base_families, sym.index)
    }

    /// The unique mu-target of `z`: `z` itself for base points, the owning
    /// base point for component elements.
    pub fn mu_target(&self, z: Code) -> Result<Code, StructureError> {
        if !self.combined.universe().contains(z) {
            return Err(StructureError::NotInUniverse(z));
        }
        match decode_composite(z) {
            Some(CompositePoint::Base(_)) => Ok(z),
            Some(CompositePoint::Component { index, .. }) => Ok(base_code(index)),
            None => Err(StructureError::NotInUniverse(z)),
        }
    }
}

impl std::fmt::Debug for CompositeStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CompositeStructure")
            .field("layout", &self.layout)
            .field("combined", &self.combined)
            .finish()
    }
}

/// Compute the extent of the combined universe. Finite bases with finite
/// members give a finite composite; anything else is infinite or unknown.
fn combined_extent(base: &Presentation, family: &UniformFamily) -> Extent {
    match base.universe().extent() {
        Extent::Infinite => Extent::Infinite,
        Extent::Unknown => Extent::Unknown,
        Extent::MaxCode(max_base) => {
            if max_base > 100_000 {
                return Extent::Unknown;
            }
            let mut max_code = 0u64;
            let mut saw_unknown = false;
            for x in 0..=max_base {
                if !base.universe().contains(x) {
                    continue;
                }
                max_code = max_code.max(base_code(x));
                let member = family.member(x);
                match member.inner.universe().extent() {
                    Extent::Infinite => return Extent::Infinite,
                    Extent::Unknown => saw_unknown = true,
                    Extent::MaxCode(m) => {
                        max_code = max_code.max(component_code(encode_pair(x, m)));
                    }
                }
            }
            if saw_unknown {
                Extent::Unknown
            } else {
                Extent::MaxCode(max_code)
            }
        }
    }
}

/// Compose a base with a family indexed exactly by its universe.
///
/// The family's index predicate is validated against the base universe on a
/// sample of codes; a disagreement is reported immediately.
pub fn compose(
    base: &Presentation,
    family: &UniformFamily,
) -> Result<CompositeStructure, StructureError> {
    // Sampled agreement check between index predicate and base universe.
    let mut sample: Vec<Code> = (0..16).collect();
    if let Extent::MaxCode(m) = base.universe().extent() {
        if m <= 1000 {
            sample.extend(16..=m.saturating_add(2));
        }
    }
    for x in sample {
        if family.index_contains(x) != base.universe().contains(x) {
            return Err(StructureError::invariant(format!(
                "family index predicate disagrees with the base universe at {x}"
            )));
        }
    }

    let base_families = base.signature().families().len() as u32;
    let component_families = family.component_signature().families().len() as u32;
    let layout = CompositeLayout {
        base_families,
        component_families,
    };
    let mut families = vec![SymbolFamily::finite("mu", 2, 1, true)];
    families.extend_from_slice(base.signature().families());
    families.extend_from_slice(family.component_signature().families());
    let signature = Signature::with_layout(families, layout);

    let extent = combined_extent(base, family);
    let base_universe = base.universe().clone();
    let contains_family = family.clone();
    let universe = Universe::new(extent, move |c| match decode_composite(c) {
        Some(CompositePoint::Base(x)) => base_universe.contains(x),
        Some(CompositePoint::Component { index, element }) => {
            base_universe.contains(index)
                && contains_family.index_contains(index)
                && contains_family
                    .member(index)
                    .inner
                    .universe()
                    .contains(element)
        }
        None => false,
    });

    let holds_base = base.clone();
    let holds_family = family.clone();
    let holds = move |sym: SymbolId, tuple: &[Code]| -> bool {
        // Tuples are already inside the combined universe here.
        if sym == mu_sym() {
            let (u, v) = (tuple[0], tuple[1]);
            let Some(CompositePoint::Base(_)) = decode_composite(v) else {
                return false;
            };
            return match decode_composite(u) {
                Some(CompositePoint::Base(_)) => u == v,
                Some(CompositePoint::Component { index, .. }) => base_code(index) == v,
                None => false,
            };
        }
        if sym.family >= 1 && sym.family < 1 + base_families {
            let inner_sym = SymbolId::new(sym.family - 1, sym.index);
            let mut xs = Vec::with_capacity(tuple.len());
            for &c in tuple {
                match decode_composite(c) {
                    Some(CompositePoint::Base(x)) => xs.push(x),
                    _ => return false,
                }
            }
            return holds_base.holds(inner_sym, &xs);
        }
        if sym.family >= 1 + base_families {
            let inner_sym = SymbolId::new(sym.family - 1 - base_families, sym.index);
            let mut owner: Option<Code> = None;
            let mut inner = Vec::with_capacity(tuple.len());
            for &c in tuple {
                match decode_composite(c) {
                    Some(CompositePoint::Component { index, element }) => {
                        match owner {
                            None => owner = Some(index),
                            // No relation crosses component boundaries.
                            Some(prev) if prev != index => return false,
                            _ => {}
                        }
                        inner.push(element);
                    }
                    _ => return false,
                }
            }
            return match owner {
                Some(x) => holds_family.member(x).inner.holds(inner_sym, &inner),
                None => false,
            };
        }
        false
    };

    let combined = Presentation::new(signature, universe, holds);
    Ok(CompositeStructure {
        base: base.clone(),
        family: family.clone(),
        combined,
        layout,
    })
}

/// First-hit search for the mu-target of `z` in an arbitrary promised
/// composite, scanning the universe for a point `g` with `mu(z, g)`.
pub fn mu_target_search(
    p: &Presentation,
    z: Code,
    fuel: &mut Fuel,
) -> Result<Code, StructureError> {
    let mut from = 0;
    loop {
        match p.universe().scan_from(from, fuel)? {
            Some(g) => {
                if p.holds_fueled(mu_sym(), &[z, g], fuel)? {
                    return Ok(g);
                }
                from = g + 1;
            }
            None => {
                return Err(StructureError::invariant(format!(
                    "{z} has no outgoing mu-edge; not a composite"
                )))
            }
        }
    }
}

/// The base-and-components view of a promised composite copy, with the
/// copy's own codes.
pub struct Decomposition {
    source: Presentation,
    pub base: Presentation,
    component_signature: Signature,
    component_shift: u32,
}

impl Decomposition {
    /// The component substructure attached to the base point `g`: universe
    /// `{ b : mu(b, g) and b != g }`, relations inherited.
    pub fn member(&self, g: Code) -> Presentation {
        let p = self.source.clone();
        let extent = match self.source.universe().extent() {
            Extent::MaxCode(m) => Extent::MaxCode(m),
            _ => Extent::Unknown,
        };
        let universe_p = self.source.clone();
        let universe = Universe::new(extent, move |b| {
            b != g && universe_p.holds(mu_sym(), &[b, g])
        });
        let shift = self.component_shift;
        Presentation::new(self.component_signature.clone(), universe, move |sym, t| {
            p.holds(SymbolId::new(sym.family + shift, sym.index), t)
        })
    }

    /// Check the composite invariant at `z`: exactly one outgoing mu-edge,
    /// landing on a base point. Scans until the universe or the fuel is
    /// exhausted; two hits are an invariant violation, zero hits within a
    /// provably finite universe likewise.
    pub fn verify_element(&self, z: Code, fuel: &mut Fuel) -> Result<Code, StructureError> {
        let mut found: Option<Code> = None;
        let mut from = 0;
        loop {
            let next = match self.source.universe().scan_from(from, fuel) {
                Ok(next) => next,
                Err(e) => match found {
                    // One target found and the budget spent looking for a
                    // second: accept under the composite promise.
                    Some(g) => return Ok(g),
                    None => return Err(e),
                },
            };
            match next {
                Some(g) => {
                    if self.source.holds_fueled(mu_sym(), &[z, g], fuel)? {
                        if !self.base.universe().contains(g) {
                            return Err(StructureError::invariant(format!(
                                "mu-target {g} of {z} is not a base point"
                            )));
                        }
                        if let Some(prev) = found {
                            return Err(StructureError::invariant(format!(
                                "{z} has two outgoing mu-edges, to {prev} and {g}"
                            )));
                        }
                        found = Some(g);
                    }
                    from = g + 1;
                }
                None => {
                    return found.ok_or_else(|| {
                        StructureError::invariant(format!("{z} has no outgoing mu-edge"))
                    })
                }
            }
        }
    }
}

/// Split a promised composite copy back into its base (the mu-self-looped
/// points) and the attached component substructures.
pub fn decompose(p: &Presentation) -> Result<Decomposition, StructureError> {
    let layout = p.signature().composite_layout().ok_or_else(|| {
        StructureError::InvalidArgument(
            "presentation signature carries no composite layout (no mu family)".into(),
        )
    })?;
    let all = p.signature().families();
    let base_families =
        all[1..(1 + layout.base_families) as usize].to_vec();
    let component_families = all[(1 + layout.base_families) as usize..].to_vec();
    let base_signature = Signature::new(base_families);
    let component_signature = Signature::new(component_families);

    let extent = match p.universe().extent() {
        Extent::MaxCode(m) => Extent::MaxCode(m),
        _ => Extent::Unknown,
    };
    let self_loop_p = p.clone();
    let base_universe = Universe::new(extent, move |x| self_loop_p.holds(mu_sym(), &[x, x]));
    let holds_p = p.clone();
    let base = Presentation::new(base_signature, base_universe, move |sym, t| {
        holds_p.holds(SymbolId::new(sym.family + 1, sym.index), t)
    });
    Ok(Decomposition {
        source: p.clone(),
        base,
        component_signature,
        component_shift: 1 + layout.base_families,
    })
}

/// A family of component isomorphisms, one per base point, built on demand
/// and cached.
#[derive(Clone)]
pub struct ComponentIsos {
    inner: Arc<ComponentIsosInner>,
}

struct ComponentIsosInner {
    make: Box<dyn Fn(Code) -> LazyIso + Send + Sync>,
    cache: Mutex<BTreeMap<Code, LazyIso>>,
}

impl ComponentIsos {
    pub fn new(make: impl Fn(Code) -> LazyIso + Send + Sync + 'static) -> Self {
        ComponentIsos {
            inner: Arc::new(ComponentIsosInner {
                make: Box::new(make),
                cache: Mutex::new(BTreeMap::new()),
            }),
        }
    }

    pub fn identity() -> Self {
        ComponentIsos::new(|_| LazyIso::identity())
    }

    pub fn at(&self, x: Code) -> LazyIso {
        let mut cache = self.inner.cache.lock().unwrap();
        cache
            .entry(x)
            .or_insert_with(|| (self.inner.make)(x))
            .clone()
    }
}

/// Glue a base isomorphism with per-base-point component isomorphisms into
/// one map on composite codes. `psi.at(x)` must send the member at `x` of
/// the first composite onto the member at `theta(x)` of the second; the
/// codomain tag is checked on every query.
pub fn glue_iso(theta: &LazyIso, psi: &ComponentIsos) -> LazyIso {
    let theta_f = theta.clone();
    let psi_f = psi.clone();
    let theta_b = theta.clone();
    let psi_b = psi.clone();
    LazyIso::new(
        move |c, fuel| match decode_composite(c) {
            Some(CompositePoint::Base(x)) => Ok(base_code(theta_f.apply(x, fuel)?)),
            Some(CompositePoint::Component { index, element }) => {
                let expected = theta_f.apply(index, fuel)?;
                let tagged = encode_pair(index, element);
                let image = psi_f.at(index).apply(tagged, fuel)?;
                let (tag, _) = decode_pair(image);
                if tag != expected {
                    return Err(StructureError::TagMismatch {
                        expected,
                        found: tag,
                    });
                }
                Ok(component_code(image))
            }
            None => Err(StructureError::NotInUniverse(c)),
        },
        move |c, fuel| match decode_composite(c) {
            Some(CompositePoint::Base(y)) => Ok(base_code(theta_b.inverse_apply(y, fuel)?)),
            Some(CompositePoint::Component { index: y, element }) => {
                let x = theta_b.inverse_apply(y, fuel)?;
                let tagged = encode_pair(y, element);
                let pre = psi_b.at(x).inverse_apply(tagged, fuel)?;
                let (tag, _) = decode_pair(pre);
                if tag != x {
                    return Err(StructureError::TagMismatch {
                        expected: x,
                        found: tag,
                    });
                }
                Ok(component_code(pre))
            }
            None => Err(StructureError::NotInUniverse(c)),
        },
    )
}

/// Split a promised composite isomorphism into its base restriction and its
/// per-component restrictions. Violations (a base point mapped off the base,
/// a component element mapped off its target component) surface lazily on
/// the offending query.
pub fn split_iso(
    rho: &LazyIso,
    c1: &CompositeStructure,
    c2: &CompositeStructure,
) -> (LazyIso, ComponentIsos) {
    let rho_tf = rho.clone();
    let c2_tf = c2.combined().clone();
    let rho_tb = rho.clone();
    let c1_tb = c1.combined().clone();
    let theta = LazyIso::new(
        move |x, fuel| {
            let image = rho_tf.apply(base_code(x), fuel)?;
            match decode_composite(image) {
                Some(CompositePoint::Base(y)) if c2_tf.universe().contains(image) => Ok(y),
                _ => Err(StructureError::invariant(format!(
                    "base point {x} is mapped to non-base code {image}"
                ))),
            }
        },
        move |y, fuel| {
            let pre = rho_tb.inverse_apply(base_code(y), fuel)?;
            match decode_composite(pre) {
                Some(CompositePoint::Base(x)) if c1_tb.universe().contains(pre) => Ok(x),
                _ => Err(StructureError::invariant(format!(
                    "base point {y} is pulled back to non-base code {pre}"
                ))),
            }
        },
    );
    let rho_p = rho.clone();
    let psi = ComponentIsos::new(move |x| {
        let rho_f = rho_p.clone();
        let rho_b = rho_p.clone();
        LazyIso::new(
            move |tagged, fuel| {
                let (tag, _) = decode_pair(tagged);
                if tag != x {
                    return Err(StructureError::TagMismatch {
                        expected: x,
                        found: tag,
                    });
                }
                let image = rho_f.apply(component_code(tagged), fuel)?;
                match decode_composite(image) {
                    Some(CompositePoint::Component { index, element }) => {
                        Ok(encode_pair(index, element))
                    }
                    _ => Err(StructureError::invariant(format!(
                        "component element {tagged} is mapped to non-component code {image}"
                    ))),
                }
            },
            move |tagged, fuel| {
                let pre = rho_b.inverse_apply(component_code(tagged), fuel)?;
                match decode_composite(pre) {
                    Some(CompositePoint::Component { index, element }) if index == x => {
                        Ok(encode_pair(index, element))
                    }
                    _ => Err(StructureError::invariant(format!(
                        "component element {tagged} is pulled back outside the member at {x}"
                    ))),
                }
            },
        )
    });
    (theta, psi)
}

/// The directed path of `components.len()` structures: base points
/// `0, ..., n-1` with edges `(k, k+1)`, the `k`-th component attached at
/// `k`.
pub fn build_path_composite(
    components: Vec<Presentation>,
) -> Result<CompositeStructure, StructureError> {
    if components.is_empty() {
        return Err(StructureError::InvalidArgument(
            "a path composite needs at least one component".into(),
        ));
    }
    let n = components.len() as u64;
    let edges: Vec<(Code, Code)> = (0..n.saturating_sub(1)).map(|k| (k, k + 1)).collect();
    let base = crate::zoo::finite_digraph(n, &edges);
    let signature = components[0].signature().clone();
    let family = UniformFamily::new(
        signature,
        move |x| x < n,
        move |x| components[x as usize].clone(),
    );
    compose(&base, &family)
}

/// All isomorphisms between two finite composites obtained by gluing a base
/// isomorphism with componentwise isomorphisms, as finite bijections on the
/// combined codes. This is the structured route; the unstructured route is
/// `brute_force_isomorphisms` on the combined truncations.
pub fn enumerate_glued_isomorphisms(
    c1: &CompositeStructure,
    c2: &CompositeStructure,
    fuel: &mut Fuel,
) -> Result<Vec<Bijection>, StructureError> {
    let prefix = SigPrefix::finite_only();
    let b1 = restrict_to_finite(c1.base(), 10_000, &prefix, fuel)?;
    let b2 = restrict_to_finite(c2.base(), 10_000, &prefix, fuel)?;
    let base_isos = brute_force_isomorphisms(&b1, &b2);
    let mut out = Vec::new();
    for theta in base_isos {
        // Componentwise isomorphism lists, one per base point.
        let mut per_point: Vec<(Code, Code, Vec<Bijection>)> = Vec::new();
        let mut feasible = true;
        for (&x, &y) in &theta {
            let m1 = restrict_to_finite(&c1.family().member(x).presentation(), 10_000, &prefix, fuel)?;
            let m2 = restrict_to_finite(&c2.family().member(y).presentation(), 10_000, &prefix, fuel)?;
            let isos = brute_force_isomorphisms(&m1, &m2);
            if isos.is_empty() {
                feasible = false;
                break;
            }
            per_point.push((x, y, isos));
        }
        if !feasible {
            continue;
        }
        // Odometer over the choices.
        let mut choice = vec![0usize; per_point.len()];
        loop {
            let mut map: Bijection = theta
                .iter()
                .map(|(&x, &y)| (base_code(x), base_code(y)))
                .collect();
            for (slot, (_, _, isos)) in per_point.iter().enumerate() {
                for (&t, &t2) in &isos[choice[slot]] {
                    map.insert(component_code(t), component_code(t2));
                }
            }
            out.push(map);
            let mut pos = per_point.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < per_point[pos].2.len() {
                    break;
                }
                choice[pos] = 0;
            }
            if choice.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    out.sort_by_key(|m| m.values().copied().collect::<Vec<_>>());
    Ok(out)
}
