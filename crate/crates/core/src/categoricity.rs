//! Uniformization: trading one isomorphism of hypercube composites for a
//! uniform family of component isomorphisms, and back.
//!
//! Attach a copy of `A` to every hypercube element; on the other side
//! attach `C_0` to every vertex and `C_{i+1}` to both faces of dimension
//! `i`. An isomorphism between the two composites then hands out an
//! `A ≅ C_i` isomorphism for every `i` at once — read the vertex component
//! for `i = 0` and the `(i, 0)`-face component for `i + 1` — and a uniform
//! family of component isomorphisms assembles back into one composite
//! isomorphism that fixes every base point.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::composite::{base_code, component_code, decode_composite, CompositePoint};
use crate::error::StructureError;
use crate::fuel::Fuel;
use crate::hypercube::{h_apply, HElement};
use crate::iso::LazyIso;
use crate::pairing::encode_pair;

/// The index a hypercube element selects in a uniformly listed collection:
/// 0 for every vertex, `i + 1` for both faces of dimension `i`.
pub fn alpha_index(z: &HElement) -> u64 {
    match *z {
        HElement::Vertex(_) => 0,
        HElement::Face(i, _) => i + 1,
    }
}

/// A fixed computable listing of the hypercube elements: the `k`-th vertex
/// in code order sits at `2k`, the `k`-th face at `2k + 1`. With the
/// canonical element coding this is exactly code order.
pub fn eta(n: u64) -> HElement {
    HElement::from_code(n)
}

pub fn eta_inv(z: &HElement) -> u64 {
    z.code()
}

/// The family of component isomorphisms produced by [`uniformize`]:
/// `map(i)` is an isomorphism from `A` onto `C_i`, evaluated with `rho`
/// queries only.
pub struct Uniformization {
    /// The reflection set of the underlying composite isomorphism.
    pub base_mask: u64,
    rho: LazyIso,
}

impl Uniformization {
    /// The component isomorphism at index `i`.
    pub fn map(&self, i: u64) -> LazyIso {
        let (src_tag, dst_tag) = if i == 0 {
            let empty = HElement::Vertex(0);
            (empty.code(), h_apply(self.base_mask, &empty).code())
        } else {
            let face = HElement::Face(i - 1, 0);
            (face.code(), h_apply(self.base_mask, &face).code())
        };
        let rho_f = self.rho.clone();
        let rho_b = self.rho.clone();
        LazyIso::new(
            move |a, fuel| {
                let image = rho_f.apply(component_code(encode_pair(src_tag, a)), fuel)?;
                match decode_composite(image) {
                    Some(CompositePoint::Component { index, element }) if index == dst_tag => {
                        Ok(element)
                    }
                    _ => Err(StructureError::TagMismatch {
                        expected: dst_tag,
                        found: image,
                    }),
                }
            },
            move |c, fuel| {
                let pre = rho_b.inverse_apply(component_code(encode_pair(dst_tag, c)), fuel)?;
                match decode_composite(pre) {
                    Some(CompositePoint::Component { index, element }) if index == src_tag => {
                        Ok(element)
                    }
                    _ => Err(StructureError::TagMismatch {
                        expected: src_tag,
                        found: pre,
                    }),
                }
            },
        )
    }
}

/// Turn a promised isomorphism from the everywhere-`A` composite onto the
/// index-selected composite into the uniform family of component
/// isomorphisms it contains.
pub fn uniformize(rho: &LazyIso, fuel: &mut Fuel) -> Result<Uniformization, StructureError> {
    let empty = HElement::Vertex(0).code();
    let image = rho.apply(base_code(empty), fuel)?;
    let base_mask = match decode_composite(image) {
        Some(CompositePoint::Base(h)) => match HElement::from_code(h) {
            HElement::Vertex(mask) => mask,
            face => {
                return Err(StructureError::invariant(format!(
                    "the empty vertex is mapped to the face {face}"
                )))
            }
        },
        _ => {
            return Err(StructureError::invariant(format!(
                "the empty vertex is mapped to non-base code {image}"
            )))
        }
    };
    Ok(Uniformization {
        base_mask,
        rho: rho.clone(),
    })
}

/// Assemble a uniform family `h` — where `h(j)` maps `A` onto the component
/// attached at the `j`-th listed hypercube element — into one composite
/// isomorphism that fixes every base point.
pub fn deuniformize(h: impl Fn(u64) -> LazyIso + Send + Sync + 'static) -> LazyIso {
    let cache: Arc<Mutex<BTreeMap<u64, LazyIso>>> = Arc::new(Mutex::new(BTreeMap::new()));
    let h = Arc::new(h);
    let at = move |j: u64| -> LazyIso {
        let mut cache = cache.lock().unwrap();
        cache.entry(j).or_insert_with(|| h(j)).clone()
    };
    let at_b = at.clone();
    LazyIso::new(
        move |c, fuel| match decode_composite(c) {
            Some(CompositePoint::Base(_)) => Ok(c),
            Some(CompositePoint::Component { index: z, element }) => {
                let j = eta_inv(&HElement::from_code(z));
                let image = at(j).apply(element, fuel)?;
                Ok(component_code(encode_pair(z, image)))
            }
            None => Err(StructureError::NotInUniverse(c)),
        },
        move |c, fuel| match decode_composite(c) {
            Some(CompositePoint::Base(_)) => Ok(c),
            Some(CompositePoint::Component { index: z, element }) => {
                let j = eta_inv(&HElement::from_code(z));
                let pre = at_b(j).inverse_apply(element, fuel)?;
                Ok(component_code(encode_pair(z, pre)))
            }
            None => Err(StructureError::NotInUniverse(c)),
        },
    )
}
