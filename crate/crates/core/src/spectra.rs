//! Paired hypercube composites whose isomorphisms are exactly the
//! component isomorphisms in disguise.
//!
//! Given two uniformly computable families `A_i`, `B_i` with `A_i ≅ B_i`,
//! attach copies to the hypercube so that the two resulting composites `M`
//! and `N` agree on every face component but alternate `A_0`/`B_0` by
//! vertex parity, in opposite phase. Any isomorphism `M ≅ N` must reflect
//! the cube by some finite set `X`; reading off a single component of the
//! reflection recovers an `A_n ≅ B_n` isomorphism, and conversely any such
//! isomorphism lifts to the whole composite with only transports around it.

use serde::Serialize;
use std::sync::Arc;

use crate::composite::{
    base_code, component_code, compose, decode_composite, glue_iso, ComponentIsos,
    CompositePoint, CompositeStructure, UniformFamily,
};
use crate::error::StructureError;
use crate::finite::iso_preserves_on_truncation;
use crate::fuel::Fuel;
use crate::hypercube::{canonical, h_apply, HElement};
use crate::iso::LazyIso;
use crate::oracle::IsoOracle;
use crate::orders::{decode_x_from_iso, order_x, unique_iso_to_order_x, OrderSet};
use crate::pairing::{decode_pair, encode_pair, Code};
use crate::presentation::Presentation;
use crate::signature::{SigPrefix, Signature};

/// Which of the two families a component is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilySide {
    A,
    B,
}

/// The component selected at one hypercube element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentChoice {
    pub side: FamilySide,
    pub index: u64,
}

/// Component selection for the first composite: faces `(i, 0)` carry
/// `A_{i+1}`, faces `(i, 1)` carry `B_{i+1}`, even vertices `A_0`, odd
/// vertices `B_0`.
pub fn assignment_m(z: &HElement) -> ComponentChoice {
    match *z {
        HElement::Face(i, 0) => ComponentChoice {
            side: FamilySide::A,
            index: i + 1,
        },
        HElement::Face(i, _) => ComponentChoice {
            side: FamilySide::B,
            index: i + 1,
        },
        HElement::Vertex(mask) => ComponentChoice {
            side: if mask.count_ones() % 2 == 0 {
                FamilySide::A
            } else {
                FamilySide::B
            },
            index: 0,
        },
    }
}

/// Component selection for the second composite: identical on faces,
/// opposite vertex parity.
pub fn assignment_n(z: &HElement) -> ComponentChoice {
    match *z {
        HElement::Vertex(mask) => ComponentChoice {
            side: if mask.count_ones() % 2 == 0 {
                FamilySide::B
            } else {
                FamilySide::A
            },
            index: 0,
        },
        face => assignment_m(&face),
    }
}

/// Two uniformly computable families of copies, promised isomorphic
/// index by index, over a shared component signature.
#[derive(Clone)]
pub struct FamilyPair {
    a: Arc<dyn Fn(u64) -> Presentation + Send + Sync>,
    b: Arc<dyn Fn(u64) -> Presentation + Send + Sync>,
    component_signature: Signature,
}

impl FamilyPair {
    pub fn new(
        component_signature: Signature,
        a: impl Fn(u64) -> Presentation + Send + Sync + 'static,
        b: impl Fn(u64) -> Presentation + Send + Sync + 'static,
    ) -> Self {
        FamilyPair {
            a: Arc::new(a),
            b: Arc::new(b),
            component_signature,
        }
    }

    pub fn a(&self, i: u64) -> Presentation {
        (self.a)(i)
    }

    pub fn b(&self, i: u64) -> Presentation {
        (self.b)(i)
    }

    pub fn resolve(&self, choice: ComponentChoice) -> Presentation {
        match choice.side {
            FamilySide::A => self.a(choice.index),
            FamilySide::B => self.b(choice.index),
        }
    }

    pub fn component_signature(&self) -> &Signature {
        &self.component_signature
    }
}

/// Build the two composites over the canonical hypercube.
pub fn build_mn(
    fp: &FamilyPair,
) -> Result<(CompositeStructure, CompositeStructure), StructureError> {
    let base = canonical();
    let fp_m = fp.clone();
    let family_m = UniformFamily::new(
        fp.component_signature().clone(),
        |_| true,
        move |x| fp_m.resolve(assignment_m(&HElement::from_code(x))),
    );
    let fp_n = fp.clone();
    let family_n = UniformFamily::new(
        fp.component_signature().clone(),
        |_| true,
        move |x| fp_n.resolve(assignment_n(&HElement::from_code(x))),
    );
    let m = compose(&base, &family_m)?;
    let n = compose(&base, &family_n)?;
    Ok((m, n))
}

fn tag_checked(
    expected_tag: Code,
    t: Code,
) -> Result<Code, StructureError> {
    let (tag, a) = decode_pair(t);
    if tag != expected_tag {
        return Err(StructureError::TagMismatch {
            expected: expected_tag,
            found: tag,
        });
    }
    Ok(a)
}

/// Lift an `A_0 ≅ B_0` isomorphism to the whole composite: the base stays
/// put, faces ride the identity, vertex components route through the lifted
/// map (forwards on even vertices, backwards on odd ones, conjugated by the
/// tag transports). Evaluating one point costs at most one `theta` query.
pub fn lift_iso_base(theta: &LazyIso) -> LazyIso {
    let theta = theta.clone();
    let psi = ComponentIsos::new(move |x| match HElement::from_code(x) {
        HElement::Face(..) => LazyIso::identity(),
        HElement::Vertex(mask) => {
            let even = mask.count_ones() % 2 == 0;
            let th_f = theta.clone();
            let th_b = theta.clone();
            LazyIso::new(
                move |t, fuel| {
                    let a = tag_checked(x, t)?;
                    let b = if even {
                        th_f.apply(a, fuel)?
                    } else {
                        th_f.inverse_apply(a, fuel)?
                    };
                    Ok(encode_pair(x, b))
                },
                move |t, fuel| {
                    let b = tag_checked(x, t)?;
                    let a = if even {
                        th_b.inverse_apply(b, fuel)?
                    } else {
                        th_b.apply(b, fuel)?
                    };
                    Ok(encode_pair(x, a))
                },
            )
        }
    });
    glue_iso(&LazyIso::identity(), &psi)
}

/// Lift an `A_{i+1} ≅ B_{i+1}` isomorphism: the base reflects dimension
/// `i`, the two faces of that dimension exchange through the lifted map,
/// every other component rides a pure transport.
pub fn lift_iso_face(i: u64, theta: &LazyIso) -> LazyIso {
    let base_fwd = move |c: Code| h_apply(1 << i, &HElement::from_code(c)).code();
    let base = LazyIso::from_bijection(base_fwd, base_fwd);
    let theta = theta.clone();
    let psi = ComponentIsos::new(move |x| {
        let z = HElement::from_code(x);
        let image_tag = h_apply(1 << i, &z).code();
        match z {
            HElement::Face(j, a) if j == i => {
                let forward_side = a == 0;
                let th_f = theta.clone();
                let th_b = theta.clone();
                LazyIso::new(
                    move |t, fuel| {
                        let c = tag_checked(x, t)?;
                        let d = if forward_side {
                            th_f.apply(c, fuel)?
                        } else {
                            th_f.inverse_apply(c, fuel)?
                        };
                        Ok(encode_pair(image_tag, d))
                    },
                    move |t, fuel| {
                        let d = tag_checked(image_tag, t)?;
                        let c = if forward_side {
                            th_b.inverse_apply(d, fuel)?
                        } else {
                            th_b.apply(d, fuel)?
                        };
                        Ok(encode_pair(x, c))
                    },
                )
            }
            HElement::Face(..) => LazyIso::identity(),
            HElement::Vertex(_) => crate::presentation::transport_iso(x, image_tag),
        }
    });
    glue_iso(&base, &psi)
}

/// Read one component isomorphism back out of a promised `M ≅ N`
/// isomorphism: compute the reflection set from the image of the empty
/// vertex; an empty set exposes the `A_0 ≅ B_0` map at the empty vertex,
/// otherwise the least reflected dimension `i` exposes `A_{i+1} ≅ B_{i+1}`
/// across the `(i, 0)`/`(i, 1)` face pair. The returned map consults only
/// `rho`.
pub fn extract_component_iso(
    rho: &LazyIso,
    fuel: &mut Fuel,
) -> Result<(u64, LazyIso), StructureError> {
    let empty = HElement::Vertex(0).code();
    let image = rho.apply(base_code(empty), fuel)?;
    let x_mask = match decode_composite(image) {
        Some(CompositePoint::Base(h)) => match HElement::from_code(h) {
            HElement::Vertex(mask) => mask,
            face => {
                return Err(StructureError::invariant(format!(
                    "base empty vertex is mapped to the face {face}"
                )))
            }
        },
        _ => {
            return Err(StructureError::invariant(format!(
                "base empty vertex is mapped to non-base code {image}"
            )))
        }
    };
    let (index, src_tag) = if x_mask == 0 {
        (0, empty)
    } else {
        let i = x_mask.trailing_zeros() as u64;
        (i + 1, HElement::Face(i, 0).code())
    };
    let dst_tag = h_apply(x_mask, &HElement::from_code(src_tag)).code();
    let rho_f = rho.clone();
    let rho_b = rho.clone();
    let theta = LazyIso::new(
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
        move |b, fuel| {
            let pre = rho_b.inverse_apply(component_code(encode_pair(dst_tag, b)), fuel)?;
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
    );
    Ok((index, theta))
}

/// Configuration for the union-spectrum demonstration.
#[derive(Debug, Clone, Serialize)]
pub struct DemoConfig {
    /// Hypercube depth for truncation-level validation.
    pub depth: u64,
    /// Membership decoded for all `k <= decode_bound`.
    pub decode_bound: u64,
    /// Number of truncation elements per validation pass.
    pub truncation_bound: u64,
    /// Pointwise samples for the extraction round trip.
    pub samples: u64,
    /// Query budget per row.
    pub fuel_budget: u64,
}

impl Default for DemoConfig {
    fn default() -> Self {
        DemoConfig {
            depth: 2,
            decode_bound: 25,
            truncation_bound: 36,
            samples: 50,
            fuel_budget: crate::fuel::DEFAULT_FUEL,
        }
    }
}

/// One row of the demonstration report.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub index: u64,
    pub set_name: String,
    pub lift: String,
    pub validated: bool,
    pub extracted_index: u64,
    pub extraction_matches: bool,
    pub decode_matches: bool,
}

impl SpectrumRow {
    pub fn ok(&self) -> bool {
        self.validated && self.extraction_matches && self.decode_matches
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok())
    }
}

/// The family pair of the demonstration: every `A_i` is the standard order,
/// `B_i` encodes the `i`-th given set (cycling when `i` runs past the end).
pub fn demo_family_pair(sets: &[OrderSet]) -> FamilyPair {
    let k = sets.len();
    let bs: Vec<OrderSet> = sets.to_vec();
    FamilyPair::new(
        crate::zoo::omega_order().signature().clone(),
        |_| crate::zoo::omega_order(),
        move |i| order_x(&bs[(i as usize) % k].enumeration),
    )
}

/// Run one demonstration row: lift the unique order isomorphism for the
/// `n`-th set (base lift for row 0, face lift at dimension `n-1` otherwise),
/// validate it on a truncation of the composites, extract the component
/// isomorphism back and re-decode the set through it.
pub fn demo_row(
    sets: &[OrderSet],
    m: &CompositeStructure,
    n_struct: &CompositeStructure,
    cfg: &DemoConfig,
    row: u64,
) -> Result<SpectrumRow, StructureError> {
    let set = &sets[row as usize];
    set.enumeration.check_injective_prefix(cfg.decode_bound + 1)?;
    let oracle = set.oracle();
    let theta = unique_iso_to_order_x(&oracle, &set.enumeration);
    let (lift_name, rho) = if row == 0 {
        ("base".to_string(), lift_iso_base(&theta))
    } else {
        (format!("face({})", row - 1), lift_iso_face(row - 1, &theta))
    };

    let mut fuel = Fuel::new(cfg.fuel_budget);
    let validated = iso_preserves_on_truncation(
        &rho,
        m.combined(),
        n_struct.combined(),
        cfg.truncation_bound,
        &SigPrefix::depth(cfg.depth),
        &mut fuel,
    )?;

    let (extracted_index, extracted) = extract_component_iso(&rho, &mut fuel)?;
    let mut extraction_matches = extracted_index == row;
    if extraction_matches {
        for s in 0..cfg.samples {
            if extracted.apply(s, &mut fuel)? != theta.apply(s, &mut fuel)? {
                extraction_matches = false;
                break;
            }
        }
    }

    let f_oracle = IsoOracle::new(extracted);
    let mut decode_matches = true;
    for k in 0..=cfg.decode_bound {
        if decode_x_from_iso(&f_oracle, k, &mut fuel)? != set.contains(k) {
            decode_matches = false;
            break;
        }
    }

    Ok(SpectrumRow {
        index: row,
        set_name: set.name.clone(),
        lift: lift_name,
        validated,
        extracted_index,
        extraction_matches,
        decode_matches,
    })
}

/// The full demonstration: one row per given set.
pub fn union_spectrum_demo(
    sets: &[OrderSet],
    cfg: &DemoConfig,
) -> Result<SpectrumReport, StructureError> {
    if sets.is_empty() {
        return Err(StructureError::InvalidArgument(
            "the demonstration needs at least one set".into(),
        ));
    }
    for (i, s1) in sets.iter().enumerate() {
        for s2 in &sets[i + 1..] {
            let distinct = (0..100).any(|v| s1.contains(v) != s2.contains(v));
            if !distinct {
                return Err(StructureError::InvalidArgument(format!(
                    "sets {} and {} agree on 0..100; expected pairwise distinct sets",
                    s1.name, s2.name
                )));
            }
        }
    }
    let fp = demo_family_pair(sets);
    let (m, n) = build_mn(&fp)?;
    let mut rows = Vec::new();
    for row in 0..sets.len() as u64 {
        rows.push(demo_row(sets, &m, &n, cfg, row)?);
    }
    Ok(SpectrumReport { rows })
}
