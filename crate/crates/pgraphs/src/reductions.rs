//! Order homomorphisms between cones and bounded-depth verification of the
//! reduction and strong-reduction properties, plus the constructors that
//! build homs out of smaller ones (composition, products, free products,
//! and the natural map onto a wreath product).

use crate::cones::{Cone, Element};
use crate::report::Report;
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Verification mode for [`check_reduction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Every [1,p] maps bijectively onto [1, φ(p)].
    Reduction,
    /// Additionally injective on P with every codomain positive hit.
    Strong,
    /// Cross-check the equivalent reduction criteria against the definition.
    Criteria,
}

/// Registered partial inverse on positives.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Decoder {
    /// Codomain is a wreath cone; decode back to the free-product domain.
    Wreath,
}

/// An order homomorphism φ: (G,P) → (H,Q), stored by its images on the
/// domain group generators and extended homomorphically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    pub name: String,
    domain: Cone,
    codomain: Cone,
    /// Image of each domain group generator, in generator order.
    images: Vec<Element>,
    decoder: Option<Decoder>,
}

impl Hom {
    pub fn new(name: &str, domain: Cone, codomain: Cone, images: Vec<Element>) -> Result<Hom> {
        let gens = domain.g_generators();
        if images.len() != gens.len() {
            return Err(Error::NotOrderHom(format!(
                "{} images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        for img in &images {
            if !codomain.element_fits(img) {
                return Err(Error::FamilyMismatch(format!(
                    "image does not fit codomain {}",
                    codomain.name
                )));
            }
        }
        Ok(Hom {
            name: name.to_string(),
            domain,
            codomain,
            images,
            decoder: None,
        })
    }

    pub fn domain(&self) -> &Cone {
        &self.domain
    }

    pub fn codomain(&self) -> &Cone {
        &self.codomain
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn has_decoder(&self) -> bool {
        self.decoder.is_some()
    }

    /// Homomorphic extension of the generator images.
    pub fn apply(&self, g: &Element) -> Result<Element> {
        if !self.domain.element_fits(g) {
            return Err(Error::FamilyMismatch(format!(
                "element does not fit hom domain {}",
                self.domain.name
            )));
        }
        let word = self.domain.as_generator_word(g);
        let mut out = self.codomain.identity();
        for (i, e) in word {
            let img = self.codomain.pow(&self.images[i], e)?;
            out = self.codomain.mul(&out, &img)?;
        }
        Ok(out)
    }

    /// Partial inverse on positives, when registered.
    pub fn decode(&self, q: &Element) -> Option<Element> {
        match self.decoder {
            Some(Decoder::Wreath) => self.codomain.wreath_decode(q),
            None => None,
        }
    }

    /// Check that every domain positive generator maps into the codomain
    /// cone; required before any reduction check.
    pub fn check_order_hom(&self) -> Result<()> {
        for (name, g) in self.domain.p_generators() {
            let img = self.apply(&g)?;
            if !self.codomain.is_positive(&img) {
                return Err(Error::NotOrderHom(format!(
                    "{} maps positive generator {} to {}",
                    self.name,
                    name,
                    self.codomain.render(&img)
                )));
            }
        }
        Ok(())
    }
}

/// Identity hom on a cone.
pub fn identity_hom(cone: Cone) -> Hom {
    let images = cone.g_generators().into_iter().map(|(_, g)| g).collect();
    Hom::new(&format!("id_{}", cone.name), cone.clone(), cone, images).expect("identity is a hom")
}

/// Composition ψ ∘ φ.
pub fn compose_homs(name: &str, first: &Hom, second: &Hom) -> Result<Hom> {
    if first.codomain != second.domain {
        return Err(Error::FamilyMismatch(format!(
            "cannot compose {} after {}",
            second.name, first.name
        )));
    }
    let images = first
        .images
        .iter()
        .map(|img| second.apply(img))
        .collect::<Result<Vec<_>>>()?;
    Hom::new(name, first.domain.clone(), second.codomain.clone(), images)
}

/// φ₁ × φ₂ on the product cones.
pub fn product_hom(name: &str, left: &Hom, right: &Hom) -> Result<Hom> {
    let domain = Cone::product(left.domain.clone(), right.domain.clone());
    let codomain = Cone::product(left.codomain.clone(), right.codomain.clone());
    let mut images = Vec::new();
    for img in &left.images {
        images.push(codomain.embed(0, img));
    }
    for img in &right.images {
        images.push(codomain.embed(1, img));
    }
    Hom::new(name, domain, codomain, images)
}

/// φ₁ * φ₂ on the free-product cones, acting factorwise.
pub fn free_product_hom(name: &str, left: &Hom, right: &Hom) -> Result<Hom> {
    let domain = Cone::free_product(left.domain.clone(), right.domain.clone());
    let codomain = Cone::free_product(left.codomain.clone(), right.codomain.clone());
    let mut images = Vec::new();
    for img in &left.images {
        images.push(codomain.embed(0, img));
    }
    for img in &right.images {
        images.push(codomain.embed(1, img));
    }
    Hom::new(name, domain, codomain, images)
}

/// The natural homomorphism (G₁*G₂, P₁*P₂) → (G₁≀G₂, P₁≀P₂), with the wreath
/// decoder registered as its inverse on positives.
pub fn natural_wreath_hom(name: &str, a: Cone, b: Cone) -> Hom {
    let domain = Cone::free_product(a.clone(), b.clone());
    let codomain = Cone::wreath(a.clone(), b.clone());
    let mut images = Vec::new();
    for (_, g) in a.g_generators() {
        images.push(codomain.embed(0, &g));
    }
    for (_, h) in b.g_generators() {
        images.push(codomain.embed(1, &h));
    }
    let mut hom = Hom::new(name, domain, codomain, images).expect("natural wreath map is a hom");
    hom.decoder = Some(Decoder::Wreath);
    hom
}

/// Named homs used throughout the test batteries and the CLI.
pub fn catalog_hom(name: &str) -> Result<Hom> {
    let z1 = || Cone::free_abelian("z", 1);
    match name {
        "f2_to_z" => {
            let dom = Cone::free("f2", &["a", "b"]);
            let one = Element::AbelianVec(vec![1]);
            Hom::new(name, dom, z1(), vec![one.clone(), one])
        }
        "f2_to_bs12" => {
            let dom = Cone::free("f2", &["a", "b"]);
            let cod = Cone::bs12_q();
            let gens: BTreeMap<String, Element> = cod.g_generators().into_iter().collect();
            let c = gens["c"].clone();
            let t = gens["t"].clone();
            let ct = cod.mul(&c, &t)?;
            Hom::new(name, dom, cod, vec![ct, t])
        }
        "z2_to_z_sum" => {
            let dom = Cone::free_abelian("z2", 2);
            let one = Element::AbelianVec(vec![1]);
            Hom::new(name, dom, z1(), vec![one.clone(), one])
        }
        "id_z1" => Ok(identity_hom(z1())),
        "id_z2" => Ok(identity_hom(Cone::free_abelian("z2", 2))),
        "natural_wreath_z_z" => Ok(natural_wreath_hom(name, z1(), z1())),
        "freeprod_f2z_f2z" => {
            let f2z = catalog_hom("f2_to_z")?;
            free_product_hom(name, &f2z, &f2z)
        }
        _ => Err(Error::Parse {
            line: 0,
            msg: format!("unknown catalog hom {}", name),
        }),
    }
}

pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "f2_to_z",
        "f2_to_bs12",
        "z2_to_z_sum",
        "id_z1",
        "id_z2",
        "natural_wreath_z_z",
        "freeprod_f2z_f2z",
    ]
}

fn render_pair(cone: &Cone, a: &Element, b: &Element) -> String {
    format!("({}, {})", cone.render(a), cone.render(b))
}

/// Bounded-depth reduction check.
///
/// * `Reduction`: for every p ∈ P of generator length ≤ depth, φ maps [1,p]
///   injectively onto exactly [1, φ(p)].
/// * `Strong`: additionally φ is injective on the enumerated positives and
///   every enumerated codomain positive has a preimage, found through the
///   registered decoder or a bounded search; unresolved elements downgrade
///   the status to inconclusive rather than fail.
/// * `Criteria`: cross-checks the factorization, interval-order-isomorphism
///   and kernel criteria against the definition and fails on any divergence.
pub fn check_reduction(hom: &Hom, depth: usize, mode: CheckMode) -> Result<Report> {
    hom.check_order_hom()?;
    let mut report = Report::pass().with_depth(depth as u64);
    let dom = &hom.domain;
    let cod = &hom.codomain;
    let positives = dom.enumerate_positive(depth);
    report.record("domain positives", positives.len() as u64);

    // Definition: bijection [1,p] -> [1, φ(p)] for every p.
    let mut definition_ok = true;
    for p in &positives {
        let iv = dom.interval(p)?;
        let image_p = hom.apply(p)?;
        let target: BTreeSet<Element> = cod.interval(&image_p)?.into_iter().collect();
        let mut seen: BTreeMap<Element, Element> = BTreeMap::new();
        let mut bad = false;
        for x in &iv {
            let y = hom.apply(x)?;
            if let Some(prev) = seen.get(&y) {
                report.add_witness(format!(
                    "interval [1,{}] not injective: {}",
                    dom.render(p),
                    render_pair(dom, prev, x)
                ));
                bad = true;
                break;
            }
            seen.insert(y, x.clone());
        }
        if !bad {
            let image: BTreeSet<Element> = seen.keys().cloned().collect();
            if image != target {
                report.add_witness(format!(
                    "image of [1,{}] is not [1,{}]",
                    dom.render(p),
                    cod.render(&image_p)
                ));
                bad = true;
            }
        }
        if bad {
            definition_ok = false;
        }
    }
    report.record("intervals checked", positives.len() as u64);

    match mode {
        CheckMode::Reduction => {}
        CheckMode::Strong => {
            // Injectivity on the enumerated positives, scanned shortest
            // first so the reported witness is length-minimal.
            let mut by_length = positives.clone();
            by_length.sort_by_key(|p| (dom.gen_length(p).expect("positive"), p.clone()));
            let mut seen: BTreeMap<Element, Element> = BTreeMap::new();
            'outer: for p in &by_length {
                let y = hom.apply(p)?;
                if let Some(prev) = seen.get(&y) {
                    report
                        .add_witness(format!("not injective on P: {}", render_pair(dom, prev, p)));
                    break 'outer;
                }
                seen.insert(y, p.clone());
            }
            // Surjectivity onto the enumerated codomain positives.
            let codomain_pos = cod.enumerate_positive(depth);
            report.record("codomain positives", codomain_pos.len() as u64);
            let image: BTreeSet<&Element> = seen.keys().collect();
            let mut unresolved = 0u64;
            for q in &codomain_pos {
                if image.contains(q) {
                    continue;
                }
                match hom.decode(q) {
                    Some(pre) if dom.is_positive(&pre) && hom.apply(&pre)? == *q => {}
                    _ => unresolved += 1,
                }
            }
            if unresolved > 0 {
                report.record("unresolved preimages", unresolved);
                report.mark_inconclusive();
            }
        }
        CheckMode::Criteria => {
            // Criterion (3): unique positive factorizations under φ.
            let mut crit3_ok = true;
            for p in &positives {
                let iv = dom.interval(p)?;
                let image_p = hom.apply(p)?;
                for q in cod.interval(&image_p)? {
                    let mut hits = 0usize;
                    for p1 in &iv {
                        if hom.apply(p1)? == q {
                            hits += 1;
                        }
                    }
                    if hits != 1 {
                        crit3_ok = false;
                        report.add_witness(format!(
                            "criterion 3: {} has {} factorizations over {}",
                            dom.render(p),
                            hits,
                            cod.render(&q)
                        ));
                    }
                }
            }
            // Criterion (4): order isomorphism on intervals.
            let mut crit4_ok = true;
            for p in &positives {
                let iv = dom.interval(p)?;
                for x in &iv {
                    for y in &iv {
                        let fx = hom.apply(x)?;
                        let fy = hom.apply(y)?;
                        if dom.leq(x, y) != cod.leq(&fx, &fy) {
                            crit4_ok = false;
                            report.add_witness(format!(
                                "criterion 4: order not preserved on {}",
                                render_pair(dom, x, y)
                            ));
                        }
                    }
                }
            }
            // Criterion (5a): S ∩ ker φ = {1} with S = ∪ [1,p][1,p]⁻¹.
            // Criterion (5b): φ([1,p]) = [1, φ(p)].
            let mut crit5_ok = true;
            for p in &positives {
                let iv = dom.interval(p)?;
                let image_p = hom.apply(p)?;
                let mut image: BTreeSet<Element> = BTreeSet::new();
                for x in &iv {
                    image.insert(hom.apply(x)?);
                    for y in &iv {
                        let s = dom.mul(x, &dom.inv(y)?)?;
                        if hom.apply(&s)? == cod.identity() && s != dom.identity() {
                            crit5_ok = false;
                            report.add_witness(format!(
                                "criterion 5a: kernel element {}",
                                dom.render(&s)
                            ));
                        }
                    }
                }
                let target: BTreeSet<Element> = cod.interval(&image_p)?.into_iter().collect();
                if image != target {
                    crit5_ok = false;
                    report.add_witness(format!(
                        "criterion 5b: image of [1,{}] differs",
                        dom.render(p)
                    ));
                }
            }
            // All criteria are equivalent to the definition; divergence is a
            // failure in its own right.
            for (name, ok) in [("3", crit3_ok), ("4", crit4_ok), ("5", crit5_ok)] {
                if ok != definition_ok {
                    report.add_witness(format!("criterion {} diverges from the definition", name));
                }
            }
        }
    }
    Ok(report.finish())
}

/// Hereditary check: for all p₁, p₂ ∈ P at depth with p₁p₂ ∈ Q, both factors
/// lie in Q. `sub` decides membership in the subset Q ⊆ P.
pub fn check_hereditary(
    cone: &Cone,
    sub: &dyn Fn(&Element) -> bool,
    depth: usize,
) -> Result<Report> {
    let mut report = Report::pass().with_depth(depth as u64);
    let positives = cone.enumerate_positive(depth);
    let mut checked = 0u64;
    for p1 in &positives {
        for p2 in &positives {
            checked += 1;
            let prod = cone.mul(p1, p2)?;
            if sub(&prod) && (!sub(p1) || !sub(p2)) {
                report.add_witness(render_pair(cone, p1, p2));
            }
        }
    }
    report.record("pairs", checked);
    Ok(report.finish())
}
