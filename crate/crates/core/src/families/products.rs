use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::FamilyError;
use crate::pc::{CentralQuotient, DirectProduct, Element, PcPresentation};

/// A map defined on generators: `images[i]` is the image of generator `i`.
#[derive(Clone, Debug)]
pub struct GeneratorMap {
    pub source: PcPresentation,
    pub target: PcPresentation,
    pub images: Vec<Element>,
}

/// Outcome of [`check_homomorphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomomorphismCheck {
    pub ok: bool,
    pub failing_relator: Option<String>,
}

impl GeneratorMap {
    pub fn new(source: &PcPresentation, target: &PcPresentation, images: Vec<Element>) -> Result<Self, FamilyError> {
        if images.len() != source.num_gens() || images.iter().any(|x| x.len() != target.num_gens()) {
            return Err(FamilyError::BadParameter("generator map has the wrong shape".into()));
        }
        Ok(GeneratorMap { source: source.clone(), target: target.clone(), images })
    }

    /// Map given by label pairs; unlisted generators go to the identity.
    pub fn from_labels(source: &PcPresentation, target: &PcPresentation, pairs: &[(&str, &str)]) -> Result<Self, FamilyError> {
        let mut images = vec![target.identity(); source.num_gens()];
        for &(s, t) in pairs {
            let i = source.index_of(s).ok_or_else(|| FamilyError::BadParameter(format!("unknown generator {s}")))?;
            let j = target.index_of(t).ok_or_else(|| FamilyError::BadParameter(format!("unknown generator {t}")))?;
            images[i] = target.generator(j);
        }
        Ok(GeneratorMap { source: source.clone(), target: target.clone(), images })
    }

    pub fn identity(p: &PcPresentation) -> Self {
        let images = (0..p.num_gens()).map(|i| p.generator(i)).collect();
        GeneratorMap { source: p.clone(), target: p.clone(), images }
    }

    /// `θ(g_1^{e_1} ... g_n^{e_n}) = θ(g_1)^{e_1} ... θ(g_n)^{e_n}`.
    pub fn apply(&self, x: &Element) -> Element {
        let t = &self.target;
        x.exponents()
            .iter()
            .zip(&self.images)
            .fold(t.identity(), |acc, (&e, img)| if e == 0 { acc } else { t.multiply(&acc, &t.power(img, e)) })
    }

    fn apply_z(&self, z: &[i64]) -> Element {
        self.apply(&self.source.z_element(z))
    }
}

/// Evaluates every defining relator of the source under `θ`.
pub fn check_homomorphism(theta: &GeneratorMap) -> HomomorphismCheck {
    let (s, t) = (&theta.source, &theta.target);
    let fail = |r: String| HomomorphismCheck { ok: false, failing_relator: Some(r) };
    for i in 0..s.num_gens() {
        let lhs = t.power(&theta.images[i], s.relative_order(i));
        if lhs != theta.apply_z(s.power_word(i)) {
            return fail(format!("{}^{}", s.label(i), s.relative_order(i)));
        }
    }
    for j in 0..s.num_gens() {
        for i in 0..j {
            let lhs = t.commutator(&theta.images[j], &theta.images[i]);
            if lhs != theta.apply_z(s.commutator_word(j, i)) {
                return fail(format!("[{},{}]", s.label(j), s.label(i)));
            }
        }
    }
    HomomorphismCheck { ok: true, failing_relator: None }
}

/// All elements of the abelian subgroup generated by central `gens`.
pub(crate) fn central_closure(p: &PcPresentation, gens: &[Element], cap: u64) -> Result<Vec<Element>, FamilyError> {
    let mut seen: BTreeSet<Element> = BTreeSet::new();
    seen.insert(p.identity());
    let mut frontier = vec![p.identity()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = p.multiply(&x, g);
            if seen.insert(y.clone()) {
                if seen.len() as u64 > cap {
                    return Err(FamilyError::BadParameter(format!("central subgroup larger than {cap}")));
                }
                frontier.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// `E = P₁ × P₂`, `N = ⟨k θ(k)⁻¹ : k ∈ K₁⟩`, and `G = E / N`.
#[derive(Clone, Debug)]
pub struct CentralProduct {
    pub group: PcPresentation,
    pub product: DirectProduct,
    pub quotient: CentralQuotient,
    /// Generators of `N` as elements of `E`.
    pub kernel: Vec<Element>,
    pub theta: GeneratorMap,
    pub k1: Vec<Element>,
    pub k2: Vec<Element>,
}

const SUBGROUP_CAP: u64 = 1 << 16;

pub fn central_product(
    p1: &PcPresentation,
    k1: &[Element],
    p2: &PcPresentation,
    k2: &[Element],
    theta: &GeneratorMap,
) -> Result<CentralProduct, FamilyError> {
    if p1.prime() != p2.prime() {
        return Err(crate::pc::PcError::PrimeMismatch(p1.prime(), p2.prime()).into());
    }
    for (p, ks) in [(p1, k1), (p2, k2)] {
        for k in ks {
            if k.len() != p.num_gens() || p.z_part(k).is_none() {
                return Err(FamilyError::NotCentral(p.format_element(k)));
            }
        }
    }
    let sub1 = central_closure(p1, k1, SUBGROUP_CAP)?;
    let sub2: BTreeSet<Element> = central_closure(p2, k2, SUBGROUP_CAP)?.into_iter().collect();
    let mut images = BTreeSet::new();
    for x in &sub1 {
        let y = theta.apply(x);
        if !sub2.contains(&y) {
            return Err(FamilyError::NotIso(format!("θ({}) = {} lies outside K₂", p1.format_element(x), p2.format_element(&y))));
        }
        for g in k1 {
            let lhs = theta.apply(&p1.multiply(x, g));
            if lhs != p2.multiply(&y, &theta.apply(g)) {
                return Err(FamilyError::NotIso("θ is not multiplicative on K₁".into()));
            }
        }
        images.insert(y);
    }
    if images.len() != sub1.len() || images.len() != sub2.len() {
        return Err(FamilyError::NotIso(format!("|K₁| = {}, |θ(K₁)| = {}, |K₂| = {}", sub1.len(), images.len(), sub2.len())));
    }
    let product = p1.direct_product_with_maps(p2)?;
    let e = &product.group;
    let kernel: Vec<Element> = k1
        .iter()
        .map(|k| e.multiply(&product.embed_left(k), &e.inverse(&product.embed_right(&theta.apply(k)))))
        .collect();
    let quotient = e.quotient_with_projection(&kernel)?;
    let mut group = quotient.group.clone();
    group.set_name(format!("{}∘{}", p1.name(), p2.name()));
    debug_assert_eq!(group.order() * BigInt::from(sub1.len()), p1.order() * p2.order());
    Ok(CentralProduct { group, product, quotient, kernel, theta: theta.clone(), k1: k1.to_vec(), k2: k2.to_vec() })
}
