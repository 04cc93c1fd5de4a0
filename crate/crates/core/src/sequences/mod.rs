//! Central extensions `G = E/N`: the subgroups `N₁ = N ∩ [E,E]` and
//! `N₀ = ⟨𝒦(E) ∩ N⟩`, the maps `η` and `ξ`, and the central-product
//! criterion for vanishing multipliers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::families::{central_product, check_homomorphism, CentralProduct, FamilyError, GeneratorMap};
use crate::lattice::{cokernel_order, subgroup_quotient, FinAbInvariants, IntMatrix, LatticeBasis, LatticeError};
use crate::pc::{CentralQuotient, Element, PcError, PcPresentation};
use crate::wedge::{big, WedgeError, WedgeOptions, WedgeSystem};

/// Largest `|E|` for which commutators are enumerated.
pub const DEFAULT_COMMUTATOR_CAP: u64 = 729;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequenceError {
    #[error("group of order {order} exceeds commutator cap {cap}")]
    CapExceeded { order: String, cap: u64 },
    #[error(transparent)]
    Pc(#[from] PcError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Clone, Debug)]
pub struct SequenceOptions {
    pub cap: u64,
    pub jobs: usize,
    pub wedge: WedgeOptions,
}

impl Default for SequenceOptions {
    fn default() -> Self {
        SequenceOptions { cap: DEFAULT_COMMUTATOR_CAP, jobs: 1, wedge: WedgeOptions::default() }
    }
}

/// `E`, a central subgroup `N` of its `z`-block, and `G = E/N`.
#[derive(Clone, Debug)]
pub struct CentralExtensionData {
    pub extension: PcPresentation,
    pub kernel: Vec<Element>,
    pub quotient: CentralQuotient,
}

impl CentralExtensionData {
    pub fn new(extension: &PcPresentation, kernel: &[Element]) -> Result<Self, SequenceError> {
        let quotient = extension.quotient_with_projection(kernel)?;
        Ok(CentralExtensionData { extension: extension.clone(), kernel: kernel.to_vec(), quotient })
    }

    /// `E = G₁ × G₂` with `N = {a θ(a)⁻¹}`.
    pub fn from_central_product(cp: &CentralProduct) -> Self {
        CentralExtensionData { extension: cp.product.group.clone(), kernel: cp.kernel.clone(), quotient: cp.quotient.clone() }
    }

    pub fn group(&self) -> &PcPresentation {
        &self.quotient.group
    }

    pub fn project(&self, x: &Element) -> Element {
        self.quotient.project(&self.extension, x)
    }

    pub fn lift(&self, y: &Element) -> Element {
        self.quotient.lift(&self.extension, y)
    }

    /// `N` in `z` coordinates of `E`, including the `z` relations.
    pub fn kernel_lattice(&self) -> LatticeBasis {
        let gens: Vec<Vec<i64>> = self.kernel.iter().filter_map(|k| self.extension.z_part(k)).collect();
        self.extension.z_lattice(&gens)
    }

    pub fn kernel_order(&self) -> BigInt {
        central_order(&self.extension, &self.kernel_lattice())
    }
}

/// Order of `L / R` for a lattice `L` of `z` vectors containing the `z`
/// relations `R`.
fn central_order(e: &PcPresentation, l: &LatticeBasis) -> BigInt {
    let rels = e.z_relations();
    if rels.cols() == 0 {
        return BigInt::from(1);
    }
    let total = cokernel_order(&rels).expect("z-block is finite");
    let quotient = cokernel_order(&l.to_matrix()).expect("lattice contains the relations");
    total / quotient
}

fn check_cap(e: &PcPresentation, cap: u64) -> Result<(), SequenceError> {
    let order = e.order();
    if order > BigInt::from(cap) {
        return Err(SequenceError::CapExceeded { order: order.to_string(), cap });
    }
    Ok(())
}

/// The set `𝒦(E)` of commutators `[x, y]`.
pub fn commutator_set(e: &PcPresentation, opts: &SequenceOptions) -> Result<BTreeSet<Element>, SequenceError> {
    check_cap(e, opts.cap)?;
    // central factors do not change a commutator
    let t = e.noncentral_transversal();
    let jobs = opts.jobs.max(1).min(t.len().max(1));
    let chunk = t.len().div_ceil(jobs).max(1);
    let parts: Vec<BTreeSet<Element>> = std::thread::scope(|s| {
        let handles: Vec<_> = t
            .chunks(chunk)
            .map(|xs| {
                let t = &t;
                s.spawn(move || {
                    let mut out = BTreeSet::new();
                    for x in xs {
                        for y in t {
                            out.insert(e.commutator(x, y));
                        }
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("commutator worker panicked")).collect()
    });
    let mut out = BTreeSet::new();
    out.insert(e.identity());
    for p in parts {
        out.extend(p);
    }
    Ok(out)
}

/// `N₁`, `N₀` and `N₁/N₀`.
#[derive(Clone, Debug)]
pub struct KernelPair {
    /// Basis of `N₁` in `z` coordinates of `E`, containing the relations.
    pub n1: LatticeBasis,
    /// Commutators of `E` lying in `N`, as `z` vectors.
    pub n0_gens: Vec<Vec<i64>>,
    pub n0: LatticeBasis,
    pub n1_order: BigInt,
    pub n0_order: BigInt,
    pub quotient: FinAbInvariants,
}

pub fn n1_n0(data: &CentralExtensionData, opts: &SequenceOptions) -> Result<KernelPair, SequenceError> {
    let e = &data.extension;
    let n = data.kernel_lattice();
    let derived = e.z_lattice(&e.derived_subgroup());
    let n1 = n.intersection(&derived);
    let mut n0_gens = Vec::new();
    for k in commutator_set(e, opts)? {
        let z = e.z_part(&k).ok_or_else(|| SequenceError::Internal("commutator outside the z-block".into()))?;
        if n.contains(&big(&z)) && !e.z_is_trivial(&z) {
            n0_gens.push(z);
        }
    }
    let n0 = e.z_lattice(&n0_gens);
    let rels = e.z_relations();
    let quotient = if rels.cols() == 0 {
        FinAbInvariants::trivial()
    } else {
        let den: Vec<Vec<BigInt>> = n0_gens.iter().map(|z| big(z)).collect();
        subgroup_quotient(&rels, n1.basis(), &den).map_err(|err| match err {
            LatticeError::NotASubgroup => SequenceError::Internal("N₀ is not contained in N₁".into()),
            err => err.into(),
        })?
    };
    Ok(KernelPair { n1_order: central_order(e, &n1), n0_order: central_order(e, &n0), n1, n0_gens, n0, quotient })
}

/// Matrix of `η`: row `(i,j)` is `π(e_i) ∧ π(e_j)` in the symbols of `G`.
/// Fails if some relation of `W(E)` is not carried into the relations of
/// `W(G)`.
pub fn eta_matrix(data: &CentralExtensionData, sys_e: &WedgeSystem, sys_g: &WedgeSystem) -> Result<IntMatrix, SequenceError> {
    let e = &data.extension;
    let ex = sys_g.expander();
    let rows: Vec<Vec<i64>> = sys_e
        .basis()
        .gens()
        .iter()
        .map(|g| ex.expand(&data.project(&e.generator(g.i)), &data.project(&e.generator(g.j))).0)
        .collect();
    let f = IntMatrix::from_rows(sys_g.basis().len(), &rows);
    check_carried(&f, sys_e.relations(), sys_g.relations(), "η")?;
    Ok(f)
}

fn check_carried(f: &IntMatrix, source: &IntMatrix, target: &IntMatrix, name: &str) -> Result<(), SequenceError> {
    if f.rows() == 0 {
        return Ok(());
    }
    let lattice = LatticeBasis::from_matrix(target);
    for i in 0..source.rows() {
        if !lattice.contains(&f.left_mul_vec(source.row(i))) {
            return Err(SequenceError::Internal(format!("{name} does not respect relation {i}")));
        }
    }
    Ok(())
}

/// `η(M*(E))` as vectors over the symbols of `G`.
pub fn eta_star_image(
    data: &CentralExtensionData,
    sys_e: &WedgeSystem,
    sys_g: &WedgeSystem,
) -> Result<Vec<Vec<BigInt>>, SequenceError> {
    let f = eta_matrix(data, sys_e, sys_g)?;
    if f.rows() == 0 || f.cols() == 0 {
        return Ok(Vec::new());
    }
    Ok(sys_e.m_star()?.iter().map(|m| f.left_mul_vec(m)).collect())
}

/// Matrix of `ξ`: row `(i,j)` is `[g̃_i, g̃_j]` in `z` coordinates of `E`.
pub fn xi_matrix(data: &CentralExtensionData, sys_g: &WedgeSystem) -> Result<IntMatrix, SequenceError> {
    let (e, g) = (&data.extension, data.group());
    let rows: Vec<Vec<i64>> = sys_g
        .basis()
        .gens()
        .iter()
        .map(|w| e.commutator_z(&data.lift(&g.generator(w.i)), &data.lift(&g.generator(w.j))))
        .collect();
    let f = IntMatrix::from_rows(e.num_central(), &rows);
    check_carried(&f, sys_g.relations(), &e.z_relations(), "ξ")?;
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSequenceReport {
    pub group: String,
    pub b0_g: FinAbInvariants,
    pub b0_e: FinAbInvariants,
    /// `B₀(G) / η*(B₀(E))`.
    pub cokernel: FinAbInvariants,
    /// `N₁ / N₀`.
    pub n1_n0: FinAbInvariants,
    pub n1_order: String,
    pub n0_order: String,
    /// `ξ(M*(G)) = N₁` and `ξ(M₀*(G)) = N₀`.
    pub xi_consistent: bool,
    pub passed: bool,
}

/// Compares `B₀(G)/η*(B₀(E))` with `N₁/N₀`.
pub fn verify_exact_sequence(data: &CentralExtensionData, opts: &SequenceOptions) -> Result<ExactSequenceReport, SequenceError> {
    let e = &data.extension;
    let g = data.group();
    let sys_e = WedgeSystem::build(e)?;
    let sys_g = WedgeSystem::build(g)?;
    let b0_e = sys_e.bogomolov(&opts.wedge)?.invariants;
    let b0_g = sys_g.bogomolov(&opts.wedge)?.invariants;
    let kp = n1_n0(data, opts)?;

    let m_g = sys_g.m_star()?;
    let m0_g: Vec<Vec<BigInt>> = sys_g.m0_star(&opts.wedge)?.essential.iter().map(|w| big(&w.expansion.0)).collect();
    let eta = eta_star_image(data, &sys_e, &sys_g)?;
    let cokernel = if sys_g.basis().is_empty() {
        FinAbInvariants::trivial()
    } else {
        let den: Vec<Vec<BigInt>> = eta.iter().chain(&m0_g).cloned().collect();
        subgroup_quotient(sys_g.relations(), &m_g, &den).map_err(|err| match err {
            LatticeError::NotASubgroup => SequenceError::Internal("η(M*(E)) + M₀*(G) is not inside M*(G)".into()),
            err => err.into(),
        })?
    };

    let xi_consistent = if sys_g.basis().is_empty() || e.num_central() == 0 {
        kp.n1_order == BigInt::from(1) && kp.n0_order == BigInt::from(1)
    } else {
        let xi = xi_matrix(data, &sys_g)?;
        let span = |gens: &[Vec<BigInt>]| {
            let mut l = LatticeBasis::from_matrix(&e.z_relations());
            for v in gens {
                l.insert(xi.left_mul_vec(v));
            }
            l
        };
        span(&m_g).same_lattice(&kp.n1) && span(&m0_g).same_lattice(&kp.n0)
    };

    let passed = cokernel == kp.quotient && xi_consistent;
    Ok(ExactSequenceReport {
        group: g.name().to_string(),
        b0_g,
        b0_e,
        cokernel,
        n1_n0: kp.quotient,
        n1_order: kp.n1_order.to_string(),
        n0_order: kp.n0_order.to_string(),
        xi_consistent,
        passed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Hypotheses hold and `B₀(G)` vanishes.
    Confirmed,
    /// Some multiplier hypothesis fails; nothing is asserted.
    HypothesesFail,
    /// `θ` is not a homomorphism or not bijective on `K₁`.
    NotApplicable,
    /// Hypotheses hold but `B₀(G)` is nonzero.
    Contradiction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Main1Hypotheses {
    pub homomorphism: bool,
    pub failing_relator: Option<String>,
    pub restriction_bijective: bool,
    pub b0_g1_mod_k1: Option<FinAbInvariants>,
    pub b0_g1: Option<FinAbInvariants>,
    pub b0_g2: Option<FinAbInvariants>,
    pub hold: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Main1Report {
    pub group: Option<String>,
    pub hypotheses: Main1Hypotheses,
    #[serde(rename = "b0_G")]
    pub b0_g: Option<FinAbInvariants>,
    pub n1_n0: Option<FinAbInvariants>,
    pub verdict: Verdict,
}

impl Main1Report {
    pub fn is_contradiction(&self) -> bool {
        self.verdict == Verdict::Contradiction
    }
}

/// Checks the hypotheses of the central-product criterion for `G₁ ∘ G₂`
/// and computes `B₀` of the result.
pub fn verify_main1(
    p1: &PcPresentation,
    k1: &[Element],
    p2: &PcPresentation,
    k2: &[Element],
    theta: &GeneratorMap,
    opts: &SequenceOptions,
) -> Result<Main1Report, SequenceError> {
    let hom = check_homomorphism(theta);
    let mut hyp = Main1Hypotheses {
        homomorphism: hom.ok,
        failing_relator: hom.failing_relator,
        restriction_bijective: false,
        b0_g1_mod_k1: None,
        b0_g1: None,
        b0_g2: None,
        hold: false,
    };
    let not_applicable = |hyp| Main1Report { group: None, hypotheses: hyp, b0_g: None, n1_n0: None, verdict: Verdict::NotApplicable };
    if !hom.ok {
        return Ok(not_applicable(hyp));
    }
    let cp = match central_product(p1, k1, p2, k2, theta) {
        Ok(cp) => cp,
        Err(FamilyError::NotIso(_)) => return Ok(not_applicable(hyp)),
        Err(err) => return Err(err.into()),
    };
    hyp.restriction_bijective = true;
    let b0 = |p: &PcPresentation| -> Result<FinAbInvariants, SequenceError> { Ok(WedgeSystem::build(p)?.bogomolov(&opts.wedge)?.invariants) };
    let quotient = p1.quotient_by_central(k1)?;
    hyp.b0_g1_mod_k1 = Some(b0(&quotient)?);
    hyp.b0_g1 = Some(b0(p1)?);
    hyp.b0_g2 = Some(b0(p2)?);
    hyp.hold = [&hyp.b0_g1_mod_k1, &hyp.b0_g1, &hyp.b0_g2].iter().all(|b| b.as_ref().is_some_and(|b| b.is_trivial()));
    let b0_g = b0(&cp.group)?;
    let data = CentralExtensionData::from_central_product(&cp);
    let n1_n0 = match n1_n0(&data, opts) {
        Ok(kp) => Some(kp.quotient),
        Err(SequenceError::CapExceeded { .. }) => None,
        Err(err) => return Err(err),
    };
    let verdict = match (hyp.hold, b0_g.is_trivial()) {
        (false, _) => Verdict::HypothesesFail,
        (true, true) => Verdict::Confirmed,
        (true, false) => Verdict::Contradiction,
    };
    Ok(Main1Report { group: Some(cp.group.name().to_string()), hypotheses: hyp, b0_g: Some(b0_g), n1_n0, verdict })
}

/// The criterion applied to two Heisenberg groups glued along their centers.
pub fn main1_heisenberg(p: u64, opts: &SequenceOptions) -> Result<Main1Report, SequenceError> {
    let h = crate::families::heisenberg(p)?;
    let c = [h.generator(2)];
    verify_main1(&h, &c, &h, &c, &GeneratorMap::identity(&h), opts)
}

/// The criterion applied to two split metacyclic groups glued along
/// `⟨b^{p^{b-1}}⟩`, with the factor of larger `a` first so that `a ↦ a`
/// is a homomorphism.
pub fn main1_metacyclic(p: u64, r: u32, b: u32, a1: u32, a2: u32, opts: &SequenceOptions) -> Result<Main1Report, SequenceError> {
    let (a1, a2) = (a1.max(a2), a1.min(a2));
    let cp = crate::families::corollary_c2_product(p, r, b, a1, a2)?;
    let (g1, g2) = (&cp.theta.source, &cp.theta.target);
    verify_main1(g1, &cp.k1, g2, &cp.k2, &cp.theta, opts)
}

#[cfg(test)]
mod tests;
