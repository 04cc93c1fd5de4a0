use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::expand::{Expander, WedgeBasis, WedgeWord};
use super::WedgeError;
use crate::lattice::{
    kernel_of_map, quotient_in_basis, solve_membership, subgroup_quotient, AbelianPresentation, FinAbInvariants,
    IntMatrix, LatticeBasis,
};
use crate::pc::{Element, PcPresentation, DEFAULT_CAP};

#[derive(Clone, Debug)]
pub struct WedgeOptions {
    /// Largest number of element pairs enumerated for commuting-pair symbols.
    pub cap: u64,
    pub jobs: usize,
    pub certificate: bool,
    /// Forces a pair strategy instead of choosing by `cap`.
    pub strategy: Option<PairStrategy>,
}

impl Default for WedgeOptions {
    fn default() -> Self {
        WedgeOptions { cap: DEFAULT_CAP, jobs: 1, certificate: false, strategy: None }
    }
}

/// How commuting-pair symbols were enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStrategy {
    /// Every pair of group elements.
    AllPairs,
    /// Pairs of noncentral normal forms plus every `z_k ∧ g_l`. Any element
    /// is such a normal form times a central element, and symbols with a
    /// central argument expand into the `z_k ∧ g_l`, so this spans the same
    /// subgroup.
    Transversal,
}

/// Commuting pair `(x, y)` whose symbol `x ∧ y` was kept as a generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Element,
    pub y: Element,
    pub expansion: WedgeWord,
}

#[derive(Clone, Debug)]
pub struct CommutingSymbols {
    pub strategy: PairStrategy,
    pub pairs_examined: u64,
    pub distinct: usize,
    /// Generators that enlarged the lattice when inserted after the
    /// relations, in deterministic order.
    pub essential: Vec<Witness>,
}

/// The abelian group on pair symbols with its commutator map.
#[derive(Clone, Debug)]
pub struct WedgeSystem {
    group: PcPresentation,
    basis: WedgeBasis,
    presentation: AbelianPresentation,
    kappa: IntMatrix,
}

impl WedgeSystem {
    /// Relations are `r ∧ g_k` and `g_k ∧ r` for every defining relator `r`
    /// and generator `g_k`.
    pub fn build(p: &PcPresentation) -> Result<Self, WedgeError> {
        p.validate()?;
        let ex = Expander::new(p);
        let basis = ex.basis().clone();
        let n = p.num_gens();
        let m = p.num_noncentral();
        let mut relators: Vec<(String, Vec<(usize, i64)>)> = Vec::new();
        for i in 0..n {
            let mut w = vec![(i, p.relative_order(i))];
            for (k, &c) in p.power_word(i).iter().enumerate() {
                if c != 0 {
                    w.push((m + k, -c));
                }
            }
            relators.push((format!("{}^{}", p.label(i), p.relative_order(i)), w));
        }
        for j in 0..n {
            for i in 0..j {
                let mut w = vec![(j, -1), (i, -1), (j, 1), (i, 1)];
                for (k, &c) in p.commutator_word(j, i).iter().enumerate() {
                    if c != 0 {
                        w.push((m + k, -c));
                    }
                }
                relators.push((format!("[{},{}]", p.label(j), p.label(i)), w));
            }
        }
        let mut seen = std::collections::HashSet::new();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (name, r) in &relators {
            for k in 0..n {
                let g = [(k, 1)];
                let mut a = vec![0; basis.len()];
                ex.words_into(r, &g, &mut a);
                let mut b = vec![0; basis.len()];
                ex.words_into(&g, r, &mut b);
                for (row, label) in [(a, format!("{name} ∧ {}", p.label(k))), (b, format!("{} ∧ {name}", p.label(k)))] {
                    if row.iter().any(|&x| x != 0) && seen.insert(row.clone()) {
                        rows.push(row);
                        labels.push(label);
                    }
                }
            }
        }
        let relations = IntMatrix::from_rows(basis.len(), &rows);
        let presentation = AbelianPresentation::new(basis.labels(p), relations).with_relation_labels(labels);
        let kappa_rows: Vec<Vec<i64>> = basis.gens().iter().map(|g| p.commutator_word(g.i, g.j).to_vec()).collect();
        let kappa = IntMatrix::from_rows(p.num_central(), &kappa_rows);
        Ok(WedgeSystem { group: p.clone(), basis, presentation, kappa })
    }

    pub fn group(&self) -> &PcPresentation {
        &self.group
    }

    pub fn basis(&self) -> &WedgeBasis {
        &self.basis
    }

    pub fn presentation(&self) -> &AbelianPresentation {
        &self.presentation
    }

    pub fn relations(&self) -> &IntMatrix {
        self.presentation.relations()
    }

    /// Row `i` is the `z`-vector of the commutator of basis symbol `i`.
    pub fn kappa(&self) -> &IntMatrix {
        &self.kappa
    }

    pub fn expander(&self) -> Expander<'_> {
        Expander::new(&self.group)
    }

    pub fn w_invariants(&self) -> Result<FinAbInvariants, WedgeError> {
        Ok(self.presentation.invariants()?)
    }

    fn z_presentation(&self) -> AbelianPresentation {
        AbelianPresentation::new(self.group.z_labels().to_vec(), self.group.z_relations())
    }

    /// Generators of the kernel of `κ*`.
    pub fn m_star(&self) -> Result<Vec<Vec<BigInt>>, WedgeError> {
        if self.basis.is_empty() {
            return Ok(Vec::new());
        }
        Ok(kernel_of_map(&self.kappa, &self.presentation, &self.z_presentation())?)
    }

    pub fn m_star_invariants(&self) -> Result<FinAbInvariants, WedgeError> {
        self.subgroup_invariants(&self.m_star()?)
    }

    /// Invariants of `(S + R) / R` for the subgroup `S` spanned by `gens`.
    pub fn subgroup_invariants(&self, gens: &[Vec<BigInt>]) -> Result<FinAbInvariants, WedgeError> {
        if self.basis.is_empty() {
            return Ok(FinAbInvariants::trivial());
        }
        Ok(subgroup_quotient(self.relations(), gens, &[])?)
    }

    /// Whether `κ*(v)` is trivial in the group.
    pub fn in_kernel(&self, v: &[i64]) -> bool {
        let z = self.expander().kappa(&WedgeWord(v.to_vec()));
        self.group.z_is_trivial(&z)
    }

    /// Expansions of commuting pairs, deduplicated by expansion vector.
    pub fn m0_star(&self, opts: &WedgeOptions) -> Result<CommutingSymbols, WedgeError> {
        let p = &self.group;
        let order = p.order();
        let all_pairs = &order * &order;
        let use_all = match opts.strategy {
            Some(s) => s == PairStrategy::AllPairs,
            None => all_pairs <= BigInt::from(opts.cap),
        };
        let (strategy, firsts, seconds) = if use_all {
            let e = p.elements(opts.cap)?;
            (PairStrategy::AllPairs, e.clone(), e)
        } else {
            let nc: BigInt = p.relative_orders()[..p.num_noncentral()].iter().map(|&q| BigInt::from(q)).product();
            if &nc * &nc > BigInt::from(opts.cap) {
                return Err(WedgeError::CapExceeded { pairs: all_pairs.to_string(), cap: opts.cap });
            }
            let t = p.noncentral_transversal();
            (PairStrategy::Transversal, t.clone(), t)
        };
        let (mut found, examined) = self.collect_commuting(&firsts, &seconds, opts.jobs.max(1));
        if strategy == PairStrategy::Transversal {
            let ex = self.expander();
            for k in p.num_noncentral()..p.num_gens() {
                for l in 0..p.num_gens() {
                    let (x, y) = (p.generator(k), p.generator(l));
                    let v = ex.expand(&x, &y);
                    if !v.is_zero() {
                        found.entry(v).or_insert((x, y));
                    }
                }
            }
        }
        let mut keys: Vec<WedgeWord> = found.keys().cloned().collect();
        keys.sort_by(|a, b| weight(a).cmp(&weight(b)).then_with(|| a.cmp(b)));
        let mut lattice = self.presentation.relation_lattice();
        let mut essential = Vec::new();
        for k in keys.iter() {
            if lattice.insert(big(&k.0)) {
                let (x, y) = found[k].clone();
                essential.push(Witness { x, y, expansion: k.clone() });
            }
        }
        Ok(CommutingSymbols { strategy, pairs_examined: examined, distinct: keys.len(), essential })
    }

    fn collect_commuting(
        &self,
        firsts: &[Element],
        seconds: &[Element],
        jobs: usize,
    ) -> (HashMap<WedgeWord, (Element, Element)>, u64) {
        let work = |start: usize| {
            let ex = self.expander();
            let mut found: HashMap<WedgeWord, (Element, Element)> = HashMap::new();
            let mut examined = 0u64;
            for a in (start..firsts.len()).step_by(jobs) {
                let x = &firsts[a];
                for y in &seconds[a + 1..] {
                    examined += 1;
                    if !self.group.z_is_trivial(&self.group.commutator_z(x, y)) {
                        continue;
                    }
                    let v = ex.expand(x, y);
                    if !v.is_zero() {
                        found.entry(v).or_insert_with(|| (x.clone(), y.clone()));
                    }
                }
            }
            (found, examined)
        };
        if jobs == 1 {
            return work(0);
        }
        let parts: Vec<_> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs).map(|w| s.spawn(move || work(w))).collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut found: HashMap<WedgeWord, (Element, Element)> = HashMap::new();
        let mut examined = 0;
        for (part, n) in parts {
            examined += n;
            for (k, w) in part {
                match found.get(&k) {
                    Some(old) if (&old.0, &old.1) <= (&w.0, &w.1) => {}
                    _ => {
                        found.insert(k, w);
                    }
                }
            }
        }
        (found, examined)
    }
}

fn weight(w: &WedgeWord) -> (usize, i64) {
    (w.0.iter().filter(|&&c| c != 0).count(), w.0.iter().map(|c| c.abs()).sum())
}

pub(crate) fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Full result of a multiplier computation.
#[derive(Clone, Debug)]
pub struct Bogomolov {
    pub invariants: FinAbInvariants,
    pub w_invariants: FinAbInvariants,
    pub m_star_invariants: FinAbInvariants,
    pub m0_invariants: FinAbInvariants,
    pub strategy: PairStrategy,
    pub pairs_examined: u64,
    pub distinct_symbols: usize,
    pub certificate: Option<Certificate>,
}

/// `B₀ = M* / M₀*` with optional triviality certificate.
pub fn bogomolov(p: &PcPresentation, opts: &WedgeOptions) -> Result<Bogomolov, WedgeError> {
    let sys = WedgeSystem::build(p)?;
    sys.bogomolov(opts)
}

impl WedgeSystem {
    pub fn bogomolov(&self, opts: &WedgeOptions) -> Result<Bogomolov, WedgeError> {
        let m_star = self.m_star()?;
        let symbols = self.m0_star(opts)?;
        for w in &symbols.essential {
            if !self.in_kernel(&w.expansion.0) {
                return Err(WedgeError::Internal(format!(
                    "commuting symbol {} ∧ {} outside the kernel",
                    self.group.format_element(&w.x),
                    self.group.format_element(&w.y)
                )));
            }
        }
        let m0: Vec<Vec<BigInt>> = symbols.essential.iter().map(|w| big(&w.expansion.0)).collect();
        let (invariants, m_star_invariants, m0_invariants) = if self.basis.is_empty() {
            (FinAbInvariants::trivial(), FinAbInvariants::trivial(), FinAbInvariants::trivial())
        } else {
            let rels = self.relations();
            let mut num = LatticeBasis::from_matrix(rels);
            for v in &m_star {
                num.insert(v.clone());
            }
            let b0 = quotient_in_basis(&num, rels, &m0, self.basis.len()).map_err(|e| match e {
                crate::lattice::LatticeError::NotASubgroup => {
                    WedgeError::Internal("commuting symbols not contained in the kernel".into())
                }
                e => e.into(),
            })?;
            (b0, quotient_in_basis(&num, rels, &[], self.basis.len())?, subgroup_quotient(rels, &m0, &[])?)
        };
        let certificate = if opts.certificate && invariants.is_trivial() {
            Some(self.certificate(&m_star, &symbols)?)
        } else {
            None
        };
        Ok(Bogomolov {
            invariants,
            w_invariants: self.w_invariants()?,
            m_star_invariants,
            m0_invariants,
            strategy: symbols.strategy,
            pairs_examined: symbols.pairs_examined,
            distinct_symbols: symbols.distinct,
            certificate,
        })
    }

    /// Writes each kernel generator (reduced to a lattice basis) as a
    /// combination of commuting symbols modulo the relations.
    pub fn certificate(&self, m_star: &[Vec<BigInt>], symbols: &CommutingSymbols) -> Result<Certificate, WedgeError> {
        let p = &self.group;
        let cols = self.basis.len();
        let mut targets = LatticeBasis::new(cols);
        for v in m_star {
            targets.insert(v.clone());
        }
        let mut gens: Vec<Vec<BigInt>> = symbols.essential.iter().map(|w| big(&w.expansion.0)).collect();
        let k = gens.len();
        gens.extend(self.relations().row_vecs());
        let a = IntMatrix::from_big_rows(cols, gens);
        let labels = self.presentation.labels();
        let mut entries = Vec::new();
        for t in targets.basis() {
            let x = solve_membership(&a, t)
                .ok_or_else(|| WedgeError::Internal("kernel element outside the commuting span".into()))?;
            let terms = symbols
                .essential
                .iter()
                .zip(&x[..k])
                .filter(|(_, c)| !c.is_zero())
                .map(|(w, c)| CertificateTerm {
                    coefficient: c.to_string(),
                    left: p.format_element(&w.x),
                    right: p.format_element(&w.y),
                    x: w.x.clone(),
                    y: w.y.clone(),
                })
                .collect();
            entries.push(CertificateEntry {
                target: crate::lattice::format_combination(labels, t),
                vector: t.iter().map(|c| c.to_string()).collect(),
                terms,
            });
        }
        Ok(Certificate { group: p.name().to_string(), hash: p.canonical_hash(), entries })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub coefficient: String,
    pub left: String,
    pub right: String,
    pub x: Element,
    pub y: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub target: String,
    pub vector: Vec<String>,
    pub terms: Vec<CertificateTerm>,
}

/// Proof that every kernel generator is a sum of commuting symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub group: String,
    pub hash: String,
    pub entries: Vec<CertificateEntry>,
}

impl Certificate {
    pub fn to_text(&self) -> String {
        let mut out = format!("certificate for {} ({})\n", self.group, &self.hash[..12.min(self.hash.len())]);
        for e in &self.entries {
            out.push_str(&format!("{} =\n", e.target));
            if e.terms.is_empty() {
                out.push_str("    0 (relation)\n");
            }
            for t in &e.terms {
                out.push_str(&format!("    {} · ({} ∧ {})\n", t.coefficient, t.left, t.right));
            }
        }
        out
    }

    /// Recomputes every term from its witness pair and checks that the
    /// pairs commute and the sums match modulo the relations.
    pub fn verify(&self, sys: &WedgeSystem) -> bool {
        let p = sys.group();
        if p.canonical_hash() != self.hash {
            return false;
        }
        let ex = sys.expander();
        let rels = sys.presentation().relation_lattice();
        for e in &self.entries {
            let Ok(target) = e.vector.iter().map(|s| s.parse::<BigInt>()).collect::<Result<Vec<_>, _>>() else {
                return false;
            };
            if target.len() != sys.basis().len() {
                return false;
            }
            let mut diff = target;
            for t in &e.terms {
                if t.x.len() != p.num_gens() || t.y.len() != p.num_gens() {
                    return false;
                }
                if !p.z_is_trivial(&p.commutator_z(&t.x, &t.y)) {
                    return false;
                }
                let Ok(c) = t.coefficient.parse::<BigInt>() else { return false };
                for (d, &s) in diff.iter_mut().zip(&ex.expand(&t.x, &t.y).0) {
                    *d -= &c * s;
                }
            }
            if !rels.contains(&diff) {
                return false;
            }
        }
        true
    }
}
