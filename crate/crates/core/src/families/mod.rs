//! Constructors for the group families studied here, and central products.

mod products;

pub use products::{central_product, check_homomorphism, CentralProduct, GeneratorMap, HomomorphismCheck};

use serde::{Deserialize, Serialize};

use crate::pc::{is_prime, PcBuilder, PcError, PcPresentation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("the prime must be odd, got {0}")]
    EvenPrime(u64),
    #[error("series index must be 1..=6, got {0}")]
    BadIndex(u32),
    #[error("not of class two: {0}")]
    NotClassTwo(String),
    #[error("{0} is not in the central block")]
    NotCentral(String),
    #[error("restriction of θ is not an isomorphism: {0}")]
    NotIso(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Pc(#[from] PcError),
}

fn pow(p: u64, e: u32) -> Result<i64, FamilyError> {
    p.checked_pow(e)
        .and_then(|x| i64::try_from(x).ok())
        .filter(|&x| x < (1 << 40))
        .ok_or_else(|| FamilyError::BadParameter(format!("{p}^{e} is too large")))
}

fn check_prime(p: u64) -> Result<(), FamilyError> {
    if !is_prime(p) {
        return Err(PcError::NotPrime(p).into());
    }
    Ok(())
}

/// The six class-2 extensions of `C_{p^r}²` by `C_{p^{2r}}²`, of order
/// `p^{6r}`.
///
/// Generators `a1, a2` have order `p^r`; `b1, b2` have relative order
/// `p^r` with `b_i^{p^r} = c_i`, and `c1, c2` are central of order `p^r`.
pub fn series_g(i: u32, p: u64, r: u32) -> Result<PcPresentation, FamilyError> {
    if !(1..=6).contains(&i) {
        return Err(FamilyError::BadIndex(i));
    }
    check_prime(p)?;
    if p == 2 {
        return Err(FamilyError::EvenPrime(p));
    }
    if r == 0 {
        return Err(FamilyError::BadParameter("r must be at least 1".into()));
    }
    let q = pow(p, r)?;
    let b = PcBuilder::new(format!("G{i}(p={p},r={r})"), p)
        .gen("a1", q)
        .gen("a2", q)
        .gen("b1", q)
        .gen("b2", q)
        .central("c1", q)
        .central("c2", q)
        .pow("b1", &[("c1", 1)])
        .pow("b2", &[("c2", 1)]);
    let b = match i {
        1 => b.comm("b1", "a1", &[("c2", 1)]).comm("b2", "a2", &[("c1", 1)]),
        2 => b.comm("b1", "a1", &[("c2", 1)]).comm("b2", "a2", &[("c2", 1)]),
        3 => b.comm("b1", "a1", &[("c1", 1)]).comm("b2", "a2", &[("c2", 1)]).comm("a1", "a2", &[("c2", 1)]),
        4 => b.comm("b1", "a1", &[("c2", 1)]).comm("b2", "a2", &[("c1", 1), ("c2", 1)]),
        5 => b.comm("b1", "a1", &[("c1", 1), ("c2", 1)]).comm("b2", "a2", &[("c1", 1), ("c2", 1)]),
        _ => b.comm("b1", "a1", &[("c1", 1)]).comm("b2", "a2", &[("c2", 1)]).comm("a1", "a2", &[("c1", 1)]),
    };
    Ok(b.build()?)
}

/// Cyclic group of order `p^e` on one generator.
pub fn cyclic(p: u64, e: u32) -> Result<PcPresentation, FamilyError> {
    check_prime(p)?;
    if e == 0 {
        return Err(FamilyError::BadParameter("exponent must be at least 1".into()));
    }
    Ok(PcBuilder::new(format!("C{}", pow(p, e)?), p).gen("g", pow(p, e)?).build()?)
}

/// `⟨a, b, c | [b,a] = c⟩` with all generators of order `p`.
pub fn heisenberg(p: u64) -> Result<PcPresentation, FamilyError> {
    check_prime(p)?;
    let q = p as i64;
    Ok(PcBuilder::new(format!("H(p={p})"), p).gen("a", q).gen("b", q).central("c", q).comm("b", "a", &[("c", 1)]).build()?)
}

/// `⟨a, b | [b,a] = b^{p^r}, a^{p^a} = b^{p^b} = 1⟩` with `z = b^{p^r}`.
pub fn metacyclic_split(p: u64, r: u32, b: u32, a: u32) -> Result<PcPresentation, FamilyError> {
    check_prime(p)?;
    if b < 2 || r < 1 || r > b - 1 || a < 1 {
        return Err(FamilyError::BadParameter(format!("need 1 <= r <= b-1, b >= 2, a >= 1 (r={r}, b={b}, a={a})")));
    }
    if 2 * r < b {
        return Err(FamilyError::NotClassTwo(format!("b^{} is not central when 2r < b (r={r}, b={b})", pow(p, r)?)));
    }
    let g = PcBuilder::new(format!("M(p={p},r={r},b={b},a={a})"), p)
        .gen("a", pow(p, a)?)
        .gen("b", pow(p, r)?)
        .central("z", pow(p, b - r)?)
        .pow("b", &[("z", 1)])
        .comm("b", "a", &[("z", 1)])
        .assemble()?;
    g.validate().map_err(|e| match e {
        PcError::InconsistentPresentation(d) => {
            FamilyError::BadParameter(format!("a^{} does not centralize b: {d}", pow(p, a).unwrap_or(0)))
        }
        e => e.into(),
    })?;
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtraspecialKind {
    /// Exponent `p` (for odd `p`).
    ExponentP,
    /// Exponent `p²`.
    ExponentP2,
}

/// Extraspecial group of order `p^{2n+1}`, an iterated central product
/// of Heisenberg groups, with one metacyclic factor for exponent `p²`.
///
/// Generators are renamed `a1, b1, ..., an, bn, c`.
pub fn extraspecial(p: u64, n: u32, kind: ExtraspecialKind) -> Result<PcPresentation, FamilyError> {
    Ok(extraspecial_product(p, n, kind)?.0)
}

/// As [`extraspecial`], also returning the last central product step.
pub fn extraspecial_product(
    p: u64,
    n: u32,
    kind: ExtraspecialKind,
) -> Result<(PcPresentation, Option<CentralProduct>), FamilyError> {
    check_prime(p)?;
    if n == 0 {
        return Err(FamilyError::BadParameter("n must be at least 1".into()));
    }
    let h = heisenberg(p)?;
    let mut acc = match kind {
        ExtraspecialKind::ExponentP => h.clone(),
        ExtraspecialKind::ExponentP2 => metacyclic_split(p, 1, 2, 1)?,
    };
    let mut last = None;
    for step in 1..n {
        // H maps onto the most recently adjoined Heisenberg factor, which
        // sits at the front of the previous product; a lone metacyclic
        // factor only has its center matched.
        let c = acc.num_gens() - 1;
        let front_is_heisenberg = kind == ExtraspecialKind::ExponentP || step > 1;
        let mut images = vec![acc.identity(); 3];
        if front_is_heisenberg {
            images[0] = acc.generator(0);
            images[1] = acc.generator(1);
        }
        images[2] = acc.generator(c);
        let theta = GeneratorMap::new(&h, &acc, images)?;
        let mut cp = central_product(&h, &[h.generator(2)], &acc, &[acc.generator(c)], &theta)?;
        cp.relabel(&extraspecial_labels(cp.group.num_noncentral()));
        acc = cp.group.clone();
        last = Some(cp);
    }
    acc = acc.with_labels(&extraspecial_labels(acc.num_noncentral()));
    acc.set_name(format!(
        "extraspecial(p={p},n={n},kind={})",
        match kind {
            ExtraspecialKind::ExponentP => "p",
            ExtraspecialKind::ExponentP2 => "p2",
        }
    ));
    if acc.num_central() != 1 {
        return Err(FamilyError::BadParameter("center did not collapse to one generator".into()));
    }
    if let Some(cp) = last.as_mut() {
        cp.group = acc.clone();
        cp.quotient.group = acc.clone();
    }
    Ok((acc, last))
}

fn extraspecial_labels(noncentral: usize) -> Vec<String> {
    let mut v: Vec<String> = (0..noncentral).map(|i| format!("{}{}", if i % 2 == 0 { "a" } else { "b" }, i / 2 + 1)).collect();
    v.push("c".into());
    v
}

/// Central product of `metacyclic_split(p,r,b,a1)` and
/// `metacyclic_split(p,r,b,a2)` identifying `b1^{p^{b-1}}` with
/// `b2^{p^{b-1}}`; order `p^{a1+a2+2b-1}`.
pub fn corollary_c2(p: u64, r: u32, b: u32, a1: u32, a2: u32) -> Result<PcPresentation, FamilyError> {
    Ok(corollary_c2_product(p, r, b, a1, a2)?.group)
}

pub fn corollary_c2_product(p: u64, r: u32, b: u32, a1: u32, a2: u32) -> Result<CentralProduct, FamilyError> {
    let g1 = metacyclic_split(p, r, b, a1)?;
    let g2 = metacyclic_split(p, r, b, a2)?;
    // b^{p^{b-1}} = z^{p^{b-1-r}}
    let e = pow(p, b - 1 - r)?;
    let k1 = g1.gen_power(2, e);
    let k2 = g2.gen_power(2, e);
    let theta = GeneratorMap::new(&g1, &g2, vec![g2.generator(0), g2.generator(1), g2.generator(2)])?;
    let mut cp = central_product(&g1, &[k1], &g2, &[k2], &theta)?;
    let t = cp.group.num_central();
    let mut labels: Vec<String> = ["a1", "b1", "a2", "b2"].iter().map(|s| s.to_string()).collect();
    labels.extend((1..=t).map(|k| if t == 1 { "z".to_string() } else { format!("z{k}") }));
    cp.relabel(&labels);
    cp.group.set_name(format!("c2(p={p},r={r},b={b},a1={a1},a2={a2})"));
    cp.quotient.group = cp.group.clone();
    Ok(cp)
}

impl CentralProduct {
    pub fn relabel(&mut self, labels: &[String]) {
        let name = self.group.name().to_string();
        self.group = self.group.with_labels(labels);
        self.group.set_name(name);
        self.quotient.group = self.group.clone();
    }
}

#[cfg(test)]
mod tests;
