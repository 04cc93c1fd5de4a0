use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::presentation::{Element, PcPresentation};
use super::PcError;
use crate::lattice::{cokernel_order, hnf, snf, LatticeBasis};

/// Default cap on enumerated elements or pairs.
pub const DEFAULT_CAP: u64 = 1 << 24;

/// Mixed-radix walk over all normal forms.
pub struct ElementIter<'a> {
    pres: &'a PcPresentation,
    next: Option<Vec<i64>>,
}

impl Iterator for ElementIter<'_> {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.pres.orders[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Element(cur))
    }
}

/// Unordered commuting pairs `x <= y` plus the ordered count.
#[derive(Clone, Debug)]
pub struct CommutingPairs {
    pub pairs: Vec<(Element, Element)>,
    pub ordered_count: u64,
}

/// Quotient by a central subgroup together with the maps between the old
/// and new `z`-blocks.
#[derive(Clone, Debug)]
pub struct CentralQuotient {
    pub group: PcPresentation,
    /// Row `k`: image of old central generator `k` in new `z` coordinates.
    pub z_map: Vec<Vec<i64>>,
    /// Row `i`: a preimage of new central generator `i` in old `z` coordinates.
    pub z_lift: Vec<Vec<i64>>,
}

impl CentralQuotient {
    /// Image of `x` under the projection `E -> E/N`.
    pub fn project(&self, source: &PcPresentation, x: &Element) -> Element {
        let m = source.noncentral;
        let mut v = vec![0i64; self.group.num_gens()];
        v[..m].copy_from_slice(&x.0[..m]);
        for (k, &a) in x.0[m..].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (i, &c) in self.z_map[k].iter().enumerate() {
                v[m + i] += a * c;
            }
        }
        self.group.normalize(v)
    }

    /// Canonical preimage of `y` in the source group.
    pub fn lift(&self, source: &PcPresentation, y: &Element) -> Element {
        let m = source.noncentral;
        let mut v = vec![0i64; source.num_gens()];
        v[..m].copy_from_slice(&y.0[..m]);
        for (i, &a) in y.0[m..].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (k, &c) in self.z_lift[i].iter().enumerate() {
                v[m + k] += a * c;
            }
        }
        source.normalize(v)
    }

    /// Maps a `z`-vector of the source into the quotient's `z` coordinates.
    pub fn project_z(&self, z: &[i64]) -> Vec<i64> {
        let t = self.group.num_central();
        let mut out = vec![0i64; t];
        for (k, &a) in z.iter().enumerate() {
            for (i, &c) in self.z_map[k].iter().enumerate() {
                out[i] += a * c;
            }
        }
        out
    }
}

/// Direct product with the generator index maps of both factors.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    pub group: PcPresentation,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl DirectProduct {
    pub fn embed_left(&self, x: &Element) -> Element {
        let mut v = vec![0; self.group.num_gens()];
        for (i, &a) in x.0.iter().enumerate() {
            v[self.left[i]] = a;
        }
        Element(v)
    }

    pub fn embed_right(&self, y: &Element) -> Element {
        let mut v = vec![0; self.group.num_gens()];
        for (i, &a) in y.0.iter().enumerate() {
            v[self.right[i]] = a;
        }
        Element(v)
    }
}

impl PcPresentation {
    pub fn enumerate_elements(&self, cap: u64) -> Result<ElementIter<'_>, PcError> {
        let order = self.order();
        if order > BigInt::from(cap) {
            return Err(PcError::CapExceeded { size: order.to_string(), cap });
        }
        Ok(ElementIter { pres: self, next: Some(vec![0; self.num_gens()]) })
    }

    pub fn elements(&self, cap: u64) -> Result<Vec<Element>, PcError> {
        Ok(self.enumerate_elements(cap)?.collect())
    }

    /// All elements with trivial `z`-block part, i.e. one representative per
    /// coset of the `z`-block span.
    pub fn noncentral_transversal(&self) -> Vec<Element> {
        let m = self.noncentral;
        let n = self.num_gens();
        let mut out = Vec::new();
        let mut cur = vec![0i64; n];
        loop {
            out.push(Element(cur.clone()));
            let mut i = m;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Whether the `z`-vector `z` is the identity of the group.
    pub fn z_is_trivial(&self, z: &[i64]) -> bool {
        self.z_element(z).is_identity()
    }

    pub fn is_central(&self, x: &Element) -> bool {
        (0..self.noncentral).all(|j| self.z_is_trivial(&self.commutator_z(x, &self.generator(j))))
    }

    /// The center, listed element by element.
    pub fn center(&self, cap: u64) -> Result<Vec<Element>, PcError> {
        let order = self.order();
        if order > BigInt::from(cap) {
            return Err(PcError::CapExceeded { size: order.to_string(), cap });
        }
        let m = self.noncentral;
        let mut out = Vec::new();
        let zs: Vec<Element> = self.z_block_elements();
        for x in self.noncentral_transversal() {
            if !self.is_central(&x) {
                continue;
            }
            for z in &zs {
                let mut v = x.0.clone();
                v[m..].copy_from_slice(&z.0[m..]);
                out.push(Element(v));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Elements of the `z`-block span (normal forms have zero noncentral part).
    pub fn z_block_elements(&self) -> Vec<Element> {
        let m = self.noncentral;
        let n = self.num_gens();
        let mut out = Vec::new();
        let mut cur = vec![0i64; n];
        loop {
            out.push(Element(cur.clone()));
            let mut i = n;
            loop {
                if i == m {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Generators of `[G, G]` as `z`-block vectors.
    pub fn derived_subgroup(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for j in 0..self.noncentral {
            for i in 0..j {
                let c = &self.comm[j][i];
                if !self.z_is_trivial(c) && !out.contains(c) {
                    out.push(c.clone());
                }
            }
        }
        out
    }

    /// Lattice in `z` coordinates spanned by `gens` and the `z` relations.
    pub fn z_lattice(&self, gens: &[Vec<i64>]) -> LatticeBasis {
        let mut b = LatticeBasis::from_matrix(&self.z_relations());
        for g in gens {
            b.insert(g.iter().map(|&x| BigInt::from(x)).collect());
        }
        b
    }

    /// Order of the subgroup of the `z`-block generated by `gens`.
    pub fn central_subgroup_order(&self, gens: &[Vec<i64>]) -> BigInt {
        let z_order: BigInt = self.orders[self.noncentral..].iter().map(|&q| BigInt::from(q)).product();
        let m = self.z_lattice(gens).to_matrix();
        let quotient = cokernel_order(&m).expect("z-block quotient is finite");
        z_order / quotient
    }

    pub fn commuting_pairs(&self, cap: u64) -> Result<CommutingPairs, PcError> {
        let order = self.order();
        let sq = &order * &order;
        if sq > BigInt::from(cap) {
            return Err(PcError::CapExceeded { size: sq.to_string(), cap });
        }
        let elems = self.elements(cap)?;
        let mut pairs = Vec::new();
        let mut ordered = 0u64;
        for (a, x) in elems.iter().enumerate() {
            for y in &elems[a..] {
                if self.z_is_trivial(&self.commutator_z(x, y)) {
                    pairs.push((x.clone(), y.clone()));
                    ordered += if x == y { 1 } else { 2 };
                }
            }
        }
        Ok(CommutingPairs { pairs, ordered_count: ordered })
    }

    /// `G / N` for `N` generated by elements of the `z`-block span.
    pub fn quotient_by_central(&self, n: &[Element]) -> Result<PcPresentation, PcError> {
        Ok(self.quotient_with_projection(n)?.group)
    }

    pub fn quotient_with_projection(&self, n: &[Element]) -> Result<CentralQuotient, PcError> {
        let mut gens = Vec::new();
        for x in n {
            if x.len() != self.num_gens() {
                return Err(PcError::IndexOutOfRange(x.len()));
            }
            match self.z_part(x) {
                Some(z) => gens.push(z),
                None => return Err(PcError::NotInCentralBlock(self.format_element(x))),
            }
        }
        self.quotient_by_z_vectors(&gens)
    }

    pub fn quotient_by_z_vectors(&self, gens: &[Vec<i64>]) -> Result<CentralQuotient, PcError> {
        let m = self.noncentral;
        let t = self.num_central();
        let mut rel = self.z_relations();
        for g in gens {
            if g.len() != t {
                return Err(PcError::IndexOutOfRange(g.len()));
            }
            rel.push_row(g.iter().map(|&x| BigInt::from(x)).collect());
        }
        let s = snf(&rel);
        let diag = s.diagonal();
        let v_inv = hnf(&s.v).u;
        let kept: Vec<usize> = (0..t).filter(|&i| !diag[i].is_one()).collect();
        let mut z_map = vec![vec![0i64; kept.len()]; t];
        for (k, row) in z_map.iter_mut().enumerate() {
            for (ni, &i) in kept.iter().enumerate() {
                row[ni] = s.v[(k, i)].to_i64().ok_or(PcError::Overflow)?;
            }
        }
        let mut z_lift = Vec::new();
        for &i in &kept {
            z_lift.push(v_inv.row(i).iter().map(|x| x.to_i64().ok_or(PcError::Overflow)).collect::<Result<Vec<_>, _>>()?);
        }

        let mut labels: Vec<String> = self.labels[..m].to_vec();
        for (ni, lift) in z_lift.iter().enumerate() {
            let unit = lift.iter().filter(|&&x| x != 0).count() == 1 && lift.contains(&1);
            let candidate = if unit {
                let k = lift.iter().position(|&x| x == 1).expect("unit lift");
                self.labels[m + k].clone()
            } else {
                format!("z{}", ni + 1)
            };
            let mut label = candidate.clone();
            let mut bump = 1;
            while labels.contains(&label) {
                bump += 1;
                label = format!("{candidate}_{bump}");
            }
            labels.push(label);
        }

        let new_t = kept.len();
        let mut orders = self.orders[..m].to_vec();
        let mut rel_exponents = self.rel_exponents[..m].to_vec();
        for &i in &kept {
            let d = diag[i].to_i64().ok_or(PcError::Overflow)?;
            if d.is_zero() {
                return Err(PcError::InconsistentPresentation("quotient z-block is infinite".into()));
            }
            let e = super::presentation::prime_power_exponent(d, self.prime)
                .ok_or(PcError::BadRelativeOrder { label: "quotient".into(), order: d })?;
            orders.push(d);
            rel_exponents.push(e);
        }
        let map_z = |z: &[i64]| -> Vec<i64> {
            let mut out = vec![0i64; new_t];
            for (k, &a) in z.iter().enumerate() {
                for (i, &c) in z_map[k].iter().enumerate() {
                    out[i] += a * c;
                }
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o = o.rem_euclid(orders[m + i]);
            }
            out
        };
        let mut power_words = Vec::new();
        for i in 0..m {
            power_words.push(map_z(&self.power_words[i]));
        }
        power_words.extend(std::iter::repeat_n(vec![0i64; new_t], new_t));
        let n_new = m + new_t;
        let mut comm = vec![vec![vec![0i64; new_t]; n_new]; n_new];
        for j in 0..m {
            for i in 0..j {
                let c = map_z(&self.comm[j][i]);
                comm[i][j] = c.iter().map(|x| -x).collect();
                comm[j][i] = c;
            }
        }
        let group = PcPresentation {
            name: format!("{}/N", self.name),
            prime: self.prime,
            labels,
            noncentral: m,
            rel_exponents,
            orders,
            power_words,
            comm,
        };
        group.validate()?;
        Ok(CentralQuotient { group, z_map, z_lift })
    }

    pub fn direct_product(&self, other: &PcPresentation) -> Result<PcPresentation, PcError> {
        Ok(self.direct_product_with_maps(other)?.group)
    }

    pub fn direct_product_with_maps(&self, other: &PcPresentation) -> Result<DirectProduct, PcError> {
        if self.prime != other.prime {
            return Err(PcError::PrimeMismatch(self.prime, other.prime));
        }
        let (m1, m2) = (self.noncentral, other.noncentral);
        let (t1, t2) = (self.num_central(), other.num_central());
        let n = m1 + m2 + t1 + t2;
        let t = t1 + t2;
        let mut left = Vec::new();
        for i in 0..self.num_gens() {
            left.push(if i < m1 { i } else { m1 + m2 + (i - m1) });
        }
        let mut right = Vec::new();
        for i in 0..other.num_gens() {
            right.push(if i < m2 { m1 + i } else { m1 + m2 + t1 + (i - m2) });
        }
        let mut labels = vec![String::new(); n];
        for (i, &k) in left.iter().enumerate() {
            labels[k] = self.labels[i].clone();
        }
        for (i, &k) in right.iter().enumerate() {
            let mut l = other.labels[i].clone();
            while self.labels.contains(&l) {
                l.push('\'');
            }
            labels[k] = l;
        }
        let mut orders = vec![0i64; n];
        let mut rel_exponents = vec![0u32; n];
        let mut power_words = vec![vec![0i64; t]; n];
        let mut comm = vec![vec![vec![0i64; t]; n]; n];
        let widen = |z: &[i64], offset: usize| -> Vec<i64> {
            let mut v = vec![0i64; t];
            v[offset..offset + z.len()].copy_from_slice(z);
            v
        };
        for (src, map, offset) in [(self, &left, 0usize), (other, &right, t1)] {
            for i in 0..src.num_gens() {
                let a = map[i];
                orders[a] = src.orders[i];
                rel_exponents[a] = src.rel_exponents[i];
                power_words[a] = widen(&src.power_words[i], offset);
                for j in 0..src.num_gens() {
                    comm[a][map[j]] = widen(&src.comm[i][j], offset);
                }
            }
        }
        let group = PcPresentation {
            name: format!("{}x{}", self.name, other.name),
            prime: self.prime,
            labels,
            noncentral: m1 + m2,
            rel_exponents,
            orders,
            power_words,
            comm,
        };
        Ok(DirectProduct { group, left, right })
    }
}
