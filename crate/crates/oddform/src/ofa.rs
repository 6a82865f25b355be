//! Odd form algebras: a ring with involution together with a 2-step
//! nilpotent group Delta carrying maps phi, pi, rho and a right action of
//! the multiplicative semigroup of the ring.
//!
//! Special algebras store Delta elements as (pi, rho) pairs with a membership
//! predicate; small non-special fixtures use explicit group tables. A
//! sampler decomposes Delta into slices whose product maps bijectively onto
//! the carrier, so uniform sampling and small-case enumeration never require
//! scanning the ambient product.

use crate::algebra::{Algebra, Elem};
use crate::error::{Error, Result};
use crate::quadmod::QuadraticModule;
use once_cell::sync::OnceCell;
use smallvec::SmallVec;
use std::collections::HashSet;
use std::sync::Arc;

/// An element of Delta.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum DElem {
    /// (pi(u), rho(u)) for special carriers.
    Pair(Elem, Elem),
    /// Index into an explicit table.
    Idx(u32),
}

/// Explicit small Delta with complete tables.
#[derive(Clone)]
pub struct DeltaTable {
    pub size: usize,
    pub add: Vec<u32>,
    pub neg: Vec<u32>,
    pub zero: u32,
    /// scale[u * |R| + a] = u . a
    pub scale: Vec<u32>,
    /// kscale[u * |K| + k] = u . k
    pub kscale: Vec<u32>,
    /// kmul[k * size + u] = k u (left module structure on the augmentation)
    pub kmul: Vec<u32>,
    /// phi[a] for every ring element index
    pub phi: Vec<u32>,
    pub pi: Vec<u16>,
    pub rho: Vec<u16>,
    pub aug: Vec<bool>,
    pub special: bool,
}

impl std::fmt::Debug for DeltaTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DeltaTable(size {})", self.size)
    }
}

#[derive(Clone, Debug)]
pub enum DeltaKind {
    /// Largest special carrier: {(a, b) : b + bbar + abar a = 0}.
    PairsMax,
    /// Special carrier cut out of the maximal one by the form-parameter
    /// condition of a quadratic module, one constraint per module vector.
    PairsQuad(Arc<QuadraticModule>),
    Table(DeltaTable),
}

/// A slice of Delta used for sampling and small enumeration. The ordered
/// product over all slices maps bijectively onto Delta.
#[derive(Clone, Debug)]
pub enum SamplerPiece {
    Listed(Vec<DElem>),
    /// {q . a : a in strip}
    QRow { q: DElem, strip: Vec<Elem> },
    /// {phi(a) : a in strip}
    Phi { strip: Vec<Elem> },
}

#[derive(Clone, Debug, Default)]
pub struct DeltaSampler {
    pub pieces: Vec<SamplerPiece>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AugKind {
    /// D = phi(R), the smallest augmentation.
    PhiR,
    /// Flags stored in the Delta table.
    Table,
}

#[derive(Debug)]
pub struct OddFormAlgebra {
    pub ring: Algebra,
    pub delta: DeltaKind,
    pub aug: AugKind,
    pub sampler: DeltaSampler,
    pub unital: bool,
    pub label: String,
    phi_image: OnceCell<Option<HashSet<SmallVec<[u8; 24]>>>>,
}

impl Clone for OddFormAlgebra {
    fn clone(&self) -> Self {
        OddFormAlgebra {
            ring: self.ring.clone(),
            delta: self.delta.clone(),
            aug: self.aug,
            sampler: self.sampler.clone(),
            unital: self.unital,
            label: self.label.clone(),
            phi_image: OnceCell::new(),
        }
    }
}

impl OddFormAlgebra {
    pub fn new(
        ring: Algebra,
        delta: DeltaKind,
        aug: AugKind,
        sampler: DeltaSampler,
        unital: bool,
        label: String,
    ) -> OddFormAlgebra {
        OddFormAlgebra { ring, delta, aug, sampler, unital, label, phi_image: OnceCell::new() }
    }

    /// Zero odd form algebra over a base ring.
    pub fn zero(base: Arc<crate::ring::CommRing>) -> OddFormAlgebra {
        let ring = Algebra::zero_algebra(base);
        let z = DElem::Pair(ring.zero(), ring.zero());
        OddFormAlgebra::new(
            ring,
            DeltaKind::PairsMax,
            AugKind::PhiR,
            DeltaSampler { pieces: vec![SamplerPiece::Listed(vec![z])] },
            true,
            "0".into(),
        )
    }

    /// The base ring as a special unital odd form algebra with the maximal
    /// carrier.
    pub fn base_max(base: Arc<crate::ring::CommRing>) -> Result<OddFormAlgebra> {
        let ring = Algebra::base_as_algebra(base);
        let label = format!("({}, max)", ring.label);
        let mut ofa = OddFormAlgebra::new(
            ring,
            DeltaKind::PairsMax,
            AugKind::PhiR,
            DeltaSampler::default(),
            true,
            label,
        );
        ofa.sampler = ofa.scan_sampler()?;
        Ok(ofa)
    }

    pub fn special(&self) -> bool {
        match &self.delta {
            DeltaKind::Table(t) => t.special,
            _ => true,
        }
    }

    pub fn dzero(&self) -> DElem {
        match &self.delta {
            DeltaKind::Table(t) => DElem::Idx(t.zero),
            _ => DElem::Pair(self.ring.zero(), self.ring.zero()),
        }
    }

    pub fn pi(&self, u: &DElem) -> Elem {
        match (u, &self.delta) {
            (DElem::Pair(p, _), _) => p.clone(),
            (DElem::Idx(i), DeltaKind::Table(t)) => SmallVec::from_slice(&[t.pi[*i as usize]]),
            _ => unreachable!("mixed delta representations"),
        }
    }

    pub fn rho(&self, u: &DElem) -> Elem {
        match (u, &self.delta) {
            (DElem::Pair(_, r), _) => r.clone(),
            (DElem::Idx(i), DeltaKind::Table(t)) => SmallVec::from_slice(&[t.rho[*i as usize]]),
            _ => unreachable!("mixed delta representations"),
        }
    }

    pub fn dadd(&self, u: &DElem, v: &DElem) -> DElem {
        match (u, v, &self.delta) {
            (DElem::Pair(p1, r1), DElem::Pair(p2, r2), _) => {
                let p = self.ring.add(p1, p2);
                // rho(u + v) = rho(u) - pi(u)bar pi(v) + rho(v)
                let cross = self.ring.mul(&self.ring.invol(p1), p2);
                let r = self.ring.add(&self.ring.sub(r1, &cross), r2);
                DElem::Pair(p, r)
            }
            (DElem::Idx(i), DElem::Idx(j), DeltaKind::Table(t)) => {
                DElem::Idx(t.add[*i as usize * t.size + *j as usize])
            }
            _ => unreachable!("mixed delta representations"),
        }
    }

    pub fn dneg(&self, u: &DElem) -> DElem {
        match (u, &self.delta) {
            (DElem::Pair(p, r), _) => {
                DElem::Pair(self.ring.neg(p), self.ring.invol(r))
            }
            (DElem::Idx(i), DeltaKind::Table(t)) => DElem::Idx(t.neg[*i as usize]),
            _ => unreachable!("mixed delta representations"),
        }
    }

    pub fn dsub(&self, u: &DElem, v: &DElem) -> DElem {
        self.dadd(u, &self.dneg(v))
    }

    /// u . a for a ring element a.
    pub fn dscale(&self, u: &DElem, a: &Elem) -> DElem {
        match (u, &self.delta) {
            (DElem::Pair(p, r), _) => {
                let abar = self.ring.invol(a);
                DElem::Pair(self.ring.mul(p, a), self.ring.mul(&self.ring.mul(&abar, r), a))
            }
            (DElem::Idx(i), DeltaKind::Table(t)) => {
                // scale is laid out size x |R|; phi is indexed by the ring
                let rn = t.phi.len();
                DElem::Idx(t.scale[*i as usize * rn + a[0] as usize])
            }
            _ => unreachable!("mixed delta representations"),
        }
    }

    /// u . k for a base scalar k.
    pub fn dscale_k(&self, u: &DElem, k: u16) -> DElem {
        match (u, &self.delta) {
            (DElem::Pair(p, r), _) => {
                let k2 = self.ring.base.mul(k, k);
                DElem::Pair(self.ring.scalar(k, p), self.ring.scalar(k2, r))
            }
            (DElem::Idx(i), DeltaKind::Table(t)) => {
                DElem::Idx(t.kscale[*i as usize * self.ring.base.size() + k as usize])
            }
            _ => unreachable!("mixed delta representations"),
        }
    }

    /// u . (a + 1), the action of a unitalized ring element.
    pub fn dscale_alpha(&self, u: &DElem, beta: &Elem) -> DElem {
        // u.(a + 1) = u.a + phi(rho(u) a) + u
        let t1 = self.dscale(u, beta);
        let t2 = self.phi(&self.ring.mul(&self.rho(u), beta));
        self.dadd(&self.dadd(&t1, &t2), u)
    }

    pub fn phi(&self, a: &Elem) -> DElem {
        match &self.delta {
            DeltaKind::Table(t) => DElem::Idx(t.phi[a[0] as usize]),
            _ => DElem::Pair(self.ring.zero(), self.ring.sub(a, &self.ring.invol(a))),
        }
    }

    /// Left module structure k v on the augmentation.
    pub fn kmul_aug(&self, k: u16, v: &DElem) -> DElem {
        match (v, &self.delta) {
            (DElem::Pair(p, r), _) => DElem::Pair(self.ring.scalar(k, p), self.ring.scalar(k, r)),
            (DElem::Idx(i), DeltaKind::Table(t)) => {
                DElem::Idx(t.kmul[k as usize * t.size + *i as usize])
            }
            _ => unreachable!("mixed delta representations"),
        }
    }

    /// Membership of u in Delta.
    pub fn delta_contains(&self, u: &DElem) -> bool {
        match (u, &self.delta) {
            (DElem::Idx(i), DeltaKind::Table(t)) => (*i as usize) < t.size,
            (DElem::Pair(p, r), DeltaKind::PairsMax) => self.lmax_condition(p, r),
            (DElem::Pair(p, r), DeltaKind::PairsQuad(qm)) => {
                if !self.lmax_condition(p, r) {
                    return false;
                }
                // theta_v(u) = (pi(u) v, B(v, rho(u) v)) must lie in L
                let m = qm.rank;
                for v in qm.vectors() {
                    let pv = apply_first(&self.ring, p, &v, m);
                    let rv = apply_first(&self.ring, r, &v, m);
                    let x = qm.bilinear(&v, &rv);
                    if !qm.l_contains(&pv, x) {
                        return false;
                    }
                }
                true
            }
            _ => false,
        }
    }

    fn lmax_condition(&self, p: &Elem, r: &Elem) -> bool {
        // rho + rho-bar + pi-bar pi = 0
        let s = self.ring.add(
            &self.ring.add(r, &self.ring.invol(r)),
            &self.ring.mul(&self.ring.invol(p), p),
        );
        self.ring.is_zero(&s)
    }

    /// Membership in the augmentation D.
    pub fn aug_contains(&self, v: &DElem) -> Result<bool> {
        match (&self.aug, v, &self.delta) {
            (AugKind::Table, DElem::Idx(i), DeltaKind::Table(t)) => Ok(t.aug[*i as usize]),
            (AugKind::PhiR, _, _) => {
                if !self.ring.is_zero(&self.pi(v)) {
                    return Ok(false);
                }
                let img = self.phi_image_set()?;
                match img {
                    Some(set) => Ok(set.contains(&self.ring.canonical_key(&self.rho(v)))),
                    None => Err(Error::SizeBound("phi image too large to decide membership".into())),
                }
            }
            _ => Err(Error::Invalid("augmentation representation mismatch".into())),
        }
    }

    fn phi_image_set(&self) -> Result<&Option<HashSet<SmallVec<[u8; 24]>>>> {
        Ok(self.phi_image.get_or_init(|| {
            // additive closure of {phi-values of k * spanning elements}
            let mut gens: Vec<Elem> = Vec::new();
            for g in self.ring.spanning_set() {
                for k in self.ring.base.elements() {
                    let kg = self.ring.scalar(k, &g);
                    gens.push(self.ring.sub(&kg, &self.ring.invol(&kg)));
                }
            }
            let mut set: HashSet<SmallVec<[u8; 24]>> = HashSet::new();
            let mut frontier: Vec<Elem> = vec![self.ring.zero()];
            set.insert(self.ring.canonical_key(&self.ring.zero()));
            while let Some(x) = frontier.pop() {
                for g in &gens {
                    let y = self.ring.add(&x, g);
                    let key = self.ring.canonical_key(&y);
                    if set.insert(key) {
                        if set.len() > (1 << 18) {
                            return None;
                        }
                        frontier.push(y);
                    }
                }
            }
            Some(set)
        }))
    }

    /// Number of Delta elements (product over sampler slices).
    pub fn delta_count(&self) -> u128 {
        let mut n = 1u128;
        for p in &self.sampler.pieces {
            n *= match p {
                SamplerPiece::Listed(v) => v.len() as u128,
                SamplerPiece::QRow { strip, .. } => strip.len() as u128,
                SamplerPiece::Phi { strip } => strip.len() as u128,
            };
        }
        n
    }

    fn piece_elem(&self, piece: &SamplerPiece, idx: usize) -> DElem {
        match piece {
            SamplerPiece::Listed(v) => v[idx].clone(),
            SamplerPiece::QRow { q, strip } => self.dscale(q, &strip[idx]),
            SamplerPiece::Phi { strip } => self.phi(&strip[idx]),
        }
    }

    fn piece_len(piece: &SamplerPiece) -> usize {
        match piece {
            SamplerPiece::Listed(v) => v.len(),
            SamplerPiece::QRow { strip, .. } => strip.len(),
            SamplerPiece::Phi { strip } => strip.len(),
        }
    }

    pub fn random_delta(&self, rng: &mut impl rand::Rng) -> DElem {
        let mut acc = self.dzero();
        for p in &self.sampler.pieces {
            let n = Self::piece_len(p);
            if n == 0 {
                continue;
            }
            let u = self.piece_elem(p, rng.gen_range(0..n));
            acc = self.dadd(&acc, &u);
        }
        acc
    }

    /// All Delta elements, guarded.
    pub fn delta_elements(&self) -> Result<Vec<DElem>> {
        let count = self.delta_count();
        if count > (1 << 20) {
            return Err(Error::SizeBound(format!("delta has {count} elements")));
        }
        let mut out = Vec::with_capacity(count as usize);
        let lens: Vec<usize> = self.sampler.pieces.iter().map(Self::piece_len).collect();
        if lens.iter().any(|&l| l == 0) {
            return Ok(out);
        }
        let mut idx = vec![0usize; lens.len()];
        loop {
            let mut acc = self.dzero();
            for (pi, p) in self.sampler.pieces.iter().enumerate() {
                acc = self.dadd(&acc, &self.piece_elem(p, idx[pi]));
            }
            out.push(acc);
            let mut i = 0;
            loop {
                if i == idx.len() {
                    return Ok(out);
                }
                idx[i] += 1;
                if idx[i] < lens[i] {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    /// Sampler built by scanning R x R for the membership predicate; only
    /// for small special carriers.
    pub fn scan_sampler(&self) -> Result<DeltaSampler> {
        let elems = self.ring.elements()?;
        if (elems.len() as u128).pow(2) > (1 << 22) {
            return Err(Error::SizeBound("carrier too large for a pair scan".into()));
        }
        let mut listed = Vec::new();
        for p in &elems {
            for r in &elems {
                let u = DElem::Pair(p.clone(), r.clone());
                if self.delta_contains(&u) {
                    listed.push(u);
                }
            }
        }
        Ok(DeltaSampler { pieces: vec![SamplerPiece::Listed(listed)] })
    }

    pub fn delta_key(&self, u: &DElem) -> SmallVec<[u8; 24]> {
        match u {
            DElem::Pair(p, r) => {
                let mut k = self.ring.canonical_key(p);
                k.extend(self.ring.canonical_key(r));
                k
            }
            DElem::Idx(i) => SmallVec::from_slice(&i.to_le_bytes()),
        }
    }

    pub fn format_delta(&self, u: &DElem) -> String {
        match u {
            DElem::Pair(p, r) => format!("({};{})", self.ring.format_elem(p), self.ring.format_elem(r)),
            DElem::Idx(i) => format!("#{i}"),
        }
    }

    /// Replace the augmentation by the smallest one, D = phi(R).
    pub fn min_augmentation(&self) -> OddFormAlgebra {
        let mut out = self.clone();
        match &mut out.delta {
            DeltaKind::Table(t) => {
                let mut aug = vec![false; t.size];
                for &p in &t.phi {
                    aug[p as usize] = true;
                }
                // close under addition (phi(R) is a subgroup since phi is additive)
                t.aug = aug;
                out.aug = AugKind::Table;
            }
            _ => {
                out.aug = AugKind::PhiR;
            }
        }
        out
    }
}

/// Apply the module action of a ring element on a vector, first matrix
/// component for pair representations.
pub fn apply_first(ring: &Algebra, a: &Elem, v: &[u16], m: usize) -> SmallVec<[u16; 8]> {
    let b = &ring.base;
    let mut out: SmallVec<[u16; 8]> = SmallVec::from_elem(b.zero(), m);
    for i in 0..m {
        let mut acc = b.zero();
        for j in 0..m {
            acc = b.add(acc, b.mul(a[i * m + j], v[j]));
        }
        out[i] = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CommRing;

    fn zmod(n: usize) -> Arc<CommRing> {
        Arc::new(CommRing::zmod(n).unwrap())
    }

    #[test]
    fn zmod4_max_carrier() {
        let ofa = OddFormAlgebra::base_max(zmod(4)).unwrap();
        // (a, b) with 2b + a^2 = 0: a even, b in {0, 2}
        assert_eq!(ofa.delta_count(), 4);
        let elems = ofa.delta_elements().unwrap();
        for u in &elems {
            assert!(ofa.delta_contains(u));
            assert!(ofa.delta_contains(&ofa.dneg(u)));
            for v in &elems {
                assert!(ofa.delta_contains(&ofa.dadd(u, v)));
            }
        }
    }

    #[test]
    fn derived_identities() {
        // rho(0) = 0, rho(-u) = rho(u)-bar, u.0 = 0
        let ofa = OddFormAlgebra::base_max(zmod(9)).unwrap();
        let z = ofa.dzero();
        assert!(ofa.ring.is_zero(&ofa.rho(&z)));
        for u in ofa.delta_elements().unwrap() {
            let n = ofa.dneg(&u);
            assert_eq!(ofa.rho(&n), ofa.ring.invol(&ofa.rho(&u)));
            let z0 = ofa.dscale(&u, &ofa.ring.zero());
            assert_eq!(z0, ofa.dzero());
        }
    }

    #[test]
    fn phi_image_membership() {
        let ofa = OddFormAlgebra::base_max(zmod(4)).unwrap();
        // trivial involution: phi(a) = (0, 0) always
        let v = ofa.phi(&SmallVec::from_slice(&[3]));
        assert_eq!(v, ofa.dzero());
        assert!(ofa.aug_contains(&v).unwrap());
        let not_in = DElem::Pair(ofa.ring.zero(), SmallVec::from_slice(&[2]));
        assert!(!ofa.aug_contains(&not_in).unwrap());
    }

    #[test]
    fn min_augmentation_idempotent() {
        let ofa = OddFormAlgebra::base_max(zmod(4)).unwrap();
        let a1 = ofa.min_augmentation();
        let a2 = a1.min_augmentation();
        assert_eq!(a1.aug, a2.aug);
    }
}
