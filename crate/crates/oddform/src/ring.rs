//! Finite commutative unital base rings with exact table arithmetic.
//!
//! Every base ring is stored as complete addition and multiplication tables
//! over element indices `0..n`, so all downstream arithmetic is exact and
//! byte-stable. Builders cover `Z/n` and the finite fields `GF(p^e)`;
//! localization at a multiplicative subset is realized as a quotient, which
//! is the correct construction for finite rings.

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::sync::Arc;

/// Default bound on the number of elements in a constructed carrier.
pub const DEFAULT_CARRIER_BOUND: usize = 4096;

/// A finite commutative unital ring given by explicit operation tables.
#[derive(Clone)]
pub struct CommRing {
    size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    zero: u16,
    one: u16,
    units: Vec<Option<u16>>,
    label: String,
}

impl std::fmt::Debug for CommRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CommRing({}, size {})", self.label, self.size)
    }
}

impl CommRing {
    /// Builds a ring from raw tables. Ring axioms are enforced exhaustively
    /// for carriers of at most 64 elements and on a fixed sample above that.
    pub fn from_tables(
        size: usize,
        add: Vec<u16>,
        mul: Vec<u16>,
        zero: u16,
        one: u16,
        label: String,
    ) -> Result<CommRing> {
        if size == 0 || add.len() != size * size || mul.len() != size * size {
            return Err(Error::Shape("ring tables must be size*size".into()));
        }
        let mut neg = vec![u16::MAX; size];
        for a in 0..size {
            for b in 0..size {
                if add[a * size + b] == zero {
                    neg[a] = b as u16;
                }
            }
            if neg[a] == u16::MAX {
                return Err(Error::Invalid(format!("element {a} has no additive inverse")));
            }
        }
        let mut units = vec![None; size];
        for a in 0..size {
            for b in 0..size {
                if mul[a * size + b] == one && mul[b * size + a] == one {
                    units[a] = Some(b as u16);
                }
            }
        }
        let ring = CommRing { size, add, mul, neg, zero, one, units, label };
        ring.check_axioms()?;
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.size;
        let triples: Vec<(u16, u16, u16)> = if n <= 64 {
            let mut v = Vec::with_capacity(n * n * n);
            for a in 0..n as u16 {
                for b in 0..n as u16 {
                    for c in 0..n as u16 {
                        v.push((a, b, c));
                    }
                }
            }
            v
        } else {
            // Deterministic sample: stride through the cube.
            let mut v = Vec::new();
            let step = (n * n * n / 100_000).max(1);
            let mut i = 0usize;
            while i < n * n * n {
                let a = (i / (n * n)) as u16;
                let b = ((i / n) % n) as u16;
                let c = (i % n) as u16;
                v.push((a, b, c));
                i += step;
            }
            v
        };
        for &(a, b, c) in &triples {
            if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                return Err(Error::Invalid("ring is not commutative".into()));
            }
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                return Err(Error::Invalid("addition is not associative".into()));
            }
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::Invalid("multiplication is not associative".into()));
            }
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                return Err(Error::Invalid("distributivity fails".into()));
            }
        }
        for a in 0..n as u16 {
            if self.add(a, self.zero) != a || self.mul(a, self.one) != a {
                return Err(Error::Invalid("identity axioms fail".into()));
            }
        }
        if n > 1 && self.zero == self.one {
            return Err(Error::Invalid("one = zero in a ring with more than one element".into()));
        }
        Ok(())
    }

    /// The ring `Z/n`.
    pub fn zmod(n: usize) -> Result<CommRing> {
        if n == 0 {
            return Err(Error::Precondition("zmod requires n >= 1".into()));
        }
        if n > DEFAULT_CARRIER_BOUND {
            return Err(Error::SizeBound(format!("zmod({n}) exceeds carrier bound")));
        }
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = ((a + b) % n) as u16;
                mul[a * n + b] = ((a * b) % n) as u16;
            }
        }
        let one = if n == 1 { 0 } else { 1 };
        CommRing::from_tables(n, add, mul, 0, one, format!("z:{n}"))
    }

    /// The field `GF(p^e)`, realized as `F_p[x]` modulo the lexicographically
    /// first monic irreducible polynomial of degree `e`.
    pub fn gf(p: usize, e: usize) -> Result<CommRing> {
        if e == 0 {
            return Err(Error::Precondition("gf requires e >= 1".into()));
        }
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        let size = p.checked_pow(e as u32).filter(|&s| s <= DEFAULT_CARRIER_BOUND).ok_or_else(
            || Error::SizeBound(format!("gf({p},{e}) exceeds carrier bound")),
        )?;
        if e == 1 {
            let mut r = CommRing::zmod(p)?;
            r.label = format!("gf:{p}");
            return Ok(r);
        }
        let modulus = first_irreducible(p, e);
        // Elements are polynomials of degree < e encoded base p.
        let decode = |idx: usize| -> Vec<usize> {
            let mut c = vec![0usize; e];
            let mut m = idx;
            for ci in c.iter_mut() {
                *ci = m % p;
                m /= p;
            }
            c
        };
        let encode = |c: &[usize]| -> usize { c.iter().rev().fold(0, |acc, &ci| acc * p + ci) };
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for a in 0..size {
            let ca = decode(a);
            for b in 0..size {
                let cb = decode(b);
                let mut cs = vec![0usize; e];
                for i in 0..e {
                    cs[i] = (ca[i] + cb[i]) % p;
                }
                add[a * size + b] = encode(&cs) as u16;
                let prod = poly_mul_mod(&ca, &cb, &modulus, p);
                mul[a * size + b] = encode(&prod) as u16;
            }
        }
        CommRing::from_tables(size, add, mul, 0, 1, format!("gf:{p}:{e}"))
    }

    pub fn size(&self) -> usize {
        self.size
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn zero(&self) -> u16 {
        self.zero
    }
    pub fn one(&self) -> u16 {
        self.one
    }
    #[inline(always)]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size + b as usize]
    }
    #[inline(always)]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size + b as usize]
    }
    #[inline(always)]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }
    #[inline(always)]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }
    pub fn inv(&self, a: u16) -> Option<u16> {
        self.units[a as usize]
    }
    pub fn is_unit(&self, a: u16) -> bool {
        self.units[a as usize].is_some()
    }
    pub fn elements(&self) -> impl Iterator<Item = u16> + '_ {
        (0..self.size as u16).into_iter()
    }
    pub fn units(&self) -> Vec<u16> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }
    /// Image of the integer `k` under the unique map `Z -> K`.
    pub fn from_int(&self, k: i64) -> u16 {
        let mut acc = self.zero;
        let steps = k.unsigned_abs();
        for _ in 0..steps % (additive_order_bound(self) as u64) {
            acc = self.add(acc, self.one);
        }
        if k < 0 {
            self.neg(acc)
        } else {
            acc
        }
    }

    /// Smallest `m >= 1` with `m * 1 = 0`.
    pub fn characteristic(&self) -> usize {
        let mut acc = self.one;
        let mut m = 1;
        while acc != self.zero {
            acc = self.add(acc, self.one);
            m += 1;
        }
        m
    }

    /// The quotient ring `K / I` together with the projection table.
    /// `ideal` must be an additive subgroup closed under multiplication by K.
    pub fn quotient(&self, ideal: &BTreeSet<u16>) -> Result<(Arc<CommRing>, Vec<u16>)> {
        for &a in ideal {
            for &b in ideal {
                if !ideal.contains(&self.add(a, b)) {
                    return Err(Error::Precondition("ideal not closed under addition".into()));
                }
            }
            for k in self.elements() {
                if !ideal.contains(&self.mul(k, a)) {
                    return Err(Error::Precondition("ideal not closed under multiplication".into()));
                }
            }
        }
        if !ideal.contains(&self.zero) {
            return Err(Error::Precondition("ideal must contain zero".into()));
        }
        // Canonical representative: least index in the coset.
        let mut rep = vec![u16::MAX; self.size];
        let mut reps = Vec::new();
        for a in self.elements() {
            if rep[a as usize] != u16::MAX {
                continue;
            }
            let mut coset: Vec<u16> = ideal.iter().map(|&i| self.add(a, i)).collect();
            coset.sort_unstable();
            let r = coset[0];
            for c in coset {
                rep[c as usize] = r;
            }
        }
        for a in self.elements() {
            if rep[a as usize] == a {
                reps.push(a);
            }
        }
        let n = reps.len();
        let idx_of = |r: u16| reps.binary_search(&r).unwrap() as u16;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                add[i * n + j] = idx_of(rep[self.add(a, b) as usize]);
                mul[i * n + j] = idx_of(rep[self.mul(a, b) as usize]);
            }
        }
        let zero = idx_of(rep[self.zero as usize]);
        let one = idx_of(rep[self.one as usize]);
        let quot = CommRing::from_tables(n, add, mul, zero, one, format!("{}/I", self.label))?;
        let proj: Vec<u16> = (0..self.size as u16).map(|a| idx_of(rep[a as usize])).collect();
        Ok((Arc::new(quot), proj))
    }
}

fn additive_order_bound(r: &CommRing) -> usize {
    r.size.max(1)
}

fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Product of two coefficient vectors reduced modulo a monic polynomial.
fn poly_mul_mod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let e = modulus.len() - 1;
    let mut prod = vec![0usize; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // Reduce: x^e = -(modulus without leading term).
    for d in (e..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for k in 0..e {
            let sub = (c * modulus[k]) % p;
            prod[d - e + k] = (prod[d - e + k] + p - sub) % p;
        }
    }
    prod.truncate(e);
    prod
}

/// Lexicographically first monic irreducible polynomial of degree e over F_p,
/// found by exhaustive root/factor search (degrees here are tiny).
fn first_irreducible(p: usize, e: usize) -> Vec<usize> {
    let count = p.pow(e as u32);
    for idx in 0..count {
        let mut coeffs = vec![0usize; e + 1];
        let mut m = idx;
        for c in coeffs.iter_mut().take(e) {
            *c = m % p;
            m /= p;
        }
        coeffs[e] = 1;
        if poly_is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over a finite field")
}

fn poly_is_irreducible(f: &[usize], p: usize) -> bool {
    let e = f.len() - 1;
    if e == 1 {
        return true;
    }
    // Trial division by all monic polynomials of degree 1..=e/2.
    for d in 1..=e / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0usize; d + 1];
            let mut m = idx;
            for c in g.iter_mut().take(d) {
                *c = m % p;
                m /= p;
            }
            g[d] = 1;
            if poly_divides(&g, f, p) {
                return false;
            }
        }
    }
    true
}

fn poly_divides(g: &[usize], f: &[usize], p: usize) -> bool {
    // Synthetic division of f by monic g; returns true when the remainder is 0.
    let mut rem: Vec<usize> = f.to_vec();
    let dg = g.len() - 1;
    while rem.len() >= g.len() {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - g.len();
        if lead != 0 {
            for k in 0..=dg {
                let sub = (lead * g[k]) % p;
                rem[shift + k] = (rem[shift + k] + p - sub) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// A multiplicative subset of a base ring: contains 1, closed under products.
#[derive(Clone, Debug)]
pub struct MultSubset {
    elements: BTreeSet<u16>,
}

impl MultSubset {
    /// Multiplicative closure of the given generators together with 1.
    pub fn generated(ring: &CommRing, gens: &[u16]) -> MultSubset {
        let mut elements: BTreeSet<u16> = BTreeSet::new();
        elements.insert(ring.one());
        let mut queue: Vec<u16> = gens.to_vec();
        queue.push(ring.one());
        while let Some(s) = queue.pop() {
            if !elements.insert(s) {
                continue;
            }
            let snapshot: Vec<u16> = elements.iter().copied().collect();
            for t in snapshot {
                queue.push(ring.mul(s, t));
            }
        }
        MultSubset { elements }
    }

    pub fn contains(&self, s: u16) -> bool {
        self.elements.contains(&s)
    }
    pub fn iter(&self) -> impl Iterator<Item = u16> + '_ {
        self.elements.iter().copied()
    }
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Localization of a finite commutative ring at a multiplicative subset,
/// realized as the quotient by the S-torsion ideal `{k | sk = 0 for some s}`.
/// Returns the localized ring and the canonical projection table.
pub fn localize_finite(ring: &CommRing, s: &MultSubset) -> Result<(Arc<CommRing>, Vec<u16>)> {
    let mut kernel: BTreeSet<u16> = BTreeSet::new();
    for k in ring.elements() {
        if s.iter().any(|si| ring.mul(si, k) == ring.zero()) {
            kernel.insert(k);
        }
    }
    ring.quotient(&kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_one_is_the_zero_ring() {
        let r = CommRing::zmod(1).unwrap();
        assert_eq!(r.size(), 1);
        assert_eq!(r.zero(), r.one());
    }

    #[test]
    fn zmod_four_arithmetic() {
        let r = CommRing::zmod(4).unwrap();
        assert_eq!(r.add(2, 3), 1);
        assert_eq!(r.mul(2, 2), 0);
    }

    #[test]
    fn zmod_two_unit_group() {
        let r = CommRing::zmod(2).unwrap();
        assert_eq!(r.units(), vec![1]);
    }

    #[test]
    fn gf4_every_nonzero_element_invertible() {
        let r = CommRing::gf(2, 2).unwrap();
        assert_eq!(r.size(), 4);
        let units = r.units();
        assert_eq!(units.len(), 3);
        for a in 1..4u16 {
            assert!(r.is_unit(a));
        }
    }

    #[test]
    fn gf3_square() {
        let r = CommRing::gf(3, 1).unwrap();
        assert_eq!(r.mul(2, 2), 1);
    }

    #[test]
    fn gf_rejects_composite_characteristic() {
        assert!(CommRing::gf(4, 1).is_err());
        assert!(CommRing::gf(6, 2).is_err());
    }

    #[test]
    fn gf8_and_gf9_are_fields() {
        for (p, e) in [(2usize, 3usize), (3, 2)] {
            let r = CommRing::gf(p, e).unwrap();
            assert_eq!(r.units().len(), r.size() - 1);
        }
    }

    #[test]
    fn characteristic_values() {
        assert_eq!(CommRing::zmod(6).unwrap().characteristic(), 6);
        assert_eq!(CommRing::gf(3, 2).unwrap().characteristic(), 3);
    }

    #[test]
    fn localize_at_one_is_identity() {
        let r = CommRing::zmod(4).unwrap();
        let s = MultSubset::generated(&r, &[]);
        let (q, proj) = localize_finite(&r, &s).unwrap();
        assert_eq!(q.size(), 4);
        for a in r.elements() {
            assert_eq!(proj[a as usize], a);
        }
    }

    #[test]
    fn localize_zmod4_at_unit_is_isomorphic() {
        let r = CommRing::zmod(4).unwrap();
        let s = MultSubset::generated(&r, &[3]);
        let (q, _) = localize_finite(&r, &s).unwrap();
        assert_eq!(q.size(), 4);
    }

    #[test]
    fn localize_zmod6_at_powers_of_two() {
        let r = CommRing::zmod(6).unwrap();
        let s = MultSubset::generated(&r, &[2]);
        // powers of 2 mod 6: {1, 2, 4}
        assert_eq!(s.len(), 3);
        let (q, proj) = localize_finite(&r, &s).unwrap();
        // kernel = elements killed by some power of 2: {0, 3}
        assert_eq!(q.size(), 3);
        assert_eq!(proj[0], proj[3]);
        // every s in S maps to a unit
        for sv in s.iter() {
            assert!(q.is_unit(proj[sv as usize]));
        }
    }

    #[test]
    fn localization_surjective_and_units() {
        // property: image of every s in S invertible; projection surjective
        for n in [4usize, 6, 8, 9, 12] {
            let r = CommRing::zmod(n).unwrap();
            for g in 0..n as u16 {
                let s = MultSubset::generated(&r, &[g]);
                let (q, proj) = localize_finite(&r, &s).unwrap();
                let mut seen = vec![false; q.size()];
                for a in r.elements() {
                    seen[proj[a as usize] as usize] = true;
                }
                assert!(seen.into_iter().all(|x| x));
                for sv in s.iter() {
                    assert!(q.is_unit(proj[sv as usize]), "n={n} g={g} s={sv}");
                }
            }
        }
    }
}
