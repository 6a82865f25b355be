//! Quadratic modules over a finite commutative ring: a free module with a
//! hermitian form, a form parameter inside its Heisenberg group, and the
//! classical matrix-group predicates used as an independent oracle for the
//! unitary groups built later.

use crate::algebra::Elem;
use crate::error::{Error, Result};
use crate::ring::CommRing;
use smallvec::SmallVec;
use std::sync::Arc;

/// Choice of odd form parameter between L_min and L_max.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormParam {
    /// L_min = {(0, x - x lambda)}
    Min,
    /// L_max = {(m, x) : B(m,m) + x + x lambda = 0}
    Max,
    /// The graph {(m, -Q(m) + d) : d in L_min-part} of the standard
    /// quadratic form; this is the parameter whose unitary group is the
    /// classical orthogonal group in every characteristic.
    Quadratic,
}

/// A free quadratic module of finite rank with a diagonal-free hermitian
/// Gram matrix (at most one nonzero entry per row) and a form parameter.
#[derive(Clone, Debug)]
pub struct QuadraticModule {
    pub base: Arc<CommRing>,
    pub rank: usize,
    /// lambda with lambda^2 = 1; B(w, v) = lambda * B(v, w).
    pub lambda: u16,
    /// Gram matrix of B, row-major.
    pub gram: Vec<u16>,
    /// Upper "half" B0 of B for the quadratic parameter: Q(v) = v^T B0 v.
    pub half: Option<Vec<u16>>,
    pub param: FormParam,
}

pub type Vector = SmallVec<[u16; 8]>;

impl QuadraticModule {
    pub fn new(
        base: Arc<CommRing>,
        rank: usize,
        lambda: u16,
        gram: Vec<u16>,
        half: Option<Vec<u16>>,
        param: FormParam,
    ) -> Result<QuadraticModule> {
        if gram.len() != rank * rank {
            return Err(Error::Shape("gram matrix must be rank x rank".into()));
        }
        if base.mul(lambda, lambda) != base.one() {
            return Err(Error::Precondition("lambda^2 must be 1".into()));
        }
        // hermitian: B(w, v) = lambda B(v, w), i.e. gram^T = lambda gram
        for i in 0..rank {
            for j in 0..rank {
                if gram[j * rank + i] != base.mul(lambda, gram[i * rank + j]) {
                    return Err(Error::Precondition("form is not hermitian".into()));
                }
            }
        }
        if param == FormParam::Quadratic {
            let h = half.as_ref().ok_or_else(|| {
                Error::Precondition("quadratic parameter needs the half form".into())
            })?;
            // B = B0 + lambda B0^T
            for i in 0..rank {
                for j in 0..rank {
                    let v = base.add(h[i * rank + j], base.mul(lambda, h[j * rank + i]));
                    if v != gram[i * rank + j] {
                        return Err(Error::Precondition("half form does not polarize to B".into()));
                    }
                }
            }
        }
        Ok(QuadraticModule { base, rank, lambda, gram, half, param })
    }

    pub fn vector_count(&self) -> u128 {
        (self.base.size() as u128).pow(self.rank as u32)
    }

    pub fn vectors(&self) -> Vec<Vector> {
        let n = self.base.size() as u16;
        let mut out = Vec::new();
        let mut cur: Vector = SmallVec::from_elem(0, self.rank);
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == self.rank {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < n {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    pub fn bilinear(&self, v: &[u16], w: &[u16]) -> u16 {
        let b = &self.base;
        let mut acc = b.zero();
        for i in 0..self.rank {
            if v[i] == b.zero() {
                continue;
            }
            for j in 0..self.rank {
                let g = self.gram[i * self.rank + j];
                if g == b.zero() {
                    continue;
                }
                acc = b.add(acc, b.mul(v[i], b.mul(g, w[j])));
            }
        }
        acc
    }

    pub fn quad(&self, v: &[u16]) -> u16 {
        let h = self.half.as_ref().expect("quadratic value needs the half form");
        let b = &self.base;
        let mut acc = b.zero();
        for i in 0..self.rank {
            if v[i] == b.zero() {
                continue;
            }
            for j in 0..self.rank {
                let g = h[i * self.rank + j];
                if g == b.zero() {
                    continue;
                }
                acc = b.add(acc, b.mul(v[i], b.mul(g, v[j])));
            }
        }
        acc
    }

    /// L_min-part of the base ring: {x - lambda x : x in K}.
    pub fn lmin_values(&self) -> Vec<u16> {
        let b = &self.base;
        let mut vals: Vec<u16> = b
            .elements()
            .map(|x| b.sub(x, b.mul(self.lambda, x)))
            .collect();
        vals.sort_unstable();
        vals.dedup();
        vals
    }

    /// Membership of (m, x) in the form parameter.
    pub fn l_contains(&self, m: &[u16], x: u16) -> bool {
        let b = &self.base;
        match self.param {
            FormParam::Min => {
                m.iter().all(|&c| c == b.zero()) && self.lmin_values().contains(&x)
            }
            FormParam::Max => {
                let v = b.add(self.bilinear(m, m), b.add(x, b.mul(self.lambda, x)));
                v == b.zero()
            }
            FormParam::Quadratic => {
                let shifted = b.add(x, self.quad(m));
                self.lmin_values().contains(&shifted)
            }
        }
    }

    pub fn apply(&self, g: &[u16], v: &[u16]) -> Vector {
        let b = &self.base;
        let mut out: Vector = SmallVec::from_elem(b.zero(), self.rank);
        for i in 0..self.rank {
            let mut acc = b.zero();
            for j in 0..self.rank {
                acc = b.add(acc, b.mul(g[i * self.rank + j], v[j]));
            }
            out[i] = acc;
        }
        out
    }

    /// g preserves the hermitian form: g^T (gram) g = gram.
    pub fn preserves_bilinear(&self, g: &[u16]) -> bool {
        let b = &self.base;
        let r = self.rank;
        for i in 0..r {
            for j in 0..r {
                // (g^T G g)_{ij} = sum_{p,q} g_{pi} G_{pq} g_{qj}
                let mut acc = b.zero();
                for p in 0..r {
                    if g[p * r + i] == b.zero() {
                        continue;
                    }
                    for q in 0..r {
                        let gv = self.gram[p * r + q];
                        if gv == b.zero() {
                            continue;
                        }
                        acc = b.add(acc, b.mul(g[p * r + i], b.mul(gv, g[q * r + j])));
                    }
                }
                if acc != self.gram[i * r + j] {
                    return false;
                }
            }
        }
        true
    }

    /// g preserves the quadratic form values on every vector of the carrier.
    pub fn preserves_quadratic(&self, g: &[u16]) -> bool {
        if self.half.is_none() {
            return true;
        }
        self.vectors().iter().all(|v| self.quad(&self.apply(g, v)) == self.quad(v))
    }

    /// The form-parameter condition defining the unitary group:
    /// ((g-1)v, B(v, gv) - B(v,v)) lies in L for every v.
    pub fn unitary_condition(&self, g: &[u16]) -> bool {
        let b = &self.base;
        for v in self.vectors() {
            let gv = self.apply(g, &v);
            let mut diff: Vector = SmallVec::from_elem(b.zero(), self.rank);
            for i in 0..self.rank {
                diff[i] = b.sub(gv[i], v[i]);
            }
            let x = b.sub(self.bilinear(&v, &gv), self.bilinear(&v, &v));
            if !self.l_contains(&diff, x) {
                return false;
            }
        }
        true
    }

    /// Full unitary-group membership on the matrix side.
    pub fn unitary_member(&self, g: &[u16]) -> bool {
        self.preserves_bilinear(g) && self.unitary_condition(g)
    }

    /// Brute-force enumeration of the unitary group by scanning every
    /// matrix. Only feasible for small rank; this is the independent oracle
    /// for group orders.
    pub fn enumerate_unitary_matrices(&self, bound: u128) -> Result<Vec<Elem>> {
        let slots = self.rank * self.rank;
        let total = (self.base.size() as u128).pow(slots as u32);
        if total > bound {
            return Err(Error::SizeBound(format!(
                "matrix scan of {total} elements exceeds bound {bound}"
            )));
        }
        let n = self.base.size() as u16;
        let mut out = Vec::new();
        let mut cur: Elem = SmallVec::from_elem(0, slots);
        loop {
            if self.unitary_member(&cur) {
                out.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == slots {
                    return Ok(out);
                }
                cur[i] += 1;
                if cur[i] < n {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}

/// The built-in split families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Linear,
    Symplectic,
    OrthEven,
    OrthOdd,
}

impl FamilyKind {
    pub fn parse(s: &str) -> Result<FamilyKind> {
        match s {
            "linear" => Ok(FamilyKind::Linear),
            "sp" => Ok(FamilyKind::Symplectic),
            "o-even" => Ok(FamilyKind::OrthEven),
            "o-odd" => Ok(FamilyKind::OrthOdd),
            other => Err(Error::Invalid(format!("unknown algebra kind {other}"))),
        }
    }
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyKind::Linear => "linear",
            FamilyKind::Symplectic => "sp",
            FamilyKind::OrthEven => "o-even",
            FamilyKind::OrthOdd => "o-odd",
        }
    }
}

#[derive(Clone, Debug)]
pub struct NamedFamily {
    pub kind: FamilyKind,
    pub rank: usize,
    pub base: Arc<CommRing>,
}

/// Row index of the basis vector e_i in the hyperbolic basis order
/// (-l, ..., -1, [0], 1, ..., l).
pub fn basis_pos(rank: usize, odd: bool, i: i32) -> usize {
    debug_assert!(i != 0 || odd);
    if i < 0 {
        (i + rank as i32) as usize
    } else if i == 0 {
        rank
    } else {
        rank + i as usize - 1 + usize::from(odd)
    }
}

/// The quadratic module of a named split family (symplectic or orthogonal).
pub fn named_quadratic_module(f: &NamedFamily) -> Result<QuadraticModule> {
    let base = f.base.clone();
    let l = f.rank;
    let one = base.one();
    match f.kind {
        FamilyKind::Symplectic => {
            let m = 2 * l;
            let mut gram = vec![base.zero(); m * m];
            for i in 1..=l as i32 {
                gram[basis_pos(l, false, i) * m + basis_pos(l, false, -i)] = one;
                gram[basis_pos(l, false, -i) * m + basis_pos(l, false, i)] = base.neg(one);
            }
            QuadraticModule::new(base.clone(), m, base.neg(one), gram, None, FormParam::Max)
        }
        FamilyKind::OrthEven => {
            let m = 2 * l;
            let mut gram = vec![base.zero(); m * m];
            let mut half = vec![base.zero(); m * m];
            for i in 1..=l as i32 {
                gram[basis_pos(l, false, i) * m + basis_pos(l, false, -i)] = one;
                gram[basis_pos(l, false, -i) * m + basis_pos(l, false, i)] = one;
                half[basis_pos(l, false, i) * m + basis_pos(l, false, -i)] = one;
            }
            QuadraticModule::new(base, m, one, gram, Some(half), FormParam::Quadratic)
        }
        FamilyKind::OrthOdd => {
            let m = 2 * l + 1;
            let mut gram = vec![base.zero(); m * m];
            let mut half = vec![base.zero(); m * m];
            for i in 1..=l as i32 {
                gram[basis_pos(l, true, i) * m + basis_pos(l, true, -i)] = one;
                gram[basis_pos(l, true, -i) * m + basis_pos(l, true, i)] = one;
                half[basis_pos(l, true, i) * m + basis_pos(l, true, -i)] = one;
            }
            let c = basis_pos(l, true, 0);
            gram[c * m + c] = base.add(one, one);
            half[c * m + c] = one;
            QuadraticModule::new(base, m, one, gram, Some(half), FormParam::Quadratic)
        }
        FamilyKind::Linear => Err(Error::Invalid(
            "the linear family is built from S^op x S, not from a quadratic module".into(),
        )),
    }
}

/// Independent classical oracle: does the matrix g belong to the classical
/// group of the named family? For the linear family this is invertibility of
/// a rank x rank matrix; otherwise preservation of the hermitian form and,
/// in the quadratic cases, of the quadratic form values on all vectors.
pub fn classical_oracle(f: &NamedFamily, g: &Elem) -> Result<bool> {
    match f.kind {
        FamilyKind::Linear => {
            if g.len() != f.rank * f.rank {
                return Err(Error::Shape(format!(
                    "expected a {0} x {0} matrix",
                    f.rank
                )));
            }
            Ok(crate::algebra::mat_inv(&f.base, f.rank, g).is_some())
        }
        _ => {
            let qm = named_quadratic_module(f)?;
            if g.len() != qm.rank * qm.rank {
                return Err(Error::Shape(format!(
                    "expected a {0} x {0} matrix",
                    qm.rank
                )));
            }
            Ok(qm.preserves_bilinear(g) && qm.preserves_quadratic(g))
        }
    }
}

/// |Sp_{2l}(q)| = q^{l^2} prod_{i=1..l} (q^{2i} - 1)
pub fn sp_order(q: u128, l: u32) -> u128 {
    let mut n = q.pow(l * l);
    for i in 1..=l {
        n *= q.pow(2 * i) - 1;
    }
    n
}

/// |GO+_{2l}(q)| = 2 q^{l(l-1)} (q^l - 1) prod_{i=1..l-1} (q^{2i} - 1)
pub fn orth_even_order(q: u128, l: u32) -> u128 {
    let mut n = 2 * q.pow(l * (l - 1)) * (q.pow(l) - 1);
    for i in 1..l {
        n *= q.pow(2 * i) - 1;
    }
    n
}

/// |GL_n(q)| = prod_{i=0..n-1} (q^n - q^i)
pub fn gl_order(q: u128, n: u32) -> u128 {
    let mut out = 1u128;
    for i in 0..n {
        out *= q.pow(n) - q.pow(i);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(kind: FamilyKind, rank: usize, n: usize) -> NamedFamily {
        NamedFamily { kind, rank, base: Arc::new(CommRing::zmod(n).unwrap()) }
    }

    #[test]
    fn hyperbolic_plane_f2_max_has_six_isometries() {
        let qm = named_quadratic_module(&f(FamilyKind::Symplectic, 1, 2)).unwrap();
        let g = qm.enumerate_unitary_matrices(1 << 20).unwrap();
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn quadratic_plane_f2_has_two_isometries() {
        let qm = named_quadratic_module(&f(FamilyKind::OrthEven, 1, 2)).unwrap();
        let g = qm.enumerate_unitary_matrices(1 << 20).unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn sp4_f2_oracle_order_720() {
        let qm = named_quadratic_module(&f(FamilyKind::Symplectic, 2, 2)).unwrap();
        let g = qm.enumerate_unitary_matrices(1 << 20).unwrap();
        assert_eq!(g.len(), 720);
        assert_eq!(sp_order(2, 2), 720);
    }

    #[test]
    fn o4_plus_f2_oracle_order_72() {
        let qm = named_quadratic_module(&f(FamilyKind::OrthEven, 2, 2)).unwrap();
        let g = qm.enumerate_unitary_matrices(1 << 20).unwrap();
        assert_eq!(g.len(), 72);
        assert_eq!(orth_even_order(2, 2), 72);
    }

    #[test]
    fn sp2_f3_oracle_order_24() {
        let qm = named_quadratic_module(&f(FamilyKind::Symplectic, 1, 3)).unwrap();
        let g = qm.enumerate_unitary_matrices(1 << 20).unwrap();
        assert_eq!(g.len(), 24);
        assert_eq!(sp_order(3, 1), 24);
    }

    #[test]
    fn o3_f3_oracle_order_48() {
        let qm = named_quadratic_module(&f(FamilyKind::OrthOdd, 1, 3)).unwrap();
        let g = qm.enumerate_unitary_matrices(1 << 20).unwrap();
        assert_eq!(g.len(), 48);
    }

    #[test]
    fn o3_f2_matches_sp2() {
        // in characteristic 2 the odd orthogonal group realizes Sp_{2l}
        let qm = named_quadratic_module(&f(FamilyKind::OrthOdd, 1, 2)).unwrap();
        let g = qm.enumerate_unitary_matrices(1 << 20).unwrap();
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn classical_oracle_examples() {
        // identity is always a member
        let fam = f(FamilyKind::Symplectic, 1, 3);
        let qm = named_quadratic_module(&fam).unwrap();
        let mut id: Elem = SmallVec::from_elem(0, 4);
        id[0] = 1;
        id[3] = 1;
        assert!(classical_oracle(&fam, &id).unwrap());
        // diag(2, 2) over F3 preserves the alternating form (det = 4 = 1)
        let mut d: Elem = SmallVec::from_elem(0, 4);
        d[0] = 2;
        d[3] = 2;
        assert!(classical_oracle(&fam, &d).unwrap());
        assert!(qm.preserves_bilinear(&d));
        // swap preserves q(x, y) = xy over F2
        let fam2 = f(FamilyKind::OrthEven, 1, 2);
        let mut sw: Elem = SmallVec::from_elem(0, 4);
        sw[1] = 1;
        sw[2] = 1;
        assert!(classical_oracle(&fam2, &sw).unwrap());
    }

    #[test]
    fn order_formulas_match_known_values() {
        assert_eq!(sp_order(2, 3), 1_451_520);
        assert_eq!(orth_even_order(2, 3), 40_320);
        assert_eq!(gl_order(2, 3), 168);
        assert_eq!(gl_order(3, 2), 48);
    }

    #[test]
    fn unitary_condition_equals_quadratic_preservation() {
        // the coset condition and direct Q-preservation cut out the same set
        for n in [2usize, 3] {
            let qm = named_quadratic_module(&f(FamilyKind::OrthEven, 1, n)).unwrap();
            for g in qm
                .enumerate_unitary_matrices(1 << 20)
                .unwrap()
            {
                assert!(qm.preserves_quadratic(&g));
            }
            // and conversely on the full matrix scan
            let slots = qm.rank * qm.rank;
            let total = (n as u64).pow(slots as u32);
            for code in 0..total {
                let mut g: Elem = SmallVec::from_elem(0, slots);
                let mut c = code;
                for s in g.iter_mut() {
                    *s = (c % n as u64) as u16;
                    c /= n as u64;
                }
                let classical = qm.preserves_bilinear(&g) && qm.preserves_quadratic(&g);
                let viaform = qm.unitary_member(&g);
                assert_eq!(classical, viaform, "g = {:?}", g);
            }
        }
    }
}
