//! Finite associative K-algebras with involution.
//!
//! Elements are coordinate vectors (`Elem`) interpreted per representation:
//! a single table index, a dense m-by-m matrix over the base ring, a pair
//! of matrices for `S^op x S`, or a pair `(a, a')` of mutually adjoint
//! matrices when the underlying bilinear form is degenerate and a plain
//! adjoint involution does not exist.

use crate::error::{Error, Result};
use crate::ring::CommRing;
use rand::Rng;
use smallvec::SmallVec;
use std::collections::BTreeSet;
use std::sync::Arc;

/// Coordinates of an algebra element. Interpretation depends on `AlgKind`.
pub type Elem = SmallVec<[u16; 36]>;

/// Guard for exhaustive element enumeration.
pub const ENUM_BOUND: u128 = 1 << 22;

#[derive(Clone, Debug)]
pub enum InvolKind {
    /// x -> x^T
    Transpose,
    /// x -> J^-1 x^T J for an invertible signed permutation matrix
    /// J = sum_q sign[q] * E_{sigma(q), q}.
    SignedPerm { sigma: Vec<usize>, sign: Vec<u16> },
}

/// Full matrix algebra M_m(K).
#[derive(Clone, Debug)]
pub struct MatrixAlg {
    pub m: usize,
    pub invol: InvolKind,
}

/// S^op x S for S = M_m(K), with the swap involution.
#[derive(Clone, Debug)]
pub struct PairAlg {
    pub m: usize,
}

/// Ring of adjointable pairs {(a, a') : a^T J = J a'} inside
/// M_m(K) x M_m(K)^op, for a J with one nonzero entry per row
/// (row r carries coefficient `jrows[r].1` in column `jrows[r].0`).
/// Used when J is not invertible.
#[derive(Clone, Debug)]
pub struct AdjPairAlg {
    pub m: usize,
    pub jrows: Vec<(usize, u16)>,
}

/// Explicit small algebra given by complete tables.
#[derive(Clone)]
pub struct TableAlg {
    pub size: usize,
    pub add: Vec<u16>,
    pub mul: Vec<u16>,
    pub neg: Vec<u16>,
    pub invol: Vec<u16>,
    /// kact[k * size + a] = k . a
    pub kact: Vec<u16>,
    pub one: Option<u16>,
}

impl std::fmt::Debug for TableAlg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TableAlg(size {})", self.size)
    }
}

#[derive(Clone, Debug)]
pub enum AlgKind {
    Table(TableAlg),
    Matrix(MatrixAlg),
    PairOp(PairAlg),
    AdjPair(AdjPairAlg),
}

/// A finite associative algebra with involution over a base ring.
#[derive(Clone, Debug)]
pub struct Algebra {
    pub base: Arc<CommRing>,
    pub kind: AlgKind,
    pub label: String,
}

impl Algebra {
    pub fn table(base: Arc<CommRing>, t: TableAlg, label: &str) -> Result<Algebra> {
        let alg = Algebra { base, kind: AlgKind::Table(t), label: label.into() };
        alg.validate_table()?;
        Ok(alg)
    }

    /// The zero algebra over a base ring.
    pub fn zero_algebra(base: Arc<CommRing>) -> Algebra {
        let t = TableAlg {
            size: 1,
            add: vec![0],
            mul: vec![0],
            neg: vec![0],
            invol: vec![0],
            kact: vec![0; base.size()],
            one: Some(0),
        };
        Algebra { base, kind: AlgKind::Table(t), label: "0".into() }
    }

    /// The base ring viewed as an algebra over itself with trivial involution.
    pub fn base_as_algebra(base: Arc<CommRing>) -> Algebra {
        let n = base.size();
        let add = (0..n * n)
            .map(|i| base.add((i / n) as u16, (i % n) as u16))
            .collect();
        let mul: Vec<u16> = (0..n * n)
            .map(|i| base.mul((i / n) as u16, (i % n) as u16))
            .collect();
        let t = TableAlg {
            size: n,
            add,
            mul: mul.clone(),
            neg: (0..n as u16).map(|a| base.neg(a)).collect(),
            invol: (0..n as u16).collect(),
            kact: mul,
            one: Some(base.one()),
        };
        let label = base.label().to_string();
        Algebra { base, kind: AlgKind::Table(t), label }
    }

    pub fn matrix(base: Arc<CommRing>, m: usize, invol: InvolKind, label: &str) -> Algebra {
        Algebra { base, kind: AlgKind::Matrix(MatrixAlg { m, invol }), label: label.into() }
    }

    pub fn pair_op(base: Arc<CommRing>, m: usize, label: &str) -> Algebra {
        Algebra { base, kind: AlgKind::PairOp(PairAlg { m }), label: label.into() }
    }

    pub fn adj_pair(base: Arc<CommRing>, m: usize, jrows: Vec<(usize, u16)>, label: &str) -> Algebra {
        Algebra { base, kind: AlgKind::AdjPair(AdjPairAlg { m, jrows }), label: label.into() }
    }

    fn validate_table(&self) -> Result<()> {
        let AlgKind::Table(t) = &self.kind else { return Ok(()) };
        let n = t.size;
        if t.add.len() != n * n || t.mul.len() != n * n || t.invol.len() != n {
            return Err(Error::Shape("table algebra dimensions".into()));
        }
        if t.kact.len() != self.base.size() * n {
            return Err(Error::Shape("k-action table".into()));
        }
        Ok(())
    }

    pub fn coords(&self) -> usize {
        match &self.kind {
            AlgKind::Table(_) => 1,
            AlgKind::Matrix(m) => m.m * m.m,
            AlgKind::PairOp(p) => 2 * p.m * p.m,
            AlgKind::AdjPair(a) => 2 * a.m * a.m,
        }
    }

    pub fn element_count(&self) -> u128 {
        let k = self.base.size() as u128;
        match &self.kind {
            AlgKind::Table(t) => t.size as u128,
            AlgKind::Matrix(m) => k.pow((m.m * m.m) as u32),
            AlgKind::PairOp(p) => k.pow((2 * p.m * p.m) as u32),
            AlgKind::AdjPair(a) => {
                // free coords of the first component, times kernel freedom
                let c = a.jrows[a.jrows.len() - 1].1; // not meaningful in general
                let _ = c;
                self.adj_pair_count()
            }
        }
    }

    fn adj_pair_count(&self) -> u128 {
        let AlgKind::AdjPair(a) = &self.kind else { unreachable!() };
        let k = self.base.size() as u128;
        let mut degenerate_rows = Vec::new();
        for (r, &(_, coeff)) in a.jrows.iter().enumerate() {
            if !self.base.is_unit(coeff) {
                degenerate_rows.push(r);
            }
        }
        let mut count = 1u128;
        for p in 0..a.m {
            for q in 0..a.m {
                if degenerate_rows.iter().any(|&l| q == a.jrows[l].0) && !degenerate_rows.contains(&p) {
                    // constrained entry of the first component
                    let c = a.jrows[degenerate_rows[0]].1;
                    count *= self.base.elements().filter(|&x| in_principal(&self.base, c, x)).count()
                        as u128;
                } else {
                    count *= k;
                }
            }
        }
        // kernel freedom of the second component
        for &l in &degenerate_rows {
            let c = a.jrows[l].1;
            let ann = self.base.elements().filter(|&x| self.base.mul(c, x) == self.base.zero()).count();
            count *= (ann as u128).pow(a.m as u32);
        }
        count
    }

    pub fn zero(&self) -> Elem {
        match &self.kind {
            AlgKind::Table(_) => SmallVec::from_slice(&[0]),
            _ => SmallVec::from_elem(self.base.zero(), self.coords()),
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match &self.kind {
            AlgKind::Table(_) => a[0] == 0,
            _ => a.iter().all(|&x| x == self.base.zero()),
        }
    }

    pub fn is_unital(&self) -> bool {
        match &self.kind {
            AlgKind::Table(t) => t.one.is_some(),
            _ => true,
        }
    }

    pub fn one(&self) -> Option<Elem> {
        match &self.kind {
            AlgKind::Table(t) => t.one.map(|o| SmallVec::from_slice(&[o])),
            AlgKind::Matrix(m) => Some(self.diag_ones(m.m, 0)),
            AlgKind::PairOp(p) => {
                let mut e = self.zero();
                let b = self.base.one();
                for i in 0..p.m {
                    e[i * p.m + i] = b;
                    e[p.m * p.m + i * p.m + i] = b;
                }
                Some(e)
            }
            AlgKind::AdjPair(a) => {
                let mut e = self.zero();
                let b = self.base.one();
                for i in 0..a.m {
                    e[i * a.m + i] = b;
                    e[a.m * a.m + i * a.m + i] = b;
                }
                Some(e)
            }
        }
    }

    fn diag_ones(&self, m: usize, offset: usize) -> Elem {
        let mut e = self.zero();
        for i in 0..m {
            e[offset + i * m + i] = self.base.one();
        }
        e
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.kind {
            AlgKind::Table(t) => SmallVec::from_slice(&[t.add[a[0] as usize * t.size + b[0] as usize]]),
            _ => a.iter().zip(b.iter()).map(|(&x, &y)| self.base.add(x, y)).collect(),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match &self.kind {
            AlgKind::Table(t) => SmallVec::from_slice(&[t.neg[a[0] as usize]]),
            _ => a.iter().map(|&x| self.base.neg(x)).collect(),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn scalar(&self, k: u16, a: &Elem) -> Elem {
        match &self.kind {
            AlgKind::Table(t) => {
                SmallVec::from_slice(&[t.kact[k as usize * t.size + a[0] as usize]])
            }
            _ => a.iter().map(|&x| self.base.mul(k, x)).collect(),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.kind {
            AlgKind::Table(t) => SmallVec::from_slice(&[t.mul[a[0] as usize * t.size + b[0] as usize]]),
            AlgKind::Matrix(mk) => mat_mul(&self.base, mk.m, a, b),
            AlgKind::PairOp(p) => {
                let mm = p.m * p.m;
                // (x^op, y)(u^op, v) = ((u x)^op, y v)
                let mut out = mat_mul(&self.base, p.m, &b[..mm].into(), &a[..mm].into());
                let second = mat_mul(&self.base, p.m, &a[mm..].into(), &b[mm..].into());
                out.extend_from_slice(&second);
                out
            }
            AlgKind::AdjPair(ap) => {
                let mm = ap.m * ap.m;
                // (a, a')(b, b') = (ab, b'a')
                let mut out = mat_mul(&self.base, ap.m, &a[..mm].into(), &b[..mm].into());
                let second = mat_mul(&self.base, ap.m, &b[mm..].into(), &a[mm..].into());
                out.extend_from_slice(&second);
                out
            }
        }
    }

    /// The involution x -> x-bar.
    pub fn invol(&self, a: &Elem) -> Elem {
        match &self.kind {
            AlgKind::Table(t) => SmallVec::from_slice(&[t.invol[a[0] as usize]]),
            AlgKind::Matrix(mk) => match &mk.invol {
                InvolKind::Transpose => mat_transpose(mk.m, a),
                InvolKind::SignedPerm { sigma, sign } => {
                    let m = mk.m;
                    let mut out = self.zero();
                    for p in 0..m {
                        let sp_inv = self
                            .base
                            .inv(sign[p])
                            .expect("signed permutation entries must be units");
                        for q in 0..m {
                            // (J^-1 x^T J)_{pq} = sign[p]^-1 sign[q] x_{sigma(q), sigma(p)}
                            let v = self.base.mul(sp_inv, self.base.mul(sign[q], a[sigma[q] * m + sigma[p]]));
                            out[p * m + q] = v;
                        }
                    }
                    out
                }
            },
            AlgKind::PairOp(p) => {
                let mm = p.m * p.m;
                let mut out: Elem = SmallVec::with_capacity(2 * mm);
                out.extend_from_slice(&a[mm..]);
                out.extend_from_slice(&a[..mm]);
                out
            }
            AlgKind::AdjPair(ap) => {
                let mm = ap.m * ap.m;
                let mut out: Elem = SmallVec::with_capacity(2 * mm);
                out.extend_from_slice(&a[mm..]);
                out.extend_from_slice(&a[..mm]);
                out
            }
        }
    }

    /// Membership predicate: table and matrix kinds contain every coordinate
    /// vector; pair-of-adjoints carriers check the adjointness relation.
    pub fn contains(&self, a: &Elem) -> bool {
        match &self.kind {
            AlgKind::AdjPair(ap) => {
                let m = ap.m;
                let mm = m * m;
                // a^T J == J a'
                for r in 0..m {
                    for q in 0..m {
                        // (a^T J)_{rq} = sum_c a_{cr} J_{cq}; J_{cq} != 0 iff jrows[c].0 == q
                        let mut lhs = self.base.zero();
                        for (c, &(col, coeff)) in ap.jrows.iter().enumerate() {
                            if col == q {
                                lhs = self.base.add(lhs, self.base.mul(a[c * m + r], coeff));
                            }
                        }
                        // (J a')_{rq} = jrows[r].1 * a'_{jrows[r].0, q}
                        let (jc, jv) = ap.jrows[r];
                        let rhs = self.base.mul(jv, a[mm + jc * m + q]);
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
                true
            }
            _ => true,
        }
    }

    /// All elements; guarded by `ENUM_BOUND`.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        if self.element_count() > ENUM_BOUND {
            return Err(Error::SizeBound(format!(
                "cannot enumerate {} elements of {}",
                self.element_count(),
                self.label
            )));
        }
        match &self.kind {
            AlgKind::Table(t) => Ok((0..t.size as u16).map(|i| SmallVec::from_slice(&[i])).collect()),
            AlgKind::Matrix(_) | AlgKind::PairOp(_) => {
                let mut out = Vec::new();
                let mut cur = self.zero();
                let n = self.base.size() as u16;
                loop {
                    out.push(cur.clone());
                    let mut i = 0;
                    loop {
                        if i == cur.len() {
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
            AlgKind::AdjPair(_) => {
                // Enumerate first components with constrained columns, then
                // solve for the adjoint and walk the kernel.
                let mut out = Vec::new();
                self.adj_enumerate(&mut |e| out.push(e));
                Ok(out)
            }
        }
    }

    fn adj_enumerate(&self, sink: &mut dyn FnMut(Elem)) {
        let AlgKind::AdjPair(ap) = &self.kind else { unreachable!() };
        let m = ap.m;
        let mm = m * m;
        let mut free_positions = Vec::new();
        let mut constrained = Vec::new(); // (position, allowed values)
        let degenerate: Vec<usize> = (0..m).filter(|&r| !self.base.is_unit(ap.jrows[r].1)).collect();
        for p in 0..m {
            for q in 0..m {
                let constrained_col = degenerate.iter().any(|&l| q == ap.jrows[l].0) && !degenerate.contains(&p);
                if constrained_col {
                    let c = ap.jrows[degenerate[0]].1;
                    let allowed: Vec<u16> =
                        self.base.elements().filter(|&x| in_principal(&self.base, c, x)).collect();
                    constrained.push((p * m + q, allowed));
                } else {
                    free_positions.push(p * m + q);
                }
            }
        }
        let kb = self.base.size() as u16;
        let mut first = vec![self.base.zero(); mm];
        // odometer over free and constrained coordinates
        let total_free = free_positions.len();
        let mut idx_free = vec![0u16; total_free];
        let mut idx_con = vec![0usize; constrained.len()];
        loop {
            for (i, &pos) in free_positions.iter().enumerate() {
                first[pos] = idx_free[i];
            }
            for (i, (pos, allowed)) in constrained.iter().enumerate() {
                first[*pos] = allowed[idx_con[i]];
            }
            let fe: Elem = SmallVec::from_slice(&first);
            if let Some(base_adj) = self.solve_adjoint(&fe) {
                // walk the kernel: degenerate rows of the second component
                self.walk_kernel(&fe, &base_adj, sink);
            }
            // advance odometer
            let mut i = 0;
            loop {
                if i < total_free {
                    idx_free[i] += 1;
                    if idx_free[i] < kb {
                        break;
                    }
                    idx_free[i] = 0;
                    i += 1;
                } else {
                    let j = i - total_free;
                    if j == idx_con.len() {
                        return;
                    }
                    idx_con[j] += 1;
                    if idx_con[j] < constrained[j].1.len() {
                        break;
                    }
                    idx_con[j] = 0;
                    i += 1;
                }
            }
        }
    }

    fn walk_kernel(&self, first: &Elem, adj: &[u16], sink: &mut dyn FnMut(Elem)) {
        let AlgKind::AdjPair(ap) = &self.kind else { unreachable!() };
        let m = ap.m;
        let degenerate: Vec<usize> = (0..m).filter(|&r| !self.base.is_unit(ap.jrows[r].1)).collect();
        let mut kern_slots = Vec::new();
        for &l in &degenerate {
            let c = ap.jrows[l].1;
            let ann: Vec<u16> = self
                .base
                .elements()
                .filter(|&x| self.base.mul(c, x) == self.base.zero())
                .collect();
            for q in 0..m {
                kern_slots.push((ap.jrows[l].0, q, ann.clone()));
            }
        }
        let mut idx = vec![0usize; kern_slots.len()];
        loop {
            let mut e: Elem = SmallVec::with_capacity(2 * m * m);
            e.extend_from_slice(first);
            e.extend_from_slice(adj);
            for (i, (row, col, ann)) in kern_slots.iter().enumerate() {
                let pos = m * m + row * m + col;
                e[pos] = self.base.add(e[pos], ann[idx[i]]);
            }
            sink(e);
            let mut i = 0;
            loop {
                if i == idx.len() {
                    return;
                }
                idx[i] += 1;
                if idx[i] < kern_slots[i].2.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    /// One solution a' of a^T J = J a', if any (kernel part set to zero's
    /// canonical choice, the least solution found by the scan).
    pub fn solve_adjoint(&self, first: &Elem) -> Option<Vec<u16>> {
        let AlgKind::AdjPair(ap) = &self.kind else { return None };
        let m = ap.m;
        let mut adj = vec![self.base.zero(); m * m];
        for r in 0..m {
            let (jc, jv) = ap.jrows[r];
            for q in 0..m {
                // jv * adj[jc, q] = (a^T J)_{rq}
                let mut rhs = self.base.zero();
                for (c, &(col, coeff)) in ap.jrows.iter().enumerate() {
                    if col == q {
                        rhs = self.base.add(rhs, self.base.mul(first[c * m + r], coeff));
                    }
                }
                if let Some(inv) = self.base.inv(jv) {
                    adj[jc * m + q] = self.base.mul(inv, rhs);
                } else {
                    // scan for the least solution of jv * x = rhs
                    let mut found = None;
                    for x in self.base.elements() {
                        if self.base.mul(jv, x) == rhs {
                            found = Some(x);
                            break;
                        }
                    }
                    adj[jc * m + q] = found?;
                }
            }
        }
        Some(adj)
    }

    /// Uniform random element.
    pub fn random(&self, rng: &mut impl Rng) -> Elem {
        match &self.kind {
            AlgKind::Table(t) => SmallVec::from_slice(&[rng.gen_range(0..t.size as u16)]),
            AlgKind::Matrix(_) | AlgKind::PairOp(_) => {
                let n = self.base.size() as u16;
                (0..self.coords()).map(|_| rng.gen_range(0..n)).collect()
            }
            AlgKind::AdjPair(ap) => {
                let m = ap.m;
                let degenerate: Vec<usize> =
                    (0..m).filter(|&r| !self.base.is_unit(ap.jrows[r].1)).collect();
                let n = self.base.size() as u16;
                loop {
                    let mut first = vec![self.base.zero(); m * m];
                    for p in 0..m {
                        for q in 0..m {
                            let constrained =
                                degenerate.iter().any(|&l| q == ap.jrows[l].0) && !degenerate.contains(&p);
                            first[p * m + q] = if constrained {
                                let c = ap.jrows[degenerate[0]].1;
                                let allowed: Vec<u16> = self
                                    .base
                                    .elements()
                                    .filter(|&x| in_principal(&self.base, c, x))
                                    .collect();
                                allowed[rng.gen_range(0..allowed.len())]
                            } else {
                                rng.gen_range(0..n)
                            };
                        }
                    }
                    let fe: Elem = SmallVec::from_slice(&first);
                    if let Some(mut adj) = self.solve_adjoint(&fe) {
                        for &l in &degenerate {
                            let c = ap.jrows[l].1;
                            let ann: Vec<u16> = self
                                .base
                                .elements()
                                .filter(|&x| self.base.mul(c, x) == self.base.zero())
                                .collect();
                            let row = ap.jrows[l].0;
                            for q in 0..m {
                                let pos = row * m + q;
                                adj[pos] = self.base.add(adj[pos], ann[rng.gen_range(0..ann.len())]);
                            }
                        }
                        let mut e: Elem = SmallVec::with_capacity(2 * m * m);
                        e.extend_from_slice(&first);
                        e.extend_from_slice(&adj);
                        debug_assert!(self.contains(&e));
                        return e;
                    }
                }
            }
        }
    }

    /// A K-spanning set of the algebra (used to enumerate additive images
    /// of linear maps without enumerating the whole carrier).
    pub fn spanning_set(&self) -> Vec<Elem> {
        match &self.kind {
            AlgKind::Table(t) => (0..t.size as u16).map(|i| SmallVec::from_slice(&[i])).collect(),
            AlgKind::Matrix(mk) => {
                let m = mk.m;
                let mut out = Vec::with_capacity(m * m);
                for p in 0..m {
                    for q in 0..m {
                        let mut e = self.zero();
                        e[p * m + q] = self.base.one();
                        out.push(e);
                    }
                }
                out
            }
            AlgKind::PairOp(p) => {
                let m = p.m;
                let mut out = Vec::with_capacity(2 * m * m);
                for off in [0, m * m] {
                    for i in 0..m * m {
                        let mut e = self.zero();
                        e[off + i] = self.base.one();
                        out.push(e);
                    }
                }
                out
            }
            AlgKind::AdjPair(ap) => {
                let m = ap.m;
                let mm = m * m;
                let degenerate: Vec<usize> =
                    (0..m).filter(|&r| !self.base.is_unit(ap.jrows[r].1)).collect();
                let mut out = Vec::new();
                for p in 0..m {
                    for q in 0..m {
                        let constrained =
                            degenerate.iter().any(|&l| q == ap.jrows[l].0) && !degenerate.contains(&p);
                        let coeff = if constrained { ap.jrows[degenerate[0]].1 } else { self.base.one() };
                        if coeff == self.base.zero() {
                            continue;
                        }
                        let mut first = vec![self.base.zero(); mm];
                        first[p * m + q] = coeff;
                        let fe: Elem = SmallVec::from_slice(&first);
                        if let Some(adj) = self.solve_adjoint(&fe) {
                            let mut e: Elem = SmallVec::with_capacity(2 * mm);
                            e.extend_from_slice(&first);
                            e.extend_from_slice(&adj);
                            out.push(e);
                        }
                    }
                }
                // kernel generators (0, E_{row l, q})
                for &l in &degenerate {
                    let c = ap.jrows[l].1;
                    for x in self.base.elements() {
                        if x == self.base.zero() || self.base.mul(c, x) != self.base.zero() {
                            continue;
                        }
                        for q in 0..m {
                            let mut e = self.zero();
                            e[mm + ap.jrows[l].0 * m + q] = x;
                            out.push(e);
                        }
                        break; // one annihilator generator per slot suffices over our bases
                    }
                }
                out
            }
        }
    }

    /// Quasi-inverse: y with x*y + x + y = 0 = y*x + y + x, if it exists.
    pub fn quasi_inverse(&self, x: &Elem) -> Option<Elem> {
        match &self.kind {
            AlgKind::Table(t) => {
                for yi in 0..t.size as u16 {
                    let y: Elem = SmallVec::from_slice(&[yi]);
                    if self.circ_is_zero(x, &y) && self.circ_is_zero(&y, x) {
                        return Some(y);
                    }
                }
                None
            }
            AlgKind::Matrix(mk) => {
                // x o y = 0  <=>  (1+x)(1+y) = 1
                let one = self.one().unwrap();
                let opx = self.add(&one, x);
                let inv = mat_inv(&self.base, mk.m, &opx)?;
                Some(self.sub(&inv, &one))
            }
            AlgKind::PairOp(p) => {
                let mm = p.m * p.m;
                let xa: Elem = x[..mm].into();
                let xb: Elem = x[mm..].into();
                let sub = Algebra::matrix(self.base.clone(), p.m, InvolKind::Transpose, "tmp");
                let ya = sub.quasi_inverse(&xa)?;
                let yb = sub.quasi_inverse(&xb)?;
                let mut out: Elem = SmallVec::with_capacity(2 * mm);
                out.extend_from_slice(&ya);
                out.extend_from_slice(&yb);
                Some(out)
            }
            AlgKind::AdjPair(ap) => {
                let mm = ap.m * ap.m;
                let sub = Algebra::matrix(self.base.clone(), ap.m, InvolKind::Transpose, "tmp");
                let ya = sub.quasi_inverse(&x[..mm].into())?;
                let yb = sub.quasi_inverse(&x[mm..].into())?;
                let mut out: Elem = SmallVec::with_capacity(2 * mm);
                out.extend_from_slice(&ya);
                out.extend_from_slice(&yb);
                if self.contains(&out) {
                    Some(out)
                } else {
                    None
                }
            }
        }
    }

    fn circ_is_zero(&self, x: &Elem, y: &Elem) -> bool {
        let c = self.add(&self.add(&self.mul(x, y), x), y);
        self.is_zero(&c)
    }

    /// Two-sided inverse of a unital element, if any.
    pub fn ring_inverse(&self, x: &Elem) -> Option<Elem> {
        let one = self.one()?;
        match &self.kind {
            AlgKind::Table(t) => {
                for yi in 0..t.size as u16 {
                    let y: Elem = SmallVec::from_slice(&[yi]);
                    if self.mul(x, &y) == one && self.mul(&y, x) == one {
                        return Some(y);
                    }
                }
                None
            }
            AlgKind::Matrix(mk) => mat_inv(&self.base, mk.m, x),
            AlgKind::PairOp(p) => {
                let mm = p.m * p.m;
                let ia = mat_inv(&self.base, p.m, &x[..mm].into())?;
                let ib = mat_inv(&self.base, p.m, &x[mm..].into())?;
                let mut out: Elem = SmallVec::with_capacity(2 * mm);
                out.extend_from_slice(&ia);
                out.extend_from_slice(&ib);
                Some(out)
            }
            AlgKind::AdjPair(ap) => {
                let mm = ap.m * ap.m;
                let ia = mat_inv(&self.base, ap.m, &x[..mm].into())?;
                let ib = mat_inv(&self.base, ap.m, &x[mm..].into())?;
                let mut out: Elem = SmallVec::with_capacity(2 * mm);
                out.extend_from_slice(&ia);
                out.extend_from_slice(&ib);
                if self.contains(&out) {
                    Some(out)
                } else {
                    None
                }
            }
        }
    }

    /// Jacobson radical, as an explicit element list. Exact for table
    /// algebras (ideal-wise quasi-invertibility scan); structural for matrix
    /// and pair kinds (entries from J(K)).
    pub fn jacobson_radical(&self) -> Result<Vec<Elem>> {
        match &self.kind {
            AlgKind::Table(t) => {
                let mut rad = Vec::new();
                for xi in 0..t.size as u16 {
                    let x: Elem = SmallVec::from_slice(&[xi]);
                    if self.ideal_quasi_invertible(&x)? {
                        rad.push(x);
                    }
                }
                Ok(rad)
            }
            AlgKind::Matrix(mk) => {
                let jk = base_radical(&self.base);
                let m = mk.m;
                let slots = m * m;
                let total = (jk.len() as u128).pow(slots as u32);
                if total > ENUM_BOUND {
                    return Err(Error::SizeBound("radical too large to enumerate".into()));
                }
                let mut out = Vec::new();
                let mut idx = vec![0usize; slots];
                loop {
                    let e: Elem = idx.iter().map(|&i| jk[i]).collect();
                    out.push(e);
                    let mut i = 0;
                    loop {
                        if i == slots {
                            return Ok(out);
                        }
                        idx[i] += 1;
                        if idx[i] < jk.len() {
                            break;
                        }
                        idx[i] = 0;
                        i += 1;
                    }
                }
            }
            _ => Err(Error::SizeBound("radical enumeration unsupported for this representation".into())),
        }
    }

    /// Test whether every element of the two-sided ideal generated by x is
    /// quasi-invertible (table algebras only).
    fn ideal_quasi_invertible(&self, x: &Elem) -> Result<bool> {
        let AlgKind::Table(_) = &self.kind else {
            return Err(Error::Invalid("ideal test requires a table algebra".into()));
        };
        let elems = self.elements()?;
        let mut ideal: BTreeSet<Elem> = BTreeSet::new();
        let mut queue = vec![x.clone()];
        while let Some(y) = queue.pop() {
            if !ideal.insert(y.clone()) {
                continue;
            }
            for a in &elems {
                queue.push(self.mul(a, &y));
                queue.push(self.mul(&y, a));
            }
            let snapshot: Vec<Elem> = ideal.iter().cloned().collect();
            for z in snapshot {
                queue.push(self.add(&y, &z));
            }
        }
        Ok(ideal.iter().all(|y| self.quasi_inverse(y).is_some()))
    }

    /// Whether x lies in the Jacobson radical (structural predicate).
    pub fn in_radical(&self, x: &Elem) -> bool {
        match &self.kind {
            AlgKind::Table(_) => self.ideal_quasi_invertible(x).unwrap_or(false),
            AlgKind::Matrix(_) | AlgKind::PairOp(_) => {
                let jk: BTreeSet<u16> = base_radical(&self.base).into_iter().collect();
                x.iter().all(|e| jk.contains(e))
            }
            AlgKind::AdjPair(_) => false,
        }
    }

    /// Canonical byte encoding for hashing and reports.
    pub fn canonical_key(&self, a: &Elem) -> SmallVec<[u8; 24]> {
        let n = self.base.size();
        let mut out: SmallVec<[u8; 24]> = SmallVec::new();
        if n <= 16 {
            let mut cur = 0u8;
            let mut half = false;
            for &x in a.iter() {
                if half {
                    cur |= (x as u8) << 4;
                    out.push(cur);
                    cur = 0;
                    half = false;
                } else {
                    cur = x as u8;
                    half = true;
                }
            }
            if half {
                out.push(cur);
            }
        } else if n <= 256 {
            out.extend(a.iter().map(|&x| x as u8));
        } else {
            for &x in a.iter() {
                out.push((x & 0xff) as u8);
                out.push((x >> 8) as u8);
            }
        }
        out
    }

    pub fn format_elem(&self, a: &Elem) -> String {
        let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        parts.join(",")
    }
}

/// Radical of the (commutative) base ring: {k : 1 + xk is a unit for all x}.
pub fn base_radical(base: &CommRing) -> Vec<u16> {
    base.elements()
        .filter(|&k| {
            base.elements()
                .all(|x| base.is_unit(base.add(base.one(), base.mul(x, k))))
        })
        .collect()
}

fn in_principal(base: &CommRing, c: u16, x: u16) -> bool {
    base.elements().any(|y| base.mul(c, y) == x)
}

pub fn mat_mul(base: &CommRing, m: usize, a: &Elem, b: &Elem) -> Elem {
    let mut out: Elem = SmallVec::from_elem(base.zero(), m * m);
    for i in 0..m {
        for k in 0..m {
            let aik = a[i * m + k];
            if aik == base.zero() {
                continue;
            }
            for j in 0..m {
                let v = base.mul(aik, b[k * m + j]);
                out[i * m + j] = base.add(out[i * m + j], v);
            }
        }
    }
    out
}

pub fn mat_transpose(m: usize, a: &Elem) -> Elem {
    let mut out = a.clone();
    for i in 0..m {
        for j in 0..m {
            out[i * m + j] = a[j * m + i];
        }
    }
    out
}

/// Matrix inverse by Gaussian elimination with unit pivots. Complete for
/// local base rings; falls back to None when no unit pivot exists.
pub fn mat_inv(base: &CommRing, m: usize, a: &Elem) -> Option<Elem> {
    let mut work: Vec<u16> = a.to_vec();
    let mut inv: Vec<u16> = vec![base.zero(); m * m];
    for i in 0..m {
        inv[i * m + i] = base.one();
    }
    for col in 0..m {
        let pivot_row = (col..m).find(|&r| base.is_unit(work[r * m + col]))?;
        if pivot_row != col {
            for j in 0..m {
                work.swap(col * m + j, pivot_row * m + j);
                inv.swap(col * m + j, pivot_row * m + j);
            }
        }
        let pinv = base.inv(work[col * m + col]).unwrap();
        for j in 0..m {
            work[col * m + j] = base.mul(pinv, work[col * m + j]);
            inv[col * m + j] = base.mul(pinv, inv[col * m + j]);
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let f = work[r * m + col];
            if f == base.zero() {
                continue;
            }
            for j in 0..m {
                work[r * m + j] = base.sub(work[r * m + j], base.mul(f, work[col * m + j]));
                inv[r * m + j] = base.sub(inv[r * m + j], base.mul(f, inv[col * m + j]));
            }
        }
    }
    Some(SmallVec::from_vec(inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CommRing;

    fn zmod(n: usize) -> Arc<CommRing> {
        Arc::new(CommRing::zmod(n).unwrap())
    }

    #[test]
    fn quasi_inverse_of_zero_is_zero() {
        let a = Algebra::base_as_algebra(zmod(4));
        let z = a.zero();
        assert_eq!(a.quasi_inverse(&z), Some(z));
    }

    #[test]
    fn quasi_inverse_two_mod_four() {
        let a = Algebra::base_as_algebra(zmod(4));
        let two: Elem = SmallVec::from_slice(&[2]);
        assert_eq!(a.quasi_inverse(&two), Some(two));
    }

    #[test]
    fn quasi_inverse_one_in_f2_none() {
        let a = Algebra::base_as_algebra(zmod(2));
        let one: Elem = SmallVec::from_slice(&[1]);
        assert_eq!(a.quasi_inverse(&one), None);
    }

    #[test]
    fn quasi_inverse_symmetry() {
        // quasi_inverse(x) = y implies quasi_inverse(y) = x
        for n in [4usize, 6, 8, 9] {
            let a = Algebra::base_as_algebra(zmod(n));
            for xi in 0..n as u16 {
                let x: Elem = SmallVec::from_slice(&[xi]);
                if let Some(y) = a.quasi_inverse(&x) {
                    assert_eq!(a.quasi_inverse(&y), Some(x));
                }
            }
        }
    }

    #[test]
    fn radical_examples() {
        let f2 = Algebra::base_as_algebra(zmod(2));
        assert_eq!(f2.jacobson_radical().unwrap().len(), 1);
        let z4 = Algebra::base_as_algebra(zmod(4));
        let rad = z4.jacobson_radical().unwrap();
        let vals: Vec<u16> = rad.iter().map(|e| e[0]).collect();
        assert_eq!(vals, vec![0, 2]);
    }

    #[test]
    fn radical_matrix_simple() {
        let m2 = Algebra::matrix(zmod(2), 2, InvolKind::Transpose, "m2(f2)");
        let rad = m2.jacobson_radical().unwrap();
        assert_eq!(rad.len(), 1);
        assert!(m2.is_zero(&rad[0]));
    }

    #[test]
    fn radical_quotient_is_trivial() {
        // jacobson_radical(A/J(A)) = 0 checked through the base ring layer
        let z4 = zmod(4);
        let rad: std::collections::BTreeSet<u16> = base_radical(&z4).into_iter().collect();
        let (q, _) = z4.quotient(&rad).unwrap();
        let qa = Algebra::base_as_algebra(q);
        assert_eq!(qa.jacobson_radical().unwrap().len(), 1);
    }

    #[test]
    fn matrix_involution_is_antiautomorphism_of_square_identity() {
        // symplectic-style J on 2x2: J = E_{10} - E_{01}
        let base = zmod(3);
        let alg = Algebra::matrix(
            base.clone(),
            2,
            InvolKind::SignedPerm { sigma: vec![1, 0], sign: vec![1, 2] },
            "m2(f3) sympl",
        );
        let elems = alg.elements().unwrap();
        for a in &elems {
            assert_eq!(alg.invol(&alg.invol(a)), *a, "square identity");
        }
        for a in elems.iter().take(20) {
            for b in elems.iter().take(20) {
                let lhs = alg.invol(&alg.mul(a, b));
                let rhs = alg.mul(&alg.invol(b), &alg.invol(a));
                assert_eq!(lhs, rhs, "anti-automorphism");
            }
        }
    }

    #[test]
    fn pair_op_involution_and_units() {
        let alg = Algebra::pair_op(zmod(2), 1, "f2^op x f2");
        let elems = alg.elements().unwrap();
        assert_eq!(elems.len(), 4);
        for a in &elems {
            assert_eq!(alg.invol(&alg.invol(a)), *a);
            for b in &elems {
                assert_eq!(alg.invol(&alg.mul(a, b)), alg.mul(&alg.invol(b), &alg.invol(a)));
            }
        }
    }

    #[test]
    fn adj_pair_ring_is_closed() {
        // degenerate J for the odd orthogonal case over F2, m = 3:
        // rows 0,2 swap (hyperbolic pair), row 1 has coefficient 2 = 0.
        let base = zmod(2);
        let alg = Algebra::adj_pair(base, 3, vec![(2, 1), (1, 0), (0, 1)], "adj3");
        let elems = alg.elements().unwrap();
        for a in elems.iter().take(40) {
            assert!(alg.contains(a));
            assert!(alg.contains(&alg.invol(a)), "closed under involution");
            for b in elems.iter().take(40) {
                assert!(alg.contains(&alg.mul(a, b)), "closed under multiplication");
                assert!(alg.contains(&alg.add(a, b)), "closed under addition");
            }
        }
        let one = alg.one().unwrap();
        assert!(alg.contains(&one));
        for a in elems.iter().take(40) {
            assert_eq!(alg.mul(&one, a), *a);
            assert_eq!(alg.mul(a, &one), *a);
            assert_eq!(alg.invol(&alg.invol(a)), *a);
        }
    }

    #[test]
    fn mat_inv_round_trip() {
        use rand::SeedableRng;
        let base = zmod(4);
        let alg = Algebra::matrix(base.clone(), 2, InvolKind::Transpose, "m2(z4)");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let one = alg.one().unwrap();
        let mut found = 0;
        for _ in 0..200 {
            let a = alg.random(&mut rng);
            if let Some(inv) = mat_inv(&base, 2, &a) {
                assert_eq!(alg.mul(&a, &inv), one);
                assert_eq!(alg.mul(&inv, &a), one);
                found += 1;
            }
        }
        assert!(found > 0);
    }
}
