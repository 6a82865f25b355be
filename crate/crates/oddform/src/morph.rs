//! Odd form ideals, quotients, actions of one odd form ring on another, and
//! the semidirect product construction. Quotients and semidirect products
//! are materialized as explicit table algebras, so they are available for
//! small carriers only.

use crate::algebra::{Algebra, Elem, TableAlg};
use crate::error::{Error, Result};
use crate::ofa::{AugKind, DElem, DeltaKind, DeltaSampler, DeltaTable, OddFormAlgebra, SamplerPiece};
use crate::report::{Report, ReportBuilder, SAMPLE_TUPLES};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;
use std::collections::HashMap;

/// An odd form ideal (I, Gamma) given by explicit element lists.
#[derive(Clone, Debug)]
pub struct OddFormIdeal {
    pub i_elems: Vec<Elem>,
    pub gamma: Vec<DElem>,
}

/// Validates the ideal laws: I an involution-closed two-sided ideal, Gamma a
/// scaling-closed subgroup squeezed between Delta.I + phi-part and the
/// pi/rho preimage of I.
pub fn validate_ideal(ofa: &OddFormAlgebra, ideal: &OddFormIdeal, seed: u64) -> Result<Report> {
    let mut rep = ReportBuilder::new(true, seed);
    let r = &ofa.ring;
    let ikeys: std::collections::HashSet<_> =
        ideal.i_elems.iter().map(|x| r.canonical_key(x)).collect();
    let in_i = |x: &Elem| ikeys.contains(&r.canonical_key(x));
    let gkeys: std::collections::HashSet<_> =
        ideal.gamma.iter().map(|u| ofa.delta_key(u)).collect();
    let in_g = |u: &DElem| gkeys.contains(&ofa.delta_key(u));

    let relems = ofa.ring.elements()?;
    for x in &ideal.i_elems {
        if !in_i(&r.invol(x)) {
            rep.violation("I closed under involution", vec![r.format_elem(x)]);
        }
        for y in &ideal.i_elems {
            if !in_i(&r.add(x, y)) {
                rep.violation("I closed under addition", vec![r.format_elem(x), r.format_elem(y)]);
            }
        }
        for a in &relems {
            if !in_i(&r.mul(a, x)) || !in_i(&r.mul(x, a)) {
                rep.violation("I a two-sided ideal", vec![r.format_elem(x), r.format_elem(a)]);
            }
        }
    }
    let delems = ofa.delta_elements()?;
    for g in &ideal.gamma {
        if !ofa.delta_contains(g) {
            rep.violation("Gamma inside Delta", vec![ofa.format_delta(g)]);
        }
        if !in_i(&ofa.pi(g)) || !in_i(&ofa.rho(g)) {
            rep.violation("pi, rho of Gamma inside I", vec![ofa.format_delta(g)]);
        }
        for h in &ideal.gamma {
            if !in_g(&ofa.dadd(g, h)) {
                rep.violation("Gamma a subgroup", vec![ofa.format_delta(g), ofa.format_delta(h)]);
            }
        }
        for a in &relems {
            if !in_g(&ofa.dscale(g, a)) {
                rep.violation("Gamma scaling-closed", vec![ofa.format_delta(g), r.format_elem(a)]);
            }
        }
    }
    // lower bound: Delta.I and phi({a : a - abar in I}) inside Gamma
    for u in &delems {
        for x in &ideal.i_elems {
            if !in_g(&ofa.dscale(u, x)) {
                rep.violation("Delta.I inside Gamma", vec![ofa.format_delta(u), r.format_elem(x)]);
            }
        }
    }
    for a in &relems {
        if in_i(&r.sub(a, &r.invol(a))) && !in_g(&ofa.phi(a)) {
            rep.violation("phi({a : a - abar in I}) inside Gamma", vec![r.format_elem(a)]);
        }
    }
    Ok(rep.finish())
}

/// The quotient algebra (R/I, Delta/Gamma) as a table-backed odd form
/// algebra, with the projection maps on both levels.
pub struct Quotient {
    pub ofa: OddFormAlgebra,
    pub proj_ring: HashMap<SmallVec<[u8; 24]>, u16>,
    pub proj_delta: HashMap<SmallVec<[u8; 24]>, u32>,
}

pub fn quotient(ofa: &OddFormAlgebra, ideal: &OddFormIdeal, seed: u64) -> Result<Quotient> {
    let rep = validate_ideal(ofa, ideal, seed)?;
    if !rep.ok() {
        return Err(Error::Precondition(format!(
            "ideal laws violated: {}",
            rep.violations[0].law
        )));
    }
    let r = &ofa.ring;
    let relems = r.elements()?;
    let delems = ofa.delta_elements()?;

    // ring cosets
    let mut rrep: HashMap<SmallVec<[u8; 24]>, usize> = HashMap::new();
    let mut rreps: Vec<Elem> = Vec::new();
    for a in &relems {
        let mut best: Option<SmallVec<[u8; 24]>> = None;
        for x in &ideal.i_elems {
            let c = r.add(a, x);
            let k = r.canonical_key(&c);
            if best.as_ref().map_or(true, |b| k < *b) {
                best = Some(k);
            }
        }
        let bk = best.unwrap();
        if !rrep.contains_key(&r.canonical_key(a)) {
            let idx = match rrep.get(&bk) {
                Some(&i) => i,
                None => {
                    // the canonical representative is the least key in the coset
                    rreps.push(relems.iter().find(|c| r.canonical_key(c) == bk).unwrap().clone());
                    let i = rreps.len() - 1;
                    rrep.insert(bk.clone(), i);
                    i
                }
            };
            rrep.insert(r.canonical_key(a), idx);
        }
    }
    let rn = rreps.len();
    let rproj = |a: &Elem| -> u16 { rrep[&r.canonical_key(a)] as u16 };

    // delta cosets (Gamma is normal: commutators with Delta land in Gamma)
    let mut drep: HashMap<SmallVec<[u8; 24]>, usize> = HashMap::new();
    let mut dreps: Vec<DElem> = Vec::new();
    for u in &delems {
        let uk = ofa.delta_key(u);
        if drep.contains_key(&uk) {
            continue;
        }
        let mut best: Option<(SmallVec<[u8; 24]>, DElem)> = None;
        for g in &ideal.gamma {
            let c = ofa.dadd(u, g);
            let k = ofa.delta_key(&c);
            if best.as_ref().map_or(true, |(b, _)| k < *b) {
                best = Some((k, c));
            }
        }
        let (bk, belem) = best.unwrap();
        let idx = match drep.get(&bk) {
            Some(&i) => i,
            None => {
                dreps.push(belem);
                let i = dreps.len() - 1;
                drep.insert(bk, i);
                i
            }
        };
        for g in &ideal.gamma {
            drep.insert(ofa.delta_key(&ofa.dadd(u, g)), idx);
        }
    }
    let dn = dreps.len();
    let dproj = |u: &DElem| -> u32 { drep[&ofa.delta_key(u)] as u32 };

    let kn = r.base.size();
    let mut t = TableAlg {
        size: rn,
        add: vec![0; rn * rn],
        mul: vec![0; rn * rn],
        neg: vec![0; rn],
        invol: vec![0; rn],
        kact: vec![0; kn * rn],
        one: None,
    };
    for (i, a) in rreps.iter().enumerate() {
        t.neg[i] = rproj(&r.neg(a));
        t.invol[i] = rproj(&r.invol(a));
        for (j, b) in rreps.iter().enumerate() {
            t.add[i * rn + j] = rproj(&r.add(a, b));
            t.mul[i * rn + j] = rproj(&r.mul(a, b));
        }
        for k in 0..kn {
            t.kact[k * rn + i] = rproj(&r.scalar(k as u16, a));
        }
    }
    if let Some(one) = r.one() {
        t.one = Some(rproj(&one));
    }
    let qring = Algebra::table(r.base.clone(), t, &format!("{}/I", ofa.label))?;

    let mut dt = DeltaTable {
        size: dn,
        add: vec![0; dn * dn],
        neg: vec![0; dn],
        zero: dproj(&ofa.dzero()),
        scale: vec![0; dn * rn],
        kscale: vec![0; dn * kn],
        kmul: vec![0; kn * dn],
        phi: vec![0; rn],
        pi: vec![0; dn],
        rho: vec![0; dn],
        aug: vec![false; dn],
        special: false,
    };
    for (i, u) in dreps.iter().enumerate() {
        dt.neg[i] = dproj(&ofa.dneg(u));
        dt.pi[i] = rproj(&ofa.pi(u));
        dt.rho[i] = rproj(&ofa.rho(u));
        for (j, v) in dreps.iter().enumerate() {
            dt.add[i * dn + j] = dproj(&ofa.dadd(u, v));
        }
        for (j, a) in rreps.iter().enumerate() {
            dt.scale[i * rn + j] = dproj(&ofa.dscale(u, a));
        }
        let in_aug = ofa.aug_contains(u).unwrap_or(false);
        for k in 0..kn {
            dt.kscale[i * kn + k] = dproj(&ofa.dscale_k(u, k as u16));
            // left module structure lives on the augmentation only
            dt.kmul[k * dn + i] = if in_aug { dproj(&ofa.kmul_aug(k as u16, u)) } else { dt.zero };
        }
    }
    for (j, a) in rreps.iter().enumerate() {
        dt.phi[j] = dproj(&ofa.phi(a));
    }
    // minimal augmentation in the quotient: additive closure of phi-values
    let mut aug: Vec<bool> = vec![false; dn];
    let mut frontier: Vec<u32> = dt.phi.clone();
    aug[dt.zero as usize] = true;
    while let Some(x) = frontier.pop() {
        if aug[x as usize] {
            continue;
        }
        aug[x as usize] = true;
        for &p in &dt.phi {
            frontier.push(dt.add[x as usize * dn + p as usize]);
        }
    }
    dt.aug = aug;
    // specialness: (pi, rho) injective on the quotient carrier
    let mut seen = std::collections::HashSet::new();
    dt.special = (0..dn).all(|i| seen.insert((dt.pi[i], dt.rho[i])));

    let sampler = DeltaSampler {
        pieces: vec![SamplerPiece::Listed((0..dn as u32).map(DElem::Idx).collect())],
    };
    let qofa = OddFormAlgebra::new(
        qring,
        DeltaKind::Table(dt),
        AugKind::Table,
        sampler,
        ofa.unital,
        format!("{}/(I,Gamma)", ofa.label),
    );
    let mut proj_ring = HashMap::new();
    for a in &relems {
        proj_ring.insert(r.canonical_key(a), rproj(a));
    }
    let mut proj_delta = HashMap::new();
    for u in &delems {
        proj_delta.insert(ofa.delta_key(u), dproj(u));
    }
    Ok(Quotient { ofa: qofa, proj_ring, proj_delta })
}

/// An action of one odd form ring on another: four multiplication maps.
pub struct OfAction {
    pub outer: OddFormAlgebra,
    pub inner: OddFormAlgebra,
    pub kind: ActionKind,
    pub unital_action: bool,
}

type CrossRing = Box<dyn Fn(&Elem, &Elem) -> Elem + Send + Sync>;
type CrossDelta = Box<dyn Fn(&DElem, &Elem) -> DElem + Send + Sync>;

pub enum ActionKind {
    /// All four maps are zero.
    Zero,
    /// The base ring (K, 0) acting by its scalar action.
    Unitalization,
    /// Explicit maps: r.s, s.r, theta.r, delta.s.
    Custom { rs: CrossRing, sr: CrossRing, theta_r: CrossDelta, delta_s: CrossDelta },
}

impl OfAction {
    /// K = (base, 0) acting unitally on an odd form K-algebra.
    pub fn unitalization(inner: OddFormAlgebra) -> OfAction {
        let outer = k_trivial(inner.ring.base.clone());
        OfAction { outer, inner, kind: ActionKind::Unitalization, unital_action: true }
    }

    pub fn rs(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.kind {
            ActionKind::Zero => self.inner.ring.zero(),
            ActionKind::Unitalization => self.inner.ring.scalar(a[0], b),
            ActionKind::Custom { rs, .. } => rs(a, b),
        }
    }
    pub fn sr(&self, b: &Elem, a: &Elem) -> Elem {
        match &self.kind {
            ActionKind::Zero => self.inner.ring.zero(),
            ActionKind::Unitalization => self.inner.ring.scalar(a[0], b),
            ActionKind::Custom { sr, .. } => sr(b, a),
        }
    }
    pub fn theta_r(&self, v: &DElem, a: &Elem) -> DElem {
        match &self.kind {
            ActionKind::Zero => self.inner.dzero(),
            ActionKind::Unitalization => self.inner.dscale_k(v, a[0]),
            ActionKind::Custom { theta_r, .. } => theta_r(v, a),
        }
    }
    pub fn delta_s(&self, u: &DElem, b: &Elem) -> DElem {
        match &self.kind {
            ActionKind::Zero => self.inner.dzero(),
            ActionKind::Unitalization => {
                let _ = (u, b);
                self.inner.dzero()
            }
            ActionKind::Custom { delta_s, .. } => delta_s(u, b),
        }
    }
}

/// The odd form ring (K, 0) as a table algebra with trivial Delta.
pub fn k_trivial(base: std::sync::Arc<crate::ring::CommRing>) -> OddFormAlgebra {
    let ring = Algebra::base_as_algebra(base.clone());
    let n = ring.element_count() as usize;
    let dt = DeltaTable {
        size: 1,
        add: vec![0],
        neg: vec![0],
        zero: 0,
        scale: vec![0; n],
        kscale: vec![0; base.size()],
        kmul: vec![0; base.size()],
        phi: vec![0; n],
        pi: vec![0],
        rho: vec![0],
        aug: vec![true],
        special: true,
    };
    OddFormAlgebra::new(
        ring,
        DeltaKind::Table(dt),
        AugKind::Table,
        DeltaSampler { pieces: vec![SamplerPiece::Listed(vec![DElem::Idx(0)])] },
        true,
        format!("({}, 0)", base.label()),
    )
}

/// Verifies the action laws on sampled or exhaustive tuples.
pub fn check_action_axioms(act: &OfAction, seed: u64) -> Report {
    let mut rep = ReportBuilder::new(true, seed);
    let outer = &act.outer;
    let inner = &act.inner;
    let ro = &outer.ring;
    let ri = &inner.ring;

    let small = ro
        .element_count()
        .checked_mul(ri.element_count())
        .and_then(|p| p.checked_mul(outer.delta_count()))
        .and_then(|p| p.checked_mul(inner.delta_count()))
        .map_or(false, |p| p <= 1 << 18);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tuples: Vec<(Elem, Elem, Elem, Elem, DElem, DElem, DElem, DElem)> = if small {
        let ra = ro.elements().unwrap();
        let sb = ri.elements().unwrap();
        let du = outer.delta_elements().unwrap();
        let tv = inner.delta_elements().unwrap();
        let mut out = Vec::new();
        for a in &ra {
            for a2 in &ra {
                for b in &sb {
                    for b2 in &sb {
                        for u in &du {
                            for v in &tv {
                                out.push((
                                    a.clone(),
                                    a2.clone(),
                                    b.clone(),
                                    b2.clone(),
                                    u.clone(),
                                    u.clone(),
                                    v.clone(),
                                    v.clone(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        out
    } else {
        rep.mark_sampled();
        (0..SAMPLE_TUPLES / 12)
            .map(|_| {
                (
                    ro.random(&mut rng),
                    ro.random(&mut rng),
                    ri.random(&mut rng),
                    ri.random(&mut rng),
                    outer.random_delta(&mut rng),
                    outer.random_delta(&mut rng),
                    inner.random_delta(&mut rng),
                    inner.random_delta(&mut rng),
                )
            })
            .collect()
    };

    for (a, a2, b, b2, u, u2, v, v2) in &tuples {
        rep.tick();
        let w = |s: &str| s.to_string();
        // (ab)bar = bbar abar
        if ri.invol(&act.rs(a, b)) != act.sr(&ri.invol(b), &ro.invol(a)) {
            rep.violation("(ab)bar = bbar abar", vec![w("a b")]);
        }
        // biadditivity
        if act.rs(&ro.add(a, a2), b) != ri.add(&act.rs(a, b), &act.rs(a2, b)) {
            rep.violation("(a+a')b = ab+a'b", vec![w("a a' b")]);
        }
        if act.rs(a, &ri.add(b, b2)) != ri.add(&act.rs(a, b), &act.rs(a, b2)) {
            rep.violation("a(b+b') = ab+ab'", vec![w("a b b'")]);
        }
        // associativity mixes
        if act.rs(&ro.mul(a, a2), b) != act.rs(a, &act.rs(a2, b)) {
            rep.violation("(aa')b = a(a'b)", vec![w("a a' b")]);
        }
        if ri.mul(&act.rs(a, b), b2) != act.rs(a, &ri.mul(b, b2)) {
            rep.violation("(ab)b' = a(bb')", vec![w("a b b'")]);
        }
        if act.sr(&act.rs(a, b), a2) != act.rs(a, &act.sr(b, a2)) {
            rep.violation("(ab)a' = a(ba')", vec![w("a b a'")]);
        }
        if ri.mul(&act.sr(b, a), b2) != ri.mul(b, &act.rs(a, b2)) {
            rep.violation("(ba)b' = b(ab')", vec![w("b a b'")]);
        }
        // delta-side additivity
        if act.delta_s(&outer.dadd(u, u2), b) != inner.dadd(&act.delta_s(u, b), &act.delta_s(u2, b)) {
            rep.violation("(u+u')b = ub+u'b", vec![w("u u' b")]);
        }
        // u.(b+b') = u.b + phi(b'bar rho(u) b) + u.b'
        let phi_term = inner.phi(&ri.mul(&ri.invol(b2), &act.rs(&outer.rho(u), b)));
        let lhs = act.delta_s(u, &ri.add(b, b2));
        let rhs = inner.dadd(&inner.dadd(&act.delta_s(u, b), &phi_term), &act.delta_s(u, b2));
        if lhs != rhs {
            rep.violation("u.(b+b') = u.b + phi(b'bar rho(u) b) + u.b'", vec![w("u b b'")]);
        }
        if act.theta_r(&inner.dadd(v, v2), a) != inner.dadd(&act.theta_r(v, a), &act.theta_r(v2, a)) {
            rep.violation("(v+v')a = va+v'a", vec![w("v v' a")]);
        }
        let phi_term2 = inner.phi(&act.sr(&act.rs(&ro.invol(a2), &inner.rho(v)), a));
        let lhs2 = act.theta_r(v, &ro.add(a, a2));
        let rhs2 = inner.dadd(&inner.dadd(&act.theta_r(v, a), &phi_term2), &act.theta_r(v, a2));
        if lhs2 != rhs2 {
            rep.violation("v.(a+a') = v.a + phi(a'bar rho(v) a) + v.a'", vec![w("v a a'")]);
        }
        // scaling compatibilities
        if act.delta_s(&outer.dscale(u, a), b) != act.delta_s(u, &act.rs(a, b)) {
            rep.violation("(u.a).b = u.(ab)", vec![w("u a b")]);
        }
        if act.theta_r(&act.delta_s(u, b), a) != act.delta_s(u, &act.sr(b, a)) {
            rep.violation("(u.b).a = u.(ba)", vec![w("u b a")]);
        }
        if inner.dscale(&act.delta_s(u, b), b2) != act.delta_s(u, &ri.mul(b, b2)) {
            rep.violation("(u.b).b' = u.(bb')", vec![w("u b b'")]);
        }
        if inner.dscale(&act.theta_r(v, a), b) != inner.dscale(v, &act.rs(a, b)) {
            rep.violation("(v.a).b = v.(ab)", vec![w("v a b")]);
        }
        if act.theta_r(&act.theta_r(v, a), a2) != act.theta_r(v, &ro.mul(a, a2)) {
            rep.violation("(v.a).a' = v.(aa')", vec![w("v a a'")]);
        }
        if act.theta_r(&inner.dscale(v, b), a) != inner.dscale(v, &act.sr(b, a)) {
            rep.violation("(v.b).a = v.(ba)", vec![w("v b a")]);
        }
        // phi compatibilities
        if act.delta_s(&outer.phi(a), b) != inner.phi(&ri.mul(&ri.invol(b), &act.rs(a, b))) {
            rep.violation("phi(a).b = phi(bbar a b)", vec![w("a b")]);
        }
        if act.theta_r(&inner.phi(b), a) != inner.phi(&act.sr(&act.rs(&ro.invol(a), b), a)) {
            rep.violation("phi(b).a = phi(abar b a)", vec![w("b a")]);
        }
        // pi and rho
        if inner.pi(&act.delta_s(u, b)) != act.rs(&outer.pi(u), b) {
            rep.violation("pi(u.b) = pi(u) b", vec![w("u b")]);
        }
        if inner.pi(&act.theta_r(v, a)) != act.sr(&inner.pi(v), a) {
            rep.violation("pi(v.a) = pi(v) a", vec![w("v a")]);
        }
        if inner.rho(&act.delta_s(u, b)) != ri.mul(&ri.invol(b), &act.rs(&outer.rho(u), b)) {
            rep.violation("rho(u.b) = bbar rho(u) b", vec![w("u b")]);
        }
        if inner.rho(&act.theta_r(v, a)) != act.sr(&act.rs(&ro.invol(a), &inner.rho(v)), a) {
            rep.violation("rho(v.a) = abar rho(v) a", vec![w("v a")]);
        }
        if act.unital_action {
            if let Some(one) = ro.one() {
                if act.sr(b, &one) != *b || act.rs(&one, b) != *b {
                    rep.violation("b.1 = b = 1.b", vec![w("b")]);
                }
                if act.theta_r(v, &one) != *v {
                    rep.violation("v.1 = v", vec![w("v")]);
                }
            }
        }
    }
    rep.finish()
}

/// The semidirect product (S x| R, Theta x| Delta) of an action, as a
/// table-backed odd form algebra, with the canonical injection of the inner
/// algebra and projection onto the outer one.
pub struct Semidirect {
    pub ofa: OddFormAlgebra,
    /// ring index of (b, a)
    pub encode_ring: Box<dyn Fn(&Elem, &Elem) -> u16 + Send + Sync>,
    /// delta index of (v, u)
    pub encode_delta: Box<dyn Fn(&DElem, &DElem) -> u32 + Send + Sync>,
}

pub fn semidirect(act: &OfAction, seed: u64) -> Result<Semidirect> {
    let chk = check_action_axioms(act, seed);
    if !chk.ok() {
        return Err(Error::Precondition(format!(
            "action laws violated: {}",
            chk.violations[0].law
        )));
    }
    let outer = &act.outer;
    let inner = &act.inner;
    let ro = &outer.ring;
    let ri = &inner.ring;
    let sa = ri.elements()?;
    let ra = ro.elements()?;
    let sn = sa.len();
    let rn = ra.len();
    let n = sn * rn;
    if n > 1 << 14 {
        return Err(Error::SizeBound("semidirect ring carrier too large".into()));
    }
    let rkey: HashMap<_, usize> = sa.iter().enumerate().map(|(i, x)| (ri.canonical_key(x), i)).collect();
    let okey: HashMap<_, usize> = ra.iter().enumerate().map(|(i, x)| (ro.canonical_key(x), i)).collect();
    let enc = {
        let rkey = rkey.clone();
        let okey = okey.clone();
        let ri2 = ri.clone();
        let ro2 = ro.clone();
        move |b: &Elem, a: &Elem| -> u16 {
            (rkey[&ri2.canonical_key(b)] * rn + okey[&ro2.canonical_key(a)]) as u16
        }
    };
    let kn = ro.base.size();
    let mut t = TableAlg {
        size: n,
        add: vec![0; n * n],
        mul: vec![0; n * n],
        neg: vec![0; n],
        invol: vec![0; n],
        kact: vec![0; kn * n],
        one: None,
    };
    for (i, (b, a)) in product_list(&sa, &ra).into_iter().enumerate() {
        t.neg[i] = enc(&ri.neg(&b), &ro.neg(&a)) as u16;
        t.invol[i] = enc(&ri.invol(&b), &ro.invol(&a)) as u16;
        for k in 0..kn {
            t.kact[k * n + i] = enc(&ri.scalar(k as u16, &b), &ro.scalar(k as u16, &a));
        }
        for (j, (b2, a2)) in product_list(&sa, &ra).into_iter().enumerate() {
            t.add[i * n + j] = enc(&ri.add(&b, &b2), &ro.add(&a, &a2));
            // (b, a)(b', a') = (bb' + ab' + ba', aa')
            let m = ri.add(
                &ri.add(&ri.mul(&b, &b2), &act.rs(&a, &b2)),
                &act.sr(&b, &a2),
            );
            t.mul[i * n + j] = enc(&m, &ro.mul(&a, &a2));
        }
    }
    if act.unital_action {
        if let Some(one) = ro.one() {
            t.one = Some(enc(&ri.zero(), &one));
        }
    }
    let label = format!("{} x| {}", inner.label, outer.label);
    let qring = Algebra::table(ro.base.clone(), t, &label)?;

    let tv = inner.delta_elements()?;
    let du = outer.delta_elements()?;
    let tn = tv.len();
    let dn0 = du.len();
    let dn = tn * dn0;
    if dn > 1 << 14 {
        return Err(Error::SizeBound("semidirect delta carrier too large".into()));
    }
    let tkeys: HashMap<_, usize> = tv.iter().enumerate().map(|(i, x)| (inner.delta_key(x), i)).collect();
    let dkeys: HashMap<_, usize> = du.iter().enumerate().map(|(i, x)| (outer.delta_key(x), i)).collect();
    let denc = {
        let tkeys = tkeys.clone();
        let dkeys = dkeys.clone();
        let inner2o = inner.clone();
        let outer2o = outer.clone();
        move |v: &DElem, u: &DElem| -> u32 {
            (tkeys[&inner2o.delta_key(v)] * dn0 + dkeys[&outer2o.delta_key(u)]) as u32
        }
    };
    let mut dt = DeltaTable {
        size: dn,
        add: vec![0; dn * dn],
        neg: vec![0; dn],
        zero: denc(&inner.dzero(), &outer.dzero()),
        scale: vec![0; dn * n],
        kscale: vec![0; dn * kn],
        kmul: vec![0; kn * dn],
        phi: vec![0; n],
        pi: vec![0; dn],
        rho: vec![0; dn],
        aug: vec![false; dn],
        special: false,
    };
    let pairs: Vec<(DElem, DElem)> = product_list(&tv, &du);
    for (i, (v, u)) in pairs.iter().enumerate() {
        // pi(v, u) = (pi v, pi u); rho(v, u) = (rho v - pi(v)bar pi(u), rho u)
        dt.pi[i] = enc(&inner.pi(v), &outer.pi(u));
        let cross = act.sr(&ri.invol(&inner.pi(v)), &outer.pi(u));
        dt.rho[i] = enc(&ri.sub(&inner.rho(v), &cross), &outer.rho(u));
        // group law: (v, u) + (v', u') = (v + v' + phi(pi(v')bar . pi(u)), u + u'),
        // the phi-correction making the rho law hold in the product.
        for (j, (v2, u2)) in pairs.iter().enumerate() {
            let corr = inner.phi(&act.sr(&ri.invol(&inner.pi(v2)), &outer.pi(u)));
            let vv = inner.dadd(&inner.dadd(v, v2), &corr);
            dt.add[i * dn + j] = denc(&vv, &outer.dadd(u, u2));
        }
    }
    for (i, (v, u)) in pairs.iter().enumerate() {
        // inverse: the unique j with (v,u) + pair_j = 0
        let mut found = None;
        for j in 0..dn {
            if dt.add[i * dn + j] == dt.zero && dt.add[j * dn + i] == dt.zero {
                found = Some(j as u32);
                break;
            }
        }
        dt.neg[i] = found.ok_or_else(|| Error::Invalid("semidirect delta lacks inverses".into()))?;
        // scaling: (v, u).(b, a) = (v.b + v.a + u.b + phi(abar rho(v) b + abar rho(u) b), u.a)
        for (j, (b, a)) in product_list(&sa, &ra).into_iter().enumerate() {
            let t1 = inner.dscale(v, &b);
            let t2 = act.theta_r(v, &a);
            let t3 = act.delta_s(u, &b);
            // abar rho(v) b: abar acts from the left on rho(v) in S, times b in S
            let left = ri.mul(&act.rs(&ro.invol(&a), &inner.rho(v)), &b);
            // abar rho(u) b: rho(u) in R acts on b from the left, then abar from the left
            let right = act.rs(&ro.invol(&a), &act.rs(&outer.rho(u), &b));
            let t4 = inner.phi(&ri.add(&left, &right));
            let vpart = inner.dadd(&inner.dadd(&inner.dadd(&t1, &t2), &t3), &t4);
            dt.scale[i * n + j] = denc(&vpart, &outer.dscale(u, &a));
        }
        let in_aug = inner.aug_contains(v).unwrap_or(false) && outer.aug_contains(u).unwrap_or(false);
        for k in 0..kn {
            dt.kscale[i * kn + k] =
                denc(&inner.dscale_k(v, k as u16), &outer.dscale_k(u, k as u16));
            // the left module structure is meaningful on the augmentation only
            dt.kmul[k * dn + i] = if in_aug {
                denc(&inner.kmul_aug(k as u16, v), &outer.kmul_aug(k as u16, u))
            } else {
                dt.zero
            };
        }
    }
    for (j, (b, a)) in product_list(&sa, &ra).into_iter().enumerate() {
        dt.phi[j] = denc(&inner.phi(&b), &outer.phi(&a));
    }
    // augmentation: product of the two augmentations
    for (i, (v, u)) in pairs.iter().enumerate() {
        let va = inner.aug_contains(v).unwrap_or(false);
        let ua = outer.aug_contains(u).unwrap_or(false);
        dt.aug[i] = va && ua;
    }
    let mut seen = std::collections::HashSet::new();
    dt.special = (0..dn).all(|i| seen.insert((dt.pi[i], dt.rho[i])));

    let sampler = DeltaSampler {
        pieces: vec![SamplerPiece::Listed((0..dn as u32).map(DElem::Idx).collect())],
    };
    let ofa = OddFormAlgebra::new(
        qring,
        DeltaKind::Table(dt),
        AugKind::Table,
        sampler,
        act.unital_action && outer.unital,
        label,
    );
    Ok(Semidirect {
        ofa,
        encode_ring: Box::new(enc),
        encode_delta: Box::new(denc),
    })
}

fn product_list<A: Clone, B: Clone>(xs: &[A], ys: &[B]) -> Vec<(A, B)> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::check_ofa_axioms;
    use crate::ring::CommRing;
    use std::sync::Arc;

    fn zmod(n: usize) -> Arc<CommRing> {
        Arc::new(CommRing::zmod(n).unwrap())
    }

    #[test]
    fn zero_action_laws_hold() {
        let inner = OddFormAlgebra::base_max(zmod(4)).unwrap();
        let outer = OddFormAlgebra::zero(zmod(4));
        let act = OfAction { outer, inner, kind: ActionKind::Zero, unital_action: false };
        let rep = check_action_axioms(&act, 1);
        assert!(rep.ok(), "{:?}", rep.violations.first());
    }

    #[test]
    fn unitalization_action_laws_hold() {
        for n in [2usize, 4] {
            let inner = OddFormAlgebra::base_max(zmod(n)).unwrap();
            let act = OfAction::unitalization(inner);
            let rep = check_action_axioms(&act, 1);
            assert!(rep.ok(), "z/{n}: {:?}", rep.violations.first());
        }
    }

    #[test]
    fn semidirect_of_unitalization_passes_axioms() {
        let inner = OddFormAlgebra::base_max(zmod(2)).unwrap();
        let act = OfAction::unitalization(inner);
        let sd = semidirect(&act, 1).unwrap();
        assert!(sd.ofa.unital);
        let rep = check_ofa_axioms(&sd.ofa, 1);
        assert!(rep.ok(), "{:?}", rep.violations.first());
    }

    #[test]
    fn semidirect_trivial_action_is_a_copy() {
        // zero algebra acting trivially: product is isomorphic to the inner one
        let inner = OddFormAlgebra::base_max(zmod(3)).unwrap();
        let outer = OddFormAlgebra::zero(zmod(3));
        let act = OfAction { outer, inner: inner.clone(), kind: ActionKind::Zero, unital_action: false };
        let sd = semidirect(&act, 1).unwrap();
        assert_eq!(sd.ofa.ring.element_count(), inner.ring.element_count());
        assert_eq!(sd.ofa.delta_count(), inner.delta_count());
        let rep = check_ofa_axioms(&sd.ofa, 1);
        assert!(rep.ok(), "{:?}", rep.violations.first());
    }

    #[test]
    fn semidirect_short_exactness() {
        // injection then projection is the identity on components;
        // kernel of the projection is the image of the injection
        let inner = OddFormAlgebra::base_max(zmod(2)).unwrap();
        let act = OfAction::unitalization(inner.clone());
        let sd = semidirect(&act, 1).unwrap();
        let rn_outer = act.outer.ring.element_count() as usize;
        for b in inner.ring.elements().unwrap() {
            let idx = (sd.encode_ring)(&b, &act.outer.ring.zero());
            // projection onto the outer component is idx % rn_outer
            assert_eq!(idx as usize % rn_outer, 0, "inner injects into the kernel");
        }
    }

    #[test]
    fn quotient_by_zero_is_isomorphic_and_by_everything_is_zero() {
        let ofa = OddFormAlgebra::base_max(zmod(4)).unwrap();
        let zero_ideal = OddFormIdeal {
            i_elems: vec![ofa.ring.zero()],
            gamma: vec![ofa.dzero()],
        };
        let q = quotient(&ofa, &zero_ideal, 1).unwrap();
        assert_eq!(q.ofa.ring.element_count(), 4);
        assert_eq!(q.ofa.delta_count(), ofa.delta_count());
        assert!(check_ofa_axioms(&q.ofa, 1).ok());

        let full = OddFormIdeal {
            i_elems: ofa.ring.elements().unwrap(),
            gamma: ofa.delta_elements().unwrap(),
        };
        let q2 = quotient(&ofa, &full, 1).unwrap();
        assert_eq!(q2.ofa.ring.element_count(), 1);
        assert_eq!(q2.ofa.delta_count(), 1);
    }

    #[test]
    fn quotient_preserves_operations() {
        let ofa = OddFormAlgebra::base_max(zmod(4)).unwrap();
        // ideal generated by 2 with the full allowed gamma
        let i_elems: Vec<Elem> = vec![
            ofa.ring.zero(),
            SmallVec::from_slice(&[2]),
        ];
        let ikeys: std::collections::HashSet<_> =
            i_elems.iter().map(|x| ofa.ring.canonical_key(x)).collect();
        let gamma: Vec<DElem> = ofa
            .delta_elements()
            .unwrap()
            .into_iter()
            .filter(|u| {
                ikeys.contains(&ofa.ring.canonical_key(&ofa.pi(u)))
                    && ikeys.contains(&ofa.ring.canonical_key(&ofa.rho(u)))
            })
            .collect();
        let ideal = OddFormIdeal { i_elems, gamma };
        let q = quotient(&ofa, &ideal, 1).unwrap();
        assert_eq!(q.ofa.ring.element_count(), 2);
        assert!(check_ofa_axioms(&q.ofa, 1).ok());
        // projection is multiplicative
        for a in ofa.ring.elements().unwrap() {
            for b in ofa.ring.elements().unwrap() {
                let pa = q.proj_ring[&ofa.ring.canonical_key(&a)];
                let pb = q.proj_ring[&ofa.ring.canonical_key(&b)];
                let pab = q.proj_ring[&ofa.ring.canonical_key(&ofa.ring.mul(&a, &b))];
                let qa: Elem = SmallVec::from_slice(&[pa]);
                let qb: Elem = SmallVec::from_slice(&[pb]);
                assert_eq!(q.ofa.ring.mul(&qa, &qb), {
                    let v: Elem = SmallVec::from_slice(&[pab]);
                    v
                });
            }
        }
    }
}
