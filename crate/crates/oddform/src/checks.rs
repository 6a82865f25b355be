//! Exhaustive / sampled verification of the odd form algebra laws.
//!
//! The full tuple space is walked when |R| * |Delta| is at most 2^20;
//! otherwise a seeded pseudorandom sample of tuples is drawn per law group,
//! so the verdict is reproducible for a fixed seed.

use crate::algebra::Elem;
use crate::ofa::{DElem, OddFormAlgebra};
use crate::report::{Report, ReportBuilder, SAMPLE_TUPLES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXHAUSTIVE_PRODUCT: u128 = 1 << 20;

enum Mode {
    Exhaustive { rl: Vec<Elem>, dl: Vec<DElem> },
    Sampled,
}

pub fn check_ofa_axioms(ofa: &OddFormAlgebra, seed: u64) -> Report {
    let mut rep = ReportBuilder::new(true, seed);
    let small = ofa
        .ring
        .element_count()
        .checked_mul(ofa.delta_count())
        .map_or(false, |p| p <= EXHAUSTIVE_PRODUCT);
    let mode = if small {
        Mode::Exhaustive { rl: ofa.ring.elements().unwrap(), dl: ofa.delta_elements().unwrap() }
    } else {
        rep.mark_sampled();
        Mode::Sampled
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let kn = ofa.ring.base.size() as u16;

    match &mode {
        Mode::Exhaustive { rl, dl } => {
            for a in rl {
                axioms_r(ofa, &mut rep, a);
                for k in 0..kn {
                    axioms_rk(ofa, &mut rep, a, k);
                }
                for b in rl {
                    axioms_rr(ofa, &mut rep, a, b);
                    for c in rl {
                        axioms_rrr(ofa, &mut rep, a, b, c);
                    }
                }
            }
            for u in dl {
                axioms_d(ofa, &mut rep, u);
                for v in dl {
                    axioms_dd(ofa, &mut rep, u, v);
                    for a in rl {
                        axioms_dda(ofa, &mut rep, u, v, a);
                    }
                }
                for a in rl {
                    axioms_dr(ofa, &mut rep, u, a);
                    for b in rl {
                        axioms_drr(ofa, &mut rep, u, a, b);
                    }
                    for k in 0..kn {
                        axioms_drk(ofa, &mut rep, u, a, k);
                    }
                }
                for k in 0..kn {
                    for k2 in 0..kn {
                        axioms_dkk(ofa, &mut rep, u, k, k2);
                    }
                }
            }
            // augmentation laws over the phi-image slice of D
            for a in rl {
                let v = ofa.phi(a);
                for k in 0..kn {
                    for b in rl {
                        axioms_aug(ofa, &mut rep, &v, k, b);
                    }
                }
            }
        }
        Mode::Sampled => {
            let n = SAMPLE_TUPLES / 6;
            for _ in 0..n {
                let a = ofa.ring.random(&mut rng);
                let b = ofa.ring.random(&mut rng);
                let c = ofa.ring.random(&mut rng);
                let k = rng.gen_range(0..kn);
                let k2 = rng.gen_range(0..kn);
                let u = ofa.random_delta(&mut rng);
                let v = ofa.random_delta(&mut rng);
                axioms_r(ofa, &mut rep, &a);
                axioms_rk(ofa, &mut rep, &a, k);
                axioms_rr(ofa, &mut rep, &a, &b);
                axioms_rrr(ofa, &mut rep, &a, &b, &c);
                axioms_d(ofa, &mut rep, &u);
                axioms_dd(ofa, &mut rep, &u, &v);
                axioms_dda(ofa, &mut rep, &u, &v, &a);
                axioms_dr(ofa, &mut rep, &u, &a);
                axioms_drr(ofa, &mut rep, &u, &a, &b);
                axioms_drk(ofa, &mut rep, &u, &a, k);
                axioms_dkk(ofa, &mut rep, &u, k, k2);
                axioms_aug(ofa, &mut rep, &ofa.phi(&c), k, &a);
            }
        }
    }
    rep.finish()
}

fn wr(ofa: &OddFormAlgebra, a: &Elem) -> String {
    ofa.ring.format_elem(a)
}
fn wd(ofa: &OddFormAlgebra, u: &DElem) -> String {
    ofa.format_delta(u)
}

fn axioms_rrr(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, a: &Elem, b: &Elem, c: &Elem) {
    rep.tick();
    let r = &ofa.ring;
    if r.mul(&r.mul(a, b), c) != r.mul(a, &r.mul(b, c)) {
        rep.violation("(ab)c = a(bc)", vec![wr(ofa, a), wr(ofa, b), wr(ofa, c)]);
    }
    if r.mul(a, &r.add(b, c)) != r.add(&r.mul(a, b), &r.mul(a, c)) {
        rep.violation("a(b+c) = ab+ac", vec![wr(ofa, a), wr(ofa, b), wr(ofa, c)]);
    }
    if r.mul(&r.add(a, b), c) != r.add(&r.mul(a, c), &r.mul(b, c)) {
        rep.violation("(a+b)c = ac+bc", vec![wr(ofa, a), wr(ofa, b), wr(ofa, c)]);
    }
}

fn axioms_rr(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, a: &Elem, b: &Elem) {
    rep.tick();
    let r = &ofa.ring;
    if r.invol(&r.mul(a, b)) != r.mul(&r.invol(b), &r.invol(a)) {
        rep.violation("(ab)bar = bbar abar", vec![wr(ofa, a), wr(ofa, b)]);
    }
    if r.invol(&r.add(a, b)) != r.add(&r.invol(a), &r.invol(b)) {
        rep.violation("(a+b)bar = abar+bbar", vec![wr(ofa, a), wr(ofa, b)]);
    }
    // phi(a + b) = phi(a) + phi(b)
    if ofa.phi(&r.add(a, b)) != ofa.dadd(&ofa.phi(a), &ofa.phi(b)) {
        rep.violation("phi(a+b) = phi(a)+phi(b)", vec![wr(ofa, a), wr(ofa, b)]);
    }
    // phi(b) . a = phi(abar b a)
    let lhs = ofa.dscale(&ofa.phi(b), a);
    let rhs = ofa.phi(&r.mul(&r.mul(&r.invol(a), b), a));
    if lhs != rhs {
        rep.violation("phi(b).a = phi(abar b a)", vec![wr(ofa, a), wr(ofa, b)]);
    }
}

fn axioms_r(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, a: &Elem) {
    rep.tick();
    let r = &ofa.ring;
    if r.invol(&r.invol(a)) != *a {
        rep.violation("abarbar = a", vec![wr(ofa, a)]);
    }
    let pa = ofa.phi(a);
    if !ofa.delta_contains(&pa) {
        rep.violation("phi(a) in Delta", vec![wr(ofa, a)]);
    }
    if !r.is_zero(&ofa.pi(&pa)) {
        rep.violation("pi(phi(a)) = 0", vec![wr(ofa, a)]);
    }
    if ofa.rho(&pa) != r.sub(a, &r.invol(a)) {
        rep.violation("rho(phi(a)) = a - abar", vec![wr(ofa, a)]);
    }
    if r.invol(a) == *a && pa != ofa.dzero() {
        rep.violation("phi(a) = 0 when a = abar", vec![wr(ofa, a)]);
    }
    if ofa.unital {
        let one = r.one().expect("unital algebra");
        if r.mul(a, &one) != *a || r.mul(&one, a) != *a {
            rep.violation("a.1 = 1.a = a", vec![wr(ofa, a)]);
        }
    }
}

fn axioms_rk(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, a: &Elem, k: u16) {
    rep.tick();
    let r = &ofa.ring;
    // involution is K-linear; scalars commute with everything
    if r.invol(&r.scalar(k, a)) != r.scalar(k, &r.invol(a)) {
        rep.violation("(ka)bar = k abar", vec![wr(ofa, a), k.to_string()]);
    }
}

fn axioms_dd(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, u: &DElem, v: &DElem) {
    rep.tick();
    let r = &ofa.ring;
    let sum = ofa.dadd(u, v);
    if !ofa.delta_contains(&sum) {
        rep.violation("Delta closed under +", vec![wd(ofa, u), wd(ofa, v)]);
    }
    if ofa.pi(&sum) != r.add(&ofa.pi(u), &ofa.pi(v)) {
        rep.violation("pi(u+v) = pi(u)+pi(v)", vec![wd(ofa, u), wd(ofa, v)]);
    }
    let rho_expect = r.add(
        &r.sub(&ofa.rho(u), &r.mul(&r.invol(&ofa.pi(u)), &ofa.pi(v))),
        &ofa.rho(v),
    );
    if ofa.rho(&sum) != rho_expect {
        rep.violation("rho(u+v) = rho(u) - pi(u)bar pi(v) + rho(v)", vec![wd(ofa, u), wd(ofa, v)]);
    }
    // [u, v] = phi(-pi(u)bar pi(v))
    let comm = ofa.dsub(&ofa.dadd(u, v), &ofa.dadd(v, u));
    let rhs = ofa.phi(&r.neg(&r.mul(&r.invol(&ofa.pi(u)), &ofa.pi(v))));
    if comm != rhs {
        rep.violation("[u,v] = phi(-pi(u)bar pi(v))", vec![wd(ofa, u), wd(ofa, v)]);
    }
}

fn axioms_dda(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, u: &DElem, v: &DElem, a: &Elem) {
    rep.tick();
    // (u + v).a = u.a + v.a
    let lhs = ofa.dscale(&ofa.dadd(u, v), a);
    let rhs = ofa.dadd(&ofa.dscale(u, a), &ofa.dscale(v, a));
    if lhs != rhs {
        rep.violation("(u+v).a = u.a + v.a", vec![wd(ofa, u), wd(ofa, v), wr(ofa, a)]);
    }
}

fn axioms_d(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, u: &DElem) {
    rep.tick();
    let r = &ofa.ring;
    let s = r.add(
        &r.add(&ofa.rho(u), &r.invol(&ofa.rho(u))),
        &r.mul(&r.invol(&ofa.pi(u)), &ofa.pi(u)),
    );
    if !r.is_zero(&s) {
        rep.violation("rho(u) + rho(u)bar + pi(u)bar pi(u) = 0", vec![wd(ofa, u)]);
    }
    if !ofa.delta_contains(&ofa.dneg(u)) {
        rep.violation("Delta closed under -", vec![wd(ofa, u)]);
    }
    if ofa.unital {
        let one = r.one().expect("unital algebra");
        if ofa.dscale(u, &one) != *u {
            rep.violation("u.1 = u", vec![wd(ofa, u)]);
        }
    }
}

fn axioms_dr(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, u: &DElem, a: &Elem) {
    rep.tick();
    let r = &ofa.ring;
    let ua = ofa.dscale(u, a);
    if !ofa.delta_contains(&ua) {
        rep.violation("Delta closed under scaling", vec![wd(ofa, u), wr(ofa, a)]);
    }
    if ofa.pi(&ua) != r.mul(&ofa.pi(u), a) {
        rep.violation("pi(u.a) = pi(u) a", vec![wd(ofa, u), wr(ofa, a)]);
    }
    if ofa.rho(&ua) != r.mul(&r.mul(&r.invol(a), &ofa.rho(u)), a) {
        rep.violation("rho(u.a) = abar rho(u) a", vec![wd(ofa, u), wr(ofa, a)]);
    }
}

fn axioms_drr(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, u: &DElem, a: &Elem, b: &Elem) {
    rep.tick();
    let r = &ofa.ring;
    // u.(a+b) = u.a + phi(bbar rho(u) a) + u.b
    let lhs = ofa.dscale(u, &r.add(a, b));
    let mid = ofa.phi(&r.mul(&r.mul(&r.invol(b), &ofa.rho(u)), a));
    let rhs = ofa.dadd(&ofa.dadd(&ofa.dscale(u, a), &mid), &ofa.dscale(u, b));
    if lhs != rhs {
        rep.violation(
            "u.(a+b) = u.a + phi(bbar rho(u) a) + u.b",
            vec![wd(ofa, u), wr(ofa, a), wr(ofa, b)],
        );
    }
    if ofa.dscale(&ofa.dscale(u, a), b) != ofa.dscale(u, &r.mul(a, b)) {
        rep.violation("(u.a).b = u.(ab)", vec![wd(ofa, u), wr(ofa, a), wr(ofa, b)]);
    }
}

fn axioms_drk(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, u: &DElem, a: &Elem, k: u16) {
    rep.tick();
    let r = &ofa.ring;
    // scalars commute with the scaling action: (u.k).a = (u.a).k = u.(ka)
    let lhs = ofa.dscale(&ofa.dscale_k(u, k), a);
    let mid = ofa.dscale_k(&ofa.dscale(u, a), k);
    let rhs = ofa.dscale(u, &r.scalar(k, a));
    if lhs != rhs || mid != rhs {
        rep.violation("(u.k).a = u.(ka) = (u.a).k", vec![wd(ofa, u), wr(ofa, a), k.to_string()]);
    }
}

fn axioms_dkk(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, u: &DElem, k: u16, k2: u16) {
    rep.tick();
    let r = &ofa.ring;
    let b = &r.base;
    if ofa.pi(&ofa.dscale_k(u, k)) != r.scalar(k, &ofa.pi(u)) {
        rep.violation("pi(u.k) = k pi(u)", vec![wd(ofa, u), k.to_string()]);
    }
    if ofa.rho(&ofa.dscale_k(u, k)) != r.scalar(b.mul(k, k), &ofa.rho(u)) {
        rep.violation("rho(u.k) = k^2 rho(u)", vec![wd(ofa, u), k.to_string()]);
    }
    if ofa.dscale_k(&ofa.dscale_k(u, k), k2) != ofa.dscale_k(u, b.mul(k, k2)) {
        rep.violation("(u.k).k' = u.(kk')", vec![wd(ofa, u), k.to_string(), k2.to_string()]);
    }
    // u.(k+k') = u.k + phi(k'k rho(u)) + u.k'
    let lhs = ofa.dscale_k(u, b.add(k, k2));
    let mid = ofa.phi(&r.scalar(b.mul(k, k2), &ofa.rho(u)));
    let rhs = ofa.dadd(&ofa.dadd(&ofa.dscale_k(u, k), &mid), &ofa.dscale_k(u, k2));
    if lhs != rhs {
        rep.violation(
            "u.(k+k') = u.k + phi(kk' rho(u)) + u.k'",
            vec![wd(ofa, u), k.to_string(), k2.to_string()],
        );
    }
}

fn axioms_aug(ofa: &OddFormAlgebra, rep: &mut ReportBuilder, v: &DElem, k: u16, a: &Elem) {
    rep.tick();
    let r = &ofa.ring;
    // v ranges over phi(R) here, so membership must hold
    match ofa.aug_contains(v) {
        Ok(true) => {}
        Ok(false) => rep.violation("phi(a) in D", vec![wd(ofa, v)]),
        Err(_) => return,
    }
    if !r.is_zero(&ofa.pi(v)) {
        rep.violation("pi(v) = 0 for v in D", vec![wd(ofa, v)]);
    }
    // v.k = k^2 v
    if ofa.dscale_k(v, k) != ofa.kmul_aug(r.base.mul(k, k), v) {
        rep.violation("v.k = k^2 v on D", vec![wd(ofa, v), k.to_string()]);
    }
    // rho(kv) = k rho(v)
    if ofa.rho(&ofa.kmul_aug(k, v)) != r.scalar(k, &ofa.rho(v)) {
        rep.violation("rho(kv) = k rho(v)", vec![wd(ofa, v), k.to_string()]);
    }
    // (kv).a = k(v.a)
    if ofa.dscale(&ofa.kmul_aug(k, v), a) != ofa.kmul_aug(k, &ofa.dscale(v, a)) {
        rep.violation("(kv).a = k(v.a)", vec![wd(ofa, v), k.to_string(), wr(ofa, a)]);
    }
    // D closed under the semigroup action
    if let Ok(false) = ofa.aug_contains(&ofa.dscale(v, a)) {
        rep.violation("D closed under scaling", vec![wd(ofa, v), wr(ofa, a)]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CommRing;
    use std::sync::Arc;

    #[test]
    fn zero_algebra_passes() {
        let ofa = OddFormAlgebra::zero(Arc::new(CommRing::zmod(3).unwrap()));
        let rep = check_ofa_axioms(&ofa, 1);
        assert!(rep.ok(), "{:?}", rep.violations.first());
        assert!(rep.exhaustive);
    }

    #[test]
    fn base_max_passes() {
        for n in [2usize, 3, 4, 9] {
            let ofa = OddFormAlgebra::base_max(Arc::new(CommRing::zmod(n).unwrap())).unwrap();
            let rep = check_ofa_axioms(&ofa, 1);
            assert!(rep.ok(), "z/{n}: {:?}", rep.violations.first());
        }
    }
}
