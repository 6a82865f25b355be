//! Axiom-check reports with exhaustive or seeded-sample tuple iteration.
//!
//! Each checker walks universally quantified laws over tuple spaces. Spaces
//! of at most `EXHAUSTIVE_TUPLE_BUDGET` tuples are checked completely; larger
//! ones are covered by a deterministic pseudorandom sample, so reports are
//! reproducible for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXHAUSTIVE_TUPLE_BUDGET: u64 = 1 << 20;
pub const SAMPLE_TUPLES: u64 = 100_000;
const MAX_STORED: usize = 64;

/// A single violated law with a minimal witness tuple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub law: String,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub checked: u64,
    pub exhaustive: bool,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }

    pub fn merge(mut self, other: Report) -> Report {
        self.violations.extend(other.violations);
        self.violations.sort();
        self.violations.dedup();
        self.violations.truncate(MAX_STORED);
        self.violation_count += other.violation_count;
        self.checked += other.checked;
        self.exhaustive &= other.exhaustive;
        self
    }
}

pub struct ReportBuilder {
    violations: Vec<Violation>,
    violation_count: u64,
    checked: u64,
    exhaustive: bool,
    rng: ChaCha8Rng,
}

impl ReportBuilder {
    pub fn new(_exhaustive_hint: bool, seed: u64) -> ReportBuilder {
        ReportBuilder {
            violations: Vec::new(),
            violation_count: 0,
            checked: 0,
            exhaustive: true,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn violation(&mut self, law: &str, witness: Vec<String>) {
        self.violation_count += 1;
        if self.violations.len() < MAX_STORED {
            self.violations.push(Violation { law: law.to_string(), witness });
        }
    }

    pub fn singles(&mut self, n: u64, mut f: impl FnMut(&mut ReportBuilder, u64)) {
        if n <= EXHAUSTIVE_TUPLE_BUDGET {
            for a in 0..n {
                f(self, a);
                self.checked += 1;
            }
        } else {
            self.exhaustive = false;
            for _ in 0..SAMPLE_TUPLES {
                let a = self.rng.gen_range(0..n);
                f(self, a);
                self.checked += 1;
            }
        }
    }

    pub fn pairs(&mut self, na: u64, nb: u64, mut f: impl FnMut(&mut ReportBuilder, u64, u64)) {
        if na == 0 || nb == 0 {
            return;
        }
        if na.saturating_mul(nb) <= EXHAUSTIVE_TUPLE_BUDGET {
            for a in 0..na {
                for b in 0..nb {
                    f(self, a, b);
                    self.checked += 1;
                }
            }
        } else {
            self.exhaustive = false;
            for _ in 0..SAMPLE_TUPLES {
                let a = self.rng.gen_range(0..na);
                let b = self.rng.gen_range(0..nb);
                f(self, a, b);
                self.checked += 1;
            }
        }
    }

    pub fn triples(
        &mut self,
        na: u64,
        nb: u64,
        nc: u64,
        mut f: impl FnMut(&mut ReportBuilder, u64, u64, u64),
    ) {
        if na == 0 || nb == 0 || nc == 0 {
            return;
        }
        if na.saturating_mul(nb).saturating_mul(nc) <= EXHAUSTIVE_TUPLE_BUDGET {
            for a in 0..na {
                for b in 0..nb {
                    for c in 0..nc {
                        f(self, a, b, c);
                        self.checked += 1;
                    }
                }
            }
        } else {
            self.exhaustive = false;
            for _ in 0..SAMPLE_TUPLES {
                let a = self.rng.gen_range(0..na);
                let b = self.rng.gen_range(0..nb);
                let c = self.rng.gen_range(0..nc);
                f(self, a, b, c);
                self.checked += 1;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn quads(
        &mut self,
        na: u64,
        nb: u64,
        nc: u64,
        nd: u64,
        mut f: impl FnMut(&mut ReportBuilder, u64, u64, u64, u64),
    ) {
        if na == 0 || nb == 0 || nc == 0 || nd == 0 {
            return;
        }
        let total = na
            .saturating_mul(nb)
            .saturating_mul(nc)
            .saturating_mul(nd);
        if total <= EXHAUSTIVE_TUPLE_BUDGET {
            for a in 0..na {
                for b in 0..nb {
                    for c in 0..nc {
                        for d in 0..nd {
                            f(self, a, b, c, d);
                            self.checked += 1;
                        }
                    }
                }
            }
        } else {
            self.exhaustive = false;
            for _ in 0..SAMPLE_TUPLES {
                let a = self.rng.gen_range(0..na);
                let b = self.rng.gen_range(0..nb);
                let c = self.rng.gen_range(0..nc);
                let d = self.rng.gen_range(0..nd);
                f(self, a, b, c, d);
                self.checked += 1;
            }
        }
    }

    /// Deterministic random stream for checkers sampling structured carriers
    /// directly (matrix entries, delta components).
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn mark_sampled(&mut self) {
        self.exhaustive = false;
    }

    pub fn tick(&mut self) {
        self.checked += 1;
    }

    pub fn finish(mut self) -> Report {
        self.violations.sort();
        self.violations.dedup();
        Report {
            violations: self.violations,
            violation_count: self.violation_count,
            checked: self.checked,
            exhaustive: self.exhaustive,
        }
    }
}
