//! Randomized verification suites, runnable from the CLI.
//!
//! Each suite draws a deterministic corpus from the given seed, checks one
//! family of algebraic or structural facts, and reports how many cases ran
//! and what failed (if anything).  The suites deliberately re-verify the
//! engine against independent reference computations — a brute-force walk
//! enumerator, a naive closure fixpoint — rather than against the fast
//! paths they exercise.

use crate::corpus::Corpus;
use crate::digraph::max_cycle_mean;
use crate::lie::{LieSystem, SeriesTermination, TriangularizationOutcome};
use crate::matrix::SuperMatrix;
use crate::scalar::{ExtReal, SuperScalar};

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const MAX_REPORTED: usize = 8;

struct Check {
    failures: Vec<String>,
    suppressed: usize,
}

impl Check {
    fn new() -> Check {
        Check {
            failures: Vec::new(),
            suppressed: 0,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            return;
        }
        if self.failures.len() < MAX_REPORTED {
            self.failures.push(describe());
        } else {
            self.suppressed += 1;
        }
    }

    fn finish(mut self, name: &'static str, cases: usize) -> SuiteReport {
        if self.suppressed > 0 {
            self.failures
                .push(format!("... and {} more failures", self.suppressed));
        }
        SuiteReport {
            name,
            cases,
            failures: self.failures,
        }
    }
}

/// Runs every suite; per-suite seeds are derived from `seed` so the whole
/// run replays bit-for-bit.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    vec![
        scalar_semiring_laws(seed),
        ghost_ideal(seed.wrapping_add(1)),
        matrix_semiring_laws(seed.wrapping_add(2)),
        nilpotency_equivalence(seed.wrapping_add(3)),
        bracket_identities(seed.wrapping_add(4)),
        walk_realization(seed.wrapping_add(5)),
        closure_oracle_agreement(seed.wrapping_add(6)),
        topological_order_validity(seed.wrapping_add(7)),
        triangularization_evidence(seed.wrapping_add(8)),
        success_round_trip(seed.wrapping_add(9)),
        series_termination(seed.wrapping_add(10)),
    ]
}

fn scalar_semiring_laws(seed: u64) -> SuiteReport {
    let mut corpus = Corpus::new(seed);
    let mut c = Check::new();
    let cases = 10_000;
    for i in 0..cases {
        let (x, y, z) = (corpus.scalar(), corpus.scalar(), corpus.scalar());
        c.check(x + y == y + x, || format!("case {i}: add not commutative"));
        c.check((x + y) + z == x + (y + z), || {
            format!("case {i}: add not associative")
        });
        c.check(x + x == x, || format!("case {i}: add not idempotent"));
        c.check(x + SuperScalar::EPS == x, || {
            format!("case {i}: eps not neutral")
        });
        c.check(x * y == y * x, || format!("case {i}: mul not commutative"));
        c.check((x * y) * z == x * (y * z), || {
            format!("case {i}: mul not associative")
        });
        c.check(x * SuperScalar::ONE == x, || {
            format!("case {i}: one not neutral")
        });
        c.check(x * SuperScalar::EPS == SuperScalar::EPS, || {
            format!("case {i}: eps not absorbing")
        });
        c.check(x * (y + z) == x * y + x * z, || {
            format!("case {i}: mul does not distribute")
        });
    }
    c.finish("scalar-semiring-laws", cases)
}

fn ghost_ideal(seed: u64) -> SuiteReport {
    let mut corpus = Corpus::new(seed);
    let mut c = Check::new();
    let cases = 10_000;
    c.check(
        SuperScalar::I * SuperScalar::I == SuperScalar::ONE,
        || "the ghost unit squared must be the multiplicative unit".to_string(),
    );
    let random_ghost = |corpus: &mut Corpus| match corpus.ext_real().value() {
        Some(v) => SuperScalar::ghost(v),
        None => SuperScalar::EPS, // eps lies in the ghost ideal
    };
    for i in 0..cases {
        let g = random_ghost(&mut corpus);
        let g2 = random_ghost(&mut corpus);
        let x = corpus.scalar();
        c.check((g * x).is_ghost(), || {
            format!("case {i}: ghost ideal not absorbing under mul ({g} * {x})")
        });
        c.check((g + g2).is_ghost(), || {
            format!("case {i}: ghosts not closed under add")
        });
        let (a, b) = (corpus.nonzero_scalar(), corpus.nonzero_scalar());
        c.check(!(a * b).is_eps(), || {
            format!("case {i}: zero divisors found ({a} * {b})")
        });
        if let Some(v) = corpus.ext_real().value() {
            c.check(
                SuperScalar::real(v) + SuperScalar::ghost(v) == SuperScalar::ghost(v),
                || format!("case {i}: ghost does not absorb its own magnitude"),
            );
        }
    }
    c.finish("ghost-ideal", cases)
}

fn matrix_semiring_laws(seed: u64) -> SuiteReport {
    let mut corpus = Corpus::new(seed);
    let mut c = Check::new();
    let cases = 300;
    for i in 0..cases {
        let n = 1 + i % 5;
        let a = corpus.matrix(n, 0.5);
        let b = corpus.matrix(n, 0.5);
        let d = corpus.matrix(n, 0.5);
        let ab = a.mul(&b).unwrap();
        c.check(
            ab.mul(&d).unwrap() == a.mul(&b.mul(&d).unwrap()).unwrap(),
            || format!("case {i}: product not associative at n={n}"),
        );
        c.check(
            a.mul(&b.add(&d).unwrap()).unwrap()
                == ab.add(&a.mul(&d).unwrap()).unwrap(),
            || format!("case {i}: product does not distribute at n={n}"),
        );
        c.check(
            a.mul(&SuperMatrix::identity(n)).unwrap() == a,
            || format!("case {i}: identity not neutral at n={n}"),
        );
        c.check(
            a.mul(&SuperMatrix::zero(n)).unwrap() == SuperMatrix::zero(n),
            || format!("case {i}: zero not absorbing at n={n}"),
        );
    }
    c.finish("matrix-semiring-laws", cases)
}

fn nilpotency_equivalence(seed: u64) -> SuiteReport {
    let mut corpus = Corpus::new(seed);
    let mut c = Check::new();
    let cases = 600;
    for i in 0..cases {
        let n = 2 + i % 5;
        let density = 0.1 + 0.8 * (i % 9) as f64 / 8.0;
        let a = corpus.matrix(n, density);
        let support = a.support();
        let nilpotent = a.is_nilpotent();
        let acyclic = support.find_cycle().is_none();
        let mean_eps = max_cycle_mean(&a) == ExtReal::EPS;
        let sortable = support.topological_order().is_ok();
        c.check(nilpotent == acyclic, || {
            format!("case {i}: power test and cycle search disagree at n={n}")
        });
        c.check(nilpotent == mean_eps, || {
            format!("case {i}: power test and cycle mean disagree at n={n}")
        });
        c.check(nilpotent == sortable, || {
            format!("case {i}: power test and topological order disagree at n={n}")
        });
    }
    c.finish("nilpotency-equivalence", cases)
}

fn bracket_identities(seed: u64) -> SuiteReport {
    let mut corpus = Corpus::new(seed);
    let mut c = Check::new();
    let cases = 300;
    for i in 0..cases {
        let n = 1 + i % 5;
        let a = corpus.matrix(n, 0.5);
        let b = corpus.matrix(n, 0.5);
        c.check(a.bracket(&a).unwrap() == a.pow(2), || {
            format!("case {i}: [A,A] differs from A^2 at n={n}")
        });
        c.check(a.bracket(&b).unwrap() == b.bracket(&a).unwrap(), || {
            format!("case {i}: bracket not symmetric at n={n}")
        });
        for k in 1..=3 {
            c.check(a.bracket(&a.pow(k)).unwrap() == a.pow(k + 1), || {
                format!("case {i}: [A,A^{k}] differs from A^{} at n={n}", k + 1)
            });
        }
    }
    c.finish("bracket-identities", cases)
}

/// `⊕` over every walk of exactly `len` edges from `from` to `to`, each
/// weighted by the `⊗`-product of its edges.  Exponential and only for
/// cross-checking small powers.
fn walk_value(a: &SuperMatrix, from: usize, to: usize, len: usize) -> SuperScalar {
    if len == 0 {
        return if from == to {
            SuperScalar::ONE
        } else {
            SuperScalar::EPS
        };
    }
    let mut acc = SuperScalar::EPS;
    for mid in 0..a.n() {
        let head = a.get(from, mid);
        if head.is_eps() {
            continue;
        }
        acc = acc + head * walk_value(a, mid, to, len - 1);
    }
    acc
}

fn walk_realization(seed: u64) -> SuiteReport {
    let mut corpus = Corpus::new(seed);
    let mut c = Check::new();
    let cases = 150;
    for i in 0..cases {
        let n = 1 + i % 4;
        let a = corpus.matrix(n, 0.55);
        for k in 1..=n {
            let p = a.pow(k);
            for from in 0..n {
                for to in 0..n {
                    c.check(p.get(from, to) == walk_value(&a, from, to, k), || {
                        format!(
                            "case {i}: A^{k} entry ({},{}) differs from walk \
                             enumeration at n={n}",
                            from + 1,
                            to + 1
                        )
                    });
                }
            }
        }
    }
    c.finish("walk-realization", cases)
}

fn closure_oracle_agreement(seed: u64) -> SuiteReport {
    let mut corpus = Corpus::new(seed);
    let mut c = Check::new();
    let cases = 300;
    for i in 0..cases {
        let n = 1 + i % 5;
        let sys = corpus.system(n, 1 + i % 3, 0.4);
        let fast = sys.support().reachability();
        let slow = sys.support_closure_oracle();
        c.check(fast == slow, || {
            format!("case {i}: fast closure disagrees with the fixpoint oracle at n={n}")
        });
    }
    c.finish("closure-oracle-agreement", cases)
}

fn topological_order_validity(seed: u64) -> SuiteReport {
    let mut corpus = Corpus::new(seed);
    let mut c = Check::new();
    let cases = 300;
    for i in 0..cases {
        let n = 1 + i % 7;
        let a = corpus.matrix(n, 0.25);
        let g = a.support();
        match g.topological_order() {
            Ok(perm) => {
                c.check(
                    g.edges().iter().all(|&(u, v)| perm.apply(u) < perm.apply(v)),
                    || format!("case {i}: order does not sort every edge at n={n}"),
                );
                let again = g.topological_order().unwrap();
                c.check(perm.as_slice() == again.as_slice(), || {
                    format!("case {i}: repeated ordering differs at n={n}")
                });
            }
            Err(err) => {
                c.check(err.witness.is_valid_for(&g), || {
                    format!("case {i}: cycle witness invalid at n={n}")
                });
            }
        }
    }
    c.finish("topological-order-validity", cases)
}

fn triangularization_evidence(seed: u64) -> SuiteReport {
    let mut corpus = Corpus::new(seed);
    let mut c = Check::new();
    let cases = 400;
    for i in 0..cases {
        let n = 1 + i % 6;
        let gens = 1 + i % 4;
        let density = 0.15 + 0.45 * (i % 7) as f64 / 6.0;
        let sys = corpus.system(n, gens, density);
        match sys.decide() {
            TriangularizationOutcome::Success {
                permutation,
                conjugated,
            } => {
                for (g, conj) in sys.generators().iter().zip(&conjugated) {
                    c.check(conj.is_strictly_upper(), || {
                        format!("case {i}: conjugated generator not strictly upper at n={n}")
                    });
                    c.check(&g.conjugate(&permutation).unwrap() == conj, || {
                        format!("case {i}: reported conjugate mismatches at n={n}")
                    });
                }
                c.check(sys.check_two_way_obstruction().is_none(), || {
                    format!("case {i}: obstruction coexists with success at n={n}")
                });
                c.check(sys.dominant_matrix().is_nilpotent(), || {
                    format!("case {i}: dominant matrix of a success is not nilpotent at n={n}")
                });
            }
            TriangularizationOutcome::Failure {
                cycle,
                certificate,
                certificate_value,
            } => {
                c.check(cycle.is_valid_for(&sys.support()), || {
                    format!("case {i}: failure cycle invalid at n={n}")
                });
                c.check(
                    certificate.evaluate(&sys).unwrap() == certificate_value,
                    || format!("case {i}: certificate value mismatch at n={n}"),
                );
                let v0 = cycle.vertices()[0];
                c.check(!certificate_value.get(v0, v0).is_eps(), || {
                    format!("case {i}: certificate diagonal vanishes at n={n}")
                });
                c.check(!certificate_value.is_nilpotent(), || {
                    format!("case {i}: certificate value is nilpotent at n={n}")
                });
                c.check(!sys.dominant_matrix().is_nilpotent(), || {
                    format!("case {i}: dominant matrix of a failure is nilpotent at n={n}")
                });
            }
        }
    }
    c.finish("triangularization-evidence", cases)
}

fn success_round_trip(seed: u64) -> SuiteReport {
    let mut corpus = Corpus::new(seed);
    let mut c = Check::new();
    let cases = 200;
    for i in 0..cases {
        let n = 2 + i % 5;
        let gens = 1 + i % 3;
        let sys = corpus.success_system(n, gens, 0.5);
        match sys.decide() {
            TriangularizationOutcome::Success { conjugated, .. } => {
                let conj_sys = LieSystem::new(conjugated).unwrap();
                let word = corpus.bracket_word(gens, 3);
                let value = word.evaluate(&conj_sys).unwrap();
                c.check(value.is_strictly_upper(), || {
                    format!("case {i}: word value not strictly upper after conjugation at n={n}")
                });
                let original = word.evaluate(&sys).unwrap();
                c.check(original.is_nilpotent(), || {
                    format!("case {i}: word value over a triangularizable system not nilpotent at n={n}")
                });
            }
            TriangularizationOutcome::Failure { .. } => {
                c.check(false, || {
                    format!("case {i}: constructed success system failed to triangularize at n={n}")
                });
            }
        }
    }
    c.finish("success-round-trip", cases)
}

fn series_termination(seed: u64) -> SuiteReport {
    let mut corpus = Corpus::new(seed);
    let mut c = Check::new();
    let cases = 200;
    for i in 0..cases {
        let n = 2 + i % 5;
        let sys = corpus.success_system(n, 1 + i % 3, 0.5);
        let series = sys.lower_central_series_default();
        match series.termination {
            SeriesTermination::Vanished { index } => {
                c.check(index < n, || {
                    format!("case {i}: series for n={n} vanished only at index {index}")
                });
            }
            other => {
                c.check(false, || {
                    format!("case {i}: series did not vanish at n={n}: {other:?}")
                });
            }
        }
    }
    c.finish("series-termination", cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for report in run_all(0xACE5) {
            assert!(
                report.passed(),
                "suite {} failed: {:?}",
                report.name,
                report.failures
            );
            assert!(report.cases > 0);
        }
    }

    #[test]
    fn runs_are_reproducible() {
        assert_eq!(run_all(7), run_all(7));
    }

    #[test]
    fn suite_names_are_unique() {
        let reports = run_all(1);
        let mut names: Vec<_> = reports.iter().map(|r| r.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), reports.len());
    }
}
