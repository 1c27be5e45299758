//! Seeded random inputs: matrices, systems, permutations, bracket words.
//!
//! Everything flows from one ChaCha stream, so a `Corpus` with a given seed
//! replays the same sequence on every platform — the randomized suites in
//! [`crate::selftest`] and the test corpus both rely on that.  Entry values
//! are small integers, which keeps products exact and printed output short.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lie::{BracketWord, LieSystem};
use crate::matrix::{Permutation, SuperMatrix};
use crate::scalar::{ExtReal, SuperScalar};

const VALUE_RANGE: std::ops::RangeInclusive<i64> = -20..=20;

/// A deterministic stream of random algebra inputs.
pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Corpus {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn value(&mut self) -> f64 {
        self.rng.gen_range(VALUE_RANGE) as f64
    }

    /// `eps` one time in five, otherwise a small integer.
    pub fn ext_real(&mut self) -> ExtReal {
        if self.rng.gen_bool(0.2) {
            ExtReal::EPS
        } else {
            ExtReal::finite(self.value())
        }
    }

    /// A scalar of any form: mostly pure values, some ghosts, some mixed
    /// pairs (which may collapse to `eps`).
    pub fn scalar(&mut self) -> SuperScalar {
        let roll: f64 = self.rng.gen();
        if roll < 0.55 {
            SuperScalar::real(self.value())
        } else if roll < 0.80 {
            SuperScalar::ghost(self.value())
        } else {
            SuperScalar::new(self.ext_real(), self.ext_real())
        }
    }

    /// Like [`Corpus::scalar`], but never `eps`.
    pub fn nonzero_scalar(&mut self) -> SuperScalar {
        loop {
            let s = self.scalar();
            if !s.is_eps() {
                return s;
            }
        }
    }

    /// Each entry is non-`eps` with probability `density`.
    pub fn matrix(&mut self, n: usize, density: f64) -> SuperMatrix {
        let mut m = SuperMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                if self.rng.gen_bool(density) {
                    m.set(i, j, self.nonzero_scalar());
                }
            }
        }
        m
    }

    /// Random matrix with support only above the diagonal.
    pub fn strictly_upper(&mut self, n: usize, density: f64) -> SuperMatrix {
        let mut m = SuperMatrix::zero(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if self.rng.gen_bool(density) {
                    m.set(i, j, self.nonzero_scalar());
                }
            }
        }
        m
    }

    /// Uniform random permutation (Fisher-Yates).
    pub fn permutation(&mut self, n: usize) -> Permutation {
        let mut map: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.rng.gen_range(0..=i);
            map.swap(i, j);
        }
        Permutation::from_map(map).expect("shuffle of the identity")
    }

    /// A system of unconstrained random generators.
    pub fn system(&mut self, n: usize, generators: usize, density: f64) -> LieSystem {
        assert!(generators >= 1);
        let gens = (0..generators).map(|_| self.matrix(n, density)).collect();
        LieSystem::new(gens).expect("at least one generator")
    }

    /// A system guaranteed to triangularize: strictly upper generators all
    /// scrambled by one shared permutation, so the union support is acyclic
    /// by construction.
    pub fn success_system(&mut self, n: usize, generators: usize, density: f64) -> LieSystem {
        assert!(generators >= 1);
        let hide = self.permutation(n);
        let gens = (0..generators)
            .map(|_| {
                self.strictly_upper(n, density)
                    .conjugate(&hide)
                    .expect("same dimension")
            })
            .collect();
        LieSystem::new(gens).expect("at least one generator")
    }

    /// A random word over `generator_count` generators with bracket nesting
    /// at most `max_depth`.
    pub fn bracket_word(&mut self, generator_count: usize, max_depth: usize) -> BracketWord {
        assert!(generator_count >= 1);
        if max_depth == 0 {
            return BracketWord::Generator(self.rng.gen_range(0..generator_count));
        }
        let roll: f64 = self.rng.gen();
        if roll < 0.35 {
            BracketWord::Generator(self.rng.gen_range(0..generator_count))
        } else if roll < 0.75 {
            BracketWord::bracket(
                self.bracket_word(generator_count, max_depth - 1),
                self.bracket_word(generator_count, max_depth - 1),
            )
        } else if roll < 0.90 {
            let len = self.rng.gen_range(1..=3);
            BracketWord::Sum(
                (0..len)
                    .map(|_| self.bracket_word(generator_count, max_depth - 1))
                    .collect(),
            )
        } else {
            let exponent = self.rng.gen_range(1..=3);
            BracketWord::Power(
                Box::new(self.bracket_word(generator_count, max_depth - 1)),
                exponent,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_seeds_replay_equal_streams() {
        let mut a = Corpus::new(42);
        let mut b = Corpus::new(42);
        for _ in 0..5 {
            assert_eq!(a.matrix(4, 0.5), b.matrix(4, 0.5));
        }
        assert_eq!(a.bracket_word(3, 3), b.bracket_word(3, 3));
        let mut c = Corpus::new(43);
        let (x, y) = (a.matrix(4, 0.5), c.matrix(4, 0.5));
        assert_ne!(x, y, "different seeds should diverge");
    }

    #[test]
    fn density_extremes() {
        let mut corpus = Corpus::new(1);
        let full = corpus.matrix(5, 1.0);
        for i in 0..5 {
            for j in 0..5 {
                assert!(!full.get(i, j).is_eps());
            }
        }
        assert_eq!(corpus.matrix(5, 0.0), SuperMatrix::zero(5));
    }

    #[test]
    fn strictly_upper_is_strictly_upper() {
        let mut corpus = Corpus::new(2);
        for _ in 0..20 {
            assert!(corpus.strictly_upper(6, 0.8).is_strictly_upper());
        }
    }

    #[test]
    fn success_systems_triangularize() {
        let mut corpus = Corpus::new(3);
        for _ in 0..30 {
            let sys = corpus.success_system(5, 3, 0.6);
            assert!(sys.decide().is_success());
        }
    }

    #[test]
    fn bracket_words_respect_the_depth_bound_and_evaluate() {
        let mut corpus = Corpus::new(4);
        let sys = corpus.system(3, 2, 0.5);
        for _ in 0..50 {
            let w = corpus.bracket_word(2, 3);
            assert!(w.depth() <= 3);
            assert_eq!(w.evaluate(&sys).unwrap().n(), 3);
        }
    }

    #[test]
    fn permutations_are_valid() {
        let mut corpus = Corpus::new(5);
        for _ in 0..20 {
            let p = corpus.permutation(7);
            assert_eq!(p.n(), 7);
            let mut seen = [false; 7];
            for i in 0..7 {
                seen[p.apply(i)] = true;
            }
            assert!(seen.iter().all(|&b| b));
        }
    }
}
