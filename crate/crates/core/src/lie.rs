//! Systems of matrices closed under the symmetric bracket: simultaneous
//! strict upper-triangularization, failure certificates, lower central
//! series, and fast structural checks.
//!
//! The central fact the decision procedure rests on: a finite set of
//! matrices can be conjugated by a *single* permutation into strictly
//! upper-triangular form iff the union of their supports is acyclic.  One
//! direction is immediate (strictly upper supports only point "up" in the
//! vertex order); for the other, a deterministic topological order of the
//! union support supplies the permutation.
//!
//! When the union support has a cycle, the system is certified
//! non-triangularizable by an explicit bracket word: pick one generator per
//! cycle edge and nest them right-to-left.  Expanding the nested bracket
//! produces (among others) the product of the chosen generators in cycle
//! order, and since `⊕` is max — there is no cancellation — the closed walk
//! survives into a non-`eps` diagonal entry of the word's value.  A single
//! matrix with a non-`eps` diagonal entry is visibly not nilpotent, so the
//! certificate is checkable by anyone with a matrix multiplier.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::digraph::{CycleWitness, Relation, SupportDigraph};
use crate::matrix::{DimensionMismatch, Permutation, SuperMatrix};

/// Default bound on distinct elements per lower-central-series level.
pub const DEFAULT_LEVEL_CAP: usize = 10_000;

/// Default bound on the number of series levels to compute.
pub const DEFAULT_MAX_DEPTH: usize = 10;

/// Construction of a [`LieSystem`] failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("a system needs at least one generator")]
    Empty,
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
}

/// A bracket word could not be evaluated against a given system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word references generator g{}, but the system has {count}", index + 1)]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("power exponent must be at least 1")]
    ZeroExponent,
}

/// A bracket word written in the `(bracket ...)` text form was malformed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordParseError {
    #[error("unexpected end of word")]
    UnexpectedEnd,
    #[error("unexpected token `{0}`")]
    UnexpectedToken(String),
    #[error("trailing tokens after the word")]
    TrailingTokens,
    #[error("power exponent must be a positive integer, got `{0}`")]
    BadExponent(String),
}

/// An expression over the generators of a system, built from brackets,
/// sums, and powers.  Generator indices are 0-based in the API and printed
/// 1-based (`g1`, `g2`, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketWord {
    Generator(usize),
    Bracket(Box<BracketWord>, Box<BracketWord>),
    Sum(Vec<BracketWord>),
    Power(Box<BracketWord>, usize),
}

impl BracketWord {
    pub fn generator(index: usize) -> BracketWord {
        BracketWord::Generator(index)
    }

    pub fn bracket(left: BracketWord, right: BracketWord) -> BracketWord {
        BracketWord::Bracket(Box::new(left), Box::new(right))
    }

    /// Maximum bracket nesting: generators are depth 0, a bracket adds 1,
    /// sums and powers pass the maximum through.
    pub fn depth(&self) -> usize {
        match self {
            BracketWord::Generator(_) => 0,
            BracketWord::Bracket(l, r) => 1 + l.depth().max(r.depth()),
            BracketWord::Sum(ws) => ws.iter().map(BracketWord::depth).max().unwrap_or(0),
            BracketWord::Power(w, _) => w.depth(),
        }
    }

    /// Evaluates the word over a system's generators.  An empty sum is the
    /// zero matrix of the system's dimension.
    pub fn evaluate(&self, system: &LieSystem) -> Result<SuperMatrix, WordError> {
        match self {
            BracketWord::Generator(i) => {
                let count = system.generator_count();
                if *i >= count {
                    return Err(WordError::GeneratorOutOfRange { index: *i, count });
                }
                Ok(system.generators()[*i].clone())
            }
            BracketWord::Bracket(l, r) => {
                let lv = l.evaluate(system)?;
                let rv = r.evaluate(system)?;
                Ok(lv.bracket(&rv).expect("same system, same dimension"))
            }
            BracketWord::Sum(ws) => {
                let mut acc = SuperMatrix::zero(system.n());
                for w in ws {
                    let v = w.evaluate(system)?;
                    acc = acc.add(&v).expect("same system, same dimension");
                }
                Ok(acc)
            }
            BracketWord::Power(w, k) => {
                if *k == 0 {
                    return Err(WordError::ZeroExponent);
                }
                Ok(w.evaluate(system)?.pow(*k))
            }
        }
    }

    /// Parses the text form produced by `Display`:
    ///
    /// ```text
    /// word := gN | (bracket word word) | (sum word*) | (pow word N)
    /// ```
    pub fn parse(text: &str) -> Result<BracketWord, WordParseError> {
        let spaced = text.replace('(', " ( ").replace(')', " ) ");
        let tokens: Vec<&str> = spaced.split_whitespace().collect();
        let mut pos = 0usize;
        let word = Self::parse_at(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(WordParseError::TrailingTokens);
        }
        Ok(word)
    }

    fn parse_at(tokens: &[&str], pos: &mut usize) -> Result<BracketWord, WordParseError> {
        let tok = *tokens.get(*pos).ok_or(WordParseError::UnexpectedEnd)?;
        *pos += 1;
        if tok != "(" {
            return Self::parse_generator(tok);
        }
        let op = *tokens.get(*pos).ok_or(WordParseError::UnexpectedEnd)?;
        *pos += 1;
        let word = match op {
            "bracket" => {
                let l = Self::parse_at(tokens, pos)?;
                let r = Self::parse_at(tokens, pos)?;
                BracketWord::bracket(l, r)
            }
            "sum" => {
                let mut ws = Vec::new();
                while *tokens.get(*pos).ok_or(WordParseError::UnexpectedEnd)? != ")" {
                    ws.push(Self::parse_at(tokens, pos)?);
                }
                BracketWord::Sum(ws)
            }
            "pow" => {
                let w = Self::parse_at(tokens, pos)?;
                let exp_tok = *tokens.get(*pos).ok_or(WordParseError::UnexpectedEnd)?;
                *pos += 1;
                let k: usize = exp_tok
                    .parse()
                    .ok()
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| WordParseError::BadExponent(exp_tok.to_string()))?;
                BracketWord::Power(Box::new(w), k)
            }
            other => return Err(WordParseError::UnexpectedToken(other.to_string())),
        };
        let close = *tokens.get(*pos).ok_or(WordParseError::UnexpectedEnd)?;
        if close != ")" {
            return Err(WordParseError::UnexpectedToken(close.to_string()));
        }
        *pos += 1;
        Ok(word)
    }

    fn parse_generator(tok: &str) -> Result<BracketWord, WordParseError> {
        let index: Option<usize> = tok
            .strip_prefix('g')
            .and_then(|digits| digits.parse().ok())
            .filter(|&label: &usize| label >= 1)
            .map(|label: usize| label - 1);
        match index {
            Some(i) => Ok(BracketWord::Generator(i)),
            None => Err(WordParseError::UnexpectedToken(tok.to_string())),
        }
    }
}

impl fmt::Display for BracketWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketWord::Generator(i) => write!(f, "g{}", i + 1),
            BracketWord::Bracket(l, r) => write!(f, "(bracket {l} {r})"),
            BracketWord::Sum(ws) => {
                write!(f, "(sum")?;
                for w in ws {
                    write!(f, " {w}")?;
                }
                write!(f, ")")
            }
            BracketWord::Power(w, k) => write!(f, "(pow {w} {k})"),
        }
    }
}

/// The answer to "can all generators be made strictly upper triangular by
/// one permutation?", with evidence either way.
#[derive(Debug, Clone, PartialEq)]
pub enum TriangularizationOutcome {
    /// `permutation` relabels every generator into strictly upper form;
    /// `conjugated` are the relabelled generators in input order.
    Success {
        permutation: Permutation,
        conjugated: Vec<SuperMatrix>,
    },
    /// `cycle` is a directed cycle in the union support; `certificate`
    /// names one generator per cycle edge, nested right-to-left, and its
    /// value has a non-`eps` diagonal entry at the cycle's first vertex.
    Failure {
        cycle: CycleWitness,
        certificate: BracketWord,
        certificate_value: SuperMatrix,
    },
}

impl TriangularizationOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, TriangularizationOutcome::Success { .. })
    }
}

/// How a lower central series computation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesTermination {
    /// Level `index` is the first whose elements are all zero.
    Vanished { index: usize },
    /// All levels through `max_depth` were computed without vanishing.
    ReachedMaxDepth { max_depth: usize },
    /// Building level `level` exceeded `cap` distinct elements; that level
    /// is not included in the output.
    Truncated { level: usize, cap: usize },
}

/// The computed levels `D^0, D^1, ...` (each deduplicated, first-occurrence
/// order) plus how the computation stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerCentralSeries {
    pub levels: Vec<Vec<SuperMatrix>>,
    pub termination: SeriesTermination,
}

/// A pair of generators with walks in opposite directions between two
/// vertices: generator `first_gen` walks `from -> to`, generator
/// `second_gen` walks `to -> from`.  Concatenating the walks closes a cycle
/// in the union support, so no obstruction can coexist with a successful
/// triangularization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoWayObstruction {
    pub first_gen: usize,
    pub second_gen: usize,
    pub from: usize,
    pub to: usize,
}

/// One or more same-sized square matrices, treated as the generators of a
/// bracket-closed system.
#[derive(Debug, Clone, PartialEq)]
pub struct LieSystem {
    generators: Vec<SuperMatrix>,
}

impl LieSystem {
    /// Requires at least one generator, all of equal dimension.
    pub fn new(generators: Vec<SuperMatrix>) -> Result<LieSystem, SystemError> {
        let first = generators.first().ok_or(SystemError::Empty)?;
        let n = first.n();
        for g in &generators {
            if g.n() != n {
                return Err(SystemError::Dimension(DimensionMismatch {
                    left: n,
                    right: g.n(),
                }));
            }
        }
        Ok(LieSystem { generators })
    }

    pub fn n(&self) -> usize {
        self.generators[0].n()
    }

    pub fn generators(&self) -> &[SuperMatrix] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn into_generators(self) -> Vec<SuperMatrix> {
        self.generators
    }

    /// The `⊕`-fold of all generators.  Its support is the union of the
    /// generator supports, and it dominates every generator entrywise, so
    /// questions about "some generator walks here" reduce to questions
    /// about this single matrix.
    pub fn dominant_matrix(&self) -> SuperMatrix {
        let mut acc = SuperMatrix::zero(self.n());
        for g in &self.generators {
            acc = acc.add(g).expect("generators share dimension");
        }
        acc
    }

    /// The union of the generator supports.
    pub fn support(&self) -> SupportDigraph {
        self.dominant_matrix().support()
    }

    /// Conjugates every generator by the same permutation.
    pub fn conjugate(&self, perm: &Permutation) -> Result<LieSystem, DimensionMismatch> {
        let generators = self
            .generators
            .iter()
            .map(|g| g.conjugate(perm))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LieSystem { generators })
    }

    /// Decides simultaneous strict upper-triangularization.
    ///
    /// Success: the union support is acyclic; the deterministic topological
    /// order conjugates every generator strictly above the diagonal.
    ///
    /// Failure: the deterministic cycle witness is turned into a bracket
    /// certificate by choosing, for each cycle edge, the smallest generator
    /// index supporting that edge, and nesting the choices right-to-left.
    pub fn decide(&self) -> TriangularizationOutcome {
        match self.support().topological_order() {
            Ok(permutation) => {
                let conjugated = self
                    .generators
                    .iter()
                    .map(|g| g.conjugate(&permutation).expect("dimensions agree"))
                    .collect();
                TriangularizationOutcome::Success {
                    permutation,
                    conjugated,
                }
            }
            Err(err) => {
                let cycle = err.witness;
                let certificate = self.certificate_for_cycle(&cycle);
                let certificate_value = certificate
                    .evaluate(self)
                    .expect("certificate references existing generators");
                TriangularizationOutcome::Failure {
                    cycle,
                    certificate,
                    certificate_value,
                }
            }
        }
    }

    /// One generator per cycle edge (smallest index that supports the
    /// edge), nested right-to-left into a single bracket word; a lone edge
    /// (self-loop) certifies by the generator itself.
    fn certificate_for_cycle(&self, cycle: &CycleWitness) -> BracketWord {
        let vs = cycle.vertices();
        let k = vs.len();
        let picks: Vec<BracketWord> = (0..k)
            .map(|i| {
                let (u, v) = (vs[i], vs[(i + 1) % k]);
                let gen = self
                    .generators
                    .iter()
                    .position(|g| !g.get(u, v).is_eps())
                    .expect("cycle edge lies in the union support");
                BracketWord::Generator(gen)
            })
            .collect();
        let mut iter = picks.into_iter().rev();
        let mut word = iter.next().expect("a cycle has at least one edge");
        for left in iter {
            word = BracketWord::bracket(left, word);
        }
        word
    }

    /// Reference closure of the union support by naive fixpoint iteration:
    /// grow `R` with `R ∘ R0` and `R0 ∘ R` until stable, where `R0` is the
    /// edge set.  Quadratic and meant for cross-checking the fast
    /// closure, not for production use.
    pub fn support_closure_oracle(&self) -> Relation {
        let n = self.n();
        let base: Vec<(usize, usize)> = self.support().edges();
        let mut closure: HashSet<(usize, usize)> = base.iter().copied().collect();
        loop {
            let mut next = closure.clone();
            for &(u, v) in &closure {
                for &(x, y) in &base {
                    if v == x {
                        next.insert((u, y));
                    }
                    if y == u {
                        next.insert((x, v));
                    }
                }
            }
            if next.len() == closure.len() {
                break;
            }
            closure = next;
        }
        let mut rel = Relation::empty(n);
        for (u, v) in closure {
            rel.insert(u, v);
        }
        rel
    }

    /// Lower central series: `D^0` is the (deduplicated) generator set and
    /// `D^{k}` collects `[g, d]` over all generators `g` and all `d` in
    /// `D^{k-1}`, deduplicated in first-occurrence order.
    ///
    /// Stops at the first all-zero level (`Vanished`), after `max_depth`
    /// levels (`ReachedMaxDepth`), or as soon as a level under construction
    /// exceeds `cap` distinct elements (`Truncated`; the partial level is
    /// discarded).
    pub fn lower_central_series(&self, max_depth: usize, cap: usize) -> LowerCentralSeries {
        let mut levels: Vec<Vec<SuperMatrix>> = Vec::new();

        let mut current: Vec<SuperMatrix> = Vec::new();
        let mut seen: HashSet<SuperMatrix> = HashSet::new();
        for g in &self.generators {
            if seen.insert(g.clone()) {
                current.push(g.clone());
            }
        }

        for depth in 0.. {
            if current.len() > cap {
                return LowerCentralSeries {
                    levels,
                    termination: SeriesTermination::Truncated { level: depth, cap },
                };
            }
            let all_zero = current.iter().all(|m| *m == SuperMatrix::zero(self.n()));
            levels.push(current.clone());
            if all_zero {
                return LowerCentralSeries {
                    levels,
                    termination: SeriesTermination::Vanished { index: depth },
                };
            }
            if depth == max_depth {
                return LowerCentralSeries {
                    levels,
                    termination: SeriesTermination::ReachedMaxDepth { max_depth },
                };
            }

            let mut next: Vec<SuperMatrix> = Vec::new();
            let mut next_seen: HashSet<SuperMatrix> = HashSet::new();
            'build: for g in &self.generators {
                for d in &current {
                    let b = g.bracket(d).expect("dimensions agree");
                    if next_seen.insert(b.clone()) {
                        next.push(b);
                        if next.len() > cap {
                            break 'build;
                        }
                    }
                }
            }
            current = next;
        }
        unreachable!("the loop always returns");
    }

    /// Computes the series with the default depth and cap.
    pub fn lower_central_series_default(&self) -> LowerCentralSeries {
        self.lower_central_series(DEFAULT_MAX_DEPTH, DEFAULT_LEVEL_CAP)
    }

    /// Scans for a pair of generators with walks in opposite directions
    /// between two vertices (the same generator may serve both directions).
    /// Returns the lexicographically first hit in
    /// `(first_gen, second_gen, from, to)` order, or `None`.
    ///
    /// Sound but one-sided: any obstruction closes a cycle in the union
    /// support, so a successful triangularization implies none exists; a
    /// cycle that needs three or more generators is invisible to this scan.
    pub fn check_two_way_obstruction(&self) -> Option<TwoWayObstruction> {
        let n = self.n();
        let reach: Vec<Relation> = self
            .generators
            .iter()
            .map(|g| g.support().reachability())
            .collect();
        for (a, ra) in reach.iter().enumerate() {
            for (b, rb) in reach.iter().enumerate() {
                for from in 0..n {
                    for to in 0..n {
                        if ra.contains(from, to) && rb.contains(to, from) {
                            return Some(TwoWayObstruction {
                                first_gen: a,
                                second_gen: b,
                                from,
                                to,
                            });
                        }
                    }
                }
            }
        }
        None
    }
}
